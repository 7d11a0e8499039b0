#ifndef VLCQOS_NUMERIC_HPP
#define VLCQOS_NUMERIC_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace vlcqos::numeric {

/// ln(e^a + e^b) without overflow. Either argument may be -inf.
inline double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

/// ln(sum_i e^{x_i}) shifted by the maximum term.
double log_sum_exp(std::span<const double> terms);

/// ln(p * e^{-x} + (1 - p)) for p in [0, 1], x >= 0.
///
/// The two-point mixture shows up in every service-side log-MGF. Small x goes
/// through log1p/expm1 so that the first-order term -p*x keeps full relative
/// precision; large x goes through log_add_exp.
double log_mix_exp(double p, double x);

/// `n` points log-spaced on [lo, hi], both endpoints included. n >= 2, 0 < lo < hi.
std::vector<double> logspace(double lo, double hi, std::size_t n);

/// `n` points evenly spaced on [lo, hi], both endpoints included.
std::vector<double> linspace(double lo, double hi, std::size_t n);

struct ScalarExtremum {
  double x;
  double value;
};

/// Maximizes `f` over the grid, then refines with a bracketed Brent search
/// between the neighbours of the best grid point. The returned value is never
/// worse than the best grid value.
ScalarExtremum grid_refine_max(const std::function<double(double)>& f,
                               std::span<const double> grid,
                               double x_tolerance);

/// Refines a minimum when the grid values are already known. `values[i]`
/// must equal f(grid[i]).
ScalarExtremum refine_min(const std::function<double(double)>& f,
                          std::span<const double> grid,
                          std::span<const double> values, double x_tolerance);

/// Minimizing counterpart of grid_refine_max.
ScalarExtremum grid_refine_min(const std::function<double(double)>& f,
                               std::span<const double> grid,
                               double x_tolerance);

/// Root of a continuous `f` with f(lo) and f(hi) of opposite sign.
/// Throws std::domain_error if the bracket is invalid.
double bracketed_root(const std::function<double(double)>& f, double lo,
                      double hi, double relative_tolerance = 1e-14);

struct Quadrature {
  double value;
  double error;  // absolute error estimate
};

/// Adaptive Gauss-Kronrod integral with its error estimate; never throws on
/// accuracy. Subdivision stops at `max_depth` bisections.
Quadrature integrate_estimate(const std::function<double(double)>& f, double a,
                              double b, double relative_tolerance,
                              unsigned max_depth = 12);

/// Adaptive Gauss-Kronrod integral of a smooth integrand on [a, b].
/// Throws std::runtime_error when the error estimate misses the tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double relative_tolerance, double absolute_floor = 1e-14);

}  // namespace vlcqos::numeric

#endif  // VLCQOS_NUMERIC_HPP
