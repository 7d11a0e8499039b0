#include "vlcqos/numeric.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cstdint>
#include <stdexcept>

namespace vlcqos::numeric {

double log_sum_exp(std::span<const double> terms) {
  if (terms.empty()) return -std::numeric_limits<double>::infinity();
  const double hi = *std::max_element(terms.begin(), terms.end());
  if (!std::isfinite(hi)) return hi;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - hi);
  return hi + std::log(sum);
}

double log_mix_exp(double p, double x) {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return -x;
  if (x < 1.0) return std::log1p(p * std::expm1(-x));
  return log_add_exp(std::log(p) - x, std::log1p(-p));
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
  if (n < 2 || !(lo > 0.0) || !(hi > lo)) {
    throw std::invalid_argument("logspace: need n >= 2 and 0 < lo < hi");
  }
  std::vector<double> out(n);
  const double a = std::log(lo);
  const double step = (std::log(hi) - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(a + step * static_cast<double>(i));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2 || !(hi > lo)) {
    throw std::invalid_argument("linspace: need n >= 2 and lo < hi");
  }
  std::vector<double> out(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

namespace {

int brent_bits(double width, double x_tolerance, double x_scale) {
  // Brent's bracketing precision is relative to |x| and capped near half the
  // mantissa because the objective is flat (quadratic) at an interior extremum.
  const double rel = x_tolerance / std::max(std::abs(x_scale), width);
  const int bits = static_cast<int>(std::ceil(-std::log2(std::max(rel, 1e-300)))) + 2;
  return std::clamp(bits, 8, std::numeric_limits<double>::digits / 2);
}

ScalarExtremum refine_min_impl(const std::function<double(double)>& f,
                               std::span<const double> grid,
                               std::span<const double> values,
                               double x_tolerance) {
  if (grid.empty() || grid.size() != values.size()) {
    throw std::invalid_argument("refine_min: grid and values must be non-empty and aligned");
  }
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (values[i] < best_value) {
      best_value = values[i];
      best = i;
    }
  }
  ScalarExtremum result{grid[best], best_value};
  if (grid.size() < 2 || !std::isfinite(best_value)) return result;

  const double lo = grid[best == 0 ? 0 : best - 1];
  const double hi = grid[std::min(best + 1, grid.size() - 1)];
  if (!(hi > lo)) return result;

  std::uintmax_t max_iter = 200;
  const auto [x, v] = boost::math::tools::brent_find_minima(
      [&f](double z) {
        const double value = f(z);
        return std::isnan(value) ? std::numeric_limits<double>::infinity() : value;
      },
      lo, hi, brent_bits(hi - lo, x_tolerance, grid[best]), max_iter);
  if (v < result.value) result = {x, v};
  return result;
}

ScalarExtremum grid_refine_min_impl(const std::function<double(double)>& f,
                                    std::span<const double> grid,
                                    double x_tolerance) {
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = f(grid[i]);
  return refine_min_impl(f, grid, values, x_tolerance);
}

}  // namespace

ScalarExtremum refine_min(const std::function<double(double)>& f,
                          std::span<const double> grid,
                          std::span<const double> values, double x_tolerance) {
  return refine_min_impl(f, grid, values, x_tolerance);
}

ScalarExtremum grid_refine_min(const std::function<double(double)>& f,
                               std::span<const double> grid,
                               double x_tolerance) {
  return grid_refine_min_impl(f, grid, x_tolerance);
}

ScalarExtremum grid_refine_max(const std::function<double(double)>& f,
                               std::span<const double> grid,
                               double x_tolerance) {
  auto neg = [&f](double x) {
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : -v;
  };
  const auto r = grid_refine_min_impl(neg, grid, x_tolerance);
  return {r.x, -r.value};
}

double bracketed_root(const std::function<double(double)>& f, double lo,
                      double hi, double relative_tolerance) {
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw std::domain_error("bracketed_root: endpoints do not bracket a root");
  }
  std::uintmax_t max_iter = 500;
  auto tol = [relative_tolerance](double a, double b) {
    return std::abs(b - a) <= relative_tolerance * std::max(std::abs(a), std::abs(b));
  };
  const auto [a, b] =
      boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, max_iter);
  return 0.5 * (a + b);
}

Quadrature integrate_estimate(const std::function<double(double)>& f, double a,
                              double b, double relative_tolerance, unsigned max_depth) {
  if (!(b > a)) return {0.0, 0.0};
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, max_depth, relative_tolerance, &error, &l1);
  return {value, error};
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double relative_tolerance, double absolute_floor) {
  const auto r = integrate_estimate(f, a, b, relative_tolerance);
  if (!std::isfinite(r.value) ||
      r.error > relative_tolerance * std::abs(r.value) + absolute_floor) {
    throw std::runtime_error("integrate: quadrature did not converge");
  }
  return r.value;
}

}  // namespace vlcqos::numeric
