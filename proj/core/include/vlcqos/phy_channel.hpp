#ifndef VLCQOS_PHY_CHANNEL_HPP
#define VLCQOS_PHY_CHANNEL_HPP

#include <cmath>
#include <numbers>

namespace vlcqos::phy {

/// Achievable-rate constant for exponentially distributed light intensity.
inline const double kExponentialIntensityConstant =
    std::sqrt(std::numbers::e / (2.0 * std::numbers::pi));

/// Physical-layer constants of a single downward-facing LED access point and an
/// upward-facing photodiode. Angles are stored in degrees; rates derived from it
/// are in bits per frame.
struct PhyConfig {
  double half_intensity_angle_deg = 60.0;
  double fov_deg = 90.0;
  double pd_area_m2 = 1e-4;
  double bandwidth_hz = 40e6;
  double responsivity_a_per_w = 0.53;
  double refractive_index = 1.5;
  double filter_gain = 1.0;
  double noise_psd_a2_per_hz = 1e-21;
  double vertical_distance_m = 3.0;
  double cell_radius_m = 3.0;
  double frame_duration_s = 1e-3;
  double avg_power_w = 0.2;
  double intensity_constant = kExponentialIntensityConstant;
  double opt_elec_ratio = 3.0;

  /// Throws std::invalid_argument naming the first offending field.
  void validate() const;

  /// sigma_n^2 = N0 * B.
  double noise_power() const { return noise_psd_a2_per_hz * bandwidth_hz; }
};

/// Supported fixed-rate interval, cell edge to cell centre.
struct RateInterval {
  double rho_min;
  double rho_max;
};

/// Horizontal distance within which a fixed rate is decodable, or the marker
/// that no position in the cell supports it.
class OutageRadius {
 public:
  static OutageRadius finite(double meters) { return OutageRadius(meters, false); }
  static OutageRadius never_on() { return OutageRadius(0.0, true); }

  bool is_never_on() const { return never_on_; }
  /// Only meaningful when !is_never_on().
  double meters() const { return meters_; }

 private:
  OutageRadius(double m, bool never) : meters_(m), never_on_(never) {}
  double meters_;
  bool never_on_;
};

/// m = -1 / log2(cos(phi_1/2)). Throws std::domain_error outside (0, 90) degrees.
double lambertian_index(double half_intensity_angle_deg);

/// Concentrator gain n^2 / sin^2(psi_C); constant inside the FOV.
double concentrator_gain(const PhyConfig& cfg);

/// Lambertian LOS gain at horizontal distance d_h in [0, d_c].
double channel_gain(const PhyConfig& cfg, double horizontal_distance_m);

/// channel_gain parameterised by the squared horizontal distance d_h^2.
double channel_gain_sq(const PhyConfig& cfg, double horizontal_distance_sq_m2);

/// Per-frame achievable rate (bits/frame) for channel gain h > 0.
double achievable_rate(const PhyConfig& cfg, double gain);

/// Shorthand for achievable_rate(cfg, channel_gain(cfg, d_h)).
double rate_at_distance(const PhyConfig& cfg, double horizontal_distance_m);

/// Radius at which the achievable rate equals rho. Not clamped to the cell.
OutageRadius outage_radius(const PhyConfig& cfg, double rho);

/// Probability that a user placed uniformly on the cell disc can decode rho.
double on_probability(const PhyConfig& cfg, double rho);

RateInterval rate_interval(const PhyConfig& cfg);

}  // namespace vlcqos::phy

#endif  // VLCQOS_PHY_CHANNEL_HPP
