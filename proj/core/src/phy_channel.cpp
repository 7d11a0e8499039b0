#include "vlcqos/phy_channel.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace vlcqos::phy {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

void require_positive(double v, const char* field) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string("PhyConfig.") + field +
                                " must be finite and > 0");
  }
}

// ln of the rate argument's power term: 2 * ln(mu * alpha * P) - ln(varsigma^2 sigma_n^2).
double log_snr_scale(const PhyConfig& cfg) {
  return 2.0 * std::log(cfg.intensity_constant * cfg.responsivity_a_per_w *
                        cfg.avg_power_w) -
         std::log(cfg.opt_elec_ratio * cfg.opt_elec_ratio * cfg.noise_power());
}

double bits_per_log2_unit(const PhyConfig& cfg) {
  return 0.5 * cfg.frame_duration_s * cfg.bandwidth_hz;
}

// Squared outage radius; negative when rho exceeds the centre rate.
double outage_radius_squared(const PhyConfig& cfg, double rho) {
  const double m = lambertian_index(cfg.half_intensity_angle_deg);
  const double dv = cfg.vertical_distance_m;
  // ln of (mu alpha P (m+1) A dv^{m+1} g)^2 / (2 pi sigma_n varsigma)^2
  const double log_numer =
      log_snr_scale(cfg) +
      2.0 * std::log((m + 1.0) * cfg.pd_area_m2 * cfg.filter_gain *
                     concentrator_gain(cfg) / (2.0 * std::numbers::pi)) +
      2.0 * (m + 1.0) * std::log(dv);
  const double log_denom =
      std::log(std::expm1(rho * std::numbers::ln2 / bits_per_log2_unit(cfg)));
  const double x = std::exp((log_numer - log_denom) / (m + 3.0));
  return x - dv * dv;
}

}  // namespace

void PhyConfig::validate() const {
  require_positive(half_intensity_angle_deg, "half_intensity_angle_deg");
  if (!(half_intensity_angle_deg < 90.0)) {
    throw std::invalid_argument("PhyConfig.half_intensity_angle_deg must be < 90");
  }
  require_positive(fov_deg, "fov_deg");
  if (!(fov_deg <= 90.0)) {
    throw std::invalid_argument("PhyConfig.fov_deg must be <= 90");
  }
  require_positive(pd_area_m2, "pd_area_m2");
  require_positive(bandwidth_hz, "bandwidth_hz");
  require_positive(responsivity_a_per_w, "responsivity_a_per_w");
  require_positive(refractive_index, "refractive_index");
  require_positive(filter_gain, "filter_gain");
  require_positive(noise_psd_a2_per_hz, "noise_psd_a2_per_hz");
  require_positive(vertical_distance_m, "vertical_distance_m");
  require_positive(cell_radius_m, "cell_radius_m");
  require_positive(frame_duration_s, "frame_duration_s");
  require_positive(avg_power_w, "avg_power_w");
  require_positive(intensity_constant, "intensity_constant");
  require_positive(opt_elec_ratio, "opt_elec_ratio");
  // The whole cell must lie inside the receiver FOV.
  if (fov_deg < 90.0 &&
      cell_radius_m > vertical_distance_m * std::tan(fov_deg * kDegToRad)) {
    throw std::invalid_argument(
        "PhyConfig.cell_radius_m exceeds vertical_distance_m * tan(fov_deg)");
  }
}

double lambertian_index(double half_intensity_angle_deg) {
  if (!(half_intensity_angle_deg > 0.0 && half_intensity_angle_deg < 90.0)) {
    throw std::domain_error("lambertian_index: half angle must be in (0, 90) degrees");
  }
  return -1.0 / std::log2(std::cos(half_intensity_angle_deg * kDegToRad));
}

double concentrator_gain(const PhyConfig& cfg) {
  const double s = std::sin(cfg.fov_deg * kDegToRad);
  return cfg.refractive_index * cfg.refractive_index / (s * s);
}

double channel_gain_sq(const PhyConfig& cfg, double horizontal_distance_sq_m2) {
  const double dc = cfg.cell_radius_m;
  if (!(horizontal_distance_sq_m2 >= 0.0) || horizontal_distance_sq_m2 > dc * dc) {
    throw std::domain_error("channel_gain: horizontal distance outside [0, d_c]");
  }
  const double m = lambertian_index(cfg.half_intensity_angle_deg);
  const double dv = cfg.vertical_distance_m;
  const double r2 = dv * dv + horizontal_distance_sq_m2;
  return (m + 1.0) * cfg.pd_area_m2 * cfg.filter_gain * concentrator_gain(cfg) *
         std::pow(dv, m + 1.0) /
         (2.0 * std::numbers::pi * std::pow(r2, 0.5 * (m + 3.0)));
}

double channel_gain(const PhyConfig& cfg, double horizontal_distance_m) {
  if (!(horizontal_distance_m >= 0.0) ||
      horizontal_distance_m > cfg.cell_radius_m) {
    throw std::domain_error("channel_gain: horizontal distance outside [0, d_c]");
  }
  return channel_gain_sq(cfg, horizontal_distance_m * horizontal_distance_m);
}

double achievable_rate(const PhyConfig& cfg, double gain) {
  if (!(gain > 0.0)) throw std::domain_error("achievable_rate: gain must be > 0");
  const double snr = std::exp(log_snr_scale(cfg) + 2.0 * std::log(gain));
  return bits_per_log2_unit(cfg) * std::log1p(snr) / std::numbers::ln2;
}

double rate_at_distance(const PhyConfig& cfg, double horizontal_distance_m) {
  return achievable_rate(cfg, channel_gain(cfg, horizontal_distance_m));
}

OutageRadius outage_radius(const PhyConfig& cfg, double rho) {
  if (!(rho > 0.0)) throw std::domain_error("outage_radius: rho must be > 0");
  if (rho > rate_at_distance(cfg, 0.0)) return OutageRadius::never_on();
  return OutageRadius::finite(std::sqrt(std::max(outage_radius_squared(cfg, rho), 0.0)));
}

double on_probability(const PhyConfig& cfg, double rho) {
  const auto delta = outage_radius(cfg, rho);
  if (delta.is_never_on() || rho >= rate_at_distance(cfg, 0.0)) return 0.0;
  const double dc = cfg.cell_radius_m;
  if (rho <= rate_at_distance(cfg, dc)) return 1.0;
  return std::min(delta.meters() * delta.meters() / (dc * dc), 1.0);
}

RateInterval rate_interval(const PhyConfig& cfg) {
  cfg.validate();
  return {rate_at_distance(cfg, cfg.cell_radius_m), rate_at_distance(cfg, 0.0)};
}

}  // namespace vlcqos::phy
