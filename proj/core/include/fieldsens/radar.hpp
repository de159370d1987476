#pragma once

#include <variant>

#include "fieldsens/quantities.hpp"

namespace fieldsens {

/// Loss stored as a linear divisor >= 1.
class LossFactor {
 public:
  constexpr LossFactor() = default;
  static LossFactor from_linear(double factor);
  static LossFactor from_db(double db);

  [[nodiscard]] double linear() const { return factor_; }
  [[nodiscard]] double db() const;

 private:
  explicit LossFactor(double f) : factor_(f) {}
  double factor_ = 1.0;
};

/// Point-target analysis: sigma is the radar cross section.
struct PointTarget {
  SquareMeters cross_section;
};

/// Imaging analysis: sigma = sigma0 * A_res.
struct DistributedTarget {
  double sigma0 = 0.0;  ///< normalised radar cross section (linear)
  SquareMeters resolution_cell;
};

using RadarTarget = std::variant<PointTarget, DistributedTarget>;

struct RadarScenario {
  Watts transmit_power;
  double tx_gain = 1.0;
  double rx_gain = 1.0;
  Meters wavelength;
  RadarTarget target;
  Meters range;
  LossFactor system_loss;
  LossFactor propagation_loss;
  double processing_gain = 1.0;
  Kelvin system_temperature;
  Hertz bandwidth;

  void validate() const;
};

/// Radar equation for a point target. Throws DomainError for a distributed
/// target or a zero range.
Watts received_power(const RadarScenario& s);

/// Radar equation for a distributed target including the processing gain.
Watts processed_received_power(const RadarScenario& s);

/// Time-bandwidth product B tau_p.
double processing_gain_from_pulse(Hertz bandwidth, Seconds pulse_width);

/// P_n = k_B T_sys B.
Watts noise_power(Kelvin system_temperature, Hertz bandwidth);

double snr(Watts signal, Watts noise);

/// NESZ = sigma0 / SNR.
double nesz(double sigma0, double snr_value);

/// The sigma0 that gives SNR = 1 for this scenario's geometry, bandwidth and
/// T_sys. Coincides with `nesz(sigma0, snr(...))` because P_r is linear in
/// sigma0. Requires a distributed target.
double nesz(const RadarScenario& s);

/// delta_R = c / (2B).
Meters range_resolution(Hertz bandwidth);

/// R_max,2 / R_max,1 = (T_sys,1 / T_sys,2)^(1/4).
double max_range_ratio(Kelvin system_temperature_1, Kelvin system_temperature_2);

}  // namespace fieldsens
