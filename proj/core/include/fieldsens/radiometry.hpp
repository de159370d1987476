#pragma once

#include <span>

#include "fieldsens/quantities.hpp"

namespace fieldsens {

/// Total-power radiometer noise model.
struct ReceiverNoiseModel {
  Kelvin antenna_temperature;
  Kelvin receiver_temperature;
  Hertz bandwidth;
  Seconds integration_time;
  double gain_stability = 0.0;  ///< fractional dG/G within the integration time

  [[nodiscard]] Kelvin system_temperature() const {
    return antenna_temperature + receiver_temperature;
  }

  /// Throws DomainError if any field is out of range.
  void validate() const;
};

/// NEDT = T_sys sqrt(1/(B tau) + (dG/G)^2).
Kelvin nedt(const ReceiverNoiseModel& model);

/// P_out = G k_B (T_A + T_Rx) B.
Watts radiometer_output_power(double gain, Kelvin antenna_temperature,
                              Kelvin receiver_temperature, Hertz bandwidth);

struct CalibrationPoint {
  Kelvin load_temperature;
  Watts output_power;
};

enum class CalibrationStatus {
  ok,
  negative_receiver_temperature,  ///< fit is returned as-is, not clamped
};

struct CalibrationResult {
  double gain = 0.0;
  Kelvin receiver_temperature;
  CalibrationStatus status = CalibrationStatus::ok;
};

/// Ordinary least squares of P_out against load temperature. The slope gives
/// G k_B B, the intercept over the slope gives T_Rx. Two points interpolate
/// exactly. Throws SingularFitError when fewer than two distinct loads exist.
CalibrationResult calibrate_hot_cold(std::span<const CalibrationPoint> points, Hertz bandwidth);

/// Inverse radiometer equation without the gain term: T_sys = NEDT sqrt(B tau).
Kelvin tsys_from_nedt(Kelvin nedt, Hertz bandwidth, Seconds integration_time);

/// Inverse of `nedt` with a non-zero gain-stability term.
Kelvin tsys_from_nedt(Kelvin nedt, Hertz bandwidth, Seconds integration_time,
                      double gain_stability);

}  // namespace fieldsens
