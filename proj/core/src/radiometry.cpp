#include "fieldsens/radiometry.hpp"

#include <cmath>

#include "fieldsens/errors.hpp"

namespace fieldsens {

using detail::require_nonnegative;
using detail::require_positive;

void ReceiverNoiseModel::validate() const {
  require_nonnegative(antenna_temperature.value(), "antenna temperature");
  require_nonnegative(receiver_temperature.value(), "receiver temperature");
  require_positive(bandwidth.value(), "bandwidth");
  require_positive(integration_time.value(), "integration time");
  require_nonnegative(gain_stability, "gain stability");
}

Kelvin nedt(const ReceiverNoiseModel& model) {
  model.validate();
  const double bt = model.bandwidth.value() * model.integration_time.value();
  if (!(bt > 0.0)) throw DomainError("bandwidth-time product must be > 0");
  const double g = model.gain_stability;
  return model.system_temperature() * std::sqrt(1.0 / bt + g * g);
}

Watts radiometer_output_power(double gain, Kelvin antenna_temperature,
                              Kelvin receiver_temperature, Hertz bandwidth) {
  require_positive(gain, "gain");
  require_positive(bandwidth.value(), "bandwidth");
  require_nonnegative(antenna_temperature.value(), "antenna temperature");
  require_nonnegative(receiver_temperature.value(), "receiver temperature");
  const double tsys = antenna_temperature.value() + receiver_temperature.value();
  return Watts{gain * constants::boltzmann * tsys * bandwidth.value()};
}

CalibrationResult calibrate_hot_cold(std::span<const CalibrationPoint> points, Hertz bandwidth) {
  require_positive(bandwidth.value(), "bandwidth");
  if (points.size() < 2) throw SingularFitError("calibration needs at least two loads");
  for (const auto& p : points) {
    require_nonnegative(p.load_temperature.value(), "load temperature");
    require_nonnegative(p.output_power.value(), "output power");
  }

  const double n = static_cast<double>(points.size());
  double mean_t = 0.0;
  double mean_p = 0.0;
  for (const auto& p : points) {
    mean_t += p.load_temperature.value();
    mean_p += p.output_power.value();
  }
  mean_t /= n;
  mean_p /= n;

  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& p : points) {
    const double dt = p.load_temperature.value() - mean_t;
    sxx += dt * dt;
    sxy += dt * (p.output_power.value() - mean_p);
  }
  if (!(sxx > 0.0)) throw SingularFitError("all calibration loads have the same temperature");

  const double slope = sxy / sxx;
  if (!(slope > 0.0)) throw DomainError("fitted radiometer slope is not positive");
  const double intercept = mean_p - slope * mean_t;

  CalibrationResult out;
  out.gain = slope / (constants::boltzmann * bandwidth.value());
  out.receiver_temperature = Kelvin{intercept / slope};
  out.status = out.receiver_temperature.value() < 0.0
                   ? CalibrationStatus::negative_receiver_temperature
                   : CalibrationStatus::ok;
  return out;
}

Kelvin tsys_from_nedt(Kelvin nedt_value, Hertz bandwidth, Seconds integration_time) {
  require_positive(nedt_value.value(), "NEDT");
  require_positive(bandwidth.value(), "bandwidth");
  require_positive(integration_time.value(), "integration time");
  return nedt_value * std::sqrt(bandwidth.value() * integration_time.value());
}

Kelvin tsys_from_nedt(Kelvin nedt_value, Hertz bandwidth, Seconds integration_time,
                      double gain_stability) {
  require_positive(nedt_value.value(), "NEDT");
  require_positive(bandwidth.value(), "bandwidth");
  require_positive(integration_time.value(), "integration time");
  require_nonnegative(gain_stability, "gain stability");
  const double bt = bandwidth.value() * integration_time.value();
  return nedt_value / std::sqrt(1.0 / bt + gain_stability * gain_stability);
}

}  // namespace fieldsens
