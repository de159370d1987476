#include "fieldsens/radar.hpp"

#include <cmath>

#include "fieldsens/errors.hpp"

namespace fieldsens {

using detail::require_nonnegative;
using detail::require_positive;

LossFactor LossFactor::from_linear(double factor) {
  if (!(std::isfinite(factor) && factor >= 1.0)) {
    throw DomainError("loss factor must be >= 1 (linear)");
  }
  return LossFactor{factor};
}

LossFactor LossFactor::from_db(double db) {
  require_nonnegative(db, "loss [dB]");
  return LossFactor{db_to_linear(db)};
}

double LossFactor::db() const { return linear_to_db(factor_); }

void RadarScenario::validate() const {
  require_positive(transmit_power.value(), "transmit power");
  require_positive(tx_gain, "transmit gain");
  require_positive(rx_gain, "receive gain");
  require_positive(wavelength.value(), "wavelength");
  require_positive(range.value(), "range");
  if (!(processing_gain >= 1.0)) throw DomainError("processing gain must be >= 1");
  require_nonnegative(system_temperature.value(), "system temperature");
  require_positive(bandwidth.value(), "bandwidth");
  if (const auto* p = std::get_if<PointTarget>(&target)) {
    require_nonnegative(p->cross_section.value(), "radar cross section");
  } else {
    const auto& d = std::get<DistributedTarget>(target);
    require_nonnegative(d.sigma0, "sigma0");
    require_positive(d.resolution_cell.value(), "resolution cell area");
  }
}

namespace {

// P_t G_t G_r lambda^2 / ((4 pi)^3 R^4 L_s L_p), everything but sigma.
double radar_geometry_factor(const RadarScenario& s) {
  const double four_pi = 4.0 * constants::pi;
  const double lam = s.wavelength.value();
  const double r2 = s.range.value() * s.range.value();
  return s.transmit_power.value() * s.tx_gain * s.rx_gain * lam * lam /
         (four_pi * four_pi * four_pi * r2 * r2 * s.system_loss.linear() *
          s.propagation_loss.linear());
}

}  // namespace

Watts received_power(const RadarScenario& s) {
  s.validate();
  const auto* p = std::get_if<PointTarget>(&s.target);
  if (p == nullptr) throw DomainError("received_power needs a point target (sigma)");
  return Watts{radar_geometry_factor(s) * p->cross_section.value()};
}

Watts processed_received_power(const RadarScenario& s) {
  s.validate();
  const auto* d = std::get_if<DistributedTarget>(&s.target);
  if (d == nullptr) {
    throw DomainError("processed_received_power needs a distributed target (sigma0, A_res)");
  }
  return Watts{radar_geometry_factor(s) * d->sigma0 * d->resolution_cell.value() *
               s.processing_gain};
}

double processing_gain_from_pulse(Hertz bandwidth, Seconds pulse_width) {
  require_positive(bandwidth.value(), "bandwidth");
  require_positive(pulse_width.value(), "pulse width");
  return bandwidth.value() * pulse_width.value();
}

Watts noise_power(Kelvin system_temperature, Hertz bandwidth) {
  require_nonnegative(system_temperature.value(), "system temperature");
  require_positive(bandwidth.value(), "bandwidth");
  return Watts{constants::boltzmann * system_temperature.value() * bandwidth.value()};
}

double snr(Watts signal, Watts noise) {
  require_nonnegative(signal.value(), "signal power");
  require_positive(noise.value(), "noise power");
  return signal / noise;
}

double nesz(double sigma0, double snr_value) {
  require_nonnegative(sigma0, "sigma0");
  require_positive(snr_value, "SNR");
  return sigma0 / snr_value;
}

double nesz(const RadarScenario& s) {
  s.validate();
  const auto* d = std::get_if<DistributedTarget>(&s.target);
  if (d == nullptr) throw DomainError("NESZ needs a distributed target");
  RadarScenario unit = s;
  unit.target = DistributedTarget{1.0, d->resolution_cell};
  const double unit_snr =
      snr(processed_received_power(unit), noise_power(s.system_temperature, s.bandwidth));
  return 1.0 / unit_snr;
}

Meters range_resolution(Hertz bandwidth) {
  require_positive(bandwidth.value(), "bandwidth");
  return Meters{constants::speed_of_light / (2.0 * bandwidth.value())};
}

double max_range_ratio(Kelvin system_temperature_1, Kelvin system_temperature_2) {
  require_positive(system_temperature_1.value(), "system temperature 1");
  require_positive(system_temperature_2.value(), "system temperature 2");
  return std::pow(system_temperature_1 / system_temperature_2, 0.25);
}

}  // namespace fieldsens
