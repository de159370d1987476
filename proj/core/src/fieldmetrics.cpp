#include "fieldsens/fieldmetrics.hpp"

#include <cmath>

#include "fieldsens/errors.hpp"

namespace fieldsens {

using detail::require_nonnegative;
using detail::require_positive;

namespace {

void require_coupling(double rho2) {
  if (!(std::isfinite(rho2) && rho2 > 0.0 && rho2 <= 1.0)) {
    throw DomainError("polarisation coupling rho^2 must be in (0, 1]");
  }
}

}  // namespace

double default_polarization_coupling(Coherence c) {
  return c == Coherence::coherent ? 1.0 : 0.5;
}

ReceiverReference::ReceiverReference(Kelvin system_temperature, SquareMeters effective_aperture,
                                     double polarization_coupling)
    : system_temperature_(system_temperature),
      effective_aperture_(effective_aperture),
      polarization_coupling_(polarization_coupling) {
  require_positive(system_temperature.value(), "system temperature");
  require_positive(effective_aperture.value(), "effective aperture");
  require_coupling(polarization_coupling);
}

ReceiverReference ReceiverReference::from_gain(Kelvin system_temperature, double gain,
                                               Hertz frequency, double polarization_coupling) {
  ReceiverReference ref(system_temperature, aperture_from_gain(gain, frequency),
                        polarization_coupling);
  ref.gain_ = gain;
  ref.frequency_ = frequency;
  return ref;
}

FluxDensity sefd(Kelvin system_temperature, SquareMeters effective_aperture,
                 double polarization_coupling) {
  require_nonnegative(system_temperature.value(), "system temperature");
  require_positive(effective_aperture.value(), "effective aperture");
  require_coupling(polarization_coupling);
  return FluxDensity{constants::boltzmann * system_temperature.value() /
                     (polarization_coupling * effective_aperture.value())};
}

FieldDensity nef_from_aperture(Kelvin system_temperature, SquareMeters effective_aperture,
                               double polarization_coupling, const PhysicsConfig& cfg) {
  const double s = sefd(system_temperature, effective_aperture, polarization_coupling).value();
  return FieldDensity{std::sqrt(s * cfg.free_space_impedance)};
}

FieldDensity nef_from_aperture(const ReceiverReference& ref, const PhysicsConfig& cfg) {
  return nef_from_aperture(ref.system_temperature(), ref.effective_aperture(),
                           ref.polarization_coupling(), cfg);
}

namespace {

// k_B / T-independent factor of NEF^2 in the gain form: 4 pi f^2 eta0 / (c^2 G rho^2).
double gain_form_factor(double gain, Hertz frequency, double rho2, const PhysicsConfig& cfg) {
  require_positive(gain, "gain");
  require_positive(frequency.value(), "frequency");
  require_coupling(rho2);
  const double f = frequency.value();
  const double c = constants::speed_of_light;
  return 4.0 * constants::pi * f * f * cfg.free_space_impedance / (c * c * gain * rho2);
}

}  // namespace

FieldDensity nef_from_gain(Kelvin system_temperature, double gain, Hertz frequency,
                           double polarization_coupling, const PhysicsConfig& cfg) {
  require_nonnegative(system_temperature.value(), "system temperature");
  const double k = gain_form_factor(gain, frequency, polarization_coupling, cfg);
  return FieldDensity{std::sqrt(k * constants::boltzmann * system_temperature.value())};
}

Kelvin tsys_from_nef(FieldDensity nef, double gain, Hertz frequency, double polarization_coupling,
                     const PhysicsConfig& cfg) {
  require_positive(nef.value(), "NEF");
  const double k = gain_form_factor(gain, frequency, polarization_coupling, cfg);
  return Kelvin{nef.value() * nef.value() / (k * constants::boltzmann)};
}

SquareMeters aperture_from_gain(double gain, Hertz frequency) {
  require_positive(gain, "gain");
  const double lambda = frequency_to_wavelength(frequency).value();
  return SquareMeters{gain * lambda * lambda / (4.0 * constants::pi)};
}

SquareMeters aperture_from_physical(SquareMeters physical_area, double aperture_efficiency) {
  require_positive(physical_area.value(), "physical aperture");
  if (!(aperture_efficiency > 0.0 && aperture_efficiency <= 1.0)) {
    throw DomainError("aperture efficiency must be in (0, 1]");
  }
  return physical_area * aperture_efficiency;
}

SquareMeters dish_area(Meters diameter) {
  require_positive(diameter.value(), "dish diameter");
  const double r = diameter.value() / 2.0;
  return SquareMeters{constants::pi * r * r};
}

Kelvin trx_from_noise_figure(double noise_figure_db, Kelvin reference_temperature) {
  require_nonnegative(noise_figure_db, "noise figure");
  require_positive(reference_temperature.value(), "reference temperature");
  return reference_temperature * (db_to_linear(noise_figure_db) - 1.0);
}

double loaded_quality_factor(double external_q, double internal_q) {
  require_positive(external_q, "external Q");
  require_positive(internal_q, "internal Q");
  return 1.0 / (1.0 / external_q + 1.0 / internal_q);
}

CavityCoupling::CavityCoupling(Hertz f0, double ql, std::optional<double> qe,
                               std::optional<double> qi, double eta_c, CubicMeters v)
    : center_frequency_(f0),
      loaded_q_(ql),
      external_q_(qe),
      internal_q_(qi),
      transfer_efficiency_(eta_c),
      mode_volume_(v) {
  require_positive(f0.value(), "cavity centre frequency");
  require_positive(ql, "loaded Q");
  if (!(eta_c > 0.0 && eta_c <= 1.0)) throw DomainError("transfer efficiency must be in (0, 1]");
  require_positive(v.value(), "mode volume");
}

CavityCoupling CavityCoupling::from_loaded_q(Hertz center_frequency, double loaded_q,
                                             double transfer_efficiency, CubicMeters mode_volume) {
  return {center_frequency, loaded_q, std::nullopt, std::nullopt, transfer_efficiency,
          mode_volume};
}

CavityCoupling CavityCoupling::from_quality_factors(Hertz center_frequency, double external_q,
                                                    double internal_q, double transfer_efficiency,
                                                    CubicMeters mode_volume) {
  return {center_frequency, loaded_quality_factor(external_q, internal_q), external_q,
          internal_q, transfer_efficiency, mode_volume};
}

CavityCoupling CavityCoupling::from_signal_bandwidth(Hertz center_frequency,
                                                     Hertz signal_bandwidth,
                                                     double transfer_efficiency,
                                                     CubicMeters mode_volume) {
  require_positive(signal_bandwidth.value(), "signal bandwidth");
  return from_loaded_q(center_frequency, center_frequency / signal_bandwidth,
                       transfer_efficiency, mode_volume);
}

double enhancement_factor_cavity(const CavityCoupling& cavity, SquareMeters effective_aperture,
                                 const PhysicsConfig& cfg) {
  require_positive(effective_aperture.value(), "effective aperture");
  const double omega0 = 2.0 * constants::pi * cavity.center_frequency().value();
  return std::sqrt(cavity.transfer_efficiency()) * std::sqrt(2.0 * cavity.loaded_q() / omega0) *
         std::sqrt(effective_aperture.value() /
                   (2.0 * cfg.free_space_impedance * constants::vacuum_permittivity *
                    cavity.mode_volume().value()));
}

LocalFieldRequirement local_field_requirement(const ReceiverReference& ref, double enhancement,
                                              const PhysicsConfig& cfg) {
  require_positive(enhancement, "enhancement factor");
  LocalFieldRequirement out;
  out.free_space = nef_from_aperture(ref, cfg);
  out.enhancement = enhancement;
  out.local = out.free_space * enhancement;
  out.enhancement_below_unity = enhancement < 1.0;
  return out;
}

bool meets_classical_reference(FieldDensity sensor_local_nef, FieldDensity local_requirement) {
  return sensor_local_nef <= local_requirement;
}

}  // namespace fieldsens
