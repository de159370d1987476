#include "fieldsens/rydberg.hpp"

#include <cmath>

#include "fieldsens/errors.hpp"

namespace fieldsens {

using detail::require_nonnegative;
using detail::require_positive;

namespace {

void require_alignment(double a) {
  if (!(std::isfinite(a) && a > 0.0 && a <= 1.0)) {
    throw DomainError("dipole alignment cosine must be in (0, 1]");
  }
}

}  // namespace

DipoleMoment DipoleMoment::from_coulomb_meters(double d) {
  require_positive(d, "dipole moment");
  return DipoleMoment{d};
}

DipoleMoment DipoleMoment::from_atomic_units(double multiples_of_e_a0) {
  require_positive(multiples_of_e_a0, "dipole moment [e a0]");
  return DipoleMoment{multiples_of_e_a0 * constants::atomic_dipole_unit};
}

FieldDensity qpn_nef(DipoleMoment d, double atom_count, Seconds coherence_time) {
  require_positive(atom_count, "atom count");
  require_positive(coherence_time.value(), "coherence time");
  return FieldDensity{constants::planck / d.coulomb_meters() /
                      std::sqrt(atom_count * coherence_time.value())};
}

bool qpn_integration_assumption_holds(Seconds integration_time, Seconds coherence_time) {
  return integration_time >= coherence_time;
}

double photon_shot_noise_nep(Watts probe_power, Hertz probe_frequency) {
  require_nonnegative(probe_power.value(), "probe power");
  require_positive(probe_frequency.value(), "probe frequency");
  return std::sqrt(probe_power.value() * constants::planck * probe_frequency.value());
}

double rabi_from_field(VoltsPerMeter field, DipoleMoment d, double alignment) {
  require_nonnegative(field.value(), "field amplitude");
  require_alignment(alignment);
  return d.coulomb_meters() * alignment * field.value() / constants::reduced_planck;
}

VoltsPerMeter field_from_rabi(double rabi_rad_per_s, DipoleMoment d, double alignment) {
  require_nonnegative(rabi_rad_per_s, "Rabi frequency");
  require_alignment(alignment);
  return VoltsPerMeter{constants::reduced_planck * rabi_rad_per_s /
                       (d.coulomb_meters() * alignment)};
}

double ac_stark_shift(double rabi_rad_per_s, double detuning_rad_per_s, double k) {
  detail::require_finite(rabi_rad_per_s, "Rabi frequency");
  detail::require_finite(detuning_rad_per_s, "detuning");
  detail::require_finite(k, "Stark constant");
  if (detuning_rad_per_s == 0.0) throw DomainError("AC-Stark shift is singular at zero detuning");
  return k * rabi_rad_per_s * rabi_rad_per_s / detuning_rad_per_s;
}

Kelvin compare_to_classical(FieldDensity sensor_nef, double gain, Hertz frequency,
                            double polarization_coupling, const PhysicsConfig& cfg) {
  return tsys_from_nef(sensor_nef, gain, frequency, polarization_coupling, cfg);
}

}  // namespace fieldsens
