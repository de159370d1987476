#pragma once

#include "fieldsens/fieldmetrics.hpp"
#include "fieldsens/quantities.hpp"

namespace fieldsens {

/// Transition dipole moment magnitude. Dipole moments are inputs here; they are
/// never computed from atomic structure.
class DipoleMoment {
 public:
  static DipoleMoment from_coulomb_meters(double d);
  /// d = n e a0.
  static DipoleMoment from_atomic_units(double multiples_of_e_a0);

  [[nodiscard]] double coulomb_meters() const { return value_; }

 private:
  explicit DipoleMoment(double v) : value_(v) {}
  double value_;
};

/// Quantum projection noise floor NEF_qpn = (h / d) / sqrt(N tau_coh).
FieldDensity qpn_nef(DipoleMoment d, double atom_count, Seconds coherence_time);

/// The QPN expression assumes the integration time exceeds the coherence time.
[[nodiscard]] bool qpn_integration_assumption_holds(Seconds integration_time,
                                                    Seconds coherence_time);

/// Photon shot-noise NEP sqrt(P h nu) [W Hz^-1/2].
double photon_shot_noise_nep(Watts probe_power, Hertz probe_frequency);

/// Omega = d E cos(theta) / hbar [rad/s]. `alignment` is cos(theta) in (0, 1].
double rabi_from_field(VoltsPerMeter field, DipoleMoment d, double alignment = 1.0);

/// E = hbar Omega / (d cos(theta)).
VoltsPerMeter field_from_rabi(double rabi_rad_per_s, DipoleMoment d, double alignment = 1.0);

/// Conventional two-level far-detuned prefactor for the AC-Stark shift.
inline constexpr double kDefaultStarkConstant = 0.25;

/// Delta_acS = k |Omega|^2 / Delta. Only the proportionality is physical; `k`
/// is a caller convention. Throws DomainError at zero detuning.
double ac_stark_shift(double rabi_rad_per_s, double detuning_rad_per_s,
                      double k = kDefaultStarkConstant);

/// Noise temperature a classical receiver with gain G at f would need to match
/// the sensor's NEF.
Kelvin compare_to_classical(FieldDensity sensor_nef, double gain, Hertz frequency,
                            double polarization_coupling,
                            const PhysicsConfig& cfg = PhysicsConfig::standard());

}  // namespace fieldsens
