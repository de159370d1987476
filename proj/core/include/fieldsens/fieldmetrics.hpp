#pragma once

#include <optional>

#include "fieldsens/quantities.hpp"

namespace fieldsens {

enum class Coherence { coherent, incoherent };

/// rho^2 = 1 for polarisation-matched coherent reception, 1/2 for unpolarised
/// emission seen by one linear channel.
double default_polarization_coupling(Coherence c);

/// Aperture efficiency assumed when only the physical area is known.
inline constexpr double kDefaultApertureEfficiency = 0.65;

/// A classical receiver expressed as (T_sys, A_e, rho^2). When constructed from
/// gain the (G, f) pair is retained and must stay consistent with A_e.
class ReceiverReference {
 public:
  ReceiverReference(Kelvin system_temperature, SquareMeters effective_aperture,
                    double polarization_coupling = 1.0);

  static ReceiverReference from_gain(Kelvin system_temperature, double gain, Hertz frequency,
                                     double polarization_coupling = 1.0);

  [[nodiscard]] Kelvin system_temperature() const { return system_temperature_; }
  [[nodiscard]] SquareMeters effective_aperture() const { return effective_aperture_; }
  [[nodiscard]] double polarization_coupling() const { return polarization_coupling_; }
  [[nodiscard]] std::optional<double> gain() const { return gain_; }
  [[nodiscard]] std::optional<Hertz> frequency() const { return frequency_; }

 private:
  Kelvin system_temperature_;
  SquareMeters effective_aperture_;
  double polarization_coupling_;
  std::optional<double> gain_;
  std::optional<Hertz> frequency_;
};

/// SEFD = k_B T_sys / (rho^2 A_e) [W m^-2 Hz^-1].
FluxDensity sefd(Kelvin system_temperature, SquareMeters effective_aperture,
                 double polarization_coupling);

/// E_free = sqrt(k_B T_sys eta0 / (rho^2 A_e)).
FieldDensity nef_from_aperture(Kelvin system_temperature, SquareMeters effective_aperture,
                               double polarization_coupling,
                               const PhysicsConfig& cfg = PhysicsConfig::standard());

FieldDensity nef_from_aperture(const ReceiverReference& ref,
                               const PhysicsConfig& cfg = PhysicsConfig::standard());

/// Gain-based form sqrt(4 pi f^2 k_B T_sys / (eps0 c^3 G rho^2)). Evaluated with
/// eps0 c = 1/eta0 so that it agrees with `nef_from_aperture` under either
/// impedance convention.
FieldDensity nef_from_gain(Kelvin system_temperature, double gain, Hertz frequency,
                           double polarization_coupling,
                           const PhysicsConfig& cfg = PhysicsConfig::standard());

/// Exact inverse of `nef_from_gain`. Frequency, gain and rho^2 are always
/// required: the field-to-temperature mapping is not unique without them.
Kelvin tsys_from_nef(FieldDensity nef, double gain, Hertz frequency, double polarization_coupling,
                     const PhysicsConfig& cfg = PhysicsConfig::standard());

/// A_e = G lambda^2 / (4 pi).
SquareMeters aperture_from_gain(double gain, Hertz frequency);

/// A_e = eta_ap A_phys.
SquareMeters aperture_from_physical(SquareMeters physical_area,
                                    double aperture_efficiency = kDefaultApertureEfficiency);

/// pi (D/2)^2.
SquareMeters dish_area(Meters diameter);

/// T_Rx = (10^(NF/10) - 1) T_0.
Kelvin trx_from_noise_figure(double noise_figure_db,
                             Kelvin reference_temperature = Kelvin{constants::reference_temperature});

/// Single-mode resonator feeding the probe. All constructors normalise to the
/// loaded quality factor; Q_e and Q_i are kept when known.
class CavityCoupling {
 public:
  static CavityCoupling from_loaded_q(Hertz center_frequency, double loaded_q,
                                      double transfer_efficiency, CubicMeters mode_volume);
  static CavityCoupling from_quality_factors(Hertz center_frequency, double external_q,
                                             double internal_q, double transfer_efficiency,
                                             CubicMeters mode_volume);
  /// Linewidth matched to the signal: Q_L = f0 / B_sig.
  static CavityCoupling from_signal_bandwidth(Hertz center_frequency, Hertz signal_bandwidth,
                                              double transfer_efficiency, CubicMeters mode_volume);

  [[nodiscard]] Hertz center_frequency() const { return center_frequency_; }
  [[nodiscard]] double loaded_q() const { return loaded_q_; }
  [[nodiscard]] std::optional<double> external_q() const { return external_q_; }
  [[nodiscard]] std::optional<double> internal_q() const { return internal_q_; }
  [[nodiscard]] double transfer_efficiency() const { return transfer_efficiency_; }
  [[nodiscard]] CubicMeters mode_volume() const { return mode_volume_; }
  [[nodiscard]] Hertz linewidth() const { return center_frequency_ / loaded_q_; }

 private:
  CavityCoupling(Hertz f0, double ql, std::optional<double> qe, std::optional<double> qi,
                 double eta_c, CubicMeters v);

  Hertz center_frequency_;
  double loaded_q_;
  std::optional<double> external_q_;
  std::optional<double> internal_q_;
  double transfer_efficiency_;
  CubicMeters mode_volume_;
};

/// 1/Q_L = 1/Q_e + 1/Q_i.
double loaded_quality_factor(double external_q, double internal_q);

/// beta = sqrt(eta_c) sqrt(2 Q_L / w0) sqrt(A_e / (2 eta0 eps0 V_eff)) for a
/// critically coupled cavity.
double enhancement_factor_cavity(const CavityCoupling& cavity, SquareMeters effective_aperture,
                                 const PhysicsConfig& cfg = PhysicsConfig::standard());

struct LocalFieldRequirement {
  FieldDensity free_space;
  FieldDensity local;
  double enhancement = 1.0;
  bool enhancement_below_unity = false;  ///< allowed, but flagged
};

/// E_loc = beta E_free.
LocalFieldRequirement local_field_requirement(const ReceiverReference& ref, double enhancement,
                                              const PhysicsConfig& cfg = PhysicsConfig::standard());

/// True iff the sensor's local NEF is at or below the requirement.
bool meets_classical_reference(FieldDensity sensor_local_nef, FieldDensity local_requirement);

}  // namespace fieldsens
