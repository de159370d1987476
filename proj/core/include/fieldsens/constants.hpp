#pragma once

#include <numbers>

namespace fieldsens {

namespace constants {

inline constexpr double pi = std::numbers::pi;

// SI 2019 exact values.
inline constexpr double boltzmann = 1.380649e-23;         // J/K
inline constexpr double planck = 6.62607015e-34;          // J s
inline constexpr double reduced_planck = planck / (2.0 * pi);
inline constexpr double speed_of_light = 299792458.0;     // m/s
inline constexpr double elementary_charge = 1.602176634e-19;  // C

// CODATA 2018.
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double bohr_radius = 5.29177210903e-11;         // m

/// e * a0, the atomic unit of electric dipole moment [C m].
inline constexpr double atomic_dipole_unit = elementary_charge * bohr_radius;

/// 1 / (eps0 * c) evaluated with the values above [Ohm].
inline constexpr double free_space_impedance = 376.730313668;

/// Rounded impedance used by the published tables and worked examples.
inline constexpr double free_space_impedance_rounded = 377.0;

/// Noise reference temperature T0 [K].
inline constexpr double reference_temperature = 290.0;

/// -10 log10(k_B) as used in link budgets [dBW/(K Hz)], rounded.
inline constexpr double boltzmann_db = 228.6;

}  // namespace constants

/// Selects the free-space impedance used by every field-metric computation.
/// All functions that need eta0 take one of these; nothing reads a global.
struct PhysicsConfig {
  double free_space_impedance = constants::free_space_impedance;

  static constexpr PhysicsConfig standard() { return {}; }
  static constexpr PhysicsConfig rounded_impedance() {
    return {constants::free_space_impedance_rounded};
  }
};

}  // namespace fieldsens
