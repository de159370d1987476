#pragma once

// CODATA 2018 values typed in independently of the library headers.
namespace oracle {

inline constexpr double kB = 1.380649e-23;
inline constexpr double h = 6.62607015e-34;
inline constexpr double c = 299792458.0;
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double hbar = h / (2.0 * pi);
inline constexpr double eps0 = 8.8541878128e-12;
inline constexpr double eta0 = 376.730313668;
inline constexpr double e = 1.602176634e-19;
inline constexpr double a0 = 5.29177210903e-11;

}  // namespace oracle
