#pragma once

#include <compare>
#include <string_view>

#include "fieldsens/constants.hpp"

namespace fieldsens {

enum class Unit {
  watt,
  kelvin,
  hertz,
  second,
  meter,
  square_meter,
  cubic_meter,
  volt_per_meter,
  field_density,  // V m^-1 Hz^-1/2
  flux_density,   // W m^-2 Hz^-1
};

/// A linear-scale SI value tagged with its unit. Values of different units
/// do not mix; products across units are written out inside the operations
/// that need them.
template <Unit U>
class Quantity {
 public:
  constexpr Quantity() = default;
  constexpr explicit Quantity(double v) : value_(v) {}

  [[nodiscard]] constexpr double value() const { return value_; }

  constexpr Quantity operator+(Quantity o) const { return Quantity{value_ + o.value_}; }
  constexpr Quantity operator-(Quantity o) const { return Quantity{value_ - o.value_}; }
  constexpr Quantity operator*(double s) const { return Quantity{value_ * s}; }
  constexpr Quantity operator/(double s) const { return Quantity{value_ / s}; }
  constexpr double operator/(Quantity o) const { return value_ / o.value_; }
  friend constexpr Quantity operator*(double s, Quantity q) { return q * s; }

  constexpr auto operator<=>(const Quantity&) const = default;

 private:
  double value_ = 0.0;
};

using Watts = Quantity<Unit::watt>;
using Kelvin = Quantity<Unit::kelvin>;
using Hertz = Quantity<Unit::hertz>;
using Seconds = Quantity<Unit::second>;
using Meters = Quantity<Unit::meter>;
using SquareMeters = Quantity<Unit::square_meter>;
using CubicMeters = Quantity<Unit::cubic_meter>;
using VoltsPerMeter = Quantity<Unit::volt_per_meter>;
using FieldDensity = Quantity<Unit::field_density>;
using FluxDensity = Quantity<Unit::flux_density>;

/// Reference of a decibel value. `db` and `dbi` are ratios; the rest are
/// absolute levels.
enum class DbRef { db, dbi, dbw, dbm, dbhz, db_per_k };

std::string_view to_string(DbRef ref);

/// Power decibels (10 log10) with a declared reference.
///
/// Addition and subtraction follow level/ratio rules: a ratio may be added to
/// or subtracted from anything and keeps the other operand's reference, two
/// equal levels subtract to a plain ratio, and every other combination throws
/// UnitMismatch.
class Decibels {
 public:
  constexpr Decibels(double value, DbRef ref) : value_(value), ref_(ref) {}

  [[nodiscard]] constexpr double value() const { return value_; }
  [[nodiscard]] constexpr DbRef ref() const { return ref_; }
  [[nodiscard]] double linear() const;

  Decibels operator+(Decibels o) const;
  Decibels operator-(Decibels o) const;

  constexpr bool operator==(const Decibels&) const = default;

 private:
  double value_;
  DbRef ref_;
};

/// 10^(x/10). Throws DomainError for non-finite input.
double db_to_linear(double db);

/// 10 log10(x). Throws DomainError unless x is finite and > 0.
double linear_to_db(double ratio);

Decibels watts_to_dbw(Watts p);
Watts dbw_to_watts(Decibels level);

/// lambda = c / f.
Meters frequency_to_wavelength(Hertz f);

/// P = A E^2 / (2 eta0), E the peak field amplitude.
Watts power_from_field(VoltsPerMeter amplitude, SquareMeters aperture,
                       const PhysicsConfig& cfg = PhysicsConfig::standard());

namespace literals {

constexpr Kelvin operator""_K(long double v) { return Kelvin{static_cast<double>(v)}; }
constexpr Kelvin operator""_K(unsigned long long v) { return Kelvin{static_cast<double>(v)}; }
constexpr Hertz operator""_Hz(long double v) { return Hertz{static_cast<double>(v)}; }
constexpr Hertz operator""_Hz(unsigned long long v) { return Hertz{static_cast<double>(v)}; }
constexpr Hertz operator""_MHz(long double v) { return Hertz{static_cast<double>(v) * 1e6}; }
constexpr Hertz operator""_MHz(unsigned long long v) { return Hertz{static_cast<double>(v) * 1e6}; }
constexpr Hertz operator""_GHz(long double v) { return Hertz{static_cast<double>(v) * 1e9}; }
constexpr Hertz operator""_GHz(unsigned long long v) { return Hertz{static_cast<double>(v) * 1e9}; }
constexpr Seconds operator""_s(long double v) { return Seconds{static_cast<double>(v)}; }
constexpr Seconds operator""_s(unsigned long long v) { return Seconds{static_cast<double>(v)}; }
constexpr Seconds operator""_ms(long double v) { return Seconds{static_cast<double>(v) * 1e-3}; }
constexpr Seconds operator""_ms(unsigned long long v) { return Seconds{static_cast<double>(v) * 1e-3}; }
constexpr Meters operator""_m(long double v) { return Meters{static_cast<double>(v)}; }
constexpr Meters operator""_m(unsigned long long v) { return Meters{static_cast<double>(v)}; }
constexpr SquareMeters operator""_m2(long double v) { return SquareMeters{static_cast<double>(v)}; }
constexpr SquareMeters operator""_m2(unsigned long long v) { return SquareMeters{static_cast<double>(v)}; }
constexpr Watts operator""_W(long double v) { return Watts{static_cast<double>(v)}; }
constexpr Watts operator""_W(unsigned long long v) { return Watts{static_cast<double>(v)}; }

}  // namespace literals

namespace detail {

// Shared precondition helpers; `what` names the offending input.
void require_finite(double v, std::string_view what);
void require_positive(double v, std::string_view what);
void require_nonnegative(double v, std::string_view what);

}  // namespace detail

}  // namespace fieldsens
