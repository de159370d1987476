#include "fieldsens/quantities.hpp"

#include <cmath>
#include <string>

#include "fieldsens/errors.hpp"

namespace fieldsens {

namespace detail {

void require_finite(double v, std::string_view what) {
  if (!std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be finite");
  }
}

void require_positive(double v, std::string_view what) {
  if (!(std::isfinite(v) && v > 0.0)) {
    throw DomainError(std::string(what) + " must be > 0");
  }
}

void require_nonnegative(double v, std::string_view what) {
  if (!(std::isfinite(v) && v >= 0.0)) {
    throw DomainError(std::string(what) + " must be >= 0");
  }
}

}  // namespace detail

std::string_view to_string(DbRef ref) {
  switch (ref) {
    case DbRef::db: return "dB";
    case DbRef::dbi: return "dBi";
    case DbRef::dbw: return "dBW";
    case DbRef::dbm: return "dBm";
    case DbRef::dbhz: return "dBHz";
    case DbRef::db_per_k: return "dB/K";
  }
  return "?";
}

namespace {

bool is_ratio(DbRef r) { return r == DbRef::db || r == DbRef::dbi; }

[[noreturn]] void mismatch(DbRef a, DbRef b, char op) {
  throw UnitMismatch("cannot combine " + std::string(to_string(a)) + " " + op +
                     " " + std::string(to_string(b)));
}

}  // namespace

double Decibels::linear() const { return db_to_linear(value_); }

Decibels Decibels::operator+(Decibels o) const {
  if (o.ref_ == DbRef::db) return {value_ + o.value_, ref_};
  if (ref_ == DbRef::db) return {value_ + o.value_, o.ref_};
  // Gains relative to isotropic add onto levels and onto each other.
  if (o.ref_ == DbRef::dbi && !is_ratio(ref_)) return {value_ + o.value_, ref_};
  if (ref_ == DbRef::dbi && !is_ratio(o.ref_)) return {value_ + o.value_, o.ref_};
  if (ref_ == DbRef::dbi && o.ref_ == DbRef::dbi) return {value_ + o.value_, DbRef::dbi};
  mismatch(ref_, o.ref_, '+');
}

Decibels Decibels::operator-(Decibels o) const {
  if (o.ref_ == DbRef::db) return {value_ - o.value_, ref_};
  if (o.ref_ == ref_) return {value_ - o.value_, DbRef::db};
  if (o.ref_ == DbRef::dbi && !is_ratio(ref_)) return {value_ - o.value_, ref_};
  mismatch(ref_, o.ref_, '-');
}

double db_to_linear(double db) {
  detail::require_finite(db, "decibel value");
  return std::pow(10.0, db / 10.0);
}

double linear_to_db(double ratio) {
  detail::require_positive(ratio, "linear ratio");
  return 10.0 * std::log10(ratio);
}

Decibels watts_to_dbw(Watts p) { return {linear_to_db(p.value()), DbRef::dbw}; }

Watts dbw_to_watts(Decibels level) {
  switch (level.ref()) {
    case DbRef::dbw: return Watts{db_to_linear(level.value())};
    case DbRef::dbm: return Watts{db_to_linear(level.value()) * 1e-3};
    default:
      throw UnitMismatch("expected dBW or dBm, got " + std::string(to_string(level.ref())));
  }
}

Meters frequency_to_wavelength(Hertz f) {
  detail::require_positive(f.value(), "frequency");
  return Meters{constants::speed_of_light / f.value()};
}

Watts power_from_field(VoltsPerMeter amplitude, SquareMeters aperture, const PhysicsConfig& cfg) {
  detail::require_nonnegative(amplitude.value(), "field amplitude");
  detail::require_positive(aperture.value(), "aperture");
  const double e = amplitude.value();
  return Watts{aperture.value() * e * e / (2.0 * cfg.free_space_impedance)};
}

}  // namespace fieldsens
