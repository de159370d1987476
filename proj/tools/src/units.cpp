#include "units.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <utility>

#include "fieldsens/constants.hpp"

namespace fieldsens::cli {

namespace {

struct Suffix {
  std::string_view name;
  double scale;
};

constexpr std::array<Suffix, 5> kFrequency{{
    {"hz", 1.0}, {"khz", 1e3}, {"mhz", 1e6}, {"ghz", 1e9}, {"thz", 1e12}}};
constexpr std::array<Suffix, 1> kTemperature{{{"k", 1.0}}};
constexpr std::array<Suffix, 4> kTime{{{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}}};
constexpr std::array<Suffix, 6> kLength{{
    {"m", 1.0}, {"km", 1e3}, {"cm", 1e-2}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}}};
constexpr std::array<Suffix, 2> kArea{{{"m2", 1.0}, {"cm2", 1e-4}}};
constexpr std::array<Suffix, 3> kVolume{{{"m3", 1.0}, {"cm3", 1e-6}, {"mm3", 1e-9}}};
constexpr std::array<Suffix, 4> kPower{{{"w", 1.0}, {"kw", 1e3}, {"mw", 1e-3}, {"uw", 1e-6}}};
constexpr std::array<Suffix, 4> kField{{
    {"v/m", 1.0}, {"mv/m", 1e-3}, {"uv/m", 1e-6}, {"v/cm", 1e2}}};
constexpr std::array<Suffix, 6> kFieldDensity{{
    {"v/m/rthz", 1.0},
    {"uv/m/rthz", 1e-6},
    {"nv/m/rthz", 1e-9},
    {"uv/cm/rthz", 1e-4},
    {"nv/cm/rthz", 1e-7},
    {"pv/cm/rthz", 1e-10}}};
constexpr std::array<Suffix, 4> kDataRate{{
    {"bps", 1.0}, {"kbps", 1e3}, {"mbps", 1e6}, {"gbps", 1e9}}};
constexpr std::array<Suffix, 2> kDipole{{{"c.m", 1.0}, {"ea0", constants::atomic_dipole_unit}}};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

[[noreturn]] void bad_unit(std::string_view flag, std::string_view text, Kind kind) {
  throw UsageError(std::string(flag) + ": '" + std::string(text) + "' needs a unit (" +
                   std::string(unit_help(kind)) + ")");
}

template <std::size_t N>
double scaled(std::string_view flag, std::string_view text, Kind kind, double number,
              const std::string& suffix, const std::array<Suffix, N>& table) {
  for (const auto& s : table) {
    if (suffix == s.name) return number * s.scale;
  }
  bad_unit(flag, text, kind);
}

}  // namespace

std::string_view unit_help(Kind kind) {
  switch (kind) {
    case Kind::ratio: return "plain number";
    case Kind::decibel: return "db";
    case Kind::gain: return "dbi, db, or plain linear";
    case Kind::loss: return "db, or plain linear >= 1";
    case Kind::frequency: return "hz, khz, mhz, ghz, thz";
    case Kind::temperature: return "k";
    case Kind::time: return "s, ms, us, ns";
    case Kind::length: return "m, km, cm, mm, um, nm";
    case Kind::area: return "m2, cm2";
    case Kind::volume: return "m3, cm3, mm3";
    case Kind::power: return "w, kw, mw, uw, dbw, dbm";
    case Kind::field: return "v/m, mv/m, uv/m, v/cm";
    case Kind::field_density: return "v/m/rthz, uv/m/rthz, nv/m/rthz, uv/cm/rthz, nv/cm/rthz, pv/cm/rthz";
    case Kind::data_rate: return "bps, kbps, mbps, gbps";
    case Kind::dipole: return "c.m, ea0";
    case Kind::angular_rate: return "rad/s, or hz, khz, mhz as cycles";
  }
  return "";
}

std::string_view type_name(Kind kind) {
  switch (kind) {
    case Kind::ratio: return "NUM";
    case Kind::decibel: return "DB";
    case Kind::gain: return "GAIN";
    case Kind::loss: return "LOSS";
    case Kind::frequency: return "FREQ";
    case Kind::temperature: return "TEMP";
    case Kind::time: return "TIME";
    case Kind::length: return "LEN";
    case Kind::area: return "AREA";
    case Kind::volume: return "VOL";
    case Kind::power: return "POWER";
    case Kind::field: return "FIELD";
    case Kind::field_density: return "NEF";
    case Kind::data_rate: return "RATE";
    case Kind::dipole: return "DIPOLE";
    case Kind::angular_rate: return "OMEGA";
  }
  return "";
}

double parse_value(std::string_view flag, std::string_view text, Kind kind) {
  const auto first = text.find_first_not_of(" \t");
  if (first == std::string_view::npos) {
    throw UsageError(std::string(flag) + ": empty value");
  }
  const std::string_view body = text.substr(first);
  double number = 0.0;
  const char* begin = body.data();
  const char* end = begin + body.size();
  if (*begin == '+') ++begin;
  const auto res = std::from_chars(begin, end, number);
  if (res.ec != std::errc{} || !std::isfinite(number)) {
    throw UsageError(std::string(flag) + ": '" + std::string(text) + "' is not a number");
  }
  std::string suffix = lower(std::string_view(res.ptr, static_cast<std::size_t>(end - res.ptr)));
  while (!suffix.empty() && (suffix.back() == ' ' || suffix.back() == '\t')) suffix.pop_back();
  suffix.erase(0, suffix.find_first_not_of(" \t") == std::string::npos
                      ? suffix.size()
                      : suffix.find_first_not_of(" \t"));

  switch (kind) {
    case Kind::ratio:
      if (!suffix.empty()) {
        throw UsageError(std::string(flag) + ": '" + std::string(text) + "' takes a plain number");
      }
      return number;
    case Kind::decibel:
      if (suffix != "db") bad_unit(flag, text, kind);
      return number;
    case Kind::gain:
      if (suffix == "db" || suffix == "dbi") return std::pow(10.0, number / 10.0);
      if (suffix.empty()) return number;
      bad_unit(flag, text, kind);
    case Kind::loss:
      if (suffix == "db") return std::pow(10.0, number / 10.0);
      if (suffix.empty()) return number;
      bad_unit(flag, text, kind);
    case Kind::frequency: return scaled(flag, text, kind, number, suffix, kFrequency);
    case Kind::temperature: return scaled(flag, text, kind, number, suffix, kTemperature);
    case Kind::time: return scaled(flag, text, kind, number, suffix, kTime);
    case Kind::length: return scaled(flag, text, kind, number, suffix, kLength);
    case Kind::area: return scaled(flag, text, kind, number, suffix, kArea);
    case Kind::volume: return scaled(flag, text, kind, number, suffix, kVolume);
    case Kind::power:
      if (suffix == "dbw") return std::pow(10.0, number / 10.0);
      if (suffix == "dbm") return std::pow(10.0, number / 10.0) * 1e-3;
      return scaled(flag, text, kind, number, suffix, kPower);
    case Kind::field: return scaled(flag, text, kind, number, suffix, kField);
    case Kind::field_density: return scaled(flag, text, kind, number, suffix, kFieldDensity);
    case Kind::data_rate: return scaled(flag, text, kind, number, suffix, kDataRate);
    case Kind::dipole: return scaled(flag, text, kind, number, suffix, kDipole);
    case Kind::angular_rate:
      if (suffix == "rad/s") return number;
      if (suffix == "hz") return 2.0 * std::numbers::pi * number;
      if (suffix == "khz") return 2.0 * std::numbers::pi * number * 1e3;
      if (suffix == "mhz") return 2.0 * std::numbers::pi * number * 1e6;
      bad_unit(flag, text, kind);
  }
  bad_unit(flag, text, kind);
}

void check_constraint(std::string_view flag, double value, Constraint c, std::string_view text) {
  auto fail = [&](std::string_view rule) {
    throw FlagDomainError(std::string(flag), std::string(flag) + " must be " + std::string(rule) +
                                                 " (got " + std::string(text) + ")");
  };
  switch (c) {
    case Constraint::any: break;
    case Constraint::positive:
      if (!(value > 0.0)) fail("> 0");
      break;
    case Constraint::nonnegative:
      if (!(value >= 0.0)) fail(">= 0");
      break;
    case Constraint::unit_interval:
      if (!(value > 0.0 && value <= 1.0)) fail("in (0, 1]");
      break;
    case Constraint::at_least_one:
      if (!(value >= 1.0)) fail(">= 1 linear (>= 0 db)");
      break;
  }
}

}  // namespace fieldsens::cli
