#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fieldsens::cli {

/// Malformed command line: bad number, missing or unknown unit, missing flag.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed value outside the flag's physical domain.
class FlagDomainError : public std::runtime_error {
 public:
  FlagDomainError(std::string flag, const std::string& message)
      : std::runtime_error(message), flag_(std::move(flag)) {}
  [[nodiscard]] const std::string& flag() const { return flag_; }

 private:
  std::string flag_;
};

enum class Kind {
  ratio,          ///< plain number
  decibel,        ///< requires a db suffix, returned in dB
  gain,           ///< db/dbi suffix or plain linear, returned linear
  loss,           ///< db suffix or plain linear, returned linear
  frequency,
  temperature,
  time,
  length,
  area,
  volume,
  power,          ///< returned in W
  field,
  field_density,
  data_rate,
  dipole,         ///< returned in C m
  angular_rate,   ///< rad/s, or cycles with hz/khz/mhz (times 2 pi)
};

enum class Constraint { any, positive, nonnegative, unit_interval, at_least_one };

/// Human-readable list of accepted suffixes, e.g. "hz, khz, mhz, ghz, thz".
std::string_view unit_help(Kind kind);
/// Short placeholder shown in --help, e.g. "FREQ".
std::string_view type_name(Kind kind);

/// Parses "<number><suffix>" into SI (or dB for Kind::decibel). Throws
/// UsageError naming the flag when the number or unit is invalid.
double parse_value(std::string_view flag, std::string_view text, Kind kind);

/// Throws FlagDomainError naming the flag when `value` violates `c`.
void check_constraint(std::string_view flag, double value, Constraint c, std::string_view text);

}  // namespace fieldsens::cli
