#include "fieldsens/instrument_dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "fieldsens/csv.hpp"
#include "fieldsens/errors.hpp"
#include "fieldsens/radiometry.hpp"

namespace fieldsens {

std::string_view to_string(Coherence c) {
  return c == Coherence::coherent ? "coherent" : "incoherent";
}

std::string_view to_string(BandwidthMethod m) {
  switch (m) {
    case BandwidthMethod::rf: return "RF";
    case BandwidthMethod::noise: return "noise";
    case BandwidthMethod::chirp: return "chirp";
  }
  return "";
}

std::string_view to_string(ApertureMethod m) {
  switch (m) {
    case ApertureMethod::direct: return "direct";
    case ApertureMethod::phys: return "phys";
    case ApertureMethod::gain: return "gain";
  }
  return "";
}

std::string_view to_string(AntennaTemperatureFlag f) {
  switch (f) {
    case AntennaTemperatureFlag::none: return "";
    case AntennaTemperatureFlag::measured: return "measured";
    case AntennaTemperatureFlag::assumed: return "assumed";
    case AntennaTemperatureFlag::coherent_equivalent: return "coh-eq";
  }
  return "";
}

std::string_view to_string(ReceiverTemperatureMethod m) {
  return m == ReceiverTemperatureMethod::direct ? "direct" : "NF";
}

std::string_view to_string(SystemTemperatureMethod m) {
  switch (m) {
    case SystemTemperatureMethod::sum: return "sum";
    case SystemTemperatureMethod::nedt: return "NEDT";
    case SystemTemperatureMethod::reported: return "reported";
  }
  return "";
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string{};
}

// Throws std::invalid_argument with a message that names the column.
double parse_number(std::string_view cell, std::string_view column) {
  const auto t = trim(cell);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw std::invalid_argument("column '" + std::string(column) + "': '" + std::string(cell) +
                                "' is not a number");
  }
  return v;
}

std::optional<double> parse_optional(std::string_view cell, std::string_view column) {
  if (trim(cell).empty()) return std::nullopt;
  return parse_number(cell, column);
}

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view cell, std::string_view column,
                const std::array<std::pair<std::string_view, Enum>, N>& table) {
  const auto key = lower(trim(cell));
  for (const auto& [name, value] : table) {
    if (key == name) return value;
  }
  throw std::invalid_argument("column '" + std::string(column) + "': unknown tag '" +
                              std::string(cell) + "'");
}

constexpr std::array<std::pair<std::string_view, Coherence>, 2> kCoherenceTags{{
    {"coherent", Coherence::coherent},
    {"incoherent", Coherence::incoherent},
}};
constexpr std::array<std::pair<std::string_view, BandwidthMethod>, 3> kBandwidthTags{{
    {"rf", BandwidthMethod::rf},
    {"noise", BandwidthMethod::noise},
    {"chirp", BandwidthMethod::chirp},
}};
constexpr std::array<std::pair<std::string_view, ApertureMethod>, 3> kApertureTags{{
    {"direct", ApertureMethod::direct},
    {"phys", ApertureMethod::phys},
    {"gain", ApertureMethod::gain},
}};
constexpr std::array<std::pair<std::string_view, AntennaTemperatureFlag>, 4> kAntennaTags{{
    {"", AntennaTemperatureFlag::none},
    {"measured", AntennaTemperatureFlag::measured},
    {"assumed", AntennaTemperatureFlag::assumed},
    {"coh-eq", AntennaTemperatureFlag::coherent_equivalent},
}};
constexpr std::array<std::pair<std::string_view, ReceiverTemperatureMethod>, 3> kReceiverTags{{
    {"", ReceiverTemperatureMethod::direct},
    {"direct", ReceiverTemperatureMethod::direct},
    {"nf", ReceiverTemperatureMethod::noise_figure},
}};
constexpr std::array<std::pair<std::string_view, SystemTemperatureMethod>, 3> kSystemTags{{
    {"sum", SystemTemperatureMethod::sum},
    {"nedt", SystemTemperatureMethod::nedt},
    {"reported", SystemTemperatureMethod::reported},
}};

// Structural checks: which cells each method tag needs.
void check_record(const InstrumentRecord& r) {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (r.instrument.empty()) fail("instrument name is empty");
  if (r.category.empty()) fail("category is empty");
  if (!(r.f0_ghz > 0.0)) fail("f0_ghz must be > 0");
  if (!(r.bandwidth_hz > 0.0)) fail("bandwidth_hz must be > 0");

  switch (r.aperture_method) {
    case ApertureMethod::direct:
      if (!r.a_e_m2) fail("aperture method 'direct' needs a_e_m2");
      break;
    case ApertureMethod::phys:
      if (!r.a_e_m2 && !r.a_phys_m2) fail("aperture method 'phys' needs a_phys_m2 or a_e_m2");
      break;
    case ApertureMethod::gain:
      if (!r.a_e_m2 && !r.gain_dbi) fail("aperture method 'gain' needs gain_dbi or a_e_m2");
      break;
  }
  if (r.a_e_m2 && !(*r.a_e_m2 > 0.0)) fail("a_e_m2 must be > 0");
  if (r.a_phys_m2 && !(*r.a_phys_m2 > 0.0)) fail("a_phys_m2 must be > 0");
  if (r.eta_ap && !(*r.eta_ap > 0.0 && *r.eta_ap <= 1.0)) fail("eta_ap must be in (0, 1]");

  if (r.t_a_flag != AntennaTemperatureFlag::none && !r.t_a_k) fail("t_a_flag set without t_a_k");
  if (r.t_a_k && *r.t_a_k < 0.0) fail("t_a_k must be >= 0");
  if (r.t_rx_k && *r.t_rx_k < 0.0) fail("t_rx_k must be >= 0");
  const bool has_rx = r.t_rx_k.has_value() ||
                      (r.t_rx_method == ReceiverTemperatureMethod::noise_figure && r.nf_db);
  if (r.t_rx_method == ReceiverTemperatureMethod::noise_figure && !has_rx) {
    fail("t_rx_method 'NF' needs nf_db or t_rx_k");
  }

  switch (r.t_sys_method) {
    case SystemTemperatureMethod::sum:
      if (!r.t_sys_k && !(r.t_a_k && has_rx)) fail("t_sys_method 'sum' needs t_a_k and t_rx_k");
      break;
    case SystemTemperatureMethod::nedt:
      if (!r.t_sys_k && !(r.nedt_k && r.tau_s)) fail("t_sys_method 'NEDT' needs nedt_k and tau_s");
      break;
    case SystemTemperatureMethod::reported:
      if (!r.t_sys_k) fail("t_sys_method 'reported' needs t_sys_k");
      break;
  }
  if (r.t_sys_k && !(*r.t_sys_k > 0.0)) fail("t_sys_k must be > 0");
  if (r.rho2 && !(*r.rho2 > 0.0 && *r.rho2 <= 1.0)) fail("rho2 must be in (0, 1]");
}

}  // namespace

ParsedDataset parse_instruments(std::string_view csv_text) {
  const auto rows = csv::parse(csv_text);
  if (rows.empty()) throw SchemaError("dataset has no header row");

  std::map<std::string, std::size_t, std::less<>> index;
  for (std::size_t i = 0; i < rows.front().fields.size(); ++i) {
    index.emplace(lower(trim(rows.front().fields[i])), i);
  }
  for (const auto column : kRequiredColumns) {
    if (!index.contains(column)) {
      throw SchemaError("missing required column: " + std::string(column));
    }
  }
  const std::size_t width = rows.front().fields.size();

  ParsedDataset out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    auto cell = [&](std::string_view column) -> std::string_view {
      const auto it = index.find(column);
      if (it == index.end() || it->second >= row.fields.size()) return {};
      return row.fields[it->second];
    };
    const std::string name(trim(cell("instrument")));
    try {
      if (row.fields.size() != width) {
        throw std::invalid_argument("expected " + std::to_string(width) + " fields, found " +
                                    std::to_string(row.fields.size()));
      }
      InstrumentRecord rec;
      rec.instrument = name;
      rec.mission = std::string(trim(cell("mission")));
      rec.category = std::string(trim(cell("category")));
      rec.coherence = parse_enum(cell("coherence"), "coherence", kCoherenceTags);
      rec.f0_ghz = parse_number(cell("f0_ghz"), "f0_ghz");
      rec.bandwidth_hz = parse_number(cell("bandwidth_hz"), "bandwidth_hz");
      rec.bandwidth_method = parse_enum(cell("bandwidth_method"), "bandwidth_method", kBandwidthTags);
      rec.aperture_method = parse_enum(cell("aperture_method"), "aperture_method", kApertureTags);
      rec.a_e_m2 = parse_optional(cell("a_e_m2"), "a_e_m2");
      rec.a_phys_m2 = parse_optional(cell("a_phys_m2"), "a_phys_m2");
      rec.eta_ap = parse_optional(cell("eta_ap"), "eta_ap");
      rec.gain_dbi = parse_optional(cell("gain_dbi"), "gain_dbi");
      rec.t_a_k = parse_optional(cell("t_a_k"), "t_a_k");
      rec.t_a_flag = parse_enum(cell("t_a_flag"), "t_a_flag", kAntennaTags);
      if (rec.t_a_k && rec.t_a_flag == AntennaTemperatureFlag::none) {
        rec.t_a_flag = AntennaTemperatureFlag::measured;
      }
      rec.t_rx_k = parse_optional(cell("t_rx_k"), "t_rx_k");
      rec.t_rx_method = parse_enum(cell("t_rx_method"), "t_rx_method", kReceiverTags);
      rec.nf_db = parse_optional(cell("nf_db"), "nf_db");
      rec.t_sys_k = parse_optional(cell("t_sys_k"), "t_sys_k");
      rec.t_sys_method = parse_enum(cell("t_sys_method"), "t_sys_method", kSystemTags);
      rec.nedt_k = parse_optional(cell("nedt_k"), "nedt_k");
      rec.tau_s = parse_optional(cell("tau_s"), "tau_s");
      rec.rho2 = parse_optional(cell("rho2"), "rho2");
      rec.reference = std::string(trim(cell("reference")));
      rec.e_free_published = parse_optional(cell(kPublishedFieldColumn), kPublishedFieldColumn);
      rec.e_free = parse_optional(cell(kDerivedFieldColumn), kDerivedFieldColumn);
      check_record(rec);
      out.records.push_back(std::move(rec));
    } catch (const std::invalid_argument& e) {
      out.diagnostics.push_back({row.line, name, "parse",
                                 "row " + std::to_string(row.line) +
                                     (name.empty() ? "" : " (" + name + ")") + ": " + e.what()});
    }
  }
  return out;
}

ParsedDataset load_instruments(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open dataset file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instruments(buf.str());
}

std::string serialize_instruments(std::span<const InstrumentRecord> records) {
  std::vector<std::string> header(kRequiredColumns.begin(), kRequiredColumns.end());
  header.emplace_back(kPublishedFieldColumn);
  header.emplace_back(kDerivedFieldColumn);
  std::string out = csv::format_row(header);
  for (const auto& r : records) {
    out += csv::format_row({
        r.instrument,
        r.mission,
        r.category,
        std::string(to_string(r.coherence)),
        format_number(r.f0_ghz),
        format_number(r.bandwidth_hz),
        std::string(to_string(r.bandwidth_method)),
        std::string(to_string(r.aperture_method)),
        format_optional(r.a_e_m2),
        format_optional(r.a_phys_m2),
        format_optional(r.eta_ap),
        format_optional(r.gain_dbi),
        format_optional(r.t_a_k),
        std::string(to_string(r.t_a_flag)),
        format_optional(r.t_rx_k),
        std::string(to_string(r.t_rx_method)),
        format_optional(r.nf_db),
        format_optional(r.t_sys_k),
        std::string(to_string(r.t_sys_method)),
        format_optional(r.nedt_k),
        format_optional(r.tau_s),
        format_optional(r.rho2),
        r.reference,
        format_optional(r.e_free_published),
        format_optional(r.e_free),
    });
  }
  return out;
}

InstrumentRecord derive_record(const InstrumentRecord& record, const PhysicsConfig& cfg) {
  InstrumentRecord r = record;
  try {
    if (!r.a_e_m2) {
      switch (r.aperture_method) {
        case ApertureMethod::direct:
          throw DomainError("no effective aperture given");
        case ApertureMethod::phys:
          if (!r.a_phys_m2) throw DomainError("no physical aperture given");
          r.a_e_m2 = aperture_from_physical(SquareMeters{*r.a_phys_m2},
                                            r.eta_ap.value_or(kDefaultApertureEfficiency))
                         .value();
          break;
        case ApertureMethod::gain:
          if (!r.gain_dbi) throw DomainError("no antenna gain given");
          r.a_e_m2 = aperture_from_gain(db_to_linear(*r.gain_dbi), r.frequency()).value();
          break;
      }
    }

    if (!r.t_rx_k && r.t_rx_method == ReceiverTemperatureMethod::noise_figure && r.nf_db) {
      r.t_rx_k = trx_from_noise_figure(*r.nf_db).value();
    }

    if (!r.t_sys_k) {
      switch (r.t_sys_method) {
        case SystemTemperatureMethod::sum:
          if (!r.t_a_k || !r.t_rx_k) throw DomainError("T_sys sum needs T_A and T_Rx");
          r.t_sys_k = *r.t_a_k + *r.t_rx_k;
          break;
        case SystemTemperatureMethod::nedt:
          if (!r.nedt_k || !r.tau_s) throw DomainError("T_sys from NEDT needs nedt_k and tau_s");
          r.t_sys_k =
              tsys_from_nedt(Kelvin{*r.nedt_k}, Hertz{r.bandwidth_hz}, Seconds{*r.tau_s}).value();
          break;
        case SystemTemperatureMethod::reported:
          throw DomainError("no system temperature given");
      }
    }

    if (!r.rho2) r.rho2 = default_polarization_coupling(r.coherence);

    r.e_free = nef_from_aperture(Kelvin{*r.t_sys_k}, SquareMeters{*r.a_e_m2}, *r.rho2, cfg).value();
  } catch (const DomainError& e) {
    throw DomainError(r.instrument + ": " + e.what());
  }
  return r;
}

std::vector<InstrumentRecord> derive_records(std::span<const InstrumentRecord> records,
                                             const PhysicsConfig& cfg) {
  std::vector<InstrumentRecord> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(derive_record(r, cfg));
  return out;
}

namespace {

double relative_difference(double value, double reference) {
  return std::abs(value - reference) / std::abs(reference);
}

std::string describe(double value) {
  std::ostringstream s;
  s.precision(4);
  s << value;
  return s.str();
}

constexpr double kBreakdownTolerance = 0.01;

}  // namespace

PublishedFieldCheck check_published_fields(std::span<const InstrumentRecord> derived,
                                           double tolerance) {
  PublishedFieldCheck out;
  out.rows = derived.size();
  for (const auto& r : derived) {
    if (!r.e_free_published || !r.e_free) continue;
    ++out.compared;
    const double rel = relative_difference(*r.e_free, *r.e_free_published);
    if (rel <= tolerance) {
      ++out.matched;
    } else {
      out.mismatches.push_back(
          {0, r.instrument, "e_free_mismatch",
           r.instrument + ": recomputed E_free " + describe(*r.e_free) + " vs published " +
               describe(*r.e_free_published) + " (" + describe(100.0 * rel) + "% off)"});
    }
  }
  return out;
}

std::vector<DatasetDiagnostic> consistency_diagnostics(std::span<const InstrumentRecord> derived,
                                                       double tolerance) {
  std::vector<DatasetDiagnostic> out;
  for (const auto& r : derived) {
    if (r.t_sys_k && r.t_sys_method == SystemTemperatureMethod::sum && r.t_a_k && r.t_rx_k) {
      const double sum = *r.t_a_k + *r.t_rx_k;
      if (relative_difference(*r.t_sys_k, sum) > kBreakdownTolerance) {
        out.push_back({0, r.instrument, "t_sys_sum_mismatch",
                       r.instrument + ": T_sys " + describe(*r.t_sys_k) + " K vs T_A + T_Rx = " +
                           describe(sum) + " K"});
      }
    }
    if (r.t_sys_k && r.t_sys_method == SystemTemperatureMethod::nedt && r.nedt_k && r.tau_s) {
      const double inferred =
          tsys_from_nedt(Kelvin{*r.nedt_k}, Hertz{r.bandwidth_hz}, Seconds{*r.tau_s}).value();
      if (relative_difference(*r.t_sys_k, inferred) > kBreakdownTolerance) {
        out.push_back({0, r.instrument, "t_sys_nedt_mismatch",
                       r.instrument + ": T_sys " + describe(*r.t_sys_k) +
                           " K vs NEDT sqrt(B tau) = " + describe(inferred) + " K"});
      }
    }
    if (r.a_e_m2 && r.aperture_method == ApertureMethod::phys && r.a_phys_m2) {
      const double expected = *r.a_phys_m2 * r.eta_ap.value_or(kDefaultApertureEfficiency);
      if (relative_difference(*r.a_e_m2, expected) > kBreakdownTolerance) {
        out.push_back({0, r.instrument, "aperture_mismatch",
                       r.instrument + ": A_e " + describe(*r.a_e_m2) + " m2 vs eta_ap A_phys = " +
                           describe(expected) + " m2"});
      }
    }
    if (r.a_e_m2 && r.aperture_method == ApertureMethod::gain && r.gain_dbi) {
      const double expected = aperture_from_gain(db_to_linear(*r.gain_dbi), r.frequency()).value();
      if (relative_difference(*r.a_e_m2, expected) > kBreakdownTolerance) {
        out.push_back({0, r.instrument, "aperture_mismatch",
                       r.instrument + ": A_e " + describe(*r.a_e_m2) +
                           " m2 vs G lambda^2/4pi = " + describe(expected) + " m2"});
      }
    }
    if (r.rho2 && *r.rho2 != default_polarization_coupling(r.coherence)) {
      out.push_back({0, r.instrument, "rho2_override",
                     r.instrument + ": rho2 " + describe(*r.rho2) + " overrides the " +
                         std::string(to_string(r.coherence)) + " default"});
    }
  }
  auto published = check_published_fields(derived, tolerance);
  out.insert(out.end(), published.mismatches.begin(), published.mismatches.end());
  return out;
}

double round_significant(double x, int digits) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  if (digits < 1) throw DomainError("significant digits must be >= 1");
  const double mag = std::abs(x);
  int exponent = static_cast<int>(std::floor(std::log10(mag)));
  // Guard log10 rounding at exact powers of ten.
  if (std::pow(10.0, exponent) > mag) --exponent;
  if (std::pow(10.0, exponent + 1) <= mag) ++exponent;

  const int shift = digits - 1 - exponent;
  // Scale by an exactly representable power of ten in whichever direction.
  const double p = std::pow(10.0, std::abs(shift));
  const double scaled = shift >= 0 ? mag * p : mag / p;
  // Nudge so decimal ties that landed just below .5 in binary still round up.
  const double rounded = std::floor(scaled + 0.5 + 1e-9);
  const double result = shift >= 0 ? rounded / p : rounded * p;
  return std::copysign(result, x);
}

std::vector<std::string> categories(std::span<const InstrumentRecord> records) {
  std::vector<std::string> out;
  for (const auto& r : records) {
    if (std::find(out.begin(), out.end(), r.category) == out.end()) out.push_back(r.category);
  }
  return out;
}

CategoryRange synthesize_ranges(std::span<const InstrumentRecord> records,
                                std::string_view category, const RangeOptions& options) {
  std::vector<const InstrumentRecord*> members;
  for (const auto& r : records) {
    if (r.category == category) members.push_back(&r);
  }
  if (members.empty()) {
    throw DomainError("no records in category '" + std::string(category) + "'");
  }
  for (const auto* r : members) {
    if (!r->is_derived()) throw DomainError(r->instrument + ": record is not derived");
  }
  const double rho2 = *members.front()->rho2;
  for (const auto* r : members) {
    if (*r->rho2 != rho2) {
      throw DomainError("mixed rho2 in category '" + std::string(category) + "': " +
                        members.front()->instrument + " has " + describe(rho2) + ", " +
                        r->instrument + " has " + describe(*r->rho2));
    }
  }

  auto extrema = [&](auto getter) {
    Interval iv{getter(*members.front()), getter(*members.front())};
    for (const auto* r : members) {
      iv.min = std::min(iv.min, getter(*r));
      iv.max = std::max(iv.max, getter(*r));
    }
    return iv;
  };
  const Interval f0 = extrema([](const InstrumentRecord& r) { return r.frequency().value(); });
  const Interval ae = extrema([](const InstrumentRecord& r) { return *r.a_e_m2; });
  const Interval tsys = extrema([](const InstrumentRecord& r) { return *r.t_sys_k; });
  const Interval bw = extrema([](const InstrumentRecord& r) { return r.bandwidth_hz; });

  const double lo = options.lower_margin;
  const double hi = options.upper_margin;
  CategoryRange out;
  out.category = std::string(category);
  out.coherence = members.front()->coherence;
  out.rho2 = rho2;
  out.members = members.size();
  out.f0_hz = f0;
  out.effective_aperture_m2 = {lo * ae.min, hi * ae.max};
  out.system_temperature_k = {lo * tsys.min, hi * tsys.max};
  out.bandwidth_hz = {lo * bw.min, hi * bw.max};
  out.e_free = {
      nef_from_aperture(Kelvin{lo * tsys.min}, SquareMeters{hi * ae.max}, rho2, options.physics)
          .value(),
      nef_from_aperture(Kelvin{hi * tsys.max}, SquareMeters{lo * ae.min}, rho2, options.physics)
          .value(),
  };

  if (options.rounding == Rounding::two_significant) {
    for (Interval* iv : {&out.effective_aperture_m2, &out.system_temperature_k, &out.bandwidth_hz,
                         &out.e_free}) {
      iv->min = round_significant(iv->min, 2);
      iv->max = round_significant(iv->max, 2);
    }
  }
  return out;
}

std::vector<CategoryRange> synthesize_all_ranges(std::span<const InstrumentRecord> records,
                                                 const RangeOptions& options) {
  std::vector<CategoryRange> out;
  for (const auto& c : categories(records)) out.push_back(synthesize_ranges(records, c, options));
  return out;
}

namespace {

constexpr std::array<std::string_view, 14> kRangeColumns = {
    "category",  "coherence", "rho2",      "members",   "f0_min_ghz", "f0_max_ghz", "a_e_min_m2",
    "a_e_max_m2", "t_sys_min_k", "t_sys_max_k", "bw_min_hz", "bw_max_hz", "e_min",   "e_max"};

}  // namespace

std::string serialize_ranges(std::span<const CategoryRange> ranges) {
  std::string out =
      csv::format_row(std::vector<std::string>(kRangeColumns.begin(), kRangeColumns.end()));
  for (const auto& r : ranges) {
    out += csv::format_row({
        r.category,
        std::string(to_string(r.coherence)),
        format_number(r.rho2),
        std::to_string(r.members),
        format_number(r.f0_hz.min / 1e9),
        format_number(r.f0_hz.max / 1e9),
        format_number(r.effective_aperture_m2.min),
        format_number(r.effective_aperture_m2.max),
        format_number(r.system_temperature_k.min),
        format_number(r.system_temperature_k.max),
        format_number(r.bandwidth_hz.min),
        format_number(r.bandwidth_hz.max),
        format_number(r.e_free.min),
        format_number(r.e_free.max),
    });
  }
  return out;
}

std::vector<CategoryRange> parse_ranges(std::string_view csv_text) {
  const auto rows = csv::parse(csv_text);
  if (rows.empty()) throw SchemaError("range table has no header row");
  std::map<std::string, std::size_t, std::less<>> index;
  for (std::size_t i = 0; i < rows.front().fields.size(); ++i) {
    index.emplace(lower(trim(rows.front().fields[i])), i);
  }
  for (const auto column : kRangeColumns) {
    if (column == "members") continue;
    if (!index.contains(column)) {
      throw SchemaError("missing required column: " + std::string(column));
    }
  }

  std::vector<CategoryRange> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    auto cell = [&](std::string_view column) -> std::string_view {
      const auto it = index.find(column);
      if (it == index.end() || it->second >= row.fields.size()) return {};
      return row.fields[it->second];
    };
    auto number = [&](std::string_view column) {
      try {
        return parse_number(cell(column), column);
      } catch (const std::invalid_argument& e) {
        throw SchemaError("range table line " + std::to_string(row.line) + ": " + e.what());
      }
    };
    CategoryRange r;
    r.category = std::string(trim(cell("category")));
    try {
      r.coherence = parse_enum(cell("coherence"), "coherence", kCoherenceTags);
    } catch (const std::invalid_argument& e) {
      throw SchemaError("range table line " + std::to_string(row.line) + ": " + e.what());
    }
    r.rho2 = number("rho2");
    if (!trim(cell("members")).empty()) r.members = static_cast<std::size_t>(number("members"));
    r.f0_hz = {number("f0_min_ghz") * 1e9, number("f0_max_ghz") * 1e9};
    r.effective_aperture_m2 = {number("a_e_min_m2"), number("a_e_max_m2")};
    r.system_temperature_k = {number("t_sys_min_k"), number("t_sys_max_k")};
    r.bandwidth_hz = {number("bw_min_hz"), number("bw_max_hz")};
    r.e_free = {number("e_min"), number("e_max")};
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

// One unit in the second significant digit of the reference value.
double second_digit_unit(double reference) {
  if (reference == 0.0) return 0.0;
  const int exponent = static_cast<int>(std::floor(std::log10(std::abs(reference))));
  return std::pow(10.0, exponent - 1);
}

}  // namespace

std::vector<DatasetDiagnostic> compare_ranges(std::span<const CategoryRange> computed,
                                              std::span<const CategoryRange> reference) {
  std::vector<DatasetDiagnostic> out;
  for (const auto& ref : reference) {
    const auto it = std::find_if(computed.begin(), computed.end(),
                                 [&](const CategoryRange& c) { return c.category == ref.category; });
    if (it == computed.end()) {
      out.push_back({0, ref.category, "range_missing",
                     "category '" + ref.category + "' has no computed range"});
      continue;
    }
    auto within_unit = [&](std::string_view what, double got, double want) {
      // Small slack absorbs binary representation of the decimal unit.
      if (std::abs(got - want) > second_digit_unit(want) * (1.0 + 1e-9)) {
        out.push_back({0, ref.category, "range_bound_mismatch",
                       ref.category + ": " + std::string(what) + " " + describe(got) +
                           " vs reference " + describe(want)});
      }
    };
    auto exact = [&](std::string_view what, double got, double want) {
      if (round_significant(got, 2) != round_significant(want, 2)) {
        out.push_back({0, ref.category, "e_free_range_mismatch",
                       ref.category + ": " + std::string(what) + " " + describe(got) +
                           " vs reference " + describe(want)});
      }
    };
    within_unit("a_e_min", it->effective_aperture_m2.min, ref.effective_aperture_m2.min);
    within_unit("a_e_max", it->effective_aperture_m2.max, ref.effective_aperture_m2.max);
    within_unit("t_sys_min", it->system_temperature_k.min, ref.system_temperature_k.min);
    within_unit("t_sys_max", it->system_temperature_k.max, ref.system_temperature_k.max);
    within_unit("bw_min", it->bandwidth_hz.min, ref.bandwidth_hz.min);
    within_unit("bw_max", it->bandwidth_hz.max, ref.bandwidth_hz.max);
    exact("e_min", it->e_free.min, ref.e_free.min);
    exact("e_max", it->e_free.max, ref.e_free.max);
  }
  return out;
}

PlotData emit_plot_data(std::span<const CategoryRange> ranges, std::span<const PlotMarker> markers,
                        const PlotOptions& options) {
  PlotData out;
  for (const auto& r : ranges) {
    out.rectangles.push_back({r.category, r.coherence, r.bandwidth_hz.min, r.bandwidth_hz.max,
                              r.e_free.min, r.e_free.max});
  }
  if (options.rydberg_marker_bandwidth_hz) {
    out.markers.push_back({"Rydberg MW-optical converter", *options.rydberg_marker_bandwidth_hz,
                           options.rydberg_marker_e_field});
  }
  out.markers.insert(out.markers.end(), markers.begin(), markers.end());
  if (options.thermal_reference_e_field) {
    out.reference_lines.push_back(
        {"free-space thermal field, 290 K", *options.thermal_reference_e_field});
  }
  return out;
}

}  // namespace fieldsens
