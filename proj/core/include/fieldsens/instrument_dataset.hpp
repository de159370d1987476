#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fieldsens/fieldmetrics.hpp"
#include "fieldsens/quantities.hpp"

namespace fieldsens {

enum class BandwidthMethod { rf, noise, chirp };

/// How A_e was obtained. `phys` and `gain` record provenance even when the
/// dataset carries the resulting A_e directly.
enum class ApertureMethod { direct, phys, gain };

enum class AntennaTemperatureFlag {
  none,                 ///< no antenna temperature given
  measured,
  assumed,
  coherent_equivalent,  ///< bookkeeping term, not an observed T_A
};

enum class ReceiverTemperatureMethod { direct, noise_figure };

/// How T_sys was obtained: T_A + T_Rx, inverted from a reported NEDT, or taken
/// as reported without a breakdown.
enum class SystemTemperatureMethod { sum, nedt, reported };

/// One row of the instrument dataset. Optional fields are cells that may be
/// empty in the file; `derive_record` fills the derived ones.
struct InstrumentRecord {
  std::string instrument;
  std::string mission;
  std::string category;
  Coherence coherence = Coherence::coherent;
  double f0_ghz = 0.0;
  double bandwidth_hz = 0.0;
  BandwidthMethod bandwidth_method = BandwidthMethod::rf;
  ApertureMethod aperture_method = ApertureMethod::direct;
  std::optional<double> a_e_m2;
  std::optional<double> a_phys_m2;
  std::optional<double> eta_ap;
  std::optional<double> gain_dbi;
  std::optional<double> t_a_k;
  AntennaTemperatureFlag t_a_flag = AntennaTemperatureFlag::none;
  std::optional<double> t_rx_k;
  ReceiverTemperatureMethod t_rx_method = ReceiverTemperatureMethod::direct;
  std::optional<double> nf_db;
  std::optional<double> t_sys_k;
  SystemTemperatureMethod t_sys_method = SystemTemperatureMethod::sum;
  std::optional<double> nedt_k;
  std::optional<double> tau_s;
  std::optional<double> rho2;
  std::string reference;
  std::optional<double> e_free_published;  ///< value printed in the source table
  std::optional<double> e_free;            ///< recomputed by derive_record

  [[nodiscard]] Hertz frequency() const { return Hertz{f0_ghz * 1e9}; }
  [[nodiscard]] bool is_derived() const {
    return a_e_m2 && t_sys_k && rho2 && e_free;
  }

  bool operator==(const InstrumentRecord&) const = default;
};

inline constexpr std::array<std::string_view, 23> kRequiredColumns = {
    "instrument", "mission",     "category",     "coherence",     "f0_ghz",
    "bandwidth_hz", "bandwidth_method", "aperture_method", "a_e_m2", "a_phys_m2",
    "eta_ap",     "gain_dbi",    "t_a_k",        "t_a_flag",      "t_rx_k",
    "t_rx_method", "nf_db",      "t_sys_k",      "t_sys_method",  "nedt_k",
    "tau_s",      "rho2",        "reference"};

/// Optional trailing columns understood by the reader and always written.
inline constexpr std::string_view kPublishedFieldColumn = "e_free_published";
inline constexpr std::string_view kDerivedFieldColumn = "e_free";

struct DatasetDiagnostic {
  std::size_t line = 0;  ///< 0 when not tied to a file line
  std::string instrument;
  std::string code;  ///< machine-readable kind, e.g. "parse", "e_free_mismatch"
  std::string message;
};

struct ParsedDataset {
  std::vector<InstrumentRecord> records;
  std::vector<DatasetDiagnostic> diagnostics;  ///< rejected rows
};

/// Reads the dataset CSV. A missing required column throws SchemaError; bad
/// cells reject the row and add a diagnostic naming it.
ParsedDataset parse_instruments(std::string_view csv_text);
ParsedDataset load_instruments(const std::filesystem::path& path);

/// Writes records back with the same schema (required columns followed by the
/// published and derived field columns). Numbers use the shortest exact form.
std::string serialize_instruments(std::span<const InstrumentRecord> records);

/// Fills A_e, T_Rx, T_sys, rho^2 and E_free. Values present in the record are
/// kept; only gaps are derived. Idempotent.
InstrumentRecord derive_record(const InstrumentRecord& record,
                               const PhysicsConfig& cfg = PhysicsConfig::standard());
std::vector<InstrumentRecord> derive_records(std::span<const InstrumentRecord> records,
                                             const PhysicsConfig& cfg = PhysicsConfig::standard());

/// Cross-checks on derived records: published E_free beyond `tolerance`
/// (relative), T_sys that disagrees with its own breakdown, apertures that
/// disagree with their inputs, rho^2 overriding the coherence default.
std::vector<DatasetDiagnostic> consistency_diagnostics(std::span<const InstrumentRecord> derived,
                                                       double tolerance = 0.10);

struct PublishedFieldCheck {
  std::size_t rows = 0;
  std::size_t compared = 0;
  std::size_t matched = 0;
  std::vector<DatasetDiagnostic> mismatches;
};

/// Recomputed E_free against the printed column, relative tolerance.
PublishedFieldCheck check_published_fields(std::span<const InstrumentRecord> derived,
                                           double tolerance = 0.10);

struct Interval {
  double min = 0.0;
  double max = 0.0;
  bool operator==(const Interval&) const = default;
};

struct CategoryRange {
  std::string category;
  Coherence coherence = Coherence::coherent;
  double rho2 = 1.0;
  Interval f0_hz;
  Interval effective_aperture_m2;
  Interval system_temperature_k;
  Interval bandwidth_hz;
  Interval e_free;
  std::size_t members = 0;

  bool operator==(const CategoryRange&) const = default;
};

enum class Rounding { two_significant, none };

struct RangeOptions {
  double lower_margin = 0.8;
  double upper_margin = 1.2;
  Rounding rounding = Rounding::two_significant;
  PhysicsConfig physics = PhysicsConfig::standard();
};

/// Round half away from zero to `digits` significant figures.
double round_significant(double x, int digits);

/// Category names in order of first appearance.
std::vector<std::string> categories(std::span<const InstrumentRecord> records);

/// Extrema per parameter, margins on A_e, T_sys and bandwidth (not f0), E_free
/// from the widened (T_sys, A_e) corners, then rounding. Requires derived
/// records, a non-empty category and a single rho^2 within it.
CategoryRange synthesize_ranges(std::span<const InstrumentRecord> records,
                                std::string_view category, const RangeOptions& options = {});

std::vector<CategoryRange> synthesize_all_ranges(std::span<const InstrumentRecord> records,
                                                 const RangeOptions& options = {});

/// CSV with one row per category: category, coherence, rho2, members, f0 in
/// GHz, A_e, T_sys, bandwidth and E_free bounds.
std::string serialize_ranges(std::span<const CategoryRange> ranges);
std::vector<CategoryRange> parse_ranges(std::string_view csv_text);

/// Compares computed ranges against reference ranges (e.g. a published table).
/// A_e, T_sys and bandwidth bounds may differ by one unit in the second
/// significant digit; E_free bounds must match after rounding. Every other
/// difference, and every reference category missing from `computed`, yields a
/// diagnostic.
std::vector<DatasetDiagnostic> compare_ranges(std::span<const CategoryRange> computed,
                                              std::span<const CategoryRange> reference);

struct PlotRectangle {
  std::string category;
  Coherence coherence = Coherence::coherent;
  double bw_min = 0.0;
  double bw_max = 0.0;
  double e_min = 0.0;
  double e_max = 0.0;
};

struct PlotMarker {
  std::string name;
  double bandwidth_hz = 0.0;
  double e_field = 0.0;
};

struct PlotReferenceLine {
  std::string name;
  double e_field = 0.0;
};

/// Sensitivity of the Rydberg microwave-optical converter, 4 nV cm^-1 Hz^-1/2.
inline constexpr double kRydbergConverterNef = 4e-7;

struct PlotOptions {
  /// Bandwidth coordinate of the Rydberg converter marker; the marker is only
  /// emitted when this is set.
  std::optional<double> rydberg_marker_bandwidth_hz;
  double rydberg_marker_e_field = kRydbergConverterNef;
  /// Free-space thermal field at 290 K. There is no derivation for this line,
  /// so it is a plain configurable constant and omitted when unset.
  std::optional<double> thermal_reference_e_field;
};

struct PlotData {
  std::vector<PlotRectangle> rectangles;
  std::vector<PlotMarker> markers;
  std::vector<PlotReferenceLine> reference_lines;
};

/// One rectangle per range (bandwidth span x E_free span, passed through
/// unchanged), then the Rydberg marker if configured, then `markers`.
PlotData emit_plot_data(std::span<const CategoryRange> ranges, std::span<const PlotMarker> markers,
                        const PlotOptions& options = {});

std::string_view to_string(Coherence c);
std::string_view to_string(BandwidthMethod m);
std::string_view to_string(ApertureMethod m);
std::string_view to_string(AntennaTemperatureFlag f);
std::string_view to_string(ReceiverTemperatureMethod m);
std::string_view to_string(SystemTemperatureMethod m);

}  // namespace fieldsens
