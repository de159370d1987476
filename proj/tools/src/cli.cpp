#include "fieldsens_cli/cli.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "fieldsens/csv.hpp"
#include "fieldsens/errors.hpp"
#include "fieldsens/fieldmetrics.hpp"
#include "fieldsens/instrument_dataset.hpp"
#include "fieldsens/linkbudget.hpp"
#include "fieldsens/radar.hpp"
#include "fieldsens/radiometry.hpp"
#include "fieldsens/rydberg.hpp"
#include "report.hpp"
#include "units.hpp"

#ifndef FIELDSENS_DATA_DIR
#define FIELDSENS_DATA_DIR "data"
#endif

namespace fieldsens::cli {

namespace {

constexpr std::array<std::string_view, 11> kSubcommands = {
    "nedt",    "calibrate", "radar",          "budget",         "nef",
    "convert", "enhance",   "rydberg",        "dataset-derive", "dataset-ranges",
    "dataset-plotdata"};

constexpr std::array<OperationBinding, 44> kRegistry{{
    {"quantities", "db_to_linear", "convert"},
    {"quantities", "linear_to_db", "convert"},
    {"quantities", "frequency_to_wavelength", "convert"},
    {"quantities", "power_from_field", "convert"},
    {"radiometry", "nedt", "nedt"},
    {"radiometry", "radiometer_output_power", "nedt"},
    {"radiometry", "tsys_from_nedt", "nedt"},
    {"radiometry", "calibrate_hot_cold", "calibrate"},
    {"radar", "received_power", "radar"},
    {"radar", "processed_received_power", "radar"},
    {"radar", "processing_gain_from_pulse", "radar"},
    {"radar", "noise_power", "radar"},
    {"radar", "snr", "radar"},
    {"radar", "nesz", "radar"},
    {"radar", "range_resolution", "radar"},
    {"radar", "max_range_ratio", "radar"},
    {"linkbudget", "eirp", "budget"},
    {"linkbudget", "system_noise_temperature", "budget"},
    {"linkbudget", "figure_of_merit", "budget"},
    {"linkbudget", "free_space_loss", "budget"},
    {"linkbudget", "total_loss", "budget"},
    {"linkbudget", "c_over_n0", "budget"},
    {"linkbudget", "eb_over_n0", "budget"},
    {"linkbudget", "evaluate_link", "budget"},
    {"fieldmetrics", "sefd", "nef"},
    {"fieldmetrics", "nef_from_aperture", "nef"},
    {"fieldmetrics", "nef_from_gain", "nef"},
    {"fieldmetrics", "tsys_from_nef", "convert"},
    {"fieldmetrics", "aperture_from_gain", "convert"},
    {"fieldmetrics", "aperture_from_physical", "convert"},
    {"fieldmetrics", "trx_from_noise_figure", "convert"},
    {"fieldmetrics", "enhancement_factor_cavity", "enhance"},
    {"fieldmetrics", "local_field_requirement", "enhance"},
    {"fieldmetrics", "meets_classical_reference", "enhance"},
    {"rydberg_noise", "qpn_nef", "rydberg"},
    {"rydberg_noise", "photon_shot_noise_nep", "rydberg"},
    {"rydberg_noise", "rabi_from_field", "rydberg"},
    {"rydberg_noise", "field_from_rabi", "rydberg"},
    {"rydberg_noise", "ac_stark_shift", "rydberg"},
    {"rydberg_noise", "compare_to_classical", "rydberg"},
    {"instrument_dataset", "parse_instruments", "dataset-derive"},
    {"instrument_dataset", "derive_record", "dataset-derive"},
    {"instrument_dataset", "synthesize_ranges", "dataset-ranges"},
    {"instrument_dataset", "emit_plot_data", "dataset-plotdata"},
}};

class Flags {
 public:
  explicit Flags(CLI::App* app) : app_(app) {}

  CLI::Option* add(const std::string& name, Kind kind, const std::string& what) {
    kinds_[name] = kind;
    return app_->add_option(name, values_[name], what + " [" + std::string(unit_help(kind)) + "]")
        ->type_name(std::string(type_name(kind)));
  }

  CLI::Option* add_list(const std::string& name, const std::string& what,
                        const std::string& type_label) {
    return app_->add_option(name, lists_[name], what)->type_name(type_label);
  }

  CLI::Option* add_text(const std::string& name, const std::string& what,
                        const std::string& type_label = "TEXT") {
    return app_->add_option(name, values_[name], what)->type_name(type_label);
  }

  CLI::Option* add_switch(const std::string& name, const std::string& what) {
    return app_->add_flag(name, switches_[name], what);
  }

  [[nodiscard]] bool has(const std::string& name) const { return app_->count(name) > 0; }

  [[nodiscard]] double get(const std::string& name, Constraint c = Constraint::any) const {
    if (!has(name)) throw UsageError("missing required flag " + name);
    const auto& text = values_.at(name);
    const double v = parse_value(name, text, kinds_.at(name));
    check_constraint(name, v, c, text);
    return v;
  }

  [[nodiscard]] std::optional<double> maybe(const std::string& name,
                                            Constraint c = Constraint::any) const {
    if (!has(name)) return std::nullopt;
    return get(name, c);
  }

  [[nodiscard]] double get_or(const std::string& name, Constraint c, double fallback) const {
    return has(name) ? get(name, c) : fallback;
  }

  [[nodiscard]] const std::string& text(const std::string& name) const { return values_.at(name); }
  [[nodiscard]] const std::vector<std::string>& list(const std::string& name) const {
    return lists_.at(name);
  }
  [[nodiscard]] bool on(const std::string& name) const { return switches_.at(name); }

 private:
  CLI::App* app_;
  std::map<std::string, std::string> values_;
  std::map<std::string, std::vector<std::string>> lists_;
  std::map<std::string, bool> switches_;
  std::map<std::string, Kind> kinds_;
};

struct Output {
  Json json = Json::object();
  std::optional<std::string> table;  ///< native CSV for dataset subcommands
};

struct Context {
  PhysicsConfig cfg;
  std::ostream& err;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::filesystem::path default_dataset() {
  if (const char* dir = std::getenv("FIELDSENS_DATA_DIR"); dir && *dir) {
    return std::filesystem::path(dir) / "spaceborne_receivers.csv";
  }
  return std::filesystem::path(FIELDSENS_DATA_DIR) / "spaceborne_receivers.csv";
}

PhysicsConfig physics_from_environment() {
  const char* mode = std::getenv("FIELDSENS_ETA0");
  if (mode == nullptr || *mode == '\0') return PhysicsConfig::standard();
  const std::string m(mode);
  if (m == "rounded" || m == "377") return PhysicsConfig::rounded_impedance();
  if (m == "standard" || m == "exact") return PhysicsConfig::standard();
  throw UsageError("FIELDSENS_ETA0 must be 'standard' or 'rounded' (got '" + m + "')");
}

/// Splits "NAME=VALUE" from a repeated flag.
std::pair<std::string, std::string> split_assignment(const std::string& flag,
                                                     const std::string& item) {
  const auto eq = item.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw UsageError(flag + ": expected NAME=VALUE, got '" + item + "'");
  }
  return {item.substr(0, eq), item.substr(eq + 1)};
}

double rho2_from(const Flags& f) {
  if (f.has("--rho2")) return f.get("--rho2", Constraint::unit_interval);
  const auto& c = f.text("--coherence");
  if (c == "incoherent") return default_polarization_coupling(Coherence::incoherent);
  return default_polarization_coupling(Coherence::coherent);
}

void add_rho2_flags(Flags& f) {
  f.add("--rho2", Kind::ratio, "Polarization coupling, overrides --coherence");
  f.add_text("--coherence", "Sets rho2: coherent 1, incoherent 0.5", "MODE")
      ->check(CLI::IsMember({"coherent", "incoherent"}))
      ->default_str("coherent");
}

// ---------------------------------------------------------------- nedt

void setup_nedt(Flags& f) {
  f.add("--t-a", Kind::temperature, "Antenna temperature T_A");
  f.add("--t-rx", Kind::temperature, "Receiver noise temperature T_Rx");
  f.add("--bandwidth", Kind::frequency, "Detection bandwidth")->required();
  f.add("--tau", Kind::time, "Integration time")->required();
  f.add("--gain-stability", Kind::ratio, "Fractional gain fluctuation dG/G, default 0");
  f.add("--nedt", Kind::temperature, "Reported NEDT; switches to T_sys inversion")
      ->excludes("--t-a")
      ->excludes("--t-rx");
  f.add("--radiometer-gain", Kind::gain, "Receiver gain for the output power");
}

Output run_nedt(const Flags& f, const Context&) {
  Output o;
  const double bw = f.get("--bandwidth", Constraint::positive);
  const double tau = f.get("--tau", Constraint::positive);
  const double gs = f.get_or("--gain-stability", Constraint::nonnegative, 0.0);
  o.json["bandwidth_hz"] = bw;
  o.json["integration_time_s"] = tau;
  o.json["gain_stability"] = gs;

  if (f.has("--nedt")) {
    const double measured = f.get("--nedt", Constraint::positive);
    const Kelvin tsys = gs > 0.0 ? tsys_from_nedt(Kelvin{measured}, Hertz{bw}, Seconds{tau}, gs)
                                 : tsys_from_nedt(Kelvin{measured}, Hertz{bw}, Seconds{tau});
    o.json["nedt_k"] = measured;
    o.json["t_sys_k"] = tsys.value();
    return o;
  }

  ReceiverNoiseModel m{Kelvin{f.get("--t-a", Constraint::nonnegative)},
                       Kelvin{f.get("--t-rx", Constraint::nonnegative)}, Hertz{bw}, Seconds{tau},
                       gs};
  ReceiverNoiseModel ideal = m;
  ideal.gain_stability = 0.0;
  o.json["t_a_k"] = m.antenna_temperature.value();
  o.json["t_rx_k"] = m.receiver_temperature.value();
  o.json["t_sys_k"] = m.system_temperature().value();
  o.json["nedt_k"] = nedt(m).value();
  o.json["nedt_radiometric_k"] = nedt(ideal).value();
  if (f.has("--radiometer-gain")) {
    const double g = f.get("--radiometer-gain", Constraint::positive);
    o.json["radiometer_gain"] = g;
    o.json["output_power_w"] =
        radiometer_output_power(g, m.antenna_temperature, m.receiver_temperature, Hertz{bw}).value();
  }
  return o;
}

// ---------------------------------------------------------------- calibrate

void setup_calibrate(Flags& f) {
  f.add("--bandwidth", Kind::frequency, "Detection bandwidth")->required();
  f.add_list("--point",
             "Calibration load as TEMP:POWER, repeatable [k : w, mw, uw, dbw, dbm]",
             "TEMP:POWER");
  f.add_text("--input", "CSV with columns load_temperature_k,output_power_w", "PATH");
}

Output run_calibrate(const Flags& f, const Context& ctx) {
  std::vector<CalibrationPoint> points;
  if (f.has("--input")) {
    const auto rows = csv::parse(read_file(f.text("--input")));
    if (rows.empty()) throw SchemaError("calibration file has no header row");
    const auto& header = rows.front().fields;
    auto column = [&](std::string_view name) {
      for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
      }
      throw SchemaError("missing required column: " + std::string(name));
    };
    const auto ti = column("load_temperature_k");
    const auto pi = column("output_power_w");
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const auto& row = rows[r];
      if (row.fields.size() <= std::max(ti, pi)) {
        throw SchemaError("calibration file line " + std::to_string(row.line) + ": too few fields");
      }
      try {
        points.push_back({Kelvin{parse_value("load_temperature_k", row.fields[ti], Kind::ratio)},
                          Watts{parse_value("output_power_w", row.fields[pi], Kind::ratio)}});
      } catch (const UsageError& e) {
        throw SchemaError("calibration file line " + std::to_string(row.line) + ": " + e.what());
      }
    }
  }
  if (f.has("--point")) {
    for (const auto& item : f.list("--point")) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) {
        throw UsageError("--point: expected TEMP:POWER, got '" + item + "'");
      }
      const auto t_text = item.substr(0, colon);
      const auto p_text = item.substr(colon + 1);
      const double t = parse_value("--point", t_text, Kind::temperature);
      check_constraint("--point", t, Constraint::nonnegative, t_text);
      const double p = parse_value("--point", p_text, Kind::power);
      check_constraint("--point", p, Constraint::nonnegative, p_text);
      points.push_back({Kelvin{t}, Watts{p}});
    }
  }
  if (points.size() < 2) throw UsageError("calibrate needs at least two --point loads or --input");

  const double bw = f.get("--bandwidth", Constraint::positive);
  CalibrationResult fit;
  try {
    fit = calibrate_hot_cold(points, Hertz{bw});
  } catch (const SingularFitError& e) {
    throw FlagDomainError("--point", e.what());
  }
  Output o;
  o.json["points"] = points.size();
  o.json["bandwidth_hz"] = bw;
  o.json["gain"] = fit.gain;
  o.json["gain_db"] = linear_to_db(fit.gain);
  o.json["receiver_temperature_k"] = fit.receiver_temperature.value();
  if (fit.status == CalibrationStatus::negative_receiver_temperature) {
    o.json["status"] = "negative_receiver_temperature";
    ctx.err << "warning: fitted receiver temperature is negative\n";
  } else {
    o.json["status"] = "ok";
  }
  return o;
}

// ---------------------------------------------------------------- radar

void setup_radar(Flags& f) {
  f.add("--tx-power", Kind::power, "Transmit power P_t")->required();
  f.add("--tx-gain", Kind::gain, "Transmit antenna gain G_t")->required();
  f.add("--rx-gain", Kind::gain, "Receive antenna gain G_r")->required();
  auto* freq = f.add("--frequency", Kind::frequency, "Carrier frequency");
  f.add("--wavelength", Kind::length, "Carrier wavelength")->excludes(freq);
  f.add("--range", Kind::length, "Slant range R")->required();
  auto* rcs = f.add("--rcs", Kind::area, "Point-target cross section sigma");
  f.add("--sigma0", Kind::gain, "Normalized backscatter sigma0")->excludes(rcs);
  f.add("--cell", Kind::area, "Resolution-cell area A_res")->excludes(rcs);
  f.add("--system-loss", Kind::loss, "System loss L_s, default 1");
  f.add("--propagation-loss", Kind::loss, "Propagation loss L_p, default 1");
  auto* gp = f.add("--processing-gain", Kind::gain, "Processing gain G_proc, default 1");
  f.add("--pulse-width", Kind::time, "Pulse width tau_p; sets G_proc = B tau_p")->excludes(gp);
  f.add("--t-sys", Kind::temperature, "System noise temperature")->required();
  f.add("--bandwidth", Kind::frequency, "Receiver bandwidth")->required();
  f.add("--t-sys-ref", Kind::temperature, "Reference T_sys for the max-range ratio");
}

Output run_radar(const Flags& f, const Context&) {
  RadarScenario s;
  s.transmit_power = Watts{f.get("--tx-power", Constraint::positive)};
  s.tx_gain = f.get("--tx-gain", Constraint::positive);
  s.rx_gain = f.get("--rx-gain", Constraint::positive);
  if (f.has("--wavelength")) {
    s.wavelength = Meters{f.get("--wavelength", Constraint::positive)};
  } else if (f.has("--frequency")) {
    s.wavelength = frequency_to_wavelength(Hertz{f.get("--frequency", Constraint::positive)});
  } else {
    throw UsageError("radar needs --frequency or --wavelength");
  }
  s.range = Meters{f.get("--range", Constraint::positive)};
  s.system_loss = LossFactor::from_linear(f.get_or("--system-loss", Constraint::at_least_one, 1.0));
  s.propagation_loss =
      LossFactor::from_linear(f.get_or("--propagation-loss", Constraint::at_least_one, 1.0));
  s.system_temperature = Kelvin{f.get("--t-sys", Constraint::nonnegative)};
  s.bandwidth = Hertz{f.get("--bandwidth", Constraint::positive)};

  const bool distributed = f.has("--sigma0") || f.has("--cell");
  if (distributed) {
    s.target = DistributedTarget{f.get("--sigma0", Constraint::nonnegative),
                                 SquareMeters{f.get("--cell", Constraint::positive)}};
  } else if (f.has("--rcs")) {
    s.target = PointTarget{SquareMeters{f.get("--rcs", Constraint::nonnegative)}};
  } else {
    throw UsageError("radar needs --rcs, or --sigma0 with --cell");
  }
  if (f.has("--pulse-width")) {
    s.processing_gain =
        processing_gain_from_pulse(s.bandwidth, Seconds{f.get("--pulse-width", Constraint::positive)});
  } else {
    s.processing_gain = f.get_or("--processing-gain", Constraint::at_least_one, 1.0);
  }

  Output o;
  o.json["wavelength_m"] = s.wavelength.value();
  const Watts pn = noise_power(s.system_temperature, s.bandwidth);
  Watts pr{0.0};
  if (distributed) {
    const auto& t = std::get<DistributedTarget>(s.target);
    o.json["processing_gain"] = s.processing_gain;
    pr = processed_received_power(s);
    o.json["processed_received_power_w"] = pr.value();
    o.json["noise_power_w"] = pn.value();
    const double ratio = snr(pr, pn);
    o.json["snr"] = ratio;
    if (ratio > 0.0) o.json["snr_db"] = linear_to_db(ratio);
    const double floor = nesz(s);
    o.json["nesz"] = floor;
    o.json["nesz_db"] = linear_to_db(floor);
    if (ratio > 0.0) o.json["nesz_from_snr"] = nesz(t.sigma0, ratio);
  } else {
    pr = received_power(s);
    o.json["received_power_w"] = pr.value();
    o.json["noise_power_w"] = pn.value();
    const double ratio = snr(pr, pn);
    o.json["snr"] = ratio;
    if (ratio > 0.0) o.json["snr_db"] = linear_to_db(ratio);
  }
  o.json["range_resolution_m"] = range_resolution(s.bandwidth).value();
  if (f.has("--t-sys-ref")) {
    const double ref = f.get("--t-sys-ref", Constraint::positive);
    if (!(s.system_temperature.value() > 0.0)) {
      throw FlagDomainError("--t-sys", "--t-sys must be > 0 for the max-range ratio");
    }
    o.json["max_range_ratio"] = max_range_ratio(Kelvin{ref}, s.system_temperature);
  }
  return o;
}

// ---------------------------------------------------------------- budget

void setup_budget(Flags& f) {
  f.add_text("--input", "Flat JSON budget; flags override its keys", "PATH");
  f.add("--tx-power", Kind::power, "Transmit power P_T");
  f.add("--tx-gain", Kind::gain, "Transmit antenna gain G_T");
  f.add("--tx-feeder-loss", Kind::loss, "Transmit feeder loss L_FTx, default 0 db");
  f.add_list("--loss", "Named propagation loss NAME=LOSS, repeatable; 'fsl' is free space [db]",
             "NAME=LOSS");
  f.add("--rx-gain", Kind::gain, "Receive antenna gain G_R");
  f.add("--t-antenna", Kind::temperature, "Antenna noise temperature T_a");
  f.add("--t-receiver", Kind::temperature, "Receiver noise temperature T_R");
  f.add("--rx-feeder-loss", Kind::loss, "Receive feeder loss L_F, default 1");
  f.add("--t0", Kind::temperature, "Feeder physical temperature T_0, default 290 k");
  f.add("--data-rate", Kind::data_rate, "Data rate R");
  f.add("--distance", Kind::length, "Path length, for the free-space loss cross-check");
  f.add("--frequency", Kind::frequency, "Carrier frequency, for the free-space loss cross-check");
  f.add_list("--threshold", "Required Eb/N0 NAME=DB, repeatable; replaces the default table [db]",
             "NAME=DB");
}

struct BudgetInputs {
  std::optional<double> tx_power_dbw;
  std::optional<double> tx_gain_dbi;
  double tx_feeder_loss_db = 0.0;
  std::vector<LossEntry> losses;
  std::optional<double> rx_gain_dbi;
  std::optional<double> t_antenna;
  std::optional<double> t_receiver;
  double rx_feeder_loss = 1.0;
  double t0 = constants::reference_temperature;
  std::optional<double> data_rate;
  std::optional<double> distance;
  std::optional<double> frequency;
  std::vector<ModulationThreshold> thresholds;
};

void set_loss(std::vector<LossEntry>& ledger, const std::string& name, double db) {
  for (auto& e : ledger) {
    if (e.name == name) {
      e.db = db;
      return;
    }
  }
  ledger.push_back({name, db});
}

void set_threshold(std::vector<ModulationThreshold>& t, const std::string& name, double db) {
  for (auto& e : t) {
    if (e.name == name) {
      e.required_eb_n0_db = db;
      return;
    }
  }
  t.push_back({name, db});
}

void read_budget_file(const std::string& path, BudgetInputs& in) {
  Json doc;
  try {
    doc = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw SchemaError("budget file: " + std::string(e.what()));
  }
  if (!doc.is_object()) throw SchemaError("budget file must be a flat JSON object");
  auto number = [&](const std::string& key, const Json& v) {
    if (!v.is_number()) throw SchemaError("budget file: '" + key + "' must be a number");
    return v.get<double>();
  };
  auto prefixed = [](const std::string& key, std::string_view prefix, std::string_view suffix) {
    return key.size() > prefix.size() + suffix.size() && key.starts_with(prefix) &&
           key.ends_with(suffix);
  };
  for (const auto& [key, v] : doc.items()) {
    if (key == "tx_power_dbw") in.tx_power_dbw = number(key, v);
    else if (key == "tx_gain_dbi") in.tx_gain_dbi = number(key, v);
    else if (key == "tx_feeder_loss_db") in.tx_feeder_loss_db = number(key, v);
    else if (key == "rx_gain_dbi") in.rx_gain_dbi = number(key, v);
    else if (key == "antenna_temperature_k") in.t_antenna = number(key, v);
    else if (key == "receiver_temperature_k") in.t_receiver = number(key, v);
    else if (key == "rx_feeder_loss") in.rx_feeder_loss = number(key, v);
    else if (key == "rx_feeder_loss_db") in.rx_feeder_loss = db_to_linear(number(key, v));
    else if (key == "reference_temperature_k") in.t0 = number(key, v);
    else if (key == "data_rate_bps") in.data_rate = number(key, v);
    else if (key == "distance_m") in.distance = number(key, v);
    else if (key == "frequency_hz") in.frequency = number(key, v);
    else if (prefixed(key, "loss_", "_db")) {
      set_loss(in.losses, key.substr(5, key.size() - 8), number(key, v));
    } else if (prefixed(key, "threshold_", "_db")) {
      set_threshold(in.thresholds, key.substr(10, key.size() - 13), number(key, v));
    } else {
      throw SchemaError("budget file: unknown key '" + key + "'");
    }
  }
}

Output run_budget(const Flags& f, const Context&) {
  BudgetInputs in;
  if (f.has("--input")) read_budget_file(f.text("--input"), in);
  if (f.has("--tx-power")) in.tx_power_dbw = linear_to_db(f.get("--tx-power", Constraint::positive));
  if (f.has("--tx-gain")) in.tx_gain_dbi = linear_to_db(f.get("--tx-gain", Constraint::positive));
  if (f.has("--tx-feeder-loss")) {
    in.tx_feeder_loss_db = linear_to_db(f.get("--tx-feeder-loss", Constraint::at_least_one));
  }
  if (f.has("--loss")) {
    for (const auto& item : f.list("--loss")) {
      const auto [name, text] = split_assignment("--loss", item);
      if (!text.ends_with("db") && !text.ends_with("dB") && !text.ends_with("DB")) {
        throw UsageError("--loss: '" + item + "' needs a db suffix");
      }
      const double db = parse_value("--loss", text, Kind::decibel);
      check_constraint("--loss", db, Constraint::nonnegative, text);
      set_loss(in.losses, name, db);
    }
  }
  if (f.has("--rx-gain")) in.rx_gain_dbi = linear_to_db(f.get("--rx-gain", Constraint::positive));
  if (f.has("--t-antenna")) in.t_antenna = f.get("--t-antenna", Constraint::nonnegative);
  if (f.has("--t-receiver")) in.t_receiver = f.get("--t-receiver", Constraint::nonnegative);
  if (f.has("--rx-feeder-loss")) in.rx_feeder_loss = f.get("--rx-feeder-loss", Constraint::at_least_one);
  if (f.has("--t0")) in.t0 = f.get("--t0", Constraint::nonnegative);
  if (f.has("--data-rate")) in.data_rate = f.get("--data-rate", Constraint::positive);
  if (f.has("--distance")) in.distance = f.get("--distance", Constraint::positive);
  if (f.has("--frequency")) in.frequency = f.get("--frequency", Constraint::positive);
  if (f.has("--threshold")) {
    in.thresholds.clear();
    for (const auto& item : f.list("--threshold")) {
      const auto [name, text] = split_assignment("--threshold", item);
      set_threshold(in.thresholds, name, parse_value("--threshold", text, Kind::decibel));
    }
  }

  auto need = [](const std::optional<double>& v, std::string_view flag) {
    if (!v) throw UsageError("budget needs " + std::string(flag));
    return *v;
  };
  LinkBudget b;
  b.transmit_power = Decibels{need(in.tx_power_dbw, "--tx-power"), DbRef::dbw};
  b.tx_gain = Decibels{need(in.tx_gain_dbi, "--tx-gain"), DbRef::dbi};
  b.tx_feeder_loss_db = in.tx_feeder_loss_db;
  b.losses = in.losses;
  b.rx_gain = Decibels{need(in.rx_gain_dbi, "--rx-gain"), DbRef::dbi};
  b.antenna_temperature = Kelvin{need(in.t_antenna, "--t-antenna")};
  b.receiver_temperature = Kelvin{need(in.t_receiver, "--t-receiver")};
  b.rx_feeder_loss = in.rx_feeder_loss;
  b.reference_temperature = Kelvin{in.t0};
  b.data_rate_bps = need(in.data_rate, "--data-rate");
  if (!in.thresholds.empty()) b.thresholds = in.thresholds;
  if (in.distance && in.frequency) b.path = PathGeometry{Meters{*in.distance}, Hertz{*in.frequency}};

  const LinkReport r = evaluate_link(b);
  Output o;
  o.json["eirp_dbw"] = r.eirp.value();
  Json losses = Json::object();
  for (const auto& e : b.losses) losses[e.name] = e.db;
  o.json["losses_db"] = losses;
  o.json["total_loss_db"] = r.total_loss_db;
  o.json["system_temperature_k"] = r.system_temperature.value();
  o.json["g_over_t_dbk"] = r.g_over_t.value();
  o.json["c_over_n0_dbhz"] = r.c_over_n0.value();
  o.json["data_rate_bps"] = b.data_rate_bps;
  o.json["eb_n0_db"] = r.eb_over_n0_db;
  Json margins = Json::array();
  for (const auto& m : r.margins) {
    margins.push_back(Json{{"modulation", m.name},
                           {"required_eb_n0_db", m.required_db},
                           {"margin_db", m.margin_db},
                           {"closes", m.closes}});
  }
  o.json["margins"] = margins;
  if (r.fsl_ledger_db) o.json["fsl_ledger_db"] = *r.fsl_ledger_db;
  if (r.fsl_recomputed_db) o.json["fsl_recomputed_db"] = *r.fsl_recomputed_db;
  o.json["diagnostics"] = r.diagnostics;
  return o;
}

// ---------------------------------------------------------------- nef

void setup_aperture_flags(Flags& f) {
  f.add("--aperture", Kind::area, "Effective aperture A_e");
  f.add("--dish-diameter", Kind::length, "Dish diameter; A_e = eta_ap pi D^2/4");
  f.add("--eta-ap", Kind::ratio, "Aperture efficiency for --dish-diameter, default 0.65");
  f.add("--gain", Kind::gain, "Antenna gain; A_e = G lambda^2/(4 pi)");
}

/// A_e from whichever of --aperture, --dish-diameter, --gain was given.
double aperture_from_flags(const Flags& f, std::optional<double> frequency) {
  const int sources = static_cast<int>(f.has("--aperture")) +
                      static_cast<int>(f.has("--dish-diameter")) + static_cast<int>(f.has("--gain"));
  if (sources != 1) {
    throw UsageError("give exactly one of --aperture, --dish-diameter, --gain");
  }
  if (f.has("--aperture")) return f.get("--aperture", Constraint::positive);
  if (f.has("--dish-diameter")) {
    return aperture_from_physical(dish_area(Meters{f.get("--dish-diameter", Constraint::positive)}),
                                  f.get_or("--eta-ap", Constraint::unit_interval,
                                           kDefaultApertureEfficiency))
        .value();
  }
  if (!frequency) throw UsageError("--gain needs --frequency");
  return aperture_from_gain(f.get("--gain", Constraint::positive), Hertz{*frequency}).value();
}

void setup_nef(Flags& f) {
  f.add("--t-sys", Kind::temperature, "System noise temperature")->required();
  setup_aperture_flags(f);
  f.add("--frequency", Kind::frequency, "Carrier frequency, needed with --gain");
  add_rho2_flags(f);
}

Output run_nef(const Flags& f, const Context& ctx) {
  const double tsys = f.get("--t-sys", Constraint::positive);
  const auto freq = f.maybe("--frequency", Constraint::positive);
  const double ae = aperture_from_flags(f, freq);
  const double rho2 = rho2_from(f);
  Output o;
  o.json["t_sys_k"] = tsys;
  o.json["effective_aperture_m2"] = ae;
  o.json["rho2"] = rho2;
  o.json["eta0_ohm"] = ctx.cfg.free_space_impedance;
  o.json["sefd_w_m2_hz"] = sefd(Kelvin{tsys}, SquareMeters{ae}, rho2).value();
  o.json["e_free_v_m_rthz"] = nef_from_aperture(Kelvin{tsys}, SquareMeters{ae}, rho2, ctx.cfg).value();
  if (f.has("--gain")) {
    const double g = f.get("--gain", Constraint::positive);
    o.json["gain"] = g;
    o.json["frequency_hz"] = *freq;
    o.json["nef_from_gain_v_m_rthz"] = nef_from_gain(Kelvin{tsys}, g, Hertz{*freq}, rho2, ctx.cfg).value();
  }
  return o;
}

// ---------------------------------------------------------------- convert

void setup_convert(Flags& f) {
  f.add("--to-linear", Kind::decibel, "Power ratio in dB to convert to linear");
  f.add("--to-db", Kind::ratio, "Linear power ratio to convert to dB");
  f.add("--frequency", Kind::frequency, "Frequency; reports the wavelength");
  f.add("--gain", Kind::gain, "Antenna gain; with --frequency reports A_e");
  f.add("--dish-diameter", Kind::length, "Dish diameter; reports physical and effective area");
  f.add("--eta-ap", Kind::ratio, "Aperture efficiency for --dish-diameter, default 0.65");
  f.add("--noise-figure", Kind::decibel, "Noise figure; reports T_Rx");
  f.add("--t0", Kind::temperature, "Reference temperature for --noise-figure, default 290 k");
  f.add("--field", Kind::field, "Field amplitude; with --aperture reports received power");
  f.add("--aperture", Kind::area, "Effective aperture for --field");
  f.add("--nef", Kind::field_density, "Noise-equivalent field; with --gain, --frequency reports T_sys");
  add_rho2_flags(f);
}

Output run_convert(const Flags& f, const Context& ctx) {
  Output o;
  if (f.has("--to-linear")) {
    const double db = f.get("--to-linear");
    o.json["db"] = db;
    o.json["linear"] = db_to_linear(db);
  }
  if (f.has("--to-db")) {
    const double lin = f.get("--to-db", Constraint::positive);
    o.json["linear"] = lin;
    o.json["db"] = linear_to_db(lin);
  }
  const auto freq = f.maybe("--frequency", Constraint::positive);
  if (freq) {
    o.json["frequency_hz"] = *freq;
    o.json["wavelength_m"] = frequency_to_wavelength(Hertz{*freq}).value();
  }
  if (f.has("--gain") && !f.has("--nef")) {
    if (!freq) throw UsageError("--gain needs --frequency");
    const double g = f.get("--gain", Constraint::positive);
    o.json["gain"] = g;
    o.json["effective_aperture_m2"] = aperture_from_gain(g, Hertz{*freq}).value();
  }
  if (f.has("--dish-diameter")) {
    const SquareMeters phys = dish_area(Meters{f.get("--dish-diameter", Constraint::positive)});
    const double eta = f.get_or("--eta-ap", Constraint::unit_interval, kDefaultApertureEfficiency);
    o.json["physical_area_m2"] = phys.value();
    o.json["aperture_efficiency"] = eta;
    o.json["dish_effective_aperture_m2"] = aperture_from_physical(phys, eta).value();
  }
  if (f.has("--noise-figure")) {
    const double nf = f.get("--noise-figure", Constraint::nonnegative);
    const double t0 = f.get_or("--t0", Constraint::positive, constants::reference_temperature);
    o.json["noise_figure_db"] = nf;
    o.json["t_rx_k"] = trx_from_noise_figure(nf, Kelvin{t0}).value();
  }
  if (f.has("--field")) {
    const double e = f.get("--field", Constraint::nonnegative);
    o.json["field_v_m"] = e;
    o.json["power_w"] =
        power_from_field(VoltsPerMeter{e}, SquareMeters{f.get("--aperture", Constraint::positive)},
                         ctx.cfg)
            .value();
  }
  if (f.has("--nef")) {
    if (!freq) throw UsageError("--nef needs --frequency");
    const double nef = f.get("--nef", Constraint::positive);
    const double g = f.get("--gain", Constraint::positive);
    const double rho2 = rho2_from(f);
    o.json["nef_v_m_rthz"] = nef;
    o.json["gain"] = g;
    o.json["rho2"] = rho2;
    o.json["t_sys_k"] = tsys_from_nef(FieldDensity{nef}, g, Hertz{*freq}, rho2, ctx.cfg).value();
  }
  if (o.json.empty()) throw UsageError("convert needs at least one quantity to convert");
  return o;
}

// ---------------------------------------------------------------- enhance

void setup_enhance(Flags& f) {
  f.add("--frequency", Kind::frequency, "Cavity center frequency f_0")->required();
  f.add("--t-sys", Kind::temperature, "Classical reference system temperature")->required();
  setup_aperture_flags(f);
  add_rho2_flags(f);
  auto* ql = f.add("--loaded-q", Kind::ratio, "Loaded quality factor Q_L");
  auto* qe = f.add("--external-q", Kind::ratio, "External quality factor Q_e");
  auto* qi = f.add("--internal-q", Kind::ratio, "Internal quality factor Q_i");
  auto* sb = f.add("--signal-bandwidth", Kind::frequency, "Signal bandwidth; Q_L = f_0/B");
  qe->needs(qi)->excludes(ql)->excludes(sb);
  qi->needs(qe);
  ql->excludes(sb);
  f.add("--eta-c", Kind::ratio, "RF transfer efficiency eta_c")->required();
  f.add("--mode-volume", Kind::volume, "Electric-energy mode volume V_eff")->required();
  f.add("--sensor-nef", Kind::field_density, "Local sensor NEF to test against E_loc");
}

Output run_enhance(const Flags& f, const Context& ctx) {
  const double f0 = f.get("--frequency", Constraint::positive);
  const double tsys = f.get("--t-sys", Constraint::positive);
  const double ae = aperture_from_flags(f, f0);
  const double rho2 = rho2_from(f);
  const double eta_c = f.get("--eta-c", Constraint::unit_interval);
  const CubicMeters v{f.get("--mode-volume", Constraint::positive)};

  std::optional<CavityCoupling> cavity;
  if (f.has("--loaded-q")) {
    cavity = CavityCoupling::from_loaded_q(Hertz{f0}, f.get("--loaded-q", Constraint::positive),
                                           eta_c, v);
  } else if (f.has("--external-q")) {
    cavity = CavityCoupling::from_quality_factors(Hertz{f0}, f.get("--external-q", Constraint::positive),
                                                  f.get("--internal-q", Constraint::positive),
                                                  eta_c, v);
  } else if (f.has("--signal-bandwidth")) {
    cavity = CavityCoupling::from_signal_bandwidth(
        Hertz{f0}, Hertz{f.get("--signal-bandwidth", Constraint::positive)}, eta_c, v);
  } else {
    throw UsageError("enhance needs --loaded-q, --external-q with --internal-q, or --signal-bandwidth");
  }

  const double beta = enhancement_factor_cavity(*cavity, SquareMeters{ae}, ctx.cfg);
  const ReceiverReference ref(Kelvin{tsys}, SquareMeters{ae}, rho2);
  const LocalFieldRequirement req = local_field_requirement(ref, beta, ctx.cfg);

  Output o;
  o.json["frequency_hz"] = f0;
  o.json["t_sys_k"] = tsys;
  o.json["effective_aperture_m2"] = ae;
  o.json["rho2"] = rho2;
  o.json["eta0_ohm"] = ctx.cfg.free_space_impedance;
  o.json["loaded_q"] = cavity->loaded_q();
  o.json["linewidth_hz"] = cavity->linewidth().value();
  o.json["transfer_efficiency"] = eta_c;
  o.json["mode_volume_m3"] = v.value();
  o.json["e_free_v_m_rthz"] = req.free_space.value();
  o.json["enhancement"] = req.enhancement;
  o.json["e_loc_v_m_rthz"] = req.local.value();
  o.json["enhancement_below_unity"] = req.enhancement_below_unity;
  if (f.has("--sensor-nef")) {
    const double s = f.get("--sensor-nef", Constraint::positive);
    o.json["sensor_nef_v_m_rthz"] = s;
    o.json["meets_classical_reference"] = meets_classical_reference(FieldDensity{s}, req.local);
  }
  return o;
}

// ---------------------------------------------------------------- rydberg

void setup_rydberg(Flags& f) {
  f.add("--dipole", Kind::dipole, "Transition dipole moment d");
  f.add("--atoms", Kind::ratio, "Participating atom count N");
  f.add("--coherence-time", Kind::time, "Coherence time tau_coh");
  f.add("--integration-time", Kind::time, "Measurement time; warns when shorter than tau_coh");
  f.add("--probe-power", Kind::power, "Detected probe power");
  auto* pf = f.add("--probe-frequency", Kind::frequency, "Probe optical frequency");
  f.add("--probe-wavelength", Kind::length, "Probe optical wavelength")->excludes(pf);
  f.add("--field", Kind::field, "RF field amplitude; reports the Rabi frequency");
  f.add("--alignment", Kind::ratio, "Cosine between dipole and field, default 1");
  f.add("--rabi", Kind::angular_rate, "Rabi frequency; reports the field");
  f.add("--detuning", Kind::angular_rate, "Detuning for the AC-Stark shift");
  f.add("--stark-constant", Kind::ratio, "AC-Stark prefactor k, default 0.25");
  f.add("--sensor-nef", Kind::field_density, "Sensor NEF to express as a classical T_sys");
  f.add("--gain", Kind::gain, "Classical antenna gain for --sensor-nef");
  f.add("--frequency", Kind::frequency, "RF frequency for --sensor-nef");
  add_rho2_flags(f);
}

Output run_rydberg(const Flags& f, const Context& ctx) {
  Output o;
  std::optional<DipoleMoment> d;
  if (f.has("--dipole")) {
    d = DipoleMoment::from_coulomb_meters(f.get("--dipole", Constraint::positive));
    o.json["dipole_c_m"] = d->coulomb_meters();
  }
  auto need_dipole = [&](std::string_view what) -> const DipoleMoment& {
    if (!d) throw UsageError(std::string(what) + " needs --dipole");
    return *d;
  };
  const double alignment = f.get_or("--alignment", Constraint::unit_interval, 1.0);

  if (f.has("--atoms") || f.has("--coherence-time")) {
    const auto& dip = need_dipole("--atoms");
    const double n = f.get("--atoms", Constraint::positive);
    const double tau = f.get("--coherence-time", Constraint::positive);
    o.json["atoms"] = n;
    o.json["coherence_time_s"] = tau;
    o.json["qpn_nef_v_m_rthz"] = qpn_nef(dip, n, Seconds{tau}).value();
    if (f.has("--integration-time")) {
      const double t = f.get("--integration-time", Constraint::positive);
      const bool holds = qpn_integration_assumption_holds(Seconds{t}, Seconds{tau});
      o.json["qpn_integration_assumption_holds"] = holds;
      if (!holds) ctx.err << "warning: integration time is shorter than the coherence time\n";
    }
  }
  if (f.has("--probe-power")) {
    double nu = 0.0;
    if (f.has("--probe-frequency")) {
      nu = f.get("--probe-frequency", Constraint::positive);
    } else if (f.has("--probe-wavelength")) {
      nu = constants::speed_of_light / f.get("--probe-wavelength", Constraint::positive);
    } else {
      throw UsageError("--probe-power needs --probe-frequency or --probe-wavelength");
    }
    const double p = f.get("--probe-power", Constraint::nonnegative);
    o.json["probe_power_w"] = p;
    o.json["probe_frequency_hz"] = nu;
    o.json["shot_noise_nep_w_rthz"] = photon_shot_noise_nep(Watts{p}, Hertz{nu});
  }
  std::optional<double> rabi;
  if (f.has("--field")) {
    const double e = f.get("--field", Constraint::nonnegative);
    rabi = rabi_from_field(VoltsPerMeter{e}, need_dipole("--field"), alignment);
    o.json["field_v_m"] = e;
    o.json["rabi_rad_s"] = *rabi;
    o.json["rabi_hz"] = *rabi / (2.0 * constants::pi);
  }
  if (f.has("--rabi")) {
    rabi = f.get("--rabi", Constraint::nonnegative);
    o.json["rabi_rad_s"] = *rabi;
    if (d) o.json["field_from_rabi_v_m"] = field_from_rabi(*rabi, *d, alignment).value();
  }
  if (f.has("--detuning")) {
    if (!rabi) throw UsageError("--detuning needs --rabi or --field");
    const double delta = f.get("--detuning");
    if (delta == 0.0) throw FlagDomainError("--detuning", "--detuning must be non-zero");
    const double k = f.get_or("--stark-constant", Constraint::any, kDefaultStarkConstant);
    o.json["detuning_rad_s"] = delta;
    o.json["stark_constant"] = k;
    o.json["ac_stark_shift_rad_s"] = ac_stark_shift(*rabi, delta, k);
  }
  if (f.has("--sensor-nef")) {
    const double nef = f.get("--sensor-nef", Constraint::positive);
    const double g = f.get("--gain", Constraint::positive);
    const double freq = f.get("--frequency", Constraint::positive);
    const double rho2 = rho2_from(f);
    o.json["sensor_nef_v_m_rthz"] = nef;
    o.json["gain"] = g;
    o.json["frequency_hz"] = freq;
    o.json["rho2"] = rho2;
    o.json["classical_t_sys_k"] =
        compare_to_classical(FieldDensity{nef}, g, Hertz{freq}, rho2, ctx.cfg).value();
  }
  if (o.json.empty() || (o.json.size() == 1 && o.json.contains("dipole_c_m"))) {
    throw UsageError("rydberg needs a quantity to evaluate");
  }
  return o;
}

// ---------------------------------------------------------------- dataset

void setup_dataset_input(Flags& f) {
  f.add_text("--input", "Instrument dataset CSV, default: the shipped dataset", "PATH");
}

ParsedDataset load_dataset(const Flags& f, const Context& ctx) {
  const std::filesystem::path path =
      f.has("--input") ? std::filesystem::path(f.text("--input")) : default_dataset();
  ParsedDataset parsed = load_instruments(path);
  for (const auto& d : parsed.diagnostics) ctx.err << "diagnostic " << d.code << ": " << d.message << "\n";
  return parsed;
}

Json diagnostics_json(const std::vector<DatasetDiagnostic>& diags) {
  Json arr = Json::array();
  for (const auto& d : diags) {
    Json item{{"code", d.code}, {"instrument", d.instrument}, {"message", d.message}};
    if (d.line != 0) item["line"] = d.line;
    arr.push_back(item);
  }
  return arr;
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json record_json(const InstrumentRecord& r) {
  return Json{{"instrument", r.instrument},
              {"mission", r.mission},
              {"category", r.category},
              {"coherence", to_string(r.coherence)},
              {"f0_ghz", r.f0_ghz},
              {"bandwidth_hz", r.bandwidth_hz},
              {"bandwidth_method", to_string(r.bandwidth_method)},
              {"aperture_method", to_string(r.aperture_method)},
              {"a_e_m2", optional_json(r.a_e_m2)},
              {"t_a_k", optional_json(r.t_a_k)},
              {"t_a_flag", to_string(r.t_a_flag)},
              {"t_rx_k", optional_json(r.t_rx_k)},
              {"t_rx_method", to_string(r.t_rx_method)},
              {"t_sys_k", optional_json(r.t_sys_k)},
              {"t_sys_method", to_string(r.t_sys_method)},
              {"rho2", optional_json(r.rho2)},
              {"e_free_published", optional_json(r.e_free_published)},
              {"e_free", optional_json(r.e_free)}};
}

void setup_dataset_derive(Flags& f) {
  setup_dataset_input(f);
  f.add("--tolerance", Kind::ratio, "Relative tolerance against the published field, default 0.1");
}

Output run_dataset_derive(const Flags& f, const Context& ctx) {
  const double tol = f.get_or("--tolerance", Constraint::positive, 0.10);
  const ParsedDataset parsed = load_dataset(f, ctx);
  const auto derived = derive_records(parsed.records, ctx.cfg);
  const auto diags = consistency_diagnostics(derived, tol);
  const auto check = check_published_fields(derived, tol);
  for (const auto& d : diags) ctx.err << "diagnostic " << d.code << ": " << d.message << "\n";

  Output o;
  o.table = serialize_instruments(derived);
  Json records = Json::array();
  for (const auto& r : derived) records.push_back(record_json(r));
  o.json["eta0_ohm"] = ctx.cfg.free_space_impedance;
  o.json["records"] = records;
  o.json["published_check"] = Json{{"rows", check.rows},
                                   {"compared", check.compared},
                                   {"matched", check.matched},
                                   {"tolerance", tol}};
  std::vector<DatasetDiagnostic> all = parsed.diagnostics;
  all.insert(all.end(), diags.begin(), diags.end());
  o.json["diagnostics"] = diagnostics_json(all);
  return o;
}

void setup_range_options(Flags& f) {
  f.add_switch("--no-round", "Keep bounds unrounded");
  f.add("--lower-margin", Kind::ratio, "Factor on lower bounds, default 0.8");
  f.add("--upper-margin", Kind::ratio, "Factor on upper bounds, default 1.2");
}

RangeOptions range_options(const Flags& f, const Context& ctx) {
  RangeOptions opt;
  opt.physics = ctx.cfg;
  opt.lower_margin = f.get_or("--lower-margin", Constraint::positive, opt.lower_margin);
  opt.upper_margin = f.get_or("--upper-margin", Constraint::positive, opt.upper_margin);
  if (f.on("--no-round")) opt.rounding = Rounding::none;
  return opt;
}

Json range_json(const CategoryRange& r) {
  auto pair = [](const Interval& iv) { return Json::array({iv.min, iv.max}); };
  return Json{{"category", r.category},
              {"coherence", to_string(r.coherence)},
              {"rho2", r.rho2},
              {"members", r.members},
              {"f0_hz", pair(r.f0_hz)},
              {"effective_aperture_m2", pair(r.effective_aperture_m2)},
              {"system_temperature_k", pair(r.system_temperature_k)},
              {"bandwidth_hz", pair(r.bandwidth_hz)},
              {"e_free_v_m_rthz", pair(r.e_free)}};
}

std::vector<CategoryRange> ranges_for(const Flags& f, const Context& ctx,
                                      const std::vector<std::string>& only) {
  const ParsedDataset parsed = load_dataset(f, ctx);
  const auto derived = derive_records(parsed.records, ctx.cfg);
  const RangeOptions opt = range_options(f, ctx);
  if (only.empty()) return synthesize_all_ranges(derived, opt);
  std::vector<CategoryRange> out;
  for (const auto& c : only) out.push_back(synthesize_ranges(derived, c, opt));
  return out;
}

void setup_dataset_ranges(Flags& f) {
  setup_dataset_input(f);
  setup_range_options(f);
  f.add_list("--category", "Restrict to this category, repeatable", "NAME");
  f.add_text("--reference", "Reference ranges CSV to compare against", "PATH");
}

Output run_dataset_ranges(const Flags& f, const Context& ctx) {
  const std::vector<std::string> only =
      f.has("--category") ? f.list("--category") : std::vector<std::string>{};
  const auto ranges = ranges_for(f, ctx, only);
  Output o;
  o.table = serialize_ranges(ranges);
  Json arr = Json::array();
  for (const auto& r : ranges) arr.push_back(range_json(r));
  o.json["eta0_ohm"] = ctx.cfg.free_space_impedance;
  o.json["ranges"] = arr;
  if (f.has("--reference")) {
    const auto reference = parse_ranges(read_file(f.text("--reference")));
    std::vector<CategoryRange> wanted;
    for (const auto& r : reference) {
      if (only.empty() || std::find(only.begin(), only.end(), r.category) != only.end()) {
        wanted.push_back(r);
      }
    }
    const auto diags = compare_ranges(ranges, wanted);
    for (const auto& d : diags) ctx.err << "diagnostic " << d.code << ": " << d.message << "\n";
    o.json["diagnostics"] = diagnostics_json(diags);
  }
  return o;
}

void setup_dataset_plotdata(Flags& f) {
  setup_dataset_input(f);
  f.add_text("--ranges", "Use this ranges CSV instead of synthesizing from --input", "PATH");
  setup_range_options(f);
  f.add("--rydberg-bandwidth", Kind::frequency, "Bandwidth coordinate of the Rydberg marker");
  f.add("--rydberg-nef", Kind::field_density, "Rydberg marker sensitivity, default 4 nv/cm/rthz");
  f.add("--thermal-line", Kind::field_density, "Free-space thermal reference line at 290 K");
  f.add_list("--marker", "Extra point NAME:BANDWIDTH:NEF, repeatable [hz... : v/m/rthz...]",
             "NAME:FREQ:NEF");
}

Output run_dataset_plotdata(const Flags& f, const Context& ctx) {
  std::vector<CategoryRange> ranges;
  if (f.has("--ranges")) {
    ranges = parse_ranges(read_file(f.text("--ranges")));
  } else {
    ranges = ranges_for(f, ctx, {});
  }
  std::vector<PlotMarker> markers;
  if (f.has("--marker")) {
    for (const auto& item : f.list("--marker")) {
      const auto second = item.rfind(':');
      const auto first = second == std::string::npos ? second : item.rfind(':', second - 1);
      if (first == std::string::npos || first == 0) {
        throw UsageError("--marker: expected NAME:BANDWIDTH:NEF, got '" + item + "'");
      }
      const auto bw_text = item.substr(first + 1, second - first - 1);
      const auto e_text = item.substr(second + 1);
      const double bw = parse_value("--marker", bw_text, Kind::frequency);
      check_constraint("--marker", bw, Constraint::positive, bw_text);
      const double e = parse_value("--marker", e_text, Kind::field_density);
      check_constraint("--marker", e, Constraint::positive, e_text);
      markers.push_back({item.substr(0, first), bw, e});
    }
  }
  PlotOptions opt;
  opt.rydberg_marker_bandwidth_hz = f.maybe("--rydberg-bandwidth", Constraint::positive);
  opt.rydberg_marker_e_field = f.get_or("--rydberg-nef", Constraint::positive, kRydbergConverterNef);
  opt.thermal_reference_e_field = f.maybe("--thermal-line", Constraint::positive);
  const PlotData plot = emit_plot_data(ranges, markers, opt);

  Output o;
  Json rects = Json::array();
  for (const auto& r : plot.rectangles) {
    rects.push_back(Json{{"category", r.category},
                         {"coherence", to_string(r.coherence)},
                         {"bw_min", r.bw_min},
                         {"bw_max", r.bw_max},
                         {"e_min", r.e_min},
                         {"e_max", r.e_max}});
  }
  Json marks = Json::array();
  for (const auto& m : plot.markers) {
    marks.push_back(Json{{"name", m.name}, {"bandwidth", m.bandwidth_hz}, {"e_field", m.e_field}});
  }
  Json lines = Json::array();
  for (const auto& l : plot.reference_lines) {
    lines.push_back(Json{{"name", l.name}, {"e_field", l.e_field}});
  }
  o.json["rectangles"] = rects;
  o.json["markers"] = marks;
  o.json["reference_lines"] = lines;
  return o;
}

// ---------------------------------------------------------------- driver

struct Subcommand {
  std::string_view name;
  std::string_view description;
  void (*setup)(Flags&);
  Output (*handler)(const Flags&, const Context&);
  std::string_view default_format;
};

constexpr std::array<Subcommand, 11> kTable{{
    {"nedt", "Radiometer NEDT, output power, or T_sys from a reported NEDT", setup_nedt, run_nedt,
     "json"},
    {"calibrate", "Hot/cold (multi-load) calibration fit of gain and T_Rx", setup_calibrate,
     run_calibrate, "json"},
    {"radar", "Radar equation, noise floor, SNR, NESZ, resolution", setup_radar, run_radar, "json"},
    {"budget", "Satellite link budget: EIRP, G/T, C/N0, Eb/N0, margins", setup_budget, run_budget,
     "json"},
    {"nef", "SEFD and noise-equivalent field of a classical receiver", setup_nef, run_nef, "json"},
    {"convert", "Unit and figure-of-merit conversions", setup_convert, run_convert, "json"},
    {"enhance", "Cavity field enhancement and local field requirement", setup_enhance, run_enhance,
     "json"},
    {"rydberg", "Rydberg noise floors and field calibration primitives", setup_rydberg, run_rydberg,
     "json"},
    {"dataset-derive", "Derive per-instrument fields from the dataset", setup_dataset_derive,
     run_dataset_derive, "csv"},
    {"dataset-ranges", "Synthesize per-category parameter ranges", setup_dataset_ranges,
     run_dataset_ranges, "csv"},
    {"dataset-plotdata", "Emit rectangles and markers for the sensitivity plot",
     setup_dataset_plotdata, run_dataset_plotdata, "json"},
}};

std::string error_line(std::string_view kind, std::string_view flag, std::string_view message) {
  Json j = Json::object();
  j["error"] = kind;
  if (!flag.empty()) j["flag"] = flag;
  j["message"] = message;
  return render_json(j, false);
}

}  // namespace

std::span<const OperationBinding> operation_registry() { return kRegistry; }

std::span<const std::string_view> subcommands() { return kSubcommands; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"RF and Rydberg-atom receiver sensitivity toolkit", "fieldsens"};
  app.require_subcommand(1);
  std::string format;
  std::string output_path;
  app.add_option("--format", format, "Report format: json, text, csv")
      ->check(CLI::IsMember({"json", "text", "csv"}))
      ->type_name("FORMAT");
  app.add_option("--output", output_path, "Write the report to this file")->type_name("PATH");

  std::vector<std::unique_ptr<Flags>> flags;
  std::vector<CLI::App*> apps;
  for (const auto& sub : kTable) {
    CLI::App* s = app.add_subcommand(std::string(sub.name), std::string(sub.description));
    s->fallthrough();
    flags.push_back(std::make_unique<Flags>(s));
    sub.setup(*flags.back());
    apps.push_back(s);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << error_line("parse", "", e.what());
    return kExitParse;
  }

  std::size_t index = 0;
  while (index < apps.size() && !apps[index]->parsed()) ++index;
  const Subcommand& sub = kTable[index];

  try {
    const Context ctx{physics_from_environment(), err};
    const Output result = sub.handler(*flags[index], ctx);
    const std::string fmt = format.empty() ? std::string(sub.default_format) : format;
    std::string text;
    if (fmt == "json") {
      text = render_json(result.json);
    } else if (fmt == "text") {
      text = render_text(result.json);
    } else {
      text = result.table ? *result.table : render_key_value_csv(result.json);
    }
    if (output_path.empty()) {
      out << text;
    } else {
      std::ofstream file(output_path, std::ios::binary);
      if (!file || !(file << text)) throw SchemaError("cannot write " + output_path);
    }
    return kExitOk;
  } catch (const FlagDomainError& e) {
    err << error_line("domain", e.flag(), e.what());
    return kExitDomain;
  } catch (const DomainError& e) {
    err << error_line("domain", "", e.what());
    return kExitDomain;
  } catch (const UsageError& e) {
    err << error_line("parse", "", e.what());
    return kExitParse;
  } catch (const SchemaError& e) {
    err << error_line("schema", "", e.what());
    return kExitParse;
  }
}

}  // namespace fieldsens::cli
