#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fieldsens_cli/cli.hpp"

namespace fs = std::filesystem;
using fieldsens::cli::run;
using Json = nlohmann::json;

namespace {

const fs::path kGolden{FIELDSENS_GOLDEN_DIR};

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

const std::vector<std::string> kBudgetKaLink{
    "budget",         "--tx-power",     "20dbw",       "--tx-gain",      "45dbi",
    "--tx-feeder-loss", "2db",          "--loss",      "fsl=206.5db",    "--loss",
    "atm=2db",        "--loss",         "rain=3db",    "--loss",         "other=1db",
    "--rx-gain",      "50dbi",          "--t-antenna", "100k",           "--t-receiver",
    "100k",           "--rx-feeder-loss", "1.5",       "--data-rate",    "1e8bps",
    "--distance",     "36000km",        "--frequency", "20ghz"};

const std::vector<std::string> kEnhanceXBand{
    "enhance",        "--frequency", "8.4ghz", "--t-sys",     "20k",    "--dish-diameter",
    "34m",            "--signal-bandwidth", "1mhz", "--eta-c", "0.8", "--mode-volume",
    "1e-5m3",         "--coherence", "coherent"};

const std::vector<std::string> kEnhanceKaBand{
    "enhance",  "--frequency", "32ghz", "--t-sys", "70k",          "--aperture",
    "500m2",    "--signal-bandwidth", "2mhz", "--eta-c", "0.7", "--mode-volume", "2e-6m3"};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    unsetenv("FIELDSENS_ETA0");
    unsetenv("FIELDSENS_DATA_DIR");
  }
  void TearDown() override { unsetenv("FIELDSENS_ETA0"); }
};

struct GoldenCase {
  const char* file;
  std::vector<std::string> args;
};

void PrintTo(const GoldenCase& c, std::ostream* os) { *os << c.file; }

class Golden : public Cli, public ::testing::WithParamInterface<GoldenCase> {};

}  // namespace

TEST_P(Golden, MatchesFileAndIsStable) {
  const auto& c = GetParam();
  const auto first = invoke(c.args);
  const auto second = invoke(c.args);
  ASSERT_EQ(first.code, 0) << first.err;
  EXPECT_EQ(first.out, second.out);
  EXPECT_EQ(first.out, slurp(kGolden / c.file));
}

INSTANTIATE_TEST_SUITE_P(
    Reports, Golden,
    ::testing::Values(GoldenCase{"budget_ka_link.json", kBudgetKaLink},
                      GoldenCase{"dataset_ranges.csv", {"dataset-ranges"}},
                      GoldenCase{"enhance_xband.json", kEnhanceXBand},
                      GoldenCase{"enhance_kaband.json", kEnhanceKaBand},
                      GoldenCase{"help.txt", {"--help"}}),
    [](const auto& info) {
      std::string name = info.param.file;
      for (char& ch : name) {
        if (!std::isalnum(static_cast<unsigned char>(ch))) ch = '_';
      }
      return name;
    });

TEST_F(Cli, BudgetReportValues) {
  const auto r = invoke(kBudgetKaLink);
  ASSERT_EQ(r.code, 0);
  const auto j = Json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["eirp_dbw"].get<double>(), 63.0);
  EXPECT_NEAR(j["system_temperature_k"].get<double>(), 395.0, 0.5);
  EXPECT_NEAR(j["eb_n0_db"].get<double>(), 23.13, 0.01);
  EXPECT_EQ(j["diagnostics"].size(), 1u);
}

TEST_F(Cli, BudgetFromFile) {
  const fs::path p = fs::temp_directory_path() / "fieldsens_budget_input.json";
  std::ofstream(p) << R"({"tx_power_dbw": 20, "tx_gain_dbi": 45, "tx_feeder_loss_db": 2,
    "loss_fsl_db": 206.5, "loss_atm_db": 2, "loss_rain_db": 3, "loss_other_db": 1,
    "rx_gain_dbi": 50, "antenna_temperature_k": 100, "receiver_temperature_k": 100,
    "rx_feeder_loss": 1.5, "data_rate_bps": 1e8})";
  const auto r = invoke({"budget", "--input", p.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_NEAR(j["c_over_n0_dbhz"].get<double>(), 103.13, 0.01);
  EXPECT_TRUE(j["diagnostics"].empty());

  std::ofstream(p) << R"({"tx_power_dbw": 20, "mystery": 1})";
  const auto bad = invoke({"budget", "--input", p.string()});
  EXPECT_EQ(bad.code, 3);
  EXPECT_EQ(Json::parse(bad.err)["error"], "schema");
  fs::remove(p);
}

TEST_F(Cli, Nedt183Channel) {
  const auto r = invoke({"nedt", "--t-a", "250k", "--t-rx", "600k", "--bandwidth", "1000mhz",
                         "--tau", "15ms", "--gain-stability", "1.5e-5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(Json::parse(r.out)["nedt_k"].get<double>(), 0.22, 0.005);
}

TEST_F(Cli, DomainErrorNamesFlag) {
  const auto r = invoke({"nedt", "--t-a", "250k", "--t-rx", "600k", "--bandwidth", "0hz",
                         "--tau", "15ms"});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
  const auto j = Json::parse(r.err);
  EXPECT_EQ(j["error"], "domain");
  EXPECT_EQ(j["flag"], "--bandwidth");
}

TEST_F(Cli, LossBelowUnityIsDomainError) {
  auto args = kBudgetKaLink;
  args[22] = "0.5";
  ASSERT_EQ(args[21], "--rx-feeder-loss");
  const auto r = invoke(args);
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(Json::parse(r.err)["flag"], "--rx-feeder-loss");
}

TEST_F(Cli, ParseErrors) {
  EXPECT_EQ(invoke({"nedt", "--t-a", "250k", "--t-rx", "600k", "--bandwidth", "1e9", "--tau",
                    "15ms"}).code,
            3);
  EXPECT_EQ(invoke({"frobnicate"}).code, 3);
  EXPECT_EQ(invoke({}).code, 3);
  EXPECT_EQ(invoke({"nedt", "--t-a", "250k"}).code, 3);
  EXPECT_EQ(invoke({"nef", "--t-sys", "20k", "--aperture", "1m2", "--coherence", "partial"}).code,
            3);
  const auto r = invoke({"dataset-derive", "--input", "/nonexistent/file.csv"});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(Json::parse(r.err)["error"], "schema");
}

TEST_F(Cli, SingularCalibrationIsDomainError) {
  const auto r = invoke({"calibrate", "--bandwidth", "1ghz", "--point", "290k:1e-3w",
                         "--point", "290k:1.1e-3w"});
  EXPECT_EQ(r.code, 2);
}

TEST_F(Cli, CalibrationRecoversInputs) {
  const double k = 1.380649e-23;
  auto point = [&](double t) {
    std::ostringstream s;
    s.precision(17);
    s << t << "k:" << 1e10 * k * (t + 600.0) * 1e9 << "w";
    return s.str();
  };
  const auto r = invoke({"calibrate", "--bandwidth", "1ghz", "--point", point(77), "--point",
                         point(300)});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_NEAR(j["receiver_temperature_k"].get<double>(), 600.0, 1e-2);
  EXPECT_EQ(j["status"], "ok");
}

TEST_F(Cli, NefConversion) {
  const auto r = invoke({"convert", "--nef", "7.9uv/m/rthz", "--gain", "1.5", "--frequency",
                         "96ghz", "--rho2", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("7"), std::string::npos);
}

TEST_F(Cli, ImpedanceFromEnvironment) {
  const auto standard = Json::parse(invoke(kEnhanceXBand).out);
  EXPECT_NEAR(standard["eta0_ohm"].get<double>(), 376.73, 1e-3);
  setenv("FIELDSENS_ETA0", "377", 1);
  const auto rounded = Json::parse(invoke(kEnhanceXBand).out);
  EXPECT_DOUBLE_EQ(rounded["eta0_ohm"].get<double>(), 377.0);
  EXPECT_GT(rounded["e_free_v_m_rthz"].get<double>(), standard["e_free_v_m_rthz"].get<double>());
  setenv("FIELDSENS_ETA0", "bogus", 1);
  EXPECT_EQ(invoke(kEnhanceXBand).code, 3);
}

TEST_F(Cli, OutputFlagWritesFile) {
  const fs::path p = fs::temp_directory_path() / "fieldsens_cli_output.json";
  fs::remove(p);
  auto args = kEnhanceXBand;
  args.insert(args.begin(), {"--output", p.string()});
  const auto r = invoke(args);
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(slurp(p), slurp(kGolden / "enhance_xband.json"));
  fs::remove(p);
}

TEST_F(Cli, FormatsAreParseable) {
  const auto csv = invoke({"--format", "csv", "enhance", "--frequency", "8.4ghz", "--t-sys",
                           "20k", "--aperture", "590m2", "--loaded-q", "8400", "--eta-c", "0.8",
                           "--mode-volume", "1e-5m3"});
  ASSERT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out.rfind("key,value", 0), 0u);
  const auto text = invoke({"--format", "text", "dataset-ranges"});
  ASSERT_EQ(text.code, 0);
  EXPECT_NE(text.out.find(" = "), std::string::npos);
  const auto json = invoke({"--format", "json", "dataset-ranges"});
  ASSERT_EQ(json.code, 0);
  EXPECT_EQ(Json::parse(json.out)["ranges"].size(), 11u);
}

TEST_F(Cli, DatasetDeriveDiagnostics) {
  const auto r = invoke({"--format", "json", "dataset-derive"});
  ASSERT_EQ(r.code, 0);
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["records"].size(), 21u);
  EXPECT_EQ(j["published_check"]["compared"], 21);
  std::size_t mismatches = 0;
  for (const auto& d : j["diagnostics"]) mismatches += d["code"] == "e_free_mismatch";
  EXPECT_EQ(mismatches, 21u - j["published_check"]["matched"].get<std::size_t>());
  EXPECT_NE(r.err.find("diagnostic e_free_mismatch"), std::string::npos);
}

TEST_F(Cli, DatasetDirFromEnvironment) {
  setenv("FIELDSENS_DATA_DIR", "/nonexistent", 1);
  EXPECT_EQ(invoke({"dataset-ranges"}).code, 3);
  unsetenv("FIELDSENS_DATA_DIR");
}

TEST_F(Cli, PlotData) {
  const auto r = invoke({"dataset-plotdata", "--rydberg-bandwidth", "1mhz", "--marker",
                         "probe:100khz:10nv/m/rthz"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["rectangles"].size(), 11u);
  ASSERT_EQ(j["markers"].size(), 2u);
  EXPECT_EQ(j["markers"][1]["name"], "probe");
}

TEST(Registry, EveryOperationMapsToOneSubcommand) {
  const auto subs = fieldsens::cli::subcommands();
  const std::set<std::string_view> names(subs.begin(), subs.end());
  EXPECT_EQ(names.size(), subs.size());
  std::set<std::pair<std::string_view, std::string_view>> seen;
  std::set<std::string_view> used;
  for (const auto& b : fieldsens::cli::operation_registry()) {
    EXPECT_TRUE(seen.insert({b.module, b.operation}).second) << b.operation;
    EXPECT_TRUE(names.contains(b.subcommand)) << b.subcommand;
    used.insert(b.subcommand);
  }
  EXPECT_EQ(used, names);
}

TEST(Registry, CoversEngineOperations) {
  const std::set<std::string_view> expected{
      "db_to_linear", "frequency_to_wavelength", "power_from_field", "nedt",
      "radiometer_output_power", "calibrate_hot_cold", "tsys_from_nedt", "received_power",
      "processed_received_power", "noise_power", "snr", "nesz", "range_resolution",
      "max_range_ratio", "eirp", "system_noise_temperature", "figure_of_merit",
      "free_space_loss", "total_loss", "c_over_n0", "eb_over_n0", "evaluate_link", "sefd",
      "nef_from_aperture", "nef_from_gain", "tsys_from_nef", "aperture_from_gain",
      "trx_from_noise_figure", "enhancement_factor_cavity", "local_field_requirement",
      "meets_classical_reference", "qpn_nef", "photon_shot_noise_nep", "rabi_from_field",
      "ac_stark_shift", "compare_to_classical", "parse_instruments", "derive_record",
      "synthesize_ranges", "emit_plot_data"};
  std::set<std::string_view> have;
  for (const auto& b : fieldsens::cli::operation_registry()) have.insert(b.operation);
  for (const auto op : expected) EXPECT_TRUE(have.contains(op)) << op;
}

TEST(Registry, EverySubcommandHasHelp) {
  for (const auto sub : fieldsens::cli::subcommands()) {
    const auto r = invoke({std::string(sub), "--help"});
    EXPECT_EQ(r.code, 0) << sub;
    EXPECT_NE(r.out.find("Usage"), std::string::npos) << sub;
  }
}
