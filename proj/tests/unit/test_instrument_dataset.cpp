#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "fieldsens/errors.hpp"
#include "fieldsens/instrument_dataset.hpp"
#include "oracle.hpp"
#include "property.hpp"

using namespace fieldsens;

namespace {

const std::filesystem::path kData{FIELDSENS_DATA_DIR};

std::vector<InstrumentRecord> shipped() {
  return load_instruments(kData / "spaceborne_receivers.csv").records;
}

std::vector<InstrumentRecord> shipped_derived() { return derive_records(shipped()); }

const InstrumentRecord& named(const std::vector<InstrumentRecord>& rs, const std::string& name) {
  for (const auto& r : rs) {
    if (r.instrument == name) return r;
  }
  throw std::out_of_range(name);
}

const std::string kHeader =
    "instrument,mission,category,coherence,f0_ghz,bandwidth_hz,bandwidth_method,aperture_method,"
    "a_e_m2,a_phys_m2,eta_ap,gain_dbi,t_a_k,t_a_flag,t_rx_k,t_rx_method,nf_db,t_sys_k,t_sys_method,"
    "nedt_k,tau_s,rho2,reference\n";

InstrumentRecord synthetic(const std::string& name, double tsys, double ae, double bw,
                           double rho2 = 1.0) {
  InstrumentRecord r;
  r.instrument = name;
  r.category = "synthetic";
  r.coherence = rho2 == 1.0 ? Coherence::coherent : Coherence::incoherent;
  r.f0_ghz = 10.0;
  r.bandwidth_hz = bw;
  r.a_e_m2 = ae;
  r.t_sys_k = tsys;
  r.t_sys_method = SystemTemperatureMethod::reported;
  r.rho2 = rho2;
  return derive_record(r);
}

double oracle_e(double t, double ae, double rho2) {
  return std::sqrt(oracle::kB * t * oracle::eta0 / (rho2 * ae));
}

}  // namespace

TEST(DatasetParse, ShippedFile) {
  const auto parsed = load_instruments(kData / "spaceborne_receivers.csv");
  EXPECT_EQ(parsed.records.size(), 21u);
  EXPECT_TRUE(parsed.diagnostics.empty());
  EXPECT_EQ(categories(parsed.records).size(), 11u);
}

TEST(DatasetParse, HeaderOnly) {
  const auto parsed = parse_instruments(kHeader);
  EXPECT_TRUE(parsed.records.empty());
  EXPECT_TRUE(parsed.diagnostics.empty());
}

TEST(DatasetParse, MissingColumnIsSchemaError) {
  EXPECT_THROW(parse_instruments("instrument,mission\nA,B\n"), SchemaError);
  EXPECT_THROW(parse_instruments(""), SchemaError);
  EXPECT_THROW(load_instruments(kData / "does_not_exist.csv"), SchemaError);
}

TEST(DatasetParse, GainRowWithoutGainIsRejected) {
  const auto parsed = parse_instruments(
      kHeader + "Horn,M,Limb,incoherent,100,1e9,RF,gain,,,,,,,,direct,,500,reported,,,0.5,x\n");
  EXPECT_TRUE(parsed.records.empty());
  ASSERT_EQ(parsed.diagnostics.size(), 1u);
  EXPECT_EQ(parsed.diagnostics[0].code, "parse");
  EXPECT_EQ(parsed.diagnostics[0].instrument, "Horn");
  EXPECT_EQ(parsed.diagnostics[0].line, 2u);
}

TEST(DatasetParse, BadTagAndNumber) {
  const auto parsed = parse_instruments(
      kHeader + "A,M,C,sideways,1,1e6,RF,phys,1,,,,1,measured,1,direct,,2,sum,,,1,x\n" +
      "B,M,C,coherent,abc,1e6,RF,phys,1,,,,1,measured,1,direct,,2,sum,,,1,x\n" +
      "C,M,C,coherent,1,1e6,RF,phys,1,,,,1,measured,1,direct,,2,sum,,,1,x\n");
  ASSERT_EQ(parsed.records.size(), 1u);
  EXPECT_EQ(parsed.records[0].instrument, "C");
  EXPECT_EQ(parsed.diagnostics.size(), 2u);
}

TEST(DatasetParse, TagsAreCaseInsensitive) {
  const auto parsed = parse_instruments(
      kHeader + "N,M,C,Coherent,1,1e6,rf,PHYS,1,,,,1,,1,nf,,2,SUM,,,1,x\n");
  ASSERT_EQ(parsed.records.size(), 1u) << parsed.diagnostics.at(0).message;
  EXPECT_EQ(parsed.records[0].t_rx_method, ReceiverTemperatureMethod::noise_figure);
  EXPECT_EQ(parsed.records[0].t_a_flag, AntennaTemperatureFlag::measured);
}

TEST(DatasetDerive, ShippedRows) {
  const auto d = shipped_derived();
  EXPECT_NEAR(*named(d, "DSN 70 m BWG").e_free, 6.7e-12, 0.05e-12);
  EXPECT_LE(proptest::rel_err(*named(d, "Spektr-R 10 m").e_free, 1.4e-10), 0.10);
  for (const auto& r : d) {
    ASSERT_TRUE(r.is_derived()) << r.instrument;
    EXPECT_LE(proptest::rel_err(*r.e_free, oracle_e(*r.t_sys_k, *r.a_e_m2, *r.rho2)), 1e-12)
        << r.instrument;
  }
}

TEST(DatasetDerive, ApertureFromGain) {
  InstrumentRecord r;
  r.instrument = "t";
  r.category = "c";
  r.f0_ghz = 20.0;
  r.bandwidth_hz = 1e6;
  r.aperture_method = ApertureMethod::gain;
  r.gain_dbi = 45.0;
  r.t_sys_k = 100.0;
  r.t_sys_method = SystemTemperatureMethod::reported;
  const auto d = derive_record(r);
  EXPECT_NEAR(*d.a_e_m2, 0.5653, 2e-4);
  EXPECT_DOUBLE_EQ(*d.rho2, 1.0);
}

TEST(DatasetDerive, PhysicalApertureAndNoiseFigure) {
  InstrumentRecord r;
  r.instrument = "t";
  r.category = "c";
  r.coherence = Coherence::incoherent;
  r.f0_ghz = 1.4;
  r.bandwidth_hz = 2e7;
  r.aperture_method = ApertureMethod::phys;
  r.a_phys_m2 = 100.0;
  r.t_a_k = 100.0;
  r.t_a_flag = AntennaTemperatureFlag::assumed;
  r.t_rx_method = ReceiverTemperatureMethod::noise_figure;
  r.nf_db = 10.0;
  const auto d = derive_record(r);
  EXPECT_NEAR(*d.a_e_m2, 65.0, 1e-12);
  EXPECT_NEAR(*d.t_rx_k, 2610.0, 1e-9);
  EXPECT_NEAR(*d.t_sys_k, 2710.0, 1e-9);
  EXPECT_DOUBLE_EQ(*d.rho2, 0.5);
}

TEST(DatasetDerive, SystemTemperatureFromNedt) {
  InstrumentRecord r;
  r.instrument = "t";
  r.category = "c";
  r.f0_ghz = 183.0;
  r.bandwidth_hz = 1e9;
  r.a_e_m2 = 0.1;
  r.t_sys_method = SystemTemperatureMethod::nedt;
  r.nedt_k = 0.22;
  r.tau_s = 0.015;
  EXPECT_NEAR(*derive_record(r).t_sys_k, 0.22 * std::sqrt(1.5e7), 1e-9);
}

TEST(DatasetDerive, ProvidedValuesWin) {
  auto r = synthetic("t", 50.0, 10.0, 1e6);
  r.e_free.reset();
  r.t_a_k = 1.0;
  r.t_rx_k = 1.0;
  r.t_sys_method = SystemTemperatureMethod::sum;
  EXPECT_DOUBLE_EQ(*derive_record(r).t_sys_k, 50.0);
  const auto diags = consistency_diagnostics(std::vector{derive_record(r)});
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_EQ(diags[0].code, "t_sys_sum_mismatch");
}

TEST(DatasetDerive, Idempotent) {
  const auto once = shipped_derived();
  EXPECT_EQ(derive_records(once), once);
}

TEST(DatasetDerive, ErrorNamesInstrument) {
  InstrumentRecord r;
  r.instrument = "Broken";
  r.category = "c";
  r.f0_ghz = 1.0;
  r.bandwidth_hz = 1.0;
  r.aperture_method = ApertureMethod::gain;
  r.t_sys_k = 1.0;
  try {
    derive_record(r);
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("Broken"), std::string::npos);
  }
}

TEST(DatasetSerialize, RoundTrip) {
  const auto d = shipped_derived();
  const auto again = parse_instruments(serialize_instruments(d));
  EXPECT_TRUE(again.diagnostics.empty());
  EXPECT_EQ(again.records, d);
  EXPECT_EQ(serialize_instruments(again.records), serialize_instruments(d));
}

TEST(DatasetDiagnostics, PublishedMismatchesAreNamed) {
  const auto d = shipped_derived();
  const auto check = check_published_fields(d);
  EXPECT_EQ(check.rows, 21u);
  EXPECT_EQ(check.compared, 21u);
  EXPECT_EQ(check.matched + check.mismatches.size(), check.compared);
  for (const auto& m : check.mismatches) {
    EXPECT_EQ(m.code, "e_free_mismatch");
    EXPECT_FALSE(m.instrument.empty());
  }
  const auto names = [&] {
    std::vector<std::string> out;
    for (const auto& m : check.mismatches) out.push_back(m.instrument);
    return out;
  }();
  const auto has = [&](std::string_view prefix) {
    return std::any_of(names.begin(), names.end(),
                       [&](const std::string& n) { return n.starts_with(prefix); });
  };
  EXPECT_TRUE(has("SMOS"));
  EXPECT_TRUE(has("Odin"));
  const auto all = consistency_diagnostics(d);
  EXPECT_GE(all.size(), check.mismatches.size());
}

TEST(RoundSignificant, Examples) {
  EXPECT_DOUBLE_EQ(round_significant(3192.0, 2), 3200.0);
  EXPECT_DOUBLE_EQ(round_significant(18.4, 2), 18.0);
  EXPECT_DOUBLE_EQ(round_significant(27.6, 2), 28.0);
  EXPECT_DOUBLE_EQ(round_significant(1.25e-11, 2), 1.3e-11);
  EXPECT_DOUBLE_EQ(round_significant(-0.0345, 2), -0.035);
  EXPECT_DOUBLE_EQ(round_significant(1000.0, 2), 1000.0);
  EXPECT_DOUBLE_EQ(round_significant(0.0, 2), 0.0);
  EXPECT_THROW(round_significant(1.0, 0), DomainError);
}

TEST(Ranges, ShippedCategories) {
  const auto computed = synthesize_all_ranges(shipped_derived());
  ASSERT_EQ(computed.size(), 11u);
  const auto& deep = computed[0];
  EXPECT_EQ(deep.category, "Deep-space comm.");
  EXPECT_EQ(deep.system_temperature_k, (Interval{18, 28}));
  EXPECT_EQ(deep.effective_aperture_m2, (Interval{500, 3200}));
  EXPECT_EQ(deep.bandwidth_hz, (Interval{1.6e7, 4.8e8}));
  EXPECT_EQ(deep.e_free, (Interval{5.5e-12, 1.7e-11}));
  const auto& vlbi = computed[1];
  EXPECT_EQ(vlbi.system_temperature_k, (Interval{56, 100}));
  EXPECT_EQ(vlbi.effective_aperture_m2, (Interval{10, 48}));
  EXPECT_EQ(vlbi.e_free, (Interval{1.1e-10, 3.3e-10}));

  const auto reference = parse_ranges(
      [] {
        std::ifstream in(kData / "receiver_class_ranges.csv");
        return std::string(std::istreambuf_iterator<char>(in), {});
      }());
  EXPECT_EQ(reference.size(), 11u);
  EXPECT_TRUE(compare_ranges(computed, reference).empty());
}

TEST(Ranges, SingleRecordCategory) {
  const std::vector rs{synthetic("only", 100.0, 10.0, 1e6)};
  RangeOptions opts;
  opts.rounding = Rounding::none;
  const auto r = synthesize_ranges(rs, "synthetic", opts);
  EXPECT_EQ(r.members, 1u);
  EXPECT_DOUBLE_EQ(r.system_temperature_k.min, 80.0);
  EXPECT_DOUBLE_EQ(r.system_temperature_k.max, 120.0);
  EXPECT_LE(proptest::rel_err(r.e_free.min, oracle_e(80, 12, 1)), 1e-12);
  EXPECT_LE(proptest::rel_err(r.e_free.max, oracle_e(120, 8, 1)), 1e-12);
  EXPECT_DOUBLE_EQ(r.f0_hz.min, 1e10);
}

TEST(Ranges, Errors) {
  const std::vector mixed{synthetic("a", 100, 10, 1e6, 1.0), synthetic("b", 100, 10, 1e6, 0.5)};
  try {
    synthesize_ranges(mixed, "synthetic");
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("b"), std::string::npos);
  }
  EXPECT_THROW(synthesize_ranges(mixed, "absent"), DomainError);
  auto raw = shipped();
  EXPECT_THROW(synthesize_ranges(raw, "SAR"), DomainError);
}

TEST(Ranges, CompareFlagsDifferences) {
  const auto computed = synthesize_all_ranges(shipped_derived());
  auto reference = computed;
  reference[0].e_free.max = 2.0e-11;
  reference[1].system_temperature_k.max = 120.0;
  reference[2].effective_aperture_m2.min += 1.0 * std::pow(10.0, std::floor(std::log10(
                                                                  reference[2].effective_aperture_m2.min)) - 1);
  reference.push_back(reference[3]);
  reference.back().category = "Imaginary";
  const auto diags = compare_ranges(computed, reference);
  std::vector<std::string> codes;
  for (const auto& d : diags) codes.push_back(d.code);
  EXPECT_EQ(std::count(codes.begin(), codes.end(), "e_free_range_mismatch"), 1);
  EXPECT_EQ(std::count(codes.begin(), codes.end(), "range_bound_mismatch"), 1);
  EXPECT_EQ(std::count(codes.begin(), codes.end(), "range_missing"), 1);
}

TEST(Ranges, SerializeParseRoundTrip) {
  const auto computed = synthesize_all_ranges(shipped_derived());
  EXPECT_EQ(parse_ranges(serialize_ranges(computed)), computed);
}

TEST(PlotData, PassThroughAndMarkers) {
  const auto ranges = synthesize_all_ranges(shipped_derived());
  PlotOptions opts;
  opts.rydberg_marker_bandwidth_hz = 1e6;
  opts.thermal_reference_e_field = 1e-9;
  const std::vector<PlotMarker> extra{{"custom", 2e6, 3e-8}};
  const auto plot = emit_plot_data(ranges, extra, opts);
  ASSERT_EQ(plot.rectangles.size(), 11u);
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    EXPECT_EQ(plot.rectangles[i].category, ranges[i].category);
    EXPECT_EQ(plot.rectangles[i].bw_min, ranges[i].bandwidth_hz.min);
    EXPECT_EQ(plot.rectangles[i].bw_max, ranges[i].bandwidth_hz.max);
    EXPECT_EQ(plot.rectangles[i].e_min, ranges[i].e_free.min);
    EXPECT_EQ(plot.rectangles[i].e_max, ranges[i].e_free.max);
  }
  ASSERT_EQ(plot.markers.size(), 2u);
  EXPECT_DOUBLE_EQ(plot.markers[0].e_field, 4e-7);
  EXPECT_EQ(plot.markers[1].name, "custom");
  ASSERT_EQ(plot.reference_lines.size(), 1u);
  EXPECT_DOUBLE_EQ(plot.reference_lines[0].e_field, 1e-9);
}

TEST(PlotData, EmptyRanges) {
  const std::vector<PlotMarker> extra{{"m", 1.0, 1.0}};
  const auto plot = emit_plot_data({}, extra);
  EXPECT_TRUE(plot.rectangles.empty());
  EXPECT_EQ(plot.markers.size(), 1u);
  EXPECT_TRUE(plot.reference_lines.empty());
}

TEST(DatasetProperty, SynthesisPermutationInvariant) {
  const auto d = shipped_derived();
  const auto base = synthesize_all_ranges(d);
  proptest::Gen gen(0x9e7);
  for (int i = 0; i < proptest::kCases; ++i) {
    auto shuffled = d;
    for (std::size_t k = shuffled.size() - 1; k > 0; --k) {
      std::swap(shuffled[k], shuffled[static_cast<std::size_t>(gen.integer(0, static_cast<int>(k)))]);
    }
    for (const auto& r : base) {
      ASSERT_EQ(synthesize_ranges(shuffled, r.category), r) << "case " << i;
    }
  }
}

TEST(DatasetProperty, EnvelopeContainsMembersShipped) {
  const auto d = shipped_derived();
  RangeOptions opts;
  opts.rounding = Rounding::none;
  for (const auto& c : categories(d)) {
    const auto r = synthesize_ranges(d, c, opts);
    for (const auto& rec : d) {
      if (rec.category != c) continue;
      EXPECT_LE(r.e_free.min, *rec.e_free) << rec.instrument;
      EXPECT_GE(r.e_free.max, *rec.e_free) << rec.instrument;
    }
  }
}

TEST(DatasetProperty, EnvelopeContainsMembersRandom) {
  proptest::Gen gen(0xe7e);
  for (int i = 0; i < proptest::kCases; ++i) {
    const double rho2 = gen.integer(0, 1) ? 1.0 : 0.5;
    std::vector<InstrumentRecord> rs;
    const int n = gen.integer(1, 8);
    for (int k = 0; k < n; ++k) {
      rs.push_back(synthetic("r" + std::to_string(k), gen.log_uniform(1.0, 1e4),
                             gen.log_uniform(1e-4, 1e4), gen.log_uniform(1e3, 1e10), rho2));
    }
    RangeOptions opts;
    opts.rounding = Rounding::none;
    opts.lower_margin = gen.uniform(0.5, 1.0);
    opts.upper_margin = gen.uniform(1.0, 2.0);
    const auto r = synthesize_ranges(rs, "synthetic", opts);
    for (const auto& rec : rs) {
      ASSERT_LE(r.e_free.min, *rec.e_free * (1 + 1e-12)) << "case " << i;
      ASSERT_GE(r.e_free.max, *rec.e_free * (1 - 1e-12)) << "case " << i;
      ASSERT_LE(r.effective_aperture_m2.min, *rec.a_e_m2);
      ASSERT_GE(r.effective_aperture_m2.max, *rec.a_e_m2);
    }
  }
}

TEST(DatasetProperty, RoundingWithinHalfUnit) {
  proptest::Gen gen(0x20d);
  for (int i = 0; i < proptest::kCases; ++i) {
    const double x = gen.log_uniform(1e-15, 1e15);
    const double r = round_significant(x, 2);
    const double unit = std::pow(10.0, std::floor(std::log10(x)) - 1);
    ASSERT_LE(std::abs(r - x), 0.5 * unit * (1 + 1e-9)) << x;
    ASSERT_DOUBLE_EQ(round_significant(r, 2), r) << x;
  }
}
