#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fieldsens/quantities.hpp"

namespace fieldsens {

/// One named propagation loss in the ledger, in dB (>= 0).
struct LossEntry {
  std::string name;
  double db = 0.0;
};

/// Ledger name under which the free-space path loss is recorded.
inline constexpr std::string_view kFreeSpaceLossName = "fsl";

struct ModulationThreshold {
  std::string name;
  double required_eb_n0_db = 0.0;
};

/// BPSK 3, QPSK 4, 8PSK 7.5 and 16QAM 11 dB (FEC 1/2, 1/2, 3/4, 3/4).
std::vector<ModulationThreshold> default_modulation_thresholds();

/// Optional geometry used only to cross-check the ledger's FSL entry.
struct PathGeometry {
  Meters distance;
  Hertz frequency;
};

struct LinkBudget {
  Decibels transmit_power{0.0, DbRef::dbw};
  Decibels tx_gain{0.0, DbRef::dbi};
  double tx_feeder_loss_db = 0.0;
  std::vector<LossEntry> losses;
  Decibels rx_gain{0.0, DbRef::dbi};
  Kelvin antenna_temperature;
  Kelvin receiver_temperature;
  double rx_feeder_loss = 1.0;  ///< linear, >= 1
  double data_rate_bps = 1.0;
  std::vector<ModulationThreshold> thresholds = default_modulation_thresholds();
  std::optional<PathGeometry> path;
  Kelvin reference_temperature{constants::reference_temperature};
  double fsl_tolerance_db = 0.5;  ///< ledger vs recomputed FSL before flagging

  void validate() const;
};

struct LinkMargin {
  std::string name;
  double required_db = 0.0;
  double margin_db = 0.0;
  bool closes = false;
};

struct LinkReport {
  Decibels eirp{0.0, DbRef::dbw};
  double total_loss_db = 0.0;
  Kelvin system_temperature;
  Decibels g_over_t{0.0, DbRef::db_per_k};
  Decibels c_over_n0{0.0, DbRef::dbhz};
  double eb_over_n0_db = 0.0;
  std::vector<LinkMargin> margins;
  std::optional<double> fsl_ledger_db;
  std::optional<double> fsl_recomputed_db;
  std::vector<std::string> diagnostics;
};

/// EIRP = P_T + G_T - L_FTx.
Decibels eirp(Decibels transmit_power, Decibels tx_gain, double feeder_loss_db);

/// T_sys referred to the antenna terminals behind a lossy feeder:
/// T_a + (L_F - 1) T_0 + L_F T_R.
Kelvin system_noise_temperature(Kelvin antenna_temperature, Kelvin receiver_temperature,
                                double feeder_loss,
                                Kelvin reference_temperature = Kelvin{constants::reference_temperature});

/// G/T = G_R - 10 log10(T_sys).
Decibels figure_of_merit(Decibels rx_gain, Kelvin system_temperature);

/// L_FSL = 20 log10(4 pi d / lambda).
double free_space_loss(Meters distance, Hertz frequency);

double total_loss(std::span<const LossEntry> ledger);

/// C/N0 = EIRP - L + G/T + 228.6.
Decibels c_over_n0(Decibels eirp_value, double total_loss_db, Decibels g_over_t);

/// Eb/N0 = C/N0 - 10 log10(R).
double eb_over_n0(Decibels c_over_n0_value, double data_rate_bps);

LinkReport evaluate_link(const LinkBudget& budget);

}  // namespace fieldsens
