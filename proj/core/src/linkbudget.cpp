#include "fieldsens/linkbudget.hpp"

#include <cmath>
#include <sstream>

#include "fieldsens/errors.hpp"

namespace fieldsens {

using detail::require_finite;
using detail::require_nonnegative;
using detail::require_positive;

std::vector<ModulationThreshold> default_modulation_thresholds() {
  return {{"bpsk", 3.0}, {"qpsk", 4.0}, {"8psk", 7.5}, {"16qam", 11.0}};
}

void LinkBudget::validate() const {
  require_finite(transmit_power.value(), "transmit power");
  require_finite(tx_gain.value(), "transmit gain");
  require_nonnegative(tx_feeder_loss_db, "transmit feeder loss");
  for (const auto& l : losses) require_nonnegative(l.db, "loss '" + l.name + "'");
  require_finite(rx_gain.value(), "receive gain");
  require_nonnegative(antenna_temperature.value(), "antenna temperature");
  require_nonnegative(receiver_temperature.value(), "receiver temperature");
  if (!(rx_feeder_loss >= 1.0)) throw DomainError("feeder loss must be >= 1 (linear)");
  require_positive(data_rate_bps, "data rate");
  for (const auto& t : thresholds) require_finite(t.required_eb_n0_db, "threshold '" + t.name + "'");
}

Decibels eirp(Decibels transmit_power, Decibels tx_gain, double feeder_loss_db) {
  require_finite(transmit_power.value(), "transmit power");
  require_finite(tx_gain.value(), "transmit gain");
  require_finite(feeder_loss_db, "feeder loss");
  return transmit_power + tx_gain - Decibels{feeder_loss_db, DbRef::db};
}

Kelvin system_noise_temperature(Kelvin antenna_temperature, Kelvin receiver_temperature,
                                double feeder_loss, Kelvin reference_temperature) {
  require_nonnegative(antenna_temperature.value(), "antenna temperature");
  require_nonnegative(receiver_temperature.value(), "receiver temperature");
  require_nonnegative(reference_temperature.value(), "reference temperature");
  if (!(std::isfinite(feeder_loss) && feeder_loss >= 1.0)) {
    throw DomainError("feeder loss must be >= 1 (linear)");
  }
  return antenna_temperature + reference_temperature * (feeder_loss - 1.0) +
         receiver_temperature * feeder_loss;
}

Decibels figure_of_merit(Decibels rx_gain, Kelvin system_temperature) {
  require_finite(rx_gain.value(), "receive gain");
  require_positive(system_temperature.value(), "system temperature");
  return {rx_gain.value() - 10.0 * std::log10(system_temperature.value()), DbRef::db_per_k};
}

double free_space_loss(Meters distance, Hertz frequency) {
  require_positive(distance.value(), "distance");
  const double lambda = frequency_to_wavelength(frequency).value();
  return 20.0 * std::log10(4.0 * constants::pi * distance.value() / lambda);
}

double total_loss(std::span<const LossEntry> ledger) {
  double sum = 0.0;
  for (const auto& l : ledger) {
    require_nonnegative(l.db, "loss '" + l.name + "'");
    sum += l.db;
  }
  return sum;
}

Decibels c_over_n0(Decibels eirp_value, double total_loss_db, Decibels g_over_t) {
  require_finite(eirp_value.value(), "EIRP");
  require_finite(total_loss_db, "total loss");
  require_finite(g_over_t.value(), "G/T");
  return {eirp_value.value() - total_loss_db + g_over_t.value() + constants::boltzmann_db,
          DbRef::dbhz};
}

double eb_over_n0(Decibels c_over_n0_value, double data_rate_bps) {
  require_finite(c_over_n0_value.value(), "C/N0");
  require_positive(data_rate_bps, "data rate");
  return c_over_n0_value.value() - 10.0 * std::log10(data_rate_bps);
}

LinkReport evaluate_link(const LinkBudget& budget) {
  budget.validate();

  LinkReport r;
  r.eirp = eirp(budget.transmit_power, budget.tx_gain, budget.tx_feeder_loss_db);
  r.total_loss_db = total_loss(budget.losses);
  r.system_temperature =
      system_noise_temperature(budget.antenna_temperature, budget.receiver_temperature,
                               budget.rx_feeder_loss, budget.reference_temperature);
  r.g_over_t = figure_of_merit(budget.rx_gain, r.system_temperature);
  r.c_over_n0 = c_over_n0(r.eirp, r.total_loss_db, r.g_over_t);
  r.eb_over_n0_db = eb_over_n0(r.c_over_n0, budget.data_rate_bps);

  for (const auto& t : budget.thresholds) {
    const double margin = r.eb_over_n0_db - t.required_eb_n0_db;
    r.margins.push_back({t.name, t.required_eb_n0_db, margin, margin >= 0.0});
  }

  for (const auto& l : budget.losses) {
    if (l.name == kFreeSpaceLossName) r.fsl_ledger_db = l.db;
  }
  if (budget.path) {
    r.fsl_recomputed_db = free_space_loss(budget.path->distance, budget.path->frequency);
    if (r.fsl_ledger_db) {
      const double diff = *r.fsl_ledger_db - *r.fsl_recomputed_db;
      if (std::abs(diff) > budget.fsl_tolerance_db) {
        std::ostringstream msg;
        msg << "fsl ledger value " << *r.fsl_ledger_db << " dB differs from "
            << *r.fsl_recomputed_db << " dB recomputed from distance and frequency ("
            << diff << " dB)";
        r.diagnostics.push_back(msg.str());
      }
    }
  }
  return r;
}

}  // namespace fieldsens
