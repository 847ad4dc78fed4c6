#include "photonlink/radiometry.hpp"

#include <cmath>
#include <stdexcept>

#include "photonlink/constants.hpp"

namespace photonlink {

double dbm_to_watts(double power_dbm) {
  return std::pow(10.0, (power_dbm - 30.0) / 10.0);
}

double watts_to_dbm(double watts) {
  if (watts <= 0.0) throw std::invalid_argument("watts_to_dbm: power must be > 0");
  return 10.0 * std::log10(watts) + 30.0;
}

SlotStatistics slot_statistics(const LinkBudget& budget) {
  if (!(budget.carrier_freq > 0.0))
    throw std::invalid_argument("slot_statistics: carrier_freq must be > 0");
  if (!(budget.slot_duration > 0.0))
    throw std::invalid_argument("slot_statistics: slot_duration must be > 0");
  if (budget.antenna_temp < 0.0)
    throw std::invalid_argument("slot_statistics: antenna_temp must be >= 0");
  if (budget.capture_prob < 0.0 || budget.capture_prob > 1.0)
    throw std::invalid_argument("slot_statistics: capture_prob must be in [0, 1]");

  const double photon_energy = kPlanck * budget.carrier_freq;
  SlotStatistics stats;
  stats.lambda_sig = dbm_to_watts(budget.power_dbm) * budget.slot_duration / photon_energy;
  stats.lambda_bg = kBoltzmann * budget.antenna_temp / photon_energy;
  stats.capture_prob = budget.capture_prob;
  return stats;
}

}  // namespace photonlink
