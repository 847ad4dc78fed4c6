#pragma once

// Conversion of physical link quantities into per-slot Poisson photon
// statistics. Powers are received powers at the detector input; antenna
// gain and path loss are outside the model.
namespace photonlink {

struct LinkBudget {
  double power_dbm = 0.0;       // received signal power
  double carrier_freq = 0.0;    // Hz
  double slot_duration = 0.0;   // s
  double antenna_temp = 0.0;    // K
  double capture_prob = 1.0;    // detector capture probability in [0, 1]
};

/// Per-slot photon statistics: mean signal photons, mean background
/// photons (one background mode per slot, k_B T / h nu) and the capture
/// probability carried through for downstream thinning.
struct SlotStatistics {
  double lambda_sig = 0.0;
  double lambda_bg = 0.0;
  double capture_prob = 1.0;
};

double dbm_to_watts(double power_dbm);
double watts_to_dbm(double watts);

/// Throws std::invalid_argument if the budget violates its invariants.
SlotStatistics slot_statistics(const LinkBudget& budget);

}  // namespace photonlink
