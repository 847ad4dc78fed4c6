#pragma once

// Physical constants (CODATA 2018). Kept in one place so every module
// agrees bit-for-bit on unit conversions.
namespace photonlink {

inline constexpr double kPlanck = 6.62607015e-34;          // J s
inline constexpr double kBoltzmann = 1.380649e-23;         // J / K
inline constexpr double kReducedPlanck = 1.054571817e-34;  // J s
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C

}  // namespace photonlink
