#pragma once

#include <cstdint>

// Pass thresholds and engine limits. Bump kVersion whenever a value changes so
// that stored reports stay comparable.
namespace ballotlab::defaults {

inline constexpr int kVersion = 1;

inline constexpr std::int64_t kStateCap = 20'000'000;

inline constexpr double kBallotRatioSpread = 20.0;
inline constexpr double kStoppingRatioSpread = 10.0;
inline constexpr double kSpreadRatioSpread = 20.0;
inline constexpr double kSecondMomentRatioSpread = 20.0;

inline constexpr double kSpreadConstant = 1.0;
inline constexpr double kCltRelTolerance = 0.02;
inline constexpr double kCltRelToleranceLarge = 0.01;
inline constexpr double kStoppingOracleTolerance = 0.02;
inline constexpr double kSecondMomentStability = 0.25;
inline constexpr double kThresholdedMomentFactor = 3.0;

inline constexpr double kMcSigmas = 3.0;
inline constexpr std::uint64_t kMinHits = 25;
inline constexpr std::uint32_t kStreams = 64;

}  // namespace ballotlab::defaults
