#pragma once

#include <array>
#include <string>

namespace hexcpg {

// Leg storage order used everywhere: index 0..5.
enum Leg : int { LF = 0, RF = 1, LM = 2, RM = 3, LH = 4, RH = 5 };

inline constexpr int kNumLegs = 6;
inline constexpr std::array<const char*, 6> kLegNames{"LF", "RF", "LM", "RM", "LH", "RH"};

// Tripod membership: group 0 = {LF, RM, LH}, group 1 = {RF, LM, RH}.
// The two groups walk in antiphase under the default coupling bias.
inline constexpr std::array<int, 6> kTripodGroup{0, 1, 1, 0, 0, 1};

// +1 for left-side legs, -1 for right-side legs. The leg-local frame has
// x along the body's forward axis and y pointing away from the body, so a
// right leg's local y maps to body -y.
inline constexpr std::array<double, 6> kLegSide{+1.0, -1.0, +1.0, -1.0, +1.0, -1.0};

// Parses "LF", "lm", ... -> leg index; returns -1 if unknown.
inline int parse_leg(const std::string& name) {
  std::string up;
  for (char c : name) up.push_back(static_cast<char>(c >= 'a' && c <= 'z' ? c - 32 : c));
  for (int i = 0; i < kNumLegs; ++i)
    if (up == kLegNames[i]) return i;
  return -1;
}

}  // namespace hexcpg
