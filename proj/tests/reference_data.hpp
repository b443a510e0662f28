#pragma once

// Published rig runs: face-turn sequences and their measured durations.

#include <array>
#include <string_view>

namespace reference {

struct Run {
  std::string_view moves;
  double ms;
};

inline constexpr std::array<Run, 5> kRuns = {{
    {"R' B U2 B D L F2 R' B' D' U' U' F' F U L' D2 F2 B2 R B U L2", 140967},
    {"U B' D F U2 R B' L' F2 R2 D' D2 B2 B2 F2 L D2 L' F2 L' L U2", 132163},
    {"L2 R' L D' F2 D2 F F' U2 R' U D2 D' U R2 D D2 L' F F D' B", 134797},
    {"U F2 L' D2 D2 R2 B L' R' D D2 B' D D R' U2 F' R2 B' B2", 115738},
    {"L2 L2 B D2 U R B2 D R U U' D' D2 R F2 L' B' R' B' U2 U2 L2 L2", 131460},
}};

inline constexpr double kMeanMs = 128366.108;

}  // namespace reference
