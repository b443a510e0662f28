#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rubik/cube.hpp"

namespace rubik::rig {

// Atomic actions of the three-motor rig. Only the bottom layer can be
// turned; every other face has to be brought down first.
enum class Primitive : std::uint8_t { Flip, RotCw, RotCcw, BotCw, BotCcw, Bot2 };

inline constexpr std::array<Primitive, 6> kAllPrimitives = {Primitive::Flip,  Primitive::RotCw,  Primitive::RotCcw,
                                                            Primitive::BotCw, Primitive::BotCcw, Primitive::Bot2};

// FLIP, ROT_CW, ROT_CCW, BOT_CW, BOT_CCW, BOT_2
std::string_view name(Primitive p);
std::optional<Primitive> primitive_from_name(std::string_view s);

inline constexpr bool is_reorientation(Primitive p) {
  return p == Primitive::Flip || p == Primitive::RotCw || p == Primitive::RotCcw;
}

// Per-primitive durations in milliseconds; defaults are the measured rig
// timings. Whole-cube rotation costs the same in both directions.
struct CostModel {
  double flip_ms = 2731;
  double rot90_ms = 1074;
  double bot_cw_ms = 2028;
  double bot_ccw_ms = 2582;
  double bot180_ms = 3319;

  double cost(Primitive p) const;

  friend bool operator==(const CostModel&, const CostModel&) = default;
};

class CostModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// "key = value" (or "key: value") lines, '#' comments. Absent keys keep
// their defaults; unknown keys and negative or non-finite values throw.
CostModel parse_cost_model(std::string_view text);
CostModel load_cost_model(const std::filesystem::path& path);

// Physical positions in the holder. Down is the turnable layer.
enum class Station : std::uint8_t { Up, Down, Front, Back, Left, Right };

std::string_view name(Station s);

// Whole-cube orientation: which holder station each logical face occupies.
class Orientation {
 public:
  Orientation();  // identity: U at Up, F at Front, ...
  static Orientation identity() { return {}; }
  static Orientation from_stations(const std::array<Station, kFaces>& station_of_face);

  // All 24 rotations, identity first, in BFS order over {FLIP, ROT_CW}.
  static const std::array<Orientation, 24>& all();

  Station station(Face f) const { return stations_[static_cast<std::size_t>(f)]; }
  Face face_at(Station s) const;
  // Bijective, opposite faces on opposite stations, right-handed.
  bool valid() const;
  // Position in all().
  std::size_t index() const;

  friend bool operator==(const Orientation&, const Orientation&) = default;

 private:
  std::array<Station, kFaces> stations_;
};

// Flip convention: Down -> Back -> Up -> Front -> Down, Left/Right fixed.
Orientation flip_action(const Orientation& o);
// ROT_CW is clockwise seen from above: Front -> Left -> Back -> Right.
Orientation rot_action(const Orientation& o, bool clockwise);
// Orientation after a primitive; bottom turns leave it unchanged.
Orientation apply(const Orientation& o, Primitive p);

struct Plan {
  std::vector<Primitive> primitives;
  Orientation result;
  double cost_ms = 0;
};

// Cheapest FLIP/ROT sequence bringing `target` to station Down. Ties go to
// fewer primitives, then lexicographic order of the primitive enum.
Plan plan_reorientation(const Orientation& o, Face target, const CostModel& cost = {});

// Reorientation plan followed by the bottom turn realizing `m`.
Plan lower_move(const Orientation& o, Move m, const CostModel& cost = {});

struct Step {
  Primitive primitive;
  // Index of the (lowered) move a bottom turn realizes; empty for
  // reorientation steps.
  std::optional<std::size_t> move_index;

  friend bool operator==(const Step&, const Step&) = default;
};

struct MachineProgram {
  std::vector<Step> steps;
  double total_ms = 0;

  std::vector<Primitive> primitives() const;
  friend bool operator==(const MachineProgram&, const MachineProgram&) = default;
};

// Annotates bottom turns with consecutive move indices and sums the cost.
MachineProgram make_program(const std::vector<Primitive>& primitives, const CostModel& cost = {});

// Merges adjacent turns of the same face modulo four ("U' U'" -> "U2",
// "F' F" -> nothing), repeatedly.
MoveSequence simplify(const MoveSequence& s);

// Greedy per-move lowering from the identity orientation.
MachineProgram compile(const MoveSequence& s, const CostModel& cost = {}, bool simplify_first = true);

// Orientation reached after running `program` from the identity.
Orientation final_orientation(const MachineProgram& program);

std::string format_program(const MachineProgram& program);

}  // namespace rubik::rig
