#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rubik/cube.hpp"
#include "rubik/rig.hpp"

namespace rubik::rig {

enum class Cover : std::uint8_t { Engaged, Raised };

std::string_view name(Cover c);

// Machine state of the simulated rig. `cube` is kept in the logical frame;
// the physical view is `cube` seen through `orientation`.
struct RigState {
  CubieState cube;
  Orientation orientation;
  Cover cover = Cover::Engaged;
  double elapsed_ms = 0;

  friend bool operator==(const RigState&, const RigState&) = default;
};

struct TraceEntry {
  Primitive primitive;
  Cover cover_before;
  Cover cover_after;
  double duration_ms;
  double cumulative_ms;
};

// Bottom turn issued with the cover raised in strict mode: with the top
// layers unlocked the cube would leave the holder.
class CoverFault : public std::runtime_error {
 public:
  explicit CoverFault(std::size_t step)
      : std::runtime_error("bottom turn at step " + std::to_string(step) + " with cover raised"), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

struct StepOutcome {
  RigState state;
  TraceEntry entry;
};

// Lenient mode engages the cover for bottom turns automatically; reorienting
// always raises it. `step` only labels a CoverFault.
StepOutcome exec_primitive(const RigState& r, Primitive p, const CostModel& cost = {}, bool strict = false,
                           std::size_t step = 0);

struct RunOutcome {
  RigState state;
  std::vector<TraceEntry> trace;
};

RunOutcome run_program(const RigState& r, const MachineProgram& program, const CostModel& cost = {},
                       bool strict = false);

// One line per entry: index, primitive, duration_ms, cumulative_ms (tabs).
std::string format_trace(const std::vector<TraceEntry>& trace);

// Serial wire format: one ASCII byte per primitive
// (f r l c a s for FLIP ROT_CW ROT_CCW BOT_CW BOT_CCW BOT_2) then '\n'.
std::string encode_serial(const MachineProgram& program);

class SerialError : public std::runtime_error {
 public:
  enum class Kind { BadByte, MissingTerminator };
  SerialError(Kind kind, std::size_t position, const std::string& what)
      : std::runtime_error(what), kind_(kind), position_(position) {}
  Kind kind() const { return kind_; }
  std::size_t position() const { return position_; }

 private:
  Kind kind_;
  std::size_t position_;
};

MachineProgram decode_serial(std::string_view bytes, const CostModel& cost = {});

std::string to_hex(std::string_view bytes);

}  // namespace rubik::rig
