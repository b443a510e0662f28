#include "rubik/rig_sim.hpp"

#include <charconv>

namespace rubik::rig {

namespace {

char serial_byte(Primitive p) {
  switch (p) {
    case Primitive::Flip: return 'f';
    case Primitive::RotCw: return 'r';
    case Primitive::RotCcw: return 'l';
    case Primitive::BotCw: return 'c';
    case Primitive::BotCcw: return 'a';
    case Primitive::Bot2: return 's';
  }
  return '?';
}

std::optional<Primitive> from_serial_byte(char b) {
  for (const Primitive p : kAllPrimitives)
    if (serial_byte(p) == b) return p;
  return std::nullopt;
}

std::string format_ms(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string_view name(Cover c) { return c == Cover::Engaged ? "Engaged" : "Raised"; }

StepOutcome exec_primitive(const RigState& r, Primitive p, const CostModel& cost, bool strict, std::size_t step) {
  StepOutcome out{r, {p, r.cover, r.cover, cost.cost(p), 0}};
  RigState& s = out.state;
  if (is_reorientation(p)) {
    s.cover = Cover::Raised;
    s.orientation = apply(s.orientation, p);
  } else {
    if (strict && s.cover == Cover::Raised) throw CoverFault(step);
    s.cover = Cover::Engaged;
    const Face down = s.orientation.face_at(Station::Down);
    const Turn turn = p == Primitive::BotCw ? Turn::CW : p == Primitive::BotCcw ? Turn::CCW : Turn::Half;
    s.cube = apply_move(s.cube, {down, turn});
  }
  s.elapsed_ms += out.entry.duration_ms;
  out.entry.cover_after = s.cover;
  out.entry.cumulative_ms = s.elapsed_ms;
  return out;
}

RunOutcome run_program(const RigState& r, const MachineProgram& program, const CostModel& cost, bool strict) {
  RunOutcome out{r, {}};
  out.trace.reserve(program.steps.size());
  for (std::size_t i = 0; i < program.steps.size(); ++i) {
    StepOutcome step = exec_primitive(out.state, program.steps[i].primitive, cost, strict, i);
    out.state = step.state;
    out.trace.push_back(step.entry);
  }
  return out;
}

std::string format_trace(const std::vector<TraceEntry>& trace) {
  std::string out;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out += std::to_string(i);
    out += '\t';
    out += name(trace[i].primitive);
    out += '\t';
    out += format_ms(trace[i].duration_ms);
    out += '\t';
    out += format_ms(trace[i].cumulative_ms);
    out += '\n';
  }
  return out;
}

std::string encode_serial(const MachineProgram& program) {
  std::string out;
  out.reserve(program.steps.size() + 1);
  for (const Step& s : program.steps) out += serial_byte(s.primitive);
  out += '\n';
  return out;
}

MachineProgram decode_serial(std::string_view bytes, const CostModel& cost) {
  std::vector<Primitive> prims;
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    if (bytes[i] == '\n') {
      if (i + 1 != bytes.size())
        throw SerialError(SerialError::Kind::BadByte, i + 1, "data after terminator at byte " + std::to_string(i + 1));
      return make_program(prims, cost);
    }
    const auto p = from_serial_byte(bytes[i]);
    if (!p) throw SerialError(SerialError::Kind::BadByte, i, "unknown command byte at " + std::to_string(i));
    prims.push_back(*p);
  }
  throw SerialError(SerialError::Kind::MissingTerminator, bytes.size(), "missing line feed terminator");
}

std::string to_hex(std::string_view bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (const char c : bytes) {
    const auto b = static_cast<unsigned char>(c);
    out += kDigits[b >> 4];
    out += kDigits[b & 0xF];
  }
  return out;
}

}  // namespace rubik::rig
