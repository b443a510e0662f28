#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rubik/rig.hpp"

namespace rubik::rig {

namespace {

using Vec = std::array<int, 3>;

// x = right, y = up, z = front.
Vec direction(Station s) {
  switch (s) {
    case Station::Up: return {0, 1, 0};
    case Station::Down: return {0, -1, 0};
    case Station::Front: return {0, 0, 1};
    case Station::Back: return {0, 0, -1};
    case Station::Left: return {-1, 0, 0};
    case Station::Right: return {1, 0, 0};
  }
  return {0, 0, 0};
}

Vec cross(const Vec& a, const Vec& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Station flip_station(Station s) {
  switch (s) {
    case Station::Down: return Station::Back;
    case Station::Back: return Station::Up;
    case Station::Up: return Station::Front;
    case Station::Front: return Station::Down;
    default: return s;
  }
}

Station rot_cw_station(Station s) {
  switch (s) {
    case Station::Front: return Station::Left;
    case Station::Left: return Station::Back;
    case Station::Back: return Station::Right;
    case Station::Right: return Station::Front;
    default: return s;
  }
}

template <typename F>
Orientation map_stations(const Orientation& o, F f) {
  std::array<Station, kFaces> s;
  for (const Face face : kAllFaces) s[static_cast<std::size_t>(face)] = f(o.station(face));
  return Orientation::from_stations(s);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

constexpr std::array<Primitive, 3> kReorientations = {Primitive::Flip, Primitive::RotCw, Primitive::RotCcw};

// Label for the planner: ordered by cost, then length, then the sequence.
struct Label {
  double cost = 0;
  std::vector<Primitive> path;

  bool operator<(const Label& o) const {
    if (cost != o.cost) return cost < o.cost;
    if (path.size() != o.path.size()) return path.size() < o.path.size();
    return path < o.path;
  }
};

}  // namespace

std::string_view name(Primitive p) {
  switch (p) {
    case Primitive::Flip: return "FLIP";
    case Primitive::RotCw: return "ROT_CW";
    case Primitive::RotCcw: return "ROT_CCW";
    case Primitive::BotCw: return "BOT_CW";
    case Primitive::BotCcw: return "BOT_CCW";
    case Primitive::Bot2: return "BOT_2";
  }
  return "?";
}

std::optional<Primitive> primitive_from_name(std::string_view s) {
  for (const Primitive p : kAllPrimitives)
    if (name(p) == s) return p;
  return std::nullopt;
}

std::string_view name(Station s) {
  switch (s) {
    case Station::Up: return "Up";
    case Station::Down: return "Down";
    case Station::Front: return "Front";
    case Station::Back: return "Back";
    case Station::Left: return "Left";
    case Station::Right: return "Right";
  }
  return "?";
}

double CostModel::cost(Primitive p) const {
  switch (p) {
    case Primitive::Flip: return flip_ms;
    case Primitive::RotCw:
    case Primitive::RotCcw: return rot90_ms;
    case Primitive::BotCw: return bot_cw_ms;
    case Primitive::BotCcw: return bot_ccw_ms;
    case Primitive::Bot2: return bot180_ms;
  }
  return 0;
}

CostModel parse_cost_model(std::string_view text) {
  CostModel m;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto sep = body.find_first_of("=:");
    if (sep == std::string::npos)
      throw CostModelError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, sep));
    const std::string value = trim(std::string_view(body).substr(sep + 1));
    double v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(v) || v < 0)
      throw CostModelError("line " + std::to_string(line_no) + ": bad duration '" + value + "'");
    if (key == "flip_ms") m.flip_ms = v;
    else if (key == "rot90_ms") m.rot90_ms = v;
    else if (key == "bot_cw_ms") m.bot_cw_ms = v;
    else if (key == "bot_ccw_ms") m.bot_ccw_ms = v;
    else if (key == "bot180_ms") m.bot180_ms = v;
    else throw CostModelError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  return m;
}

CostModel load_cost_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CostModelError("cannot read cost model " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_cost_model(buf.str());
}

Orientation::Orientation()
    : stations_{Station::Up, Station::Right, Station::Front, Station::Down, Station::Left, Station::Back} {}

Orientation Orientation::from_stations(const std::array<Station, kFaces>& station_of_face) {
  Orientation o;
  o.stations_ = station_of_face;
  return o;
}

const std::array<Orientation, 24>& Orientation::all() {
  static const std::array<Orientation, 24> table = [] {
    std::vector<Orientation> seen{Orientation::identity()};
    for (std::size_t i = 0; i < seen.size(); ++i) {
      for (const Orientation next : {flip_action(seen[i]), rot_action(seen[i], true)}) {
        if (std::find(seen.begin(), seen.end(), next) == seen.end()) seen.push_back(next);
      }
    }
    std::array<Orientation, 24> out;
    std::copy_n(seen.begin(), 24, out.begin());
    return out;
  }();
  return table;
}

Face Orientation::face_at(Station s) const {
  for (const Face f : kAllFaces)
    if (station(f) == s) return f;
  throw std::logic_error("orientation has no face at station " + std::string(name(s)));
}

bool Orientation::valid() const {
  std::array<bool, kFaces> used{};
  for (const Station s : stations_) {
    if (static_cast<std::size_t>(s) >= kFaces || used[static_cast<std::size_t>(s)]) return false;
    used[static_cast<std::size_t>(s)] = true;
  }
  for (const Face f : kAllFaces) {
    const Vec a = direction(station(f));
    const Vec b = direction(station(opposite(f)));
    if (a[0] != -b[0] || a[1] != -b[1] || a[2] != -b[2]) return false;
  }
  return cross(direction(station(Face::R)), direction(station(Face::U))) == direction(station(Face::F));
}

std::size_t Orientation::index() const {
  const auto& a = all();
  return static_cast<std::size_t>(std::find(a.begin(), a.end(), *this) - a.begin());
}

Orientation flip_action(const Orientation& o) { return map_stations(o, flip_station); }

Orientation rot_action(const Orientation& o, bool clockwise) {
  if (clockwise) return map_stations(o, rot_cw_station);
  return map_stations(o, [](Station s) { return rot_cw_station(rot_cw_station(rot_cw_station(s))); });
}

Orientation apply(const Orientation& o, Primitive p) {
  switch (p) {
    case Primitive::Flip: return flip_action(o);
    case Primitive::RotCw: return rot_action(o, true);
    case Primitive::RotCcw: return rot_action(o, false);
    default: return o;
  }
}

Plan plan_reorientation(const Orientation& o, Face target, const CostModel& cost) {
  // Label-setting Dijkstra over the 24 orientations.
  std::array<std::optional<Label>, 24> best;
  std::array<bool, 24> done{};
  best[o.index()] = Label{};
  for (;;) {
    std::size_t u = 24;
    for (std::size_t i = 0; i < 24; ++i)
      if (!done[i] && best[i] && (u == 24 || *best[i] < *best[u])) u = i;
    if (u == 24) break;
    done[u] = true;
    const Orientation& here = Orientation::all()[u];
    if (here.station(target) == Station::Down) return {best[u]->path, here, best[u]->cost};
    for (const Primitive p : kReorientations) {
      const std::size_t v = apply(here, p).index();
      if (done[v]) continue;
      Label next{best[u]->cost + cost.cost(p), best[u]->path};
      next.path.push_back(p);
      if (!best[v] || next < *best[v]) best[v] = std::move(next);
    }
  }
  throw std::logic_error("orientation graph is disconnected");
}

Plan lower_move(const Orientation& o, Move m, const CostModel& cost) {
  Plan plan = plan_reorientation(o, m.face, cost);
  const Primitive bottom = m.turn == Turn::CW ? Primitive::BotCw : m.turn == Turn::CCW ? Primitive::BotCcw : Primitive::Bot2;
  plan.primitives.push_back(bottom);
  plan.cost_ms += cost.cost(bottom);
  return plan;
}

std::vector<Primitive> MachineProgram::primitives() const {
  std::vector<Primitive> out;
  out.reserve(steps.size());
  for (const Step& s : steps) out.push_back(s.primitive);
  return out;
}

MachineProgram make_program(const std::vector<Primitive>& primitives, const CostModel& cost) {
  MachineProgram prog;
  std::size_t move_index = 0;
  for (const Primitive p : primitives) {
    prog.steps.push_back({p, is_reorientation(p) ? std::nullopt : std::optional<std::size_t>(move_index++)});
    prog.total_ms += cost.cost(p);
  }
  return prog;
}

MoveSequence simplify(const MoveSequence& s) {
  MoveSequence out;
  for (const Move m : s) {
    if (!out.empty() && out.back().face == m.face) {
      const int q = (out.back().quarter_turns() + m.quarter_turns()) % 4;
      if (q == 0) out.pop_back();
      else out.back().turn = static_cast<Turn>(q - 1);
    } else {
      out.push_back(m);
    }
  }
  return out;
}

MachineProgram compile(const MoveSequence& s, const CostModel& cost, bool simplify_first) {
  const MoveSequence moves = simplify_first ? simplify(s) : s;
  MachineProgram prog;
  Orientation o;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    const Plan plan = lower_move(o, moves[i], cost);
    for (const Primitive p : plan.primitives)
      prog.steps.push_back({p, is_reorientation(p) ? std::nullopt : std::optional<std::size_t>(i)});
    prog.total_ms += plan.cost_ms;
    o = plan.result;
  }
  return prog;
}

Orientation final_orientation(const MachineProgram& program) {
  Orientation o;
  for (const Step& s : program.steps) o = apply(o, s.primitive);
  return o;
}

std::string format_program(const MachineProgram& program) {
  std::string out;
  for (const Step& s : program.steps) {
    if (!out.empty()) out += ' ';
    out += name(s.primitive);
  }
  return out;
}

}  // namespace rubik::rig
