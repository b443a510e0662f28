#include "rubik/service.hpp"

#include <algorithm>

#include "rubik/rig_sim.hpp"

namespace rubik::service {

using nlohmann::json;

namespace {

ServiceError bad_request(const std::string& what) { return ServiceError(400, "BadRequest", what); }

template <typename T>
std::optional<T> field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return std::nullopt;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw bad_request(std::string("field '") + key + "' has the wrong type");
  }
}

MoveSequence checked_moves(std::string_view text) {
  try {
    return parse_moves(text);
  } catch (const MoveParseError& e) {
    throw ServiceError(400, "BadMove", e.what());
  }
}

std::string face_name(Face f) { return std::string(1, face_char(f)); }

json face_list(const std::vector<Face>& faces) {
  json out = json::array();
  for (const Face f : faces) out.push_back(face_name(f));
  return out;
}

std::string display(const MoveSequence& user, const MoveSequence& solution) {
  std::string out = format_moves_compact(user);
  if (!out.empty() && !solution.empty()) out += ' ';
  return out + format_moves_compact(solution);
}

// "/sessions/{id}" or "/sessions/{id}/{action}".
struct SessionPath {
  std::string id;
  std::string action;
};

std::optional<SessionPath> split_session_path(std::string_view path) {
  constexpr std::string_view prefix = "/sessions/";
  if (path.substr(0, prefix.size()) != prefix) return std::nullopt;
  path.remove_prefix(prefix.size());
  const auto slash = path.find('/');
  SessionPath out{std::string(path.substr(0, slash)), ""};
  if (slash != std::string_view::npos) out.action = std::string(path.substr(slash + 1));
  if (out.id.empty() || out.action.find('/') != std::string::npos) return std::nullopt;
  return out;
}

}  // namespace

CubieState checked_state(std::string_view text) {
  CubieState c;
  try {
    c = facelets_to_cubies(parse_facelets(text));
  } catch (const FaceletError& e) {
    throw ServiceError(400, std::string(to_string(e.kind())), e.what());
  }
  if (const Verdict v = validate(c); v != Verdict::Valid)
    throw ServiceError(400, std::string(to_string(v)), "state is not solvable: " + std::string(to_string(v)));
  return c;
}

Face FaceCapture::ingest(std::string_view face) {
  if (face.size() != 9) throw ServiceError(400, "BadFaceString", "face string must have 9 characters");
  Face centre = Face::U;
  for (const char ch : face)
    if (!face_from_char(ch, centre)) throw ServiceError(400, "BadFaceString", std::string("bad face letter '") + ch + "'");
  face_from_char(face[4], centre);
  faces_[centre] = std::string(face);
  order_.erase(std::remove(order_.begin(), order_.end(), centre), order_.end());
  order_.push_back(centre);
  return centre;
}

void FaceCapture::ingest_batch(const std::vector<std::string>& faces) {
  FaceCapture staged = *this;
  std::map<Face, std::string> claimed;
  for (const std::string& f : faces) {
    const Face centre = staged.ingest(f);
    const auto [it, fresh] = claimed.emplace(centre, f);
    if (!fresh && it->second != f)
      throw ServiceError(409, "DuplicateCenterConflict", "two face strings claim centre " + face_name(centre));
  }
  *this = std::move(staged);
}

std::optional<std::string> FaceCapture::assembled() const {
  if (faces_.size() != kFaces) return std::nullopt;
  std::string out;
  for (const Face f : kAllFaces) out += faces_.at(f);
  return out;
}

std::vector<Face> FaceCapture::missing() const {
  std::vector<Face> out;
  for (const Face f : kAllFaces)
    if (!faces_.count(f)) out.push_back(f);
  return out;
}

void FaceCapture::clear() {
  faces_.clear();
  order_.clear();
}

SessionStore::SessionStore(Solver solver, std::size_t capacity) : solver_(std::move(solver)), capacity_(capacity) {
  if (capacity_ == 0) capacity_ = 1;
}

SessionView SessionStore::view(const std::string& id, const Session& s) {
  SessionView v{id, s.base, s.base, s.user, s.solution, s.cursor};
  for (std::size_t i = 0; i < s.cursor; ++i)
    v.state = apply_move(v.state, i < s.user.size() ? s.user[i] : s.solution[i - s.user.size()]);
  return v;
}

std::shared_ptr<SessionStore::Session> SessionStore::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(404, "UnknownSession", "no session '" + id + "'");
  return it->second;
}

SessionView SessionStore::create(const CubieState& base) {
  auto s = std::make_shared<Session>();
  s->base = base;
  s->solution = solver_(base);
  s->created = s->updated = std::chrono::system_clock::now();

  std::lock_guard lock(mutex_);
  s->serial = next_serial_++;
  const std::string id = "s" + std::to_string(s->serial);
  while (sessions_.size() >= capacity_) {
    const auto oldest = std::min_element(sessions_.begin(), sessions_.end(), [](const auto& a, const auto& b) {
      return a.second->serial < b.second->serial;
    });
    sessions_.erase(oldest);
  }
  sessions_.emplace(id, s);
  return view(id, *s);
}

SessionView SessionStore::get(const std::string& id) const {
  const auto s = find(id);
  std::lock_guard lock(s->mutex);
  return view(id, *s);
}

SessionView SessionStore::user_moves(const std::string& id, const MoveSequence& moves) {
  const auto s = find(id);
  std::lock_guard lock(s->mutex);
  if (s->cursor != s->user.size())
    throw ServiceError(409, "MoveNotAllowedMidPlayback", "user moves are only accepted at the end of the user moves");
  MoveSequence user = s->user;
  user.insert(user.end(), moves.begin(), moves.end());
  MoveSequence solution = solver_(apply_sequence(s->base, user));
  s->user = std::move(user);
  s->solution = std::move(solution);
  s->cursor = s->user.size();
  s->updated = std::chrono::system_clock::now();
  return view(id, *s);
}

SessionView SessionStore::step(const std::string& id, bool forward) {
  const auto s = find(id);
  std::lock_guard lock(s->mutex);
  if (forward && s->cursor < s->user.size() + s->solution.size()) ++s->cursor;
  if (!forward && s->cursor > 0) --s->cursor;
  s->updated = std::chrono::system_clock::now();
  return view(id, *s);
}

std::size_t SessionStore::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

Service::Service(const twophase::Tables& tables, Config config)
    : tables_(tables),
      config_(config),
      sessions_([this](const CubieState& c) { return solve_moves(c, {}); }, config.session_capacity) {}

MoveSequence Service::solve_moves(const CubieState& c, const twophase::SolveOptions& options) const {
  twophase::SolveOptions opt = options;
  if (!opt.time_budget || *opt.time_budget > config_.solve_time_budget) opt.time_budget = config_.solve_time_budget;
  try {
    return twophase::solve(c, opt, tables_).moves;
  } catch (const twophase::SolveError& e) {
    if (e.kind() == twophase::SolveError::Kind::InvalidState)
      throw ServiceError(400, std::string(to_string(e.verdict())), e.what());
    const int status = e.kind() == twophase::SolveError::Kind::BudgetExhausted ? 503 : 422;
    throw ServiceError(status, std::string(twophase::to_string(e.kind())), e.what());
  }
}

json Service::program_fields(const MoveSequence& moves) const {
  const rig::MachineProgram program = rig::compile(moves, config_.cost);
  json names = json::array();
  for (const rig::Step& s : program.steps) names.push_back(std::string(rig::name(s.primitive)));
  return {{"program", names},
          {"serial_hex", rig::to_hex(rig::encode_serial(program))},
          {"total_ms", program.total_ms}};
}

json Service::solve(const json& request) const {
  const auto state = field<std::string>(request, "state");
  if (!state) throw bad_request("missing field 'state'");
  const CubieState c = checked_state(*state);

  twophase::SolveOptions opt;
  if (const auto v = field<int>(request, "max_length")) opt.max_length = *v;
  if (const auto v = field<bool>(request, "improve")) opt.improve = *v;
  if (const auto v = field<std::uint64_t>(request, "node_budget")) opt.node_budget = *v;
  if (opt.max_length < 0 || opt.max_length > 30) throw bad_request("max_length out of range");
  if (opt.improve && opt.node_budget == 0) opt.node_budget = 1000000;

  const MoveSequence moves = solve_moves(c, opt);
  json out = program_fields(moves);
  out["state"] = cubies_to_facelets(c).str();
  out["solution"] = format_moves(moves);
  out["length"] = moves.size();
  return out;
}

json Service::scramble(const json& request) const {
  const std::string mode = field<std::string>(request, "mode").value_or("virtual");
  if (mode != "virtual" && mode != "real") throw bad_request("mode must be 'virtual' or 'real'");
  const auto seed = field<std::uint64_t>(request, "seed").value_or(0);
  const auto length = field<std::size_t>(request, "length");
  if (length && *length > 1000) throw bad_request("length out of range");

  CubieState state;
  MoveSequence moves;
  if (length) {
    moves = random_moves(seed, *length);
    state = apply_sequence(CubieState{}, moves);
  } else {
    state = random_state(seed);
    moves = invert_sequence(solve_moves(state, {}));
  }
  json out{{"mode", mode}, {"seed", seed}, {"state", cubies_to_facelets(state).str()}, {"moves", format_moves(moves)}};
  if (mode == "real") out.update(program_fields(moves));
  return out;
}

json Service::post_faces(const json& request) {
  std::lock_guard lock(capture_mutex_);
  if (field<bool>(request, "clear").value_or(false)) capture_.clear();
  if (const auto one = field<std::string>(request, "face")) capture_.ingest(*one);
  if (const auto many = field<std::vector<std::string>>(request, "faces")) capture_.ingest_batch(*many);

  json faces = json::object();
  for (const auto& [f, s] : capture_.faces()) faces[face_name(f)] = s;
  return {{"faces", faces},
          {"order", face_list(capture_.arrival_order())},
          {"missing", face_list(capture_.missing())},
          {"complete", capture_.assembled().has_value()}};
}

json Service::assembled_faces() const {
  std::lock_guard lock(capture_mutex_);
  const auto state = capture_.assembled();
  if (!state) {
    std::string missing;
    for (const Face f : capture_.missing()) missing += face_char(f);
    throw ServiceError(409, "Incomplete", "faces not captured yet: " + missing);
  }
  std::string verdict = "Valid";
  try {
    checked_state(*state);
  } catch (const ServiceError& e) {
    verdict = e.kind();
  }
  return {{"state", *state}, {"verdict", verdict}};
}

json Service::session_json(const SessionView& v) const {
  json out = program_fields(v.solution);
  out["id"] = v.id;
  out["base_state"] = cubies_to_facelets(v.base_state).str();
  out["state"] = cubies_to_facelets(v.state).str();
  out["user_moves"] = format_moves(v.user_moves);
  out["solution"] = format_moves(v.solution);
  out["display"] = display(v.user_moves, v.solution);
  out["cursor"] = v.cursor;
  out["total_moves"] = v.total_moves();
  return out;
}

json Service::create_session(const json& request) {
  const auto state = field<std::string>(request, "state");
  return session_json(sessions_.create(state ? checked_state(*state) : CubieState{}));
}

json Service::session_moves(const std::string& id, const json& request) {
  auto text = field<std::string>(request, "moves");
  if (!text) text = field<std::string>(request, "move");
  if (!text) throw bad_request("missing field 'moves'");
  return session_json(sessions_.user_moves(id, checked_moves(*text)));
}

json Service::session_step(const std::string& id, const json& request) {
  const std::string dir = field<std::string>(request, "direction").value_or("next");
  if (dir != "next" && dir != "prev") throw bad_request("direction must be 'next' or 'prev'");
  return session_json(sessions_.step(id, dir == "next"));
}

json Service::get_session(const std::string& id) const { return session_json(sessions_.get(id)); }

Response Service::handle(std::string_view method, std::string_view path, std::string_view body) {
  try {
    json request = json::object();
    if (!body.empty()) {
      request = json::parse(body, nullptr, false);
      if (request.is_discarded()) throw bad_request("body is not valid JSON");
      if (!request.is_object()) throw bad_request("body must be a JSON object");
    }
    const bool post = method == "POST";
    const bool get = method == "GET";
    const auto route = [&](bool ok) {
      if (!ok) throw ServiceError(405, "MethodNotAllowed", std::string(method) + " not allowed on " + std::string(path));
    };

    if (path == "/solve") { route(post); return {200, solve(request)}; }
    if (path == "/scramble") { route(post); return {200, scramble(request)}; }
    if (path == "/faces") { route(post); return {200, post_faces(request)}; }
    if (path == "/faces/assembled") { route(get); return {200, assembled_faces()}; }
    if (path == "/sessions") { route(post); return {200, create_session(request)}; }
    if (const auto sp = split_session_path(path)) {
      if (sp->action.empty()) { route(get); return {200, get_session(sp->id)}; }
      if (sp->action == "moves") { route(post); return {200, session_moves(sp->id, request)}; }
      if (sp->action == "step") { route(post); return {200, session_step(sp->id, request)}; }
    }
    throw ServiceError(404, "NotFound", "no route " + std::string(path));
  } catch (const ServiceError& e) {
    return {e.status(), {{"error", e.kind()}, {"message", e.what()}}};
  } catch (const std::exception& e) {
    return {500, {{"error", "Internal"}, {"message", e.what()}}};
  }
}

}  // namespace rubik::service
