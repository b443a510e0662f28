#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rubik/cube.hpp"
#include "rubik/rig.hpp"
#include "rubik/twophase.hpp"

namespace rubik::service {

// Error carried back to HTTP clients: status code plus a stable kind name
// (a cube verdict such as "PermParity", or a service error such as
// "UnknownSession").
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, std::string kind, const std::string& what)
      : std::runtime_error(what), status_(status), kind_(std::move(kind)) {}
  int status() const { return status_; }
  const std::string& kind() const { return kind_; }

 private:
  int status_;
  std::string kind_;
};

// Parses and validates a 54-character state; failures become 400 errors
// named after the facelet error or validation verdict.
CubieState checked_state(std::string_view text);

// Per-face capture from the detector: nine-character strings keyed by their
// centre. Re-capturing a face replaces it.
class FaceCapture {
 public:
  // Returns the centre the string was stored under. BadFaceString on wrong
  // length or alphabet.
  Face ingest(std::string_view face);
  // Ingests several strings at once; two different strings claiming the same
  // centre raise DuplicateCenterConflict and nothing is stored.
  void ingest_batch(const std::vector<std::string>& faces);
  // 54 characters in U R F D L B order once all six faces are present.
  std::optional<std::string> assembled() const;
  std::vector<Face> missing() const;
  const std::vector<Face>& arrival_order() const { return order_; }
  const std::map<Face, std::string>& faces() const { return faces_; }
  void clear();

 private:
  std::map<Face, std::string> faces_;
  std::vector<Face> order_;
};

struct SessionView {
  std::string id;
  CubieState base_state;
  CubieState state;  // at the cursor
  MoveSequence user_moves;
  MoveSequence solution;
  std::size_t cursor = 0;
  std::size_t total_moves() const { return user_moves.size() + solution.size(); }
};

// In-memory step-mode sessions. Ids are deterministic ("s1", "s2", ...);
// beyond `capacity` the oldest session is evicted. Mutations of one session
// are serialized; distinct sessions proceed independently.
class SessionStore {
 public:
  using Solver = std::function<MoveSequence(const CubieState&)>;

  SessionStore(Solver solver, std::size_t capacity = 64);

  SessionView create(const CubieState& base);
  SessionView get(const std::string& id) const;
  // Appends user moves and re-solves. Only allowed with the cursor at the
  // end of the user-move region.
  SessionView user_moves(const std::string& id, const MoveSequence& moves);
  // No-op at the bounds.
  SessionView step(const std::string& id, bool forward);
  std::size_t size() const;

 private:
  struct Session {
    mutable std::mutex mutex;
    std::uint64_t serial = 0;
    std::chrono::system_clock::time_point created;
    std::chrono::system_clock::time_point updated;
    CubieState base;
    MoveSequence user;
    MoveSequence solution;
    std::size_t cursor = 0;
  };

  std::shared_ptr<Session> find(const std::string& id) const;
  static SessionView view(const std::string& id, const Session& s);

  Solver solver_;
  std::size_t capacity_;
  mutable std::mutex mutex_;
  std::uint64_t next_serial_ = 1;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

struct Config {
  rig::CostModel cost;
  std::size_t session_capacity = 64;
  // Upper bound on any single solve triggered by a request.
  std::chrono::milliseconds solve_time_budget{10000};
};

struct Response {
  int status = 200;
  nlohmann::json body;
};

// Transport-independent request handling for the JSON API.
class Service {
 public:
  Service(const twophase::Tables& tables, Config config = {});

  // Dispatches on method and exact path; malformed bodies give 400.
  Response handle(std::string_view method, std::string_view path, std::string_view body);

  nlohmann::json solve(const nlohmann::json& request) const;
  nlohmann::json scramble(const nlohmann::json& request) const;
  nlohmann::json post_faces(const nlohmann::json& request);
  nlohmann::json assembled_faces() const;
  nlohmann::json create_session(const nlohmann::json& request);
  nlohmann::json session_moves(const std::string& id, const nlohmann::json& request);
  nlohmann::json session_step(const std::string& id, const nlohmann::json& request);
  nlohmann::json get_session(const std::string& id) const;

  const Config& config() const { return config_; }

 private:
  MoveSequence solve_moves(const CubieState& c, const twophase::SolveOptions& options) const;
  nlohmann::json program_fields(const MoveSequence& moves) const;
  nlohmann::json session_json(const SessionView& v) const;

  const twophase::Tables& tables_;
  Config config_;
  mutable std::mutex capture_mutex_;
  FaceCapture capture_;
  SessionStore sessions_;
};

}  // namespace rubik::service
