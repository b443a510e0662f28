#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <thread>

#include "rubik/http_server.hpp"
#include "rubik/rig_sim.hpp"
#include "rubik/rng.hpp"
#include "rubik/service.hpp"

using namespace rubik;
using namespace rubik::service;
using nlohmann::json;

namespace {

const std::string kSolved = "UUUUUUUUURRRRRRRRRFFFFFFFFFDDDDDDDDDLLLLLLLLLBBBBBBBBB";

Service& svc() {
  static Service s(twophase::Tables::shared());
  return s;
}

Response post(Service& s, const std::string& path, const json& body) { return s.handle("POST", path, body.dump()); }

std::string facelets(const CubieState& c) { return cubies_to_facelets(c).str(); }

CubieState state_of(const json& j) { return facelets_to_cubies(parse_facelets(j.at("state").get<std::string>())); }

std::string error_of(const Response& r) { return r.body.value("error", ""); }

// Replays a response's primitive names on the simulator from `start`.
CubieState run_names(const CubieState& start, const json& program) {
  std::vector<rig::Primitive> prims;
  for (const auto& n : program) prims.push_back(*rig::primitive_from_name(n.get<std::string>()));
  rig::RigState r;
  r.cube = start;
  return rig::run_program(r, rig::make_program(prims)).state.cube;
}

}  // namespace

TEST_CASE("/solve on the solved cube") {
  const Response r = post(svc(), "/solve", {{"state", kSolved}});
  REQUIRE(r.status == 200);
  CHECK(r.body["solution"] == "");
  CHECK(r.body["program"].empty());
  CHECK(r.body["total_ms"] == 0);
  CHECK(r.body["serial_hex"] == "0a");
}

TEST_CASE("/solve on scrambled states") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const CubieState c = random_state(seed);
    const Response r = post(svc(), "/solve", {{"state", facelets(c)}});
    REQUIRE(r.status == 200);
    const MoveSequence sol = parse_moves(r.body["solution"].get<std::string>());
    CHECK(sol.size() <= 24);
    CHECK(r.body["length"] == sol.size());
    CHECK(apply_sequence(c, sol).is_solved());
    CHECK(run_names(c, r.body["program"]).is_solved());
    const rig::MachineProgram p = rig::compile(sol);
    CHECK(r.body["total_ms"].get<double>() == p.total_ms);
    CHECK(r.body["serial_hex"] == rig::to_hex(rig::encode_serial(p)));
  }
  const Response improved = post(svc(), "/solve", {{"state", facelets(random_state(3))}, {"improve", true}});
  CHECK(improved.status == 200);
}

TEST_CASE("/solve rejects bad states with the precise verdict") {
  CubieState swapped;
  std::swap(swapped.ep[UR], swapped.ep[UF]);
  CubieState twisted;
  twisted.co[URF] = 1;
  CubieState flipped;
  flipped.eo[UF] = 1;

  const std::pair<std::string, std::string> cases[] = {
      {facelets(swapped), "PermParity"},
      {facelets(twisted), "TwistSum"},
      {facelets(flipped), "FlipSum"},
      {kSolved.substr(1), "BadLength"},
      {"X" + kSolved.substr(1), "BadCharacter"},
      {"R" + kSolved.substr(1), "BadCount"},
  };
  for (const auto& [state, verdict] : cases) {
    const Response r = post(svc(), "/solve", {{"state", state}});
    CHECK(r.status == 400);
    CHECK(error_of(r) == verdict);
  }
  std::string centres = kSolved;
  std::swap(centres[4], centres[13]);
  CHECK(error_of(post(svc(), "/solve", {{"state", centres}})) == "BadCenters");

  CHECK(post(svc(), "/solve", json::object()).status == 400);
  CHECK(post(svc(), "/solve", {{"state", 5}}).status == 400);
  CHECK(svc().handle("POST", "/solve", "{not json").status == 400);
  CHECK(svc().handle("POST", "/solve", "[1]").status == 400);
}

TEST_CASE("/solve with a bound that is too small") {
  const CubieState c = apply_sequence(CubieState{}, parse_moves("R U F"));
  const Response r = post(svc(), "/solve", {{"state", facelets(c)}, {"max_length", 2}});
  CHECK(r.status == 422);
  CHECK(error_of(r) == "NoSolutionWithinBound");
}

TEST_CASE("/scramble") {
  const Response a = post(svc(), "/scramble", {{"seed", 7}});
  const Response b = post(svc(), "/scramble", {{"seed", 7}});
  REQUIRE(a.status == 200);
  CHECK(a.body == b.body);
  CHECK(a.body["mode"] == "virtual");
  CHECK_FALSE(a.body.contains("program"));
  CHECK(state_of(a.body) == random_state(7));
  CHECK(apply_sequence(CubieState{}, parse_moves(a.body["moves"].get<std::string>())) == random_state(7));

  const Response real = post(svc(), "/scramble", {{"seed", 7}, {"mode", "real"}});
  REQUIRE(real.status == 200);
  CHECK(real.body["state"] == a.body["state"]);
  CHECK(run_names(CubieState{}, real.body["program"]) == random_state(7));
  CHECK(real.body["total_ms"].get<double>() > 0);

  const Response fixed = post(svc(), "/scramble", {{"seed", 3}, {"length", 20}, {"mode", "real"}});
  REQUIRE(fixed.status == 200);
  const MoveSequence moves = parse_moves(fixed.body["moves"].get<std::string>());
  CHECK(moves.size() == 20);
  CHECK(state_of(fixed.body) == apply_sequence(CubieState{}, moves));
  CHECK(run_names(CubieState{}, fixed.body["program"]) == state_of(fixed.body));

  CHECK(post(svc(), "/scramble", {{"mode", "imaginary"}}).status == 400);
  CHECK(post(svc(), "/scramble", json::object()).status == 200);
}

TEST_CASE("face capture") {
  Service s(twophase::Tables::shared());
  std::vector<std::string> faces;
  for (std::size_t i = 0; i < 6; ++i) faces.push_back(kSolved.substr(i * 9, 9));

  Response r = post(s, "/faces", {{"face", faces[1]}});
  CHECK(r.status == 200);
  CHECK(r.body["faces"]["R"] == faces[1]);
  CHECK(r.body["complete"] == false);
  r = s.handle("GET", "/faces/assembled", "");
  CHECK(r.status == 409);
  CHECK(error_of(r) == "Incomplete");

  CHECK(error_of(post(s, "/faces", {{"face", "UUUU"}})) == "BadFaceString");
  CHECK(error_of(post(s, "/faces", {{"face", "UUUUxUUUU"}})) == "BadFaceString");

  // Any arrival order assembles the same string.
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::string> order = faces;
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    post(s, "/faces", {{"clear", true}});
    for (const auto& f : order) REQUIRE(post(s, "/faces", {{"face", f}}).status == 200);
    r = s.handle("GET", "/faces/assembled", "");
    REQUIRE(r.status == 200);
    CHECK(r.body["state"] == kSolved);
    CHECK(r.body["verdict"] == "Valid");
  }

  // Re-capture replaces; a scrambled capture reports its verdict.
  const std::string scrambled = facelets(random_state(4));
  for (std::size_t i = 0; i < 6; ++i) post(s, "/faces", {{"face", scrambled.substr(i * 9, 9)}});
  CHECK(s.handle("GET", "/faces/assembled", "").body["state"] == scrambled);
  std::string bad = scrambled.substr(0, 9);
  std::swap(bad[0], bad[2]);
  if (bad != scrambled.substr(0, 9)) {
    post(s, "/faces", {{"face", bad}});
    CHECK(s.handle("GET", "/faces/assembled", "").body["verdict"] != "Valid");
  }

  r = post(s, "/faces", {{"clear", true}, {"faces", {faces[0], "RUUUUUUUU"}}});
  CHECK(r.status == 409);
  CHECK(error_of(r) == "DuplicateCenterConflict");
  // Nothing from the rejected batch was stored.
  CHECK(post(s, "/faces", json::object()).body["faces"].empty());
  CHECK(post(s, "/faces", {{"faces", faces}}).body["complete"] == true);
}

TEST_CASE("sessions") {
  Service s(twophase::Tables::shared());
  Response r = post(s, "/sessions", json::object());
  REQUIRE(r.status == 200);
  CHECK(r.body["total_moves"] == 0);
  CHECK(r.body["solution"] == "");
  CHECK(r.body["cursor"] == 0);

  const CubieState base = random_state(12);
  r = post(s, "/sessions", {{"state", facelets(base)}});
  const std::string id = r.body["id"];
  CHECK(r.body["total_moves"] == parse_moves(r.body["solution"].get<std::string>()).size());

  r = post(s, "/sessions/" + id + "/moves", {{"moves", "LUD'"}});
  REQUIRE(r.status == 200);
  const MoveSequence solution = parse_moves(r.body["solution"].get<std::string>());
  CHECK(r.body["user_moves"] == "L U D'");
  CHECK(r.body["display"].get<std::string>().rfind("LUD'", 0) == 0);
  CHECK(r.body["total_moves"] == 3 + solution.size());
  CHECK(r.body["cursor"] == 3);
  CHECK(apply_sequence(apply_sequence(base, parse_moves("L U D'")), solution).is_solved());
  CHECK(state_of(r.body) == apply_sequence(base, parse_moves("L U D'")));

  const json before = s.handle("GET", "/sessions/" + id, "").body;
  post(s, "/sessions/" + id + "/step", {{"direction", "next"}});
  r = post(s, "/sessions/" + id + "/step", {{"direction", "prev"}});
  CHECK(r.body["state"] == before["state"]);
  CHECK(r.body["cursor"] == before["cursor"]);

  r = post(s, "/sessions/" + id + "/step", {{"direction", "next"}});
  CHECK(r.body["cursor"] == 4);
  r = post(s, "/sessions/" + id + "/moves", {{"move", "F"}});
  CHECK(r.status == 409);
  CHECK(error_of(r) == "MoveNotAllowedMidPlayback");

  // Walk to the end: solved, and next is a no-op there.
  for (std::size_t i = 0; i < solution.size() + 3; ++i) r = post(s, "/sessions/" + id + "/step", {{"direction", "next"}});
  CHECK(r.body["cursor"] == 3 + solution.size());
  CHECK(r.body["state"] == kSolved);
  for (std::size_t i = 0; i < solution.size() + 10; ++i) r = post(s, "/sessions/" + id + "/step", {{"direction", "prev"}});
  CHECK(r.body["cursor"] == 0);
  CHECK(state_of(r.body) == base);
  CHECK(post(s, "/sessions/" + id + "/moves", {{"move", "F"}}).status == 409);

  CHECK(post(s, "/sessions/" + id + "/step", {{"direction", "sideways"}}).status == 400);
  CHECK(error_of(post(s, "/sessions/" + id + "/moves", {{"moves", "R3"}})) == "BadMove");
  CHECK(error_of(s.handle("GET", "/sessions/nope", "")) == "UnknownSession");
  CHECK(s.handle("GET", "/sessions/nope", "").status == 404);
  CHECK(post(s, "/sessions/nope/step", json::object()).status == 404);
  CHECK(error_of(post(s, "/sessions", {{"state", facelets(CubieState{}).substr(2)}})) == "BadLength");
}

TEST_CASE("session counter and re-solve consistency") {
  Service s(twophase::Tables::shared());
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const CubieState base = random_state(rng.next());
    const std::string id = post(s, "/sessions", {{"state", facelets(base)}}).body["id"];
    MoveSequence user;
    for (int k = 0; k < 5; ++k) {
      const MoveSequence m = random_moves(rng.next(), 1 + rng.below(3));
      user.insert(user.end(), m.begin(), m.end());
      const Response r = post(s, "/sessions/" + id + "/moves", {{"moves", format_moves(m)}});
      REQUIRE(r.status == 200);
      const MoveSequence sol = parse_moves(r.body["solution"].get<std::string>());
      CHECK(r.body["total_moves"] == user.size() + sol.size());
      CHECK(apply_sequence(apply_sequence(base, user), sol).is_solved());
    }
  }
}

TEST_CASE("session store bounds and ids") {
  SessionStore store([](const CubieState&) { return MoveSequence{}; }, 2);
  const auto a = store.create({});
  const auto b = store.create({});
  CHECK(a.id == "s1");
  CHECK(b.id == "s2");
  store.create({});
  CHECK(store.size() == 2);
  CHECK_THROWS_AS(store.get("s1"), ServiceError);
  CHECK(store.get("s2").id == "s2");
}

TEST_CASE("concurrent session use") {
  Service s(twophase::Tables::shared());
  const std::string id = post(s, "/sessions", {{"state", facelets(random_state(2))}}).body["id"];
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t)
    threads.emplace_back([&s, &id, t] {
      for (int i = 0; i < 50; ++i) post(s, "/sessions/" + id + "/step", {{"direction", (i + t) % 3 ? "next" : "prev"}});
    });
  for (auto& th : threads) th.join();
  const json v = s.handle("GET", "/sessions/" + id, "").body;
  CHECK(v["cursor"].get<std::size_t>() <= v["total_moves"].get<std::size_t>());
}

TEST_CASE("routing") {
  CHECK(svc().handle("GET", "/solve", "").status == 405);
  CHECK(svc().handle("POST", "/faces/assembled", "").status == 405);
  CHECK(svc().handle("GET", "/nowhere", "").status == 404);
  CHECK(svc().handle("POST", "/sessions/x/y/z", "").status == 404);
}

TEST_CASE("live HTTP server") {
  Service s(twophase::Tables::shared());
  httplib::Server server;
  install_routes(server, s);
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread runner([&server] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto res = client.Post("/solve", json{{"state", kSolved}}.dump(), "application/json");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->get_header_value("Content-Type") == "application/json");
  const json solved = json::parse(res->body);
  CHECK(solved["solution"] == "");
  CHECK(solved["total_ms"] == 0);

  CubieState swapped;
  std::swap(swapped.ep[DR], swapped.ep[DF]);
  res = client.Post("/solve", json{{"state", facelets(swapped)}}.dump(), "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);
  CHECK(json::parse(res->body)["error"] == "PermParity");

  res = client.Post("/sessions", json{{"state", facelets(random_state(1))}}.dump(), "application/json");
  REQUIRE(res);
  const std::string id = json::parse(res->body)["id"];
  res = client.Post("/sessions/" + id + "/moves", json{{"moves", "LUD'"}}.dump(), "application/json");
  REQUIRE(res);
  const json after = json::parse(res->body);
  CHECK(after["total_moves"] == 3 + parse_moves(after["solution"].get<std::string>()).size());
  res = client.Get("/sessions/" + id);
  REQUIRE(res);
  CHECK(json::parse(res->body)["user_moves"] == "L U D'");
  res = client.Get("/faces/assembled");
  REQUIRE(res);
  CHECK(res->status == 409);

  server.stop();
  runner.join();
}
