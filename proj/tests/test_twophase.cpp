#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "bfs_oracle.hpp"
#include "rubik/rng.hpp"
#include "rubik/twophase.hpp"

using namespace rubik;
using namespace rubik::twophase;

namespace {

const Tables& tables() { return Tables::shared(); }

const std::vector<std::vector<oracle::PackedCube>>& depth5() {
  static const auto layers = oracle::cube_bfs(5, oracle::all_moves());
  return layers;
}

int quarter_order(int move) { return Move::from_index(move).turn == Turn::Half ? 2 : 4; }

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("rubik_test_" + name);
}

}  // namespace

TEST_CASE("coordinates round-trip through their decoders") {
  for (int v = 0; v < kTwist; ++v) REQUIRE(coord::twist(coord::from_twist(v)) == v);
  for (int v = 0; v < kFlip; ++v) REQUIRE(coord::flip(coord::from_flip(v)) == v);
  for (int v = 0; v < kSlice; ++v) REQUIRE(coord::slice(coord::from_slice(v)) == v);
  for (int v = 0; v < kPerm8; ++v) {
    REQUIRE(coord::corner_perm(coord::from_corner_perm(v)) == v);
    REQUIRE(coord::ud_edge_perm(coord::from_ud_edge_perm(v)) == v);
  }
  for (int v = 0; v < kSlicePerm; ++v) REQUIRE(coord::slice_perm(coord::from_slice_perm(v)) == v);
}

TEST_CASE("encode_phase1 / encode_phase2") {
  CHECK(encode_phase1(CubieState{}) == Phase1Coord{});
  CHECK(encode_phase2(CubieState{}) == Phase2Coord{});

  const CubieState after_f = apply_move(CubieState{}, {Face::F, Turn::CW});
  CHECK(encode_phase1(after_f).flip != 0);
  CHECK_FALSE(is_phase1_goal(encode_phase1(after_f)));
  CHECK_THROWS_AS(encode_phase2(after_f), NotInSubgroup);

  const CubieState after_u = apply_move(CubieState{}, {Face::U, Turn::CW});
  CHECK(is_phase1_goal(encode_phase1(after_u)));
  CHECK_FALSE(encode_phase2(after_u) == Phase2Coord{});

  CHECK(is_phase1_goal({0, 0, 0}));
  CHECK_FALSE(is_phase1_goal({1, 0, 0}));
  for (const Face f : {Face::F, Face::B}) {
    CHECK_FALSE(is_phase1_goal(encode_phase1(apply_move(CubieState{}, {f, Turn::CW}))));
    CHECK_FALSE(is_phase1_goal(encode_phase1(apply_move(CubieState{}, {f, Turn::CCW}))));
  }
}

TEST_CASE("phase-1 coordinates are injective on the orientation/slice quotient") {
  // Distinct twist values must come from distinct orientation vectors.
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const CubieState a = random_state(rng.next());
    const CubieState b = random_state(rng.next());
    if (a.co == b.co) continue;
    REQUIRE(coord::twist(a) != coord::twist(b));
  }
}

TEST_CASE("move tables") {
  const MoveTables& m = tables().moves();
  CHECK(m.twist[0 * kMoveCount + Move{Face::U, Turn::CW}.index()] == 0);

  SUBCASE("rows return home after the move's order") {
    for (int mv = 0; mv < kMoveCount; ++mv) {
      const int order = quarter_order(mv);
      for (int v = 0; v < kTwist; ++v) {
        int x = v;
        for (int k = 0; k < order; ++k) x = m.twist[static_cast<std::size_t>(x) * kMoveCount + mv];
        REQUIRE(x == v);
      }
      for (int v = 0; v < kFlip; ++v) {
        int x = v;
        for (int k = 0; k < order; ++k) x = m.flip[static_cast<std::size_t>(x) * kMoveCount + mv];
        REQUIRE(x == v);
      }
      for (int v = 0; v < kSlice; ++v) {
        int x = v;
        for (int k = 0; k < order; ++k) x = m.slice[static_cast<std::size_t>(x) * kMoveCount + mv];
        REQUIRE(x == v);
      }
    }
    for (int k = 0; k < kPhase2MoveCount; ++k) {
      const int order = quarter_order(kPhase2Moves[static_cast<std::size_t>(k)]);
      for (int v = 0; v < kPerm8; ++v) {
        int a = v;
        int b = v;
        for (int r = 0; r < order; ++r) {
          a = m.corner_perm[static_cast<std::size_t>(a) * kPhase2MoveCount + k];
          b = m.ud_edge_perm[static_cast<std::size_t>(b) * kPhase2MoveCount + k];
        }
        REQUIRE(a == v);
        REQUIRE(b == v);
      }
    }
  }

  SUBCASE("spot check against direct cubie application") {
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
      const CubieState c = random_state(rng.next());
      const int mv = static_cast<int>(rng.below(kMoveCount));
      const CubieState next = apply_move(c, Move::from_index(mv));
      const Phase1Coord p = encode_phase1(c);
      REQUIRE(m.twist[p.twist * kMoveCount + mv] == coord::twist(next));
      REQUIRE(m.flip[p.flip * kMoveCount + mv] == coord::flip(next));
      REQUIRE(m.slice[p.slice * kMoveCount + mv] == coord::slice(next));
      REQUIRE(m.corner_perm.size() == static_cast<std::size_t>(kPerm8) * kPhase2MoveCount);
    }
    // Phase-2 tables on random subgroup states.
    for (int i = 0; i < 1000; ++i) {
      CubieState c;
      for (const Move mv : random_moves(rng.next(), 12)) {
        const Move in_group = is_phase2_move(mv.index()) ? mv : Move{mv.face, Turn::Half};
        c = apply_move(c, in_group);
      }
      const int k = static_cast<int>(rng.below(kPhase2MoveCount));
      const CubieState next = apply_move(c, Move::from_index(kPhase2Moves[static_cast<std::size_t>(k)]));
      const Phase2Coord p = encode_phase2(c);
      const Phase2Coord q = encode_phase2(next);
      REQUIRE(m.corner_perm[p.corner_perm * kPhase2MoveCount + k] == q.corner_perm);
      REQUIRE(m.ud_edge_perm[p.ud_edge_perm * kPhase2MoveCount + k] == q.ud_edge_perm);
      REQUIRE(m.slice_perm[p.slice_perm * kPhase2MoveCount + k] == q.slice_perm);
    }
  }
}

TEST_CASE("prune tables are complete, shallow, and zero only at the goal") {
  const PruneTables& p = tables().prune();
  CHECK(p.phase1_twist_slice.size() == static_cast<std::size_t>(kTwist) * kSlice);
  CHECK(p.phase1_flip_slice.size() == static_cast<std::size_t>(kFlip) * kSlice);
  CHECK(p.phase2_corner_slice.size() == static_cast<std::size_t>(kPerm8) * kSlicePerm);
  CHECK(p.phase2_edge_slice.size() == static_cast<std::size_t>(kPerm8) * kSlicePerm);
  for (const auto* t : {&p.phase1_twist_slice, &p.phase1_flip_slice, &p.phase2_corner_slice, &p.phase2_edge_slice}) {
    CHECK((*t)[0] == 0);
    CHECK(std::count(t->begin(), t->end(), 0) == 1);
    CHECK(std::count(t->begin(), t->end(), 0xFF) == 0);
  }
  CHECK(*std::max_element(p.phase1_twist_slice.begin(), p.phase1_twist_slice.end()) <= 10);
  CHECK(*std::max_element(p.phase1_flip_slice.begin(), p.phase1_flip_slice.end()) <= 10);
}

TEST_CASE("phase-1 bounds never exceed the true distance of nearby cubes") {
  const auto& layers = depth5();
  for (std::size_t d = 0; d < layers.size(); ++d) {
    // Every state at depth <= 3, a stride of the deeper layers.
    const std::size_t stride = d <= 3 ? 1 : 37;
    for (std::size_t i = 0; i < layers[d].size(); i += stride) {
      const CubieState c = oracle::unpack(layers[d][i]);
      REQUIRE(tables().phase1_bound(encode_phase1(c)) <= static_cast<int>(d));
    }
  }
}

TEST_CASE("table cache round-trip and rejection") {
  const auto path = temp_path("cache.rcs");
  save_prune_tables(tables().prune(), path);
  const auto loaded = load_prune_tables(path);
  REQUIRE(loaded.has_value());
  CHECK(*loaded == tables().prune());

  std::string bytes;
  {
    std::ifstream in(path, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in), {});
  }
  CHECK(bytes.substr(0, 4) == "RCS1");
  CHECK(static_cast<unsigned char>(bytes[4]) == kCacheVersion);
  CHECK(bytes[5] == 0);

  const auto write = [&](const std::string& b) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << b;
  };
  std::string wrong_version = bytes;
  wrong_version[4] = 9;
  write(wrong_version);
  CHECK_FALSE(load_prune_tables(path).has_value());

  write(bytes.substr(0, bytes.size() - 10));
  CHECK_FALSE(load_prune_tables(path).has_value());

  std::string wrong_len = bytes;
  wrong_len[6] = static_cast<char>(wrong_len[6] + 1);
  write(wrong_len);
  CHECK_FALSE(load_prune_tables(path).has_value());

  // load_or_build rebuilds over a stale cache and rewrites it.
  const Tables rebuilt = Tables::load_or_build(path);
  CHECK(rebuilt.prune() == tables().prune());
  CHECK(load_prune_tables(path).has_value());
  std::filesystem::remove(path);

  CHECK_FALSE(load_prune_tables(temp_path("missing.rcs")).has_value());
}

TEST_CASE("solve: trivial and small cases") {
  CHECK(solve(CubieState{}).moves.empty());

  const MoveSequence scramble = parse_moves("R U R' U'");
  const CubieState c = apply_sequence(CubieState{}, scramble);
  // The BFS oracle places this state at distance 4.
  CHECK(std::binary_search(depth5()[4].begin(), depth5()[4].end(), oracle::pack(c)));
  const SolveResult r = solve(c);
  CHECK(apply_sequence(c, r.moves).is_solved());
  CHECK(r.moves.size() >= 4);
  CHECK(r.moves.size() <= 24);

  SolveOptions opt;
  opt.improve = true;
  opt.node_budget = 1000000;
  CHECK(solve(c, opt).moves.size() == 4);
}

TEST_CASE("solve: random states") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const CubieState c = random_state(seed);
    const SolveResult r = solve(c);
    REQUIRE(r.moves.size() <= 24);
    REQUIRE(apply_sequence(c, r.moves).is_solved());
    for (std::size_t i = 1; i < r.moves.size(); ++i)
      REQUIRE(move_allowed_after(r.moves[i - 1].index(), r.moves[i].index()));
  }
}

TEST_CASE("solve: improve mode reports strictly shorter solutions") {
  const CubieState c = random_state(77);
  std::vector<std::size_t> lengths;
  SolveOptions opt;
  opt.improve = true;
  opt.node_budget = 3000000;
  opt.on_solution = [&](const MoveSequence& s) {
    CHECK(apply_sequence(c, s).is_solved());
    lengths.push_back(s.size());
  };
  const SolveResult r = solve(c, opt);
  REQUIRE_FALSE(lengths.empty());
  for (std::size_t i = 1; i < lengths.size(); ++i) CHECK(lengths[i] < lengths[i - 1]);
  CHECK(r.moves.size() == lengths.back());
  CHECK(r.moves.size() <= solve(c).moves.size());
}

TEST_CASE("solve: determinism") {
  SolveOptions opt;
  opt.improve = true;
  opt.node_budget = 200000;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const CubieState c = random_state(seed);
    CHECK(solve(c).moves == solve(c).moves);
    const SolveResult a = solve(c, opt);
    const SolveResult b = solve(c, opt);
    CHECK(a.moves == b.moves);
    CHECK(a.nodes == b.nodes);
  }
}

TEST_CASE("solve: errors") {
  CubieState swapped;
  std::swap(swapped.ep[UR], swapped.ep[UF]);
  try {
    solve(swapped);
    FAIL("no throw");
  } catch (const SolveError& e) {
    CHECK(e.kind() == SolveError::Kind::InvalidState);
    CHECK(e.verdict() == Verdict::PermParity);
  }

  // Distance 3, bound 2: the search is exhaustive and fails.
  const CubieState three = apply_sequence(CubieState{}, parse_moves("R U F"));
  SolveOptions tight;
  tight.max_length = 2;
  try {
    solve(three, tight);
    FAIL("no throw");
  } catch (const SolveError& e) {
    CHECK(e.kind() == SolveError::Kind::NoSolutionWithinBound);
  }
  tight.max_length = 3;
  CHECK(solve(three, tight).moves.size() == 3);

  SolveOptions starved;
  starved.node_budget = 10;
  try {
    solve(random_state(5), starved);
    FAIL("no throw");
  } catch (const SolveError& e) {
    CHECK(e.kind() == SolveError::Kind::BudgetExhausted);
  }
}

TEST_CASE("solve: improve mode finds optimal lengths for shallow states") {
  const auto& layers = depth5();
  Rng rng(9);
  for (std::size_t d = 1; d <= 4; ++d) {
    for (int i = 0; i < 10; ++i) {
      const CubieState c = oracle::unpack(layers[d][rng.below(layers[d].size())]);
      SolveOptions opt;
      opt.improve = true;
      opt.node_budget = 1000000;
      const SolveResult r = solve(c, opt);
      REQUIRE(apply_sequence(c, r.moves).is_solved());
      CHECK(r.moves.size() == d);
      CHECK(solve(c).moves.size() >= d);
    }
  }
}
