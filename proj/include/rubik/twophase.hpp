#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rubik/cube.hpp"

namespace rubik::twophase {

inline constexpr int kTwist = 2187;       // 3^7
inline constexpr int kFlip = 2048;        // 2^11
inline constexpr int kSlice = 495;        // C(12,4)
inline constexpr int kPerm8 = 40320;      // 8!
inline constexpr int kSlicePerm = 24;     // 4!
inline constexpr int kPhase2MoveCount = 10;

// Moves that keep the cube inside the phase-2 subgroup <U, D, R2, L2, F2, B2>,
// in global move-index order.
inline constexpr std::array<int, kPhase2MoveCount> kPhase2Moves = {0, 1, 2, 4, 7, 9, 10, 11, 13, 16};

bool is_phase2_move(int move_index);

// Move-order rule shared by both phases: never the same face twice in a row,
// and of two opposite faces only the U/R/F one may come first.
inline bool move_allowed_after(int last, int next) {
  if (last < 0) return true;
  const int lf = last / 3;
  const int nf = next / 3;
  return lf != nf && !(lf % 3 == nf % 3 && nf < lf);
}

struct Phase1Coord {
  std::uint16_t twist = 0;
  std::uint16_t flip = 0;
  std::uint16_t slice = 0;
  friend bool operator==(const Phase1Coord&, const Phase1Coord&) = default;
};

struct Phase2Coord {
  std::uint16_t corner_perm = 0;
  std::uint16_t ud_edge_perm = 0;
  std::uint8_t slice_perm = 0;
  friend bool operator==(const Phase2Coord&, const Phase2Coord&) = default;
};

class NotInSubgroup : public std::runtime_error {
 public:
  NotInSubgroup() : std::runtime_error("state is not in the phase-2 subgroup") {}
};

// Single coordinates. The set_* functions return some state with that
// coordinate value; the other pieces are placed arbitrarily.
namespace coord {
int twist(const CubieState& c);
int flip(const CubieState& c);
int slice(const CubieState& c);
int corner_perm(const CubieState& c);
int ud_edge_perm(const CubieState& c);  // requires edges 0..7 in slots 0..7
int slice_perm(const CubieState& c);    // requires edges 8..11 in slots 8..11

CubieState from_twist(int v);
CubieState from_flip(int v);
CubieState from_slice(int v);
CubieState from_corner_perm(int v);
CubieState from_ud_edge_perm(int v);
CubieState from_slice_perm(int v);
}  // namespace coord

Phase1Coord encode_phase1(const CubieState& c);
// Throws NotInSubgroup unless encode_phase1(c) is the goal.
Phase2Coord encode_phase2(const CubieState& c);
bool is_phase1_goal(Phase1Coord p);

// Transition tables, row-major [coordinate][move]. Phase-1 tables have 18
// columns, phase-2 tables one column per entry of kPhase2Moves.
struct MoveTables {
  std::vector<std::uint16_t> twist;
  std::vector<std::uint16_t> flip;
  std::vector<std::uint16_t> slice;
  std::vector<std::uint16_t> corner_perm;
  std::vector<std::uint16_t> ud_edge_perm;
  std::vector<std::uint8_t> slice_perm;
};

MoveTables build_move_tables();

// Breadth-first distance tables over coordinate pairs.
struct PruneTables {
  std::vector<std::uint8_t> phase1_twist_slice;  // [twist * kSlice + slice]
  std::vector<std::uint8_t> phase1_flip_slice;   // [flip * kSlice + slice]
  std::vector<std::uint8_t> phase2_corner_slice; // [corner_perm * kSlicePerm + slice_perm]
  std::vector<std::uint8_t> phase2_edge_slice;   // [ud_edge_perm * kSlicePerm + slice_perm]

  friend bool operator==(const PruneTables&, const PruneTables&) = default;
};

PruneTables build_prune_tables(const MoveTables& moves);

// Cache file: "RCS1", u16 version, then the four prune tables in declaration
// order, each as a u32 length followed by the bytes (little-endian).
inline constexpr std::uint16_t kCacheVersion = 1;

void save_prune_tables(const PruneTables& t, const std::filesystem::path& path);
// nullopt if the file is missing, truncated, or has the wrong magic,
// version, or table lengths.
std::optional<PruneTables> load_prune_tables(const std::filesystem::path& path);

// RIG_TABLE_CACHE if set, otherwise a file under $HOME/.cache, otherwise empty.
std::filesystem::path default_cache_path();

class Tables {
 public:
  Tables(MoveTables moves, PruneTables prune) : moves_(std::move(moves)), prune_(std::move(prune)) {}

  static Tables build();
  // Loads the prune tables from `cache` when valid; otherwise builds them and
  // tries to write the cache. An empty path disables the cache.
  static Tables load_or_build(const std::filesystem::path& cache);
  // Process-wide instance, built on first use from default_cache_path().
  static const Tables& shared();

  const MoveTables& moves() const { return moves_; }
  const PruneTables& prune() const { return prune_; }

  int phase1_bound(Phase1Coord p) const;
  int phase2_bound(Phase2Coord p) const;

 private:
  MoveTables moves_;
  PruneTables prune_;
};

struct SolveOptions {
  int max_length = 24;
  // Keep searching deeper phase-1 lengths for shorter totals.
  bool improve = false;
  // Expanded-node cap (0 = none). Counts nodes in both phases.
  std::uint64_t node_budget = 0;
  std::optional<std::chrono::milliseconds> time_budget;
  // Called with every strictly better solution as it is found.
  std::function<void(const MoveSequence&)> on_solution;
};

struct SolveResult {
  MoveSequence moves;
  std::size_t phase1_length = 0;
  std::uint64_t nodes = 0;
  bool budget_exhausted = false;
};

class SolveError : public std::runtime_error {
 public:
  enum class Kind { InvalidState, NoSolutionWithinBound, BudgetExhausted };

  SolveError(Kind kind, Verdict verdict, const std::string& what)
      : std::runtime_error(what), kind_(kind), verdict_(verdict) {}
  Kind kind() const { return kind_; }
  Verdict verdict() const { return verdict_; }

 private:
  Kind kind_;
  Verdict verdict_;
};

std::string_view to_string(SolveError::Kind k);

SolveResult solve(const CubieState& c, const SolveOptions& options, const Tables& tables);
inline SolveResult solve(const CubieState& c, const SolveOptions& options = {}) {
  return solve(c, options, Tables::shared());
}

}  // namespace rubik::twophase
