#include <limits>

#include "rubik/twophase.hpp"

namespace rubik::twophase {

namespace {

constexpr int kMaxPath = 32;
constexpr int kUnbounded = std::numeric_limits<int>::max();

// One solve call. Phase 1 is an iterative deepening search over phase-1
// coordinates; every phase-1 path of exactly `depth` moves that lands in the
// subgroup hands off to an IDA* phase-2 search whose bound is tightened by
// the best total found so far.
class Search {
 public:
  Search(const Tables& tables, const CubieState& start, const SolveOptions& options)
      : t_(tables), m_(tables.moves()), start_(start), opt_(options) {
    if (opt_.time_budget) deadline_ = std::chrono::steady_clock::now() + *opt_.time_budget;
  }

  SolveResult run() {
    SolveResult result;
    if (start_.is_solved()) return result;

    const Phase1Coord origin = encode_phase1(start_);
    // "while d < b": stop once no phase-1 length can beat the best total.
    for (int depth = 0; depth < best_length_ && depth <= opt_.max_length && !stop_; ++depth) {
      phase1(origin, 0, depth, -1);
      if (!opt_.improve && best_length_ != kUnbounded) break;
    }

    result.nodes = nodes_;
    result.budget_exhausted = budget_hit_;
    if (best_length_ == kUnbounded) {
      if (budget_hit_)
        throw SolveError(SolveError::Kind::BudgetExhausted, Verdict::Valid, "search budget exhausted");
      throw SolveError(SolveError::Kind::NoSolutionWithinBound, Verdict::Valid,
                       "no solution within " + std::to_string(opt_.max_length) + " moves");
    }
    result.moves = best_;
    result.phase1_length = best_phase1_;
    return result;
  }

 private:
  bool tick() {
    ++nodes_;
    if (opt_.node_budget != 0 && nodes_ > opt_.node_budget) {
      budget_hit_ = stop_ = true;
    } else if (deadline_ && (nodes_ & 0xFFF) == 0 && std::chrono::steady_clock::now() > *deadline_) {
      budget_hit_ = stop_ = true;
    }
    return !stop_;
  }

  void phase1(Phase1Coord p, int n, int depth, int last) {
    if (!tick()) return;
    if (n == depth) {
      // A path that ends in a phase-2 move reached the subgroup one move
      // earlier and was already tried at a shorter depth.
      if (is_phase1_goal(p) && (depth == 0 || !is_phase2_move(last))) phase2_start(depth);
      return;
    }
    if (n + t_.phase1_bound(p) > depth) return;
    for (int mv = 0; mv < kMoveCount && !stop_; ++mv) {
      if (!move_allowed_after(last, mv)) continue;
      path1_[n] = mv;
      const Phase1Coord q{m_.twist[p.twist * kMoveCount + mv], m_.flip[p.flip * kMoveCount + mv],
                          m_.slice[p.slice * kMoveCount + mv]};
      phase1(q, n + 1, depth, mv);
    }
  }

  void phase2_start(int depth1) {
    const int cap = std::min(best_length_ == kUnbounded ? kUnbounded : best_length_ - 1, opt_.max_length);
    const int limit = cap - depth1;
    if (limit < 0) return;

    CubieState c = start_;
    for (int i = 0; i < depth1; ++i) c = apply_move(c, Move::from_index(path1_[i]));
    const Phase2Coord p = encode_phase2(c);
    const int lower = t_.phase2_bound(p);
    if (lower > limit) return;

    const int last = depth1 > 0 ? path1_[depth1 - 1] : -1;
    for (int depth2 = lower; depth2 <= limit && !stop_; ++depth2) {
      if (phase2(p, 0, depth2, last)) {
        record(depth1, depth2);
        return;
      }
    }
  }

  bool phase2(Phase2Coord p, int n, int depth, int last) {
    if (!tick()) return false;
    if (n == depth) return p == Phase2Coord{};
    if (n + t_.phase2_bound(p) > depth) return false;
    for (int k = 0; k < kPhase2MoveCount && !stop_; ++k) {
      const int mv = kPhase2Moves[static_cast<std::size_t>(k)];
      if (!move_allowed_after(last, mv)) continue;
      path2_[n] = mv;
      const Phase2Coord q{m_.corner_perm[p.corner_perm * kPhase2MoveCount + k],
                          m_.ud_edge_perm[p.ud_edge_perm * kPhase2MoveCount + k],
                          m_.slice_perm[p.slice_perm * kPhase2MoveCount + k]};
      if (phase2(q, n + 1, depth, mv)) return true;
    }
    return false;
  }

  void record(int depth1, int depth2) {
    best_.clear();
    for (int i = 0; i < depth1; ++i) best_.push_back(Move::from_index(path1_[i]));
    for (int i = 0; i < depth2; ++i) best_.push_back(Move::from_index(path2_[i]));
    best_length_ = depth1 + depth2;
    best_phase1_ = static_cast<std::size_t>(depth1);
    if (opt_.on_solution) opt_.on_solution(best_);
    if (!opt_.improve) stop_ = true;
  }

  const Tables& t_;
  const MoveTables& m_;
  CubieState start_;
  const SolveOptions& opt_;
  std::optional<std::chrono::steady_clock::time_point> deadline_;

  std::array<int, kMaxPath> path1_{};
  std::array<int, kMaxPath> path2_{};
  MoveSequence best_;
  int best_length_ = kUnbounded;
  std::size_t best_phase1_ = 0;
  std::uint64_t nodes_ = 0;
  bool stop_ = false;
  bool budget_hit_ = false;
};

}  // namespace

std::string_view to_string(SolveError::Kind k) {
  switch (k) {
    case SolveError::Kind::InvalidState: return "InvalidState";
    case SolveError::Kind::NoSolutionWithinBound: return "NoSolutionWithinBound";
    case SolveError::Kind::BudgetExhausted: return "BudgetExhausted";
  }
  return "?";
}

SolveResult solve(const CubieState& c, const SolveOptions& options, const Tables& tables) {
  const Verdict v = validate(c);
  if (v != Verdict::Valid)
    throw SolveError(SolveError::Kind::InvalidState, v, "invalid cube state: " + std::string(to_string(v)));
  if (options.max_length < 0 || options.max_length >= kMaxPath)
    throw std::invalid_argument("max_length must be in [0, " + std::to_string(kMaxPath - 1) + "]");
  return Search(tables, c, options).run();
}

}  // namespace rubik::twophase
