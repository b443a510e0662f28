#include <algorithm>

#include "rubik/twophase.hpp"

namespace rubik::twophase {

namespace {

constexpr int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

constexpr int factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

// Lexicographic rank of a permutation of 0..n-1.
template <std::size_t N>
int rank(const std::array<std::uint8_t, N>& p) {
  int r = 0;
  for (std::size_t i = 0; i < N; ++i) {
    int smaller = 0;
    for (std::size_t j = i + 1; j < N; ++j)
      if (p[j] < p[i]) ++smaller;
    r += smaller * factorial(static_cast<int>(N - 1 - i));
  }
  return r;
}

template <std::size_t N>
std::array<std::uint8_t, N> unrank(int r) {
  std::array<std::uint8_t, N> pool;
  for (std::size_t i = 0; i < N; ++i) pool[i] = static_cast<std::uint8_t>(i);
  std::array<std::uint8_t, N> out{};
  std::size_t left = N;
  for (std::size_t i = 0; i < N; ++i) {
    const int f = factorial(static_cast<int>(N - 1 - i));
    const auto k = static_cast<std::size_t>(r / f);
    r %= f;
    out[i] = pool[k];
    std::copy(pool.begin() + static_cast<std::ptrdiff_t>(k) + 1,
              pool.begin() + static_cast<std::ptrdiff_t>(left), pool.begin() + static_cast<std::ptrdiff_t>(k));
    --left;
  }
  return out;
}

}  // namespace

bool is_phase2_move(int move_index) {
  return std::find(kPhase2Moves.begin(), kPhase2Moves.end(), move_index) != kPhase2Moves.end();
}

namespace coord {

int twist(const CubieState& c) {
  int v = 0;
  for (std::size_t i = 0; i + 1 < kCorners; ++i) v = 3 * v + c.co[i];
  return v;
}

int flip(const CubieState& c) {
  int v = 0;
  for (std::size_t i = 0; i + 1 < kEdges; ++i) v = 2 * v + c.eo[i];
  return v;
}

// Which four slots hold the FR, FL, BL, BR edges; 0 when they are home.
int slice(const CubieState& c) {
  int v = 0;
  int found = 0;
  for (int j = static_cast<int>(kEdges) - 1; j >= 0; --j) {
    if (c.ep[static_cast<std::size_t>(j)] >= FR) {
      v += binomial(11 - j, found + 1);
      ++found;
    }
  }
  return v;
}

int corner_perm(const CubieState& c) { return rank(c.cp); }

int ud_edge_perm(const CubieState& c) {
  std::array<std::uint8_t, 8> p;
  std::copy_n(c.ep.begin(), 8, p.begin());
  return rank(p);
}

int slice_perm(const CubieState& c) {
  std::array<std::uint8_t, 4> p;
  for (std::size_t i = 0; i < 4; ++i) p[i] = static_cast<std::uint8_t>(c.ep[8 + i] - 8);
  return rank(p);
}

CubieState from_twist(int v) {
  CubieState c;
  int sum = 0;
  for (int i = static_cast<int>(kCorners) - 2; i >= 0; --i) {
    c.co[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v % 3);
    sum += v % 3;
    v /= 3;
  }
  c.co[kCorners - 1] = static_cast<std::uint8_t>((3 - sum % 3) % 3);
  return c;
}

CubieState from_flip(int v) {
  CubieState c;
  int sum = 0;
  for (int i = static_cast<int>(kEdges) - 2; i >= 0; --i) {
    c.eo[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v & 1);
    sum += v & 1;
    v >>= 1;
  }
  c.eo[kEdges - 1] = static_cast<std::uint8_t>(sum & 1);
  return c;
}

CubieState from_slice(int v) {
  CubieState c;
  std::array<bool, kEdges> is_slice{};
  int left = 4;
  for (int j = 0; j < static_cast<int>(kEdges) && left > 0; ++j) {
    const int b = binomial(11 - j, left);
    if (v - b >= 0) {
      v -= b;
      is_slice[static_cast<std::size_t>(j)] = true;
      --left;
    }
  }
  std::uint8_t next_slice = FR;
  std::uint8_t next_other = UR;
  for (std::size_t j = 0; j < kEdges; ++j) c.ep[j] = is_slice[j] ? next_slice++ : next_other++;
  return c;
}

CubieState from_corner_perm(int v) {
  CubieState c;
  c.cp = unrank<8>(v);
  return c;
}

CubieState from_ud_edge_perm(int v) {
  CubieState c;
  const auto p = unrank<8>(v);
  std::copy(p.begin(), p.end(), c.ep.begin());
  return c;
}

CubieState from_slice_perm(int v) {
  CubieState c;
  const auto p = unrank<4>(v);
  for (std::size_t i = 0; i < 4; ++i) c.ep[8 + i] = static_cast<std::uint8_t>(p[i] + 8);
  return c;
}

}  // namespace coord

Phase1Coord encode_phase1(const CubieState& c) {
  return {static_cast<std::uint16_t>(coord::twist(c)), static_cast<std::uint16_t>(coord::flip(c)),
          static_cast<std::uint16_t>(coord::slice(c))};
}

Phase2Coord encode_phase2(const CubieState& c) {
  if (!is_phase1_goal(encode_phase1(c))) throw NotInSubgroup();
  return {static_cast<std::uint16_t>(coord::corner_perm(c)), static_cast<std::uint16_t>(coord::ud_edge_perm(c)),
          static_cast<std::uint8_t>(coord::slice_perm(c))};
}

bool is_phase1_goal(Phase1Coord p) { return p == Phase1Coord{}; }

}  // namespace rubik::twophase
