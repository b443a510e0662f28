#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <random>
#include <system_error>

#include "rubik/twophase.hpp"

namespace rubik::twophase {

namespace {

constexpr std::uint8_t kUnset = 0xFF;

template <typename T, typename Encode, typename Decode>
std::vector<T> move_table(int size, Decode decode, Encode encode, bool phase2_only) {
  const int cols = phase2_only ? kPhase2MoveCount : kMoveCount;
  std::vector<T> table(static_cast<std::size_t>(size) * cols);
  for (int v = 0; v < size; ++v) {
    const CubieState c = decode(v);
    for (int k = 0; k < cols; ++k) {
      const int m = phase2_only ? kPhase2Moves[static_cast<std::size_t>(k)] : k;
      table[static_cast<std::size_t>(v) * cols + k] = static_cast<T>(encode(apply_move(c, Move::from_index(m))));
    }
  }
  return table;
}

// Level-by-level BFS from (0,0) over a product of two coordinates.
template <typename TA, typename TB>
std::vector<std::uint8_t> pair_bfs(int size_a, const std::vector<TA>& move_a, int size_b,
                                   const std::vector<TB>& move_b, int cols) {
  std::vector<std::uint8_t> dist(static_cast<std::size_t>(size_a) * size_b, kUnset);
  dist[0] = 0;
  std::size_t filled = 1;
  for (std::uint8_t depth = 0; filled < dist.size(); ++depth) {
    for (int a = 0; a < size_a; ++a) {
      for (int b = 0; b < size_b; ++b) {
        if (dist[static_cast<std::size_t>(a) * size_b + b] != depth) continue;
        for (int k = 0; k < cols; ++k) {
          const std::size_t na = move_a[static_cast<std::size_t>(a) * cols + k];
          const std::size_t nb = move_b[static_cast<std::size_t>(b) * cols + k];
          auto& d = dist[na * size_b + nb];
          if (d == kUnset) {
            d = static_cast<std::uint8_t>(depth + 1);
            ++filled;
          }
        }
      }
    }
  }
  return dist;
}

void put_u16(std::ostream& out, std::uint16_t v) {
  const char b[2] = {static_cast<char>(v & 0xFF), static_cast<char>(v >> 8)};
  out.write(b, 2);
}

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b, 4);
}

bool get_u16(std::istream& in, std::uint16_t& v) {
  unsigned char b[2];
  if (!in.read(reinterpret_cast<char*>(b), 2)) return false;
  v = static_cast<std::uint16_t>(b[0] | (b[1] << 8));
  return true;
}

bool get_u32(std::istream& in, std::uint32_t& v) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) return false;
  v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return true;
}

bool get_table(std::istream& in, std::vector<std::uint8_t>& t, std::size_t expected) {
  std::uint32_t len = 0;
  if (!get_u32(in, len) || len != expected) return false;
  t.resize(len);
  return static_cast<bool>(in.read(reinterpret_cast<char*>(t.data()), static_cast<std::streamsize>(len)));
}

}  // namespace

MoveTables build_move_tables() {
  MoveTables t;
  t.twist = move_table<std::uint16_t>(kTwist, coord::from_twist, coord::twist, false);
  t.flip = move_table<std::uint16_t>(kFlip, coord::from_flip, coord::flip, false);
  t.slice = move_table<std::uint16_t>(kSlice, coord::from_slice, coord::slice, false);
  t.corner_perm = move_table<std::uint16_t>(kPerm8, coord::from_corner_perm, coord::corner_perm, true);
  t.ud_edge_perm = move_table<std::uint16_t>(kPerm8, coord::from_ud_edge_perm, coord::ud_edge_perm, true);
  t.slice_perm = move_table<std::uint8_t>(kSlicePerm, coord::from_slice_perm, coord::slice_perm, true);
  return t;
}

PruneTables build_prune_tables(const MoveTables& m) {
  PruneTables p;
  p.phase1_twist_slice = pair_bfs(kTwist, m.twist, kSlice, m.slice, kMoveCount);
  p.phase1_flip_slice = pair_bfs(kFlip, m.flip, kSlice, m.slice, kMoveCount);
  p.phase2_corner_slice = pair_bfs(kPerm8, m.corner_perm, kSlicePerm, m.slice_perm, kPhase2MoveCount);
  p.phase2_edge_slice = pair_bfs(kPerm8, m.ud_edge_perm, kSlicePerm, m.slice_perm, kPhase2MoveCount);
  return p;
}

void save_prune_tables(const PruneTables& t, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write table cache " + path.string());
  out.write("RCS1", 4);
  put_u16(out, kCacheVersion);
  for (const auto* table : {&t.phase1_twist_slice, &t.phase1_flip_slice, &t.phase2_corner_slice,
                            &t.phase2_edge_slice}) {
    put_u32(out, static_cast<std::uint32_t>(table->size()));
    out.write(reinterpret_cast<const char*>(table->data()), static_cast<std::streamsize>(table->size()));
  }
  if (!out) throw std::runtime_error("failed writing table cache " + path.string());
}

std::optional<PruneTables> load_prune_tables(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[4];
  std::uint16_t version = 0;
  if (!in.read(magic, 4) || std::string_view(magic, 4) != "RCS1") return std::nullopt;
  if (!get_u16(in, version) || version != kCacheVersion) return std::nullopt;
  PruneTables t;
  if (!get_table(in, t.phase1_twist_slice, static_cast<std::size_t>(kTwist) * kSlice) ||
      !get_table(in, t.phase1_flip_slice, static_cast<std::size_t>(kFlip) * kSlice) ||
      !get_table(in, t.phase2_corner_slice, static_cast<std::size_t>(kPerm8) * kSlicePerm) ||
      !get_table(in, t.phase2_edge_slice, static_cast<std::size_t>(kPerm8) * kSlicePerm))
    return std::nullopt;
  if (in.peek() != std::char_traits<char>::eof()) return std::nullopt;
  return t;
}

std::filesystem::path default_cache_path() {
  if (const char* env = std::getenv("RIG_TABLE_CACHE"); env && *env) return env;
  if (const char* home = std::getenv("HOME"); home && *home)
    return std::filesystem::path(home) / ".cache" / "rubik-rig" / "tables.rcs";
  return {};
}

Tables Tables::build() {
  MoveTables moves = build_move_tables();
  PruneTables prune = build_prune_tables(moves);
  return Tables(std::move(moves), std::move(prune));
}

Tables Tables::load_or_build(const std::filesystem::path& cache) {
  MoveTables moves = build_move_tables();
  if (!cache.empty()) {
    if (auto loaded = load_prune_tables(cache)) return Tables(std::move(moves), std::move(*loaded));
  }
  PruneTables prune = build_prune_tables(moves);
  if (!cache.empty()) {
    std::error_code ec;
    if (cache.has_parent_path()) std::filesystem::create_directories(cache.parent_path(), ec);
    // Temp file + rename so concurrent builders never expose a partial cache.
    const auto tmp = std::filesystem::path(cache.string() + ".tmp" + std::to_string(std::random_device{}()));
    try {
      save_prune_tables(prune, tmp);
      std::filesystem::rename(tmp, cache, ec);
    } catch (const std::exception&) {
    }
    std::filesystem::remove(tmp, ec);
  }
  return Tables(std::move(moves), std::move(prune));
}

const Tables& Tables::shared() {
  static const Tables instance = load_or_build(default_cache_path());
  return instance;
}

int Tables::phase1_bound(Phase1Coord p) const {
  return std::max(prune_.phase1_twist_slice[static_cast<std::size_t>(p.twist) * kSlice + p.slice],
                  prune_.phase1_flip_slice[static_cast<std::size_t>(p.flip) * kSlice + p.slice]);
}

int Tables::phase2_bound(Phase2Coord p) const {
  return std::max(prune_.phase2_corner_slice[static_cast<std::size_t>(p.corner_perm) * kSlicePerm + p.slice_perm],
                  prune_.phase2_edge_slice[static_cast<std::size_t>(p.ud_edge_perm) * kSlicePerm + p.slice_perm]);
}

}  // namespace rubik::twophase
