#include "rubik/cube.hpp"

#include <algorithm>
#include <cctype>

#include "rubik/rng.hpp"

namespace rubik {

namespace {

constexpr std::string_view kFaceChars = "URFDLB";

// Facelet index helper: face f, sticker 1..9 in the usual U1..B9 numbering.
constexpr std::uint8_t fl(Face f, int n) { return static_cast<std::uint8_t>(static_cast<int>(f) * 9 + n - 1); }

// Labels of each corner / edge piece in the same sticker order as the slot
// tables below.
constexpr std::array<std::array<Face, 3>, kCorners> kCornerColors = {{
    {Face::U, Face::R, Face::F}, {Face::U, Face::F, Face::L}, {Face::U, Face::L, Face::B},
    {Face::U, Face::B, Face::R}, {Face::D, Face::F, Face::R}, {Face::D, Face::L, Face::F},
    {Face::D, Face::B, Face::L}, {Face::D, Face::R, Face::B},
}};

constexpr std::array<std::array<Face, 2>, kEdges> kEdgeColors = {{
    {Face::U, Face::R}, {Face::U, Face::F}, {Face::U, Face::L}, {Face::U, Face::B},
    {Face::D, Face::R}, {Face::D, Face::F}, {Face::D, Face::L}, {Face::D, Face::B},
    {Face::F, Face::R}, {Face::F, Face::L}, {Face::B, Face::L}, {Face::B, Face::R},
}};

CubieState make_cube(std::array<std::uint8_t, 8> cp, std::array<std::uint8_t, 8> co,
                     std::array<std::uint8_t, 12> ep, std::array<std::uint8_t, 12> eo) {
  CubieState c;
  c.cp = cp;
  c.co = co;
  c.ep = ep;
  c.eo = eo;
  return c;
}

// Quarter turns of the six faces in "replaced by" form.
const std::array<CubieState, kFaces> kBasicMoves = {
    // U
    make_cube({UBR, URF, UFL, ULB, DFR, DLF, DBL, DRB}, {0, 0, 0, 0, 0, 0, 0, 0},
              {UB, UR, UF, UL, DR, DF, DL, DB, FR, FL, BL, BR}, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}),
    // R
    make_cube({DFR, UFL, ULB, URF, DRB, DLF, DBL, UBR}, {2, 0, 0, 1, 1, 0, 0, 2},
              {FR, UF, UL, UB, BR, DF, DL, DB, DR, FL, BL, UR}, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}),
    // F
    make_cube({UFL, DLF, ULB, UBR, URF, DFR, DBL, DRB}, {1, 2, 0, 0, 2, 1, 0, 0},
              {UR, FL, UL, UB, DR, FR, DL, DB, UF, DF, BL, BR}, {0, 1, 0, 0, 0, 1, 0, 0, 1, 1, 0, 0}),
    // D
    make_cube({URF, UFL, ULB, UBR, DLF, DBL, DRB, DFR}, {0, 0, 0, 0, 0, 0, 0, 0},
              {UR, UF, UL, UB, DF, DL, DB, DR, FR, FL, BL, BR}, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}),
    // L
    make_cube({URF, ULB, DBL, UBR, DFR, UFL, DLF, DRB}, {0, 1, 2, 0, 0, 2, 1, 0},
              {UR, UF, BL, UB, DR, DF, FL, DB, FR, UL, DL, BR}, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}),
    // B
    make_cube({URF, UFL, UBR, DRB, DFR, DLF, ULB, DBL}, {0, 0, 1, 2, 0, 0, 2, 1},
              {UR, UF, UL, BR, DR, DF, DL, BL, FR, FL, UB, DB}, {0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 1}),
};

std::array<CubieState, kMoveCount> build_move_cubes() {
  std::array<CubieState, kMoveCount> out;
  for (std::size_t f = 0; f < kFaces; ++f) {
    CubieState c;
    for (int t = 0; t < 3; ++t) {
      c = compose(c, kBasicMoves[f]);
      out[f * 3 + t] = c;
    }
  }
  return out;
}

}  // namespace

const std::array<std::array<std::uint8_t, 3>, kCorners> kCornerFacelets = {{
    {fl(Face::U, 9), fl(Face::R, 1), fl(Face::F, 3)},
    {fl(Face::U, 7), fl(Face::F, 1), fl(Face::L, 3)},
    {fl(Face::U, 1), fl(Face::L, 1), fl(Face::B, 3)},
    {fl(Face::U, 3), fl(Face::B, 1), fl(Face::R, 3)},
    {fl(Face::D, 3), fl(Face::F, 9), fl(Face::R, 7)},
    {fl(Face::D, 1), fl(Face::L, 9), fl(Face::F, 7)},
    {fl(Face::D, 7), fl(Face::B, 9), fl(Face::L, 7)},
    {fl(Face::D, 9), fl(Face::R, 9), fl(Face::B, 7)},
}};

const std::array<std::array<std::uint8_t, 2>, kEdges> kEdgeFacelets = {{
    {fl(Face::U, 6), fl(Face::R, 2)},
    {fl(Face::U, 8), fl(Face::F, 2)},
    {fl(Face::U, 4), fl(Face::L, 2)},
    {fl(Face::U, 2), fl(Face::B, 2)},
    {fl(Face::D, 6), fl(Face::R, 8)},
    {fl(Face::D, 2), fl(Face::F, 8)},
    {fl(Face::D, 4), fl(Face::L, 8)},
    {fl(Face::D, 8), fl(Face::B, 8)},
    {fl(Face::F, 6), fl(Face::R, 4)},
    {fl(Face::F, 4), fl(Face::L, 6)},
    {fl(Face::B, 6), fl(Face::L, 4)},
    {fl(Face::B, 4), fl(Face::R, 6)},
}};

char face_char(Face f) { return kFaceChars[static_cast<std::size_t>(f)]; }

bool face_from_char(char c, Face& out) {
  const auto pos = kFaceChars.find(c);
  if (pos == std::string_view::npos) return false;
  out = static_cast<Face>(pos);
  return true;
}

FaceletState FaceletState::solved() {
  FaceletState s;
  for (std::size_t i = 0; i < kFacelets; ++i) s.facelets[i] = static_cast<Face>(i / 9);
  return s;
}

std::string FaceletState::str() const {
  std::string out(kFacelets, ' ');
  for (std::size_t i = 0; i < kFacelets; ++i) out[i] = face_char(facelets[i]);
  return out;
}

std::string_view to_string(FaceletError::Kind k) {
  switch (k) {
    case FaceletError::Kind::BadLength: return "BadLength";
    case FaceletError::Kind::BadCharacter: return "BadCharacter";
    case FaceletError::Kind::BadCount: return "BadCount";
    case FaceletError::Kind::BadCenters: return "BadCenters";
    case FaceletError::Kind::UnrecognizedCubie: return "UnrecognizedCubie";
  }
  return "?";
}

FaceletState parse_facelets(std::string_view text) {
  using K = FaceletError::Kind;
  if (text.size() != kFacelets)
    throw FaceletError(K::BadLength, text.size(),
                       "facelet string must have 54 characters, got " + std::to_string(text.size()));
  FaceletState s;
  std::array<int, kFaces> counts{};
  for (std::size_t i = 0; i < kFacelets; ++i) {
    if (!face_from_char(text[i], s.facelets[i]))
      throw FaceletError(K::BadCharacter, i, "unexpected character at position " + std::to_string(i));
    ++counts[static_cast<std::size_t>(s.facelets[i])];
  }
  for (std::size_t f = 0; f < kFaces; ++f)
    if (counts[f] != 9)
      throw FaceletError(K::BadCount, f,
                         std::string("label ") + kFaceChars[f] + " occurs " + std::to_string(counts[f]) +
                             " times");
  for (std::size_t f = 0; f < kFaces; ++f)
    if (s.facelets[kCenterFacelets[f]] != static_cast<Face>(f))
      throw FaceletError(K::BadCenters, kCenterFacelets[f],
                         std::string("center of face ") + kFaceChars[f] + " is not " + kFaceChars[f]);
  return s;
}

CubieState compose(const CubieState& a, const CubieState& b) {
  CubieState r;
  for (std::size_t i = 0; i < kCorners; ++i) {
    r.cp[i] = a.cp[b.cp[i]];
    r.co[i] = static_cast<std::uint8_t>((a.co[b.cp[i]] + b.co[i]) % 3);
  }
  for (std::size_t i = 0; i < kEdges; ++i) {
    r.ep[i] = a.ep[b.ep[i]];
    r.eo[i] = static_cast<std::uint8_t>((a.eo[b.ep[i]] + b.eo[i]) & 1);
  }
  return r;
}

CubieState inverse(const CubieState& c) {
  CubieState r;
  for (std::size_t i = 0; i < kCorners; ++i) r.cp[c.cp[i]] = static_cast<std::uint8_t>(i);
  for (std::size_t i = 0; i < kCorners; ++i) r.co[i] = static_cast<std::uint8_t>((3 - c.co[r.cp[i]]) % 3);
  for (std::size_t i = 0; i < kEdges; ++i) r.ep[c.ep[i]] = static_cast<std::uint8_t>(i);
  for (std::size_t i = 0; i < kEdges; ++i) r.eo[i] = c.eo[r.ep[i]];
  return r;
}

CubieState facelets_to_cubies(const FaceletState& f) {
  using K = FaceletError::Kind;
  CubieState c;
  std::array<bool, kCorners> seen_corner{};
  for (std::size_t i = 0; i < kCorners; ++i) {
    const auto& slot = kCornerFacelets[i];
    int ori = 0;
    while (ori < 3 && f.facelets[slot[ori]] != Face::U && f.facelets[slot[ori]] != Face::D) ++ori;
    const auto bad = [&] {
      return FaceletError(K::UnrecognizedCubie, i,
                          "corner slot " + std::to_string(i) + " holds no valid corner piece");
    };
    if (ori == 3) throw bad();
    const Face a = f.facelets[slot[(ori + 1) % 3]];
    const Face b = f.facelets[slot[(ori + 2) % 3]];
    std::size_t j = 0;
    while (j < kCorners && !(kCornerColors[j][0] == f.facelets[slot[ori]] &&
                             kCornerColors[j][1] == a && kCornerColors[j][2] == b))
      ++j;
    if (j == kCorners || seen_corner[j]) throw bad();
    seen_corner[j] = true;
    c.cp[i] = static_cast<std::uint8_t>(j);
    c.co[i] = static_cast<std::uint8_t>(ori);
  }
  std::array<bool, kEdges> seen_edge{};
  for (std::size_t i = 0; i < kEdges; ++i) {
    const Face a = f.facelets[kEdgeFacelets[i][0]];
    const Face b = f.facelets[kEdgeFacelets[i][1]];
    std::size_t j = 0;
    int ori = -1;
    for (; j < kEdges; ++j) {
      if (kEdgeColors[j][0] == a && kEdgeColors[j][1] == b) {
        ori = 0;
        break;
      }
      if (kEdgeColors[j][0] == b && kEdgeColors[j][1] == a) {
        ori = 1;
        break;
      }
    }
    if (ori < 0 || seen_edge[j])
      throw FaceletError(K::UnrecognizedCubie, kCorners + i,
                         "edge slot " + std::to_string(i) + " holds no valid edge piece");
    seen_edge[j] = true;
    c.ep[i] = static_cast<std::uint8_t>(j);
    c.eo[i] = static_cast<std::uint8_t>(ori);
  }
  return c;
}

FaceletState cubies_to_facelets(const CubieState& c) {
  FaceletState f = FaceletState::solved();
  for (std::size_t i = 0; i < kCorners; ++i) {
    for (int n = 0; n < 3; ++n)
      f.facelets[kCornerFacelets[i][(n + c.co[i]) % 3]] = kCornerColors[c.cp[i]][n];
  }
  for (std::size_t i = 0; i < kEdges; ++i) {
    for (int n = 0; n < 2; ++n)
      f.facelets[kEdgeFacelets[i][(n + c.eo[i]) % 2]] = kEdgeColors[c.ep[i]][n];
  }
  return f;
}

const CubieState& move_cube(Move m) {
  static const std::array<CubieState, kMoveCount> table = build_move_cubes();
  return table[static_cast<std::size_t>(m.index())];
}

CubieState apply_move(const CubieState& c, Move m) { return compose(c, move_cube(m)); }

CubieState apply_sequence(CubieState c, const MoveSequence& s) {
  for (const Move m : s) c = apply_move(c, m);
  return c;
}

MoveSequence invert_sequence(const MoveSequence& s) {
  MoveSequence out;
  out.reserve(s.size());
  for (auto it = s.rbegin(); it != s.rend(); ++it) out.push_back(it->inverse());
  return out;
}

std::string format_move(Move m) {
  std::string out(1, face_char(m.face));
  if (m.turn == Turn::Half) out += '2';
  if (m.turn == Turn::CCW) out += '\'';
  return out;
}

std::string format_moves(const MoveSequence& s) {
  std::string out;
  for (const Move m : s) {
    if (!out.empty()) out += ' ';
    out += format_move(m);
  }
  return out;
}

std::string format_moves_compact(const MoveSequence& s) {
  std::string out;
  for (const Move m : s) out += format_move(m);
  return out;
}

MoveSequence parse_moves(std::string_view text) {
  MoveSequence out;
  std::size_t i = 0;
  const auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (i < text.size()) {
    if (is_space(text[i])) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    Move m;
    if (!face_from_char(text[i], m.face))
      throw MoveParseError(start, "bad move token at position " + std::to_string(start));
    ++i;
    if (i < text.size() && text[i] == '\'') {
      m.turn = Turn::CCW;
      ++i;
    } else if (i < text.size() && text[i] == '2') {
      m.turn = Turn::Half;
      ++i;
    }
    // A token must be followed by whitespace, the end, or another face letter.
    Face next;
    if (i < text.size() && !is_space(text[i]) && !face_from_char(text[i], next))
      throw MoveParseError(start, "bad move token at position " + std::to_string(start));
    out.push_back(m);
  }
  return out;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Valid: return "Valid";
    case Verdict::Malformed: return "Malformed";
    case Verdict::TwistSum: return "TwistSum";
    case Verdict::FlipSum: return "FlipSum";
    case Verdict::PermParity: return "PermParity";
  }
  return "?";
}

Verdict validate(const CubieState& c) {
  std::array<bool, kCorners> seen_c{};
  for (std::size_t i = 0; i < kCorners; ++i) {
    if (c.cp[i] >= kCorners || seen_c[c.cp[i]] || c.co[i] > 2) return Verdict::Malformed;
    seen_c[c.cp[i]] = true;
  }
  std::array<bool, kEdges> seen_e{};
  for (std::size_t i = 0; i < kEdges; ++i) {
    if (c.ep[i] >= kEdges || seen_e[c.ep[i]] || c.eo[i] > 1) return Verdict::Malformed;
    seen_e[c.ep[i]] = true;
  }
  int twist = 0;
  for (auto o : c.co) twist += o;
  if (twist % 3 != 0) return Verdict::TwistSum;
  int flip = 0;
  for (auto o : c.eo) flip += o;
  if (flip % 2 != 0) return Verdict::FlipSum;
  if (permutation_parity(c.cp) != permutation_parity(c.ep)) return Verdict::PermParity;
  return Verdict::Valid;
}

CubieState random_state(std::uint64_t seed) {
  Rng rng(seed);
  CubieState c;
  const auto shuffle = [&rng](auto& arr) {
    for (std::size_t i = arr.size() - 1; i > 0; --i) std::swap(arr[i], arr[rng.below(i + 1)]);
  };
  shuffle(c.cp);
  shuffle(c.ep);
  int twist = 0;
  for (std::size_t i = 0; i + 1 < kCorners; ++i) {
    c.co[i] = static_cast<std::uint8_t>(rng.below(3));
    twist += c.co[i];
  }
  c.co[kCorners - 1] = static_cast<std::uint8_t>((3 - twist % 3) % 3);
  int flip = 0;
  for (std::size_t i = 0; i + 1 < kEdges; ++i) {
    c.eo[i] = static_cast<std::uint8_t>(rng.below(2));
    flip += c.eo[i];
  }
  c.eo[kEdges - 1] = static_cast<std::uint8_t>(flip & 1);
  if (permutation_parity(c.cp) != permutation_parity(c.ep)) std::swap(c.ep[kEdges - 2], c.ep[kEdges - 1]);
  return c;
}

MoveSequence random_moves(std::uint64_t seed, std::size_t length) {
  Rng rng(seed);
  MoveSequence out;
  out.reserve(length);
  while (out.size() < length) {
    const Move m = Move::from_index(static_cast<int>(rng.below(kMoveCount)));
    if (!out.empty() && out.back().face == m.face) continue;
    out.push_back(m);
  }
  return out;
}

}  // namespace rubik
