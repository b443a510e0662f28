#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rubik {

// Face labels double as facelet labels: a cube state never talks about
// colours, only about which face a sticker belongs to.
enum class Face : std::uint8_t { U, R, F, D, L, B };

inline constexpr std::size_t kFaces = 6;
inline constexpr std::array<Face, kFaces> kAllFaces = {Face::U, Face::R, Face::F,
                                                       Face::D, Face::L, Face::B};

char face_char(Face f);
// Returns false if `c` is not one of URFDLB.
bool face_from_char(char c, Face& out);

inline constexpr Face opposite(Face f) {
  return static_cast<Face>((static_cast<int>(f) + 3) % 6);
}

// Corner and edge slots, Kociemba order.
enum Corner : std::uint8_t { URF, UFL, ULB, UBR, DFR, DLF, DBL, DRB };
enum Edge : std::uint8_t { UR, UF, UL, UB, DR, DF, DL, DB, FR, FL, BL, BR };

inline constexpr std::size_t kCorners = 8;
inline constexpr std::size_t kEdges = 12;
inline constexpr std::size_t kFacelets = 54;

// ---------------------------------------------------------------------------
// Facelet level
// ---------------------------------------------------------------------------

// 54 labels, face-major U,R,F,D,L,B, each face row-major as seen from outside
// with U on top and F toward the viewer (U and D are viewed with B resp. F
// at the top edge).
struct FaceletState {
  std::array<Face, kFacelets> facelets{};

  static FaceletState solved();
  std::string str() const;

  friend bool operator==(const FaceletState&, const FaceletState&) = default;
};

// Center facelet positions; centers define the face labelling.
inline constexpr std::array<std::size_t, kFaces> kCenterFacelets = {4, 13, 22, 31, 40, 49};

// Which facelets belong to each corner / edge slot, listed starting with the
// U or D sticker (resp. the U/D or F/B sticker for edges).
extern const std::array<std::array<std::uint8_t, 3>, kCorners> kCornerFacelets;
extern const std::array<std::array<std::uint8_t, 2>, kEdges> kEdgeFacelets;

class FaceletError : public std::runtime_error {
 public:
  enum class Kind { BadLength, BadCharacter, BadCount, BadCenters, UnrecognizedCubie };

  FaceletError(Kind kind, std::size_t position, const std::string& what)
      : std::runtime_error(what), kind_(kind), position_(position) {}

  Kind kind() const { return kind_; }
  // Character position, face index, or cubie slot depending on kind.
  std::size_t position() const { return position_; }

 private:
  Kind kind_;
  std::size_t position_;
};

std::string_view to_string(FaceletError::Kind k);

// Throws FaceletError describing the first violated constraint, checked in
// the order length, alphabet, label counts, centers.
FaceletState parse_facelets(std::string_view text);

// ---------------------------------------------------------------------------
// Cubie level
// ---------------------------------------------------------------------------

// cp[i] is the corner sitting in slot i, co[i] its twist; same for edges.
// Unsolvable assignments are representable on purpose.
struct CubieState {
  std::array<std::uint8_t, kCorners> cp{0, 1, 2, 3, 4, 5, 6, 7};
  std::array<std::uint8_t, kCorners> co{};
  std::array<std::uint8_t, kEdges> ep{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  std::array<std::uint8_t, kEdges> eo{};

  static CubieState identity() { return {}; }
  bool is_solved() const { return *this == CubieState{}; }

  friend bool operator==(const CubieState&, const CubieState&) = default;
};

// Group product: first `a`, then `b`.
CubieState compose(const CubieState& a, const CubieState& b);
CubieState inverse(const CubieState& c);

// Throws FaceletError{UnrecognizedCubie, slot} when the stickers at a slot
// form no real piece or a piece appears twice.
CubieState facelets_to_cubies(const FaceletState& f);
FaceletState cubies_to_facelets(const CubieState& c);

// ---------------------------------------------------------------------------
// Moves
// ---------------------------------------------------------------------------

enum class Turn : std::uint8_t { CW, Half, CCW };

struct Move {
  Face face = Face::U;
  Turn turn = Turn::CW;

  // 0..17 as face*3 + turn; this is also the search move order.
  constexpr int index() const { return static_cast<int>(face) * 3 + static_cast<int>(turn); }
  static constexpr Move from_index(int i) {
    return {static_cast<Face>(i / 3), static_cast<Turn>(i % 3)};
  }
  // Number of clockwise quarter turns (1, 2 or 3).
  constexpr int quarter_turns() const { return static_cast<int>(turn) + 1; }
  constexpr Move inverse() const {
    return {face, turn == Turn::CW ? Turn::CCW : turn == Turn::CCW ? Turn::CW : Turn::Half};
  }

  friend bool operator==(const Move&, const Move&) = default;
};

inline constexpr int kMoveCount = 18;

using MoveSequence = std::vector<Move>;

// The cubie state produced by one move applied to the solved cube.
const CubieState& move_cube(Move m);

CubieState apply_move(const CubieState& c, Move m);
CubieState apply_sequence(CubieState c, const MoveSequence& s);
MoveSequence invert_sequence(const MoveSequence& s);

std::string format_move(Move m);
// Space-separated tokens, e.g. "R' B U2".
std::string format_moves(const MoveSequence& s);
// Concatenated form used by the solution panel, e.g. "LUD'".
std::string format_moves_compact(const MoveSequence& s);

class MoveParseError : public std::runtime_error {
 public:
  MoveParseError(std::size_t position, const std::string& what)
      : std::runtime_error(what), position_(position) {}
  // Character offset of the offending token in the input.
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Accepts whitespace separated tokens ("R' B U2") as well as concatenated
// tokens ("D2R'F"). Throws MoveParseError (BadToken).
MoveSequence parse_moves(std::string_view text);

// ---------------------------------------------------------------------------
// Validation and scrambling
// ---------------------------------------------------------------------------

enum class Verdict { Valid, Malformed, TwistSum, FlipSum, PermParity };

std::string_view to_string(Verdict v);

// Malformed covers non-bijective permutations or out of range orientations.
// Otherwise the first failing law among twist sum, flip sum, parity.
Verdict validate(const CubieState& c);

// Even permutation -> 0, odd -> 1.
template <std::size_t N>
int permutation_parity(const std::array<std::uint8_t, N>& p) {
  int inversions = 0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j)
      if (p[i] > p[j]) ++inversions;
  return inversions & 1;
}

// Uniformly random solvable state; same seed, same state.
CubieState random_state(std::uint64_t seed);

// `length` random moves with no two consecutive turns of the same face.
MoveSequence random_moves(std::uint64_t seed, std::size_t length);

}  // namespace rubik
