// Copyright 2026 The arclaw Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Interval maps, the built-in random-map families, the core system on
// Y = I1- u I0 u I1+, and the cell partition of [0, 1).

#ifndef ARCLAW_SYSTEMS_HPP_
#define ARCLAW_SYSTEMS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "arclaw/rational.hpp"

namespace arclaw {

enum class Frame : std::uint8_t { kFromZero, kFromOne };

/// A point of [0, 1] stored as x (kFromZero) or as 1 - x (kFromOne).
///
/// Points with x >= 1/2 always use kFromOne, points below 1/2 use kFromZero.
/// In either frame the stored value lies in [0, 1/2], so the tail branches
/// x/2, 2x, (x+1)/2 and 2x-1 reduce to exact multiplications by 2 or 1/2 and
/// orbits may wander arbitrarily deep into either tail without losing bits.
struct TailPoint {
  Frame frame = Frame::kFromZero;
  double value = 0.0;

  static TailPoint from_real(double x);
  /// The point 1 - distance, for 0 <= distance <= 1.
  static TailPoint from_one(double distance);

  /// Nearest double to the represented point.
  double to_real() const;
  bool upper_half() const { return frame == Frame::kFromOne; }
  /// x -> 1 - x, exact.
  TailPoint reflected() const;

  friend bool operator==(const TailPoint&, const TailPoint&) = default;
};

/// y = slope * x + intercept on [lo, hi).
struct AffinePiece {
  Rational lo;
  Rational hi;
  Rational slope;
  Rational intercept;

  Rational apply(const Rational& x) const { return slope * x + intercept; }
  friend bool operator==(const AffinePiece&, const AffinePiece&) = default;
};

/// Piecewise affine map on [lo, hi) (closed at the right end when hi = 1).
class PiecewiseLinearMap {
 public:
  PiecewiseLinearMap() = default;
  /// Pieces must abut exactly; empty pieces are dropped and neighbouring
  /// pieces with identical coefficients are merged.
  explicit PiecewiseLinearMap(std::vector<AffinePiece> pieces);

  const std::vector<AffinePiece>& pieces() const { return pieces_; }
  const Rational& domain_lo() const { return pieces_.front().lo; }
  const Rational& domain_hi() const { return pieces_.back().hi; }
  bool closed_at_hi() const { return closed_; }

  /// Index of the piece containing x, or npos when x is outside the domain.
  std::size_t piece_index(const TailPoint& x) const;
  std::size_t piece_index(double x) const;

  TailPoint operator()(const TailPoint& x) const;
  /// Applies piece `index` regardless of where x lies.
  TailPoint apply_piece(std::size_t index, const TailPoint& x) const {
    return apply(compiled_[index], x);
  }
  /// Plain double evaluation (one rounding); used inside Y.
  double operator()(double x) const;

  /// True when x coincides with an interior breakpoint.
  bool at_breakpoint(const TailPoint& x) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  friend bool operator==(const PiecewiseLinearMap& a,
                         const PiecewiseLinearMap& b) {
    return a.pieces_ == b.pieces_;
  }

 private:
  struct Compiled {
    double lo;
    double hi;
    double lo_from_one;  // round(1 - lo)
    double hi_from_one;  // round(1 - hi)
    double slope;
    double intercept;
    double zero_to_one;  // round(1 - intercept)
    double one_to_one;   // round(1 - slope - intercept)
    double one_to_zero;  // round(slope + intercept)
  };

  static TailPoint apply(const Compiled& p, const TailPoint& x);

  std::vector<AffinePiece> pieces_;
  std::vector<Compiled> compiled_;
  bool closed_ = false;
};

enum class Family { kHataYano, kGeneralizedHataYano, kPiecewiseLinearGH, kCustom };

std::string_view family_name(Family family);
/// Accepts "hy", "gen-hy", "pl-gh", "custom" (underscores also accepted).
Family parse_family(std::string_view name);

struct RandomSystem {
  PiecewiseLinearMap f0;
  PiecewiseLinearMap f1;
  Rational c;
  Family family = Family::kCustom;
  std::optional<Rational> delta;

  const PiecewiseLinearMap& map(int symbol) const { return symbol == 0 ? f0 : f1; }
  /// Interior breakpoint of f0 or f1, or the point 1/2.
  bool at_breakpoint(const TailPoint& x) const;
  std::string describe() const;
};

struct CustomPieces {
  std::vector<AffinePiece> f0;
  std::vector<AffinePiece> f1;
  Rational c;
};

/// Parses "lo,hi,slope,intercept; lo,hi,slope,intercept; ..." with rational
/// literals ("1/2", "0.25", ...).
std::vector<AffinePiece> parse_pieces(std::string_view text);
std::string format_pieces(const std::vector<AffinePiece>& pieces);

/// Core parameter recipe: gen-hy uses 4 delta for 0 < delta <= 1/8 and 1/2
/// otherwise; pl-gh uses min(2/3, delta, 1/2); hy uses 1/2 (its core is never
/// invariant, so the choice only matters for diagnostics).
Rational default_core_parameter(Family family, const std::optional<Rational>& delta);

RandomSystem build_system(Family family, std::optional<Rational> delta,
                          const CustomPieces* custom = nullptr);

/// Throws kStructureMismatch unless f0 = x/2 on [0,c), f0 = 2x-1 on
/// [1-c/2,1], f1 = 2x on [0,c/2) and f1 = (x+1)/2 on [1-c,1].
void check_tail_structure(const PiecewiseLinearMap& f0,
                          const PiecewiseLinearMap& f1, const Rational& c);

class CoreSystem {
 public:
  CoreSystem(PiecewiseLinearMap h0, PiecewiseLinearMap h1, Rational c);

  const PiecewiseLinearMap& h0() const { return h0_; }
  const PiecewiseLinearMap& h1() const { return h1_; }
  const PiecewiseLinearMap& map(int symbol) const { return symbol == 0 ? h0_ : h1_; }

  const Rational& c() const { return c_; }
  double c_value() const { return c_value_; }
  double y_lo() const { return y_lo_; }
  double y_hi() const { return y_hi_; }
  bool contains(double y) const { return y >= y_lo_ && y < y_hi_; }
  bool deterministic() const { return h0_ == h1_; }

 private:
  PiecewiseLinearMap h0_;
  PiecewiseLinearMap h1_;
  Rational c_;
  double c_value_;
  double y_lo_;
  double y_hi_;
};

/// Assembles h0, h1 and verifies h_j(Y) is contained in Y on every affine
/// piece. Throws kStructureMismatch or kCoreNotInvariant.
CoreSystem validate_core(const RandomSystem& system, const Rational& c);

/// h_symbol(y) for y in Y; throws kOutsideCore otherwise.
double core_step(const CoreSystem& core, int symbol, double y);

enum class Side : std::uint8_t { kLeft, kCore, kRight };

/// (kLeft, n) is I_n^-, (kRight, n) is I_n^+, kCore is I_0 (depth unused).
struct CellIndex {
  Side side = Side::kCore;
  int depth = 0;

  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

std::string to_string(const CellIndex& cell);

/// Throws kDegenerateBoundary for x = 0 or x = 1.
CellIndex locate_cell(const TailPoint& x, double c);
std::pair<double, double> cell_interval(const CellIndex& cell, double c);

}  // namespace arclaw

#endif  // ARCLAW_SYSTEMS_HPP_
