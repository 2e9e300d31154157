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

#include "arclaw/systems.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "arclaw/errors.hpp"

namespace arclaw {
namespace {

const Rational kZero(0);
const Rational kOne(1);
const Rational kHalf(1, 2);
const Rational kTwo(2);

std::string piece_text(const AffinePiece& p) {
  return "[" + p.lo.str() + ", " + p.hi.str() + ") slope " + p.slope.str() +
         " intercept " + p.intercept.str();
}

// Image of a piece inside [a, b) (or [a, b] when target_closed). The piece
// itself is [lo, hi), or [lo, hi] when piece_closed.
bool image_within(const AffinePiece& p, bool piece_closed, const Rational& a,
                  const Rational& b, bool target_closed) {
  const Rational at_lo = p.apply(p.lo);
  const Rational at_hi = p.apply(p.hi);
  auto below_top = [&](const Rational& v, bool attained) {
    return (attained && !target_closed) ? v < b : v <= b;
  };
  if (p.slope.is_zero()) {
    return p.intercept >= a && (target_closed ? p.intercept <= b : p.intercept < b);
  }
  if (p.slope > kZero) {
    return at_lo >= a && below_top(at_hi, piece_closed);
  }
  return at_hi >= a && below_top(at_lo, true);
}

std::vector<AffinePiece> restrict_to(const PiecewiseLinearMap& map,
                                     const Rational& a, const Rational& b) {
  std::vector<AffinePiece> out;
  for (const AffinePiece& p : map.pieces()) {
    const Rational lo = max(p.lo, a);
    const Rational hi = min(p.hi, b);
    if (lo < hi) out.push_back({lo, hi, p.slope, p.intercept});
  }
  return out;
}

void require_branch(const PiecewiseLinearMap& map, const char* name,
                    const Rational& lo, const Rational& hi, bool closed,
                    const Rational& slope, const Rational& intercept,
                    const char* formula, const Rational& c) {
  for (const AffinePiece& p : map.pieces()) {
    if (!(p.lo < hi && p.hi > lo)) continue;
    if (p.slope != slope || p.intercept != intercept) {
      throw Error(ErrorCode::kStructureMismatch,
                  std::string(name) + " must equal " + formula + " on [" +
                      lo.str() + ", " + hi.str() + (closed ? "]" : ")") +
                      " for c=" + c.str() + ", but has piece " + piece_text(p));
    }
  }
}

void require_unit_map(const PiecewiseLinearMap& map, const char* name) {
  if (map.domain_lo() != kZero || map.domain_hi() != kOne) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(name) + " pieces must tile [0, 1]");
  }
  const auto& pieces = map.pieces();
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const bool closed = i + 1 == pieces.size();
    if (!image_within(pieces[i], closed, kZero, kOne, true)) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(name) + " piece " + piece_text(pieces[i]) +
                      " leaves [0, 1]");
    }
  }
}

int left_depth(double u, double c) {
  int eu = 0;
  int ec = 0;
  std::frexp(u, &eu);
  std::frexp(c, &ec);
  int n = std::max(1, ec - eu);
  while (n > 1 && u >= std::ldexp(c, -(n - 1))) --n;
  while (u < std::ldexp(c, -n)) ++n;
  return n;
}

int right_depth(double v, double c) {
  int ev = 0;
  int ec = 0;
  std::frexp(v, &ev);
  std::frexp(c, &ec);
  int n = std::max(1, ec - ev);
  while (n > 1 && v > std::ldexp(c, -(n - 1))) --n;
  while (v <= std::ldexp(c, -n)) ++n;
  return n;
}

}  // namespace

// TailPoint -----------------------------------------------------------------

TailPoint TailPoint::from_real(double x) {
  if (x >= 0.5) return {Frame::kFromOne, 1.0 - x};
  return {Frame::kFromZero, x};
}

TailPoint TailPoint::from_one(double distance) {
  if (distance <= 0.5) return {Frame::kFromOne, distance};
  return {Frame::kFromZero, 1.0 - distance};
}

double TailPoint::to_real() const {
  return frame == Frame::kFromZero ? value : 1.0 - value;
}

TailPoint TailPoint::reflected() const {
  if (frame == Frame::kFromZero) return {Frame::kFromOne, value};
  if (value == 0.5) return *this;
  return {Frame::kFromZero, value};
}

// PiecewiseLinearMap --------------------------------------------------------

PiecewiseLinearMap::PiecewiseLinearMap(std::vector<AffinePiece> pieces) {
  for (AffinePiece& p : pieces) {
    if (p.hi < p.lo) {
      throw Error(ErrorCode::kInvalidArgument, "piece with hi < lo: " + piece_text(p));
    }
    if (p.lo == p.hi) continue;
    if (!pieces_.empty()) {
      AffinePiece& last = pieces_.back();
      if (last.hi != p.lo) {
        throw Error(ErrorCode::kInvalidArgument,
                    "pieces do not abut at " + last.hi.str() + " / " + p.lo.str());
      }
      if (last.slope == p.slope && last.intercept == p.intercept) {
        last.hi = p.hi;
        continue;
      }
    }
    pieces_.push_back(p);
  }
  if (pieces_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "map needs at least one non-empty piece");
  }
  closed_ = pieces_.back().hi == kOne;
  compiled_.reserve(pieces_.size());
  for (const AffinePiece& p : pieces_) {
    compiled_.push_back({p.lo.to_double(), p.hi.to_double(),
                         (kOne - p.lo).to_double(), (kOne - p.hi).to_double(),
                         p.slope.to_double(), p.intercept.to_double(),
                         (kOne - p.intercept).to_double(),
                         (kOne - p.slope - p.intercept).to_double(),
                         (p.slope + p.intercept).to_double()});
  }
}

std::size_t PiecewiseLinearMap::piece_index(const TailPoint& x) const {
  const std::size_t count = compiled_.size();
  if (x.frame == Frame::kFromZero) {
    if (x.value < compiled_.front().lo) return npos;
    for (std::size_t i = 0; i < count; ++i) {
      if (x.value < compiled_[i].hi) return i;
    }
    if (closed_ && x.value == compiled_.back().hi) return count - 1;
    return npos;
  }
  if (x.value > compiled_.front().lo_from_one) return npos;
  for (std::size_t i = 0; i < count; ++i) {
    if (x.value > compiled_[i].hi_from_one) return i;
  }
  if (closed_ && x.value == compiled_.back().hi_from_one) return count - 1;
  return npos;
}

std::size_t PiecewiseLinearMap::piece_index(double x) const {
  const std::size_t count = compiled_.size();
  if (x < compiled_.front().lo) return npos;
  for (std::size_t i = 0; i < count; ++i) {
    if (x < compiled_[i].hi) return i;
  }
  if (closed_ && x == compiled_.back().hi) return count - 1;
  return npos;
}

TailPoint PiecewiseLinearMap::apply(const Compiled& p, const TailPoint& x) {
  if (x.frame == Frame::kFromZero) {
    const double z = p.slope * x.value + p.intercept;
    if (z < 0.5) return {Frame::kFromZero, z};
    const double w = p.zero_to_one - p.slope * x.value;
    if (w > 0.5) return {Frame::kFromZero, 1.0 - w};
    return {Frame::kFromOne, w};
  }
  const double w = p.one_to_one + p.slope * x.value;
  if (w <= 0.5) return {Frame::kFromOne, w};
  const double z = p.one_to_zero - p.slope * x.value;
  if (z >= 0.5) return {Frame::kFromOne, 1.0 - z};
  return {Frame::kFromZero, z};
}

TailPoint PiecewiseLinearMap::operator()(const TailPoint& x) const {
  const std::size_t i = piece_index(x);
  if (i == npos) {
    throw Error(ErrorCode::kInvalidArgument,
                "point " + std::to_string(x.to_real()) + " outside map domain");
  }
  return apply(compiled_[i], x);
}

double PiecewiseLinearMap::operator()(double x) const {
  const std::size_t i = piece_index(x);
  if (i == npos) {
    throw Error(ErrorCode::kInvalidArgument,
                "point " + std::to_string(x) + " outside map domain");
  }
  return compiled_[i].slope * x + compiled_[i].intercept;
}

bool PiecewiseLinearMap::at_breakpoint(const TailPoint& x) const {
  for (std::size_t i = 1; i < compiled_.size(); ++i) {
    const double b = x.frame == Frame::kFromZero ? compiled_[i].lo
                                                 : compiled_[i].lo_from_one;
    if (x.value == b) return true;
  }
  return false;
}

// Families ------------------------------------------------------------------

std::string_view family_name(Family family) {
  switch (family) {
    case Family::kHataYano: return "hy";
    case Family::kGeneralizedHataYano: return "gen-hy";
    case Family::kPiecewiseLinearGH: return "pl-gh";
    case Family::kCustom: return "custom";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  std::string key(name);
  std::replace(key.begin(), key.end(), '_', '-');
  if (key == "hy") return Family::kHataYano;
  if (key == "gen-hy") return Family::kGeneralizedHataYano;
  if (key == "pl-gh") return Family::kPiecewiseLinearGH;
  if (key == "custom") return Family::kCustom;
  throw Error(ErrorCode::kConfig, "unknown family '" + std::string(name) + "'");
}

bool RandomSystem::at_breakpoint(const TailPoint& x) const {
  if (x.frame == Frame::kFromOne && x.value == 0.5) return true;
  return f0.at_breakpoint(x) || f1.at_breakpoint(x);
}

std::string RandomSystem::describe() const {
  std::string out(family_name(family));
  out += "(";
  if (delta) out += "delta=" + delta->str() + ", ";
  out += "c=" + c.str() + ")";
  return out;
}

std::vector<AffinePiece> parse_pieces(std::string_view text) {
  std::vector<AffinePiece> pieces;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(';', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(start, end - start);
    if (item.find_first_not_of(" \t\n") != std::string_view::npos) {
      std::vector<Rational> fields;
      std::size_t f = 0;
      while (f <= item.size()) {
        std::size_t comma = item.find(',', f);
        if (comma == std::string_view::npos) comma = item.size();
        fields.push_back(Rational::parse(item.substr(f, comma - f)));
        f = comma + 1;
      }
      if (fields.size() != 4) {
        throw Error(ErrorCode::kConfig, "piece '" + std::string(item) +
                                            "' needs lo,hi,slope,intercept");
      }
      pieces.push_back({fields[0], fields[1], fields[2], fields[3]});
    }
    start = end + 1;
  }
  return pieces;
}

std::string format_pieces(const std::vector<AffinePiece>& pieces) {
  std::string out;
  for (const AffinePiece& p : pieces) {
    if (!out.empty()) out += "; ";
    out += p.lo.str() + "," + p.hi.str() + "," + p.slope.str() + "," +
           p.intercept.str();
  }
  return out;
}

Rational default_core_parameter(Family family, const std::optional<Rational>& delta) {
  switch (family) {
    case Family::kGeneralizedHataYano: {
      const Rational d = delta.value_or(kZero);
      if (d > kZero && d <= Rational(1, 8)) return Rational(4) * d;
      return kHalf;
    }
    case Family::kPiecewiseLinearGH: {
      const Rational d = delta.value_or(kHalf);
      return min(min(Rational(2, 3), d), kHalf);
    }
    case Family::kHataYano:
    case Family::kCustom:
      break;
  }
  return kHalf;
}

void check_tail_structure(const PiecewiseLinearMap& f0,
                          const PiecewiseLinearMap& f1, const Rational& c) {
  if (c <= kZero || c > kHalf) {
    throw Error(ErrorCode::kInvalidArgument,
                "core parameter c=" + c.str() + " outside (0, 1/2]");
  }
  const Rational half_c = c / kTwo;
  require_branch(f0, "f0", kZero, c, false, kHalf, kZero, "x/2", c);
  require_branch(f0, "f0", kOne - half_c, kOne, true, kTwo, -kOne, "2x-1", c);
  require_branch(f1, "f1", kZero, half_c, false, kTwo, kZero, "2x", c);
  require_branch(f1, "f1", kOne - c, kOne, true, kHalf, kHalf, "(x+1)/2", c);
}

RandomSystem build_system(Family family, std::optional<Rational> delta,
                          const CustomPieces* custom) {
  RandomSystem system;
  system.family = family;
  std::vector<AffinePiece> p0;
  std::vector<AffinePiece> p1;
  switch (family) {
    case Family::kHataYano:
      p0 = {{kZero, kHalf, kHalf, kZero}, {kHalf, kOne, kTwo, -kOne}};
      p1 = {{kZero, kHalf, kTwo, kZero}, {kHalf, kOne, kHalf, kHalf}};
      break;
    case Family::kGeneralizedHataYano: {
      if (!delta) throw Error(ErrorCode::kInvalidArgument, "gen-hy requires delta");
      const Rational d = *delta;
      if (d < kZero || d > Rational(1, 6)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "gen-hy requires 0 <= delta <= 1/6, got " + d.str());
      }
      p0 = {{kZero, kHalf + d, kHalf, kZero}, {kHalf + d, kOne, kTwo, -kOne}};
      p1 = {{kZero, kHalf - d, kTwo, kZero}, {kHalf - d, kOne, kHalf, kHalf}};
      system.delta = d;
      break;
    }
    case Family::kPiecewiseLinearGH: {
      if (!delta) throw Error(ErrorCode::kInvalidArgument, "pl-gh requires delta");
      const Rational d = *delta;
      if (d <= kZero || d > Rational(2, 3)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "pl-gh requires 0 < delta <= 2/3, got " + d.str());
      }
      const Rational two_thirds(2, 3);
      p0 = {{kZero, two_thirds, kHalf, kZero}, {two_thirds, kOne, kTwo, -kOne}};
      p1 = {{kZero, d / kTwo, kTwo, kZero},
            {d / kTwo, kOne - d, kOne, d / kTwo},
            {kOne - d, kOne, kHalf, kHalf}};
      system.delta = d;
      break;
    }
    case Family::kCustom:
      if (custom == nullptr) {
        throw Error(ErrorCode::kInvalidArgument, "custom family requires pieces");
      }
      p0 = custom->f0;
      p1 = custom->f1;
      break;
  }
  system.f0 = PiecewiseLinearMap(std::move(p0));
  system.f1 = PiecewiseLinearMap(std::move(p1));
  require_unit_map(system.f0, "f0");
  require_unit_map(system.f1, "f1");
  system.c = family == Family::kCustom ? custom->c
                                       : default_core_parameter(family, system.delta);
  check_tail_structure(system.f0, system.f1, system.c);
  return system;
}

// Core ----------------------------------------------------------------------

CoreSystem::CoreSystem(PiecewiseLinearMap h0, PiecewiseLinearMap h1, Rational c)
    : h0_(std::move(h0)),
      h1_(std::move(h1)),
      c_(c),
      c_value_(c.to_double()),
      y_lo_((c / kTwo).to_double()),
      y_hi_((kOne - c / kTwo).to_double()) {}

CoreSystem validate_core(const RandomSystem& system, const Rational& c) {
  check_tail_structure(system.f0, system.f1, c);
  const Rational y_lo = c / kTwo;
  const Rational y_hi = kOne - c / kTwo;

  std::vector<AffinePiece> h0 = restrict_to(system.f1, y_lo, c);
  for (const AffinePiece& p : restrict_to(system.f0, c, y_hi)) h0.push_back(p);
  std::vector<AffinePiece> h1 = restrict_to(system.f1, y_lo, kOne - c);
  for (const AffinePiece& p : restrict_to(system.f0, kOne - c, y_hi)) h1.push_back(p);

  CoreSystem core(PiecewiseLinearMap(std::move(h0)), PiecewiseLinearMap(std::move(h1)), c);
  std::string failures;
  for (int j = 0; j < 2; ++j) {
    for (const AffinePiece& p : core.map(j).pieces()) {
      if (image_within(p, false, y_lo, y_hi, false)) continue;
      const Rational a = p.apply(p.lo);
      const Rational b = p.apply(p.hi);
      failures += "\n  h" + std::to_string(j) + " piece " + piece_text(p) +
                  " has image between " + min(a, b).str() + " and " +
                  max(a, b).str() + ", outside Y=[" + y_lo.str() + ", " +
                  y_hi.str() + ")";
    }
  }
  if (!failures.empty()) {
    throw Error(ErrorCode::kCoreNotInvariant,
                "core of " + system.describe() + " is not invariant for c=" +
                    c.str() + ":" + failures);
  }
  return core;
}

double core_step(const CoreSystem& core, int symbol, double y) {
  if (!core.contains(y)) {
    throw Error(ErrorCode::kOutsideCore,
                "point " + std::to_string(y) + " is outside Y");
  }
  return core.map(symbol)(y);
}

// Cells ---------------------------------------------------------------------

std::string to_string(const CellIndex& cell) {
  switch (cell.side) {
    case Side::kLeft: return "I" + std::to_string(cell.depth) + "-";
    case Side::kRight: return "I" + std::to_string(cell.depth) + "+";
    case Side::kCore: return "I0";
  }
  return "?";
}

CellIndex locate_cell(const TailPoint& x, double c) {
  if (x.value == 0.0) {
    throw Error(ErrorCode::kDegenerateBoundary,
                x.frame == Frame::kFromZero ? "x = 0 lies in no cell"
                                            : "x = 1 lies in no cell");
  }
  if (x.frame == Frame::kFromZero) {
    if (x.value < c) return {Side::kLeft, left_depth(x.value, c)};
    return {Side::kCore, 0};
  }
  if (x.value <= c) return {Side::kRight, right_depth(x.value, c)};
  return {Side::kCore, 0};
}

std::pair<double, double> cell_interval(const CellIndex& cell, double c) {
  switch (cell.side) {
    case Side::kLeft:
      return {std::ldexp(c, -cell.depth), std::ldexp(c, -(cell.depth - 1))};
    case Side::kRight:
      return {1.0 - std::ldexp(c, -(cell.depth - 1)), 1.0 - std::ldexp(c, -cell.depth)};
    case Side::kCore:
      break;
  }
  return {c, 1.0 - c};
}

}  // namespace arclaw
