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

#include "arclaw/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include <json.hpp>

#include "arclaw/errors.hpp"

namespace arclaw {
namespace {

void require_positive_depth(int depth) {
  if (depth < 1) {
    throw Error(ErrorCode::kInvalidArgument, "depth must be at least 1");
  }
}

std::int64_t floor_of(const Rational& r) {
  std::int64_t q = r.num() / r.den();
  if (r.num() % r.den() != 0 && r.num() < 0) --q;
  return q;
}

std::vector<Atom> merged(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.position < b.position; });
  std::vector<Atom> out;
  for (const Atom& a : atoms) {
    if (!out.empty() && out.back().position == a.position) {
      out.back().weight += a.weight;
    } else {
      out.push_back(a);
    }
  }
  return out;
}

void require_grid_of(const CoreSystem& core, const StepDensity& d) {
  if (d.lo() != core.y_lo() || d.hi() != core.y_hi()) {
    throw Error(ErrorCode::kInvalidArgument,
                "step density grid does not cover Y = [" +
                    std::to_string(core.y_lo()) + ", " + std::to_string(core.y_hi()) + ")");
  }
}

std::vector<double> cell_masses(const StepDensity& d) {
  std::vector<double> m(d.grid_size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = d.values()[i] * d.cell_width();
  return m;
}

StepDensity from_masses(const CoreSystem& core, const std::vector<double>& m) {
  const double width = (core.y_hi() - core.y_lo()) / static_cast<double>(m.size());
  std::vector<double> v(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) v[i] = m[i] / width;
  return StepDensity(core.y_lo(), core.y_hi(), std::move(v));
}

double l1(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

}  // namespace

// ---------------------------------------------------------------- Discrete

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms) {
  for (const Atom& a : atoms) {
    if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
      throw Error(ErrorCode::kInvalidArgument, "atom weights must be positive");
    }
    if (!(a.position >= 0.0 && a.position <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "atom position outside [0, 1]");
    }
  }
  atoms_ = merged(std::move(atoms));
}

double DiscreteMeasure::total_mass() const {
  double s = 0.0;
  for (const Atom& a : atoms_) s += a.weight;
  return s;
}

double DiscreteMeasure::mass(double lo, double hi) const {
  double s = 0.0;
  for (const Atom& a : atoms_) {
    if (a.position >= lo && a.position < hi) s += a.weight;
  }
  return s;
}

double DiscreteMeasure::mass_from_one(double dlo, double dhi) const {
  double s = 0.0;
  for (const Atom& a : atoms_) {
    const double d = 1.0 - a.position;
    if (d > dlo && d <= dhi) s += a.weight;
  }
  return s;
}

// ---------------------------------------------------------------- Step

StepDensity::StepDensity(double lo, double hi, std::vector<double> values)
    : lo_(lo), hi_(hi), values_(std::move(values)) {
  if (values_.empty() || !(lo < hi)) {
    throw Error(ErrorCode::kInvalidArgument, "step density needs a nonempty grid");
  }
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, "densities must be finite and nonnegative");
    }
  }
  width_ = (hi_ - lo_) / static_cast<double>(values_.size());
}

double StepDensity::total_mass() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * width_;
}

std::size_t StepDensity::cell_of(double x) const {
  const double k = std::floor((x - lo_) / width_);
  if (k <= 0.0) return 0;
  return std::min(values_.size() - 1, static_cast<std::size_t>(k));
}

double StepDensity::density(double x) const {
  if (!(x >= lo_ && x < hi_)) return 0.0;
  return values_[cell_of(x)];
}

double StepDensity::mass(double lo, double hi) const {
  const double a = std::max(lo, lo_);
  const double b = std::min(hi, hi_);
  if (!(a < b)) return 0.0;
  const std::size_t i = cell_of(a);
  std::size_t j = cell_of(b);
  if (j > i && cell_lo(j) >= b) --j;
  if (i == j) return values_[i] * (b - a);
  double s = values_[i] * (cell_lo(i + 1) - a);
  for (std::size_t k = i + 1; k < j; ++k) s += values_[k] * width_;
  s += values_[j] * (b - cell_lo(j));
  return s;
}

double StepDensity::mass_from_one(double dlo, double dhi) const {
  return mass(1.0 - dhi, 1.0 - dlo);
}

// ---------------------------------------------------------------- Core

CoreMeasure CoreMeasure::from_atoms(std::vector<Atom> atoms) {
  return CoreMeasure(DiscreteMeasure(std::move(atoms)));
}

CoreMeasure CoreMeasure::uniform(const CoreSystem& core, std::size_t grid_size) {
  if (grid_size < 1) throw Error(ErrorCode::kInvalidArgument, "empty grid");
  const double d = 1.0 / (core.y_hi() - core.y_lo());
  return CoreMeasure(
      StepDensity(core.y_lo(), core.y_hi(), std::vector<double>(grid_size, d)));
}

double CoreMeasure::total_mass() const {
  return std::visit([](const auto& m) { return m.total_mass(); }, repr_);
}

double CoreMeasure::mass(double lo, double hi) const {
  return std::visit([&](const auto& m) { return m.mass(lo, hi); }, repr_);
}

double CoreMeasure::mass_from_one(double dlo, double dhi) const {
  return std::visit([&](const auto& m) { return m.mass_from_one(dlo, dhi); }, repr_);
}

CoreMeasure CoreMeasure::scaled(double factor) const {
  if (!(factor > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "scale factor must be positive");
  }
  if (is_discrete()) {
    std::vector<Atom> atoms = discrete().atoms();
    for (Atom& a : atoms) a.weight *= factor;
    return CoreMeasure(DiscreteMeasure(std::move(atoms)));
  }
  std::vector<double> v = step().values();
  for (double& x : v) x *= factor;
  return CoreMeasure(StepDensity(step().lo(), step().hi(), std::move(v)));
}

CoreMeasure CoreMeasure::normalized() const {
  const double total = total_mass();
  if (!(total > 0.0)) throw Error(ErrorCode::kZeroMass, "measure has zero mass");
  return scaled(1.0 / total);
}

// ---------------------------------------------------------------- Transfer

bool grid_aligned(const CoreSystem& core, std::size_t grid_size) {
  if (grid_size < 1) return false;
  const Rational& c = core.c();
  const Rational y_len = Rational(1) - c;
  // (c/2) / (|Y| / m) must be an integer; then 1 - c is a grid point as well.
  const Rational offset = (c / Rational(2)) * Rational(static_cast<std::int64_t>(grid_size)) / y_len;
  return offset.is_integer();
}

TransferMatrix TransferMatrix::assemble(const CoreSystem& core, std::size_t grid_size) {
  if (grid_size < 2) throw Error(ErrorCode::kInvalidArgument, "grid_size must be at least 2");
  const auto m = static_cast<std::int64_t>(grid_size);
  const Rational y_lo = core.c() / Rational(2);
  const Rational width = (Rational(1) - core.c()) / Rational(m);
  auto target_of = [&](const Rational& y) {
    return std::clamp<std::int64_t>(floor_of((y - y_lo) / width), 0, m - 1);
  };

  TransferMatrix t;
  t.offsets_.push_back(0);
  std::map<std::size_t, double> row;
  for (std::int64_t i = 0; i < m; ++i) {
    row.clear();
    const Rational a = y_lo + width * Rational(i);
    const Rational b = a + width;
    for (int symbol = 0; symbol < 2; ++symbol) {
      for (const AffinePiece& p : core.map(symbol).pieces()) {
        const Rational u = max(a, p.lo);
        const Rational v = min(b, p.hi);
        if (!(u < v)) continue;
        const Rational share = (v - u) / width / Rational(2);
        if (p.slope.is_zero()) {
          row[static_cast<std::size_t>(target_of(p.intercept))] += share.to_double();
          continue;
        }
        const Rational e0 = min(p.apply(u), p.apply(v));
        const Rational e1 = max(p.apply(u), p.apply(v));
        const Rational span = e1 - e0;
        for (std::int64_t k = target_of(e0); k <= target_of(e1) && k < m; ++k) {
          const Rational t_lo = y_lo + width * Rational(k);
          const Rational overlap = min(e1, t_lo + width) - max(e0, t_lo);
          if (overlap > Rational(0)) {
            row[static_cast<std::size_t>(k)] += (share * overlap / span).to_double();
          }
        }
      }
    }
    for (const auto& [k, w] : row) {
      t.targets_.push_back(k);
      t.weights_.push_back(w);
    }
    t.offsets_.push_back(t.targets_.size());
  }
  return t;
}

std::vector<double> TransferMatrix::apply(std::span<const double> masses) const {
  if (masses.size() != size()) {
    throw Error(ErrorCode::kInvalidArgument, "mass vector does not match the grid");
  }
  std::vector<double> out(size(), 0.0);
  for (std::size_t i = 0; i < size(); ++i) {
    const double m = masses[i];
    if (m == 0.0) continue;
    for (std::size_t e = offsets_[i]; e < offsets_[i + 1]; ++e) {
      out[targets_[e]] += weights_[e] * m;
    }
  }
  return out;
}

double TransferMatrix::weight(std::size_t from, std::size_t to) const {
  for (std::size_t e = offsets_.at(from); e < offsets_.at(from + 1); ++e) {
    if (targets_[e] == to) return weights_[e];
  }
  return 0.0;
}

// ---------------------------------------------------------------- Push

CoreMeasure annealed_push(const CoreSystem& core, const CoreMeasure& m) {
  if (m.is_discrete()) {
    std::vector<Atom> out;
    for (const Atom& a : m.discrete().atoms()) {
      if (!core.contains(a.position)) {
        throw Error(ErrorCode::kOutsideCore,
                    "atom at " + std::to_string(a.position) + " lies outside Y");
      }
      for (int symbol = 0; symbol < 2; ++symbol) {
        out.push_back({core.map(symbol)(a.position), a.weight / 2.0});
      }
    }
    return CoreMeasure(DiscreteMeasure(std::move(out)));
  }
  const StepDensity& d = m.step();
  require_grid_of(core, d);
  const TransferMatrix t = TransferMatrix::assemble(core, d.grid_size());
  return CoreMeasure(from_masses(core, t.apply(cell_masses(d))));
}

double measure_distance(const CoreMeasure& a, const CoreMeasure& b) {
  if (a.is_discrete() != b.is_discrete()) {
    throw Error(ErrorCode::kMixedVariant, "cannot compare atoms with a step density");
  }
  if (a.is_discrete()) {
    std::map<double, double> diff;
    for (const Atom& x : a.discrete().atoms()) diff[x.position] += x.weight;
    for (const Atom& x : b.discrete().atoms()) diff[x.position] -= x.weight;
    double s = 0.0;
    for (const auto& [pos, w] : diff) s += std::abs(w);
    return s / 2.0;
  }
  const StepDensity& da = a.step();
  const StepDensity& db = b.step();
  if (da.grid_size() != db.grid_size() || da.lo() != db.lo() || da.hi() != db.hi()) {
    throw Error(ErrorCode::kInvalidArgument, "step densities on different grids");
  }
  return l1(cell_masses(da), cell_masses(db));
}

double invariance_residual(const CoreSystem& core, const CoreMeasure& m) {
  return measure_distance(m, annealed_push(core, m));
}

CoreMeasure ulam_fixed_density(const CoreSystem& core, std::size_t grid_size, double tol,
                               long max_iters, UlamStats* stats) {
  if (grid_size < 2) throw Error(ErrorCode::kInvalidArgument, "grid_size must be at least 2");
  if (!grid_aligned(core, grid_size)) {
    throw Error(ErrorCode::kInvalidArgument,
                "grid of " + std::to_string(grid_size) +
                    " cells does not put c and 1 - c on grid points");
  }
  const TransferMatrix t = TransferMatrix::assemble(core, grid_size);
  std::vector<double> cur(grid_size, 1.0 / static_cast<double>(grid_size));
  double residual = 0.0;
  for (long it = 1; it <= max_iters; ++it) {
    std::vector<double> next = t.apply(cur);
    residual = l1(next, cur);
    if (residual < tol) {
      if (stats != nullptr) *stats = {it, residual};
      return CoreMeasure(from_masses(core, cur));
    }
    cur = std::move(next);
  }
  throw NonConvergence("power iteration stopped after " + std::to_string(max_iters) +
                           " iterations with residual " + std::to_string(residual),
                       residual, max_iters);
}

BetaB beta_b(const CoreMeasure& nu, double c) {
  const double left = nu.mass(c / 2.0, c);
  const double right = nu.mass_from_one(c / 2.0, c);
  if (!(left > 0.0) || !(right > 0.0)) {
    throw Error(ErrorCode::kZeroSideMass,
                "nu(I1-) = " + std::to_string(left) + ", nu(I1+) = " +
                    std::to_string(right) + ": both sides need positive mass");
  }
  const double beta = left / (left + right);
  return {beta, (1.0 - beta) / beta, left, right};
}

// ---------------------------------------------------------------- Extension

SigmaFiniteTailMeasure extend_mu(const CoreMeasure& nu, int depth,
                                 const RandomSystem& system) {
  require_positive_depth(depth);
  const double c = system.c.to_double();
  SigmaFiniteTailMeasure mu(nu, depth, c);
  const auto levels = static_cast<std::size_t>(depth) + 1;
  mu.left_.assign(levels, 0.0);
  mu.right_.assign(levels, 0.0);
  mu.core_mass_ = nu.mass(c, 1.0 - c);

  if (nu.is_discrete()) {
    mu.left_atoms_.resize(levels);
    mu.right_atoms_.resize(levels);
    for (const Atom& a : nu.discrete().atoms()) {
      const TailPoint start = TailPoint::from_real(a.position);
      const CellIndex cell = locate_cell(start, c);
      if (cell.side == Side::kCore) continue;
      if (cell.depth != 1) {
        throw Error(ErrorCode::kOutsideCore, "atom of nu lies outside Y");
      }
      // (f0)^{n-1} carries I1- onto In-, (f1)^{n-1} carries I1+ onto In+.
      const PiecewiseLinearMap& carrier = cell.side == Side::kLeft ? system.f0 : system.f1;
      auto& sink = cell.side == Side::kLeft ? mu.left_atoms_ : mu.right_atoms_;
      TailPoint p = start;
      for (int n = 1; n <= depth; ++n) {
        sink[static_cast<std::size_t>(n)].emplace_back(p, 2.0 * a.weight);
        p = carrier(p);
      }
    }
    for (std::size_t n = 1; n < levels; ++n) {
      for (const auto& [p, w] : mu.left_atoms_[n]) mu.left_[n] += w;
      for (const auto& [p, w] : mu.right_atoms_[n]) mu.right_[n] += w;
    }
    return mu;
  }

  // Step density: phi = 2^n phi_-(2^{n-1} x) on In-, so each grid cell of I1-
  // contributes 2^n value * 2^{-(n-1)} width at level n.
  const StepDensity& d = nu.step();
  for (std::size_t i = 0; i < d.grid_size(); ++i) {
    const double a = d.cell_lo(i);
    const double b = a + d.cell_width();
    const double left_overlap = std::max(0.0, std::min(b, c) - std::max(a, c / 2.0));
    const double right_overlap =
        std::max(0.0, std::min(b, 1.0 - c / 2.0) - std::max(a, 1.0 - c));
    for (int n = 1; n <= depth; ++n) {
      const double dens = std::ldexp(d.values()[i], n);
      mu.left_[static_cast<std::size_t>(n)] += dens * std::ldexp(left_overlap, -(n - 1));
      mu.right_[static_cast<std::size_t>(n)] += dens * std::ldexp(right_overlap, -(n - 1));
    }
  }
  return mu;
}

double SigmaFiniteTailMeasure::cell_mass(const CellIndex& cell) const {
  if (cell.side == Side::kCore) return core_mass_;
  if (cell.depth < 1) throw Error(ErrorCode::kInvalidArgument, "cell depth must be positive");
  if (cell.depth > depth_) {
    throw Error(ErrorCode::kTruncationEscape,
                to_string(cell) + " is deeper than the truncation depth " +
                    std::to_string(depth_));
  }
  const auto n = static_cast<std::size_t>(cell.depth);
  return cell.side == Side::kLeft ? left_[n] : right_[n];
}

double SigmaFiniteTailMeasure::mass_y() const {
  return left_[1] + core_mass_ + right_[1];
}

double SigmaFiniteTailMeasure::mass(double lo, double hi) const {
  lo = std::max(lo, 0.0);
  hi = std::min(hi, 1.0);
  if (!(lo < hi)) return 0.0;
  const double deepest = std::ldexp(c_, -depth_);
  if (lo < deepest || 1.0 - hi < deepest) {
    throw Error(ErrorCode::kTruncationEscape,
                "interval [" + std::to_string(lo) + ", " + std::to_string(hi) +
                    ") reaches beyond tail depth " + std::to_string(depth_));
  }
  double total = nu_.mass(std::max(lo, c_), std::min(hi, 1.0 - c_));
  for (int n = 1; n <= depth_; ++n) {
    const double cell_lo = std::ldexp(c_, -n);
    const double cell_hi = std::ldexp(c_, -(n - 1));
    if (cell_hi <= lo) break;
    const double a = std::max(lo, cell_lo);
    const double b = std::min(hi, cell_hi);
    if (a < b) total += 2.0 * nu_.mass(std::ldexp(a, n - 1), std::ldexp(b, n - 1));
  }
  // Right cells in v = 1 - x: In+ is v in (c/2^n, c/2^{n-1}], A is v in (1-hi, 1-lo].
  const double v_lo = 1.0 - hi;
  const double v_hi = 1.0 - lo;
  for (int n = 1; n <= depth_; ++n) {
    const double cell_lo = std::ldexp(c_, -n);
    const double cell_hi = std::ldexp(c_, -(n - 1));
    if (cell_hi <= v_lo) break;
    const double a = std::max(v_lo, cell_lo);
    const double b = std::min(v_hi, cell_hi);
    if (a < b) total += 2.0 * nu_.mass_from_one(std::ldexp(a, n - 1), std::ldexp(b, n - 1));
  }
  return total;
}

std::vector<std::pair<TailPoint, double>> SigmaFiniteTailMeasure::atoms(
    const CellIndex& cell) const {
  if (!nu_.is_discrete()) {
    throw Error(ErrorCode::kMixedVariant, "atoms requested from a step density");
  }
  if (cell.side == Side::kCore) {
    std::vector<std::pair<TailPoint, double>> out;
    for (const Atom& a : nu_.discrete().atoms()) {
      if (a.position >= c_ && a.position < 1.0 - c_) {
        out.emplace_back(TailPoint::from_real(a.position), a.weight);
      }
    }
    return out;
  }
  cell_mass(cell);  // depth checks
  const auto n = static_cast<std::size_t>(cell.depth);
  return cell.side == Side::kLeft ? left_atoms_[n] : right_atoms_[n];
}

double SigmaFiniteTailMeasure::density(const TailPoint& x) const {
  if (nu_.is_discrete()) {
    throw Error(ErrorCode::kMixedVariant, "density requested from a discrete measure");
  }
  const StepDensity& d = nu_.step();
  const CellIndex cell = locate_cell(x, c_);
  if (cell.side == Side::kCore) return d.density(x.to_real());
  cell_mass(cell);
  const int n = cell.depth;
  if (cell.side == Side::kLeft) {
    return std::ldexp(d.density(std::ldexp(x.value, n - 1)), n);
  }
  return std::ldexp(d.density(1.0 - std::ldexp(x.value, n - 1)), n);
}

namespace {

double preimage_mass(const PiecewiseLinearMap& f, const SigmaFiniteTailMeasure& mu,
                     const Interval& a) {
  double total = 0.0;
  for (const AffinePiece& p : f.pieces()) {
    const double lo = p.lo.to_double();
    const double hi = p.hi.to_double();
    const double s = p.slope.to_double();
    const double t = p.intercept.to_double();
    double u = 0.0;
    double v = 0.0;
    if (s == 0.0) {
      if (!(t >= a.lo && t < a.hi)) continue;
      u = lo;
      v = hi;
    } else if (s > 0.0) {
      u = std::max(lo, (a.lo - t) / s);
      v = std::min(hi, (a.hi - t) / s);
    } else {
      u = std::max(lo, (a.hi - t) / s);
      v = std::min(hi, (a.lo - t) / s);
    }
    if (u < v) total += mu.mass(u, v);
  }
  return total;
}

}  // namespace

double mu_T_invariance_residual(const RandomSystem& system,
                                const SigmaFiniteTailMeasure& mu,
                                std::span<const Interval> test_sets) {
  const double margin = std::ldexp(mu.c(), -(mu.depth() - 1));
  double worst = 0.0;
  for (const Interval& a : test_sets) {
    if (!(a.lo < a.hi)) continue;
    if (a.lo < margin || 1.0 - a.hi < margin) {
      throw Error(ErrorCode::kTruncationEscape,
                  "test set [" + std::to_string(a.lo) + ", " + std::to_string(a.hi) +
                      ") is not within depth - 1 levels");
    }
    const double pulled =
        0.5 * preimage_mass(system.f0, mu, a) + 0.5 * preimage_mass(system.f1, mu, a);
    worst = std::max(worst, std::abs(pulled - mu.mass(a.lo, a.hi)));
  }
  return worst;
}

// ---------------------------------------------------------------- Text

std::string measure_to_text(const CoreMeasure& m) {
  nlohmann::json j;
  if (m.is_discrete()) {
    j["variant"] = "discrete";
    nlohmann::json atoms = nlohmann::json::array();
    for (const Atom& a : m.discrete().atoms()) atoms.push_back({a.position, a.weight});
    j["atoms"] = std::move(atoms);
  } else {
    const StepDensity& d = m.step();
    j["variant"] = "step";
    j["lo"] = d.lo();
    j["hi"] = d.hi();
    j["grid_size"] = d.grid_size();
    j["values"] = d.values();
  }
  j["mass"] = m.total_mass();
  return j.dump(2);
}

CoreMeasure measure_from_text(std::string_view text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    const std::string variant = j.at("variant").get<std::string>();
    if (variant == "discrete") {
      std::vector<Atom> atoms;
      for (const auto& a : j.at("atoms")) {
        atoms.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
      }
      return CoreMeasure(DiscreteMeasure(std::move(atoms)));
    }
    if (variant == "step") {
      auto values = j.at("values").get<std::vector<double>>();
      if (j.contains("grid_size") && j.at("grid_size").get<std::size_t>() != values.size()) {
        throw Error(ErrorCode::kConfig, "grid_size does not match the number of values");
      }
      return CoreMeasure(
          StepDensity(j.at("lo").get<double>(), j.at("hi").get<double>(), std::move(values)));
    }
    throw Error(ErrorCode::kConfig, "unknown measure variant '" + variant + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("malformed measure: ") + e.what());
  }
}

}  // namespace arclaw
