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

#ifndef ARCLAW_MEASURES_HPP_
#define ARCLAW_MEASURES_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "arclaw/systems.hpp"

namespace arclaw {

/// Half-open interval [lo, hi) of [0, 1].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct Atom {
  double position = 0.0;
  double weight = 0.0;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Finite sum of point masses. Atoms are kept sorted; atoms at exactly the
/// same position are merged.
class DiscreteMeasure {
 public:
  explicit DiscreteMeasure(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  double total_mass() const;
  /// Mass of [lo, hi).
  double mass(double lo, double hi) const;
  /// Mass of {x : 1 - x in (dlo, dhi]}, evaluated in distance-from-one
  /// coordinates so that right-tail queries stay exact.
  double mass_from_one(double dlo, double dhi) const;

 private:
  std::vector<Atom> atoms_;
};

/// Piecewise-constant density on a uniform grid of [lo, hi).
class StepDensity {
 public:
  StepDensity(double lo, double hi, std::vector<double> values);

  std::size_t grid_size() const { return values_.size(); }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double cell_width() const { return width_; }
  double cell_lo(std::size_t i) const { return lo_ + static_cast<double>(i) * width_; }
  const std::vector<double>& values() const { return values_; }

  double total_mass() const;
  double mass(double lo, double hi) const;
  double mass_from_one(double dlo, double dhi) const;
  /// Density at x; zero outside [lo, hi).
  double density(double x) const;
  /// Index of the cell containing x (clamped to the grid).
  std::size_t cell_of(double x) const;

 private:
  double lo_;
  double hi_;
  double width_;
  std::vector<double> values_;
};

/// A finite measure on Y: either atoms or a step density.
class CoreMeasure {
 public:
  CoreMeasure(DiscreteMeasure m) : repr_(std::move(m)) {}  // NOLINT
  CoreMeasure(StepDensity m) : repr_(std::move(m)) {}      // NOLINT

  static CoreMeasure from_atoms(std::vector<Atom> atoms);
  /// Uniform probability density on Y with the given number of cells.
  static CoreMeasure uniform(const CoreSystem& core, std::size_t grid_size);

  bool is_discrete() const { return std::holds_alternative<DiscreteMeasure>(repr_); }
  const DiscreteMeasure& discrete() const { return std::get<DiscreteMeasure>(repr_); }
  const StepDensity& step() const { return std::get<StepDensity>(repr_); }

  double total_mass() const;
  double mass(double lo, double hi) const;
  double mass_from_one(double dlo, double dhi) const;

  CoreMeasure scaled(double factor) const;
  CoreMeasure normalized() const;

 private:
  std::variant<DiscreteMeasure, StepDensity> repr_;
};

/// Annealed Ulam transition matrix of a core system on a uniform grid of Y.
///
/// Row i lists where the mass of grid cell i goes under (h0_* + h1_*)/2,
/// assuming mass is spread uniformly within the cell. Entries of a row sum
/// to one.
class TransferMatrix {
 public:
  static TransferMatrix assemble(const CoreSystem& core, std::size_t grid_size);

  std::size_t size() const { return offsets_.size() - 1; }
  /// Cell masses in, cell masses out.
  std::vector<double> apply(std::span<const double> masses) const;
  double weight(std::size_t from, std::size_t to) const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> targets_;
  std::vector<double> weights_;
};

/// True when the cell boundaries c and 1 - c are grid points of a uniform
/// grid of Y with grid_size cells.
bool grid_aligned(const CoreSystem& core, std::size_t grid_size);

CoreMeasure annealed_push(const CoreSystem& core, const CoreMeasure& m);

/// Total variation for atoms, L1 distance of the step densities for grids.
/// Throws kMixedVariant for unlike representations.
double measure_distance(const CoreMeasure& a, const CoreMeasure& b);

double invariance_residual(const CoreSystem& core, const CoreMeasure& m);

struct UlamStats {
  long iterations = 0;
  double residual = 0.0;
};

/// Power iteration of the annealed transition matrix from the uniform
/// density. Throws NonConvergence when max_iters is exhausted.
CoreMeasure ulam_fixed_density(const CoreSystem& core, std::size_t grid_size,
                               double tol = 1e-10, long max_iters = 100000,
                               UlamStats* stats = nullptr);

struct BetaB {
  double beta = 0.0;
  double b = 0.0;
  double left_mass = 0.0;   // nu(I1-)
  double right_mass = 0.0;  // nu(I1+)
};

/// Throws kZeroSideMass when nu(I1-) nu(I1+) = 0.
BetaB beta_b(const CoreMeasure& nu, double c);

/// The sigma-finite extension of a core-invariant measure over the tail
/// cells, truncated at a maximal depth.
class SigmaFiniteTailMeasure {
 public:
  const CoreMeasure& nu() const { return nu_; }
  int depth() const { return depth_; }
  double c() const { return c_; }

  /// Materialized mass of a cell up to the truncation depth.
  double cell_mass(const CellIndex& cell) const;
  /// mu([lo, hi)); throws kTruncationEscape if the interval reaches cells
  /// deeper than depth().
  double mass(double lo, double hi) const;

  double mass_y() const;
  double mass_left1() const { return cell_mass({Side::kLeft, 1}); }
  double mass_right1() const { return cell_mass({Side::kRight, 1}); }
  double mass_core() const { return core_mass_; }

  /// Transported atoms lying in a cell (discrete nu only).
  std::vector<std::pair<TailPoint, double>> atoms(const CellIndex& cell) const;
  /// Density of mu at x (step-density nu only).
  double density(const TailPoint& x) const;

 private:
  friend SigmaFiniteTailMeasure extend_mu(const CoreMeasure&, int, const RandomSystem&);

  SigmaFiniteTailMeasure(CoreMeasure nu, int depth, double c)
      : nu_(std::move(nu)), depth_(depth), c_(c) {}

  CoreMeasure nu_;
  int depth_;
  double c_;
  std::vector<double> left_;   // left_[n] = mu(I_n^-), n = 1..depth
  std::vector<double> right_;  // right_[n] = mu(I_n^+)
  double core_mass_ = 0.0;
  std::vector<std::vector<std::pair<TailPoint, double>>> left_atoms_;
  std::vector<std::vector<std::pair<TailPoint, double>>> right_atoms_;
};

SigmaFiniteTailMeasure extend_mu(const CoreMeasure& nu, int depth,
                                 const RandomSystem& system);

/// max over A of |mu(f0^-1 A)/2 + mu(f1^-1 A)/2 - mu(A)|. Test sets must
/// lie within depth - 1 levels.
double mu_T_invariance_residual(const RandomSystem& system,
                                const SigmaFiniteTailMeasure& mu,
                                std::span<const Interval> test_sets);

/// JSON text: {"variant": "discrete", "atoms": [[x, w], ...], "mass": m} or
/// {"variant": "step", "lo": a, "hi": b, "grid_size": n, "values": [...],
/// "mass": m}. Doubles round-trip exactly.
std::string measure_to_text(const CoreMeasure& m);
CoreMeasure measure_from_text(std::string_view text);

}  // namespace arclaw

#endif  // ARCLAW_MEASURES_HPP_
