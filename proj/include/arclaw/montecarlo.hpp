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

// Skew-product simulation: fair i.i.d. symbols drive f0 / f1, and ensembles
// of trajectories record occupation times.

#ifndef ARCLAW_MONTECARLO_HPP_
#define ARCLAW_MONTECARLO_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "arclaw/measures.hpp"
#include "arclaw/rng.hpp"
#include "arclaw/systems.hpp"

namespace arclaw {

/// Which points count as occupied. kUpperHalf is x >= 1/2 (so x = 1/2
/// counts); kInterval is lo <= x < hi.
struct Region {
  enum class Kind { kUpperHalf, kInterval };
  Kind kind = Kind::kUpperHalf;
  double lo = 0.5;
  double hi = 1.0;

  static Region upper_half() { return {}; }
  static Region interval(double lo, double hi) { return {Kind::kInterval, lo, hi}; }
};

struct SimulationConfig {
  long steps = 1;
  long trajectories = 1;
  std::uint64_t seed = 0;
  CoreMeasure initial;
  Region region = Region::upper_half();
  /// Flip every symbol and reflect every start (x -> 1 - x).
  bool antithetic = false;
  /// Count visits to breakpoints of f0, f1 and to 1/2.
  bool count_breakpoints = false;
  /// 0: ARCLAW_THREADS if set, else hardware concurrency.
  int threads = 0;
};

/// A trajectory state that survives arbitrarily deep tail excursions.
///
/// The represented point is `point` with its stored value scaled by
/// 2^-shift. Tail branches are exact scalings, so a deep point can be kept
/// at a comfortable exponent and rescaled on the way back. `deficit` counts
/// low-order bits that the true (continuously distributed) point has but
/// the stored double does not yet carry.
struct OrbitState {
  TailPoint point;
  long shift = 0;
  int deficit = 0;

  TailPoint tail_point() const;
};

struct TrajectoryResult {
  long count = 0;
  TailPoint endpoint;
  long breakpoint_hits = 0;
};

/// Discrete laws via cumulative weights, step densities via the cell CDF
/// and a uniform position within the cell.
TailPoint draw_initial(const CoreMeasure& law, RandomStream& stream);

/// Occupation count of x >= 1/2 over x_0 .. x_{N-1} with fair random symbols.
TrajectoryResult run_trajectory(const RandomSystem& system, TailPoint x0, long steps,
                                RandomStream& symbols);

/// Same with an explicit symbol list (steps = symbols.size()).
TrajectoryResult run_trajectory(const RandomSystem& system, TailPoint x0,
                                std::span<const int> symbols, Region region = {});

/// Full-control variant used by the ensembles. When `refine` is set, bits
/// lost by expanding branches are replenished from `fill`, which keeps
/// orbits of continuously distributed starts from collapsing onto coarse
/// dyadic points.
TrajectoryResult run_trajectory(const RandomSystem& system, TailPoint x0, long steps,
                                RandomStream& symbols, const Region& region, bool flip,
                                bool count_breakpoints, RandomStream* fill);

struct OccupationSamples {
  std::vector<double> values;  // A_N per trajectory
  std::vector<long> counts;
  long breakpoint_hits = 0;
  long steps = 0;
  long trajectories = 0;
  std::uint64_t seed = 0;
};

/// Requires config.initial to live on Y.
OccupationSamples occupation_ensemble(const RandomSystem& system, const CoreSystem& core,
                                      const SimulationConfig& config);

struct DarlingKacSamples {
  std::vector<double> values;  // count / sqrt(N)
  std::vector<long> counts;
  double mu_e = 0.0;
  double mu_e0 = 0.0;
  double scale = 0.0;  // 2 mu(E) / mu(E0)
  long steps = 0;
  long trajectories = 0;
  std::uint64_t seed = 0;
};

DarlingKacSamples darling_kac_ensemble(const RandomSystem& system, const CoreSystem& core,
                                       const SimulationConfig& config, Interval target,
                                       const SigmaFiniteTailMeasure& mu);

/// Along the forced orbit, every step taken from a tail cell of depth >= 2
/// must move the depth by one in the direction fixed by the symbol.
bool walk_consistency(const RandomSystem& system, TailPoint x0, std::span<const int> symbols);

struct SideFrequencies {
  long left = 0;   // visits to I1-
  long core = 0;   // visits to I0
  long right = 0;  // visits to I1+
  double left_fraction() const {
    return static_cast<double>(left) / static_cast<double>(left + right);
  }
};

/// Direct orbit of the core system (random symbols when h0 != h1), started
/// from law, with low-bit replenishment for continuous laws.
SideFrequencies core_orbit_frequencies(const CoreSystem& core, const CoreMeasure& law,
                                       long steps, std::uint64_t seed);

int resolve_threads(int requested);

/// CSV with a comment header: "# config_hash=..., seed=..., N=..., M=...".
void write_samples_csv(std::ostream& out, const std::string& config_hash, std::uint64_t seed,
                       long steps, long trajectories, const std::string& column,
                       const std::vector<double>& values);

}  // namespace arclaw

#endif  // ARCLAW_MONTECARLO_HPP_
