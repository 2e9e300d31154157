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

// First passage of the symmetric simple random walk that drives tail
// excursions, and the coefficients and wandering rates built from it.

#ifndef ARCLAW_RANDOMWALK_HPP_
#define ARCLAW_RANDOMWALK_HPP_

#include <cstddef>
#include <vector>

namespace arclaw {

class SigmaFiniteTailMeasure;

/// P[k][n]: probability that the walk started k levels above its target
/// first reaches it at step n. Stored as a triangle (zero for k > n), so
/// memory grows like max_n^2 / 2.
class HittingTable {
 public:
  explicit HittingTable(int max_n);

  int max_n() const { return max_n_; }
  /// Zero outside 1 <= k, n <= max_n and whenever n < k or n - k is odd.
  double operator()(int k, int n) const;

 private:
  int max_n_;
  std::vector<std::size_t> row_start_;  // row n holds k = 0..n
  std::vector<double> probs_;
};

/// Single entry, by a forward sweep over walk positions.
double first_hit_prob(int k, int n);

/// dist[n] = P[k][n] for n = 0..max_n.
std::vector<double> first_passage_distribution(int k, int max_n);

enum class CoefficientMethod {
  /// Mass absorbed at each step when every level k >= 1 starts with unit
  /// mass: c_n summed over k by one sweep. O(max_n^2).
  kDynamicProgram,
  /// c_n = P(walk stays strictly below its start for n steps), which obeys
  /// c_{2m+1} = c_{2m}, c_{2m+2} = c_{2m} (2m+1)/(2m+2). O(max_n).
  kLadderRecurrence,
};

struct WalkCoefficients {
  int max_n = 0;
  std::vector<double> c;           // c[0] = 0
  std::vector<double> cumulative;  // cumulative[N] = c[1] + ... + c[N]
};

WalkCoefficients coefficients(int max_n,
                              CoefficientMethod method = CoefficientMethod::kDynamicProgram);

/// |sum_{n <= n_max} s^n P[k][n] - ((1 - sqrt(1 - s^2)) / s)^k|.
double generating_residual(double s, int k, int n_max);
double generating_residual(const HittingTable& table, double s, int k);

/// C[N] / (sqrt(2/pi) sqrt(N)).
double karamata_ratio(const WalkCoefficients& coeffs, int n);
double karamata_ratio(int n, CoefficientMethod method = CoefficientMethod::kDynamicProgram);

struct TailMasses {
  double mu_y = 0.0;
  double mu_left1 = 0.0;
  double mu_right1 = 0.0;
};

TailMasses tail_masses(const SigmaFiniteTailMeasure& mu);

struct WanderingRates {
  int n = 0;
  double mu_y = 0.0;
  double mu_left1 = 0.0;
  double mu_right1 = 0.0;
  double w_n = 0.0;
  double w_n_minus = 0.0;
  double ratio = 0.0;
  double a_n = 0.0;
};

/// Needs coeffs.max_n >= n - 1.
WanderingRates wandering(int n, const TailMasses& masses, const WalkCoefficients& coeffs);
WanderingRates wandering(int n, const SigmaFiniteTailMeasure& mu,
                         const WalkCoefficients& coeffs);

}  // namespace arclaw

#endif  // ARCLAW_RANDOMWALK_HPP_
