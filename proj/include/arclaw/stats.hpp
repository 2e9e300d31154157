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

#ifndef ARCLAW_STATS_HPP_
#define ARCLAW_STATS_HPP_

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

namespace arclaw {

/// Lamperti law with index 1/2 and skew parameter b; b = 1 is the arcsine law.
class LampertiLaw {
 public:
  explicit LampertiLaw(double b);
  double b() const { return b_; }

 private:
  double b_;
};

/// Limit law of the fraction of time spent in [1/2, 1] when the skew
/// parameter b = (1 - beta) / beta weighs the left side: the time spent in
/// [0, 1/2) is Lamperti(b), so the time in [1/2, 1] is Lamperti(1 / b).
LampertiLaw upper_half_law(double b);

/// b / (pi sqrt(x (1 - x)) (b^2 x + 1 - x)) on (0, 1).
double lamperti_density(const LampertiLaw& law, double x);
/// (2/pi) atan(b sqrt(x / (1 - x))).
double lamperti_cdf(const LampertiLaw& law, double x);

/// CDF of scale * |Z| for standard normal Z; zero for x < 0.
double half_normal_cdf(double scale, double x);

class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(std::vector<double> samples);

  const std::vector<double>& sorted() const { return sorted_; }
  std::size_t size() const { return sorted_.size(); }
  /// Fraction of samples <= x.
  double cdf(double x) const;

 private:
  std::vector<double> sorted_;
};

/// One-sample Kolmogorov-Smirnov statistic.
double ks_distance(const EmpiricalDistribution& samples, const std::function<double(double)>& cdf);

/// Rows (x, empirical F(x), model F(x)) at every sample point.
void write_ecdf_csv(std::ostream& out, const EmpiricalDistribution& samples,
                    const std::function<double(double)>& cdf);

}  // namespace arclaw

#endif  // ARCLAW_STATS_HPP_
