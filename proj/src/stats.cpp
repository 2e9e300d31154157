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

#include "arclaw/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

#include "arclaw/errors.hpp"

namespace arclaw {

LampertiLaw::LampertiLaw(double b) : b_(b) {
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw Error(ErrorCode::kInvalidArgument, "Lamperti parameter b must be positive");
  }
}

LampertiLaw upper_half_law(double b) {
  if (!(b > 0.0)) throw Error(ErrorCode::kInvalidArgument, "b must be positive");
  return LampertiLaw(1.0 / b);
}

double lamperti_density(const LampertiLaw& law, double x) {
  if (!(x > 0.0 && x < 1.0)) return 0.0;
  const double b = law.b();
  return b / (std::numbers::pi * std::sqrt(x * (1.0 - x)) * (b * b * x + (1.0 - x)));
}

double lamperti_cdf(const LampertiLaw& law, double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "Lamperti CDF argument " + std::to_string(x) + " outside [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  return 2.0 / std::numbers::pi * std::atan(law.b() * std::sqrt(x / (1.0 - x)));
}

double half_normal_cdf(double scale, double x) {
  if (!(scale > 0.0)) throw Error(ErrorCode::kInvalidArgument, "scale must be positive");
  if (!(x > 0.0)) return 0.0;
  return std::erf(x / (scale * std::numbers::sqrt2));
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples)
    : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw Error(ErrorCode::kInvalidArgument, "empty sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalDistribution::cdf(double x) const {
  const auto at = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(at - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double ks_distance(const EmpiricalDistribution& samples,
                   const std::function<double(double)>& cdf) {
  const auto& xs = samples.sorted();
  const auto m = static_cast<double>(xs.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    const double above = static_cast<double>(i + 1) / m;
    const double below = static_cast<double>(i) / m;
    worst = std::max({worst, std::abs(above - f), std::abs(below - f)});
  }
  return worst;
}

void write_ecdf_csv(std::ostream& out, const EmpiricalDistribution& samples,
                    const std::function<double(double)>& cdf) {
  out << "x,empirical_cdf,model_cdf\n";
  char buf[96];
  for (double x : samples.sorted()) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", x, samples.cdf(x), cdf(x));
    out << buf;
  }
}

}  // namespace arclaw
