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

#include "arclaw/randomwalk.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "arclaw/errors.hpp"
#include "arclaw/measures.hpp"

namespace arclaw {
namespace {

void require_at_least_one(int n, const char* what) {
  if (n < 1) {
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must be at least 1");
  }
}

}  // namespace

HittingTable::HittingTable(int max_n) : max_n_(max_n) {
  require_at_least_one(max_n, "max_n");
  const auto rows = static_cast<std::size_t>(max_n) + 1;
  row_start_.resize(rows + 1);
  row_start_[0] = 0;
  for (std::size_t n = 0; n < rows; ++n) row_start_[n + 1] = row_start_[n] + n + 1;
  probs_.assign(row_start_[rows], 0.0);
  // P_0(0) = 1; P_k(n) = (P_{k+1}(n-1) + P_{k-1}(n-1)) / 2, with P_k(n) = 0
  // for k > n.
  probs_[0] = 1.0;
  for (std::size_t n = 1; n < rows; ++n) {
    const double* prev = probs_.data() + row_start_[n - 1];
    double* cur = probs_.data() + row_start_[n];
    for (std::size_t k = 1; k <= n; ++k) {
      const double up = k + 1 <= n - 1 ? prev[k + 1] : 0.0;
      cur[k] = 0.5 * (up + prev[k - 1]);
    }
  }
}

double HittingTable::operator()(int k, int n) const {
  if (k < 1 || n < 1 || n > max_n_ || k > n) return 0.0;
  return probs_[row_start_[static_cast<std::size_t>(n)] + static_cast<std::size_t>(k)];
}

std::vector<double> first_passage_distribution(int k, int max_n) {
  require_at_least_one(k, "k");
  if (max_n < 0) throw Error(ErrorCode::kInvalidArgument, "max_n must be nonnegative");
  std::vector<double> dist(static_cast<std::size_t>(max_n) + 1, 0.0);
  // Position distribution of the walk killed on reaching 0. Only positions
  // that can still reach 0 by step max_n matter.
  const auto width = static_cast<std::size_t>(k) + static_cast<std::size_t>(max_n) + 2;
  std::vector<double> cur(width, 0.0);
  std::vector<double> next(width, 0.0);
  cur[static_cast<std::size_t>(k)] = 1.0;
  for (int n = 1; n <= max_n; ++n) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t d = 1; d + 1 < width; ++d) {
      const double m = cur[d];
      if (m == 0.0) continue;
      next[d - 1] += 0.5 * m;
      next[d + 1] += 0.5 * m;
    }
    dist[static_cast<std::size_t>(n)] = next[0];
    next[0] = 0.0;
    std::swap(cur, next);
  }
  return dist;
}

double first_hit_prob(int k, int n) {
  if (k < 1 || n < 1 || n < k || (n - k) % 2 != 0) return 0.0;
  return first_passage_distribution(k, n)[static_cast<std::size_t>(n)];
}

WalkCoefficients coefficients(int max_n, CoefficientMethod method) {
  require_at_least_one(max_n, "max_n");
  const auto size = static_cast<std::size_t>(max_n) + 1;
  WalkCoefficients out;
  out.max_n = max_n;
  out.c.assign(size, 0.0);
  out.cumulative.assign(size, 0.0);

  if (method == CoefficientMethod::kLadderRecurrence) {
    out.c[1] = 0.5;
    for (std::size_t n = 2; n < size; ++n) {
      if (n % 2 == 1) {
        out.c[n] = out.c[n - 1];
      } else if (n == 2) {
        out.c[n] = 0.25;
      } else {
        out.c[n] = out.c[n - 2] * static_cast<double>(n - 1) / static_cast<double>(n);
      }
    }
  } else {
    // u[d]: surviving mass at level d; u[0] stays 0 (absorbed mass leaves).
    // c_n = u_{n-1}(1) / 2, and step m only needs levels d <= max_n - m.
    std::vector<double> u(size + 1, 1.0);
    std::vector<double> v(size + 1, 0.0);
    u[0] = 0.0;
    for (std::size_t n = 1; n < size; ++n) {
      out.c[n] = 0.5 * u[1];
      const std::size_t reach = size - n;  // levels 1..reach still matter
      for (std::size_t d = 1; d <= reach; ++d) v[d] = 0.5 * (u[d - 1] + u[d + 1]);
      std::swap(u, v);
      u[0] = 0.0;
    }
  }
  for (std::size_t n = 1; n < size; ++n) out.cumulative[n] = out.cumulative[n - 1] + out.c[n];
  return out;
}

double generating_residual(const HittingTable& table, double s, int k) {
  if (!(s > 0.0 && s < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "s must lie strictly inside (0, 1)");
  }
  require_at_least_one(k, "k");
  double series = 0.0;
  double power = 1.0;
  for (int n = 1; n <= table.max_n(); ++n) {
    power *= s;
    series += power * table(k, n);
  }
  const double root = (1.0 - std::sqrt((1.0 - s) * (1.0 + s))) / s;
  return std::abs(series - std::pow(root, k));
}

double generating_residual(double s, int k, int n_max) {
  return generating_residual(HittingTable(n_max), s, k);
}

double karamata_ratio(const WalkCoefficients& coeffs, int n) {
  require_at_least_one(n, "N");
  if (n > coeffs.max_n) throw Error(ErrorCode::kInvalidArgument, "N exceeds the table");
  const double asymptote = std::sqrt(2.0 / std::numbers::pi) * std::sqrt(static_cast<double>(n));
  return coeffs.cumulative[static_cast<std::size_t>(n)] / asymptote;
}

double karamata_ratio(int n, CoefficientMethod method) {
  return karamata_ratio(coefficients(n, method), n);
}

TailMasses tail_masses(const SigmaFiniteTailMeasure& mu) {
  return {mu.mass_y(), mu.mass_left1(), mu.mass_right1()};
}

WanderingRates wandering(int n, const TailMasses& masses, const WalkCoefficients& coeffs) {
  require_at_least_one(n, "N");
  if (n - 1 > coeffs.max_n) throw Error(ErrorCode::kInvalidArgument, "N exceeds the table");
  const double prior = coeffs.cumulative[static_cast<std::size_t>(n - 1)];
  WanderingRates r;
  r.n = n;
  r.mu_y = masses.mu_y;
  r.mu_left1 = masses.mu_left1;
  r.mu_right1 = masses.mu_right1;
  r.w_n = masses.mu_y + (masses.mu_left1 + masses.mu_right1) * prior;
  r.w_n_minus = 0.5 * masses.mu_left1 + masses.mu_left1 * prior;
  r.ratio = r.w_n_minus / r.w_n;
  r.a_n = 4.0 / std::numbers::pi * static_cast<double>(n) / r.w_n;
  return r;
}

WanderingRates wandering(int n, const SigmaFiniteTailMeasure& mu,
                         const WalkCoefficients& coeffs) {
  return wandering(n, tail_masses(mu), coeffs);
}

}  // namespace arclaw
