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

#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace arclaw::oracle {

std::uint64_t enumerate_first_hits(int k, int n) {
  if (n < 0 || n > 30) throw std::invalid_argument("enumeration limited to n <= 30");
  std::uint64_t hits = 0;
  for (std::uint64_t path = 0; path < (std::uint64_t{1} << n); ++path) {
    int height = k;
    int first = -1;
    for (int step = 0; step < n; ++step) {
      height += ((path >> step) & 1U) != 0 ? 1 : -1;
      if (height == 0) {
        first = step + 1;
        break;
      }
    }
    if (first == n) ++hits;
  }
  return hits;
}

u128 count_first_hits(int k, int n) {
  if (k < 1 || n < 1) return 0;
  if (n > 120) throw std::invalid_argument("count_first_hits limited to n <= 120");
  // paths[h]: number of paths at height h that have not touched 0 yet.
  std::vector<u128> paths(static_cast<std::size_t>(k + n + 2), 0);
  paths[static_cast<std::size_t>(k)] = 1;
  for (int step = 1; step <= n; ++step) {
    std::vector<u128> next(paths.size(), 0);
    for (std::size_t h = 1; h + 1 < paths.size(); ++h) {
      next[h - 1] += paths[h];
      next[h + 1] += paths[h];
    }
    if (step == n) return next[0];
    next[0] = 0;
    paths.swap(next);
  }
  return 0;
}

u128 coefficient_numerator(int n) {
  u128 total = 0;
  for (int k = 1; k <= n; ++k) total += count_first_hits(k, n);
  return total;
}

double dyadic_to_double(u128 count, int n) {
  // Exact whenever dyadic_exact(count, n) holds.
  const auto high = static_cast<std::uint64_t>(count >> 64);
  const auto low = static_cast<std::uint64_t>(count);
  const long double v =
      std::ldexp(static_cast<long double>(high), 64) + static_cast<long double>(low);
  return static_cast<double>(std::ldexp(v, -n));
}

bool dyadic_exact(u128 count, int n) {
  if (count == 0) return true;
  while ((count & 1U) == 0) {
    count >>= 1;
    --n;
  }
  int bits = 0;
  for (u128 c = count; c != 0; c >>= 1) ++bits;
  return bits <= 53 && n < 1074;
}

std::vector<double> brute_force_transfer(const std::function<double(double)>& h0,
                                         const std::function<double(double)>& h1, double lo,
                                         double hi, int m, int samples) {
  std::vector<double> out(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 0.0);
  const double width = (hi - lo) / m;
  const double share = 0.5 / samples;
  for (int i = 0; i < m; ++i) {
    for (int s = 0; s < samples; ++s) {
      const double x = lo + width * (i + (s + 0.5) / samples);
      for (const auto* h : {&h0, &h1}) {
        const double y = (*h)(x);
        const int j = static_cast<int>(std::floor((y - lo) / width));
        if (j < 0 || j >= m) throw std::out_of_range("image leaves the grid");
        out[static_cast<std::size_t>(i) * static_cast<std::size_t>(m) +
            static_cast<std::size_t>(j)] += share;
      }
    }
  }
  return out;
}

double lamperti_density(double b, double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double root = std::sqrt(x) * std::sqrt(1.0 - x);
  return b / (std::numbers::pi * root * (b * b * x + 1.0 - x));
}

double lamperti_mass(double b, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  boost::math::quadrature::tanh_sinh<double> integrator;
  // xc is the signed distance to the nearer endpoint; near x = 1 it gives
  // 1 - x without cancellation.
  const auto f = [b, hi](double x, double xc) {
    // x itself may round to 1 while xc still resolves the distance.
    const double one_minus = hi == 1.0 && xc > 0.0 ? xc : 1.0 - x;
    if (x <= 0.0 || one_minus <= 0.0) return 0.0;
    return b / (std::numbers::pi * std::sqrt(x) * std::sqrt(one_minus) * (b * b * x + one_minus));
  };
  return integrator.integrate(f, lo, hi, 1e-13);
}

double levy_distance(const std::function<double(double)>& f,
                     const std::function<double(double)>& g, double lo, double hi, int points) {
  const auto fits = [&](double eps) {
    for (int i = 0; i <= points; ++i) {
      const double x = lo + (hi - lo) * i / points;
      const double gx = g(x);
      if (f(x - eps) - eps > gx || gx > f(x + eps) + eps) return false;
    }
    return true;
  };
  double a = 0.0;
  double b = 1.0;
  for (int it = 0; it < 50; ++it) {
    const double mid = 0.5 * (a + b);
    (fits(mid) ? b : a) = mid;
  }
  return b;
}

std::string to_string(u128 value) {
  if (value == 0) return "0";
  std::string s;
  while (value != 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

}  // namespace arclaw::oracle
