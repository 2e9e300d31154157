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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "arclaw/errors.hpp"
#include "arclaw/montecarlo.hpp"
#include "arclaw/rng.hpp"
#include "fixtures.hpp"

using namespace arclaw;

namespace {

CoreMeasure gen_hy_nu() { return CoreMeasure::from_atoms({{7.0 / 16, 0.5}, {23.0 / 32, 0.5}}); }
CoreMeasure pl_gh_nu() { return CoreMeasure::from_atoms({{0.25, 0.5}, {0.5, 0.5}}); }

SimulationConfig config_for(CoreMeasure initial, long steps, long trajectories,
                            std::uint64_t seed) {
  return SimulationConfig{.steps = steps,
                          .trajectories = trajectories,
                          .seed = seed,
                          .initial = std::move(initial)};
}

// Plain iteration with no rescaling, for orbits that stay shallow.
long reference_count(const RandomSystem& s, TailPoint x, long steps, RandomStream& symbols) {
  long count = 0;
  for (long n = 0; n < steps; ++n) {
    if (x.upper_half()) ++count;
    x = s.map(symbols.bit())(x);
  }
  return count;
}

}  // namespace

TEST_CASE("random streams") {
  RandomStream a(1, 0, StreamPurpose::kSymbols);
  RandomStream b(1, 0, StreamPurpose::kSymbols);
  RandomStream other_index(1, 1, StreamPurpose::kSymbols);
  RandomStream other_purpose(1, 0, StreamPurpose::kInitial);
  const std::uint64_t first = a.next();
  CHECK(first == b.next());
  CHECK(first != other_index.next());
  CHECK(first != other_purpose.next());

  SUBCASE("uniform() passes a chi-square smoke test") {
    RandomStream s(2024, 7, StreamPurpose::kInitial);
    constexpr int kBins = 16;
    constexpr int kDraws = 1 << 20;
    std::vector<long> hist(kBins, 0);
    double sum = 0.0;
    for (int i = 0; i < kDraws; ++i) {
      const double u = s.uniform();
      REQUIRE(u >= 0.0);
      REQUIRE(u < 1.0);
      sum += u;
      ++hist[static_cast<std::size_t>(u * kBins)];
    }
    const double expected = static_cast<double>(kDraws) / kBins;
    double chi2 = 0.0;
    for (long h : hist) chi2 += (h - expected) * (h - expected) / expected;
    CHECK(chi2 < 37.7);  // 99.9% point of chi-square with 15 degrees of freedom
    CHECK(std::abs(sum / kDraws - 0.5) < 5 * std::sqrt(1.0 / 12 / kDraws));
  }
  SUBCASE("bits are fair and serially uncorrelated") {
    RandomStream s(99, 3, StreamPurpose::kSymbols);
    constexpr long kDraws = 1 << 22;
    long ones = 0;
    long same = 0;
    int prev = s.bit();
    for (long i = 0; i < kDraws; ++i) {
      const int bit = s.bit();
      ones += bit;
      same += bit == prev ? 1 : 0;
      prev = bit;
    }
    const double sigma = std::sqrt(kDraws * 0.25);
    CHECK(std::abs(ones - kDraws / 2.0) < 5 * sigma);
    CHECK(std::abs(same - kDraws / 2.0) < 5 * sigma);
  }
}

TEST_CASE("draw_initial") {
  const CoreMeasure law = gen_hy_nu();
  RandomStream s(5, 0, StreamPurpose::kInitial);
  long low = 0;
  constexpr long kDraws = 100000;
  for (long i = 0; i < kDraws; ++i) {
    const double x = draw_initial(law, s).to_real();
    REQUIRE((x == 7.0 / 16 || x == 23.0 / 32));
    low += x == 7.0 / 16 ? 1 : 0;
  }
  CHECK(std::abs(low - kDraws / 2.0) < 3 * std::sqrt(kDraws * 0.25));

  RandomStream r1(8, 4, StreamPurpose::kInitial);
  RandomStream r2(8, 4, StreamPurpose::kInitial);
  CHECK(draw_initial(law, r1) == draw_initial(law, r2));

  const CoreMeasure step(StepDensity(0.25, 0.75, {8.0 / 3, 4.0 / 3}));
  long left = 0;
  for (long i = 0; i < kDraws; ++i) {
    const double x = draw_initial(step, s).to_real();
    REQUIRE(x >= 0.25);
    REQUIRE(x < 0.75);
    left += x < 0.5 ? 1 : 0;
  }
  CHECK(std::abs(left - kDraws * 2.0 / 3) < 3 * std::sqrt(kDraws * 2.0 / 9));
  CHECK_THROWS(draw_initial(CoreMeasure(StepDensity(0.25, 0.75, {0.0})), s));
}

TEST_CASE("run_trajectory with forced symbols") {
  const RandomSystem s = fixture::gen_hy("1/8");
  const std::vector<int> zeros{0, 0};
  const TrajectoryResult a = run_trajectory(s, TailPoint::from_real(7.0 / 16), zeros);
  CHECK(a.count == 0);
  CHECK(a.endpoint.to_real() == 7.0 / 64);
  const std::vector<int> ones{1, 1};
  const TrajectoryResult b = run_trajectory(s, TailPoint::from_real(23.0 / 32), ones);
  CHECK(b.count == 2);
  CHECK(b.endpoint.to_real() == 119.0 / 128);
  const std::vector<int> one{1};
  CHECK(run_trajectory(s, TailPoint::from_real(0.5), one).count == 1);
  CHECK(run_trajectory(s, TailPoint::from_real(0.25), one).count == 0);
  // 1/2 is a visit to a breakpoint.
  CHECK(run_trajectory(s, TailPoint::from_real(0.5), one).breakpoint_hits == 1);
  CHECK(run_trajectory(s, TailPoint::from_real(7.0 / 16), zeros).breakpoint_hits == 0);
}

TEST_CASE("rescaled deep excursions reproduce plain iteration") {
  for (const RandomSystem& s : {fixture::gen_hy("1/8"), fixture::pl_gh("1/2")}) {
    for (std::uint64_t i = 0; i < 40; ++i) {
      RandomStream sym1(17, i, StreamPurpose::kSymbols);
      RandomStream sym2(17, i, StreamPurpose::kSymbols);
      const TailPoint x0 = TailPoint::from_real(7.0 / 16);
      const TrajectoryResult r = run_trajectory(s, x0, 100000, sym1);
      CHECK(r.count == reference_count(s, x0, 100000, sym2));
    }
  }
}

TEST_CASE("tail excursions return bit-identically") {
  for (const RandomSystem& s : {fixture::gen_hy("1/8"), fixture::pl_gh("1/2"), fixture::skewed()}) {
    const double c = s.c.to_double();
    RandomStream sym(3, 0, StreamPurpose::kSymbols);
    RandomStream init(3, 0, StreamPurpose::kInitial);
    TailPoint x = TailPoint::from_real(c / 2 + init.uniform() * (1 - c));
    TailPoint entry{};
    bool inside = false;
    long excursions = 0;
    for (int n = 0; n < 200000; ++n) {
      const CellIndex before = locate_cell(x, c);
      const TailPoint next = s.map(sym.bit())(x);
      const CellIndex after = locate_cell(next, c);
      if (!inside && before.side != Side::kCore && before.depth == 1 && after.depth == 2) {
        inside = true;
        entry = x;
      } else if (inside && after.depth == 1 && after.side != Side::kCore) {
        CHECK(next == entry);
        inside = false;
        ++excursions;
      }
      x = next;
    }
    CHECK(excursions > 100);
  }
}

TEST_CASE("walk consistency") {
  const RandomSystem g = fixture::gen_hy("1/8");
  const std::vector<int> zero{0};
  CHECK(locate_cell(TailPoint::from_real(7.0 / 64), 0.5) == CellIndex{Side::kLeft, 3});
  CHECK(walk_consistency(g, TailPoint::from_real(7.0 / 64), zero));
  CHECK(locate_cell(g.f0(TailPoint::from_real(7.0 / 64)), 0.5) == CellIndex{Side::kLeft, 4});
  const std::vector<int> one{1};
  CHECK(walk_consistency(g, TailPoint::from_real(0.4), one));
  CHECK(walk_consistency(g, TailPoint::from_real(0.6), zero));

  for (const RandomSystem& s : {fixture::gen_hy("1/8"), fixture::pl_gh("1/2"), fixture::skewed()}) {
    for (std::uint64_t i = 0; i < 5; ++i) {
      RandomStream sym(42, i, StreamPurpose::kSymbols);
      std::vector<int> symbols(10000);
      for (int& b : symbols) b = sym.bit();
      CHECK(walk_consistency(s, TailPoint::from_real(7.0 / 16), symbols));
    }
  }
}

TEST_CASE("occupation ensembles") {
  const RandomSystem s = fixture::gen_hy("1/8");
  const CoreSystem core = fixture::core_of(s);

  SUBCASE("values are occupation fractions") {
    const OccupationSamples out = occupation_ensemble(s, core, config_for(gen_hy_nu(), 1000, 64, 1));
    REQUIRE(out.values.size() == 64);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
      CHECK(out.values[i] >= 0.0);
      CHECK(out.values[i] <= 1.0);
      CHECK(out.values[i] == static_cast<double>(out.counts[i]) / 1000.0);
    }
  }
  SUBCASE("identical across thread counts") {
    for (const CoreMeasure& law :
         {gen_hy_nu(), CoreMeasure(StepDensity(0.25, 0.75, {1.0, 3.0}))}) {
      SimulationConfig one = config_for(law, 5000, 37, 9);
      one.threads = 1;
      SimulationConfig many = one;
      many.threads = 4;
      CHECK(occupation_ensemble(s, core, one).counts ==
            occupation_ensemble(s, core, many).counts);
    }
  }
  SUBCASE("antithetic runs mirror every count") {
    for (const char* delta : {"1/8", "1/16", "1/6"}) {
      const RandomSystem g = fixture::gen_hy(delta);
      const CoreSystem gc = fixture::core_of(g);
      // Continuous starts elsewhere: a coarse dyadic atom would eventually land
      // on a breakpoint exactly.
      const CoreMeasure law =
          std::string(delta) == "1/8" ? gen_hy_nu() : CoreMeasure::uniform(gc, 64);
      SimulationConfig plain = config_for(law, 20000, 50, 77);
      plain.count_breakpoints = true;
      SimulationConfig mirror = plain;
      mirror.antithetic = true;
      const OccupationSamples a = occupation_ensemble(g, gc, plain);
      const OccupationSamples b = occupation_ensemble(g, gc, mirror);
      CHECK(a.breakpoint_hits == 0);
      CHECK(b.breakpoint_hits == 0);
      std::vector<long> left = a.counts;
      std::vector<long> right;
      for (std::size_t i = 0; i < a.counts.size(); ++i) {
        CHECK(a.counts[i] + b.counts[i] == 20000);
        right.push_back(20000 - b.counts[i]);
      }
      std::sort(left.begin(), left.end());
      std::sort(right.begin(), right.end());
      CHECK(left == right);
    }
  }
  SUBCASE("initial law must live on Y") {
    CHECK_THROWS(occupation_ensemble(s, core, config_for(CoreMeasure::from_atoms({{0.1, 1.0}}), 10, 2, 0)));
  }
}

TEST_CASE("darling-kac ensembles") {
  const RandomSystem s = fixture::pl_gh("1/2");
  const CoreSystem core = fixture::core_of(s);
  const SigmaFiniteTailMeasure mu = extend_mu(pl_gh_nu(), 60, s);
  const DarlingKacSamples y =
      darling_kac_ensemble(s, core, config_for(pl_gh_nu(), 10000, 40, 3), {0.25, 0.75}, mu);
  CHECK(y.mu_e == 2.0);
  CHECK(y.mu_e0 == 2.0);
  CHECK(y.scale == 2.0);
  for (double v : y.values) {
    CHECK(v >= 0.0);
    CHECK(v <= 100.0);
  }
  const DarlingKacSamples left =
      darling_kac_ensemble(s, core, config_for(pl_gh_nu(), 100, 4, 3), {0.25, 0.5}, mu);
  CHECK(left.scale == 1.0);
  CHECK_THROWS(darling_kac_ensemble(s, core, config_for(pl_gh_nu(), 10, 2, 3), {0.1, 0.5}, mu));
  CHECK_THROWS(darling_kac_ensemble(s, core, config_for(pl_gh_nu(), 10, 2, 3), {0.3, 0.3}, mu));
  CHECK_THROWS(darling_kac_ensemble(s, core, config_for(pl_gh_nu(), 10, 2, 3), {0.3, 0.45}, mu));
}

TEST_CASE("core orbit side frequencies") {
  const CoreSystem core = fixture::core_of(fixture::skewed());
  const CoreMeasure nu(StepDensity(0.25, 0.75, {8.0 / 3, 4.0 / 3}));
  const SideFrequencies f = core_orbit_frequencies(core, nu, 1000000, 5);
  CHECK(f.core == 0);
  CHECK(f.left + f.right == 1000000);
  CHECK(std::abs(f.left_fraction() - 2.0 / 3) < 0.01);
}

TEST_CASE("samples csv") {
  std::ostringstream out;
  write_samples_csv(out, "abc", 7, 100, 2, "A_N", {0.25, 0.5});
  CHECK(out.str() == "# config_hash=abc seed=7 N=100 M=2\nindex,A_N\n0,0.25\n1,0.5\n");
  CHECK(resolve_threads(3) == 3);
  CHECK(resolve_threads(0) >= 1);
}
