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

#include <cmath>
#include <random>
#include <vector>

#include "arclaw/errors.hpp"
#include "arclaw/systems.hpp"
#include "fixtures.hpp"

using namespace arclaw;
using fixture::q;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an arclaw::Error");
  return ErrorCode::kInvalidArgument;
}

double ulp(double x) {
  x = std::abs(x);
  return std::nextafter(x, INFINITY) - x;
}

double eval(const PiecewiseLinearMap& f, double x) { return f(TailPoint::from_real(x)).to_real(); }

std::vector<RandomSystem> example_families() {
  return {fixture::gen_hy("1/8"), fixture::pl_gh("1/2"), fixture::skewed()};
}

}  // namespace

TEST_CASE("rational literals are exact") {
  CHECK(q("7/16") == Rational(7, 16));
  CHECK(q("0.1") == Rational(1, 10));
  CHECK(q("2.5e-1") == Rational(1, 4));
  CHECK(q("-3") == Rational(-3));
  CHECK(q("6/8") == Rational(3, 4));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational::from_double(0.375) == Rational(3, 8));
  CHECK(q("7/16").to_double() == 0.4375);
  CHECK_THROWS(q("1/0"));
  CHECK_THROWS(q("abc"));
}

TEST_CASE("tail points keep the right half as a distance from one") {
  const TailPoint a = TailPoint::from_real(0.75);
  CHECK(a.frame == Frame::kFromOne);
  CHECK(a.value == 0.25);
  CHECK(a.to_real() == 0.75);
  const TailPoint b = TailPoint::from_real(0.25);
  CHECK(b.frame == Frame::kFromZero);
  CHECK(b.reflected().to_real() == 0.75);
  CHECK(TailPoint::from_real(0.5).upper_half());
  // 1 - 2^-80 is not a double, but is a tail point.
  const TailPoint deep = TailPoint::from_one(std::ldexp(1.0, -80));
  CHECK(deep.value == std::ldexp(1.0, -80));
  CHECK(deep.to_real() == 1.0);
}

TEST_CASE("build_system: families and parameter ranges") {
  SUBCASE("gen-hy with delta 0 is the hy pair") {
    const RandomSystem hy = build_system(Family::kHataYano, std::nullopt);
    const RandomSystem g = fixture::gen_hy("0");
    CHECK(g.f0 == hy.f0);
    CHECK(g.f1 == hy.f1);
  }
  SUBCASE("two-branch homeomorphisms are gen-hy with delta 1/6") {
    // The tail branches force the single interior breakpoints 2/3 and 1/3.
    const RandomSystem two = fixture::custom("0,2/3,1/2,0; 2/3,1,2,-1",
                                             "0,1/3,2,0; 1/3,1,1/2,1/2", "1/2");
    const RandomSystem g = fixture::gen_hy("1/6");
    CHECK(two.f0 == g.f0);
    CHECK(two.f1 == g.f1);
  }
  SUBCASE("out of range") {
    CHECK(code_of([] { fixture::gen_hy("0.2"); }) == ErrorCode::kInvalidArgument);
    CHECK(code_of([] { fixture::gen_hy("-1/8"); }) == ErrorCode::kInvalidArgument);
    CHECK(code_of([] { fixture::pl_gh("0"); }) == ErrorCode::kInvalidArgument);
    CHECK(code_of([] { fixture::pl_gh("3/4"); }) == ErrorCode::kInvalidArgument);
  }
  SUBCASE("custom pieces must carry the tail branches") {
    // f0 leaves x/2 at 1/4, but c = 1/2 needs x/2 on all of [0, 1/2).
    CHECK(code_of([] {
            fixture::custom("0,1/4,1/2,0; 1/4,3/4,1,-1/8; 3/4,1,2,-1",
                            "0,1/4,2,0; 1/4,1/2,2,-1/4; 1/2,1,1/2,1/2", "1/2");
          }) == ErrorCode::kStructureMismatch);
  }
  SUBCASE("pieces must tile [0, 1]") {
    CHECK_THROWS(fixture::custom("0,1/2,1/2,0; 5/8,1,2,-1", "0,1/2,2,0; 1/2,1,1/2,1/2", "1/4"));
  }
  SUBCASE("auto core parameter") {
    CHECK(fixture::gen_hy("1/8").c == Rational(1, 2));
    CHECK(fixture::gen_hy("1/16").c == Rational(1, 4));
    CHECK(fixture::gen_hy("1/6").c == Rational(1, 2));
    CHECK(fixture::pl_gh("1/2").c == Rational(1, 2));
    CHECK(fixture::pl_gh("1/4").c == Rational(1, 4));
  }
  CHECK(parse_family("gen_hy") == Family::kGeneralizedHataYano);
  CHECK(parse_family("pl-gh") == Family::kPiecewiseLinearGH);
  CHECK_THROWS(parse_family("tent"));
}

TEST_CASE("evaluate: branch arithmetic") {
  const RandomSystem hy = build_system(Family::kHataYano, std::nullopt);
  CHECK(eval(hy.f0, 0.75) == 0.5);
  CHECK(eval(hy.f1, 0.25) == 0.5);
  const RandomSystem g = fixture::gen_hy("1/8");
  CHECK(eval(g.f1, 7.0 / 16) == 23.0 / 32);
  CHECK(eval(g.f0, 7.0 / 16) == 7.0 / 32);
  CHECK(eval(g.f1, 23.0 / 32) == 55.0 / 64);
  CHECK(eval(g.f0, 1.0) == 1.0);
  CHECK(eval(g.f1, 0.0) == 0.0);
}

TEST_CASE("tile property: evaluation matches the located affine piece") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const RandomSystem& s : example_families()) {
    for (const PiecewiseLinearMap* f : {&s.f0, &s.f1}) {
      for (int i = 0; i < 20000; ++i) {
        const double x = u(rng);
        const std::size_t k = f->piece_index(x);
        REQUIRE(k != PiecewiseLinearMap::npos);
        const AffinePiece& p = f->pieces()[k];
        const double direct = p.slope.to_double() * x + p.intercept.to_double();
        const double got = eval(*f, x);
        CHECK(std::abs(got - direct) <= ulp(direct) + ulp(p.intercept.to_double()));
      }
    }
  }
}

TEST_CASE("tail commutation is bit-exact and transports cells") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const RandomSystem& s : example_families()) {
    const double c = s.c.to_double();
    for (int n = 2; n <= 60; ++n) {
      for (Side side : {Side::kLeft, Side::kRight}) {
        for (int i = 0; i < 50; ++i) {
          // A point of I_n^side in its own frame: distance in [c/2^n, c/2^(n-1)).
          const double d = std::ldexp(c, -n) * (1.0 + u(rng));
          const TailPoint x = side == Side::kLeft ? TailPoint{Frame::kFromZero, d}
                                                  : TailPoint{Frame::kFromOne, d};
          REQUIRE(locate_cell(x, c) == CellIndex{side, n});
          const TailPoint x0 = s.f0(x);
          const TailPoint x1 = s.f1(x);
          CHECK(s.f1(x0) == x);
          CHECK(s.f0(x1) == x);
          const int deeper = n + 1;
          const int shallower = n - 1;
          if (side == Side::kLeft) {
            CHECK(locate_cell(x0, c) == CellIndex{side, deeper});
            CHECK(locate_cell(x1, c) == CellIndex{side, shallower});
          } else {
            CHECK(locate_cell(x1, c) == CellIndex{side, deeper});
            CHECK(locate_cell(x0, c) == CellIndex{side, shallower});
          }
        }
      }
    }
  }
}

TEST_CASE("gen-hy symmetry under x -> 1 - x") {
  for (const char* delta : {"0", "1/16", "1/8", "1/6"}) {
    const RandomSystem s = fixture::gen_hy(delta);
    for (int j = 0; j < 4096; ++j) {
      const TailPoint x = TailPoint::from_real((j + 0.5) / 4096.0);
      if (s.at_breakpoint(x) || s.at_breakpoint(x.reflected())) continue;
      CHECK(s.f1(x) == s.f0(x.reflected()).reflected());
    }
  }
}

TEST_CASE("validate_core") {
  SUBCASE("gen-hy 1/8 at c = 1/2 = 4 delta collapses to one map") {
    const RandomSystem s = fixture::gen_hy("1/8");
    const CoreSystem core = validate_core(s, q("1/2"));
    CHECK(core.deterministic());
    CHECK(core.y_lo() == 0.25);
    CHECK(core.y_hi() == 0.75);
    CHECK(fixture::core_of(s).h0() == core.h0());
  }
  SUBCASE("hy at c = 1/4 escapes Y") {
    const RandomSystem hy = build_system(Family::kHataYano, std::nullopt);
    CHECK(code_of([&] { validate_core(hy, q("1/4")); }) == ErrorCode::kCoreNotInvariant);
  }
  SUBCASE("recipe c works on a grid of 50 deltas in (0, 1/6]") {
    for (int k = 1; k <= 50; ++k) {
      const Rational delta(k, 300);
      const RandomSystem s = build_system(Family::kGeneralizedHataYano, delta);
      CHECK_NOTHROW(validate_core(s, s.c));
    }
  }
  SUBCASE("delta = 0 fails for every c in (0, 1/2]") {
    const RandomSystem hy = fixture::gen_hy("0");
    for (int k = 1; k <= 32; ++k) {
      CHECK(code_of([&] { validate_core(hy, Rational(k, 64)); }) == ErrorCode::kCoreNotInvariant);
    }
  }
  SUBCASE("c outside (0, 1/2]") {
    const RandomSystem s = fixture::gen_hy("1/8");
    CHECK_THROWS(validate_core(s, q("0")));
    CHECK_THROWS(validate_core(s, q("3/4")));
  }
  SUBCASE("h0 uses g1 on I1- and g0 elsewhere; h1 uses g0 only on I1+") {
    const RandomSystem s = fixture::pl_gh("1/4");
    const CoreSystem core = validate_core(s, s.c);  // c = 1/4, I0 = [1/4, 3/4)
    const double left = 0.2;                         // I1- = [1/8, 1/4)
    const double mid = 0.5;
    const double right = 0.8;                        // I1+ = [3/4, 7/8)
    CHECK(core_step(core, 0, left) == eval(s.f1, left));
    CHECK(core_step(core, 0, mid) == eval(s.f0, mid));
    CHECK(core_step(core, 0, right) == eval(s.f0, right));
    CHECK(core_step(core, 1, left) == eval(s.f1, left));
    CHECK(core_step(core, 1, mid) == eval(s.f1, mid));
    CHECK(core_step(core, 1, right) == eval(s.f0, right));
  }
}

TEST_CASE("cells") {
  CHECK(locate_cell(TailPoint::from_real(0.3), 0.5) == CellIndex{Side::kLeft, 1});
  CHECK(locate_cell(TailPoint::from_real(0.1), 0.5) == CellIndex{Side::kLeft, 3});
  CHECK(locate_cell(TailPoint::from_real(0.95), 0.5) == CellIndex{Side::kRight, 4});
  CHECK(locate_cell(TailPoint::from_real(0.5), 0.25).side == Side::kCore);
  CHECK(locate_cell(TailPoint::from_real(0.75), 0.5) == CellIndex{Side::kRight, 2});
  CHECK(code_of([] { locate_cell(TailPoint::from_real(0.0), 0.5); }) ==
        ErrorCode::kDegenerateBoundary);
  CHECK(code_of([] { locate_cell(TailPoint::from_real(1.0), 0.5); }) ==
        ErrorCode::kDegenerateBoundary);

  using P = std::pair<double, double>;
  CHECK(cell_interval({Side::kLeft, 1}, 0.5) == P{0.25, 0.5});
  CHECK(cell_interval({Side::kCore, 0}, 1.0 / 3) == P{1.0 / 3, 1.0 - 1.0 / 3});
  CHECK(cell_interval({Side::kRight, 2}, 0.5) == P{0.75, 0.875});

  // Round trip: every cell's lower end lies in that cell.
  for (int n = 1; n < 40; ++n) {
    for (Side side : {Side::kLeft, Side::kRight}) {
      const auto [lo, hi] = cell_interval({side, n}, 0.5);
      CHECK(lo < hi);
      CHECK(locate_cell(TailPoint::from_real(lo), 0.5) == CellIndex{side, n});
    }
  }
}

TEST_CASE("core_step") {
  const CoreSystem g = fixture::core_of(fixture::gen_hy("1/8"));
  CHECK(core_step(g, 0, 7.0 / 16) == 23.0 / 32);
  CHECK(core_step(g, 0, 23.0 / 32) == 7.0 / 16);
  const CoreSystem p = fixture::core_of(fixture::pl_gh("1/2"));
  CHECK(core_step(p, 0, 0.25) == 0.5);
  CHECK(core_step(p, 0, 0.5) == 0.25);
  CHECK(code_of([&] { core_step(p, 0, 0.9); }) == ErrorCode::kOutsideCore);
  CHECK(code_of([&] { core_step(p, 1, 0.2); }) == ErrorCode::kOutsideCore);
}
