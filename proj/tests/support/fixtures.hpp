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

#ifndef ARCLAW_TESTS_FIXTURES_HPP_
#define ARCLAW_TESTS_FIXTURES_HPP_

#include <string_view>

#include "arclaw/systems.hpp"

namespace arclaw::fixture {

inline Rational q(std::string_view text) { return Rational::parse(text); }

inline RandomSystem gen_hy(std::string_view delta) {
  return build_system(Family::kGeneralizedHataYano, q(delta));
}

inline RandomSystem pl_gh(std::string_view delta) {
  return build_system(Family::kPiecewiseLinearGH, q(delta));
}

inline RandomSystem custom(std::string_view f0, std::string_view f1, std::string_view c) {
  const CustomPieces pieces{parse_pieces(f0), parse_pieces(f1), q(c)};
  return build_system(Family::kCustom, std::nullopt, &pieces);
}

/// c = 1/2 core with h = 2x - 1/4 on [1/4, 1/2) and x - 1/4 on [1/2, 3/4).
/// Invariant density 8/3 on the left half of Y, 4/3 on the right half.
inline RandomSystem skewed() {
  return custom("0,1/2,1/2,0; 1/2,3/4,1,-1/4; 3/4,1,2,-1",
                "0,1/4,2,0; 1/4,1/2,2,-1/4; 1/2,1,1/2,1/2", "1/2");
}

/// c = 1/2 core with h = 2x - 1/4 on [1/4, 1/2) and 2x - 3/4 on [1/2, 3/4).
/// Invariant density 2 on Y.
inline RandomSystem doubling() {
  return custom("0,1/2,1/2,0; 1/2,3/4,2,-3/4; 3/4,1,2,-1",
                "0,1/4,2,0; 1/4,1/2,2,-1/4; 1/2,1,1/2,1/2", "1/2");
}

inline CoreSystem core_of(const RandomSystem& system) { return validate_core(system, system.c); }

}  // namespace arclaw::fixture

#endif  // ARCLAW_TESTS_FIXTURES_HPP_
