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

#ifndef ARCLAW_CLI_HPP_
#define ARCLAW_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "arclaw/measures.hpp"

namespace arclaw {

enum ExitCode : int {
  kExitPass = 0,
  kExitStatFail = 1,
  kExitConfig = 2,
  kExitNonConvergence = 3,
};

/// Entry point of the arclaw executable. Subcommands: simulate, invariant,
/// walk, arcsine-test, dk-test, mu-check.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "0.25:0.5, 0.5:0.5" -> atoms; positions and weights accept "p/q".
std::vector<Atom> parse_atoms(std::string_view text);

/// 64-bit FNV-1a, as 16 hex digits.
std::string fnv1a_hex(std::string_view text);

}  // namespace arclaw

#endif  // ARCLAW_CLI_HPP_
