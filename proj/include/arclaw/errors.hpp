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

#ifndef ARCLAW_ERRORS_HPP_
#define ARCLAW_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace arclaw {

enum class ErrorCode {
  kInvalidArgument,
  kStructureMismatch,
  kCoreNotInvariant,
  kDegenerateBoundary,
  kOutsideCore,
  kNonConvergence,
  kZeroSideMass,
  kZeroMass,
  kMixedVariant,
  kTruncationEscape,
  kConfig,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Power iteration did not reach the requested residual.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double final_residual, long iterations)
      : Error(ErrorCode::kNonConvergence, what),
        final_residual_(final_residual),
        iterations_(iterations) {}

  double final_residual() const { return final_residual_; }
  long iterations() const { return iterations_; }

 private:
  double final_residual_;
  long iterations_;
};

}  // namespace arclaw

#endif  // ARCLAW_ERRORS_HPP_
