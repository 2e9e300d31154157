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

// Counter-based random streams. A stream is fully determined by
// (seed, trajectory index, purpose), so trajectories can be generated in any
// order on any number of threads and still reproduce bit for bit.

#ifndef ARCLAW_RNG_HPP_
#define ARCLAW_RNG_HPP_

#include <cstdint>

namespace arclaw {

enum class StreamPurpose : std::uint64_t {
  kSymbols = 0x73796d626f6c73ULL,
  kInitial = 0x696e697469616cULL,
};

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t index, StreamPurpose purpose)
      : state_(splitmix64_mix(seed ^ splitmix64_mix(
                   index * 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(purpose)))) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return splitmix64_mix(state_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// One fair bit; each 64-bit word feeds 64 calls.
  int bit() {
    if (bits_left_ == 0) {
      word_ = next();
      bits_left_ = 64;
    }
    const int b = static_cast<int>(word_ & 1U);
    word_ >>= 1;
    --bits_left_;
    return b;
  }

 private:
  std::uint64_t state_;
  std::uint64_t word_ = 0;
  int bits_left_ = 0;
};

}  // namespace arclaw

#endif  // ARCLAW_RNG_HPP_
