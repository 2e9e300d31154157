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

#include "arclaw/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "arclaw/errors.hpp"

namespace arclaw {
namespace {

// Deep points are parked between 2^-700 and 2^-400 (times 2^-shift), far
// from the subnormal range where halving stops being exact.
constexpr double kParkBelow = 0x1p-700;
constexpr double kUnparkAbove = 0x1p-400;
constexpr int kParkStep = 300;

int binary_exponent(double v) {
  return static_cast<int>((std::bit_cast<std::uint64_t>(v) >> 52) & 0x7ffU) - 1023;
}

struct Stepper {
  const PiecewiseLinearMap* maps[2];
  std::vector<int> slope_exponents[2];
};

std::vector<int> slope_exponents(const PiecewiseLinearMap& map) {
  std::vector<int> out;
  for (const AffinePiece& p : map.pieces()) {
    const double s = std::abs(p.slope.to_double());
    out.push_back(s == 0.0 ? 0 : std::ilogb(s));
  }
  return out;
}

Stepper make_stepper(const PiecewiseLinearMap& f0, const PiecewiseLinearMap& f1) {
  return {{&f0, &f1}, {slope_exponents(f0), slope_exponents(f1)}};
}

TailPoint canonical(TailPoint p) {
  if (p.frame == Frame::kFromZero && p.value >= 0.5) return {Frame::kFromOne, 1.0 - p.value};
  if (p.frame == Frame::kFromOne && p.value > 0.5) return {Frame::kFromZero, 1.0 - p.value};
  return p;
}

void advance(OrbitState& s, const Stepper& st, int symbol, RandomStream* fill) {
  const PiecewiseLinearMap& map = *st.maps[symbol];
  const std::size_t i = map.piece_index(s.point);
  if (i == PiecewiseLinearMap::npos) {
    throw Error(ErrorCode::kInvalidArgument,
                "orbit left the map domain at " + std::to_string(s.point.to_real()));
  }
  TailPoint next = map.apply_piece(i, s.point);
  if (fill != nullptr && next.value != 0.0 && s.point.value != 0.0) {
    int missing = s.deficit + st.slope_exponents[symbol][i] +
                  binary_exponent(s.point.value) - binary_exponent(next.value);
    s.deficit = 0;
    if (missing > 0) {
      if (missing > 52) {
        s.deficit = missing - 52;
        missing = 52;
      }
      const std::uint64_t k = fill->next() >> (64 - missing);
      next.value += std::ldexp(static_cast<double>(k), binary_exponent(next.value) - 52);
      next = canonical(next);
    }
  }
  s.point = next;
  if (s.point.value < kParkBelow && s.point.value != 0.0) {
    s.point.value = std::ldexp(s.point.value, kParkStep);
    s.shift += kParkStep;
  } else if (s.shift > 0 && s.point.value > kUnparkAbove) {
    s.point.value = std::ldexp(s.point.value, -kParkStep);
    s.shift -= kParkStep;
  }
}

template <class NextSymbol>
TrajectoryResult simulate(const RandomSystem& system, const Stepper& st, TailPoint x0,
                          long steps, NextSymbol&& next_symbol, const Region& region,
                          bool flip, bool count_breakpoints, RandomStream* fill) {
  OrbitState s{x0, 0, 0};
  TrajectoryResult r;
  const bool upper = region.kind == Region::Kind::kUpperHalf;
  for (long n = 0; n < steps; ++n) {
    if (upper) {
      r.count += s.point.frame == Frame::kFromOne ? 1 : 0;
    } else if (s.shift == 0) {
      const double x = s.point.to_real();
      r.count += (x >= region.lo && x < region.hi) ? 1 : 0;
    }
    if (count_breakpoints && s.shift == 0 && system.at_breakpoint(s.point)) ++r.breakpoint_hits;
    advance(s, st, next_symbol() ^ (flip ? 1 : 0), fill);
  }
  r.endpoint = s.tail_point();
  return r;
}

void require_on_core(const CoreSystem& core, const CoreMeasure& law) {
  if (law.is_discrete()) {
    for (const Atom& a : law.discrete().atoms()) {
      if (!core.contains(a.position)) {
        throw Error(ErrorCode::kOutsideCore,
                    "initial atom " + std::to_string(a.position) + " lies outside Y");
      }
    }
    return;
  }
  if (law.step().lo() < core.y_lo() || law.step().hi() > core.y_hi()) {
    throw Error(ErrorCode::kOutsideCore, "initial density extends outside Y");
  }
}

void require_sizes(const SimulationConfig& config) {
  if (config.steps < 1 || config.trajectories < 1) {
    throw Error(ErrorCode::kInvalidArgument, "steps and trajectories must be at least 1");
  }
}

// Runs body(i) for i in [0, count) on a pool of threads. Results are written
// by index, so the outcome does not depend on scheduling.
template <class Body>
void parallel_for(long count, int threads, Body&& body) {
  const int workers = static_cast<int>(std::min<long>(std::max(1, threads), count));
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  auto work = [&] {
    for (long i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> guard(failure_lock);
        if (!failure) failure = std::current_exception();
        next.store(count);
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<TrajectoryResult> run_ensemble(const RandomSystem& system, const CoreSystem& core,
                                           const SimulationConfig& config,
                                           const Region& region) {
  require_sizes(config);
  require_on_core(core, config.initial);
  const Stepper st = make_stepper(system.f0, system.f1);
  const bool refine = !config.initial.is_discrete();
  std::vector<TrajectoryResult> results(static_cast<std::size_t>(config.trajectories));
  parallel_for(config.trajectories, resolve_threads(config.threads), [&](long i) {
    const auto index = static_cast<std::uint64_t>(i);
    RandomStream init(config.seed, index, StreamPurpose::kInitial);
    RandomStream symbols(config.seed, index, StreamPurpose::kSymbols);
    TailPoint x0 = draw_initial(config.initial, init);
    if (config.antithetic) x0 = x0.reflected();
    results[static_cast<std::size_t>(i)] =
        simulate(system, st, x0, config.steps, [&] { return symbols.bit(); }, region,
                 config.antithetic, config.count_breakpoints, refine ? &init : nullptr);
  });
  return results;
}

}  // namespace

TailPoint OrbitState::tail_point() const {
  if (shift == 0) return point;
  return {point.frame, std::ldexp(point.value, static_cast<int>(-std::min<long>(shift, 4000)))};
}

TailPoint draw_initial(const CoreMeasure& law, RandomStream& stream) {
  const double total = law.total_mass();
  if (!(total > 0.0)) throw Error(ErrorCode::kZeroMass, "initial law has zero mass");
  const double u = stream.uniform() * total;
  if (law.is_discrete()) {
    const auto& atoms = law.discrete().atoms();
    double acc = 0.0;
    for (const Atom& a : atoms) {
      acc += a.weight;
      if (u < acc) return TailPoint::from_real(a.position);
    }
    return TailPoint::from_real(atoms.back().position);
  }
  const StepDensity& d = law.step();
  const std::size_t cells = d.grid_size();
  double acc = 0.0;
  std::size_t chosen = cells;
  for (std::size_t i = 0; i < cells; ++i) {
    if (d.values()[i] == 0.0) continue;
    chosen = i;
    acc += d.values()[i] * d.cell_width();
    if (u < acc) break;
  }
  const double lo = d.cell_lo(chosen);
  double x = lo + stream.uniform() * d.cell_width();
  if (x >= lo + d.cell_width()) x = std::nextafter(lo + d.cell_width(), lo);
  return TailPoint::from_real(x);
}

TrajectoryResult run_trajectory(const RandomSystem& system, TailPoint x0, long steps,
                                RandomStream& symbols, const Region& region, bool flip,
                                bool count_breakpoints, RandomStream* fill) {
  if (steps < 1) throw Error(ErrorCode::kInvalidArgument, "steps must be at least 1");
  const Stepper st = make_stepper(system.f0, system.f1);
  return simulate(system, st, x0, steps, [&] { return symbols.bit(); }, region, flip,
                  count_breakpoints, fill);
}

TrajectoryResult run_trajectory(const RandomSystem& system, TailPoint x0, long steps,
                                RandomStream& symbols) {
  return run_trajectory(system, x0, steps, symbols, Region::upper_half(), false, false,
                        nullptr);
}

TrajectoryResult run_trajectory(const RandomSystem& system, TailPoint x0,
                                std::span<const int> symbols, Region region) {
  if (symbols.empty()) throw Error(ErrorCode::kInvalidArgument, "empty symbol list");
  const Stepper st = make_stepper(system.f0, system.f1);
  std::size_t at = 0;
  return simulate(system, st, x0, static_cast<long>(symbols.size()),
                  [&] { return symbols[at++] != 0 ? 1 : 0; }, region, false, true, nullptr);
}

OccupationSamples occupation_ensemble(const RandomSystem& system, const CoreSystem& core,
                                      const SimulationConfig& config) {
  const auto results = run_ensemble(system, core, config, config.region);
  OccupationSamples out;
  out.steps = config.steps;
  out.trajectories = config.trajectories;
  out.seed = config.seed;
  for (const TrajectoryResult& r : results) {
    out.counts.push_back(r.count);
    out.values.push_back(static_cast<double>(r.count) / static_cast<double>(config.steps));
    out.breakpoint_hits += r.breakpoint_hits;
  }
  return out;
}

DarlingKacSamples darling_kac_ensemble(const RandomSystem& system, const CoreSystem& core,
                                       const SimulationConfig& config, Interval target,
                                       const SigmaFiniteTailMeasure& mu) {
  if (!(target.lo < target.hi) || target.lo < core.y_lo() || target.hi > core.y_hi()) {
    throw Error(ErrorCode::kInvalidArgument,
                "target set [" + std::to_string(target.lo) + ", " + std::to_string(target.hi) +
                    ") is not a nonempty subset of Y");
  }
  DarlingKacSamples out;
  out.mu_e = mu.mass(target.lo, target.hi);
  out.mu_e0 = mu.mass_left1() + mu.mass_right1();
  if (!(out.mu_e > 0.0)) throw Error(ErrorCode::kZeroMass, "mu(E) = 0");
  if (!(out.mu_e0 > 0.0)) throw Error(ErrorCode::kZeroSideMass, "mu(I1-) + mu(I1+) = 0");
  out.scale = 2.0 * out.mu_e / out.mu_e0;
  out.steps = config.steps;
  out.trajectories = config.trajectories;
  out.seed = config.seed;
  const auto results =
      run_ensemble(system, core, config, Region::interval(target.lo, target.hi));
  const double root = std::sqrt(static_cast<double>(config.steps));
  for (const TrajectoryResult& r : results) {
    out.counts.push_back(r.count);
    out.values.push_back(static_cast<double>(r.count) / root);
  }
  return out;
}

bool walk_consistency(const RandomSystem& system, TailPoint x0, std::span<const int> symbols) {
  const double c = system.c.to_double();
  TailPoint p = x0;
  for (int symbol : symbols) {
    const int s = symbol != 0 ? 1 : 0;
    const TailPoint next = system.map(s)(p);
    if (p.value != 0.0) {
      const CellIndex before = locate_cell(p, c);
      if (before.side != Side::kCore && before.depth >= 2) {
        if (next.value == 0.0) return false;
        const CellIndex after = locate_cell(next, c);
        const bool toward_core = before.side == Side::kLeft ? s == 1 : s == 0;
        const int expected = before.depth + (toward_core ? -1 : 1);
        if (after.side != before.side || after.depth != expected) return false;
      }
    }
    p = next;
  }
  return true;
}

SideFrequencies core_orbit_frequencies(const CoreSystem& core, const CoreMeasure& law,
                                       long steps, std::uint64_t seed) {
  if (steps < 1) throw Error(ErrorCode::kInvalidArgument, "steps must be at least 1");
  require_on_core(core, law);
  const Stepper st = make_stepper(core.h0(), core.h1());
  RandomStream init(seed, 0, StreamPurpose::kInitial);
  RandomStream symbols(seed, 0, StreamPurpose::kSymbols);
  RandomStream* fill = law.is_discrete() ? nullptr : &init;
  const bool deterministic = core.deterministic();
  const double c = core.c_value();
  OrbitState s{draw_initial(law, init), 0, 0};
  SideFrequencies f;
  for (long n = 0; n < steps; ++n) {
    if (s.point.frame == Frame::kFromZero) {
      (s.point.value < c ? f.left : f.core) += 1;
    } else {
      (s.point.value <= c ? f.right : f.core) += 1;
    }
    advance(s, st, deterministic ? 0 : symbols.bit(), fill);
  }
  return f;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ARCLAW_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 1024L));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void write_samples_csv(std::ostream& out, const std::string& config_hash, std::uint64_t seed,
                       long steps, long trajectories, const std::string& column,
                       const std::vector<double>& values) {
  out << "# config_hash=" << config_hash << " seed=" << seed << " N=" << steps
      << " M=" << trajectories << "\n";
  out << "index," << column << "\n";
  char buf[64];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, values[i]);
    out << buf;
  }
}

}  // namespace arclaw
