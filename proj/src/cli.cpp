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

#include "arclaw/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "arclaw/errors.hpp"
#include "arclaw/montecarlo.hpp"
#include "arclaw/randomwalk.hpp"
#include "arclaw/stats.hpp"
#include "arclaw/systems.hpp"

namespace arclaw {
namespace {

struct Options {
  // system
  std::string family;
  std::string delta;
  std::string c;
  std::string f0_pieces;
  std::string f1_pieces;
  // invariant measure
  std::string atoms;
  std::string measure_in;
  long grid = 0;
  double ulam_tol = 1e-10;
  long max_iters = 100000;
  int depth = 60;
  // simulation
  std::string start;
  long steps = 100000;
  long traj = 1000;
  std::uint64_t seed = 1;
  int threads = 0;
  // outputs
  std::string out;
  std::string measure_out;
  std::string ecdf_out;
  // per command
  double residual_tol = 1e-12;
  double ks_tol = 0.05;
  double dk_ks_tol = 0.10;
  double mu_tol = 1e-12;
  std::string target;
  int max_n = 100000;
  std::string method = "dp";
};

// Shortest text that reads back to the same double.
std::string fmt(double v) {
  char buf[40];
  const auto end = std::to_chars(buf, buf + sizeof buf, v).ptr;
  return std::string(buf, end);
}

std::string canonical(const Options& o, const std::string& command) {
  std::ostringstream s;
  s << "command=" << command << ";family=" << o.family << ";delta=" << o.delta
    << ";c=" << o.c << ";f0=" << o.f0_pieces << ";f1=" << o.f1_pieces
    << ";atoms=" << o.atoms << ";measure_in=" << o.measure_in << ";grid=" << o.grid
    << ";ulam_tol=" << fmt(o.ulam_tol) << ";max_iters=" << o.max_iters
    << ";depth=" << o.depth << ";start=" << o.start << ";steps=" << o.steps
    << ";traj=" << o.traj << ";seed=" << o.seed << ";target=" << o.target
    << ";max_n=" << o.max_n << ";method=" << o.method;
  return s.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kConfig, "cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Writes to the named file, or to `fallback` when the name is empty.
void emit(const std::string& path, std::ostream& fallback,
          const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::kConfig, "cannot write '" + path + "'");
  body(file);
  if (!file) throw Error(ErrorCode::kConfig, "failed writing '" + path + "'");
}

struct Setup {
  RandomSystem system;
  std::optional<CoreSystem> core;
  std::optional<CoreMeasure> nu;
  std::string nu_source;
  double nu_residual = 0.0;
  UlamStats ulam;
};

RandomSystem make_system(const Options& o) {
  if (o.family.empty()) throw Error(ErrorCode::kConfig, "--family is required");
  const Family family = parse_family(o.family);
  std::optional<Rational> delta;
  if (!o.delta.empty()) delta = Rational::parse(o.delta);
  if (family == Family::kCustom) {
    if (o.f0_pieces.empty() || o.f1_pieces.empty() || o.c.empty()) {
      throw Error(ErrorCode::kConfig, "custom family needs --f0, --f1 and --c");
    }
    const CustomPieces custom{parse_pieces(o.f0_pieces), parse_pieces(o.f1_pieces),
                              Rational::parse(o.c)};
    return build_system(family, delta, &custom);
  }
  return build_system(family, delta);
}

std::size_t aligned_grid(const CoreSystem& core, long requested) {
  if (requested > 0) {
    if (!grid_aligned(core, static_cast<std::size_t>(requested))) {
      throw Error(ErrorCode::kConfig,
                  "--grid " + std::to_string(requested) +
                      " does not place c and 1 - c on grid points");
    }
    return static_cast<std::size_t>(requested);
  }
  for (std::size_t m = 4096; m <= 4096 * 64; ++m) {
    if (grid_aligned(core, m)) return m;
  }
  throw Error(ErrorCode::kConfig, "no aligned grid size found; pass --grid");
}

Setup prepare(const Options& o, bool need_measure) {
  Setup s{make_system(o), std::nullopt, std::nullopt, {}, 0.0, {}};
  const Rational c = o.c.empty() ? s.system.c : Rational::parse(o.c);
  s.core.emplace(validate_core(s.system, c));
  s.system.c = c;
  if (!need_measure) return s;
  if (!o.atoms.empty() && !o.measure_in.empty()) {
    throw Error(ErrorCode::kConfig, "--atoms and --measure-in are mutually exclusive");
  }
  if (!o.atoms.empty()) {
    s.nu = CoreMeasure::from_atoms(parse_atoms(o.atoms)).normalized();
    s.nu_source = "atoms";
  } else if (!o.measure_in.empty()) {
    s.nu = measure_from_text(read_file(o.measure_in)).normalized();
    s.nu_source = "file";
  } else {
    const std::size_t grid = aligned_grid(*s.core, o.grid);
    s.nu = ulam_fixed_density(*s.core, grid, o.ulam_tol, o.max_iters, &s.ulam);
    s.nu_source = "ulam(grid=" + std::to_string(grid) + ")";
  }
  s.nu_residual = invariance_residual(*s.core, *s.nu);
  return s;
}

CoreMeasure initial_law(const Options& o, const Setup& s) {
  if (o.start.empty()) return *s.nu;
  const double x = Rational::parse(o.start).to_double();
  if (!s.nu->is_discrete()) {
    throw Error(ErrorCode::kConfig, "--start needs a discrete invariant measure");
  }
  for (const Atom& a : s.nu->discrete().atoms()) {
    if (a.position == x) return CoreMeasure::from_atoms({{x, 1.0}});
  }
  throw Error(ErrorCode::kConfig, "--start " + o.start + " is not an atom of nu");
}

SimulationConfig sim_config(const Options& o, CoreMeasure initial) {
  return SimulationConfig{o.steps, o.traj, o.seed, std::move(initial), Region::upper_half(),
                          false, false, o.threads};
}

void print_system(std::ostream& out, const Setup& s) {
  out << "system=" << s.system.describe() << "\n";
  out << "Y=[" << fmt(s.core->y_lo()) << ", " << fmt(s.core->y_hi()) << ")"
      << " deterministic_core=" << (s.core->deterministic() ? "yes" : "no") << "\n";
}

void print_nu(std::ostream& out, const Setup& s) {
  out << "nu=" << s.nu_source;
  if (s.nu_source.rfind("ulam", 0) == 0) {
    out << " iterations=" << s.ulam.iterations << " ulam_residual=" << fmt(s.ulam.residual);
  }
  out << " invariance_residual=" << fmt(s.nu_residual) << "\n";
}

// ------------------------------------------------------------ subcommands

int run_walk(const Options& o, std::ostream& out) {
  CoefficientMethod method = CoefficientMethod::kDynamicProgram;
  if (o.method == "ladder") {
    method = CoefficientMethod::kLadderRecurrence;
  } else if (o.method != "dp") {
    throw Error(ErrorCode::kConfig, "--method must be 'dp' or 'ladder'");
  }
  const WalkCoefficients w = coefficients(o.max_n, method);
  const std::string hash = fnv1a_hex(canonical(o, "walk"));
  emit(o.out, out, [&](std::ostream& csv) {
    csv << "# config_hash=" << hash << " max_n=" << o.max_n << " method=" << o.method << "\n";
    csv << "n,c_n,C_n,karamata_ratio\n";
    char buf[128];
    for (int n = 1; n <= o.max_n; ++n) {
      const auto i = static_cast<std::size_t>(n);
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", n, w.c[i], w.cumulative[i],
                    karamata_ratio(w, n));
      csv << buf;
    }
  });
  if (!o.out.empty()) {
    out << "walk: max_n=" << o.max_n << " C_N=" << fmt(w.cumulative.back())
        << " karamata_ratio=" << fmt(karamata_ratio(w, o.max_n)) << "\n";
  }
  return kExitPass;
}

int run_invariant(const Options& o, std::ostream& out) {
  const Setup s = prepare(o, true);
  print_system(out, s);
  print_nu(out, s);
  try {
    const BetaB bb = beta_b(*s.nu, s.core->c_value());
    out << "nu(I1-)=" << fmt(bb.left_mass) << " nu(I1+)=" << fmt(bb.right_mass)
        << " beta=" << fmt(bb.beta) << " b=" << fmt(bb.b) << "\n";
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kZeroSideMass) throw;
    out << "beta=undefined (" << e.what() << ")\n";
  }
  const std::string path = o.measure_out.empty() ? o.out : o.measure_out;
  if (!path.empty()) emit(path, out, [&](std::ostream& f) { f << measure_to_text(*s.nu) << "\n"; });
  const double tol = s.nu_source.rfind("ulam", 0) == 0 ? o.ulam_tol : o.residual_tol;
  const bool pass = s.nu_residual <= tol;
  out << "invariant: " << (pass ? "PASS" : "FAIL") << " residual=" << fmt(s.nu_residual)
      << " tol=" << fmt(tol) << "\n";
  return pass ? kExitPass : kExitStatFail;
}

int run_simulate(const Options& o, std::ostream& out) {
  const Setup s = prepare(o, true);
  const OccupationSamples samples =
      occupation_ensemble(s.system, *s.core, sim_config(o, initial_law(o, s)));
  double mean = 0.0;
  for (double v : samples.values) mean += v;
  mean /= static_cast<double>(samples.values.size());
  const std::string hash = fnv1a_hex(canonical(o, "simulate"));
  emit(o.out, out, [&](std::ostream& csv) {
    write_samples_csv(csv, hash, o.seed, o.steps, o.traj, "A_N", samples.values);
  });
  if (!o.out.empty()) {
    print_system(out, s);
    print_nu(out, s);
    out << "simulate: N=" << o.steps << " M=" << o.traj << " seed=" << o.seed
        << " mean_A_N=" << fmt(mean) << "\n";
  }
  return kExitPass;
}

int run_arcsine(const Options& o, std::ostream& out) {
  const Setup s = prepare(o, true);
  print_system(out, s);
  print_nu(out, s);
  const BetaB bb = beta_b(*s.nu, s.core->c_value());
  const OccupationSamples samples =
      occupation_ensemble(s.system, *s.core, sim_config(o, initial_law(o, s)));
  const EmpiricalDistribution ecdf(samples.values);
  // A_N counts x >= 1/2; its limit is Lamperti(1/b), the mirror image of
  // the Lamperti(b) law of the time spent in [0, 1/2).
  const LampertiLaw law = upper_half_law(bb.b);
  const auto model = [&](double x) { return lamperti_cdf(law, x); };
  const double ks = ks_distance(ecdf, model);
  const std::string hash = fnv1a_hex(canonical(o, "arcsine-test"));
  if (!o.out.empty()) {
    emit(o.out, out, [&](std::ostream& csv) {
      write_samples_csv(csv, hash, o.seed, o.steps, o.traj, "A_N", samples.values);
    });
  }
  if (!o.ecdf_out.empty()) {
    emit(o.ecdf_out, out, [&](std::ostream& csv) { write_ecdf_csv(csv, ecdf, model); });
  }
  const bool pass = ks < o.ks_tol;
  out << "arcsine-test: " << (pass ? "PASS" : "FAIL") << " beta=" << fmt(bb.beta)
      << " b=" << fmt(bb.b) << " upper_half_b=" << fmt(law.b()) << " ks=" << fmt(ks)
      << " tol=" << fmt(o.ks_tol)
      << " N=" << o.steps << " M=" << o.traj << " seed=" << o.seed << "\n";
  return pass ? kExitPass : kExitStatFail;
}

Interval parse_target(const std::string& text, const CoreSystem& core) {
  if (text.empty()) return {core.y_lo(), core.y_hi()};
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw Error(ErrorCode::kConfig, "--target expects 'lo,hi'");
  return {Rational::parse(text.substr(0, comma)).to_double(),
          Rational::parse(text.substr(comma + 1)).to_double()};
}

int run_dk(const Options& o, std::ostream& out) {
  const Setup s = prepare(o, true);
  print_system(out, s);
  print_nu(out, s);
  const SigmaFiniteTailMeasure mu = extend_mu(*s.nu, o.depth, s.system);
  const Interval target = parse_target(o.target, *s.core);
  const DarlingKacSamples samples = darling_kac_ensemble(
      s.system, *s.core, sim_config(o, initial_law(o, s)), target, mu);
  const EmpiricalDistribution ecdf(samples.values);
  const auto model = [&](double x) { return half_normal_cdf(samples.scale, x); };
  const double ks = ks_distance(ecdf, model);
  const std::string hash = fnv1a_hex(canonical(o, "dk-test"));
  if (!o.out.empty()) {
    emit(o.out, out, [&](std::ostream& csv) {
      write_samples_csv(csv, hash, o.seed, o.steps, o.traj, "dk_value", samples.values);
    });
  }
  if (!o.ecdf_out.empty()) {
    emit(o.ecdf_out, out, [&](std::ostream& csv) { write_ecdf_csv(csv, ecdf, model); });
  }
  std::string beta_text = "undefined";
  try {
    const BetaB bb = beta_b(*s.nu, s.core->c_value());
    beta_text = fmt(bb.beta) + " b=" + fmt(bb.b);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kZeroSideMass) throw;
  }
  const bool pass = ks < o.dk_ks_tol;
  out << "dk-test: " << (pass ? "PASS" : "FAIL") << " beta=" << beta_text
      << " mu(E)=" << fmt(samples.mu_e) << " mu(E0)=" << fmt(samples.mu_e0)
      << " scale=" << fmt(samples.scale) << " ks=" << fmt(ks) << " tol=" << fmt(o.dk_ks_tol)
      << " N=" << o.steps << " M=" << o.traj << " seed=" << o.seed << "\n";
  return pass ? kExitPass : kExitStatFail;
}

int run_mu_check(const Options& o, std::ostream& out) {
  const Setup s = prepare(o, true);
  print_system(out, s);
  print_nu(out, s);
  const SigmaFiniteTailMeasure mu = extend_mu(*s.nu, o.depth, s.system);
  const double c = s.core->c_value();
  const double left1 = s.nu->mass(c / 2.0, c);
  const double right1 = s.nu->mass_from_one(c / 2.0, c);
  double identity_gap = 0.0;
  for (int n = 1; n < o.depth; ++n) {
    identity_gap = std::max(identity_gap,
                            std::abs(mu.cell_mass({Side::kLeft, n + 1}) - 2.0 * left1));
    identity_gap = std::max(identity_gap,
                            std::abs(mu.cell_mass({Side::kRight, n + 1}) - 2.0 * right1));
  }
  std::vector<Interval> sets;
  const int levels = std::min(9, o.depth - 1);
  for (int n = 1; n <= levels; ++n) {
    const auto [llo, lhi] = cell_interval({Side::kLeft, n}, c);
    const auto [rlo, rhi] = cell_interval({Side::kRight, n}, c);
    sets.push_back({llo, lhi});
    sets.push_back({rlo, rhi});
  }
  const double y_len = s.core->y_hi() - s.core->y_lo();
  sets.push_back({s.core->y_lo(), s.core->y_hi()});
  sets.push_back({s.core->y_lo() + y_len / 3.0, s.core->y_lo() + 2.0 * y_len / 3.0});
  const double residual = mu_T_invariance_residual(s.system, mu, sets);
  out << "mu(Y)=" << fmt(mu.mass_y()) << " mu(I1-)=" << fmt(mu.mass_left1())
      << " mu(I1+)=" << fmt(mu.mass_right1()) << " mu(I0)=" << fmt(mu.mass_core()) << "\n";
  const bool pass = identity_gap <= o.mu_tol && residual <= o.mu_tol;
  out << "mu-check: " << (pass ? "PASS" : "FAIL") << " depth=" << o.depth
      << " level_identity_gap=" << fmt(identity_gap) << " mu_T_residual=" << fmt(residual)
      << " test_sets=" << sets.size() << " tol=" << fmt(o.mu_tol) << "\n";
  return pass ? kExitPass : kExitStatFail;
}

}  // namespace

std::vector<Atom> parse_atoms(std::string_view text) {
  std::vector<Atom> atoms;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view item = text.substr(start, end - start);
    if (item.find_first_not_of(" \t") != std::string_view::npos) {
      const auto colon = item.find(':');
      if (colon == std::string_view::npos) {
        throw Error(ErrorCode::kConfig, "atom '" + std::string(item) + "' needs position:weight");
      }
      atoms.push_back({Rational::parse(item.substr(0, colon)).to_double(),
                       Rational::parse(item.substr(colon + 1)).to_double()});
    }
    start = end + 1;
  }
  if (atoms.empty()) throw Error(ErrorCode::kConfig, "no atoms given");
  return atoms;
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Random interval maps with core dynamics: invariant measures, "
               "random-walk coefficients and occupation-time limit laws"};
  app.name("arclaw");
  app.set_config("--config", "", "TOML file with option values; flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--family", o.family, "hy | gen-hy | pl-gh | custom");
  app.add_option("--delta", o.delta, "family parameter, e.g. 1/8");
  app.add_option("--c", o.c, "core parameter (default: family recipe)");
  app.add_option("--f0", o.f0_pieces, "custom f0 pieces 'lo,hi,slope,intercept; ...'");
  app.add_option("--f1", o.f1_pieces, "custom f1 pieces");
  app.add_option("--atoms", o.atoms, "discrete nu as 'x:w,x:w'");
  app.add_option("--measure-in", o.measure_in, "nu from a JSON measure file");
  app.add_option("--grid", o.grid, "Ulam grid size (default: smallest aligned >= 4096)");
  app.add_option("--ulam-tol", o.ulam_tol, "Ulam L1 residual tolerance");
  app.add_option("--max-iters", o.max_iters, "Ulam iteration limit");
  app.add_option("--depth", o.depth, "tail truncation depth of mu")->check(CLI::Range(1, 1000));
  app.add_option("--start", o.start, "start every trajectory at this atom of nu");
  app.add_option("--steps", o.steps, "N, steps per trajectory")->check(CLI::PositiveNumber);
  app.add_option("--traj", o.traj, "M, number of trajectories")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "base seed");
  app.add_option("--threads", o.threads, "worker threads (default ARCLAW_THREADS or all)");
  app.add_option("--out", o.out, "main output file (CSV or JSON)");
  app.add_option("--measure-out", o.measure_out, "write nu as JSON");

  auto* walk = app.add_subcommand("walk", "first-passage coefficients c_n as CSV");
  walk->add_option("--max-n", o.max_n, "largest n")->check(CLI::Range(1, 100000000));
  walk->add_option("--method", o.method, "dp | ladder");

  auto* invariant = app.add_subcommand("invariant", "validate the core and solve for nu");
  invariant->add_option("--residual-tol", o.residual_tol, "tolerance for explicit nu");

  auto* simulate = app.add_subcommand("simulate", "occupation-time ensemble as CSV");

  auto* arcsine = app.add_subcommand("arcsine-test", "KS test against the Lamperti law");
  arcsine->add_option("--ks-tol", o.ks_tol, "KS threshold");
  arcsine->add_option("--ecdf-out", o.ecdf_out, "write (x, F_emp, F_model) CSV");

  auto* dk = app.add_subcommand("dk-test", "KS test against the half-normal limit");
  dk->add_option("--ks-tol", o.dk_ks_tol, "KS threshold");
  dk->add_option("--target", o.target, "target set E as 'lo,hi' (default Y)");
  dk->add_option("--ecdf-out", o.ecdf_out, "write (x, F_emp, F_model) CSV");

  auto* mu_check = app.add_subcommand("mu-check", "mass identities and T-invariance of mu");
  mu_check->add_option("--mu-tol", o.mu_tol, "tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitConfig;
  }

  try {
    if (walk->parsed()) return run_walk(o, out);
    if (invariant->parsed()) return run_invariant(o, out);
    if (simulate->parsed()) return run_simulate(o, out);
    if (arcsine->parsed()) return run_arcsine(o, out);
    if (dk->parsed()) return run_dk(o, out);
    if (mu_check->parsed()) return run_mu_check(o, out);
  } catch (const NonConvergence& e) {
    err << "error: NonConvergence: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace arclaw
