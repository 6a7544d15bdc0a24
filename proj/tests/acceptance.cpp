// Acceptance suite: one [PASS]/[FAIL] line per criterion at the stated
// tolerances. Exit status is the number of failed criteria (capped at 1).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "heatex/classical.hpp"
#include "heatex/cli.hpp"
#include "heatex/config.hpp"
#include "heatex/harness.hpp"
#include "heatex/quantum.hpp"
#include "heatex/renyi.hpp"
#include "heatex/stats.hpp"
#include "support.hpp"

using namespace heatex;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = true;
  std::string summary;
  std::vector<std::string> notes;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string sci(double x, int digits = 3) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

ExperimentConfig flip_flop_config() {
  return config_from_json({{"model", {{"kind", "flip_flop"}, {"omega", 1.0}, {"g", 0.3}}},
                           {"temps", {{"beta_a", 0.5}, {"beta_b", 1.0}}},
                           {"protocol", {{"tau", 2.0}}},
                           {"grids", {{"z_grid", "-2:3:0.1"}, {"u_grid", "-10:10:0.1"}}}});
}

struct FlipFlop {
  QuantumExchangeModel model = build_model(flip_flop_config().quantum_model);
  ExchangeTemperatures temps{0.5, 1.0};
  DensityMatrix rho0 = initial_state(model, temps);
  DensityMatrix rho_tau = evolve_state(rho0, propagator(model, 2.0));
  HeatDistribution dist = tpm_heat_distribution(model, temps, 2.0, HeatDefinition::via_b);
};

Outcome c1() {
  auto const t0 = std::chrono::steady_clock::now();
  Report const r = run_experiment(flip_flop_config());
  double const secs = seconds_since(t0);
  double worst = 0.0;
  bool all_pass = true;
  for (auto const& row : r.identity) {
    worst = std::max(worst, std::isfinite(row.defect) ? row.defect : INFINITY);
    all_pass = all_pass && row.verdict == Verdict::pass;
  }
  Outcome o;
  o.pass = all_pass && worst < 1e-10 && secs < 1.0 && r.identity.size() == 51;
  o.summary = "exact quantum identity: max_z |ln LHS - (z-1)S_z| = " + sci(worst) +
              " (< 1e-10) over " + std::to_string(r.identity.size()) + " z, " +
              sci(secs) + " s (< 1 s)";
  return o;
}

Outcome c2(FlipFlop const& f) {
  double const jw = generating_function_lhs(f.dist, f.temps, RenyiOrder(1.0));
  Outcome o;
  o.pass = std::abs(jw - 1.0) < 1e-12;
  o.summary = "Jarzynski-Wojcik anchor: |<e^{-dbeta Q}> - 1| = " + sci(std::abs(jw - 1.0)) +
              " (< 1e-12)";
  return o;
}

Outcome c3(FlipFlop const& f) {
  double const lhs = f.temps.delta_beta() * moment_from_distribution(f.dist, 1);
  double const d = relative_entropy(f.rho_tau, f.rho0);
  Outcome o;
  o.pass = std::abs(lhs - d) < 1e-10;
  o.summary = "average heat: |dbeta<Q> - D(rho_tau||rho_0)| = " + sci(std::abs(lhs - d)) +
              " (< 1e-10), D = " + sci(d);
  return o;
}

Outcome c4(FlipFlop const& f) {
  double worst = 0.0;
  for (int n = 1; n <= 4; ++n) {
    double const a = ordered_moment(f.rho0, f.rho_tau, f.temps, n);
    double const b = moment_from_distribution(f.dist, n);
    worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), std::abs(b)));
  }
  Outcome o;
  o.pass = worst < 1e-8;
  o.summary = "ordered moments n=1..4: max relative error = " + sci(worst) + " (< 1e-8)";
  return o;
}

Outcome c5(FlipFlop const& f) {
  std::vector<double> const u = parse_grid(std::string("-10:10:0.1"));
  CharFnCurve const g = characteristic_function(f.model, f.temps, 2.0, u, 4);
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    worst = std::max(worst, std::abs(g.values[i] - heat_fourier_sum(f.dist, u[i])));
  }
  Outcome o;
  o.pass = worst < 1e-10 && u.size() == 201;
  o.summary = "Fourier consistency: max_u |G(u) - sum p e^{iuq}| = " + sci(worst) +
              " (< 1e-10) over " + std::to_string(u.size()) + " u";
  return o;
}

Outcome c6(FlipFlop const& f) {
  ExperimentConfig const c = config_from_json(
      {{"model", {{"kind", "detuned_flip_flop"}}},
       {"temps", {{"beta_a", 0.5}, {"beta_b", 1.0}}},
       {"protocol", {{"tau", 2.0}}},
       {"grids", {{"z_grid", "-2:3:0.1"}, {"coupling_sweep", {0.2, 0.1, 0.05, 0.025}}}}});
  Report const r = coupling_sweep(c);
  bool decreasing = r.sweep.size() == 4;
  std::string defects;
  for (std::size_t i = 0; i < r.sweep.size(); ++i) {
    if (i > 0) decreasing = decreasing && r.sweep[i].defect < r.sweep[i - 1].defect;
    defects += (i ? ", " : "") + sci(r.sweep[i].defect);
  }
  auto const o_rabi = testing::rabi_oracle(1.0, 0.3, 2.0, 0.5, 1.0);
  double rabi = INFINITY;
  if (f.dist.atoms.size() == 3) {
    rabi = std::max({std::abs(f.dist.atoms[0].q - o_rabi.q_minus),
                     std::abs(f.dist.atoms[0].p - o_rabi.p_minus),
                     std::abs(f.dist.atoms[1].q), std::abs(f.dist.atoms[1].p - o_rabi.p_zero),
                     std::abs(f.dist.atoms[2].q - o_rabi.q_plus),
                     std::abs(f.dist.atoms[2].p - o_rabi.p_plus)});
  }
  Outcome o;
  o.pass = decreasing && rabi < 1e-12;
  o.summary = "weak coupling: detuned defects {" + defects + "} strictly decreasing: " +
              (decreasing ? "yes" : "no") + "; Rabi oracle max atom error = " + sci(rabi) +
              " (< 1e-12)";
  return o;
}

Outcome c7() {
  ExperimentConfig const c = config_from_json(
      {{"regime", "classical"},
       {"model", {{"kind", "harmonic_bilinear"}, {"epsilon", 0.05},
                  {"omega_a", 1.0}, {"omega_b", 1.0}}},
       {"temps", {{"beta_a", 0.5}, {"beta_b", 1.0}}},
       {"protocol", {{"tau", 5.0}, {"propagator", "exact"}}},
       {"grids", {{"z_grid", "0:2:0.25"}}},
       {"sampler", {{"n_samples", 100000}, {"seed", 12345}}}});
  auto const t0 = std::chrono::steady_clock::now();
  Report const r = run_experiment(c, {4, false});
  double const secs = seconds_since(t0);
  Outcome o;
  double worst = 0.0;
  double worst_z = 0.0;
  bool rows_ok = true;
  bool z0_exact = false;
  std::vector<double> failed_z;
  for (auto const& row : r.identity) {
    if (row.z == 0.0) z0_exact = row.lhs == 1.0 && row.rhs == 1.0;
    if (!(row.defect <= worst)) {
      worst = row.defect;
      worst_z = row.z;
    }
    if (!(row.defect <= 3.0) || row.verdict != Verdict::pass) {
      rows_ok = false;
      failed_z.push_back(row.z);
    }
  }
  o.pass = rows_ok && z0_exact && secs < 60.0;
  o.summary = "classical identity (n=1e5, seed 12345): max distance = " + sci(worst) +
              " sigma at z = " + sci(worst_z) + " (<= 3), z=0 exact: " +
              (z0_exact ? "yes" : "no") + ", " + sci(secs) + " s (< 60 s)";
  if (!failed_z.empty()) {
    // Expected bias from the closed-form Gaussian averages of both estimators.
    ClassicalExchangeModel const model(c.classical_model);
    testing::GaussianOracle const oracle(model, c.temps(), c.tau);
    auto lhs_minus_rhs = [&r](double z) {
      for (auto const& row : r.identity) {
        if (row.z == z) return row.lhs - row.rhs;
      }
      return std::nan("");
    };
    double const n = double(c.sampler.n_samples);
    for (double z : failed_z) {
      double const l = oracle.lhs(z), rr = oracle.rhs(z);
      double const se = std::sqrt((oracle.lhs_variance(z) + oracle.rhs_variance(z)) / n);
      std::ostringstream os;
      os << "z = " << z << ": exact LHS = " << sci(l, 6) << ", exact RHS = " << sci(rr, 6)
         << ", measured LHS - RHS = " << sci(lhs_minus_rhs(z), 3)
         << ", expected distance " << sci(std::abs(l - rr) / se)
         << " sigma from the coupling-energy term at finite epsilon";
      o.notes.push_back(os.str());
    }
    o.notes.push_back(
        "the estimators match their closed-form means (test_classical); the gap is "
        "the O(epsilon) interaction-energy change dH_AB, not sampling error");
  }
  return o;
}

Outcome c8() {
  ClassicalModelSpec s;
  s.kind = "harmonic_bilinear";
  s.epsilon = 0.05;
  ClassicalExchangeModel const m(s);
  double const wb = m.max_frequency();
  ExchangeTemperatures const temps(0.5, 1.0);

  // Reversibility on thermal draws.
  CounterStream rng(808, 0);
  double rev = 0.0;
  for (int k = 0; k < 20; ++k) {
    PhaseSpacePoint x = m.zero_point();
    x.q_a = {rng.normal() / std::sqrt(0.5)};
    x.p_a = {rng.normal() / std::sqrt(0.5)};
    x.q_b = {rng.normal()};
    x.p_b = {rng.normal()};
    PhaseSpacePoint const y = integrate_verlet(m, x, 5.0, 1e-3, wb);
    PhaseSpacePoint const back = integrate_verlet(m, y, -5.0, 1e-3, wb);
    rev = std::max({rev, std::abs(back.q_a[0] - x.q_a[0]), std::abs(back.p_a[0] - x.p_a[0]),
                    std::abs(back.q_b[0] - x.q_b[0]), std::abs(back.p_b[0] - x.p_b[0])});
  }

  // Absolute drift from thermal-scale energies (1/beta per oscillator).
  double drift_abs = 0.0;
  for (int k = 0; k < 16; ++k) {
    double const phi = 2 * M_PI * k / 16.0;
    PhaseSpacePoint x = m.zero_point();
    double const ra = std::sqrt(2.0 / 0.5), rb = std::sqrt(2.0 / 1.0);
    x.q_a = {ra * std::cos(phi)};
    x.p_a = {ra * std::sin(phi)};
    x.q_b = {rb * std::sin(2 * phi)};
    x.p_b = {rb * std::cos(2 * phi)};
    PhaseSpacePoint const y = integrate_verlet(m, x, 5.0, 1e-3, wb);
    drift_abs = std::max(drift_abs, std::abs(m.energy(EnergyTerm::total, y) -
                                             m.energy(EnergyTerm::total, x)));
  }

  // Relative drift across a Gibbs ensemble integrated with Verlet.
  ProtocolSettings p;
  p.tau = 5.0;
  p.dt = 1e-3;
  p.method = PropagationMethod::verlet;
  SamplerSettings ss;
  ss.n_samples = 10000;
  TrajectoryEnsemble const ens = run_ensemble(m, temps, p, ss, 4);
  double drift_rel = 0.0;
  for (auto const& pr : ens.pairs) {
    drift_rel = std::max(drift_rel, std::abs(pr.total1() - pr.total0()) / std::abs(pr.total0()));
  }

  // Equipartition at n = 1e5, 4 sigma.
  ExperimentConfig const c = config_from_json(
      {{"regime", "classical"}, {"sampler", {{"n_samples", 100000}, {"seed", 12345}}}});
  Report const r = sample_report(c, {4, false});
  double worst_eq = 0.0;
  bool eq_ok = true;
  int eq_checks = 0;
  for (auto const& chk : r.checks) {
    if (chk.name.rfind("equipartition_", 0) == 0) {
      ++eq_checks;
      worst_eq = std::max(worst_eq, chk.defect);
      eq_ok = eq_ok && chk.defect <= 4.0;
    }
  }
  Outcome o;
  o.pass = rev < 1e-9 && drift_abs < 1e-6 && drift_rel < 1e-6 && eq_ok && eq_checks == 4;
  o.summary = "mechanics hygiene: reversibility = " + sci(rev) + " (< 1e-9), |dH| = " +
              sci(drift_abs) + " (< 1e-6, thermal-scale), max |dH|/H over Gibbs = " +
              sci(drift_rel) + " (< 1e-6), equipartition max = " + sci(worst_eq) +
              " sigma (<= 4)";
  return o;
}

Outcome c9() {
  CounterStream rng(909, 0);
  double min_s = INFINITY, worst_mono = 0.0, worst_unitary = 0.0, worst_slope = 0.0;
  for (int k = 0; k < 100; ++k) {
    DensityMatrix const a = testing::random_density(4, rng);
    DensityMatrix const b = testing::random_density(4, rng);
    ComplexMatrix const u = testing::random_unitary(4, rng);
    auto rot = [&u](DensityMatrix const& r) {
      ComplexMatrix const m = u * r.matrix() * u.adjoint();
      return DensityMatrix(0.5 * (m + m.adjoint()));
    };
    std::vector<double> const zs{0.5, 1.0, 2.0};
    DivergenceCurve const c = divergence_curve(a, b, zs);
    DivergenceCurve const cu = divergence_curve(rot(a), rot(b), zs);
    for (std::size_t i = 0; i < zs.size(); ++i) {
      min_s = std::min(min_s, c.values[i]);
      worst_unitary = std::max(worst_unitary, std::abs(c.values[i] - cu.values[i]));
      if (i > 0) worst_mono = std::max(worst_mono, c.values[i - 1] - c.values[i]);
    }
    SpectralPair const pair(a, b);
    double const h = 1e-4;
    double const slope = (pair.log_trace_power(1 + h) - pair.log_trace_power(1 - h)) / (2 * h);
    worst_slope = std::max(worst_slope, std::abs(slope - c.limit_value_at_1));
  }
  Outcome o;
  o.pass = min_s >= -1e-10 && worst_mono <= 1e-10 && worst_unitary < 1e-10 &&
           worst_slope < 1e-4;
  o.summary = "divergence properties (100 pairs): min S_z = " + sci(min_s) +
              " (>= -1e-10), max decrease = " + sci(worst_mono) +
              " (<= 1e-10), unitary gap = " + sci(worst_unitary) +
              " (< 1e-10), z->1 slope error = " + sci(worst_slope) + " (< 1e-4)";
  return o;
}

std::string slurp(fs::path const& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome c10() {
  fs::path const root =
      fs::temp_directory_path() / ("heatex-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(root);
  std::vector<std::vector<std::string>> const invocations{
      {"verify"},
      {"verify", "regime=classical", "--seed", "77"},
      {"sweep", "model.kind=detuned_flip_flop", "coupling_sweep=0.2,0.1,0.05,0.025"},
      {"moments"},
      {"charfn"},
      {"distribution", "--both-definitions"},
      {"sample", "regime=classical", "--seed", "77"},
      {"sample", "regime=classical", "kind=harmonic_quartic", "n_samples=20000"},
      {"verify", "model.kind=random", "seed=3", "--defect-mode"},
  };
  std::size_t files = 0, mismatches = 0;
  int k = 0;
  for (auto const& inv : invocations) {
    std::vector<fs::path> outs;
    for (auto const* workers : {"1", "4", "1"}) {
      fs::path const out = root / std::to_string(k++);
      std::vector<std::string> args{"heatex"};
      args.insert(args.end(), inv.begin(), inv.end());
      args.insert(args.end(), {"--compare-mode", "--workers", workers, "-o", out.string()});
      std::vector<char const*> argv;
      for (auto const& a : args) argv.push_back(a.c_str());
      std::ostringstream sink;
      run_cli(int(argv.size()), argv.data(), sink, sink);
      outs.push_back(out);
    }
    if (!fs::exists(outs[0])) {
      ++mismatches;
      continue;
    }
    for (auto const& entry : fs::directory_iterator(outs[0])) {
      ++files;
      std::string const name = entry.path().filename().string();
      std::string const ref = slurp(entry.path());
      if (slurp(outs[1] / name) != ref || slurp(outs[2] / name) != ref) ++mismatches;
    }
  }
  fs::remove_all(root);
  Outcome o;
  o.pass = mismatches == 0 && files > 0;
  o.summary = "reproducibility: " + std::to_string(invocations.size()) + " invocations, " +
              std::to_string(files) + " files, byte mismatches across runs and workers 1/4 = " +
              std::to_string(mismatches);
  return o;
}

}  // namespace

int main() {
  FlipFlop const ff;
  std::vector<std::pair<std::string, std::function<Outcome()>>> const criteria{
      {"C1", c1},
      {"C2", [&] { return c2(ff); }},
      {"C3", [&] { return c3(ff); }},
      {"C4", [&] { return c4(ff); }},
      {"C5", [&] { return c5(ff); }},
      {"C6", [&] { return c6(ff); }},
      {"C7", c7},
      {"C8", c8},
      {"C9", c9},
      {"C10", c10},
  };
  int failed = 0;
  for (auto const& [id, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (std::exception const& e) {
      o.pass = false;
      o.summary = std::string("threw: ") + e.what();
    }
    failed += !o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << id << " " << o.summary << "\n";
    for (auto const& n : o.notes) std::cout << "       note: " << n << "\n";
  }
  std::cout << (10 - failed) << "/10 criteria pass\n";
  return failed == 0 ? 0 : 1;
}
