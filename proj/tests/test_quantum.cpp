#include <doctest.h>

#include <cmath>

#include "heatex/errors.hpp"
#include "heatex/quantum.hpp"
#include "heatex/renyi.hpp"
#include "support.hpp"

using namespace heatex;

namespace {

QuantumModelSpec flip_flop(double g = 0.3) {
  QuantumModelSpec s;
  s.kind = "flip_flop";
  s.omega = 1.0;
  s.g = g;
  return s;
}

double max_identity_defect(QuantumExchangeModel const& m, ExchangeTemperatures const& t,
                           double tau) {
  DensityMatrix const rho0 = initial_state(m, t);
  DensityMatrix const rho_tau = evolve_state(rho0, propagator(m, tau));
  HeatDistribution const d = tpm_heat_distribution(m, t, tau, HeatDefinition::via_b);
  SpectralPair const pair(rho0, rho_tau);
  double worst = 0.0;
  for (int i = -20; i <= 30; ++i) {
    double const z = 0.1 * i;
    worst = std::max(worst, std::abs(log_generating_function(d, t, z) -
                                     pair.log_trace_power(z)));
  }
  return worst;
}

}  // namespace

TEST_CASE("catalog: conserving flags") {
  CHECK(build_model(flip_flop()).conserving());
  QuantumModelSpec det;
  det.kind = "detuned_flip_flop";
  det.omega_a = 1.0;
  det.omega_b = 1.3;
  det.g = 0.2;
  CHECK_FALSE(build_model(det).conserving());
  QuantumModelSpec osc;
  osc.kind = "oscillators";
  osc.levels = 4;
  osc.omega_a = osc.omega_b = 1.0;
  osc.g = 0.1;
  CHECK(build_model(osc).conserving());
  QuantumModelSpec rnd;
  rnd.kind = "random";
  rnd.dim_a = 2;
  rnd.dim_b = 3;
  rnd.g = 0.1;
  CHECK(build_model(rnd).dim() == 6);
  CHECK_FALSE(build_model(rnd).conserving());
  QuantumModelSpec bad;
  bad.kind = "nope";
  CHECK_THROWS_AS(build_model(bad), ConfigError);
}

TEST_CASE("random model is reproducible from its seed") {
  QuantumModelSpec rnd;
  rnd.kind = "random";
  rnd.dim_a = 3;
  rnd.dim_b = 2;
  rnd.seed = 5;
  auto const a = build_model(rnd), b = build_model(rnd);
  CHECK(a.total().matrix() == b.total().matrix());
  rnd.seed = 6;
  CHECK(build_model(rnd).total().matrix() != a.total().matrix());
}

TEST_CASE("Rabi oracle: flip-flop P(Q) atom by atom") {
  for (double tau : {0.5, 2.0, 7.3}) {
    ExchangeTemperatures const t(0.5, 1.0);
    auto const m = build_model(flip_flop(0.3));
    HeatDistribution const d = tpm_heat_distribution(m, t, tau, HeatDefinition::via_b);
    auto const o = testing::rabi_oracle(1.0, 0.3, tau, 0.5, 1.0);
    REQUIRE(d.atoms.size() == 3);
    CHECK(std::abs(d.atoms[0].q - o.q_minus) < 1e-12);
    CHECK(std::abs(d.atoms[0].p - o.p_minus) < 1e-12);
    CHECK(std::abs(d.atoms[1].q) < 1e-12);
    CHECK(std::abs(d.atoms[1].p - o.p_zero) < 1e-12);
    CHECK(std::abs(d.atoms[2].q - o.q_plus) < 1e-12);
    CHECK(std::abs(d.atoms[2].p - o.p_plus) < 1e-12);
  }
}

TEST_CASE("Rabi oracle: propagator off-diagonal amplitude") {
  double const g = 0.3, tau = 2.0;
  auto const u = propagator(build_model(flip_flop(g)), tau);
  // Basis index = 2*a + b with 0 = up: |up,dn> = 1, |dn,up> = 2.
  CHECK(std::abs(std::abs(u.matrix()(2, 1)) - std::abs(std::sin(g * tau))) < 1e-12);
  CHECK(unitarity_defect(u.matrix()) < 1e-12);
  CHECK(propagator(build_model(flip_flop(g)), 0.0).matrix() ==
        ComplexMatrix::Identity(4, 4));
}

TEST_CASE("exact identity on conserving models") {
  ExchangeTemperatures const t(0.5, 1.0);
  CHECK(max_identity_defect(build_model(flip_flop()), t, 2.0) < 1e-10);
  QuantumModelSpec osc;
  osc.kind = "oscillators";
  osc.levels = 4;
  osc.omega_a = osc.omega_b = 1.0;
  osc.g = 0.2;
  CHECK(max_identity_defect(build_model(osc), t, 3.0) < 1e-10);
  // Hotter B (delta_beta < 0) works the same way.
  CHECK(max_identity_defect(build_model(flip_flop()), ExchangeTemperatures(2.0, 0.3),
                            1.1) < 1e-10);
}

TEST_CASE("non-conserving defect shrinks with coupling") {
  ExchangeTemperatures const t(0.5, 1.0);
  QuantumModelSpec det;
  det.kind = "detuned_flip_flop";
  det.omega_a = 1.0;
  det.omega_b = 1.3;
  det.g = 0.2;
  auto const base = build_model(det);
  double prev = 1e300;
  for (double g : {0.2, 0.1, 0.05, 0.025}) {
    double const d = max_identity_defect(base.with_coupling(g), t, 2.0);
    CHECK(d > 1e-8);
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("zero coupling: no heat and rho(tau) = rho(0)") {
  ExchangeTemperatures const t(0.5, 1.0);
  auto const m = build_model(flip_flop(0.0));
  auto const d = tpm_heat_distribution(m, t, 2.0, HeatDefinition::via_b);
  REQUIRE(d.atoms.size() == 1);
  CHECK(d.atoms[0].q == 0.0);
  CHECK(max_identity_defect(m, t, 2.0) < 1e-12);
}

TEST_CASE("via_a equals via_b on conserving models only") {
  ExchangeTemperatures const t(0.5, 1.0);
  auto const m = build_model(flip_flop());
  auto const b = tpm_heat_distribution(m, t, 2.0, HeatDefinition::via_b);
  auto const a = tpm_heat_distribution(m, t, 2.0, HeatDefinition::via_a);
  REQUIRE(a.atoms.size() == b.atoms.size());
  for (std::size_t i = 0; i < a.atoms.size(); ++i) {
    CHECK(std::abs(a.atoms[i].q - b.atoms[i].q) < 1e-12);
    CHECK(std::abs(a.atoms[i].p - b.atoms[i].p) < 1e-12);
  }
  QuantumModelSpec det;
  det.kind = "detuned_flip_flop";
  det.omega_a = 1.0;
  det.omega_b = 1.3;
  det.g = 0.2;
  auto const md = build_model(det);
  auto const bd = tpm_heat_distribution(md, t, 2.0, HeatDefinition::via_b);
  auto const ad = tpm_heat_distribution(md, t, 2.0, HeatDefinition::via_a);
  CHECK(std::abs(moment_from_distribution(bd, 1) - moment_from_distribution(ad, 1)) >
        1e-6);
}

TEST_CASE("degenerate local levels: remixing the eigenbasis leaves P(Q) unchanged") {
  RealVector ea(3), eb(2);
  ea << 0.0, 1.0, 1.0;
  eb << 0.0, 1.0;
  CounterStream rng(31, 0);
  HermitianOperator const hab = testing::random_hermitian(6, rng);
  QuantumExchangeModel const m(HermitianOperator::diagonal(ea),
                               HermitianOperator::diagonal(eb), hab, 0.2);
  ExchangeTemperatures const t(0.4, 1.1);
  UnitaryPropagator const u = propagator(m, 1.7);
  Spectrum const sa = eig_decompose(m.h_a());
  Spectrum const sb = eig_decompose(m.h_b());
  // Rotate inside the degenerate pair of A.
  Spectrum rot = sa;
  double const th = 0.7;
  ComplexMatrix r = ComplexMatrix::Identity(3, 3);
  r(1, 1) = std::cos(th);
  r(1, 2) = Complex(0, std::sin(th));
  r(2, 1) = Complex(0, std::sin(th));
  r(2, 2) = std::cos(th);
  rot.vectors = sa.vectors * r;
  for (auto def : {HeatDefinition::via_b, HeatDefinition::via_a}) {
    auto const d0 = tpm_heat_distribution(m, t, u, def, sa, sb);
    auto const d1 = tpm_heat_distribution(m, t, u, def, rot, sb);
    REQUIRE(d0.atoms.size() == d1.atoms.size());
    for (std::size_t i = 0; i < d0.atoms.size(); ++i) {
      CHECK(std::abs(d0.atoms[i].q - d1.atoms[i].q) < 1e-12);
      CHECK(std::abs(d0.atoms[i].p - d1.atoms[i].p) < 1e-12);
    }
  }
}

TEST_CASE("characteristic function equals the Fourier sum of P(Q)") {
  ExchangeTemperatures const t(0.5, 1.0);
  QuantumModelSpec rnd;
  rnd.kind = "random";
  rnd.dim_a = 2;
  rnd.dim_b = 3;
  rnd.g = 0.4;
  auto const m = build_model(rnd);  // non-conserving is fine here
  auto const d = tpm_heat_distribution(m, t, 1.3, HeatDefinition::via_b);
  std::vector<double> u;
  for (int i = -50; i <= 50; ++i) u.push_back(0.2 * i);
  auto const c1 = characteristic_function(m, t, 1.3, u, 1);
  auto const c4 = characteristic_function(m, t, 1.3, u, 4);
  CHECK(c1.values == c4.values);
  for (std::size_t i = 0; i < u.size(); ++i) {
    CHECK(std::abs(c1.values[i] - heat_fourier_sum(d, u[i])) < 1e-10);
  }
  CHECK(std::abs(c1.values[50] - Complex(1.0, 0.0)) < 1e-13);  // u = 0
}

TEST_CASE("ordered moments match P(Q) moments when conserving") {
  ExchangeTemperatures const t(0.5, 1.0);
  auto const m = build_model(flip_flop());
  DensityMatrix const rho0 = initial_state(m, t);
  DensityMatrix const rho_tau = evolve_state(rho0, propagator(m, 2.0));
  auto const d = tpm_heat_distribution(m, t, 2.0, HeatDefinition::via_b);
  CHECK(ordered_moment(rho0, rho_tau, t, 0) == 1.0);
  for (int n = 1; n <= 4; ++n) {
    double const a = ordered_moment(rho0, rho_tau, t, n);
    double const b = moment_from_distribution(d, n);
    CHECK(std::abs(a - b) <= 1e-8 * std::max(std::abs(a), std::abs(b)));
  }
  // Average heat is the relative entropy.
  CHECK(std::abs(t.delta_beta() * moment_from_distribution(d, 1) -
                 relative_entropy(rho_tau, rho0)) < 1e-10);
  CHECK_THROWS_AS(ordered_moment(rho0, rho_tau, ExchangeTemperatures(1, 1), 2),
                  DomainError);
}

TEST_CASE("temperatures validation") {
  CHECK_THROWS_AS(ExchangeTemperatures(-1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(ExchangeTemperatures(1.0, INFINITY), ConfigError);
  CHECK(ExchangeTemperatures(0.5, 1.0).delta_beta() == 0.5);
}

TEST_CASE("heat definition parsing") {
  CHECK(heat_definition_from_string("via_a") == HeatDefinition::via_a);
  CHECK(std::string(to_string(HeatDefinition::via_b)) == "via_b");
  CHECK_THROWS_AS(heat_definition_from_string("via_c"), ConfigError);
}
