#include <doctest.h>

#include <cmath>

#include "heatex/errors.hpp"
#include "heatex/operator.hpp"
#include "support.hpp"

using namespace heatex;
using heatex::testing::random_density;
using heatex::testing::random_hermitian;
using heatex::testing::random_unitary;

TEST_CASE("eig_decompose reconstructs the operator with ascending values") {
  CounterStream rng(7, 0);
  for (int d : {1, 2, 5, 8}) {
    HermitianOperator const h = random_hermitian(d, rng);
    Spectrum const s = eig_decompose(h);
    for (Eigen::Index i = 1; i < s.dim(); ++i) CHECK(s.values[i - 1] <= s.values[i]);
    ComplexMatrix const back =
        s.vectors * s.values.cast<Complex>().asDiagonal() * s.vectors.adjoint();
    CHECK(max_abs(back - h.matrix()) < 1e-12);
    CHECK(unitarity_defect(s.vectors) < 1e-12);
  }
}

TEST_CASE("Hermitian validation rejects and names the offending entry") {
  ComplexMatrix m = ComplexMatrix::Identity(3, 3);
  m(0, 2) = Complex(0.0, 1.0);
  CHECK_THROWS_AS(HermitianOperator{m}, ValidationError);
  try {
    HermitianOperator{m};
  } catch (ValidationError const& e) {
    CHECK(std::string(e.what()).find('0') != std::string::npos);
  }
  CHECK_THROWS_AS(HermitianOperator{ComplexMatrix::Zero(2, 3)}, ValidationError);
}

TEST_CASE("unitary propagator validation") {
  CounterStream rng(8, 0);
  CHECK_NOTHROW(UnitaryPropagator(random_unitary(4, rng), 1.0));
  ComplexMatrix bad = ComplexMatrix::Identity(2, 2) * 1.01;
  CHECK_THROWS_AS(UnitaryPropagator(bad, 1.0), ValidationError);
}

TEST_CASE("density matrix validation and clipping") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  DensityMatrix const pure(m);
  CHECK_FALSE(pure.full_rank());
  ComplexMatrix bad_trace = ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix{bad_trace}, ValidationError);
  ComplexMatrix negative = ComplexMatrix::Zero(2, 2);
  negative(0, 0) = 1.2;
  negative(1, 1) = -0.2;
  CHECK_THROWS_AS(DensityMatrix{negative}, ValidationError);
}

TEST_CASE("matrix functions: exp/log inverse, powers compose") {
  CounterStream rng(9, 0);
  DensityMatrix const rho = random_density(4, rng);
  ComplexMatrix const log_rho = matrix_log(rho);
  HermitianOperator const h(0.5 * (log_rho + log_rho.adjoint()));
  CHECK(max_abs(matrix_exp(h, 1.0) - rho.matrix()) < 1e-12);
  ComplexMatrix const half = matrix_power(rho, 0.5);
  CHECK(max_abs(half * half - rho.matrix()) < 1e-12);
  CHECK(max_abs(matrix_power(rho, 0.0) - ComplexMatrix::Identity(4, 4)) < 1e-12);
  CHECK(max_abs(matrix_power(rho, -1.0) * rho.matrix() -
                ComplexMatrix::Identity(4, 4)) < 1e-9);
}

TEST_CASE("matrix_power domain on rank-deficient states") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  DensityMatrix const pure(m);
  CHECK(max_abs(matrix_power(pure, 2.0) - m) < 1e-15);
  CHECK_THROWS_AS(matrix_power(pure, -1.0), DomainError);
  CHECK_THROWS_AS(matrix_power(pure, 0.5), DomainError);
  CHECK_THROWS_AS(matrix_log(pure), DomainError);
}

TEST_CASE("kron and partial traces") {
  CounterStream rng(10, 0);
  DensityMatrix const a = random_density(2, rng);
  DensityMatrix const b = random_density(3, rng);
  DensityMatrix const ab = kron(a, b);
  CHECK(ab.dim() == 6);
  CHECK(max_abs(ab.matrix() - kron(a.matrix(), b.matrix())) < 1e-12);
  CHECK(max_abs(partial_trace_b(ab.matrix(), 2, 3) - a.matrix()) < 1e-12);
  CHECK(max_abs(partial_trace_a(ab.matrix(), 2, 3) - b.matrix()) < 1e-12);
  // Product spectrum: eigenvalues are pairwise products.
  double prod = 1.0;
  for (Eigen::Index i = 0; i < ab.dim(); ++i) prod *= ab.spectrum().values[i];
  double pa = a.spectrum().values.prod(), pb = b.spectrum().values.prod();
  CHECK(prod == doctest::Approx(std::pow(pa, 3) * std::pow(pb, 2)).epsilon(1e-10));
}

TEST_CASE("gibbs_state: populations and log partition") {
  RealVector e(3);
  e << -1.0, 0.0, 2.0;
  auto const g = gibbs_state(HermitianOperator::diagonal(e), 0.7);
  double z = 0.0;
  for (int i = 0; i < 3; ++i) z += std::exp(-0.7 * e[i]);
  CHECK(g.log_partition == doctest::Approx(std::log(z)).epsilon(1e-14));
  for (int i = 0; i < 3; ++i) {
    CHECK(g.rho.matrix()(i, i).real() ==
          doctest::Approx(std::exp(-0.7 * e[i]) / z).epsilon(1e-13));
  }
  // Large beta does not overflow thanks to the ground-state shift.
  auto const cold = gibbs_state(HermitianOperator::diagonal(e), 1e4);
  CHECK(cold.rho.matrix()(0, 0).real() == doctest::Approx(1.0));
  CHECK_THROWS_AS(gibbs_state(HermitianOperator::diagonal(e), 0.0), ConfigError);
  CHECK_THROWS_AS(gibbs_state(HermitianOperator::diagonal(e), NAN), ConfigError);
}

TEST_CASE("commutator of commuting operators vanishes") {
  RealVector d(3);
  d << 1, 2, 3;
  auto const a = HermitianOperator::diagonal(d);
  CHECK(max_abs(commutator(a.matrix(), a.scaled(2.0).matrix())) == 0.0);
  CHECK(hermiticity_defect(a.matrix()) == 0.0);
}
