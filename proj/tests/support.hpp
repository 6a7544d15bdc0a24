#pragma once
// Shared helpers for the test binaries: random states and the closed-form
// oracles (Rabi flip-flop, Gaussian exponential moments).

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "heatex/classical.hpp"
#include "heatex/operator.hpp"
#include "heatex/quantum.hpp"
#include "heatex/rng.hpp"

namespace heatex::testing {

inline ComplexMatrix ginibre(Eigen::Index d, CounterStream& rng) {
  ComplexMatrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  }
  return g;
}

inline ComplexMatrix random_unitary(Eigen::Index d, CounterStream& rng) {
  Eigen::HouseholderQR<ComplexMatrix> qr(ginibre(d, rng));
  return qr.householderQ() * ComplexMatrix::Identity(d, d);
}

//! Full-rank density matrix G G^dagger / Tr (mixed with a little identity).
inline DensityMatrix random_density(Eigen::Index d, CounterStream& rng) {
  ComplexMatrix g = ginibre(d, rng);
  ComplexMatrix m = g * g.adjoint();
  m += 0.01 * m.trace().real() * ComplexMatrix::Identity(d, d);
  m /= m.trace();
  ComplexMatrix const h = 0.5 * (m + m.adjoint());
  return DensityMatrix(h);
}

inline HermitianOperator random_hermitian(Eigen::Index d, CounterStream& rng) {
  ComplexMatrix g = ginibre(d, rng);
  return HermitianOperator(0.5 * (g + g.adjoint()));
}

//! Closed-form TPM distribution of the resonant flip-flop model (via_b):
//! atoms at -omega, 0, +omega.
struct RabiAtoms {
  double q_minus, p_minus, p_zero, p_plus, q_plus;
};
inline RabiAtoms rabi_oracle(double omega, double g, double tau, double beta_a,
                             double beta_b) {
  // Single-spin populations with H = (omega/2) sigma_z.
  auto up = [omega](double beta) { return 1.0 / (1.0 + std::exp(beta * omega)); };
  double const a_up = up(beta_a), a_dn = 1.0 - a_up;
  double const b_up = up(beta_b), b_dn = 1.0 - b_up;
  double const s2 = std::sin(g * tau) * std::sin(g * tau);
  // |up,dn> -> |dn,up>: B gains omega.
  double const p_plus = a_up * b_dn * s2;
  double const p_minus = a_dn * b_up * s2;
  return {-omega, p_minus, 1.0 - p_plus - p_minus, p_plus, omega};
}

//! Gaussian oracle for the harmonic model with the exact propagator.
//! Coordinates y = (q_a, q_b, p_a, p_b); y0 ~ N(0, Sigma) under the product
//! Gibbs state, and E[exp(-y^T A y)] = det(I + 2 S A S)^{-1/2}, S = Sigma^{1/2}.
class GaussianOracle {
 public:
  GaussianOracle(ClassicalExchangeModel const& model, ExchangeTemperatures const& t,
                 double tau)
      : temps_(t) {
    auto const& s = model.spec();
    int const da = s.dof_a, db = s.dof_b, n = da + db;
    RealMatrix const m = LinearPropagator(model, tau).matrix();
    RealMatrix ka = RealMatrix::Zero(2 * n, 2 * n), kb = ka;
    sqrt_sigma_ = RealVector::Zero(2 * n);
    for (int i = 0; i < da; ++i) {
      ka(i, i) = 0.5 * s.omega_a * s.omega_a;
      ka(n + i, n + i) = 0.5;
      sqrt_sigma_[i] = 1.0 / (s.omega_a * std::sqrt(t.beta_a()));
      sqrt_sigma_[n + i] = 1.0 / std::sqrt(t.beta_a());
    }
    for (int i = 0; i < db; ++i) {
      kb(da + i, da + i) = 0.5 * s.omega_b * s.omega_b;
      kb(n + da + i, n + da + i) = 0.5;
      sqrt_sigma_[da + i] = 1.0 / (s.omega_b * std::sqrt(t.beta_b()));
      sqrt_sigma_[n + da + i] = 1.0 / std::sqrt(t.beta_b());
    }
    d_a_ = m.transpose() * ka * m - ka;
    d_b_ = m.transpose() * kb * m - kb;
  }

  //! E[exp(-y^T A y)], NaN when the integral diverges.
  double gaussian_mean(RealMatrix const& a) const {
    RealMatrix const sym = 0.5 * (a + a.transpose());
    RealMatrix const s = sqrt_sigma_.asDiagonal();
    RealMatrix const b =
        RealMatrix::Identity(a.rows(), a.cols()) + 2.0 * s * sym * s;
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(b);
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      if (!(es.eigenvalues()[i] > 0.0)) return std::nan("");
      log_det += std::log(es.eigenvalues()[i]);
    }
    return std::exp(-0.5 * log_det);
  }

  //! <exp(-z dbeta dH_b)> and its per-sample variance.
  double lhs(double z) const { return gaussian_mean(z * temps_.delta_beta() * d_b_); }
  double lhs_variance(double z) const {
    return gaussian_mean(2.0 * z * temps_.delta_beta() * d_b_) - lhs(z) * lhs(z);
  }
  //! <exp(-z (beta_a dH_a + beta_b dH_b))> and its per-sample variance.
  double rhs(double z) const { return gaussian_mean(z * drop()); }
  double rhs_variance(double z) const {
    return gaussian_mean(2.0 * z * drop()) - rhs(z) * rhs(z);
  }

 private:
  RealMatrix drop() const {
    return temps_.beta_a() * d_a_ + temps_.beta_b() * d_b_;
  }
  ExchangeTemperatures temps_;
  RealVector sqrt_sigma_;
  RealMatrix d_a_, d_b_;
};

}  // namespace heatex::testing
