#pragma once
//! \file renyi.hpp
//! Petz-type Renyi divergences S_z[rho||sigma] = ln Tr[rho^z sigma^{1-z}]/(z-1)
//! and the relative entropy, in nats.

#include <vector>

#include "heatex/operator.hpp"

namespace heatex {

//! Renyi order; orders within kLimitWindow of 1 are handled by the limit.
class RenyiOrder {
 public:
  static constexpr double kLimitWindow = 1e-6;

  explicit RenyiOrder(double z);
  double value() const { return z_; }
  bool is_limit() const { return std::abs(z_ - 1.0) < kLimitWindow; }

 private:
  double z_;
};

struct DivergenceCurve {
  std::vector<double> orders;
  std::vector<double> values;
  double limit_value_at_1 = 0.0;
};

//---------------------------------------------------------------------------//
/*!
 * Pairwise spectral data for a fixed ordered pair (first, second).
 *
 * Holds the eigenvalues of both arguments and the squared overlaps
 * |<first_i|second_j>|^2, so every trace Tr[f(first) g(second)] costs
 * O(d^2) once built. Argument order is fixed at construction.
 */
class SpectralPair {
 public:
  SpectralPair(DensityMatrix const& first, DensityMatrix const& second);

  //! ln Tr[first^z second^{1-z}] = (z-1) S_z[first||second].
  double log_trace_power(double z) const;
  //! Tr[first (ln first - ln second)].
  double relative_entropy() const;
  //! Tr[second (ln second)^k (ln first)^l]; used for ordered moments.
  double ordered_log_trace(int k_second, int l_first) const;

  Eigen::Index dim() const { return first_values_.size(); }

 private:
  RealVector first_values_;
  RealVector second_values_;
  RealMatrix overlap_;  // |<first_i|second_j>|^2
  bool first_full_rank_;
  bool second_full_rank_;
};

double renyi_divergence(DensityMatrix const& rho, DensityMatrix const& sigma,
                        RenyiOrder z);
double relative_entropy(DensityMatrix const& rho, DensityMatrix const& sigma);

//! Sweep S_z[rho||sigma] across a grid; entries within 1e-6 of 1 take the
//! relative entropy. Grid points are evaluated independently and stored by
//! index; `workers` > 1 evaluates them concurrently.
DivergenceCurve divergence_curve(DensityMatrix const& rho,
                                 DensityMatrix const& sigma,
                                 std::vector<double> const& z_grid,
                                 unsigned workers = 1);

}  // namespace heatex
