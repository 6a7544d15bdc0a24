#include "heatex/renyi.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "heatex/errors.hpp"
#include "heatex/parallel.hpp"

namespace heatex {
namespace {

// Exponent of lambda^p in a trace, or nullopt-like -inf when the term
// vanishes (zero eigenvalue raised to a non-negative power: the support
// projector convention for p = 0).
double log_power(double lambda, double p, char const* which, double z) {
  if (lambda > 0.0) return p * std::log(lambda);
  if (p >= 0.0) return -std::numeric_limits<double>::infinity();
  std::ostringstream os;
  os << "Renyi order z = " << z << " needs a full-rank " << which
     << " argument (zero eigenvalue raised to power " << p << ")";
  throw DomainError(os.str());
}

}  // namespace

RenyiOrder::RenyiOrder(double z) : z_(z) {
  if (!std::isfinite(z)) {
    throw DomainError("Renyi order must be finite");
  }
}

SpectralPair::SpectralPair(DensityMatrix const& first,
                           DensityMatrix const& second)
    : first_values_(first.spectrum().values),
      second_values_(second.spectrum().values),
      first_full_rank_(first.full_rank()),
      second_full_rank_(second.full_rank()) {
  if (first.dim() != second.dim()) {
    throw ValidationError("divergence arguments have different dimensions");
  }
  ComplexMatrix const w =
      first.spectrum().vectors.adjoint() * second.spectrum().vectors;
  overlap_ = w.cwiseAbs2();
}

double SpectralPair::log_trace_power(double z) const {
  Eigen::Index const d = dim();
  RealVector la(d), lb(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    la[i] = log_power(first_values_[i], z, "first", z);
    lb[i] = log_power(second_values_[i], 1.0 - z, "second", z);
  }
  double peak = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!std::isfinite(la[i])) continue;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (!std::isfinite(lb[j]) || overlap_(i, j) <= 0.0) continue;
      peak = std::max(peak, la[i] + lb[j] + std::log(overlap_(i, j)));
    }
  }
  if (!std::isfinite(peak)) {
    throw DomainError("Tr[rho^z sigma^(1-z)] vanishes: disjoint supports");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!std::isfinite(la[i])) continue;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (!std::isfinite(lb[j]) || overlap_(i, j) <= 0.0) continue;
      sum += overlap_(i, j) * std::exp(la[i] + lb[j] - peak);
    }
  }
  return peak + std::log(sum);
}

double SpectralPair::relative_entropy() const {
  if (!second_full_rank_) {
    throw DomainError("relative entropy needs a full-rank second argument");
  }
  Eigen::Index const d = dim();
  double entropy_term = 0.0;
  double cross_term = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    double const a = first_values_[i];
    if (a <= 0.0) continue;
    entropy_term += a * std::log(a);
    for (Eigen::Index j = 0; j < d; ++j) {
      cross_term += a * overlap_(i, j) * std::log(second_values_[j]);
    }
  }
  return entropy_term - cross_term;
}

double SpectralPair::ordered_log_trace(int k_second, int l_first) const {
  if (!first_full_rank_ || !second_full_rank_) {
    throw DomainError("ordered log traces need full-rank arguments");
  }
  Eigen::Index const d = dim();
  double sum = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    double const b = second_values_[j];
    double const left = b * std::pow(std::log(b), k_second);
    double inner = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      inner += overlap_(i, j) * std::pow(std::log(first_values_[i]), l_first);
    }
    sum += left * inner;
  }
  return sum;
}

double renyi_divergence(DensityMatrix const& rho, DensityMatrix const& sigma,
                        RenyiOrder z) {
  if (z.is_limit()) {
    std::ostringstream os;
    os << "Renyi order z = " << z.value() << " is within "
       << RenyiOrder::kLimitWindow << " of 1; use relative_entropy";
    throw DomainError(os.str());
  }
  SpectralPair const pair(rho, sigma);
  return pair.log_trace_power(z.value()) / (z.value() - 1.0);
}

double relative_entropy(DensityMatrix const& rho, DensityMatrix const& sigma) {
  return SpectralPair(rho, sigma).relative_entropy();
}

DivergenceCurve divergence_curve(DensityMatrix const& rho,
                                 DensityMatrix const& sigma,
                                 std::vector<double> const& z_grid,
                                 unsigned workers) {
  SpectralPair const pair(rho, sigma);
  DivergenceCurve curve;
  curve.orders = z_grid;
  curve.values.assign(z_grid.size(), 0.0);
  curve.limit_value_at_1 = pair.relative_entropy();
  parallel_for(z_grid.size(), workers, [&](std::size_t k) {
    RenyiOrder const z(z_grid[k]);
    try {
      curve.values[k] = z.is_limit()
                            ? curve.limit_value_at_1
                            : pair.log_trace_power(z.value()) /
                                  (z.value() - 1.0);
    } catch (DomainError const& e) {
      std::ostringstream os;
      os << "at z = " << z.value() << ": " << e.what();
      throw DomainError(os.str());
    }
  });
  return curve;
}

}  // namespace heatex
