#include <cmath>
#include <sstream>
#include <vector>

#include "heatex/classical.hpp"
#include "heatex/errors.hpp"

namespace heatex {
namespace {

void require_nonempty(TrajectoryEnsemble const& ens) {
  if (ens.pairs.empty()) throw DomainError("ensemble is empty");
}

// beta_a dH_a + beta_b dH_b = -ln[rho0(X1)/rho0(X0)].
double log_density_drop(TrajectoryPair const& pair,
                        ExchangeTemperatures const& temps) {
  return temps.beta_a() * (pair.e_a1 - pair.e_a0) +
         temps.beta_b() * (pair.e_b1 - pair.e_b0);
}

void require_finite_weights(std::vector<double> const& w, double z) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!std::isfinite(w[i])) {
      std::ostringstream os;
      os << "non-finite estimator weight at sample " << i << " (z = " << z
         << ")";
      throw DomainError(os.str());
    }
  }
}

WeightedEstimate summarize(std::vector<double> const& w) {
  WeightedEstimate e;
  Estimate const jk = jackknife_mean(w);
  e.mean = jk.mean;
  e.std_error = jk.std_error;
  e.ess = effective_sample_size(w);
  e.ess_flag = e.ess < kEssFlagFraction * double(w.size());
  return e;
}

}  // namespace

WeightedEstimate estimate_lhs(TrajectoryEnsemble const& ens,
                              ExchangeTemperatures const& temps, double z) {
  require_nonempty(ens);
  std::vector<double> w(ens.pairs.size());
  double const rate = -z * temps.delta_beta();
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = z == 0.0 ? 1.0 : std::exp(rate * heat_of_pair(ens.pairs[i]).q_via_b);
  }
  require_finite_weights(w, z);
  return summarize(w);
}

RenyiEstimate estimate_rhs_renyi(TrajectoryEnsemble const& ens,
                                 ExchangeTemperatures const& temps, double z) {
  require_nonempty(ens);
  std::vector<double> w(ens.pairs.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = z == 0.0 ? 1.0 : std::exp(-z * log_density_drop(ens.pairs[i], temps));
  }
  require_finite_weights(w, z);
  RenyiEstimate e;
  static_cast<WeightedEstimate&>(e) = summarize(w);
  if (std::abs(z - 1.0) >= RenyiOrder::kLimitWindow) {
    e.divergence = jackknife_of_mean(
        w, [z](double m) { return std::log(m) / (z - 1.0); });
  }
  return e;
}

Estimate classical_moment_estimate(TrajectoryEnsemble const& ens,
                                   ExchangeTemperatures const& temps, int n) {
  require_nonempty(ens);
  if (temps.delta_beta() == 0.0) {
    throw DomainError("moment estimate undefined at delta_beta = 0");
  }
  if (n < 0) throw DomainError("moment order must be non-negative");
  std::vector<double> v(ens.pairs.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = std::pow(log_density_drop(ens.pairs[i], temps) / temps.delta_beta(), n);
  }
  return jackknife_mean(v);
}

Estimate heat_moment_estimate(TrajectoryEnsemble const& ens, int n) {
  require_nonempty(ens);
  if (n < 0) throw DomainError("moment order must be non-negative");
  std::vector<double> v(ens.pairs.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = std::pow(heat_of_pair(ens.pairs[i]).q_via_b, n);
  }
  return jackknife_mean(v);
}

}  // namespace heatex
