#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "heatex/errors.hpp"
#include "heatex/parallel.hpp"
#include "heatex/quantum.hpp"

namespace heatex {
namespace {

void require_diagonalizes(Spectrum const& s, HermitianOperator const& h,
                          char const* which) {
  if (s.dim() != h.dim()) {
    throw ValidationError(std::string("local basis for ") + which +
                          " has the wrong dimension");
  }
  ComplexMatrix const rebuilt =
      s.vectors * s.values.cast<Complex>().asDiagonal() * s.vectors.adjoint();
  double const scale = std::max(1.0, max_abs(h.matrix()));
  if (max_abs(rebuilt - h.matrix()) > 1e-10 * scale ||
      unitarity_defect(s.vectors) > 1e-10) {
    throw ValidationError(std::string("local basis does not diagonalize ") +
                          which);
  }
}

double log_partition(RealVector const& energies, double beta) {
  double const e_min = energies.minCoeff();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < energies.size(); ++i) {
    sum += std::exp(-beta * (energies[i] - e_min));
  }
  return -beta * e_min + std::log(sum);
}

double spectral_range(RealVector const& e) {
  return e.maxCoeff() - e.minCoeff();
}

}  // namespace

DensityMatrix initial_state(QuantumExchangeModel const& model,
                            ExchangeTemperatures const& temps) {
  auto const gibbs_a = gibbs_state(model.h_a(), temps.beta_a());
  auto const gibbs_b = gibbs_state(model.h_b(), temps.beta_b());
  return kron(gibbs_a.rho, gibbs_b.rho);
}

UnitaryPropagator propagator(QuantumExchangeModel const& model, double tau) {
  if (!std::isfinite(tau)) throw ConfigError("contact time tau must be finite");
  if (tau == 0.0) return UnitaryPropagator::identity(model.dim());
  ComplexMatrix u = complex_matrix_function(
      model.total_spectrum(),
      [tau](double e) { return std::exp(Complex(0.0, -tau * e)); });
  return UnitaryPropagator(std::move(u), tau);
}

DensityMatrix evolve_state(DensityMatrix const& rho0,
                           UnitaryPropagator const& u) {
  if (rho0.dim() != u.dim()) {
    std::ostringstream os;
    os << "evolve_state: state has dimension " << rho0.dim()
       << " but the propagator has dimension " << u.dim();
    throw ValidationError(os.str());
  }
  return DensityMatrix(u.matrix() * rho0.matrix() * u.matrix().adjoint());
}

char const* to_string(HeatDefinition d) {
  return d == HeatDefinition::via_b ? "via_b" : "via_a";
}

HeatDefinition heat_definition_from_string(std::string const& s) {
  if (s == "via_b") return HeatDefinition::via_b;
  if (s == "via_a") return HeatDefinition::via_a;
  throw ConfigError("q_definition must be 'via_b' or 'via_a', got '" + s + "'");
}

double HeatDistribution::total_probability() const {
  double sum = 0.0;
  for (auto const& a : atoms) sum += a.p;
  return sum;
}

//---------------------------------------------------------------------------//
// Two-point measurement
//---------------------------------------------------------------------------//

HeatDistribution tpm_heat_distribution(QuantumExchangeModel const& model,
                                       ExchangeTemperatures const& temps,
                                       double tau, HeatDefinition definition) {
  return tpm_heat_distribution(model, temps, propagator(model, tau),
                               definition, eig_decompose(model.h_a()),
                               eig_decompose(model.h_b()));
}

HeatDistribution tpm_heat_distribution(QuantumExchangeModel const& model,
                                       ExchangeTemperatures const& temps,
                                       UnitaryPropagator const& u,
                                       HeatDefinition definition,
                                       Spectrum const& local_a,
                                       Spectrum const& local_b) {
  require_diagonalizes(local_a, model.h_a(), "H_A");
  require_diagonalizes(local_b, model.h_b(), "H_B");
  if (u.dim() != model.dim()) {
    throw ValidationError("propagator dimension does not match the model");
  }
  Eigen::Index const da = model.dim_a();
  Eigen::Index const db = model.dim_b();
  Eigen::Index const d = da * db;
  RealVector const& ea = local_a.values;
  RealVector const& eb = local_b.values;

  // Transition amplitudes <m|U|n> in the product eigenbasis |n_a, n_b>.
  ComplexMatrix const basis = kron(local_a.vectors, local_b.vectors);
  ComplexMatrix const amplitudes = basis.adjoint() * u.matrix() * basis;

  double const log_za = log_partition(ea, temps.beta_a());
  double const log_zb = log_partition(eb, temps.beta_b());
  double const floor2 = kAmplitudeFloor * kAmplitudeFloor;

  std::vector<HeatAtom> raw;
  raw.reserve(static_cast<std::size_t>(d * d));
  for (Eigen::Index n = 0; n < d; ++n) {
    Eigen::Index const na = n / db, nb = n % db;
    double const p_n = std::exp(-temps.beta_a() * ea[na] - log_za -
                                temps.beta_b() * eb[nb] - log_zb);
    if (p_n == 0.0) continue;
    for (Eigen::Index m = 0; m < d; ++m) {
      double const t = std::norm(amplitudes(m, n));
      if (t < floor2) continue;
      Eigen::Index const ma = m / db, mb = m % db;
      double const q = definition == HeatDefinition::via_b ? eb[mb] - eb[nb]
                                                           : ea[na] - ea[ma];
      raw.push_back({q, p_n * t});
    }
  }
  std::stable_sort(raw.begin(), raw.end(),
                   [](HeatAtom const& a, HeatAtom const& b) { return a.q < b.q; });

  double const range = definition == HeatDefinition::via_b
                           ? spectral_range(eb)
                           : spectral_range(ea);
  HeatDistribution dist;
  dist.definition = definition;
  dist.binning_tolerance = 1e-9 * (range > 0.0 ? range : 1.0);
  for (auto const& entry : raw) {
    if (!dist.atoms.empty() &&
        entry.q - dist.atoms.back().q <= dist.binning_tolerance) {
      dist.atoms.back().p += entry.p;
    } else {
      dist.atoms.push_back(entry);
    }
  }
  return dist;
}

double log_generating_function(HeatDistribution const& dist,
                               ExchangeTemperatures const& temps, double z) {
  double const rate = -z * temps.delta_beta();
  double peak = -std::numeric_limits<double>::infinity();
  for (auto const& a : dist.atoms) {
    if (a.p > 0.0) peak = std::max(peak, std::log(a.p) + rate * a.q);
  }
  if (!std::isfinite(peak)) {
    throw DomainError("generating function of an empty distribution");
  }
  double sum = 0.0;
  for (auto const& a : dist.atoms) {
    if (a.p > 0.0) sum += std::exp(std::log(a.p) + rate * a.q - peak);
  }
  double const result = peak + std::log(sum);
  if (!std::isfinite(result)) {
    std::ostringstream os;
    os << "generating function is not finite at z = " << z;
    throw DomainError(os.str());
  }
  return result;
}

double generating_function_lhs(HeatDistribution const& dist,
                               ExchangeTemperatures const& temps,
                               RenyiOrder z) {
  double const value = std::exp(log_generating_function(dist, temps, z.value()));
  if (!std::isfinite(value)) {
    std::ostringstream os;
    os << "generating function overflows at z = " << z.value();
    throw DomainError(os.str());
  }
  return value;
}

double moment_from_distribution(HeatDistribution const& dist, int n) {
  if (n < 0) throw DomainError("moment order must be non-negative");
  double sum = 0.0;
  for (auto const& a : dist.atoms) sum += a.p * std::pow(a.q, n);
  return sum;
}

Complex heat_fourier_sum(HeatDistribution const& dist, double u) {
  Complex sum = 0.0;
  for (auto const& a : dist.atoms) {
    sum += a.p * std::exp(Complex(0.0, u * a.q));
  }
  return sum;
}

CharFnCurve characteristic_function(QuantumExchangeModel const& model,
                                    ExchangeTemperatures const& temps,
                                    double tau,
                                    std::vector<double> const& u_grid,
                                    unsigned workers) {
  DensityMatrix const rho0 = initial_state(model, temps);
  ComplexMatrix const u_mat = propagator(model, tau).matrix();
  ComplexMatrix const u_dag = u_mat.adjoint();
  Spectrum const local_b = eig_decompose(model.h_b());
  ComplexMatrix const id_a =
      ComplexMatrix::Identity(model.dim_a(), model.dim_a());

  CharFnCurve curve;
  curve.u_grid = u_grid;
  curve.values.assign(u_grid.size(), Complex(0.0));
  parallel_for(u_grid.size(), workers, [&](std::size_t k) {
    double const u = u_grid[k];
    if (!std::isfinite(u)) throw ConfigError("u grid entries must be finite");
    // e^{iuH_B} acting on the joint space as I (x) e^{iuH_B}.
    ComplexMatrix const phase = kron(
        id_a, complex_matrix_function(local_b, [u](double e) {
          return std::exp(Complex(0.0, u * e));
        }));
    ComplexMatrix const m = phase.adjoint() * u_dag * phase * u_mat;
    curve.values[k] = (rho0.matrix() * m).trace();
  });
  return curve;
}

double ordered_moment(DensityMatrix const& rho0, DensityMatrix const& rho_tau,
                      ExchangeTemperatures const& temps, int n) {
  if (n < 0) throw DomainError("moment order must be non-negative");
  if (n == 0) return 1.0;
  if (temps.delta_beta() == 0.0) {
    throw DomainError(
        "ordered moments are undefined at equal temperatures (delta_beta = 0)");
  }
  SpectralPair const pair(rho0, rho_tau);
  double sum = 0.0;
  double binom = 1.0;
  for (int k = 0; k <= n; ++k) {
    double const sign = ((n - k) % 2 == 0) ? 1.0 : -1.0;
    sum += binom * sign * pair.ordered_log_trace(k, n - k);
    binom = binom * double(n - k) / double(k + 1);
  }
  return sum / std::pow(temps.delta_beta(), n);
}

}  // namespace heatex
