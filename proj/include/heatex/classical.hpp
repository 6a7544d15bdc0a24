#pragma once
//! \file classical.hpp
//! Classical bipartite Hamiltonian systems: Gibbs sampling, symplectic
//! dynamics and Monte Carlo heat-exchange estimators.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "heatex/operator.hpp"
#include "heatex/quantum.hpp"
#include "heatex/stats.hpp"

namespace heatex {

//! Phase-space point X = (X^A, X^B), unit masses.
struct PhaseSpacePoint {
  std::vector<double> q_a, p_a, q_b, p_b;

  bool finite() const;
  bool operator==(PhaseSpacePoint const&) const = default;
};

struct ClassicalModelSpec {
  std::string kind = "harmonic_bilinear";
  int dof_a = 1;
  int dof_b = 1;
  double omega_a = 1.0;
  double omega_b = 1.0;
  double epsilon = 0.05;
};

std::vector<CatalogEntry> const& classical_catalog();

enum class EnergyTerm { a, b, ab, total };

//---------------------------------------------------------------------------//
/*!
 * Two sets of harmonic oscillators coupled pairwise (dof i of A with dof i
 * of B, for i < min(dof_a, dof_b)).
 *
 * - harmonic_bilinear: H_AB = epsilon * sum_i q_a,i q_b,i
 * - harmonic_quartic:  H_AB = epsilon * sum_i q_a,i^2 q_b,i^2
 */
class ClassicalExchangeModel {
 public:
  enum class Coupling { bilinear, quartic };

  explicit ClassicalExchangeModel(ClassicalModelSpec spec);

  ClassicalModelSpec const& spec() const { return spec_; }
  int dof_a() const { return spec_.dof_a; }
  int dof_b() const { return spec_.dof_b; }
  double coupling_scale() const { return spec_.epsilon; }
  Coupling coupling() const { return coupling_; }
  //! All three energy terms are quadratic forms.
  bool quadratic() const;

  double energy_a(std::vector<double> const& q, std::vector<double> const& p) const;
  double energy_b(std::vector<double> const& q, std::vector<double> const& p) const;
  double energy_ab(std::vector<double> const& q_a,
                   std::vector<double> const& q_b) const;
  double energy(EnergyTerm term, PhaseSpacePoint const& x) const;

  //! Gradient of the chosen term with respect to every coordinate.
  PhaseSpacePoint gradient(EnergyTerm term, PhaseSpacePoint const& x) const;

  //! Stiffness matrix of the total potential over (q_a, q_b); quadratic only.
  RealMatrix stiffness() const;
  //! Largest normal-mode frequency; quadratic only.
  double max_frequency() const;

  PhaseSpacePoint zero_point() const;
  ClassicalExchangeModel with_coupling(double epsilon) const;

  //! Flat potential force -dV/dq over (q_a, q_b) for the total Hamiltonian.
  void forces(double const* q, double* f) const;

 private:
  ClassicalModelSpec spec_;
  Coupling coupling_;
};

//---------------------------------------------------------------------------//
// Dynamics
//---------------------------------------------------------------------------//

enum class PropagationMethod { automatic, exact, verlet };
char const* to_string(PropagationMethod m);
PropagationMethod propagation_method_from_string(std::string const& s);

//! Velocity Verlet over duration tau (negative tau integrates backward).
//! dt must divide |tau| within 1e-12 relative and satisfy
//! dt <= 0.1 / omega_bound.
PhaseSpacePoint integrate_verlet(ClassicalExchangeModel const& model,
                                 PhaseSpacePoint const& x0, double tau,
                                 double dt, double omega_bound);

//! Exact flow of a quadratic Hamiltonian over a fixed duration, from the
//! normal modes of the stiffness matrix.
class LinearPropagator {
 public:
  LinearPropagator(ClassicalExchangeModel const& model, double tau);
  PhaseSpacePoint apply(PhaseSpacePoint const& x0) const;
  RealMatrix const& matrix() const { return m_; }

 private:
  int dof_a_, dof_b_;
  RealMatrix m_;  // acts on (q_a, q_b, p_a, p_b)
};

struct ProtocolSettings {
  double tau = 5.0;
  PropagationMethod method = PropagationMethod::automatic;
  double dt = 1e-3;
  //! Required for Verlet on non-quadratic models.
  std::optional<double> omega_bound;
  //! Allowed |H(X1) - H(X0)| per unit contact time.
  double drift_budget = 1e-8;
};

//! Maps X0 to X1 under the full Hamiltonian with the chosen integrator.
class TrajectoryMap {
 public:
  TrajectoryMap(ClassicalExchangeModel const& model,
                ProtocolSettings const& protocol);
  PhaseSpacePoint operator()(PhaseSpacePoint const& x0) const;
  PropagationMethod method() const { return method_; }
  //! Largest frequency used for the stability check (0 for exact flows).
  double omega_bound() const { return omega_bound_; }
  //! Drift allowed for a trajectory starting at total energy e0.
  double drift_allowance(double e0) const;

 private:
  ClassicalExchangeModel model_;
  ProtocolSettings protocol_;
  PropagationMethod method_;
  double omega_bound_ = 0.0;
  std::optional<LinearPropagator> linear_;
};

//---------------------------------------------------------------------------//
// Sampling
//---------------------------------------------------------------------------//

enum class SamplerMethod { automatic, exact, metropolis };
char const* to_string(SamplerMethod m);
SamplerMethod sampler_method_from_string(std::string const& s);

struct SamplerSettings {
  std::size_t n_samples = 100000;
  std::uint64_t seed = 12345;
  SamplerMethod method = SamplerMethod::automatic;
  int burn_in_sweeps = 10000;
  int thin = 10;
  int chains = 64;
};

struct SamplingDiagnostics {
  SamplerMethod method = SamplerMethod::exact;
  double acceptance = 1.0;  //!< mean post-burn-in acceptance (Metropolis)
  std::vector<std::string> warnings;
};

struct InitialSamples {
  std::vector<PhaseSpacePoint> points;
  SamplingDiagnostics diagnostics;
};

//! Draws X0 from e^{-(beta_a H_a + beta_b H_b)}/(Z_a Z_b), deterministic in
//! the seed and independent of `workers`.
InitialSamples sample_initial(ClassicalExchangeModel const& model,
                              ExchangeTemperatures const& temps,
                              SamplerSettings const& settings,
                              unsigned workers = 1);

//! ln rho0(X) up to the normalization, for the uncoupled product density.
double log_initial_weight(ClassicalExchangeModel const& model,
                          ExchangeTemperatures const& temps,
                          PhaseSpacePoint const& x);

//---------------------------------------------------------------------------//
// Ensembles and estimators
//---------------------------------------------------------------------------//

struct TrajectoryPair {
  PhaseSpacePoint x0, x1;
  double e_a0 = 0, e_b0 = 0, e_ab0 = 0;
  double e_a1 = 0, e_b1 = 0, e_ab1 = 0;

  double total0() const { return e_a0 + e_b0 + e_ab0; }
  double total1() const { return e_a1 + e_b1 + e_ab1; }
};

struct TrajectoryEnsemble {
  std::vector<TrajectoryPair> pairs;
  double tau = 0.0;
  double dt = 0.0;
  PropagationMethod method = PropagationMethod::exact;
  std::uint64_t seed = 0;
  ClassicalModelSpec model;
  SamplingDiagnostics sampling;
  double max_drift = 0.0;
};

TrajectoryEnsemble run_ensemble(ClassicalExchangeModel const& model,
                                ExchangeTemperatures const& temps,
                                ProtocolSettings const& protocol,
                                SamplerSettings const& sampler,
                                unsigned workers = 1);

struct PairHeat {
  double q_via_b;
  double q_via_a;
  double conservation_defect;  //!< q_via_b - q_via_a
};
PairHeat heat_of_pair(TrajectoryPair const& pair);

//! ESS/N below this marks an estimate as unreliable.
inline constexpr double kEssFlagFraction = 0.01;

struct WeightedEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  double ess = 0.0;
  bool ess_flag = false;
};

struct RenyiEstimate : WeightedEstimate {
  //! (z-1)^{-1} ln(mean) with its jackknife error; absent near z = 1.
  std::optional<Estimate> divergence;
};

//! Mean of e^{-z delta_beta Q}, Q = q_via_b.
WeightedEstimate estimate_lhs(TrajectoryEnsemble const& ens,
                              ExchangeTemperatures const& temps, double z);
//! Mean of (rho0(X1)/rho0(X0))^z = e^{-z(beta_a dH_a + beta_b dH_b)}.
RenyiEstimate estimate_rhs_renyi(TrajectoryEnsemble const& ens,
                                 ExchangeTemperatures const& temps, double z);
//! Mean of (beta_a dH_a + beta_b dH_b)^n / delta_beta^n.
Estimate classical_moment_estimate(TrajectoryEnsemble const& ens,
                                   ExchangeTemperatures const& temps, int n);
//! Mean of q_via_b^n.
Estimate heat_moment_estimate(TrajectoryEnsemble const& ens, int n);

}  // namespace heatex
