#pragma once
//! \file quantum.hpp
//! Bipartite quantum exchange models and two-point-measurement heat
//! statistics.

#include <cstdint>
#include <string>
#include <vector>

#include "heatex/operator.hpp"
#include "heatex/renyi.hpp"

namespace heatex {

//! Inverse temperatures of the two bodies; delta = beta_b - beta_a.
class ExchangeTemperatures {
 public:
  ExchangeTemperatures(double beta_a, double beta_b);

  double beta_a() const { return beta_a_; }
  double beta_b() const { return beta_b_; }
  double delta_beta() const { return delta_beta_; }

 private:
  double beta_a_;
  double beta_b_;
  double delta_beta_;
};

//! Catalog entry describing a quantum model. Which fields are meaningful
//! depends on `kind`; see quantum_catalog().
struct QuantumModelSpec {
  std::string kind = "flip_flop";
  double omega = 1.0;
  double omega_a = 1.0;
  double omega_b = 1.0;
  double g = 0.3;
  int levels = 3;
  int dim_a = 2;
  int dim_b = 2;
  std::uint64_t seed = 1;
};

//! Known model kinds with the fields each one reads.
struct CatalogEntry {
  std::string kind;
  std::vector<std::string> fields;
};
std::vector<CatalogEntry> const& quantum_catalog();

//---------------------------------------------------------------------------//
/*!
 * Two bodies with local Hamiltonians h_a, h_b and coupling g * h_ab.
 *
 * The total Hamiltonian H_a (x) I + I (x) H_b + g h_ab is diagonalized once
 * at construction. `conserving()` reports whether the coupling commutes
 * with the bare energy H_a + H_b (max-norm commutator below 1e-10).
 */
class QuantumExchangeModel {
 public:
  static constexpr double kConservingTolerance = 1e-10;

  QuantumExchangeModel(HermitianOperator h_a, HermitianOperator h_b,
                       HermitianOperator h_ab, double coupling_scale,
                       QuantumModelSpec spec = {});

  Eigen::Index dim_a() const { return h_a_.dim(); }
  Eigen::Index dim_b() const { return h_b_.dim(); }
  Eigen::Index dim() const { return dim_a() * dim_b(); }

  HermitianOperator const& h_a() const { return h_a_; }
  HermitianOperator const& h_b() const { return h_b_; }
  HermitianOperator const& h_ab() const { return h_ab_; }
  double coupling_scale() const { return g_; }
  QuantumModelSpec const& spec() const { return spec_; }

  //! H_a (x) I + I (x) H_b.
  HermitianOperator const& bare() const { return bare_; }
  HermitianOperator const& total() const { return total_; }
  Spectrum const& total_spectrum() const { return *total_spectrum_; }

  bool conserving() const { return commutator_norm_ < kConservingTolerance; }
  double commutator_norm() const { return commutator_norm_; }

  QuantumExchangeModel with_coupling(double g) const;

 private:
  HermitianOperator h_a_, h_b_, h_ab_;
  double g_;
  QuantumModelSpec spec_;
  HermitianOperator bare_, total_;
  std::shared_ptr<Spectrum const> total_spectrum_;
  double commutator_norm_;
};

QuantumExchangeModel build_model(QuantumModelSpec const& spec);

//---------------------------------------------------------------------------//
// Protocol
//---------------------------------------------------------------------------//

//! rho(0) = e^{-beta_a H_a}/Z_a (x) e^{-beta_b H_b}/Z_b.
DensityMatrix initial_state(QuantumExchangeModel const& model,
                            ExchangeTemperatures const& temps);

//! exp(-i tau H) from the cached spectrum; tau = 0 gives the exact identity.
UnitaryPropagator propagator(QuantumExchangeModel const& model, double tau);

//! U rho U^dagger, re-diagonalized.
DensityMatrix evolve_state(DensityMatrix const& rho0,
                           UnitaryPropagator const& u);

enum class HeatDefinition {
  via_b,  //!< Q = E_{m,B} - E_{n,B}
  via_a,  //!< Q = E_{n,A} - E_{m,A}
};
char const* to_string(HeatDefinition d);
HeatDefinition heat_definition_from_string(std::string const& s);

struct HeatAtom {
  double q;
  double p;
};

//! Discrete P(Q), atoms sorted by q and separated by more than the binning
//! tolerance.
struct HeatDistribution {
  std::vector<HeatAtom> atoms;
  HeatDefinition definition = HeatDefinition::via_b;
  double binning_tolerance = 0.0;

  double total_probability() const;
};

//! Transition amplitudes below this magnitude are treated as roundoff.
inline constexpr double kAmplitudeFloor = 1e-13;

//! Two-point-measurement heat distribution using the eigenbases returned by
//! eig_decompose for the local Hamiltonians.
HeatDistribution tpm_heat_distribution(QuantumExchangeModel const& model,
                                       ExchangeTemperatures const& temps,
                                       double tau, HeatDefinition definition);

//! Same, with caller-chosen local eigenbases (e.g. re-mixed degenerate
//! subspaces). Both spectra must diagonalize their local Hamiltonian.
HeatDistribution tpm_heat_distribution(QuantumExchangeModel const& model,
                                       ExchangeTemperatures const& temps,
                                       UnitaryPropagator const& u,
                                       HeatDefinition definition,
                                       Spectrum const& local_a,
                                       Spectrum const& local_b);

//! ln <(e^{-delta_beta Q})^z> via a max-shifted sum.
double log_generating_function(HeatDistribution const& dist,
                               ExchangeTemperatures const& temps, double z);
double generating_function_lhs(HeatDistribution const& dist,
                               ExchangeTemperatures const& temps,
                               RenyiOrder z);

//! Sum p q^n.
double moment_from_distribution(HeatDistribution const& dist, int n);

//! Sum p e^{iuq}.
Complex heat_fourier_sum(HeatDistribution const& dist, double u);

struct CharFnCurve {
  std::vector<double> u_grid;
  std::vector<Complex> values;
};

//! G(u) = Tr[rho(0) e^{-iuH_B} U^dagger e^{iuH_B} U] with normalized rho(0).
CharFnCurve characteristic_function(QuantumExchangeModel const& model,
                                    ExchangeTemperatures const& temps,
                                    double tau,
                                    std::vector<double> const& u_grid,
                                    unsigned workers = 1);

//! Delta beta^{-n} sum_k C(n,k) (-1)^{n-k} Tr[rho_tau (ln rho_tau)^k
//! (ln rho_0)^{n-k}].
double ordered_moment(DensityMatrix const& rho0, DensityMatrix const& rho_tau,
                      ExchangeTemperatures const& temps, int n);

}  // namespace heatex
