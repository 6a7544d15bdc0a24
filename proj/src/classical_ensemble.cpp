#include <algorithm>
#include <cmath>
#include <sstream>

#include "heatex/classical.hpp"
#include "heatex/errors.hpp"
#include "heatex/parallel.hpp"
#include "heatex/rng.hpp"

namespace heatex {
namespace {

constexpr int kTuneWindow = 100;

PhaseSpacePoint exact_gibbs_point(ClassicalExchangeModel const& model,
                                  ExchangeTemperatures const& temps,
                                  CounterStream& rng) {
  PhaseSpacePoint x = model.zero_point();
  double const sa = 1.0 / std::sqrt(temps.beta_a());
  double const sb = 1.0 / std::sqrt(temps.beta_b());
  double const wa = model.spec().omega_a;
  double const wb = model.spec().omega_b;
  for (auto& v : x.q_a) v = sa / wa * rng.normal();
  for (auto& v : x.p_a) v = sa * rng.normal();
  for (auto& v : x.q_b) v = sb / wb * rng.normal();
  for (auto& v : x.p_b) v = sb * rng.normal();
  return x;
}

// One coordinate of the chain state, addressed by body and slot.
struct Coordinate {
  bool body_a;
  std::vector<double> PhaseSpacePoint::*member;
  int index;
  double beta;
};

std::vector<Coordinate> coordinates(ClassicalExchangeModel const& model,
                                    ExchangeTemperatures const& temps) {
  std::vector<Coordinate> out;
  for (int i = 0; i < model.dof_a(); ++i) {
    out.push_back({true, &PhaseSpacePoint::q_a, i, temps.beta_a()});
  }
  for (int i = 0; i < model.dof_a(); ++i) {
    out.push_back({true, &PhaseSpacePoint::p_a, i, temps.beta_a()});
  }
  for (int i = 0; i < model.dof_b(); ++i) {
    out.push_back({false, &PhaseSpacePoint::q_b, i, temps.beta_b()});
  }
  for (int i = 0; i < model.dof_b(); ++i) {
    out.push_back({false, &PhaseSpacePoint::p_b, i, temps.beta_b()});
  }
  return out;
}

struct ChainResult {
  std::vector<PhaseSpacePoint> samples;
  double acceptance = 0.0;
};

ChainResult run_chain(ClassicalExchangeModel const& model,
                      ExchangeTemperatures const& temps,
                      SamplerSettings const& settings, std::size_t chain,
                      std::size_t n_keep) {
  CounterStream rng(settings.seed, stream_domain::kChain + chain);
  auto const coords = coordinates(model, temps);
  PhaseSpacePoint x = exact_gibbs_point(model, temps, rng);
  auto body_energy = [&](bool body_a) {
    return body_a ? model.energy_a(x.q_a, x.p_a) : model.energy_b(x.q_b, x.p_b);
  };
  std::vector<double> step(coords.size());
  for (std::size_t k = 0; k < coords.size(); ++k) {
    bool const is_q = coords[k].member == &PhaseSpacePoint::q_a ||
                      coords[k].member == &PhaseSpacePoint::q_b;
    double const w = coords[k].body_a ? model.spec().omega_a : model.spec().omega_b;
    step[k] = 2.4 / std::sqrt(coords[k].beta) / (is_q ? w : 1.0);
  }
  std::vector<long> accepted(coords.size(), 0);

  auto sweep = [&] {
    for (std::size_t k = 0; k < coords.size(); ++k) {
      auto const& c = coords[k];
      double& slot = (x.*(c.member))[c.index];
      double const old_value = slot;
      double const e_old = body_energy(c.body_a);
      double const proposal = old_value + step[k] * rng.normal();
      slot = proposal;
      double const e_new = body_energy(c.body_a);
      double const log_ratio = -c.beta * (e_new - e_old);
      double const u = rng.uniform();
      if (log_ratio >= 0.0 || std::log(u) < log_ratio) {
        ++accepted[k];
      } else {
        slot = old_value;
      }
    }
  };

  for (int s = 1; s <= settings.burn_in_sweeps; ++s) {
    sweep();
    if (s % kTuneWindow == 0) {
      for (std::size_t k = 0; k < coords.size(); ++k) {
        double const rate = double(accepted[k]) / kTuneWindow;
        step[k] *= std::exp(2.0 * (rate - 0.5));
        accepted[k] = 0;
      }
    }
  }
  std::fill(accepted.begin(), accepted.end(), 0);

  ChainResult result;
  result.samples.reserve(n_keep);
  long sweeps = 0;
  for (std::size_t i = 0; i < n_keep; ++i) {
    for (int t = 0; t < settings.thin; ++t) {
      sweep();
      ++sweeps;
    }
    result.samples.push_back(x);
  }
  if (sweeps > 0) {
    double total = 0.0;
    for (long a : accepted) total += double(a);
    result.acceptance = total / (double(sweeps) * double(coords.size()));
  }
  return result;
}

}  // namespace

char const* to_string(SamplerMethod m) {
  switch (m) {
    case SamplerMethod::automatic: return "auto";
    case SamplerMethod::exact: return "exact";
    case SamplerMethod::metropolis: return "metropolis";
  }
  return "auto";
}

SamplerMethod sampler_method_from_string(std::string const& s) {
  if (s == "auto") return SamplerMethod::automatic;
  if (s == "exact") return SamplerMethod::exact;
  if (s == "metropolis") return SamplerMethod::metropolis;
  throw ConfigError("sampler.method must be one of auto, exact, metropolis; "
                    "got '" + s + "'");
}

double log_initial_weight(ClassicalExchangeModel const& model,
                          ExchangeTemperatures const& temps,
                          PhaseSpacePoint const& x) {
  return -temps.beta_a() * model.energy_a(x.q_a, x.p_a) -
         temps.beta_b() * model.energy_b(x.q_b, x.p_b);
}

InitialSamples sample_initial(ClassicalExchangeModel const& model,
                              ExchangeTemperatures const& temps,
                              SamplerSettings const& settings,
                              unsigned workers) {
  if (settings.n_samples < 1) throw ConfigError("sampler.n_samples must be >= 1");
  SamplerMethod method = settings.method;
  if (method == SamplerMethod::automatic) {
    method = model.quadratic() ? SamplerMethod::exact : SamplerMethod::metropolis;
  }
  InitialSamples out;
  out.diagnostics.method = method;
  std::size_t const n = settings.n_samples;

  if (method == SamplerMethod::exact) {
    out.points.resize(n);
    parallel_for(n, workers, [&](std::size_t i) {
      CounterStream rng(settings.seed, stream_domain::kSample + i);
      out.points[i] = exact_gibbs_point(model, temps, rng);
    });
    return out;
  }

  if (settings.burn_in_sweeps < 0 || settings.thin < 1 || settings.chains < 1) {
    throw ConfigError(
        "Metropolis settings need burn_in_sweeps >= 0, thin >= 1, chains >= 1");
  }
  std::size_t const n_chains =
      std::min<std::size_t>(std::size_t(settings.chains), n);
  std::vector<ChainResult> chains(n_chains);
  parallel_for(n_chains, workers, [&](std::size_t c) {
    std::size_t const begin = n * c / n_chains;
    std::size_t const end = n * (c + 1) / n_chains;
    chains[c] = run_chain(model, temps, settings, c, end - begin);
  });
  out.points.reserve(n);
  double acc = 0.0;
  for (auto& chain : chains) {
    acc += chain.acceptance;
    for (auto& p : chain.samples) out.points.push_back(std::move(p));
  }
  out.diagnostics.acceptance = acc / double(n_chains);
  if (out.diagnostics.acceptance < 0.1 || out.diagnostics.acceptance > 0.9) {
    std::ostringstream os;
    os << "Metropolis acceptance " << out.diagnostics.acceptance
       << " outside [0.1, 0.9] after tuning";
    out.diagnostics.warnings.push_back(os.str());
  }
  return out;
}

TrajectoryEnsemble run_ensemble(ClassicalExchangeModel const& model,
                                ExchangeTemperatures const& temps,
                                ProtocolSettings const& protocol,
                                SamplerSettings const& sampler,
                                unsigned workers) {
  TrajectoryMap const flow(model, protocol);
  InitialSamples initial = sample_initial(model, temps, sampler, workers);

  TrajectoryEnsemble ens;
  ens.tau = protocol.tau;
  ens.dt = flow.method() == PropagationMethod::verlet ? protocol.dt : 0.0;
  ens.method = flow.method();
  ens.seed = sampler.seed;
  ens.model = model.spec();
  ens.sampling = initial.diagnostics;
  ens.pairs.resize(initial.points.size());

  std::vector<double> drift(ens.pairs.size(), 0.0);
  parallel_for(ens.pairs.size(), workers, [&](std::size_t i) {
    TrajectoryPair& pair = ens.pairs[i];
    pair.x0 = std::move(initial.points[i]);
    pair.x1 = flow(pair.x0);
    if (!pair.x1.finite()) {
      std::ostringstream os;
      os << "trajectory " << i << " reached a non-finite state";
      throw IntegrationError(os.str());
    }
    pair.e_a0 = model.energy(EnergyTerm::a, pair.x0);
    pair.e_b0 = model.energy(EnergyTerm::b, pair.x0);
    pair.e_ab0 = model.energy(EnergyTerm::ab, pair.x0);
    pair.e_a1 = model.energy(EnergyTerm::a, pair.x1);
    pair.e_b1 = model.energy(EnergyTerm::b, pair.x1);
    pair.e_ab1 = model.energy(EnergyTerm::ab, pair.x1);
    drift[i] = std::abs(pair.total1() - pair.total0());
    if (drift[i] > flow.drift_allowance(pair.total0())) {
      std::ostringstream os;
      os << "trajectory " << i << " violates the energy drift budget: |dH| = "
         << drift[i] << " > " << flow.drift_allowance(pair.total0());
      throw IntegrationError(os.str());
    }
  });
  for (double d : drift) ens.max_drift = std::max(ens.max_drift, d);
  return ens;
}

PairHeat heat_of_pair(TrajectoryPair const& pair) {
  double const q_b = pair.e_b1 - pair.e_b0;
  double const q_a = pair.e_a0 - pair.e_a1;
  return PairHeat{q_b, q_a, q_b - q_a};
}

}  // namespace heatex
