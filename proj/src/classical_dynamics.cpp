#include <cmath>
#include <sstream>

#include "heatex/classical.hpp"
#include "heatex/errors.hpp"

namespace heatex {
namespace {

std::vector<double> flatten_q(PhaseSpacePoint const& x) {
  std::vector<double> q(x.q_a);
  q.insert(q.end(), x.q_b.begin(), x.q_b.end());
  return q;
}

std::vector<double> flatten_p(PhaseSpacePoint const& x) {
  std::vector<double> p(x.p_a);
  p.insert(p.end(), x.p_b.begin(), x.p_b.end());
  return p;
}

PhaseSpacePoint unflatten(std::vector<double> const& q,
                          std::vector<double> const& p, int na) {
  PhaseSpacePoint x;
  x.q_a.assign(q.begin(), q.begin() + na);
  x.q_b.assign(q.begin() + na, q.end());
  x.p_a.assign(p.begin(), p.begin() + na);
  x.p_b.assign(p.begin() + na, p.end());
  return x;
}

void require_shape(ClassicalExchangeModel const& model,
                   PhaseSpacePoint const& x) {
  if (int(x.q_a.size()) != model.dof_a() || int(x.p_a.size()) != model.dof_a() ||
      int(x.q_b.size()) != model.dof_b() || int(x.p_b.size()) != model.dof_b()) {
    throw ValidationError("phase-space point does not match the model's dof");
  }
}

}  // namespace

char const* to_string(PropagationMethod m) {
  switch (m) {
    case PropagationMethod::automatic: return "auto";
    case PropagationMethod::exact: return "exact";
    case PropagationMethod::verlet: return "verlet";
  }
  return "auto";
}

PropagationMethod propagation_method_from_string(std::string const& s) {
  if (s == "auto") return PropagationMethod::automatic;
  if (s == "exact") return PropagationMethod::exact;
  if (s == "verlet") return PropagationMethod::verlet;
  throw ConfigError("propagator must be one of auto, exact, verlet; got '" +
                    s + "'");
}

PhaseSpacePoint integrate_verlet(ClassicalExchangeModel const& model,
                                 PhaseSpacePoint const& x0, double tau,
                                 double dt, double omega_bound) {
  require_shape(model, x0);
  if (!std::isfinite(tau)) throw ConfigError("tau must be finite");
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ConfigError("time step dt must be finite and positive");
  }
  if (dt > 0.1 / omega_bound) {
    std::ostringstream os;
    os << "time step dt = " << dt << " exceeds the stability bound 0.1/omega = "
       << 0.1 / omega_bound;
    throw ConfigError(os.str());
  }
  double const span = std::abs(tau);
  auto const steps = static_cast<long long>(std::llround(span / dt));
  if (std::abs(double(steps) * dt - span) > 1e-12 * std::max(1.0, span)) {
    std::ostringstream os;
    os << "time step dt = " << dt << " does not divide tau = " << tau;
    throw ConfigError(os.str());
  }
  double const h = tau < 0.0 ? -dt : dt;
  int const na = model.dof_a();
  std::vector<double> q = flatten_q(x0);
  std::vector<double> p = flatten_p(x0);
  std::vector<double> f(q.size());
  std::size_t const n = q.size();
  model.forces(q.data(), f.data());
  for (long long step = 0; step < steps; ++step) {
    for (std::size_t i = 0; i < n; ++i) {
      p[i] += 0.5 * h * f[i];
      q[i] += h * p[i];
    }
    model.forces(q.data(), f.data());
    for (std::size_t i = 0; i < n; ++i) p[i] += 0.5 * h * f[i];
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      ok = ok && std::isfinite(q[i]) && std::isfinite(p[i]);
    }
    if (!ok) {
      std::ostringstream os;
      os << "non-finite state at integration step " << step + 1;
      throw IntegrationError(os.str());
    }
  }
  return unflatten(q, p, na);
}

//---------------------------------------------------------------------------//

LinearPropagator::LinearPropagator(ClassicalExchangeModel const& model,
                                   double tau)
    : dof_a_(model.dof_a()), dof_b_(model.dof_b()) {
  if (!std::isfinite(tau)) throw ConfigError("tau must be finite");
  model.max_frequency();  // validates positive definiteness
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(model.stiffness());
  RealMatrix const& v = solver.eigenvectors();
  RealVector const omega = solver.eigenvalues().cwiseSqrt();
  Eigen::Index const n = omega.size();
  RealVector c(n), s_over_w(n), w_s(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    c[k] = std::cos(omega[k] * tau);
    s_over_w[k] = std::sin(omega[k] * tau) / omega[k];
    w_s[k] = omega[k] * std::sin(omega[k] * tau);
  }
  m_.resize(2 * n, 2 * n);
  m_.topLeftCorner(n, n) = v * c.asDiagonal() * v.transpose();
  m_.topRightCorner(n, n) = v * s_over_w.asDiagonal() * v.transpose();
  m_.bottomLeftCorner(n, n) = -(v * w_s.asDiagonal() * v.transpose());
  m_.bottomRightCorner(n, n) = m_.topLeftCorner(n, n);
}

PhaseSpacePoint LinearPropagator::apply(PhaseSpacePoint const& x0) const {
  Eigen::Index const n = dof_a_ + dof_b_;
  RealVector state(2 * n);
  for (int i = 0; i < dof_a_; ++i) {
    state[i] = x0.q_a[i];
    state[n + i] = x0.p_a[i];
  }
  for (int i = 0; i < dof_b_; ++i) {
    state[dof_a_ + i] = x0.q_b[i];
    state[n + dof_a_ + i] = x0.p_b[i];
  }
  RealVector const out = m_ * state;
  PhaseSpacePoint x;
  x.q_a.resize(dof_a_);
  x.p_a.resize(dof_a_);
  x.q_b.resize(dof_b_);
  x.p_b.resize(dof_b_);
  for (int i = 0; i < dof_a_; ++i) {
    x.q_a[i] = out[i];
    x.p_a[i] = out[n + i];
  }
  for (int i = 0; i < dof_b_; ++i) {
    x.q_b[i] = out[dof_a_ + i];
    x.p_b[i] = out[n + dof_a_ + i];
  }
  return x;
}

//---------------------------------------------------------------------------//

TrajectoryMap::TrajectoryMap(ClassicalExchangeModel const& model,
                             ProtocolSettings const& protocol)
    : model_(model), protocol_(protocol), method_(protocol.method) {
  if (method_ == PropagationMethod::automatic) {
    method_ = model.quadratic() ? PropagationMethod::exact
                                : PropagationMethod::verlet;
  }
  if (method_ == PropagationMethod::exact) {
    if (!model.quadratic()) {
      throw ConfigError(
          "the exact propagator needs a quadratic model; use verlet");
    }
    linear_.emplace(model, protocol.tau);
    return;
  }
  if (model.quadratic()) {
    omega_bound_ = model.max_frequency();
    if (protocol.omega_bound) omega_bound_ = std::max(omega_bound_, *protocol.omega_bound);
  } else if (protocol.omega_bound) {
    omega_bound_ = *protocol.omega_bound;
  } else {
    throw ConfigError(
        "protocol.omega_bound is required for Verlet integration of a "
        "non-quadratic model");
  }
  if (!(omega_bound_ > 0.0)) throw ConfigError("omega_bound must be positive");
  // Fail early on an unstable or non-dividing step.
  if (protocol.dt > 0.1 / omega_bound_) {
    std::ostringstream os;
    os << "time step dt = " << protocol.dt
       << " exceeds the stability bound 0.1/omega = " << 0.1 / omega_bound_;
    throw ConfigError(os.str());
  }
}

PhaseSpacePoint TrajectoryMap::operator()(PhaseSpacePoint const& x0) const {
  if (linear_) return linear_->apply(x0);
  return integrate_verlet(model_, x0, protocol_.tau, protocol_.dt,
                          omega_bound_);
}

double TrajectoryMap::drift_allowance(double e0) const {
  double const scale = 1.0 + std::abs(e0);
  double allowance =
      protocol_.drift_budget * std::abs(protocol_.tau) + 1e-12 * scale;
  if (method_ == PropagationMethod::verlet) {
    // Verlet conserves a shadow Hamiltonian; H itself oscillates by
    // O(dt^2 omega^2 H) around it.
    allowance += protocol_.dt * protocol_.dt * omega_bound_ * omega_bound_ * scale;
  }
  return allowance;
}

}  // namespace heatex
