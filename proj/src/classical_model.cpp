#include <algorithm>
#include <cmath>
#include <sstream>

#include "heatex/classical.hpp"
#include "heatex/errors.hpp"

namespace heatex {
namespace {

bool all_finite(std::vector<double> const& v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

double harmonic(std::vector<double> const& q, std::vector<double> const& p,
                double omega) {
  double e = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    e += 0.5 * (p[i] * p[i] + omega * omega * q[i] * q[i]);
  }
  return e;
}

}  // namespace

bool PhaseSpacePoint::finite() const {
  return all_finite(q_a) && all_finite(p_a) && all_finite(q_b) &&
         all_finite(p_b);
}

std::vector<CatalogEntry> const& classical_catalog() {
  static std::vector<CatalogEntry> const catalog = {
      {"harmonic_bilinear", {"dof_a", "dof_b", "omega_a", "omega_b", "epsilon"}},
      {"harmonic_quartic", {"dof_a", "dof_b", "omega_a", "omega_b", "epsilon"}},
  };
  return catalog;
}

ClassicalExchangeModel::ClassicalExchangeModel(ClassicalModelSpec spec)
    : spec_(std::move(spec)) {
  if (spec_.kind == "harmonic_bilinear") {
    coupling_ = Coupling::bilinear;
  } else if (spec_.kind == "harmonic_quartic") {
    coupling_ = Coupling::quartic;
  } else {
    throw ConfigError("unknown classical model kind '" + spec_.kind +
                      "'; catalog: harmonic_bilinear, harmonic_quartic");
  }
  if (spec_.dof_a < 1 || spec_.dof_b < 1) {
    throw ConfigError("model.dof_a and model.dof_b must be >= 1");
  }
  if (!(spec_.omega_a > 0.0) || !(spec_.omega_b > 0.0) ||
      !std::isfinite(spec_.omega_a) || !std::isfinite(spec_.omega_b)) {
    throw ConfigError("model frequencies must be finite and positive");
  }
  if (!std::isfinite(spec_.epsilon)) {
    throw ConfigError("model.epsilon must be finite");
  }
}

bool ClassicalExchangeModel::quadratic() const {
  return coupling_ == Coupling::bilinear || spec_.epsilon == 0.0;
}

double ClassicalExchangeModel::energy_a(std::vector<double> const& q,
                                        std::vector<double> const& p) const {
  return harmonic(q, p, spec_.omega_a);
}

double ClassicalExchangeModel::energy_b(std::vector<double> const& q,
                                        std::vector<double> const& p) const {
  return harmonic(q, p, spec_.omega_b);
}

double ClassicalExchangeModel::energy_ab(std::vector<double> const& q_a,
                                         std::vector<double> const& q_b) const {
  std::size_t const n = std::min(q_a.size(), q_b.size());
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    e += coupling_ == Coupling::bilinear
             ? q_a[i] * q_b[i]
             : q_a[i] * q_a[i] * q_b[i] * q_b[i];
  }
  return spec_.epsilon * e;
}

double ClassicalExchangeModel::energy(EnergyTerm term,
                                      PhaseSpacePoint const& x) const {
  switch (term) {
    case EnergyTerm::a: return energy_a(x.q_a, x.p_a);
    case EnergyTerm::b: return energy_b(x.q_b, x.p_b);
    case EnergyTerm::ab: return energy_ab(x.q_a, x.q_b);
    case EnergyTerm::total:
      return energy_a(x.q_a, x.p_a) + energy_b(x.q_b, x.p_b) +
             energy_ab(x.q_a, x.q_b);
  }
  return 0.0;
}

PhaseSpacePoint ClassicalExchangeModel::gradient(
    EnergyTerm term, PhaseSpacePoint const& x) const {
  PhaseSpacePoint g = zero_point();
  double const wa2 = spec_.omega_a * spec_.omega_a;
  double const wb2 = spec_.omega_b * spec_.omega_b;
  bool const with_a = term == EnergyTerm::a || term == EnergyTerm::total;
  bool const with_b = term == EnergyTerm::b || term == EnergyTerm::total;
  bool const with_ab = term == EnergyTerm::ab || term == EnergyTerm::total;
  if (with_a) {
    for (int i = 0; i < dof_a(); ++i) {
      g.q_a[i] += wa2 * x.q_a[i];
      g.p_a[i] += x.p_a[i];
    }
  }
  if (with_b) {
    for (int i = 0; i < dof_b(); ++i) {
      g.q_b[i] += wb2 * x.q_b[i];
      g.p_b[i] += x.p_b[i];
    }
  }
  if (with_ab) {
    int const n = std::min(dof_a(), dof_b());
    double const eps = spec_.epsilon;
    for (int i = 0; i < n; ++i) {
      if (coupling_ == Coupling::bilinear) {
        g.q_a[i] += eps * x.q_b[i];
        g.q_b[i] += eps * x.q_a[i];
      } else {
        g.q_a[i] += 2.0 * eps * x.q_a[i] * x.q_b[i] * x.q_b[i];
        g.q_b[i] += 2.0 * eps * x.q_a[i] * x.q_a[i] * x.q_b[i];
      }
    }
  }
  return g;
}

void ClassicalExchangeModel::forces(double const* q, double* f) const {
  int const na = dof_a();
  int const nb = dof_b();
  double const wa2 = spec_.omega_a * spec_.omega_a;
  double const wb2 = spec_.omega_b * spec_.omega_b;
  double const* qa = q;
  double const* qb = q + na;
  for (int i = 0; i < na; ++i) f[i] = -wa2 * qa[i];
  for (int i = 0; i < nb; ++i) f[na + i] = -wb2 * qb[i];
  int const n = std::min(na, nb);
  double const eps = spec_.epsilon;
  if (coupling_ == Coupling::bilinear) {
    for (int i = 0; i < n; ++i) {
      f[i] -= eps * qb[i];
      f[na + i] -= eps * qa[i];
    }
  } else {
    for (int i = 0; i < n; ++i) {
      f[i] -= 2.0 * eps * qa[i] * qb[i] * qb[i];
      f[na + i] -= 2.0 * eps * qa[i] * qa[i] * qb[i];
    }
  }
}

RealMatrix ClassicalExchangeModel::stiffness() const {
  if (!quadratic()) {
    throw DomainError("stiffness matrix requires a quadratic model");
  }
  int const na = dof_a();
  int const nb = dof_b();
  RealMatrix k = RealMatrix::Zero(na + nb, na + nb);
  for (int i = 0; i < na; ++i) k(i, i) = spec_.omega_a * spec_.omega_a;
  for (int i = 0; i < nb; ++i) k(na + i, na + i) = spec_.omega_b * spec_.omega_b;
  if (coupling_ == Coupling::bilinear) {
    for (int i = 0; i < std::min(na, nb); ++i) {
      k(i, na + i) = spec_.epsilon;
      k(na + i, i) = spec_.epsilon;
    }
  }
  return k;
}

double ClassicalExchangeModel::max_frequency() const {
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(stiffness());
  double const lmin = solver.eigenvalues().minCoeff();
  if (!(lmin > 0.0)) {
    std::ostringstream os;
    os << "coupled potential is not positive definite (smallest stiffness "
       << "eigenvalue " << lmin << "); need |epsilon| < omega_a * omega_b";
    throw DomainError(os.str());
  }
  return std::sqrt(solver.eigenvalues().maxCoeff());
}

PhaseSpacePoint ClassicalExchangeModel::zero_point() const {
  PhaseSpacePoint x;
  x.q_a.assign(dof_a(), 0.0);
  x.p_a.assign(dof_a(), 0.0);
  x.q_b.assign(dof_b(), 0.0);
  x.p_b.assign(dof_b(), 0.0);
  return x;
}

ClassicalExchangeModel ClassicalExchangeModel::with_coupling(
    double epsilon) const {
  ClassicalModelSpec s = spec_;
  s.epsilon = epsilon;
  return ClassicalExchangeModel(s);
}

}  // namespace heatex
