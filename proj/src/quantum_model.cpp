#include <cmath>
#include <sstream>

#include "heatex/errors.hpp"
#include "heatex/quantum.hpp"
#include "heatex/rng.hpp"

namespace heatex {
namespace {

ComplexMatrix pauli_z() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

// |up> is index 0, sigma_plus maps |down> to |up>.
ComplexMatrix sigma_plus() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

ComplexMatrix number_operator(int levels) {
  ComplexMatrix m = ComplexMatrix::Zero(levels, levels);
  for (int n = 0; n < levels; ++n) m(n, n) = static_cast<double>(n);
  return m;
}

ComplexMatrix annihilation(int levels) {
  ComplexMatrix m = ComplexMatrix::Zero(levels, levels);
  for (int n = 1; n < levels; ++n) m(n - 1, n) = std::sqrt(double(n));
  return m;
}

HermitianOperator hopping(ComplexMatrix const& lower_a,
                          ComplexMatrix const& lower_b) {
  ComplexMatrix const raise_a = lower_a.adjoint();
  ComplexMatrix const raise_b = lower_b.adjoint();
  return HermitianOperator(kron(raise_a, lower_b) + kron(lower_a, raise_b));
}

HermitianOperator random_hermitian(Eigen::Index dim, CounterStream& rng) {
  ComplexMatrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      double const re = rng.normal();
      double const im = rng.normal();
      m(i, j) = Complex(re, im);
    }
  }
  ComplexMatrix h = (m + m.adjoint()) / std::sqrt(8.0 * double(dim));
  return HermitianOperator(h);
}

void require(bool ok, std::string const& message) {
  if (!ok) throw ConfigError(message);
}

std::string catalog_listing() {
  std::ostringstream os;
  bool first = true;
  for (auto const& entry : quantum_catalog()) {
    os << (first ? "" : ", ") << entry.kind;
    first = false;
  }
  return os.str();
}

}  // namespace

ExchangeTemperatures::ExchangeTemperatures(double beta_a, double beta_b)
    : beta_a_(beta_a), beta_b_(beta_b), delta_beta_(beta_b - beta_a) {
  if (!std::isfinite(beta_a) || !(beta_a > 0.0) || !std::isfinite(beta_b) ||
      !(beta_b > 0.0)) {
    std::ostringstream os;
    os << "inverse temperatures must be finite and positive (beta_a = "
       << beta_a << ", beta_b = " << beta_b << ")";
    throw ConfigError(os.str());
  }
}

std::vector<CatalogEntry> const& quantum_catalog() {
  static std::vector<CatalogEntry> const catalog = {
      {"flip_flop", {"omega", "g"}},
      {"detuned_flip_flop", {"omega_a", "omega_b", "g"}},
      {"oscillators", {"levels", "omega_a", "omega_b", "g"}},
      {"random", {"dim_a", "dim_b", "g", "seed"}},
  };
  return catalog;
}

//---------------------------------------------------------------------------//

QuantumExchangeModel::QuantumExchangeModel(HermitianOperator h_a,
                                           HermitianOperator h_b,
                                           HermitianOperator h_ab,
                                           double coupling_scale,
                                           QuantumModelSpec spec)
    : h_a_(std::move(h_a)),
      h_b_(std::move(h_b)),
      h_ab_(std::move(h_ab)),
      g_(coupling_scale),
      spec_(std::move(spec)),
      bare_(HermitianOperator::zero(1)),
      total_(HermitianOperator::zero(1)) {
  if (h_ab_.dim() != h_a_.dim() * h_b_.dim()) {
    std::ostringstream os;
    os << "coupling acts on dimension " << h_ab_.dim() << " but the joint "
       << "space has dimension " << h_a_.dim() * h_b_.dim();
    throw ValidationError(os.str());
  }
  if (!std::isfinite(g_)) throw ValidationError("coupling scale not finite");
  auto const id_a = ComplexMatrix::Identity(h_a_.dim(), h_a_.dim());
  auto const id_b = ComplexMatrix::Identity(h_b_.dim(), h_b_.dim());
  bare_ = HermitianOperator(kron(h_a_.matrix(), id_b) +
                            kron(id_a, h_b_.matrix()));
  total_ = HermitianOperator(bare_.matrix() + g_ * h_ab_.matrix());
  total_spectrum_ = std::make_shared<Spectrum>(eig_decompose(total_));
  commutator_norm_ = max_abs(commutator(bare_.matrix(), total_.matrix()));
}

QuantumExchangeModel QuantumExchangeModel::with_coupling(double g) const {
  QuantumModelSpec spec = spec_;
  spec.g = g;
  return QuantumExchangeModel(h_a_, h_b_, h_ab_, g, spec);
}

QuantumExchangeModel build_model(QuantumModelSpec const& spec) {
  require(std::isfinite(spec.g), "model.g must be finite");
  if (spec.kind == "flip_flop" || spec.kind == "detuned_flip_flop") {
    bool const detuned = spec.kind == "detuned_flip_flop";
    double const wa = detuned ? spec.omega_a : spec.omega;
    double const wb = detuned ? spec.omega_b : spec.omega;
    require(std::isfinite(wa) && std::isfinite(wb),
            "model frequencies must be finite");
    ComplexMatrix const lower = sigma_plus().adjoint();
    return QuantumExchangeModel(HermitianOperator(0.5 * wa * pauli_z()),
                                HermitianOperator(0.5 * wb * pauli_z()),
                                hopping(lower, lower), spec.g, spec);
  }
  if (spec.kind == "oscillators") {
    require(spec.levels >= 2, "model.levels must be >= 2");
    require(std::isfinite(spec.omega_a) && std::isfinite(spec.omega_b),
            "model frequencies must be finite");
    ComplexMatrix const lower = annihilation(spec.levels);
    return QuantumExchangeModel(
        HermitianOperator(spec.omega_a * number_operator(spec.levels)),
        HermitianOperator(spec.omega_b * number_operator(spec.levels)),
        hopping(lower, lower), spec.g, spec);
  }
  if (spec.kind == "random") {
    require(spec.dim_a >= 2 && spec.dim_b >= 2,
            "model.dim_a and model.dim_b must be >= 2");
    CounterStream rng_a(spec.seed, stream_domain::kModel + 0);
    CounterStream rng_b(spec.seed, stream_domain::kModel + 1);
    CounterStream rng_ab(spec.seed, stream_domain::kModel + 2);
    auto h_a = random_hermitian(spec.dim_a, rng_a);
    auto h_b = random_hermitian(spec.dim_b, rng_b);
    auto h_ab = random_hermitian(Eigen::Index(spec.dim_a) * spec.dim_b, rng_ab);
    return QuantumExchangeModel(std::move(h_a), std::move(h_b),
                                std::move(h_ab), spec.g, spec);
  }
  throw ConfigError("unknown quantum model kind '" + spec.kind +
                    "'; catalog: " + catalog_listing());
}

}  // namespace heatex
