#include "heatex/operator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "heatex/errors.hpp"

namespace heatex {
namespace {

double entry_scale(ComplexMatrix const& m) {
  return std::max(max_abs(m), 1.0e-300);
}

void require_square(ComplexMatrix const& m, char const* what) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << m.rows()
       << "x" << m.cols();
    throw ValidationError(os.str());
  }
}

}  // namespace

double max_abs(ComplexMatrix const& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_defect(ComplexMatrix const& m) {
  return max_abs(m - m.adjoint());
}

double unitarity_defect(ComplexMatrix const& u) {
  return max_abs(u.adjoint() * u -
                 ComplexMatrix::Identity(u.rows(), u.cols()));
}

ComplexMatrix commutator(ComplexMatrix const& a, ComplexMatrix const& b) {
  return a * b - b * a;
}

//---------------------------------------------------------------------------//
// HermitianOperator
//---------------------------------------------------------------------------//

HermitianOperator::HermitianOperator(ComplexMatrix m) : m_(std::move(m)) {
  require_square(m_, "HermitianOperator");
  double const tol = kTolerance * entry_scale(m_);
  for (Eigen::Index i = 0; i < m_.rows(); ++i) {
    for (Eigen::Index j = i; j < m_.cols(); ++j) {
      double const gap = std::abs(m_(i, j) - std::conj(m_(j, i)));
      if (gap > tol) {
        std::ostringstream os;
        os << "operator is not Hermitian: entries (" << i << "," << j
           << ") and (" << j << "," << i << ") differ from conjugate "
           << "symmetry by " << gap;
        throw ValidationError(os.str());
      }
    }
  }
  m_ = 0.5 * (m_ + m_.adjoint()).eval();
}

HermitianOperator HermitianOperator::zero(Eigen::Index dim) {
  return HermitianOperator(ComplexMatrix::Zero(dim, dim));
}

HermitianOperator HermitianOperator::identity(Eigen::Index dim) {
  return HermitianOperator(ComplexMatrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::diagonal(RealVector const& diag) {
  return HermitianOperator(diag.cast<Complex>().asDiagonal().toDenseMatrix());
}

HermitianOperator HermitianOperator::operator+(
    HermitianOperator const& other) const {
  if (other.dim() != dim()) {
    throw ValidationError("HermitianOperator sum: dimension mismatch");
  }
  return HermitianOperator(m_ + other.m_);
}

HermitianOperator HermitianOperator::scaled(double factor) const {
  return HermitianOperator(factor * m_);
}

//---------------------------------------------------------------------------//
// UnitaryPropagator
//---------------------------------------------------------------------------//

UnitaryPropagator::UnitaryPropagator(ComplexMatrix m, double duration)
    : m_(std::move(m)), duration_(duration) {
  require_square(m_, "UnitaryPropagator");
  // Roundoff in U^dagger U grows with the dimension of the matrix products.
  double const tol =
      std::max(1.0e-12, 64.0 * static_cast<double>(m_.rows()) * 2.2e-16);
  double const defect = unitarity_defect(m_);
  if (!(defect <= tol)) {
    std::ostringstream os;
    os << "propagator is not unitary: max |U^dagger U - I| = " << defect;
    throw ValidationError(os.str());
  }
}

UnitaryPropagator UnitaryPropagator::identity(Eigen::Index dim) {
  return UnitaryPropagator(ComplexMatrix::Identity(dim, dim), 0.0);
}

//---------------------------------------------------------------------------//
// DensityMatrix
//---------------------------------------------------------------------------//

DensityMatrix::DensityMatrix(ComplexMatrix m) {
  require_square(m, "DensityMatrix");
  HermitianOperator h(std::move(m));
  auto s = std::make_shared<Spectrum>(eig_decompose(h));
  m_ = h.matrix();
  spectrum_ = std::move(s);
  validate_and_clip();
}

DensityMatrix DensityMatrix::from_spectrum(RealVector values,
                                           ComplexMatrix vectors) {
  if (vectors.rows() != vectors.cols() || vectors.cols() != values.size() ||
      values.size() < 1) {
    throw ValidationError("DensityMatrix::from_spectrum: shape mismatch");
  }
  std::vector<Eigen::Index> order(values.size());
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) {
                     return values[a] < values[b];
                   });
  auto s = std::make_shared<Spectrum>();
  s->values.resize(values.size());
  s->vectors.resize(vectors.rows(), vectors.cols());
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    s->values[k] = values[order[k]];
    s->vectors.col(k) = vectors.col(order[k]);
  }
  if (unitarity_defect(s->vectors) > 1e-10) {
    throw ValidationError(
        "DensityMatrix::from_spectrum: eigenvectors are not orthonormal");
  }
  DensityMatrix rho;
  ComplexMatrix m = s->vectors * s->values.cast<Complex>().asDiagonal() *
                    s->vectors.adjoint();
  rho.m_ = 0.5 * (m + m.adjoint());
  rho.spectrum_ = std::move(s);
  rho.validate_and_clip();
  return rho;
}

void DensityMatrix::validate_and_clip() {
  auto s = std::make_shared<Spectrum>(*spectrum_);
  min_raw_ = s->values.minCoeff();
  if (min_raw_ < -kTolerance) {
    std::ostringstream os;
    os << "density matrix has a negative eigenvalue " << min_raw_;
    throw ValidationError(os.str());
  }
  double const trace = m_.trace().real();
  if (std::abs(trace - 1.0) > kTolerance) {
    std::ostringstream os;
    os << "density matrix trace " << trace << " deviates from 1";
    throw ValidationError(os.str());
  }
  for (Eigen::Index k = 0; k < s->values.size(); ++k) {
    if (s->values[k] < 0.0) s->values[k] = 0.0;
  }
  spectrum_ = std::move(s);
}

//---------------------------------------------------------------------------//
// Spectral functions
//---------------------------------------------------------------------------//

Spectrum eig_decompose(HermitianOperator const& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    throw DomainError("eigendecomposition failed to converge");
  }
  return Spectrum{solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix matrix_function(Spectrum const& s,
                              std::function<double(double)> const& f) {
  RealVector fv(s.dim());
  for (Eigen::Index i = 0; i < s.dim(); ++i) {
    fv[i] = f(s.values[i]);
    if (!std::isfinite(fv[i])) {
      std::ostringstream os;
      os << "matrix function undefined at eigenvalue " << s.values[i];
      throw DomainError(os.str());
    }
  }
  ComplexMatrix r =
      s.vectors * fv.cast<Complex>().asDiagonal() * s.vectors.adjoint();
  return 0.5 * (r + r.adjoint());
}

ComplexMatrix matrix_function(HermitianOperator const& h,
                              std::function<double(double)> const& f) {
  return matrix_function(eig_decompose(h), f);
}

ComplexMatrix matrix_function(DensityMatrix const& rho,
                              std::function<double(double)> const& f) {
  return matrix_function(rho.spectrum(), f);
}

ComplexMatrix complex_matrix_function(
    Spectrum const& s, std::function<Complex(double)> const& f) {
  Eigen::VectorXcd fv(s.dim());
  for (Eigen::Index i = 0; i < s.dim(); ++i) {
    fv[i] = f(s.values[i]);
    if (!std::isfinite(fv[i].real()) || !std::isfinite(fv[i].imag())) {
      std::ostringstream os;
      os << "matrix function undefined at eigenvalue " << s.values[i];
      throw DomainError(os.str());
    }
  }
  return s.vectors * fv.asDiagonal() * s.vectors.adjoint();
}

ComplexMatrix matrix_power(DensityMatrix const& rho, double p) {
  bool const needs_positive = p < 0.0 || p != std::floor(p);
  if (needs_positive && !(rho.min_raw_eigenvalue() > 1e-300)) {
    std::ostringstream os;
    os << "power " << p << " requires strictly positive eigenvalues; "
       << "smallest is " << rho.min_raw_eigenvalue();
    throw DomainError(os.str());
  }
  return matrix_function(rho, [p](double x) {
    if (x <= 0.0) return p >= 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::pow(x, p);
  });
}

ComplexMatrix matrix_log(DensityMatrix const& rho) {
  if (!(rho.min_raw_eigenvalue() > 0.0)) {
    std::ostringstream os;
    os << "logarithm undefined at eigenvalue " << rho.min_raw_eigenvalue();
    throw DomainError(os.str());
  }
  return matrix_function(rho, [](double x) { return std::log(x); });
}

ComplexMatrix matrix_exp(HermitianOperator const& h, double scale) {
  return matrix_function(h, [scale](double x) { return std::exp(scale * x); });
}

ComplexMatrix kron(ComplexMatrix const& a, ComplexMatrix const& b) {
  ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return r;
}

HermitianOperator kron(HermitianOperator const& a, HermitianOperator const& b) {
  return HermitianOperator(kron(a.matrix(), b.matrix()));
}

ComplexMatrix partial_trace_b(ComplexMatrix const& m, Eigen::Index dim_a,
                              Eigen::Index dim_b) {
  if (m.rows() != dim_a * dim_b || m.cols() != dim_a * dim_b) {
    throw ValidationError("partial_trace_b: dimension mismatch");
  }
  ComplexMatrix r = ComplexMatrix::Zero(dim_a, dim_a);
  for (Eigen::Index i = 0; i < dim_a; ++i) {
    for (Eigen::Index j = 0; j < dim_a; ++j) {
      for (Eigen::Index k = 0; k < dim_b; ++k) {
        r(i, j) += m(i * dim_b + k, j * dim_b + k);
      }
    }
  }
  return r;
}

ComplexMatrix partial_trace_a(ComplexMatrix const& m, Eigen::Index dim_a,
                              Eigen::Index dim_b) {
  if (m.rows() != dim_a * dim_b || m.cols() != dim_a * dim_b) {
    throw ValidationError("partial_trace_a: dimension mismatch");
  }
  ComplexMatrix r = ComplexMatrix::Zero(dim_b, dim_b);
  for (Eigen::Index k = 0; k < dim_b; ++k) {
    for (Eigen::Index l = 0; l < dim_b; ++l) {
      for (Eigen::Index i = 0; i < dim_a; ++i) {
        r(k, l) += m(i * dim_b + k, i * dim_b + l);
      }
    }
  }
  return r;
}

GibbsState gibbs_state(HermitianOperator const& h, double beta) {
  if (!std::isfinite(beta) || !(beta > 0.0)) {
    std::ostringstream os;
    os << "inverse temperature must be finite and positive, got " << beta;
    throw ConfigError(os.str());
  }
  Spectrum s = eig_decompose(h);
  double const e_min = s.values.minCoeff();
  RealVector w(s.dim());
  for (Eigen::Index i = 0; i < s.dim(); ++i) {
    w[i] = std::exp(-beta * (s.values[i] - e_min));
  }
  double const sum = w.sum();
  double const log_z = -beta * e_min + std::log(sum);
  w /= sum;
  return GibbsState{DensityMatrix::from_spectrum(std::move(w),
                                                 std::move(s.vectors)),
                    log_z};
}

DensityMatrix kron(DensityMatrix const& a, DensityMatrix const& b) {
  auto const& sa = a.spectrum();
  auto const& sb = b.spectrum();
  RealVector values(sa.dim() * sb.dim());
  for (Eigen::Index i = 0; i < sa.dim(); ++i) {
    for (Eigen::Index k = 0; k < sb.dim(); ++k) {
      values[i * sb.dim() + k] = sa.values[i] * sb.values[k];
    }
  }
  return DensityMatrix::from_spectrum(std::move(values),
                                      kron(sa.vectors, sb.vectors));
}

}  // namespace heatex
