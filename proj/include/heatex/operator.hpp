#pragma once
//! \file operator.hpp
//! Dense Hermitian linear algebra used by every quantum-side formula.

#include <complex>
#include <functional>
#include <memory>

#include <Eigen/Dense>

namespace heatex {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

//! Eigenvalues in ascending order with the matching orthonormal eigenvectors
//! as columns.
struct Spectrum {
  RealVector values;
  ComplexMatrix vectors;

  Eigen::Index dim() const { return values.size(); }
};

//---------------------------------------------------------------------------//
/*!
 * Self-adjoint operator on a finite-dimensional Hilbert space.
 *
 * The constructor checks Hermiticity relative to the largest entry (1e-12)
 * and stores the exactly symmetrized matrix (A + A^dagger)/2.
 */
class HermitianOperator {
 public:
  static constexpr double kTolerance = 1e-12;

  explicit HermitianOperator(ComplexMatrix m);
  static HermitianOperator zero(Eigen::Index dim);
  static HermitianOperator identity(Eigen::Index dim);
  static HermitianOperator diagonal(RealVector const& diag);

  Eigen::Index dim() const { return m_.rows(); }
  ComplexMatrix const& matrix() const { return m_; }

  HermitianOperator operator+(HermitianOperator const& other) const;
  HermitianOperator scaled(double factor) const;

 private:
  ComplexMatrix m_;
};

//! Unitary exp(-i tau H); checked unitary on construction.
class UnitaryPropagator {
 public:
  UnitaryPropagator(ComplexMatrix m, double duration);
  static UnitaryPropagator identity(Eigen::Index dim);

  Eigen::Index dim() const { return m_.rows(); }
  ComplexMatrix const& matrix() const { return m_; }
  double duration() const { return duration_; }

 private:
  ComplexMatrix m_;
  double duration_;
};

//---------------------------------------------------------------------------//
/*!
 * Normalized positive semidefinite operator with its spectrum attached.
 *
 * The eigendecomposition is computed (or supplied) once at construction and
 * shared between copies; all spectral formulas read it instead of
 * re-diagonalizing. Eigenvalues in [-1e-12, 0) are clipped to zero.
 */
class DensityMatrix {
 public:
  static constexpr double kTolerance = 1e-12;

  //! Diagonalize and validate an arbitrary matrix.
  explicit DensityMatrix(ComplexMatrix m);
  //! Build from a trusted eigensystem; eigenvalues are sorted ascending.
  static DensityMatrix from_spectrum(RealVector values, ComplexMatrix vectors);

  Eigen::Index dim() const { return m_.rows(); }
  ComplexMatrix const& matrix() const { return m_; }
  Spectrum const& spectrum() const { return *spectrum_; }
  //! Smallest eigenvalue before clipping.
  double min_raw_eigenvalue() const { return min_raw_; }
  bool full_rank() const { return min_raw_ > 0.0; }

 private:
  DensityMatrix() = default;
  void validate_and_clip();

  ComplexMatrix m_;
  std::shared_ptr<Spectrum const> spectrum_;
  double min_raw_ = 0.0;
};

//---------------------------------------------------------------------------//
// Decompositions and matrix functions
//---------------------------------------------------------------------------//

Spectrum eig_decompose(HermitianOperator const& h);

//! V diag(f(lambda)) V^dagger; throws DomainError when f is non-finite at
//! some eigenvalue.
ComplexMatrix matrix_function(Spectrum const& s,
                              std::function<double(double)> const& f);
ComplexMatrix matrix_function(HermitianOperator const& h,
                              std::function<double(double)> const& f);
ComplexMatrix matrix_function(DensityMatrix const& rho,
                              std::function<double(double)> const& f);
ComplexMatrix complex_matrix_function(Spectrum const& s,
                                      std::function<Complex(double)> const& f);

//! rho^p. Negative or fractional p needs strictly positive eigenvalues
//! (floor 1e-300); zero eigenvalues map to zero for p >= 0, so p = 0 gives
//! the support projector.
ComplexMatrix matrix_power(DensityMatrix const& rho, double p);
//! ln rho; requires full rank.
ComplexMatrix matrix_log(DensityMatrix const& rho);
//! exp(scale * H).
ComplexMatrix matrix_exp(HermitianOperator const& h, double scale);

ComplexMatrix kron(ComplexMatrix const& a, ComplexMatrix const& b);
HermitianOperator kron(HermitianOperator const& a, HermitianOperator const& b);

//! Partial traces of an operator on C^{dim_a} (x) C^{dim_b}.
ComplexMatrix partial_trace_b(ComplexMatrix const& m, Eigen::Index dim_a,
                              Eigen::Index dim_b);
ComplexMatrix partial_trace_a(ComplexMatrix const& m, Eigen::Index dim_a,
                              Eigen::Index dim_b);

struct GibbsState {
  DensityMatrix rho;
  double log_partition;
};

//! e^{-beta H}/Z with ln Z evaluated through a max-shifted sum.
GibbsState gibbs_state(HermitianOperator const& h, double beta);

//! Tensor product of two density matrices with the product spectrum.
DensityMatrix kron(DensityMatrix const& a, DensityMatrix const& b);

double max_abs(ComplexMatrix const& m);
double hermiticity_defect(ComplexMatrix const& m);
double unitarity_defect(ComplexMatrix const& u);
ComplexMatrix commutator(ComplexMatrix const& a, ComplexMatrix const& b);

}  // namespace heatex
