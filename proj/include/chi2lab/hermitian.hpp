#pragma once

// Dense complex Hermitian linear algebra on small (d <= 16) matrices.
//
// The operator hierarchy mirrors the nested cones
//   HermitianMatrix  >=  PsdOperator  >=  PdOperator
// with DensityOperator as the unit-trace slice of PsdOperator. Every type is
// immutable after construction and validates its invariant on the way in.

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "chi2lab/errors.hpp"

namespace chi2lab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Numerical thresholds used by type checks and spectral routines.
struct Tolerances {
  double psd = 1e-10;      // eigenvalues >= -psd * max(1, lambda_max) count as PSD
  double pd = 1e-10;       // lambda_min > pd * lambda_max counts as PD
  double support = 1e-10;  // lambda > support * lambda_max spans the support
  double cluster = 1e-8;   // eigenvalues closer than cluster * max(1, lambda_max) merge
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

class HermitianMatrix {
 public:
  /// Checks M = M* within 1e-12 * max(1, ||M||_op) and stores (M + M*)/2.
  explicit HermitianMatrix(const ComplexMatrix& m);

  /// Stores (M + M*)/2 without the closeness check. For matrices that are
  /// Hermitian by construction up to round-off.
  static HermitianMatrix symmetrized(const ComplexMatrix& m);

  const ComplexMatrix& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }

 private:
  struct Unchecked {};
  HermitianMatrix(const ComplexMatrix& m, Unchecked);
  ComplexMatrix m_;
};

/// Unclustered eigensystem: eigenvalues sorted decreasing, eigenvectors as
/// matching columns of a unitary matrix.
struct Eigensystem {
  RealVector values;
  ComplexMatrix vectors;
};

/// Cyclic complex Jacobi. Throws SolverFailure past the sweep cap.
Eigensystem jacobi_eigensystem(const HermitianMatrix& m);

struct SpectralDecomposition {
  std::vector<double> eigenvalues;  // strictly decreasing
  std::vector<ComplexMatrix> projections;
  std::vector<int> multiplicities;

  int dim() const;
  ComplexMatrix reassemble() const;
};

/// Spectral decomposition with near-equal eigenvalues merged into a single
/// eigenprojection.
SpectralDecomposition eigh(const HermitianMatrix& m, const Tolerances& tol = default_tolerances());

class PsdOperator {
 public:
  /// Clamps eigenvalues in [-psd*max(1,lambda_max), 0) to zero; throws
  /// InvariantViolation below that.
  explicit PsdOperator(const HermitianMatrix& m, const Tolerances& tol = default_tolerances());
  explicit PsdOperator(const ComplexMatrix& m, const Tolerances& tol = default_tolerances())
      : PsdOperator(HermitianMatrix(m), tol) {}

  /// Projects onto the PSD cone by clamping every negative eigenvalue.
  static PsdOperator clamped(const HermitianMatrix& m);

  const ComplexMatrix& matrix() const { return m_.matrix(); }
  const HermitianMatrix& hermitian() const { return m_; }
  const Eigensystem& eigensystem() const { return eig_; }
  int dim() const { return m_.dim(); }
  double trace() const;
  double lambda_max() const { return eig_.values.size() ? eig_.values(0) : 0.0; }
  double lambda_min() const {
    return eig_.values.size() ? eig_.values(eig_.values.size() - 1) : 0.0;
  }

 private:
  PsdOperator(HermitianMatrix m, Eigensystem eig) : m_(std::move(m)), eig_(std::move(eig)) {}
  HermitianMatrix m_;
  Eigensystem eig_;
};

class PdOperator {
 public:
  explicit PdOperator(const PsdOperator& a, const Tolerances& tol = default_tolerances());
  explicit PdOperator(const ComplexMatrix& m, const Tolerances& tol = default_tolerances())
      : PdOperator(PsdOperator(m, tol), tol) {}
  explicit PdOperator(const HermitianMatrix& m, const Tolerances& tol = default_tolerances())
      : PdOperator(PsdOperator(m, tol), tol) {}

  const PsdOperator& psd() const { return a_; }
  const ComplexMatrix& matrix() const { return a_.matrix(); }
  const Eigensystem& eigensystem() const { return a_.eigensystem(); }
  int dim() const { return a_.dim(); }
  double trace() const { return a_.trace(); }

  operator const PsdOperator&() const { return a_; }  // NOLINT(google-explicit-constructor)

 private:
  PsdOperator a_;
};

class DensityOperator {
 public:
  explicit DensityOperator(const PsdOperator& a, const Tolerances& tol = default_tolerances());
  explicit DensityOperator(const ComplexMatrix& m, const Tolerances& tol = default_tolerances())
      : DensityOperator(PsdOperator(m, tol), tol) {}
  explicit DensityOperator(const HermitianMatrix& m, const Tolerances& tol = default_tolerances())
      : DensityOperator(PsdOperator(m, tol), tol) {}

  const PsdOperator& psd() const { return a_; }
  const ComplexMatrix& matrix() const { return a_.matrix(); }
  int dim() const { return a_.dim(); }

  bool is_nonsingular(const Tolerances& tol = default_tolerances()) const;
  /// Throws InvariantViolation when the state is singular.
  PdOperator as_pd(const Tolerances& tol = default_tolerances()) const;

  operator const PsdOperator&() const { return a_; }  // NOLINT(google-explicit-constructor)

 private:
  PsdOperator a_;
};

class RankOneProjection {
 public:
  /// Requires | ||v|| - 1 | <= 1e-12.
  explicit RankOneProjection(const ComplexVector& v);
  /// Normalizes a nonzero vector.
  static RankOneProjection from_direction(const ComplexVector& v);

  const ComplexVector& vector() const { return v_; }
  int dim() const { return static_cast<int>(v_.size()); }
  ComplexMatrix matrix() const { return v_ * v_.adjoint(); }

  /// tr(P M) = v* M v.
  Complex expectation(const ComplexMatrix& m) const { return v_.dot(m * v_); }

 private:
  ComplexVector v_;
};

/// Transition probability tr PQ = |<p, q>|^2.
double transition_probability(const RankOneProjection& p, const RankOneProjection& q);

/// Standard operator function sum_j f(lambda_j) P_j on a Hermitian matrix.
template <typename F>
ComplexMatrix apply_function(const Eigensystem& eig, F&& f) {
  RealVector fv(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) fv(i) = f(eig.values(i));
  return eig.vectors * fv.asDiagonal() * eig.vectors.adjoint();
}

/// A^p for p in [-1, 1]. For p <= 0 eigenvalues at or below the support
/// cutoff map to 0; for p < 0 that requires `pseudo` unless A is PD.
HermitianMatrix frac_power(const PsdOperator& a, double p, bool pseudo = false,
                           const Tolerances& tol = default_tolerances());

/// Orthogonal projection onto the range of A.
ComplexMatrix support_projection(const PsdOperator& a, const Tolerances& tol = default_tolerances());

/// supp A within supp B.
bool support_contained(const PsdOperator& a, const PsdOperator& b,
                       const Tolerances& tol = default_tolerances());

struct MatrixNorms {
  double hs;
  double op;
};

MatrixNorms norms(const ComplexMatrix& m);
double op_norm(const ComplexMatrix& m);
double hs_norm(const ComplexMatrix& m);

ComplexMatrix identity(int d);

void require_same_dim(int a, int b, const char* what);

}  // namespace chi2lab
