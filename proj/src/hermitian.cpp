#include "chi2lab/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace chi2lab {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kJacobiRelTol = 1e-14;
constexpr double kHermitianRelTol = 1e-12;

void require_square_finite(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionMismatch("matrix must be square and nonempty, got " + std::to_string(m.rows()) +
                            "x" + std::to_string(m.cols()));
  }
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw InvariantViolation("matrix has non-finite entries");
    }
  }
}

const ComplexMatrix& validated(const ComplexMatrix& m) {
  require_square_finite(m);
  return m;
}

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m, Unchecked)
    : m_((m + m.adjoint()) * 0.5) {
  for (Eigen::Index i = 0; i < m_.rows(); ++i) m_(i, i) = Complex(m_(i, i).real(), 0.0);
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m)
    : HermitianMatrix(validated(m), Unchecked{}) {
  const double skew = op_norm(m - m.adjoint()) * 0.5;
  if (skew > kHermitianRelTol * std::max(1.0, op_norm(m_))) {
    throw InvariantViolation("matrix is not Hermitian (skew part " + std::to_string(skew) + ")");
  }
}

HermitianMatrix HermitianMatrix::symmetrized(const ComplexMatrix& m) {
  return HermitianMatrix(validated(m), Unchecked{});
}

Eigensystem jacobi_eigensystem(const HermitianMatrix& h) {
  ComplexMatrix a = h.matrix();
  const Eigen::Index n = a.rows();
  ComplexMatrix v = ComplexMatrix::Identity(n, n);
  const double threshold = kJacobiRelTol * a.norm();

  int sweep = 0;
  while (off_diagonal_norm(a) > threshold) {
    if (++sweep > kMaxSweeps) {
      throw SolverFailure("Jacobi eigensolver did not converge in " + std::to_string(kMaxSweeps) +
                          " sweeps");
    }
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag == 0.0) continue;
        // Phase rotation makes the (p,q) entry real, then a real symmetric
        // Schur rotation annihilates it. G = diag(1, e^{-i phi}) * R.
        const Complex phase = a(p, q) / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex gpp = c;
        const Complex gpq = s;
        const Complex gqp = -s * std::conj(phase);
        const Complex gqq = c * std::conj(phase);

        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * gpp + akq * gqp;
          a(k, q) = akp * gpq + akq * gqq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
          a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * gpp + vkq * gqp;
          v(k, q) = vkp * gpq + vkq * gqq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return a(i, i).real() > a(j, j).real();
  });
  Eigensystem out{RealVector(n), ComplexMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]).real();
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

int SpectralDecomposition::dim() const {
  return projections.empty() ? 0 : static_cast<int>(projections.front().rows());
}

ComplexMatrix SpectralDecomposition::reassemble() const {
  const int d = dim();
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (std::size_t j = 0; j < eigenvalues.size(); ++j) m += eigenvalues[j] * projections[j];
  return m;
}

SpectralDecomposition eigh(const HermitianMatrix& m, const Tolerances& tol) {
  const Eigensystem eig = jacobi_eigensystem(m);
  const Eigen::Index n = eig.values.size();
  const double delta = tol.cluster * std::max(1.0, std::abs(eig.values(0)));

  SpectralDecomposition out;
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && eig.values(end - 1) - eig.values(end) <= delta) ++end;
    const Eigen::Index count = end - start;
    const auto block = eig.vectors.middleCols(start, count);
    out.eigenvalues.push_back(eig.values.segment(start, count).mean());
    out.projections.push_back(block * block.adjoint());
    out.multiplicities.push_back(static_cast<int>(count));
    start = end;
  }
  return out;
}

PsdOperator::PsdOperator(const HermitianMatrix& m, const Tolerances& tol)
    : m_(m), eig_(jacobi_eigensystem(m)) {
  const double lmax = lambda_max();
  const double floor = -tol.psd * std::max(1.0, lmax);
  if (lambda_min() < floor) {
    throw InvariantViolation("operator is not positive semidefinite (lambda_min = " +
                             std::to_string(lambda_min()) + ")");
  }
  if (lambda_min() < 0.0) {
    for (Eigen::Index i = 0; i < eig_.values.size(); ++i)
      eig_.values(i) = std::max(0.0, eig_.values(i));
    m_ = HermitianMatrix::symmetrized(eig_.vectors * eig_.values.asDiagonal() *
                                      eig_.vectors.adjoint());
  }
}

PsdOperator PsdOperator::clamped(const HermitianMatrix& m) {
  Eigensystem eig = jacobi_eigensystem(m);
  bool changed = false;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) < 0.0) {
      eig.values(i) = 0.0;
      changed = true;
    }
  }
  if (!changed) return PsdOperator(m, std::move(eig));
  auto h = HermitianMatrix::symmetrized(eig.vectors * eig.values.asDiagonal() *
                                        eig.vectors.adjoint());
  return PsdOperator(std::move(h), std::move(eig));
}

double PsdOperator::trace() const { return matrix().trace().real(); }

PdOperator::PdOperator(const PsdOperator& a, const Tolerances& tol) : a_(a) {
  if (!(a_.lambda_min() > tol.pd * a_.lambda_max())) {
    throw InvariantViolation("operator is not positive definite (lambda_min = " +
                             std::to_string(a_.lambda_min()) + ")");
  }
}

DensityOperator::DensityOperator(const PsdOperator& a, const Tolerances&) : a_(a) {
  if (std::abs(a_.trace() - 1.0) > 1e-10) {
    throw InvariantViolation("density operator must have unit trace (trace = " +
                             std::to_string(a_.trace()) + ")");
  }
}

bool DensityOperator::is_nonsingular(const Tolerances& tol) const {
  return a_.lambda_min() > tol.pd * a_.lambda_max();
}

PdOperator DensityOperator::as_pd(const Tolerances& tol) const { return PdOperator(a_, tol); }

RankOneProjection::RankOneProjection(const ComplexVector& v) : v_(v) {
  if (v_.size() == 0) throw DimensionMismatch("rank-one projection needs a nonempty vector");
  if (std::abs(v_.norm() - 1.0) > 1e-12) {
    throw InvariantViolation("rank-one projection vector is not unit length");
  }
}

RankOneProjection RankOneProjection::from_direction(const ComplexVector& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw InvariantViolation("cannot normalize a zero or non-finite direction");
  }
  return RankOneProjection(v / n);
}

double transition_probability(const RankOneProjection& p, const RankOneProjection& q) {
  require_same_dim(p.dim(), q.dim(), "transition_probability");
  return std::norm(p.vector().dot(q.vector()));
}

HermitianMatrix frac_power(const PsdOperator& a, double p, bool pseudo, const Tolerances& tol) {
  if (!(p >= -1.0 && p <= 1.0)) throw std::invalid_argument("frac_power exponent must be in [-1, 1]");
  const Eigensystem& eig = a.eigensystem();
  const double cutoff = tol.support * a.lambda_max();
  if (p < 0.0 && !pseudo && !(a.lambda_min() > tol.pd * a.lambda_max())) {
    throw SingularityError("negative power of a singular operator; request the pseudo-power");
  }
  // Positive powers are continuous at 0, so every eigenvalue keeps its
  // exact image; nonpositive powers are taken on the support only.
  const auto f = [&](double lambda) {
    if (p > 0.0) return std::pow(std::max(lambda, 0.0), p);
    return lambda > cutoff ? std::pow(lambda, p) : 0.0;
  };
  return HermitianMatrix::symmetrized(apply_function(eig, f));
}

ComplexMatrix support_projection(const PsdOperator& a, const Tolerances& tol) {
  const Eigensystem& eig = a.eigensystem();
  const double cutoff = tol.support * a.lambda_max();
  return apply_function(eig, [&](double lambda) { return lambda > cutoff ? 1.0 : 0.0; });
}

bool support_contained(const PsdOperator& a, const PsdOperator& b, const Tolerances& tol) {
  require_same_dim(a.dim(), b.dim(), "support_contained");
  const ComplexMatrix kernel = identity(b.dim()) - support_projection(b, tol);
  const ComplexMatrix leak = kernel * a.matrix() * kernel;
  return op_norm(leak) <= tol.support * std::max(1.0, op_norm(a.matrix()));
}

double hs_norm(const ComplexMatrix& m) { return m.norm(); }

double op_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.norm() == 0.0) return 0.0;
  const ComplexMatrix gram = m.adjoint() * m;
  const Eigensystem eig = jacobi_eigensystem(HermitianMatrix::symmetrized(gram));
  return std::sqrt(std::max(0.0, eig.values(0)));
}

MatrixNorms norms(const ComplexMatrix& m) {
  const double hs = hs_norm(m);
  // The Gram-matrix route can overshoot hs by an ulp or two.
  return {hs, std::min(op_norm(m), hs)};
}

ComplexMatrix identity(int d) { return ComplexMatrix::Identity(d, d); }

void require_same_dim(int a, int b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                            " vs " + std::to_string(b) + ")");
  }
}

}  // namespace chi2lab
