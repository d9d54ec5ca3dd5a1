#include "chi2lab/divergence.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace chi2lab {

namespace {

// sum_{i,j in idx} lambda_i^{-alpha} lambda_j^{alpha-1} |X_ij|^2 with X given
// in the eigenbasis. Every term is nonnegative.
double gram_sum(const RealVector& lambda, const ComplexMatrix& x, double alpha,
                const std::vector<Eigen::Index>& idx) {
  double s = 0.0;
  for (Eigen::Index i : idx) {
    const double left = std::pow(lambda(i), -alpha);
    for (Eigen::Index j : idx) {
      s += left * std::pow(lambda(j), alpha - 1.0) * std::norm(x(i, j));
    }
  }
  return s;
}

std::vector<Eigen::Index> all_indices(Eigen::Index n) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  return idx;
}

double trace_of(const ScalarFunction& f, const Eigensystem& eig) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) s += f(eig.values(i));
  return s;
}

}  // namespace

Alpha::Alpha(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) throw std::invalid_argument("alpha must be in [0, 1]");
}

DivergenceValue DivergenceValue::finite(double v) {
  if (!std::isfinite(v)) throw InvariantViolation("finite divergence payload is not finite");
  if (v < -kNegativeSlack) throw InvariantViolation("divergence payload is negative");
  DivergenceValue out;
  out.value_ = std::max(v, 0.0);
  return out;
}

double DivergenceValue::value() const {
  if (!value_) throw std::logic_error("divergence is infinite");
  return *value_;
}

std::string DivergenceValue::to_string() const {
  if (!value_) return "inf";
  std::ostringstream os;
  os.precision(12);
  os << *value_;
  return os.str();
}

double ScalarFunction::operator()(double t) const {
  const double v = f(t);
  if (!std::isfinite(v)) {
    throw FunctionEvaluationError("scalar function is not finite at t = " + std::to_string(t));
  }
  return v;
}

double ScalarFunction::prime(double t) const {
  if (!derivative) throw FunctionEvaluationError("scalar function has no derivative");
  const double v = derivative(t);
  if (!std::isfinite(v)) {
    throw FunctionEvaluationError("derivative is not finite at t = " + std::to_string(t));
  }
  return v;
}

ScalarFunction ScalarFunction::chi2_generator() {
  return {[](double t) { return (t - 1.0) * (t - 1.0); }, [](double t) { return 2.0 * (t - 1.0); }};
}

ScalarFunction ScalarFunction::square() {
  return {[](double t) { return t * t; }, [](double t) { return 2.0 * t; }};
}

ScalarFunction ScalarFunction::x_log_x() {
  return {[](double t) { return t > 0.0 ? t * std::log(t) : 0.0; },
          [](double t) { return std::log(t) + 1.0; }};
}

double chi2(const PsdOperator& a, const PdOperator& b, Alpha alpha) {
  require_same_dim(a.dim(), b.dim(), "chi2");
  const Eigensystem& eig = b.eigensystem();
  const ComplexMatrix diff = eig.vectors.adjoint() * (a.matrix() - b.matrix()) * eig.vectors;
  return gram_sum(eig.values, diff, alpha.value(), all_indices(b.dim()));
}

DivergenceValue chi2_extended(const PsdOperator& a, const PsdOperator& b, Alpha alpha,
                              const Tolerances& tol) {
  require_same_dim(a.dim(), b.dim(), "chi2_extended");
  if (!support_contained(a, b, tol)) return DivergenceValue::infinite();
  const Eigensystem& eig = b.eigensystem();
  const double cutoff = tol.support * b.lambda_max();
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    if (eig.values(i) > cutoff) support.push_back(i);
  const ComplexMatrix diff = eig.vectors.adjoint() * (a.matrix() - b.matrix()) * eig.vectors;
  return DivergenceValue::finite(gram_sum(eig.values, diff, alpha.value(), support));
}

std::vector<double> default_eps_schedule() { return {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}; }

std::vector<double> chi2_limit_probe(const PsdOperator& a, const PsdOperator& b, Alpha alpha,
                                     const std::vector<double>& eps_schedule) {
  require_same_dim(a.dim(), b.dim(), "chi2_limit_probe");
  if (eps_schedule.empty()) throw std::invalid_argument("epsilon schedule is empty");
  for (std::size_t k = 0; k < eps_schedule.size(); ++k) {
    if (!(eps_schedule[k] > 0.0)) throw std::invalid_argument("epsilon values must be positive");
    if (k > 0 && !(eps_schedule[k] < eps_schedule[k - 1])) {
      throw std::invalid_argument("epsilon schedule must be strictly decreasing");
    }
  }
  std::vector<double> out;
  out.reserve(eps_schedule.size());
  for (double eps : eps_schedule) {
    const PdOperator shifted(HermitianMatrix::symmetrized(b.matrix() + eps * identity(b.dim())));
    out.push_back(chi2(a, shifted, alpha));
  }
  return out;
}

KStar::KStar(const PdOperator& d, Alpha alpha)
    : neg_alpha_(frac_power(d.psd(), -alpha.value()).matrix()),
      alpha_minus_one_(frac_power(d.psd(), alpha.value() - 1.0).matrix()) {}

double KStar::operator()(const RankOneProjection& r) const {
  require_same_dim(r.dim(), dim(), "k_star");
  return r.expectation(neg_alpha_).real() * r.expectation(alpha_minus_one_).real();
}

double k_star(const RankOneProjection& r, const PdOperator& d, Alpha alpha) {
  return KStar(d, alpha)(r);
}

double f_divergence(const PsdOperator& a, const PdOperator& b, const ScalarFunction& f,
                    const Tolerances& tol) {
  require_same_dim(a.dim(), b.dim(), "f_divergence");
  const SpectralDecomposition sa = eigh(a.hermitian(), tol);
  const SpectralDecomposition sb = eigh(b.psd().hermitian(), tol);
  const double cutoff = tol.support * b.psd().lambda_max();
  double s = 0.0;
  for (std::size_t i = 0; i < sa.eigenvalues.size(); ++i) {
    for (std::size_t j = 0; j < sb.eigenvalues.size(); ++j) {
      const double bj = sb.eigenvalues[j];
      if (!(bj > cutoff)) throw InvariantViolation("f-divergence needs a positive definite B");
      const double overlap = (sa.projections[i] * sb.projections[j]).trace().real();
      s += bj * f(std::max(sa.eigenvalues[i], 0.0) / bj) * overlap;
    }
  }
  return s;
}

double bregman(const PdOperator& a, const PdOperator& b, const ScalarFunction& f) {
  require_same_dim(a.dim(), b.dim(), "bregman");
  if (!f.has_derivative()) throw FunctionEvaluationError("Bregman divergence needs f'");
  const Eigensystem& eb = b.eigensystem();
  const ComplexMatrix fprime_b = apply_function(eb, [&](double t) { return f.prime(t); });
  const double linear = (fprime_b * (a.matrix() - b.matrix())).trace().real();
  return trace_of(f, a.eigensystem()) - trace_of(f, eb) - linear;
}

double jensen(const PsdOperator& a, const PsdOperator& b, const ScalarFunction& f) {
  require_same_dim(a.dim(), b.dim(), "jensen");
  const PsdOperator mid(HermitianMatrix::symmetrized((a.matrix() + b.matrix()) * 0.5));
  return 0.5 * (trace_of(f, a.eigensystem()) + trace_of(f, b.eigensystem())) -
         trace_of(f, mid.eigensystem());
}

double trace_form(const PdOperator& b, const ComplexMatrix& x, Alpha alpha) {
  require_same_dim(static_cast<int>(x.rows()), b.dim(), "trace_form");
  const Eigensystem& eig = b.eigensystem();
  const ComplexMatrix xb = eig.vectors.adjoint() * x * eig.vectors;
  return gram_sum(eig.values, xb, alpha.value(), all_indices(b.dim()));
}

}  // namespace chi2lab
