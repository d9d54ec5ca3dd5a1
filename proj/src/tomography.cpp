#include <algorithm>
#include <cmath>

#include "chi2lab/reconstruction.hpp"

namespace chi2lab {

namespace {

constexpr double kAlphaDegeneracy = 1e-9;
constexpr double kFitResidualTol = 1e-6;
constexpr double kNegativeCoefficientTol = 1e-8;

enum class Basis { endpoint, half, generic };

Basis basis_for(double alpha) {
  if (alpha < kAlphaDegeneracy || 1.0 - alpha < kAlphaDegeneracy) return Basis::endpoint;
  if (std::abs(alpha - 0.5) < kAlphaDegeneracy) return Basis::half;
  return Basis::generic;
}

std::size_t basis_size(Basis b) {
  switch (b) {
    case Basis::endpoint: return 3;
    case Basis::half: return 4;
    case Basis::generic: return 5;
  }
  return 5;
}

// Columns: 1, 1/t, 1/(1-t), t^{-a}(1-t)^{a-1}, (1-t)^{-a} t^{a-1}. At the
// endpoints the last two coincide with 1/(1-t) and 1/t; at a = 1/2 they
// coincide with each other.
Eigen::MatrixXd design_matrix(const std::vector<double>& ts, double alpha, Basis basis) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(ts.size()), static_cast<Eigen::Index>(basis_size(basis)));
  for (std::size_t r = 0; r < ts.size(); ++r) {
    const double t = ts[r];
    const auto i = static_cast<Eigen::Index>(r);
    x(i, 0) = 1.0;
    x(i, 1) = 1.0 / t;
    x(i, 2) = 1.0 / (1.0 - t);
    if (basis != Basis::endpoint) x(i, 3) = std::pow(t, -alpha) * std::pow(1.0 - t, alpha - 1.0);
    if (basis == Basis::generic) x(i, 4) = std::pow(1.0 - t, -alpha) * std::pow(t, alpha - 1.0);
  }
  return x;
}

// Inverts v -> tr(M P_v) over tomography_probes(d) for Hermitian M.
ComplexMatrix assemble_from_expectations(int d, const std::vector<double>& m) {
  ComplexMatrix out(d, d);
  for (int i = 0; i < d; ++i) out(i, i) = m[static_cast<std::size_t>(i)];
  std::size_t k = static_cast<std::size_t>(d);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      const double mean_diag = 0.5 * (out(i, i).real() + out(j, j).real());
      const double re = m[k] - mean_diag;
      const double im = mean_diag - m[k + 1];
      out(i, j) = Complex(re, im);
      out(j, i) = Complex(re, -im);
      k += 2;
    }
  }
  return out;
}

}  // namespace

DivergenceOracle::DivergenceOracle(Query exact, double noise_sigma, std::uint64_t noise_seed)
    : exact_(std::move(exact)), sigma_(noise_sigma), noise_(noise_seed) {
  if (!(noise_sigma >= 0.0)) throw std::invalid_argument("noise sigma must be nonnegative");
}

DivergenceOracle DivergenceOracle::hidden_first_argument(const PsdOperator& hidden, Alpha alpha,
                                                         double noise_sigma,
                                                         std::uint64_t noise_seed) {
  return DivergenceOracle(
      [hidden, alpha](const ComplexMatrix& c) {
        return chi2(hidden, PdOperator(HermitianMatrix::symmetrized(c)), alpha);
      },
      noise_sigma, noise_seed);
}

DivergenceOracle DivergenceOracle::hidden_density(const DensityOperator& hidden, Alpha alpha,
                                                  double noise_sigma, std::uint64_t noise_seed) {
  const PdOperator d = hidden.as_pd();
  return DivergenceOracle(
      [d, alpha](const ComplexMatrix& r) {
        return chi2(PsdOperator(HermitianMatrix::symmetrized(r)), d, alpha) + 1.0;
      },
      noise_sigma, noise_seed);
}

double DivergenceOracle::query(const ComplexMatrix& probe) {
  ++count_;
  const double v = exact_(probe);
  return sigma_ > 0.0 ? v + sigma_ * noise_.normal() : v;
}

void ProbeSchedule::validate(std::size_t min_count) const {
  if (t_values.size() < min_count) {
    throw std::invalid_argument("probe schedule needs at least " + std::to_string(min_count) +
                                " values");
  }
  std::vector<double> sorted = t_values;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (!(sorted[k] > 0.0 && sorted[k] < 1.0)) {
      throw std::invalid_argument("probe schedule values must lie in (0, 1)");
    }
    if (k > 0 && sorted[k] == sorted[k - 1]) {
      throw std::invalid_argument("probe schedule values must be distinct");
    }
  }
}

std::vector<RankOneProjection> tomography_probes(int d) {
  std::vector<RankOneProjection> out;
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i) out.emplace_back(ComplexVector::Unit(d, i));
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      ComplexVector plus = ComplexVector::Zero(d);
      plus(i) = s;
      plus(j) = s;
      ComplexVector twisted = ComplexVector::Zero(d);
      twisted(i) = s;
      twisted(j) = Complex(0.0, s);
      out.emplace_back(plus);
      out.emplace_back(twisted);
    }
  }
  return out;
}

PsdOperator quadratic_form_tomography(DivergenceOracle& oracle, int d, Alpha alpha,
                                      const ProbeSchedule& schedule) {
  if (d < 2) throw std::invalid_argument("tomography needs d >= 2");
  const Basis basis = basis_for(alpha.value());
  schedule.validate(basis_size(basis));
  const Eigen::MatrixXd x = design_matrix(schedule.t_values, alpha.value(), basis);
  const auto qr = x.colPivHouseholderQr();
  const ComplexMatrix eye = identity(d);

  std::vector<double> expectations;
  for (const RankOneProjection& probe : tomography_probes(d)) {
    const ComplexMatrix p = probe.matrix();
    const ComplexMatrix q = eye - p;
    Eigen::VectorXd y(x.rows());
    for (std::size_t r = 0; r < schedule.t_values.size(); ++r) {
      const double t = schedule.t_values[r];
      y(static_cast<Eigen::Index>(r)) = oracle.query(t * p + ((1.0 - t) / (d - 1)) * q);
    }
    const Eigen::VectorXd coef = qr.solve(y);
    const double scale = std::max(1.0, y.cwiseAbs().maxCoeff());
    const double residual = (x * coef - y).cwiseAbs().maxCoeff();
    if (residual > kFitResidualTol * scale) {
      throw IllConditionedProbe("probe-function fit residual " + std::to_string(residual) +
                                " exceeds tolerance");
    }
    // Coefficient of 1/t: tr A^2 P at the endpoints, tr PAPA = (tr AP)^2 otherwise.
    const double c = coef(1);
    if (c < -kNegativeCoefficientTol * scale) {
      throw InconsistentOracle("negative 1/t coefficient " + std::to_string(c));
    }
    expectations.push_back(std::max(c, 0.0));
  }

  if (basis == Basis::endpoint) {
    const PsdOperator square = PsdOperator::clamped(
        HermitianMatrix::symmetrized(assemble_from_expectations(d, expectations)));
    return PsdOperator::clamped(frac_power(square, 0.5));
  }
  for (double& e : expectations) e = std::sqrt(e);
  return PsdOperator::clamped(HermitianMatrix::symmetrized(assemble_from_expectations(d, expectations)));
}

}  // namespace chi2lab
