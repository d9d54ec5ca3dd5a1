#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "chi2lab/divergence.hpp"
#include "chi2lab/random.hpp"
#include "test_helpers.hpp"

using namespace chi2lab;
using testing_util::diag;
using testing_util::pd;
using testing_util::psd;
using testing_util::real2;

namespace {

// Direct trace formula with powers from Eigen's own eigensolver.
double reference_chi2(const ComplexMatrix& a, const ComplexMatrix& b, double alpha) {
  const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(b);
  const auto pw = [&](double p) {
    return ComplexMatrix(es.eigenvectors() * es.eigenvalues().array().pow(p).matrix().asDiagonal() *
                         es.eigenvectors().adjoint());
  };
  const ComplexMatrix delta = a - b;
  return (pw(-alpha) * delta * pw(alpha - 1.0) * delta).trace().real();
}

const double kAlphas[] = {0.0, 0.25, 0.5, 0.75, 1.0};

}  // namespace

TEST(Alpha, Range) {
  EXPECT_THROW(Alpha(-0.1), std::invalid_argument);
  EXPECT_THROW(Alpha(1.1), std::invalid_argument);
  EXPECT_THROW(Alpha(std::nan("")), std::invalid_argument);
  EXPECT_NO_THROW(Alpha(0.0));
  EXPECT_NO_THROW(Alpha(1.0));
}

TEST(DivergenceValue, Semantics) {
  EXPECT_EQ(DivergenceValue::finite(-1e-12).value(), 0.0);
  EXPECT_THROW(DivergenceValue::finite(-1e-3), InvariantViolation);
  EXPECT_THROW(DivergenceValue::infinite().value(), std::logic_error);
  EXPECT_EQ(DivergenceValue::infinite().to_string(), "inf");
  EXPECT_EQ(DivergenceValue::finite(10.0).to_string(), "10");
}

TEST(Chi2, Examples) {
  for (double a : kAlphas) {
    EXPECT_EQ(chi2(psd(identity(2)), pd(identity(2)), Alpha(a)), 0.0);
    EXPECT_NEAR(chi2(psd(3.0 * identity(2)), pd(identity(2)), Alpha(a)), 8.0, 1e-13);
    // Commuting case: sum (a_i - b_i)^2 / b_i = 1/1 + 1/2.
    EXPECT_NEAR(chi2(psd(diag({2, 1})), pd(diag({1, 2})), Alpha(a)), 1.5, 1e-13);
  }
  EXPECT_NEAR(chi2(psd(diag({1, 0})), pd(real2(2, 3, 3, 5)), Alpha(0.0)), 10.0, 1e-9);
}

TEST(Chi2, CounterexampleSquareRoot) {
  // B_1 = S^2 with S = [[1,1],[1,2]].
  const ComplexMatrix s = real2(1, 1, 1, 2);
  EXPECT_EQ(ComplexMatrix(s * s), real2(2, 3, 3, 5));
}

TEST(Chi2, MatchesDirectTraceFormula) {
  Rng rng(21);
  for (double a : kAlphas)
    for (int d : {2, 3, 4})
      for (int t = 0; t < 10; ++t) {
        const PsdOperator x = random_psd(d, rng.uniform_int(0, d), rng);
        const PdOperator b = random_pd(d, rng);
        const double ref = reference_chi2(x.matrix(), b.matrix(), a);
        EXPECT_NEAR(chi2(x, b, Alpha(a)), ref, 1e-10 * (1.0 + std::abs(ref)));
      }
}

TEST(Chi2, DimensionMismatch) {
  EXPECT_THROW(chi2(psd(identity(2)), pd(identity(3)), Alpha(0.5)), DimensionMismatch);
}

TEST(Chi2Extended, Examples) {
  const RankOneProjection p(ComplexVector::Unit(2, 0));
  for (double a : kAlphas) {
    EXPECT_EQ(chi2_extended(psd(p.matrix()), psd(p.matrix()), Alpha(a)), DivergenceValue::finite(0.0));
    EXPECT_FALSE(chi2_extended(psd(identity(2)), psd(diag({1, 0})), Alpha(a)).is_finite());
    EXPECT_NEAR(chi2_extended(psd(diag({2, 0})), psd(diag({1, 0})), Alpha(a)).value(), 1.0, 1e-14);
  }
}

TEST(Chi2Extended, AgreesWithChi2OnPd) {
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const PsdOperator a = random_psd(3, 2, rng);
    const PdOperator b = random_pd(3, rng);
    EXPECT_NEAR(chi2_extended(a, b, Alpha(0.3)).value(), chi2(a, b, Alpha(0.3)), 1e-12);
  }
}

TEST(LimitProbe, Examples) {
  const std::vector<double> eps = default_eps_schedule();
  for (double a : kAlphas) {
    const std::vector<double> zero = chi2_limit_probe(psd(diag({1, 0})), psd(diag({1, 0})), Alpha(a), eps);
    // Only the kernel block eps I moves: the value is eps + (first-order shift on the support).
    EXPECT_LE(zero.back(), 1e-5);
    for (std::size_t k = 1; k < zero.size(); ++k) EXPECT_LT(zero[k], zero[k - 1]);

    const std::vector<double> grow =
        chi2_limit_probe(psd(diag({1, 0}) + identity(2) / 3.0), psd(diag({1, 0})), Alpha(a), eps);
    for (std::size_t k = 1; k < grow.size(); ++k) EXPECT_GT(grow[k], grow[k - 1]);
    EXPECT_GT(grow.back(), 1e4);

    const std::vector<double> tail = chi2_limit_probe(psd(diag({2, 0})), psd(diag({1, 0})), Alpha(a), eps);
    EXPECT_NEAR(tail.back(), 1.0, 1e-4);
  }
}

TEST(LimitProbe, ScheduleValidation) {
  const PsdOperator a = psd(identity(2));
  EXPECT_THROW(chi2_limit_probe(a, a, Alpha(0.5), {}), std::invalid_argument);
  EXPECT_THROW(chi2_limit_probe(a, a, Alpha(0.5), {1e-2, 1e-1}), std::invalid_argument);
  EXPECT_THROW(chi2_limit_probe(a, a, Alpha(0.5), {1e-1, 0.0}), std::invalid_argument);
}

TEST(KStar, Examples) {
  const PdOperator d = pd(diag({0.7, 0.3}));
  for (double a : kAlphas) {
    EXPECT_NEAR(k_star(RankOneProjection(ComplexVector::Unit(2, 0)), d, Alpha(a)), 1.0 / 0.7, 1e-13);
    EXPECT_NEAR(k_star(RankOneProjection(ComplexVector::Unit(2, 1)), d, Alpha(a)), 1.0 / 0.3, 1e-13);
  }
  const RankOneProjection v = RankOneProjection::from_direction(ComplexVector::Ones(2));
  const double expected = std::pow((std::pow(0.7, -0.5) + std::pow(0.3, -0.5)) / 2.0, 2);
  EXPECT_NEAR(k_star(v, d, Alpha(0.5)), expected, 1e-13);
  const KStar cached(d, Alpha(0.5));
  EXPECT_NEAR(cached(v), expected, 1e-13);
}

TEST(KStar, ConsistentWithChi2OnDensities) {
  Rng rng(12);
  for (double a : kAlphas)
    for (int t = 0; t < 20; ++t) {
      const PdOperator dens = random_density(3, rng).as_pd();
      const RankOneProjection r = random_rank_one(3, rng);
      EXPECT_NEAR(k_star(r, dens, Alpha(a)), chi2(psd(r.matrix()), dens, Alpha(a)) + 1.0, 1e-9);
    }
}

TEST(KStar, GeneralTraceOffset) {
  // For tr D != 1 the product formula is K + 2 - tr D.
  Rng rng(13);
  const PdOperator d = random_pd(3, rng);
  const RankOneProjection r = random_rank_one(3, rng);
  EXPECT_NEAR(k_star(r, d, Alpha(0.4)), chi2(psd(r.matrix()), d, Alpha(0.4)) + 2.0 - d.trace(), 1e-10);
}

TEST(FDivergence, Examples) {
  const ScalarFunction f = ScalarFunction::chi2_generator();
  EXPECT_NEAR(f_divergence(psd(identity(2)), pd(identity(2)), f), 0.0, 1e-15);
  EXPECT_NEAR(f_divergence(psd(diag({2, 1})), pd(diag({1, 2})), f), 1.5, 1e-14);
  EXPECT_NEAR(f_divergence(psd(diag({2, 1})), pd(diag({1, 2})), f),
              chi2(psd(diag({2, 1})), pd(diag({1, 2})), Alpha(0.0)), 1e-14);
}

TEST(FDivergence, EqualsEndpointChi2OnNoncommutingPairs) {
  Rng rng(31);
  const ScalarFunction f = ScalarFunction::chi2_generator();
  for (int t = 0; t < 20; ++t) {
    const PdOperator a = random_pd(2, rng);
    const PdOperator b = random_pd(2, rng);
    ASSERT_GT(op_norm(a.matrix() * b.matrix() - b.matrix() * a.matrix()), 1e-3);
    EXPECT_NEAR(f_divergence(a, b, f), chi2(a, b, Alpha(0.0)), 1e-10);
    EXPECT_NEAR(f_divergence(a, b, f), chi2(a, b, Alpha(1.0)), 1e-10);
  }
}

TEST(Bregman, Examples) {
  const ScalarFunction sq = ScalarFunction::square();
  EXPECT_NEAR(bregman(pd(diag({2, 1})), pd(diag({2, 1})), sq), 0.0, 1e-14);
  EXPECT_NEAR(bregman(pd(diag({2, 1})), pd(diag({1, 2})), sq), 2.0, 1e-13);
  // Commuting t log t: sum a (log a - log b) - (a - b).
  const double a1 = 2.0, a2 = 0.5, b1 = 1.0, b2 = 3.0;
  const double umegaki = a1 * (std::log(a1) - std::log(b1)) - (a1 - b1) + a2 * (std::log(a2) - std::log(b2)) -
                         (a2 - b2);
  EXPECT_NEAR(bregman(pd(diag({a1, a2})), pd(diag({b1, b2})), ScalarFunction::x_log_x()), umegaki, 1e-13);
}

TEST(Bregman, NeedsDerivative) {
  ScalarFunction f{[](double t) { return t * t; }, nullptr};
  EXPECT_THROW(bregman(pd(identity(2)), pd(identity(2)), f), FunctionEvaluationError);
}

TEST(Jensen, Examples) {
  const ScalarFunction sq = ScalarFunction::square();
  EXPECT_NEAR(jensen(psd(diag({2, 1})), psd(diag({2, 1})), sq), 0.0, 1e-14);
  EXPECT_NEAR(jensen(psd(diag({2, 1})), psd(diag({1, 2})), sq), 0.5, 1e-13);
  Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    const PdOperator a = random_pd(3, rng);
    const PdOperator b = random_pd(3, rng);
    EXPECT_EQ(jensen(a, b, ScalarFunction::x_log_x()), jensen(b, a, ScalarFunction::x_log_x()));
  }
}

TEST(TraceForm, MonotoneUnderLoewnerOrder) {
  Rng rng(77);
  for (double a : kAlphas)
    for (int t = 0; t < 20; ++t) {
      const PdOperator b = random_pd(3, rng);
      const PdOperator c = pd(b.matrix() + random_psd(3, 2, rng).matrix());
      const ComplexMatrix x = random_hermitian(3, rng).matrix();
      EXPECT_GE(trace_form(b, x, Alpha(a)) - trace_form(c, x, Alpha(a)), -1e-9);
    }
}
