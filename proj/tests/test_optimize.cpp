#include <gtest/gtest.h>

#include <cmath>

#include "chi2lab/divergence.hpp"
#include "chi2lab/optimize.hpp"
#include "chi2lab/random.hpp"
#include "test_helpers.hpp"

using namespace chi2lab;
using testing_util::diag;
using testing_util::pd;
using testing_util::psd;

namespace {

double smallest_eig(const PdOperator& d) { return d.psd().eigensystem().values(d.dim() - 1); }
double largest_eig(const PdOperator& d) { return d.psd().eigensystem().values(0); }

}  // namespace

TEST(Sphere, KStarMinimumOnDiagonalDensity) {
  for (double a : {0.0, 0.5, 1.0}) {
    const KStar ks(pd(diag({0.7, 0.3})), Alpha(a));
    const SphereOptResult r = minimize_over_rank_one([&](const RankOneProjection& p) { return ks(p); }, 2);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, 1.0 / 0.7, 1e-8);
    EXPECT_GE(std::norm(r.argmin.vector()(0)), 1.0 - 1e-6);
  }
}

TEST(Sphere, KStarMaximumOnDiagonalDensity) {
  const KStar ks(pd(diag({0.7, 0.3})), Alpha(0.5));
  const SphereOptResult r = maximize_over_rank_one([&](const RankOneProjection& p) { return ks(p); }, 2);
  EXPECT_NEAR(r.value, 1.0 / 0.3, 1e-8);
  EXPECT_GE(std::norm(r.argmin.vector()(1)), 1.0 - 1e-6);
}

TEST(Sphere, ConstantObjective) {
  const auto c = [](const RankOneProjection&) { return 2.5; };
  EXPECT_EQ(minimize_over_rank_one(c, 3).value, 2.5);
  EXPECT_EQ(maximize_over_rank_one(c, 3).value, 2.5);
}

TEST(Sphere, ExtremaMatchEigensolverOnRandomDensities) {
  Rng rng(91);
  for (int d : {2, 3, 4})
    for (double a : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const PdOperator dens = random_density(d, rng).as_pd();
      const KStar ks(dens, Alpha(a));
      const auto g = [&](const RankOneProjection& p) { return ks(p); };
      EXPECT_NEAR(minimize_over_rank_one(g, d).value, 1.0 / largest_eig(dens), 1e-7);
      EXPECT_NEAR(maximize_over_rank_one(g, d).value, 1.0 / smallest_eig(dens), 1e-7);
    }
}

TEST(Sphere, SubspaceRestriction) {
  const KStar ks(pd(diag({0.5, 0.3, 0.2})), Alpha(0.5));
  SphereOptConfig cfg;
  cfg.subspace = diag({0, 1, 1});
  const SphereOptResult r = minimize_over_rank_one([&](const RankOneProjection& p) { return ks(p); }, 3, cfg);
  EXPECT_NEAR(r.value, 1.0 / 0.3, 1e-8);
}

TEST(Sphere, ConfigValidation) {
  SphereOptConfig cfg;
  cfg.restarts = 0;
  EXPECT_THROW(minimize_over_rank_one([](const RankOneProjection&) { return 0.0; }, 2, cfg),
               std::invalid_argument);
}

TEST(Cone, TraceInfimumIdentity) {
  // B = I, C = 2I: g(X) = tr X^2 / 2 - 2, infimum -2 as X -> 0.
  for (double a : {0.0, 0.5, 1.0}) {
    const PdOperator b = pd(identity(2));
    const PdOperator c = pd(2.0 * identity(2));
    const auto g = [&](const ComplexMatrix& x) {
      return chi2(psd(x), b, Alpha(a)) - chi2(psd(x), c, Alpha(a));
    };
    const ConeOptResult r = infimum_over_pd(g, 2);
    EXPECT_NEAR(r.value, -2.0, 1e-3);
    EXPECT_TRUE(r.at_boundary);
  }
}

TEST(Cone, CommutingPair) {
  // B = I, C = diag(2,1): closed form (1/2) x_11^2 + ... - 1 on diagonal X, inf -1.
  const PdOperator b = pd(identity(2));
  const PdOperator c = pd(diag({2, 1}));
  const auto g = [&](const ComplexMatrix& x) {
    return chi2(psd(x), b, Alpha(0.5)) - chi2(psd(x), c, Alpha(0.5));
  };
  EXPECT_NEAR(infimum_over_pd(g, 2).value, -1.0, 1e-3);
}

TEST(Cone, EqualArgumentsGiveZero) {
  const PdOperator b = pd(diag({1.5, 0.5}));
  const auto g = [&](const ComplexMatrix& x) {
    return chi2(psd(x), b, Alpha(0.5)) - chi2(psd(x), b, Alpha(0.5));
  };
  EXPECT_NEAR(infimum_over_pd(g, 2).value, 0.0, 1e-6);
}

TEST(States, MaximizerIsRankOne) {
  for (double a : {0.0, 0.5, 1.0}) {
    const PdOperator mixed = pd(identity(2) / 2.0);
    const auto g = [&](const ComplexMatrix& x) { return chi2(psd(x), mixed, Alpha(a)); };
    const StateOptResult r = maximize_over_states(g, 2);
    EXPECT_LE(op_norm(r.argmax * r.argmax - r.argmax), 1e-5);
    EXPECT_NEAR(r.argmax.trace().real(), 1.0, 1e-12);
  }
}

TEST(States, MatchesRankOneMaximum) {
  Rng rng(17);
  const PdOperator b = random_pd(2, rng);
  const auto g = [&](const ComplexMatrix& x) { return chi2(psd(x), b, Alpha(0.0)); };
  const StateOptResult r = maximize_over_states(g, 2);
  const SphereOptResult s =
      maximize_over_rank_one([&](const RankOneProjection& p) { return g(p.matrix()); }, 2);
  EXPECT_NEAR(r.value, s.value, 1e-6);
}

TEST(States, ConstantObjective) {
  EXPECT_EQ(maximize_over_states([](const ComplexMatrix&) { return -1.0; }, 3).value, -1.0);
}
