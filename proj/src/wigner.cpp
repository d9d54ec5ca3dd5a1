#include <cmath>

#include "chi2lab/reconstruction.hpp"

namespace chi2lab {

namespace {

constexpr double kSymmetryTol = 1e-6;
constexpr double kKindTol = 1e-6;
constexpr double kOrthogonalityTol = 1e-8;
constexpr double kTransitionTol = 1e-8;

ComplexVector superposition(int d, int i, int j, Complex cj) {
  ComplexVector v = ComplexVector::Zero(d);
  v(i) = 1.0;
  v(j) = cj;
  return v.normalized();
}

// e_i, (e_1 + e_j)/sqrt2 and (e_1 + i e_2)/sqrt2.
std::vector<RankOneProjection> wigner_probes(int d) {
  std::vector<RankOneProjection> out;
  for (int i = 0; i < d; ++i) out.emplace_back(ComplexVector::Unit(d, i));
  for (int j = 1; j < d; ++j) out.emplace_back(superposition(d, 0, j, 1.0));
  out.emplace_back(superposition(d, 0, 1, Complex(0.0, 1.0)));
  return out;
}

}  // namespace

std::string to_string(ConjugationKind kind) {
  return kind == ConjugationKind::unitary ? "unitary" : "antiunitary";
}

ConjugationMap::ConjugationMap(ComplexMatrix u, ConjugationKind kind)
    : u_(std::move(u)), kind_(kind) {
  if (u_.rows() != u_.cols() || u_.rows() == 0) throw DimensionMismatch("U must be square");
  if (op_norm(u_.adjoint() * u_ - identity(dim())) > 1e-8) {
    throw InvariantViolation("conjugation matrix is not unitary");
  }
}

ComplexMatrix ConjugationMap::apply(const ComplexMatrix& a) const {
  require_same_dim(static_cast<int>(a.rows()), dim(), "ConjugationMap::apply");
  if (kind_ == ConjugationKind::unitary) return u_ * a * u_.adjoint();
  return u_ * a.conjugate() * u_.adjoint();
}

RankOneProjection ConjugationMap::apply(const RankOneProjection& p) const {
  require_same_dim(p.dim(), dim(), "ConjugationMap::apply");
  const ComplexVector v =
      kind_ == ConjugationKind::unitary ? ComplexVector(u_ * p.vector())
                                        : ComplexVector(u_ * p.vector().conjugate());
  return RankOneProjection::from_direction(v);
}

ConjugationMap wigner_synthesize(const ProjectionMap& xi, int d) {
  if (d < 2) throw std::invalid_argument("Wigner synthesis needs d >= 2");
  const std::vector<RankOneProjection> probes = wigner_probes(d);
  std::vector<RankOneProjection> images;
  images.reserve(probes.size());
  for (const auto& p : probes) {
    images.push_back(xi(p));
    require_same_dim(images.back().dim(), d, "wigner_synthesize");
  }

  double violation = 0.0;
  for (std::size_t a = 0; a < probes.size(); ++a) {
    for (std::size_t b = a + 1; b < probes.size(); ++b) {
      violation = std::max(violation, std::abs(transition_probability(images[a], images[b]) -
                                               transition_probability(probes[a], probes[b])));
    }
  }
  if (violation > kSymmetryTol) {
    throw NotASymmetry("map changes probe transition probabilities by " + std::to_string(violation));
  }

  // Columns u_i span xi(e_i e_i*); the phase of u_j relative to u_1 is read
  // off xi of (e_1 + e_j)/sqrt2, whose vector w has (u_j* w)(w* u_1) = e^{i theta}/2.
  ComplexMatrix u(d, d);
  for (int i = 0; i < d; ++i) u.col(i) = images[static_cast<std::size_t>(i)].vector();
  for (int j = 1; j < d; ++j) {
    const ComplexVector& w = images[static_cast<std::size_t>(d + j - 1)].vector();
    const Complex overlap = u.col(j).dot(w) * w.dot(u.col(0));
    if (std::abs(overlap) < 0.25) {
      throw InconsistentOracle("superposition image does not overlap its components");
    }
    u.col(j) *= overlap / std::abs(overlap);
  }

  // Global phase: largest-magnitude entry of the first column real positive.
  Eigen::Index top = 0;
  u.col(0).cwiseAbs().maxCoeff(&top);
  u *= std::conj(u(top, 0)) / std::abs(u(top, 0));

  const RankOneProjection& twisted = probes.back();
  const ComplexVector& target = images.back().vector();
  const double miss_unitary = 1.0 - std::norm(target.dot(u * twisted.vector()));
  const double miss_anti = 1.0 - std::norm(target.dot(u * twisted.vector().conjugate()));
  if (std::min(miss_unitary, miss_anti) > kKindTol) {
    throw InconsistentOracle("neither the unitary nor the antiunitary prediction fits");
  }
  ConjugationMap map(u, miss_unitary <= miss_anti ? ConjugationKind::unitary
                                                  : ConjugationKind::antiunitary);

  double probe_residual = 0.0;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    probe_residual = std::max(
        probe_residual, op_norm(map.apply(probes[k]).matrix() - images[k].matrix()));
  }
  if (probe_residual > kSymmetryTol) {
    throw InconsistentOracle("synthesized map misses a probe by " + std::to_string(probe_residual));
  }
  return map;
}

CheckResult check_orthogonality_preservation(const ProjectionMap& xi, int d, int samples,
                                             std::uint64_t seed) {
  double worst = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      worst = std::max(worst, transition_probability(xi(RankOneProjection(ComplexVector::Unit(d, i))),
                                                     xi(RankOneProjection(ComplexVector::Unit(d, j)))));
    }
  }
  Rng rng(seed, {0x4f52u, static_cast<std::uint64_t>(d)});
  for (int s = 0; s < samples; ++s) {
    const ComplexMatrix w = random_unitary(d, rng);
    const RankOneProjection p(w.col(0));
    const RankOneProjection q(w.col(1));
    worst = std::max(worst, transition_probability(xi(p), xi(q)));
  }
  return {worst <= kOrthogonalityTol, worst};
}

CheckResult check_transition_probabilities(const ProjectionMap& xi, int d, int samples,
                                           std::uint64_t seed) {
  double worst = 0.0;
  const auto compare = [&](const RankOneProjection& p, const RankOneProjection& r) {
    worst = std::max(worst, std::abs(transition_probability(xi(p), xi(r)) -
                                     transition_probability(p, r)));
  };
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      compare(RankOneProjection(ComplexVector::Unit(d, i)), RankOneProjection(ComplexVector::Unit(d, j)));
    }
  }
  Rng rng(seed, {0x5452u, static_cast<std::uint64_t>(d)});
  for (int s = 0; s < samples; ++s) {
    const RankOneProjection p = random_rank_one(d, rng);
    const RankOneProjection r = random_rank_one(d, rng);
    compare(p, r);
  }
  return {worst <= kTransitionTol, worst};
}

}  // namespace chi2lab
