#include "chi2lab/random.hpp"

#include <string>

namespace chi2lab {

namespace {

void require_dim(int d) {
  if (d < 2) throw std::invalid_argument("ensemble dimension must be at least 2");
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> labels) {
  std::vector<std::uint32_t> words;
  words.push_back(static_cast<std::uint32_t>(seed));
  words.push_back(static_cast<std::uint32_t>(seed >> 32));
  for (std::uint64_t l : labels) {
    words.push_back(static_cast<std::uint32_t>(l));
    words.push_back(static_cast<std::uint32_t>(l >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  engine_.seed(seq);
}

EnsembleKind parse_ensemble_kind(std::string_view name) {
  if (name == "unitary") return EnsembleKind::unitary;
  if (name == "density") return EnsembleKind::density;
  if (name == "pd") return EnsembleKind::pd;
  if (name == "psd_rank_r") return EnsembleKind::psd_rank_r;
  if (name == "rank_one_projection") return EnsembleKind::rank_one_projection;
  throw std::invalid_argument("unknown ensemble kind: " + std::string(name));
}

ComplexMatrix gaussian_matrix(int rows, int cols, Rng& rng) {
  ComplexMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = rng.complex_normal();
  return g;
}

ComplexMatrix gaussian_matrix(int d, Rng& rng) { return gaussian_matrix(d, d, rng); }

ComplexMatrix random_unitary(int d, Rng& rng) {
  require_dim(d);
  ComplexMatrix q = gaussian_matrix(d, rng);
  // Modified Gram-Schmidt, applied twice for orthogonality to working precision.
  for (int pass = 0; pass < 2; ++pass) {
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < j; ++k) q.col(j) -= q.col(k).dot(q.col(j)) * q.col(k);
      q.col(j).normalize();
    }
  }
  return q;
}

DensityOperator random_density(int d, Rng& rng) {
  require_dim(d);
  const ComplexMatrix g = gaussian_matrix(d, rng);
  ComplexMatrix w = g * g.adjoint();
  w /= w.trace().real();
  return DensityOperator(PsdOperator(HermitianMatrix::symmetrized(w)));
}

PdOperator random_pd(int d, Rng& rng) {
  require_dim(d);
  const ComplexMatrix g = gaussian_matrix(d, rng);
  ComplexMatrix w = g * g.adjoint() / static_cast<double>(d) + 0.1 * identity(d);
  return PdOperator(PsdOperator(HermitianMatrix::symmetrized(w)));
}

PsdOperator random_psd(int d, int rank, Rng& rng) {
  require_dim(d);
  if (rank < 0 || rank > d) throw std::invalid_argument("psd rank must be in [0, d]");
  if (rank == 0) return PsdOperator(HermitianMatrix::symmetrized(ComplexMatrix::Zero(d, d)));
  const ComplexMatrix g = gaussian_matrix(d, rank, rng);
  return PsdOperator(HermitianMatrix::symmetrized(g * g.adjoint() / static_cast<double>(rank)));
}

RankOneProjection random_rank_one(int d, Rng& rng) {
  require_dim(d);
  ComplexVector v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.complex_normal();
  return RankOneProjection::from_direction(v);
}

HermitianMatrix random_hermitian(int d, Rng& rng) {
  require_dim(d);
  return HermitianMatrix::symmetrized(gaussian_matrix(d, rng));
}

ComplexMatrix random_ensemble(EnsembleKind kind, int d, std::uint64_t seed, int rank) {
  Rng rng(seed);
  switch (kind) {
    case EnsembleKind::unitary:
      return random_unitary(d, rng);
    case EnsembleKind::density:
      return random_density(d, rng).matrix();
    case EnsembleKind::pd:
      return random_pd(d, rng).matrix();
    case EnsembleKind::psd_rank_r:
      return random_psd(d, rank, rng).matrix();
    case EnsembleKind::rank_one_projection:
      return random_rank_one(d, rng).matrix();
  }
  throw std::invalid_argument("invalid ensemble kind");
}

}  // namespace chi2lab
