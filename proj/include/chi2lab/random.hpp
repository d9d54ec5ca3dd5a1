#pragma once

// Seeded test ensembles. The generator is always passed explicitly.

#include <cstdint>
#include <random>
#include <string_view>

#include "chi2lab/hermitian.hpp"

namespace chi2lab {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Independent stream derived from a seed and a list of labels.
  Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> labels);

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  Complex complex_normal() { return {normal(), normal()}; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

enum class EnsembleKind { unitary, density, pd, psd_rank_r, rank_one_projection };

EnsembleKind parse_ensemble_kind(std::string_view name);

/// d x d matrix of i.i.d. standard complex Gaussians.
ComplexMatrix gaussian_matrix(int d, Rng& rng);
ComplexMatrix gaussian_matrix(int rows, int cols, Rng& rng);

/// Haar unitary by Gram-Schmidt orthonormalization of a complex Gaussian matrix.
ComplexMatrix random_unitary(int d, Rng& rng);

/// G G* / tr(G G*) with G square Gaussian.
DensityOperator random_density(int d, Rng& rng);

/// G G* / d + 0.1 I: well-conditioned positive definite.
PdOperator random_pd(int d, Rng& rng);

/// G G* / r with G of size d x r, so rank r almost surely.
PsdOperator random_psd(int d, int rank, Rng& rng);

RankOneProjection random_rank_one(int d, Rng& rng);

/// Hermitian (G + G*)/2.
HermitianMatrix random_hermitian(int d, Rng& rng);

/// Dispatcher over the named ensembles; returns the matrix form.
ComplexMatrix random_ensemble(EnsembleKind kind, int d, std::uint64_t seed, int rank = 1);

}  // namespace chi2lab
