#pragma once

// Black-box minimization over rank-one projections, the positive definite
// cone and the state space. Objectives are oracles, so gradients are
// central finite differences (h = 1e-6).

#include <cstdint>
#include <functional>
#include <optional>

#include "chi2lab/hermitian.hpp"

namespace chi2lab {

struct SphereOptConfig {
  int restarts = 32;
  int max_iters = 500;
  double step_tol = 1e-12;
  double value_tol = 1e-10;
  /// Stop once the Riemannian gradient norm drops below this.
  double grad_tol = 1e-10;
  /// Orthogonal projection restricting the search to its range.
  std::optional<ComplexMatrix> subspace;
  std::uint64_t seed = 0;

  void validate() const;
};

struct ConeOptConfig {
  double boundary_floor = 1e-8;
  int max_iters = 500;
  int restarts = 8;
  double value_tol = 1e-12;
  std::uint64_t seed = 0;

  void validate() const;
};

struct StateOptConfig {
  int restarts = 8;
  int max_iters = 2000;
  double value_tol = 1e-14;
  double grad_tol = 1e-10;
  std::uint64_t seed = 0;

  void validate() const;
};

using ProjectionObjective = std::function<double(const RankOneProjection&)>;
using MatrixObjective = std::function<double(const ComplexMatrix&)>;

struct SphereOptResult {
  RankOneProjection argmin;
  double value;
  /// False when every restart hit the iteration cap.
  bool converged;
  int best_restart;
  long evaluations;
};

SphereOptResult minimize_over_rank_one(const ProjectionObjective& g, int d,
                                       const SphereOptConfig& cfg = {});
SphereOptResult maximize_over_rank_one(const ProjectionObjective& g, int d,
                                       const SphereOptConfig& cfg = {});

struct ConeOptResult {
  double value;
  ComplexMatrix argmin;
  /// The best point sits on the eigenvalue floor: an open infimum, not a minimum.
  bool at_boundary;
  bool converged;
};

/// Infimum of g over PD matrices with eigenvalues >= cfg.boundary_floor.
ConeOptResult infimum_over_pd(const MatrixObjective& g, int d, const ConeOptConfig& cfg = {});

struct StateOptResult {
  ComplexMatrix argmax;
  double value;
  bool converged;
};

/// Maximum of g over density operators, parametrized as G G* / tr(G G*).
StateOptResult maximize_over_states(const MatrixObjective& g, int d,
                                    const StateOptConfig& cfg = {});

}  // namespace chi2lab
