#include <cmath>

#include "chi2lab/reconstruction.hpp"

namespace chi2lab {

namespace {

constexpr double kPeelRelTol = 1e-6;

struct Found {
  ComplexVector v;
  double value;
};

}  // namespace

// min over R of K*(R||D) restricted to the orthocomplement of the
// eigenspaces found so far is 1/lambda for the largest remaining eigenvalue,
// attained exactly on that eigenspace. Directions whose minimum repeats the
// current value within kPeelRelTol extend the current eigenprojection.
SpectralDecomposition spectral_peel(const std::function<double(const RankOneProjection&)>& oracle,
                                    int d, Alpha /*alpha*/, const SphereOptConfig& cfg) {
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  cfg.validate();

  std::vector<std::vector<Found>> clusters;
  ComplexMatrix found_span = ComplexMatrix::Zero(d, d);
  int found = 0;
  while (found < d) {
    const ComplexMatrix remaining = identity(d) - found_span;
    Found next;
    if (d - found == 1) {
      const Eigensystem eig = jacobi_eigensystem(HermitianMatrix::symmetrized(remaining));
      const RankOneProjection last(eig.vectors.col(0).normalized());
      next = {last.vector(), oracle(last)};
    } else {
      SphereOptConfig local = cfg;
      local.subspace = remaining;
      local.seed = cfg.seed + static_cast<std::uint64_t>(found);
      const SphereOptResult r = minimize_over_rank_one(oracle, d, local);
      if (!r.converged) throw SolverFailure("rank-one minimization did not converge while peeling");
      // Re-orthogonalize against the found span to remove drift.
      next = {(remaining * r.argmin.vector()).normalized(), r.value};
    }
    if (!(next.value > 0.0) || !std::isfinite(next.value)) {
      throw SolverFailure("peeled eigenvalue is outside (0, inf)");
    }
    const bool extends = !clusters.empty() &&
                         std::abs(next.value - clusters.back().front().value) <=
                             kPeelRelTol * clusters.back().front().value;
    if (extends) {
      clusters.back().push_back(next);
    } else {
      clusters.push_back({next});
    }
    found_span += next.v * next.v.adjoint();
    ++found;
  }

  SpectralDecomposition out;
  for (const auto& cluster : clusters) {
    ComplexMatrix basis(d, static_cast<Eigen::Index>(cluster.size()));
    double mean = 0.0;
    for (std::size_t k = 0; k < cluster.size(); ++k) {
      basis.col(static_cast<Eigen::Index>(k)) = cluster[k].v;
      mean += cluster[k].value;
    }
    mean /= static_cast<double>(cluster.size());
    // Orthonormalize so the projection is exact.
    const Eigen::HouseholderQR<ComplexMatrix> qr(basis);
    const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(d, basis.cols());
    out.eigenvalues.push_back(1.0 / mean);
    out.projections.push_back(q * q.adjoint());
    out.multiplicities.push_back(static_cast<int>(cluster.size()));
  }
  return out;
}

}  // namespace chi2lab
