#pragma once

// Recovering operators and symmetries from divergence queries:
//  - quadratic-form tomography of a hidden first argument,
//  - spectral peeling of a hidden density from rank-one queries,
//  - synthesis of the (anti)unitary implementing a transition-probability
//    preserving map on rank-one projections,
//  - the end-to-end decompiler for black-box K_alpha-preservers.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chi2lab/divergence.hpp"
#include "chi2lab/optimize.hpp"
#include "chi2lab/random.hpp"

namespace chi2lab {

/// Query access X -> value with an optional additive Gaussian noise model.
/// The counter makes an oracle exclusively owned by one pipeline run.
class DivergenceOracle {
 public:
  using Query = std::function<double(const ComplexMatrix&)>;

  explicit DivergenceOracle(Query exact, double noise_sigma = 0.0, std::uint64_t noise_seed = 0);

  /// C -> K_alpha(A||C) for a hidden first argument A.
  static DivergenceOracle hidden_first_argument(const PsdOperator& hidden, Alpha alpha,
                                                double noise_sigma = 0.0,
                                                std::uint64_t noise_seed = 0);
  /// R -> K*_alpha(R||D) = K_alpha(R||D) + 1 for a hidden nonsingular density D.
  static DivergenceOracle hidden_density(const DensityOperator& hidden, Alpha alpha,
                                         double noise_sigma = 0.0, std::uint64_t noise_seed = 0);

  double query(const ComplexMatrix& probe);
  double operator()(const ComplexMatrix& probe) { return query(probe); }
  long query_count() const { return count_; }

 private:
  Query exact_;
  double sigma_;
  Rng noise_;
  long count_ = 0;
};

struct ProbeSchedule {
  std::vector<double> t_values{0.15, 0.3, 0.45, 0.6, 0.75, 0.9};

  /// Values in (0,1), pairwise distinct, at least `min_count` of them.
  void validate(std::size_t min_count) const;
};

/// The d^2 probe vectors e_i, (e_i + e_j)/sqrt2, (e_i + i e_j)/sqrt2 (i < j).
std::vector<RankOneProjection> tomography_probes(int d);

/// Recovers the hidden PSD first argument of `oracle` from its values on
/// C_t = t P + (1-t)/(d-1) (I - P) over the probe family and schedule.
/// Uses exactly d^2 * |schedule| queries.
PsdOperator quadratic_form_tomography(DivergenceOracle& oracle, int d, Alpha alpha,
                                      const ProbeSchedule& schedule = {});

/// Eigenvalues and eigenprojections of the hidden density behind an oracle
/// R -> K*_alpha(R||D), found by repeated constrained minimization.
SpectralDecomposition spectral_peel(const std::function<double(const RankOneProjection&)>& oracle,
                                    int d, Alpha alpha, const SphereOptConfig& cfg = {});

enum class ConjugationKind { unitary, antiunitary };
std::string to_string(ConjugationKind kind);

/// A -> U A U* (unitary) or A -> U conj(A) U* (antiunitary).
class ConjugationMap {
 public:
  /// Requires ||U*U - I||_op <= 1e-8.
  ConjugationMap(ComplexMatrix u, ConjugationKind kind);

  const ComplexMatrix& u() const { return u_; }
  ConjugationKind kind() const { return kind_; }
  int dim() const { return static_cast<int>(u_.rows()); }

  ComplexMatrix apply(const ComplexMatrix& a) const;
  RankOneProjection apply(const RankOneProjection& p) const;

 private:
  ComplexMatrix u_;
  ConjugationKind kind_;
};

using ProjectionMap = std::function<RankOneProjection(const RankOneProjection&)>;

/// Builds the (anti)unitary implementing a transition-probability preserving
/// bijection of rank-one projections. Throws NotASymmetry when probe
/// transition probabilities move by more than 1e-6 and InconsistentOracle
/// when neither kind reproduces the probes.
ConjugationMap wigner_synthesize(const ProjectionMap& xi, int d);

struct CheckResult {
  bool pass;
  double max_residual;
};

/// tr xi(P) xi(Q) <= 1e-8 over canonical and random orthogonal pairs.
CheckResult check_orthogonality_preservation(const ProjectionMap& xi, int d, int samples,
                                             std::uint64_t seed = 0);
/// |tr xi(P) xi(R) - tr PR| <= 1e-8 over canonical and random pairs.
CheckResult check_transition_probabilities(const ProjectionMap& xi, int d, int samples,
                                           std::uint64_t seed = 0);

using PdMap = std::function<ComplexMatrix(const ComplexMatrix&)>;

struct DecompileConfig {
  std::uint64_t seed = 0;
  std::vector<double> scales{0.5, 1.0, 2.0};
  double epsilon = 1e-4;
  int trace_samples = 8;
  int preservation_samples = 8;
  int check_samples = 16;
  int verify_samples = 16;
  double trace_tol = 1e-8;             // relative
  double preservation_tol = 1e-8;      // relative
  double stability_tol = 1e-6;
  double orthogonality_tol = 1e-8;
  double transition_tol = 1e-8;
  double scale_consistency_tol = 1e-5;
  double verification_tol = 1e-6;
};

struct StageFailure {
  int stage;
  std::string name;
  std::string detail;
};

struct DecompileReport {
  std::optional<ConjugationMap> recovered;
  double trace_preservation_residual = 0.0;
  double divergence_preservation_residual = 0.0;
  double extremal_stability_residual = 0.0;
  bool orthogonality_pass = false;
  double orthogonality_residual = 0.0;
  double transition_residual = 0.0;
  double scale_consistency_residual = 0.0;
  double verification_residual = 0.0;
  long query_count = 0;
  std::vector<StageFailure> failures;

  bool ok() const { return failures.empty() && recovered.has_value(); }
  bool failed_stage(int stage) const;
  nlohmann::json to_json() const;
};

/// Runs every stage best-effort; a violated stage is recorded in `failures`.
DecompileReport preserver_decompile(const PdMap& phi, int d, Alpha alpha,
                                    const DecompileConfig& cfg = {});

/// Top eigenprojection of a Hermitian matrix; throws InconsistentOracle
/// when the top eigenvalue is degenerate.
RankOneProjection top_eigenprojection(const ComplexMatrix& m);

}  // namespace chi2lab
