#include <cmath>
#include <map>
#include <sstream>

#include "chi2lab/matrix_json.hpp"
#include "chi2lab/reconstruction.hpp"

namespace chi2lab {

namespace {

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

// min over unimodular c of ||M - c I||_op, with c the phase of tr M.
double scalar_residual(const ComplexMatrix& m) {
  const Complex tr = m.trace();
  const Complex c = std::abs(tr) > 0.0 ? tr / std::abs(tr) : Complex(1.0, 0.0);
  return op_norm(m - c * identity(static_cast<int>(m.rows())));
}

}  // namespace

RankOneProjection top_eigenprojection(const ComplexMatrix& m) {
  const SpectralDecomposition sd = eigh(HermitianMatrix::symmetrized(m));
  if (sd.multiplicities.front() != 1) {
    throw InconsistentOracle("top eigenvalue is degenerate; image is not near a pure state");
  }
  const Eigensystem eig = jacobi_eigensystem(HermitianMatrix::symmetrized(m));
  return RankOneProjection(eig.vectors.col(0).normalized());
}

bool DecompileReport::failed_stage(int stage) const {
  for (const auto& f : failures)
    if (f.stage == stage) return true;
  return false;
}

nlohmann::json DecompileReport::to_json() const {
  nlohmann::json j;
  if (recovered) {
    j["kind"] = to_string(recovered->kind());
    j["u"] = matrix_to_json(recovered->u());
  } else {
    j["kind"] = nullptr;
    j["u"] = nullptr;
  }
  j["trace_preservation_residual"] = trace_preservation_residual;
  j["divergence_preservation_residual"] = divergence_preservation_residual;
  j["extremal_stability_residual"] = extremal_stability_residual;
  j["orthogonality_pass"] = orthogonality_pass;
  j["orthogonality_residual"] = orthogonality_residual;
  j["transition_residual"] = transition_residual;
  j["scale_consistency_residual"] = scale_consistency_residual;
  j["verification_residual"] = verification_residual;
  j["query_count"] = query_count;
  nlohmann::json fails = nlohmann::json::array();
  for (const auto& f : failures) fails.push_back({{"stage", f.stage}, {"name", f.name}, {"detail", f.detail}});
  j["failures"] = std::move(fails);
  j["ok"] = ok();
  return j;
}

DecompileReport preserver_decompile(const PdMap& phi, int d, Alpha alpha,
                                    const DecompileConfig& cfg) {
  if (d < 2) throw std::invalid_argument("decompiler needs d >= 2");
  DecompileReport report;
  const auto fail = [&](int stage, std::string name, std::string detail) {
    report.failures.push_back({stage, std::move(name), std::move(detail)});
  };
  const auto eval = [&](const ComplexMatrix& a) -> ComplexMatrix {
    ++report.query_count;
    ComplexMatrix out = phi(a);
    if (out.rows() != d || out.cols() != d) throw DimensionMismatch("map returned the wrong shape");
    return out;
  };

  // Stage 1: trace preservation, plus a direct check of the preserver property.
  Rng rng(cfg.seed, {0x4443u, static_cast<std::uint64_t>(d)});
  try {
    for (int s = 0; s < cfg.trace_samples; ++s) {
      const PdOperator c = random_pd(d, rng);
      const double tr = c.trace();
      report.trace_preservation_residual = std::max(
          report.trace_preservation_residual, std::abs(eval(c.matrix()).trace().real() - tr) / tr);
    }
    if (report.trace_preservation_residual > cfg.trace_tol) {
      fail(1, "trace", "tr phi(C) != tr C, relative residual " + sci(report.trace_preservation_residual));
    }
    for (int s = 0; s < cfg.preservation_samples; ++s) {
      const PdOperator a = random_pd(d, rng);
      const PdOperator b = random_pd(d, rng);
      const double before = chi2(a, b, alpha);
      const PdOperator fa(HermitianMatrix::symmetrized(eval(a.matrix())));
      const PdOperator fb(HermitianMatrix::symmetrized(eval(b.matrix())));
      const double after = chi2(fa, fb, alpha);
      report.divergence_preservation_residual = std::max(
          report.divergence_preservation_residual, std::abs(after - before) / std::max(1.0, before));
    }
    if (report.divergence_preservation_residual > cfg.preservation_tol) {
      fail(1, "divergence", "K_alpha(phi(A)||phi(B)) != K_alpha(A||B), relative residual " +
                                sci(report.divergence_preservation_residual));
    }
  } catch (const std::exception& e) {
    fail(1, "trace", std::string("map evaluation failed: ") + e.what());
  }

  // Stages 2-5 per scale: phi_l(A) = phi(l A)/l on states, images of
  // rank-one projections from near-extremal states, checks, synthesis.
  const ComplexMatrix mixed = identity(d) / static_cast<double>(d);
  std::map<double, ConjugationMap> per_scale;
  const std::vector<RankOneProjection> probes = tomography_probes(d);
  report.orthogonality_pass = true;
  for (double lambda : cfg.scales) {
    const auto xi_at = [&, lambda](double eps) -> ProjectionMap {
      return [&, lambda, eps](const RankOneProjection& p) {
        const ComplexMatrix state = (1.0 - eps) * p.matrix() + eps * mixed;
        return top_eigenprojection(eval(lambda * state) / lambda);
      };
    };
    const ProjectionMap xi = xi_at(cfg.epsilon);
    const ProjectionMap xi_half = xi_at(cfg.epsilon / 2.0);
    const std::string tag = " at scale " + sci(lambda);

    try {
      const double tr = eval(lambda * mixed).trace().real() / lambda;
      if (std::abs(tr - 1.0) > cfg.trace_tol) {
        fail(2, "state-restriction", "phi_l does not map states to states" + tag + ", trace " + sci(tr));
      }
    } catch (const std::exception& e) {
      fail(2, "state-restriction", std::string("map evaluation failed") + tag + ": " + e.what());
    }

    try {
      for (const auto& p : probes) {
        report.extremal_stability_residual =
            std::max(report.extremal_stability_residual, op_norm(xi(p).matrix() - xi_half(p).matrix()));
      }
    } catch (const std::exception& e) {
      fail(3, "extremal", std::string("locating rank-one images failed") + tag + ": " + e.what());
      report.orthogonality_pass = false;
      continue;
    }
    if (report.extremal_stability_residual > cfg.stability_tol) {
      fail(3, "extremal", "epsilon-regularized images unstable" + tag + ", residual " +
                              sci(report.extremal_stability_residual));
    }

    try {
      const CheckResult orth = check_orthogonality_preservation(xi, d, cfg.check_samples, cfg.seed);
      const CheckResult trans = check_transition_probabilities(xi, d, cfg.check_samples, cfg.seed);
      report.orthogonality_residual = std::max(report.orthogonality_residual, orth.max_residual);
      report.transition_residual = std::max(report.transition_residual, trans.max_residual);
      if (orth.max_residual > cfg.orthogonality_tol) {
        report.orthogonality_pass = false;
        fail(4, "orthogonality", "orthogonality not preserved" + tag + ", residual " + sci(orth.max_residual));
      }
      if (trans.max_residual > cfg.transition_tol) {
        fail(4, "transition", "transition probabilities not preserved" + tag + ", residual " +
                                  sci(trans.max_residual));
      }
    } catch (const std::exception& e) {
      report.orthogonality_pass = false;
      fail(4, "orthogonality", std::string("check failed") + tag + ": " + e.what());
    }

    try {
      per_scale.emplace(lambda, wigner_synthesize(xi, d));
    } catch (const std::exception& e) {
      fail(5, "wigner", std::string("synthesis failed") + tag + ": " + e.what());
    }
  }

  // Stage 6: the per-scale conjugations agree up to a unimodular scalar.
  if (per_scale.empty()) {
    fail(6, "scale-consistency", "no scale produced a conjugation");
    return report;
  }
  const auto reference = per_scale.count(1.0) ? per_scale.find(1.0) : per_scale.begin();
  for (const auto& [lambda, map] : per_scale) {
    double r = 0.0;
    if (map.kind() != reference->second.kind()) {
      r = 2.0;
      fail(6, "scale-consistency", "conjugation kind differs at scale " + sci(lambda));
    } else {
      r = scalar_residual(map.u() * reference->second.u().adjoint());
    }
    report.scale_consistency_residual = std::max(report.scale_consistency_residual, r);
  }
  if (report.scale_consistency_residual > cfg.scale_consistency_tol &&
      !report.failed_stage(6)) {
    fail(6, "scale-consistency", "U_l U_m* is not scalar, residual " + sci(report.scale_consistency_residual));
  }
  report.recovered = reference->second;

  // Stage 7: verification on fresh positive definite samples.
  try {
    Rng fresh(cfg.seed, {0x5646u, static_cast<std::uint64_t>(d)});
    for (int s = 0; s < cfg.verify_samples; ++s) {
      const PdOperator a = random_pd(d, fresh);
      report.verification_residual =
          std::max(report.verification_residual, op_norm(eval(a.matrix()) - report.recovered->apply(a.matrix())));
    }
    if (report.verification_residual > cfg.verification_tol) {
      fail(7, "verification", "phi(A) differs from the recovered conjugation by " +
                                  sci(report.verification_residual));
    }
  } catch (const std::exception& e) {
    fail(7, "verification", std::string("map evaluation failed: ") + e.what());
  }
  return report;
}

}  // namespace chi2lab
