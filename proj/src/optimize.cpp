#include "chi2lab/optimize.hpp"

#include <cmath>
#include <limits>

#include "chi2lab/random.hpp"

namespace chi2lab {

namespace {

constexpr double kFdStep = 1e-6;
constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;

// A descent problem on a subset of R^n given by a retraction.
struct Problem {
  std::function<double(const RealVector&)> f;
  std::function<RealVector(const RealVector&)> retract;
  // Direction whose negative is the search direction, from the ambient gradient.
  std::function<RealVector(const RealVector&, const RealVector&)> direction;
  // Stationarity measure at x given the ambient gradient.
  std::function<double(const RealVector&, const RealVector&)> stationarity;
  // Finite-difference step at x.
  std::function<double(const RealVector&)> fd_step;
};

struct LocalResult {
  RealVector x;
  double value;
  bool converged;
  long evaluations;
};

RealVector fd_gradient(const Problem& pb, const RealVector& x, long& evals) {
  const double h = pb.fd_step(x);
  RealVector g(x.size());
  RealVector probe = x;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    probe(k) = x(k) + h;
    const double up = pb.f(probe);
    probe(k) = x(k) - h;
    const double down = pb.f(probe);
    probe(k) = x(k);
    g(k) = (up - down) / (2.0 * h);
  }
  evals += 2 * x.size();
  return g;
}

LocalResult descend(const Problem& pb, const RealVector& start, int max_iters, double grad_tol,
                    double step_tol) {
  RealVector x = pb.retract(start);
  double fx = pb.f(x);
  long evals = 1;
  double t = 1.0;
  RealVector prev_x;
  RealVector prev_dir;
  bool have_prev = false;

  for (int iter = 0; iter < max_iters; ++iter) {
    const RealVector grad = fd_gradient(pb, x, evals);
    const RealVector dir = pb.direction(x, grad);
    const double dnorm = dir.norm();
    if (pb.stationarity(x, grad) <= grad_tol * std::max(1.0, std::abs(fx))) {
      return {x, fx, true, evals};
    }

    // Barzilai-Borwein initial step, then Armijo backtracking.
    if (have_prev) {
      const RealVector s = x - prev_x;
      const RealVector y = dir - prev_dir;
      const double sy = s.dot(y);
      t = sy > 0.0 ? s.squaredNorm() / sy : 2.0 * t;
    } else {
      t = std::min(1.0, 0.1 / dnorm);
    }
    t = std::min(t, 1e6);

    bool accepted = false;
    RealVector candidate;
    double fc = fx;
    for (int bt = 0; bt < kMaxBacktracks; ++bt) {
      candidate = pb.retract(x - t * dir);
      fc = pb.f(candidate);
      ++evals;
      if (fc <= fx - kArmijo * (x - candidate).dot(dir)) {
        accepted = true;
        break;
      }
      t *= 0.5;
      if (t * dnorm < step_tol) break;
    }
    // No decrease at any admissible step: the iterate is stationary to the
    // resolution of the finite-difference gradient.
    if (!accepted) return {x, fx, true, evals};

    prev_x = x;
    prev_dir = dir;
    have_prev = true;
    const double moved = (candidate - x).norm();
    x = candidate;
    fx = fc;
    if (moved < step_tol) return {x, fx, true, evals};
  }
  return {x, fx, false, evals};
}

// Complex vector <-> real coordinates [re..., im...].
RealVector to_real(const ComplexVector& v) {
  RealVector r(2 * v.size());
  r.head(v.size()) = v.real();
  r.tail(v.size()) = v.imag();
  return r;
}

ComplexVector to_complex(const RealVector& r) {
  const Eigen::Index n = r.size() / 2;
  ComplexVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(r(i), r(n + i));
  return v;
}

Problem sphere_problem(std::function<double(const RealVector&)> f_unit) {
  Problem pb;
  pb.retract = [](const RealVector& x) -> RealVector { return x / x.norm(); };
  // Objective extended to the ambient space by radial invariance.
  pb.f = [f_unit](const RealVector& x) { return f_unit(x / x.norm()); };
  pb.direction = [](const RealVector& x, const RealVector& g) -> RealVector {
    return g - x.dot(g) * x;
  };
  pb.stationarity = [](const RealVector& x, const RealVector& g) {
    return (g - x.dot(g) * x).norm();
  };
  pb.fd_step = [](const RealVector&) { return kFdStep; };
  return pb;
}

ComplexMatrix orthonormal_basis_of_range(const ComplexMatrix& projection) {
  const Eigensystem eig = jacobi_eigensystem(HermitianMatrix::symmetrized(projection));
  Eigen::Index k = 0;
  while (k < eig.values.size() && eig.values(k) > 0.5) ++k;
  return eig.vectors.leftCols(k);
}

}  // namespace

void SphereOptConfig::validate() const {
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(step_tol > 0.0 && value_tol > 0.0 && grad_tol > 0.0)) {
    throw std::invalid_argument("tolerances must be positive");
  }
}

void ConeOptConfig::validate() const {
  if (!(boundary_floor > 0.0)) throw std::invalid_argument("boundary_floor must be positive");
  if (restarts < 1 || max_iters < 1) throw std::invalid_argument("restarts and max_iters must be >= 1");
  if (!(value_tol > 0.0)) throw std::invalid_argument("value_tol must be positive");
}

void StateOptConfig::validate() const {
  if (restarts < 1 || max_iters < 1) throw std::invalid_argument("restarts and max_iters must be >= 1");
  if (!(value_tol > 0.0 && grad_tol > 0.0)) throw std::invalid_argument("tolerances must be positive");
}

SphereOptResult minimize_over_rank_one(const ProjectionObjective& g, int d,
                                       const SphereOptConfig& cfg) {
  cfg.validate();
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  const ComplexMatrix basis =
      cfg.subspace ? orthonormal_basis_of_range(*cfg.subspace) : identity(d);
  if (basis.rows() != d) throw DimensionMismatch("subspace projection has the wrong dimension");
  const Eigen::Index k = basis.cols();
  if (k == 0) throw std::invalid_argument("subspace is empty");

  const auto lift = [&basis](const RealVector& x) -> ComplexVector {
    return basis * to_complex(x);
  };
  const Problem pb = sphere_problem([&](const RealVector& x) {
    return g(RankOneProjection::from_direction(lift(x)));
  });

  Rng rng(cfg.seed, {0x5048u, static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(k)});
  std::optional<LocalResult> best;
  int best_restart = 0;
  bool any_converged = false;
  long evals = 0;
  for (int r = 0; r < cfg.restarts; ++r) {
    ComplexVector start = ComplexVector::Zero(k);
    if (r < k) {
      start(r) = 1.0;
    } else {
      for (Eigen::Index i = 0; i < k; ++i) start(i) = rng.complex_normal();
    }
    LocalResult local = descend(pb, to_real(start), cfg.max_iters, cfg.grad_tol, cfg.step_tol);
    evals += local.evaluations;
    any_converged = any_converged || local.converged;
    if (!best || local.value < best->value - cfg.value_tol) {
      best = std::move(local);
      best_restart = r;
    }
  }
  return {RankOneProjection::from_direction(lift(best->x)), best->value, any_converged,
          best_restart, evals};
}

SphereOptResult maximize_over_rank_one(const ProjectionObjective& g, int d,
                                       const SphereOptConfig& cfg) {
  SphereOptResult r =
      minimize_over_rank_one([&g](const RankOneProjection& p) { return -g(p); }, d, cfg);
  r.value = -r.value;
  return r;
}

ConeOptResult infimum_over_pd(const MatrixObjective& g, int d, const ConeOptConfig& cfg) {
  cfg.validate();
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;

  // Hermitian coordinates: d diagonal reals, then (re, im) of the strict upper triangle.
  const auto to_matrix = [d](const RealVector& x) {
    ComplexMatrix m(d, d);
    Eigen::Index k = 0;
    for (int i = 0; i < d; ++i) m(i, i) = x(k++);
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        m(i, j) = Complex(x(k), x(k + 1));
        m(j, i) = std::conj(m(i, j));
        k += 2;
      }
    }
    return m;
  };
  const auto to_coords = [d, n](const ComplexMatrix& m) {
    RealVector x(n);
    Eigen::Index k = 0;
    for (int i = 0; i < d; ++i) x(k++) = m(i, i).real();
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        x(k++) = m(i, j).real();
        x(k++) = m(i, j).imag();
      }
    }
    return x;
  };
  const double floor = cfg.boundary_floor;
  const auto lambda_min = [&](const RealVector& x) {
    const Eigensystem eig = jacobi_eigensystem(HermitianMatrix::symmetrized(to_matrix(x)));
    return eig.values(eig.values.size() - 1);
  };

  Problem pb;
  pb.f = [&](const RealVector& x) { return g(to_matrix(x)); };
  pb.retract = [&](const RealVector& x) -> RealVector {
    const Eigensystem eig = jacobi_eigensystem(HermitianMatrix::symmetrized(to_matrix(x)));
    return to_coords(apply_function(eig, [floor](double l) { return std::max(l, floor); }));
  };
  pb.direction = [](const RealVector&, const RealVector& grad) -> RealVector { return grad; };
  pb.stationarity = [&](const RealVector& x, const RealVector& grad) {
    return (x - pb.retract(x - grad)).norm();
  };
  // Central differences must stay inside the cone.
  pb.fd_step = [&](const RealVector& x) { return std::min(kFdStep, 0.5 * lambda_min(x)); };

  Rng rng(cfg.seed, {0x434fu, static_cast<std::uint64_t>(d)});
  std::optional<LocalResult> best;
  bool any_converged = false;
  for (int r = 0; r < cfg.restarts; ++r) {
    const ComplexMatrix start = r == 0 ? identity(d) : random_pd(d, rng).matrix();
    LocalResult local = descend(pb, to_coords(start), cfg.max_iters, cfg.value_tol, 1e-15);
    any_converged = any_converged || local.converged;
    if (!best || local.value < best->value) best = std::move(local);
  }
  const ComplexMatrix argmin = to_matrix(best->x);
  return {best->value, argmin, lambda_min(best->x) <= 10.0 * floor, any_converged};
}

StateOptResult maximize_over_states(const MatrixObjective& g, int d, const StateOptConfig& cfg) {
  cfg.validate();
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  // G lives on the unit sphere of C^{d x d}; X = G G* then has unit trace.
  const auto state = [d](const RealVector& x) {
    const ComplexVector v = to_complex(x);
    const Eigen::Map<const ComplexMatrix> gm(v.data(), d, d);
    return ComplexMatrix(gm * gm.adjoint());
  };
  const Problem pb = sphere_problem([&](const RealVector& x) { return -g(state(x)); });

  Rng rng(cfg.seed, {0x5354u, static_cast<std::uint64_t>(d)});
  std::optional<LocalResult> best;
  bool any_converged = false;
  for (int r = 0; r < cfg.restarts; ++r) {
    const ComplexMatrix start = r == 0 ? identity(d) : gaussian_matrix(d, rng);
    const ComplexVector flat = Eigen::Map<const ComplexVector>(start.data(), start.size());
    LocalResult local = descend(pb, to_real(flat), cfg.max_iters, cfg.grad_tol, 1e-15);
    any_converged = any_converged || local.converged;
    if (!best || local.value < best->value - cfg.value_tol) best = std::move(local);
  }
  return {state(best->x), -best->value, any_converged};
}

}  // namespace chi2lab
