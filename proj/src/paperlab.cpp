#include "chi2lab/paperlab.hpp"

#include <bit>
#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>

#include "chi2lab/matrix_json.hpp"
#include "chi2lab/random.hpp"

namespace chi2lab {

namespace {

struct Trial {
  double residual;
  bool pass;
  nlohmann::json inputs;
};

using TrialFn = std::function<Trial(Rng&, Alpha, int, int)>;

struct Property {
  std::string name;
  double tolerance;
  TrialFn run;
};

nlohmann::json mat(const ComplexMatrix& m) { return matrix_to_json(m); }

PsdOperator psd_of(const ComplexMatrix& m) { return PsdOperator(HermitianMatrix::symmetrized(m)); }
PdOperator pd_of(const ComplexMatrix& m) { return PdOperator(psd_of(m)); }

PsdOperator random_psd_any_rank(int d, Rng& rng) { return random_psd(d, rng.uniform_int(0, d), rng); }

// C = B + W with W PSD of random rank, so B <= C.
PdOperator dominating(const PdOperator& b, Rng& rng) {
  const PsdOperator w = random_psd(b.dim(), rng.uniform_int(1, b.dim()), rng);
  return pd_of(b.matrix() + w.matrix());
}

const std::vector<Property>& properties() {
  static const std::vector<Property> props = {
      {"nonnegativity", 0.0,
       [](Rng& rng, Alpha alpha, int d, int trial) {
         const PdOperator b = random_pd(d, rng);
         const PsdOperator a = trial % 4 == 0 ? b.psd() : random_psd_any_rank(d, rng);
         const double v = chi2(a, b, alpha);
         return Trial{std::max(0.0, -v), v >= 0.0, {{"a", mat(a.matrix())}, {"b", mat(b.matrix())}, {"value", v}}};
       }},
      {"identity_of_indiscernibles", 0.0,
       [](Rng& rng, Alpha alpha, int d, int trial) {
         const PdOperator b = random_pd(d, rng);
         ComplexMatrix a = b.matrix();
         if (trial % 3 == 1) {
           const ComplexMatrix h = random_hermitian(d, rng).matrix();
           a += 1e-9 * h / hs_norm(h);
         } else if (trial % 3 == 2) {
           a = random_pd(d, rng).matrix();
         }
         const double v = chi2(psd_of(a), b, alpha);
         const bool small = v <= 1e-10;
         const bool close = op_norm(a - b.matrix()) <= 1e-6 * (1.0 + op_norm(b.matrix()));
         return Trial{small == close ? 0.0 : 1.0, small == close,
                      {{"a", mat(a)}, {"b", mat(b.matrix())}, {"value", v}}};
       }},
      {"unitary_invariance", 1e-9,
       [](Rng& rng, Alpha alpha, int d, int) {
         const PsdOperator a = random_psd_any_rank(d, rng);
         const PdOperator b = random_pd(d, rng);
         const ComplexMatrix u = random_unitary(d, rng);
         const double before = chi2(a, b, alpha);
         const double after =
             chi2(psd_of(u * a.matrix() * u.adjoint()), pd_of(u * b.matrix() * u.adjoint()), alpha);
         const double r = std::abs(after - before);
         return Trial{r, r <= 1e-9, {{"a", mat(a.matrix())}, {"b", mat(b.matrix())}, {"u", mat(u)}}};
       }},
      {"homogeneity", 1e-9,
       [](Rng& rng, Alpha alpha, int d, int trial) {
         static constexpr double kScales[] = {0.1, 1.0, 7.3};
         const double lambda = kScales[trial % 3];
         const PsdOperator a = random_psd_any_rank(d, rng);
         const PdOperator b = random_pd(d, rng);
         const double scaled = chi2(psd_of(lambda * a.matrix()), pd_of(lambda * b.matrix()), alpha);
         const double r = std::abs(scaled - lambda * chi2(a, b, alpha)) / lambda;
         return Trial{r, r <= 1e-9,
                      {{"a", mat(a.matrix())}, {"b", mat(b.matrix())}, {"lambda", lambda}}};
       }},
      {"product_rule", 1e-10,
       [](Rng& rng, Alpha, int d, int) {
         const RankOneProjection r = random_rank_one(d, rng);
         const ComplexMatrix x = random_hermitian(d, rng).matrix();
         const ComplexMatrix y = random_hermitian(d, rng).matrix();
         const ComplexMatrix rm = r.matrix();
         const Complex lhs = (rm * x * rm * y).trace();
         const Complex rhs = (rm * x).trace() * (rm * y).trace();
         const double res = std::abs(lhs - rhs);
         return Trial{res, res <= 1e-10, {{"r", mat(rm)}, {"x", mat(x)}, {"y", mat(y)}}};
       }},
      {"kstar_consistency", 1e-10,
       [](Rng& rng, Alpha alpha, int d, int) {
         const PdOperator dens = random_density(d, rng).as_pd();
         const RankOneProjection r = random_rank_one(d, rng);
         const double res =
             std::abs(k_star(r, dens, alpha) - (chi2(psd_of(r.matrix()), dens, alpha) + 1.0));
         return Trial{res, res <= 1e-10, {{"r", mat(r.matrix())}, {"d", mat(dens.matrix())}}};
       }},
      {"strict_convexity", -1e-12,
       [](Rng& rng, Alpha alpha, int d, int) {
         const PdOperator b = random_pd(d, rng);
         PsdOperator a1 = random_psd_any_rank(d, rng);
         PsdOperator a2 = random_psd_any_rank(d, rng);
         while (hs_norm(a1.matrix() - a2.matrix()) < 1e-3) a2 = random_psd(d, d, rng);
         const double mid = chi2(psd_of((a1.matrix() + a2.matrix()) * 0.5), b, alpha);
         const double avg = 0.5 * (chi2(a1, b, alpha) + chi2(a2, b, alpha));
         // Strictly below the chord by the margin.
         const double r = mid - avg;
         return Trial{r, r < -1e-12,
                      {{"a1", mat(a1.matrix())}, {"a2", mat(a2.matrix())}, {"b", mat(b.matrix())}}};
       }},
      {"opnorm_lower_bound", 1e-9,
       [](Rng& rng, Alpha alpha, int d, int) {
         const PsdOperator a_prime = random_psd_any_rank(d, rng);
         const PdOperator a = random_pd(d, rng);
         const double bound = std::pow(op_norm(a_prime.matrix() - a.matrix()), 2) / op_norm(a.matrix());
         const double r = std::max(0.0, bound - chi2(a_prime, a, alpha));
         return Trial{r, r <= 1e-9, {{"a_prime", mat(a_prime.matrix())}, {"a", mat(a.matrix())}}};
       }},
      {"first_variable_continuity", 1e-6,
       [](Rng& rng, Alpha alpha, int d, int) {
         const PdOperator a = random_pd(d, rng);
         const PdOperator b = random_pd(d, rng);
         ComplexMatrix e = random_hermitian(d, rng).matrix();
         e /= hs_norm(e);
         const double base = chi2(a, b, alpha);
         // Steps stay below lambda_min(A) >= 0.1, so A + sE is PSD. Delta(s) need
         // not be monotone (first and second order terms can cancel), so the
         // residual is the worst Delta over the tail of the schedule.
         double tail = 0.0;
         for (double s = 5e-2; s >= 5e-9; s /= 10.0) {
           const double delta = std::abs(chi2(psd_of(a.matrix() + s * e), b, alpha) - base);
           if (s <= 5e-7) tail = std::max(tail, delta);
         }
         const double r = tail / std::max(1.0, base);
         return Trial{r, r <= 1e-6,
                      {{"a", mat(a.matrix())}, {"b", mat(b.matrix())}, {"e", mat(e)}}};
       }},
      {"trace_form_monotonicity", 1e-9,
       [](Rng& rng, Alpha alpha, int d, int) {
         const PdOperator b = random_pd(d, rng);
         const PdOperator c = dominating(b, rng);
         const PdOperator x = random_pd(d, rng);
         const double gap = trace_form(b, x.matrix(), alpha) - trace_form(c, x.matrix(), alpha);
         const double r = std::max(0.0, -gap);
         return Trial{r, r <= 1e-9,
                      {{"b", mat(b.matrix())}, {"c", mat(c.matrix())}, {"x", mat(x.matrix())}}};
       }},
      {"loewner_heinz", 1e-9,
       [](Rng& rng, Alpha alpha, int d, int) {
         const PdOperator b = random_pd(d, rng);
         const PdOperator c = dominating(b, rng);
         double worst = 0.0;
         for (double p : {-alpha.value(), alpha.value() - 1.0}) {
           const ComplexMatrix diff = frac_power(b.psd(), p).matrix() - frac_power(c.psd(), p).matrix();
           const Eigensystem eig = jacobi_eigensystem(HermitianMatrix::symmetrized(diff));
           worst = std::max(worst, -eig.values(eig.values.size() - 1));
         }
         return Trial{worst, worst <= 1e-9, {{"b", mat(b.matrix())}, {"c", mat(c.matrix())}}};
       }},
  };
  return props;
}

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

}  // namespace

nlohmann::json PropertyReport::to_json() const {
  nlohmann::json j = {{"property", name},   {"alpha", alpha},       {"dim", dim},
                      {"trials", trials},   {"failures", failures}, {"worst_residual", worst_residual},
                      {"tolerance", tolerance}};
  if (witness) j["witness"] = *witness;
  return j;
}

const std::vector<std::string>& property_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& p : properties()) out.push_back(p.name);
    return out;
  }();
  return names;
}

PropertyReport run_property(const std::string& name, double alpha, int d, int trials,
                            std::uint64_t seed) {
  if (trials < 1) throw UsageError("trials must be >= 1");
  const auto& props = properties();
  std::size_t index = 0;
  while (index < props.size() && props[index].name != name) ++index;
  if (index == props.size()) throw UsageError("unknown property: " + name);
  const Property& prop = props[index];

  Rng rng(seed, {static_cast<std::uint64_t>(index), std::bit_cast<std::uint64_t>(alpha),
                 static_cast<std::uint64_t>(d)});
  PropertyReport report{prop.name, alpha, d, trials, 0, 0.0, prop.tolerance, std::nullopt};
  const Alpha a(alpha);
  std::optional<Trial> worst;
  std::optional<Trial> worst_failure;
  for (int t = 0; t < trials; ++t) {
    Trial trial = prop.run(rng, a, d, t);
    if (!trial.pass) {
      ++report.failures;
      if (!worst_failure || trial.residual > worst_failure->residual) worst_failure = trial;
    }
    if (!worst || trial.residual > worst->residual) worst = std::move(trial);
  }
  report.worst_residual = worst->residual;
  if (worst_failure) report.witness = worst_failure->inputs;
  return report;
}

std::vector<PropertyReport> run_property_suite(const std::vector<double>& alphas,
                                               const std::vector<int>& dims, int trials,
                                               std::uint64_t seed) {
  if (trials < 1) throw UsageError("trials must be >= 1");
  for (double a : alphas) Alpha{a};
  for (int d : dims)
    if (d < 2) throw UsageError("dimensions must be >= 2");
  std::vector<PropertyReport> out;
  for (double alpha : alphas)
    for (int d : dims)
      for (const auto& name : property_names()) out.push_back(run_property(name, alpha, d, trials, seed));
  return out;
}

nlohmann::json suite_to_json(const std::vector<PropertyReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(r.to_json());
  return {{"reports", std::move(arr)}, {"total_failures", total_failures(reports)}};
}

std::string suite_to_text(const std::vector<PropertyReport>& reports) {
  std::ostringstream os;
  os << std::left << std::setw(28) << "property" << std::setw(7) << "alpha" << std::setw(4) << "d"
     << std::setw(8) << "trials" << std::setw(9) << "failures" << "worst_residual\n";
  for (const auto& r : reports) {
    os << std::left << std::setw(28) << r.name << std::setw(7) << fmt(r.alpha, 3) << std::setw(4)
       << r.dim << std::setw(8) << r.trials << std::setw(9) << r.failures << fmt(r.worst_residual, 3)
       << '\n';
  }
  os << "total failures: " << total_failures(reports) << '\n';
  return os.str();
}

int total_failures(const std::vector<PropertyReport>& reports) {
  int n = 0;
  for (const auto& r : reports) n += r.failures;
  return n;
}

// ---------------------------------------------------------------------------

FirstVariableDemo demo_first_variable_discontinuity(double alpha, int n_max) {
  if (n_max < 1) throw UsageError("n_max must be >= 1");
  const Alpha a(alpha);
  ComplexMatrix p = ComplexMatrix::Zero(2, 2);
  p(0, 0) = 1.0;
  const PsdOperator proj = psd_of(p);
  const std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7};

  FirstVariableDemo demo;
  demo.alpha = alpha;
  demo.limit_value = chi2_extended(proj, proj, a);
  demo.pass = demo.limit_value == DivergenceValue::finite(0.0);
  for (int n = 1; n <= n_max; ++n) {
    FirstVariableRow row;
    row.n = n;
    const PsdOperator an = psd_of(p + identity(2) / static_cast<double>(n));
    row.support_contained = support_contained(an, proj);
    row.value = chi2_extended(an, proj, a);
    row.eps = eps;
    row.probe = chi2_limit_probe(an, proj, a, eps);
    // The kernel component contributes (1/n - eps)^2 / eps.
    const double kernel = 1.0 / n;
    row.probe_diverges = row.probe.back() >= 0.5 * kernel * kernel / eps.back() &&
                         row.probe.back() > row.probe[row.probe.size() - 2];
    demo.pass = demo.pass && !row.support_contained && !row.value.is_finite() && row.probe_diverges;
    demo.rows.push_back(std::move(row));
  }
  return demo;
}

nlohmann::json FirstVariableDemo::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    rows_json.push_back({{"n", r.n},
                         {"support_contained", r.support_contained},
                         {"value", r.value.to_string()},
                         {"eps", r.eps},
                         {"limit_probe", r.probe},
                         {"probe_diverges", r.probe_diverges}});
  }
  return {{"demo", "first-var"}, {"alpha", alpha}, {"limit_value", limit_value.to_string()},
          {"rows", std::move(rows_json)}, {"pass", pass}};
}

std::string FirstVariableDemo::to_text() const {
  std::ostringstream os;
  os << "A_n = P + I/n -> P, alpha = " << fmt(alpha) << "; K(P||P) = " << limit_value.to_string()
     << '\n';
  os << std::left << std::setw(6) << "n" << std::setw(12) << "contained" << std::setw(8) << "K(A_n||P)"
     << "   K(A_n||P+eps I) at eps = 1e-1 ... 1e-7\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(6) << r.n << std::setw(12) << (r.support_contained ? "yes" : "no")
       << std::setw(8) << r.value.to_string() << "  ";
    for (double v : r.probe) os << ' ' << fmt(v, 4);
    os << '\n';
  }
  os << (pass ? "PASS" : "FAIL") << '\n';
  return os.str();
}

ComplexMatrix second_variable_sequence(int n) {
  const double inv = 1.0 / n;
  ComplexMatrix root(2, 2);
  root << 1.0, inv, inv, 2.0 * inv * inv;
  return root * root;
}

double second_variable_closed_form(int n) {
  const double nn = static_cast<double>(n) * n;
  return 4.0 + nn - 2.0 + (1.0 + 2.0 / nn + 4.0 / (nn * nn));
}

SecondVariableDemo demo_second_variable_discontinuity(int n_max) {
  if (n_max < 1) throw UsageError("n_max must be >= 1");
  ComplexMatrix p = ComplexMatrix::Zero(2, 2);
  p(0, 0) = 1.0;
  const PsdOperator proj = psd_of(p);
  SecondVariableDemo demo;
  demo.pass = true;
  for (int n = 1; n <= n_max; ++n) {
    SecondVariableRow row;
    row.n = n;
    const ComplexMatrix bn = second_variable_sequence(n);
    row.numeric = chi2(proj, pd_of(bn), Alpha(0.0));
    row.closed_form = second_variable_closed_form(n);
    row.relative_error = std::abs(row.numeric - row.closed_form) / row.closed_form;
    row.distance_to_p = op_norm(bn - p);
    row.pass = row.relative_error <= 1e-6;
    demo.pass = demo.pass && row.pass;
    demo.rows.push_back(row);
  }
  demo.note =
      "B_n -> P in operator norm, K_0(P||P) = 0, yet K_0(P||B_n) -> inf. K_0 is the "
      "f-divergence with f(t) = (t-1)^2, so that family is discontinuous in its second "
      "argument at singular limit points.";
  return demo;
}

nlohmann::json SecondVariableDemo::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    rows_json.push_back({{"n", r.n},
                         {"numeric", r.numeric},
                         {"closed_form", r.closed_form},
                         {"relative_error", r.relative_error},
                         {"distance_to_p", r.distance_to_p},
                         {"pass", r.pass}});
  }
  return {{"demo", "second-var"}, {"rows", std::move(rows_json)}, {"pass", pass}, {"note", note}};
}

std::string SecondVariableDemo::to_text() const {
  std::ostringstream os;
  os << std::left << std::setw(6) << "n" << std::setw(18) << "K_0(P||B_n)" << std::setw(18)
     << "closed form" << std::setw(14) << "rel. error" << "||B_n - P||\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(6) << r.n << std::setw(18) << fmt(r.numeric, 12) << std::setw(18)
       << fmt(r.closed_form, 12) << std::setw(14) << fmt(r.relative_error, 3)
       << fmt(r.distance_to_p, 4) << '\n';
  }
  os << "note: " << note << '\n' << (pass ? "PASS" : "FAIL") << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------

std::string to_string(FDivergenceDistinction::Outcome outcome) {
  switch (outcome) {
    case FDivergenceDistinction::Outcome::equality: return "equality";
    case FDivergenceDistinction::Outcome::witness: return "witness";
    case FDivergenceDistinction::Outcome::search_failure: return "search_failure";
  }
  return "unknown";
}

FDivergenceDistinction distinguish_from_f_divergence(double alpha, int d, int budget,
                                                     std::uint64_t seed) {
  const Alpha a(alpha);
  if (d < 2) throw UsageError("dimension must be >= 2");
  if (budget < 1) throw UsageError("budget must be >= 1");
  const ScalarFunction f = ScalarFunction::chi2_generator();

  FDivergenceDistinction out;
  out.alpha = alpha;
  out.dim = d;
  // A = tI, B = I gives S_f = d f(t) and K_alpha = d (t-1)^2, forcing f.
  for (double t : {0.25, 0.5, 2.0, 3.0, 5.0}) {
    const double k = chi2(psd_of(t * identity(d)), pd_of(identity(d)), a) / d;
    out.forced_generator_residual = std::max(out.forced_generator_residual, std::abs(k - f(t)));
  }

  const bool endpoint = alpha == 0.0 || alpha == 1.0;
  Rng rng(seed, {0x4644u, static_cast<std::uint64_t>(d), std::bit_cast<std::uint64_t>(alpha)});
  for (int s = 0; s < budget; ++s) {
    const PdOperator pa = random_pd(d, rng);
    const PdOperator pb = random_pd(d, rng);
    const double sf = f_divergence(pa, pb, f);
    const double k = chi2(pa, pb, a);
    const double gap = std::abs(sf - k);
    ++out.samples_used;
    if (endpoint) {
      out.max_residual = std::max(out.max_residual, gap);
    } else if (gap >= 0.01) {
      out.outcome = FDivergenceDistinction::Outcome::witness;
      out.witness_a = pa.matrix();
      out.witness_b = pb.matrix();
      out.witness_s_f = sf;
      out.witness_k = k;
      out.witness_gap = gap;
      return out;
    }
  }
  if (endpoint) {
    out.outcome = out.max_residual <= 1e-9 ? FDivergenceDistinction::Outcome::equality
                                           : FDivergenceDistinction::Outcome::search_failure;
  }
  return out;
}

nlohmann::json FDivergenceDistinction::to_json() const {
  nlohmann::json j = {{"distinguisher", "f"},
                      {"alpha", alpha},
                      {"dim", dim},
                      {"outcome", to_string(outcome)},
                      {"samples_used", samples_used},
                      {"forced_generator_residual", forced_generator_residual},
                      {"max_residual", max_residual}};
  if (witness_a) {
    j["witness"] = {{"a", matrix_to_json(*witness_a)},
                    {"b", matrix_to_json(*witness_b)},
                    {"s_f", witness_s_f},
                    {"k_alpha", witness_k},
                    {"gap", witness_gap}};
  }
  return j;
}

std::string FDivergenceDistinction::to_text() const {
  std::ostringstream os;
  os << "f(t) = (t-1)^2 forced by A = tI, B = I (residual " << fmt(forced_generator_residual, 3)
     << ")\n";
  os << "alpha = " << fmt(alpha) << ", d = " << dim << ": " << to_string(outcome) << " after "
     << samples_used << " samples\n";
  if (outcome == Outcome::witness) {
    os << "S_f(A||B) = " << fmt(witness_s_f, 10) << ", K_alpha(A||B) = " << fmt(witness_k, 10)
       << ", gap = " << fmt(witness_gap, 6) << '\n';
  } else {
    os << "max |S_f - K_alpha| = " << fmt(max_residual, 3) << '\n';
  }
  return os.str();
}

BregmanDistinction distinguish_from_bregman(double alpha, double t, const std::vector<double>& grid,
                                            int d) {
  const Alpha a(alpha);
  if (!(t > 0.0)) throw std::invalid_argument("probe t must be positive");
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  if (grid.size() < 4) throw std::invalid_argument("grid needs at least 4 points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw std::invalid_argument("grid points must be positive");
    for (std::size_t j = 0; j < i; ++j)
      if (grid[i] == grid[j]) throw std::invalid_argument("grid points must be distinct");
  }

  BregmanDistinction out;
  out.alpha = alpha;
  out.t = t;
  out.dim = d;
  out.grid = grid;
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd x(n, 3);
  Eigen::VectorXd y(n);
  Eigen::VectorXd control(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = grid[static_cast<std::size_t>(i)];
    x.row(i) << 1.0, s, s * s;
    const ComplexMatrix eye = ComplexMatrix::Identity(d, d);
    y(i) = chi2(psd_of(t * eye), pd_of(s * eye), a);
    control(i) = d * (t - s) * (t - s);
    out.values.push_back(y(i));
  }
  const auto qr = x.colPivHouseholderQr();
  out.quadratic = qr.solve(y);
  out.fit_residual = (x * out.quadratic - y).cwiseAbs().maxCoeff();
  out.control_residual = (x * qr.solve(control) - control).cwiseAbs().maxCoeff();
  out.certifies = out.fit_residual >= 0.1;
  return out;
}

nlohmann::json BregmanDistinction::to_json() const {
  return {{"distinguisher", "bregman"},
          {"alpha", alpha},
          {"t", t},
          {"dim", dim},
          {"grid", grid},
          {"values", values},
          {"quadratic", {quadratic(0), quadratic(1), quadratic(2)}},
          {"fit_residual", fit_residual},
          {"control_residual", control_residual},
          {"certifies_non_quadratic", certifies}};
}

std::string BregmanDistinction::to_text() const {
  std::ostringstream os;
  os << "g(s) = K_alpha(tI||sI), t = " << fmt(t) << ", d = " << dim << '\n';
  for (std::size_t i = 0; i < grid.size(); ++i)
    os << "  s = " << fmt(grid[i]) << "  g = " << fmt(values[i], 10) << '\n';
  os << "best quadratic fit residual = " << fmt(fit_residual, 6)
     << " (control d(t-s)^2: " << fmt(control_residual, 3) << ")\n";
  os << (certifies ? "not quadratic in s: no Bregman divergence matches" : "inconclusive") << '\n';
  return os.str();
}

JensenDistinction distinguish_from_jensen(double alpha, int d) {
  const Alpha a(alpha);
  if (d < 2) throw UsageError("dimension must be >= 2");
  JensenDistinction out;
  out.alpha = alpha;
  out.a = identity(d);
  out.a(0, 0) = 3.0;
  out.b = identity(d);
  const PdOperator pa = pd_of(out.a);
  const PdOperator pb = pd_of(out.b);
  out.k_ab = chi2(pa, pb, a);
  out.k_ba = chi2(pb, pa, a);
  out.gap = std::abs(out.k_ab - out.k_ba);
  const ScalarFunction f = ScalarFunction::x_log_x();
  out.jensen_ab = jensen(pa, pb, f);
  out.jensen_ba = jensen(pb, pa, f);
  return out;
}

nlohmann::json JensenDistinction::to_json() const {
  return {{"distinguisher", "jensen"},
          {"alpha", alpha},
          {"a", matrix_to_json(a)},
          {"b", matrix_to_json(b)},
          {"k_ab", k_ab},
          {"k_ba", k_ba},
          {"gap", gap},
          {"jensen_ab", jensen_ab},
          {"jensen_ba", jensen_ba}};
}

std::string JensenDistinction::to_text() const {
  std::ostringstream os;
  os << "A = diag(3, 1, ...), B = I, alpha = " << fmt(alpha) << '\n';
  os << "K_alpha(A||B) = " << fmt(k_ab, 12) << ", K_alpha(B||A) = " << fmt(k_ba, 12)
     << ", gap = " << fmt(gap, 12) << '\n';
  os << "J_f(A,B) - J_f(B,A) = " << fmt(jensen_ab - jensen_ba, 3) << " (f(t) = t log t)\n";
  return os.str();
}

}  // namespace chi2lab
