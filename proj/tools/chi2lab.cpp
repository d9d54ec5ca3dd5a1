// chi2lab command-line front end.
//
// Exit codes: 0 success, 1 check or invariant failure, 2 usage or parse error.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "chi2lab/divergence.hpp"
#include "chi2lab/matrix_json.hpp"
#include "chi2lab/paperlab.hpp"
#include "chi2lab/reconstruction.hpp"

using namespace chi2lab;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

struct Globals {
  bool json = false;
  std::uint64_t seed = 0;
};

std::uint64_t env_seed() {
  const char* s = std::getenv("CHI2LAB_SEED");
  if (s == nullptr || *s == '\0') return 0;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != std::string(s).size()) throw UsageError("");
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("CHI2LAB_SEED is not an unsigned integer: ") + s);
  }
}

std::string fmt(double v, int precision = 12) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

PsdOperator load_psd(const std::string& path) {
  return PsdOperator(HermitianMatrix(load_matrix(path)));
}

void emit(const Globals& g, const json& j, const std::string& text) {
  if (g.json) {
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << text;
  }
}

// divergence ------------------------------------------------------------------

struct DivergenceArgs {
  std::string a, b, kind = "chi2";
  double alpha = 0.5;
};

int cmd_divergence(const Globals& g, const DivergenceArgs& args) {
  const Alpha alpha(args.alpha);
  const PsdOperator a = load_psd(args.a);
  const PsdOperator b = load_psd(args.b);
  require_same_dim(a.dim(), b.dim(), "divergence");
  std::string value;
  if (args.kind == "chi2") {
    value = chi2_extended(a, b, alpha).to_string();
  } else if (args.kind == "f") {
    value = fmt(f_divergence(a, PdOperator(b), ScalarFunction::chi2_generator()));
  } else if (args.kind == "bregman") {
    value = fmt(bregman(PdOperator(a), PdOperator(b), ScalarFunction::x_log_x()));
  } else {
    value = fmt(jensen(a, b, ScalarFunction::x_log_x()));
  }
  emit(g, {{"kind", args.kind}, {"alpha", args.alpha}, {"value", value}}, value + '\n');
  return kOk;
}

// suite -----------------------------------------------------------------------

struct SuiteArgs {
  std::vector<double> alphas{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<int> dims{2, 3, 4};
  int trials = 200;
  std::string out;
};

int cmd_suite(const Globals& g, const SuiteArgs& args) {
  const auto reports = run_property_suite(args.alphas, args.dims, args.trials, g.seed);
  const json j = suite_to_json(reports);
  if (!args.out.empty()) {
    std::ofstream f(args.out);
    if (!f) throw UsageError("cannot write " + args.out);
    f << j.dump(2) << '\n';
  }
  emit(g, j, suite_to_text(reports));
  return total_failures(reports) == 0 ? kOk : kCheckFailed;
}

// demo / distinguish ------------------------------------------------------------

struct DemoArgs {
  std::string which;
  int n_max = 10;
  double alpha = 0.5;
};

int cmd_demo(const Globals& g, const DemoArgs& args) {
  if (args.which == "first-var") {
    const FirstVariableDemo d = demo_first_variable_discontinuity(args.alpha, args.n_max);
    emit(g, d.to_json(), d.to_text());
    return d.pass ? kOk : kCheckFailed;
  }
  const SecondVariableDemo d = demo_second_variable_discontinuity(args.n_max);
  emit(g, d.to_json(), d.to_text());
  return d.pass ? kOk : kCheckFailed;
}

struct DistinguishArgs {
  std::string which;
  double alpha = 0.5;
  int dim = 2;
  int budget = 1000;
  double t = 2.0;
  std::vector<double> grid{0.5, 1.0, 1.5, 2.5};
};

int cmd_distinguish(const Globals& g, const DistinguishArgs& args) {
  if (args.which == "f") {
    const FDivergenceDistinction r = distinguish_from_f_divergence(args.alpha, args.dim, args.budget, g.seed);
    emit(g, r.to_json(), r.to_text());
    return r.outcome == FDivergenceDistinction::Outcome::search_failure ? kCheckFailed : kOk;
  }
  if (args.which == "bregman") {
    const BregmanDistinction r = distinguish_from_bregman(args.alpha, args.t, args.grid, args.dim);
    emit(g, r.to_json(), r.to_text());
    return r.certifies ? kOk : kCheckFailed;
  }
  const JensenDistinction r = distinguish_from_jensen(args.alpha, args.dim);
  emit(g, r.to_json(), r.to_text());
  return r.gap > 0.0 ? kOk : kCheckFailed;
}

// tomography / peel ---------------------------------------------------------------

struct HiddenArgs {
  std::string hidden;
  double alpha = 0.5;
  std::vector<double> t_values;
};

int cmd_tomography(const Globals& g, const HiddenArgs& args) {
  constexpr double kTol = 1e-6;
  const Alpha alpha(args.alpha);
  const PsdOperator hidden = load_psd(args.hidden);
  ProbeSchedule schedule;
  if (!args.t_values.empty()) schedule.t_values = args.t_values;
  DivergenceOracle oracle = DivergenceOracle::hidden_first_argument(hidden, alpha);
  const PsdOperator got = quadratic_form_tomography(oracle, hidden.dim(), alpha, schedule);
  const double err = op_norm(got.matrix() - hidden.matrix());
  const json j = {{"alpha", args.alpha},        {"recovered", matrix_to_json(got.matrix())},
                  {"error", err},                {"queries", oracle.query_count()},
                  {"pass", err <= kTol}};
  std::ostringstream os;
  os << "recovered:\n" << got.matrix() << "\noperator-norm error " << fmt(err, 3) << " after "
     << oracle.query_count() << " queries\n";
  emit(g, j, os.str());
  return err <= kTol ? kOk : kCheckFailed;
}

int cmd_peel(const Globals& g, const HiddenArgs& args) {
  constexpr double kTol = 1e-5;
  const Alpha alpha(args.alpha);
  const DensityOperator hidden(load_matrix(args.hidden));
  if (!hidden.is_nonsingular()) throw InvariantViolation("peeling needs a nonsingular density");
  DivergenceOracle oracle = DivergenceOracle::hidden_density(hidden, alpha);
  SphereOptConfig cfg;
  cfg.seed = g.seed;
  const SpectralDecomposition sd = spectral_peel(
      [&](const RankOneProjection& r) { return oracle(r.matrix()); }, hidden.dim(), alpha, cfg);
  const double err = op_norm(sd.reassemble() - hidden.matrix());
  json projections = json::array();
  for (const auto& p : sd.projections) projections.push_back(matrix_to_json(p));
  const json j = {{"alpha", args.alpha},
                  {"eigenvalues", sd.eigenvalues},
                  {"multiplicities", sd.multiplicities},
                  {"projections", projections},
                  {"reassembly_error", err},
                  {"queries", oracle.query_count()},
                  {"pass", err <= kTol}};
  std::ostringstream os;
  os << "eigenvalues:";
  for (std::size_t k = 0; k < sd.eigenvalues.size(); ++k) {
    os << ' ' << fmt(sd.eigenvalues[k], 10);
    if (sd.multiplicities[k] > 1) os << " (x" << sd.multiplicities[k] << ')';
  }
  os << "\nreassembly error " << fmt(err, 3) << " after " << oracle.query_count() << " queries\n";
  emit(g, j, os.str());
  return err <= kTol ? kOk : kCheckFailed;
}

// decompile ---------------------------------------------------------------------

struct DecompileArgs {
  std::string map = "identity";
  int dim = 2;
  double alpha = 0.5;
};

int cmd_decompile(const Globals& g, const DecompileArgs& args) {
  const Alpha alpha(args.alpha);
  std::optional<ConjugationMap> truth;
  int d = args.dim;
  if (args.map != "identity") {
    const auto colon = args.map.find(':');
    if (colon == std::string::npos) throw UsageError("--map must be identity, unitary:PATH or antiunitary:PATH");
    const std::string kind = args.map.substr(0, colon);
    if (kind != "unitary" && kind != "antiunitary") throw UsageError("unknown map kind: " + kind);
    truth.emplace(load_matrix(args.map.substr(colon + 1)),
                  kind == "unitary" ? ConjugationKind::unitary : ConjugationKind::antiunitary);
    d = truth->dim();
  }
  if (d < 2) throw UsageError("--dim must be >= 2");
  const PdMap phi = [&](const ComplexMatrix& a) -> ComplexMatrix {
    return truth ? truth->apply(a) : a;
  };
  DecompileConfig cfg;
  cfg.seed = g.seed;
  const DecompileReport r = preserver_decompile(phi, d, alpha, cfg);

  std::ostringstream os;
  if (r.recovered) {
    os << "kind: " << to_string(r.recovered->kind()) << "\nU:\n" << r.recovered->u() << '\n';
  } else {
    os << "kind: none\n";
  }
  os << "trace residual        " << fmt(r.trace_preservation_residual, 3) << '\n'
     << "divergence residual   " << fmt(r.divergence_preservation_residual, 3) << '\n'
     << "stability residual    " << fmt(r.extremal_stability_residual, 3) << '\n'
     << "orthogonality         " << (r.orthogonality_pass ? "preserved" : "violated") << " ("
     << fmt(r.orthogonality_residual, 3) << ")\n"
     << "transition residual   " << fmt(r.transition_residual, 3) << '\n'
     << "scale consistency     " << fmt(r.scale_consistency_residual, 3) << '\n'
     << "verification residual " << fmt(r.verification_residual, 3) << '\n'
     << "queries               " << r.query_count << '\n';
  for (const auto& f : r.failures) os << "stage " << f.stage << " (" << f.name << "): " << f.detail << '\n';
  os << (r.ok() ? "OK" : "REJECTED") << '\n';
  emit(g, r.to_json(), os.str());
  return r.ok() ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chi2lab: chi^2_alpha divergence toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  std::optional<std::uint64_t> seed;
  app.add_flag("--json", g.json, "Machine-readable JSON output");
  app.add_option("--seed", seed, "Random seed (falls back to CHI2LAB_SEED, then 0)");

  DivergenceArgs div;
  auto* c_div = app.add_subcommand("divergence", "Evaluate a divergence on two matrix files");
  c_div->add_option("--a", div.a, "First argument (matrix JSON)")->required()->check(CLI::ExistingFile);
  c_div->add_option("--b", div.b, "Second argument (matrix JSON)")->required()->check(CLI::ExistingFile);
  c_div->add_option("--alpha", div.alpha)->check(CLI::Range(0.0, 1.0));
  c_div->add_option("--kind", div.kind)->check(CLI::IsMember({"chi2", "f", "bregman", "jensen"}));

  SuiteArgs suite;
  auto* c_suite = app.add_subcommand("suite", "Run the property suite");
  c_suite->add_option("--alpha", suite.alphas)->check(CLI::Range(0.0, 1.0));
  c_suite->add_option("--dim", suite.dims);
  c_suite->add_option("--trials", suite.trials);
  c_suite->add_option("--out", suite.out, "Also write the JSON report here");

  DemoArgs demo;
  auto* c_demo = app.add_subcommand("demo", "Discontinuity counterexamples");
  c_demo->add_option("--which", demo.which)->required()->check(CLI::IsMember({"first-var", "second-var"}));
  c_demo->add_option("--n-max", demo.n_max);
  c_demo->add_option("--alpha", demo.alpha)->check(CLI::Range(0.0, 1.0));

  DistinguishArgs dist;
  auto* c_dist = app.add_subcommand("distinguish", "Separate K_alpha from other divergence families");
  c_dist->add_option("--which", dist.which)->required()->check(CLI::IsMember({"f", "bregman", "jensen"}));
  c_dist->add_option("--alpha", dist.alpha)->check(CLI::Range(0.0, 1.0));
  c_dist->add_option("--dim", dist.dim);
  c_dist->add_option("--budget", dist.budget);
  c_dist->add_option("--t", dist.t, "Bregman probe tI");
  c_dist->add_option("--grid", dist.grid, "Bregman grid of s values");

  HiddenArgs tomo;
  auto* c_tomo = app.add_subcommand("tomography", "Recover a hidden first argument from divergence queries");
  c_tomo->add_option("--hidden", tomo.hidden)->required()->check(CLI::ExistingFile);
  c_tomo->add_option("--alpha", tomo.alpha)->check(CLI::Range(0.0, 1.0));
  c_tomo->add_option("--t", tomo.t_values, "Probe schedule in (0,1)");

  HiddenArgs peel;
  auto* c_peel = app.add_subcommand("peel", "Recover a hidden density's spectrum by peeling");
  c_peel->add_option("--hidden", peel.hidden)->required()->check(CLI::ExistingFile);
  c_peel->add_option("--alpha", peel.alpha)->check(CLI::Range(0.0, 1.0));

  DecompileArgs dec;
  auto* c_dec = app.add_subcommand("decompile", "Decompose a divergence preserver");
  c_dec->add_option("--map", dec.map, "identity | unitary:PATH | antiunitary:PATH");
  c_dec->add_option("--dim", dec.dim, "Dimension for --map identity");
  c_dec->add_option("--alpha", dec.alpha)->check(CLI::Range(0.0, 1.0));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    g.seed = seed ? *seed : env_seed();
    if (c_div->parsed()) return cmd_divergence(g, div);
    if (c_suite->parsed()) return cmd_suite(g, suite);
    if (c_demo->parsed()) return cmd_demo(g, demo);
    if (c_dist->parsed()) return cmd_distinguish(g, dist);
    if (c_tomo->parsed()) return cmd_tomography(g, tomo);
    if (c_peel->parsed()) return cmd_peel(g, peel);
    if (c_dec->parsed()) return cmd_decompile(g, dec);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kUsage;
}
