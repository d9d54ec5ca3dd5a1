#pragma once

// Executable checks of the divergence's properties, the two discontinuity
// counterexamples, and the witnesses separating K_alpha from f-, Bregman and
// Jensen divergences.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chi2lab/divergence.hpp"

namespace chi2lab {

struct PropertyReport {
  std::string name;
  double alpha = 0.0;
  int dim = 0;
  int trials = 0;
  int failures = 0;
  /// Largest per-trial residual; a trial fails when its residual exceeds the
  /// property's tolerance.
  double worst_residual = 0.0;
  double tolerance = 0.0;
  /// Inputs of the worst trial, present when failures > 0.
  std::optional<nlohmann::json> witness;

  nlohmann::json to_json() const;
};

/// Names of the properties run for every (alpha, d), in report order.
const std::vector<std::string>& property_names();

/// One report per property per (alpha, d). Throws UsageError when trials < 1.
std::vector<PropertyReport> run_property_suite(const std::vector<double>& alphas,
                                               const std::vector<int>& dims, int trials,
                                               std::uint64_t seed);

/// Runs a single named property.
PropertyReport run_property(const std::string& name, double alpha, int d, int trials,
                            std::uint64_t seed);

nlohmann::json suite_to_json(const std::vector<PropertyReport>& reports);
std::string suite_to_text(const std::vector<PropertyReport>& reports);
int total_failures(const std::vector<PropertyReport>& reports);

// ---------------------------------------------------------------------------
// Counterexamples.

struct FirstVariableRow {
  int n = 0;
  bool support_contained = true;
  DivergenceValue value = DivergenceValue::infinite();  // K_alpha(P + I/n || P)
  std::vector<double> eps;
  std::vector<double> probe;  // K_alpha(P + I/n || P + eps I)
  bool probe_diverges = false;
};

struct FirstVariableDemo {
  double alpha = 0.0;
  DivergenceValue limit_value = DivergenceValue::infinite();  // K_alpha(P||P)
  std::vector<FirstVariableRow> rows;
  bool pass = false;

  nlohmann::json to_json() const;
  std::string to_text() const;
};

/// A_n = P + I/n converges to P, K_alpha(A_n||P) = inf for every n while
/// K_alpha(P||P) = 0. d = 2, P = e_1 e_1*.
FirstVariableDemo demo_first_variable_discontinuity(double alpha, int n_max);

struct SecondVariableRow {
  int n = 0;
  double numeric = 0.0;
  double closed_form = 0.0;
  double relative_error = 0.0;
  double distance_to_p = 0.0;  // ||B_n - P||_op
  bool pass = false;
};

struct SecondVariableDemo {
  std::vector<SecondVariableRow> rows;
  bool pass = false;
  std::string note;

  nlohmann::json to_json() const;
  std::string to_text() const;
};

/// B_n = S_n^2 with S_n = [[1, 1/n], [1/n, 2/n^2]]: B_n -> P but
/// K_0(P||B_n) = 4 + n^2 - 2 + (1 + 2/n^2 + 4/n^4) -> inf.
SecondVariableDemo demo_second_variable_discontinuity(int n_max);

/// The second-variable sequence element B_n.
ComplexMatrix second_variable_sequence(int n);
double second_variable_closed_form(int n);

// ---------------------------------------------------------------------------
// Distinguishers.

struct FDivergenceDistinction {
  enum class Outcome { equality, witness, search_failure };
  Outcome outcome = Outcome::search_failure;
  double alpha = 0.0;
  int dim = 0;
  int samples_used = 0;
  /// max_t |K_alpha(tI||I)/d - (t-1)^2| on the diagonal probes that force f.
  double forced_generator_residual = 0.0;
  /// Equality mode: max |S_f - K_alpha| over the samples.
  double max_residual = 0.0;
  /// Witness mode.
  std::optional<ComplexMatrix> witness_a;
  std::optional<ComplexMatrix> witness_b;
  double witness_s_f = 0.0;
  double witness_k = 0.0;
  double witness_gap = 0.0;

  nlohmann::json to_json() const;
  std::string to_text() const;
};

std::string to_string(FDivergenceDistinction::Outcome outcome);

/// With f(t) = (t-1)^2: equality S_f = K_alpha for alpha in {0, 1}; otherwise a
/// seeded search for (A, B) with |S_f - K_alpha| >= 0.01.
FDivergenceDistinction distinguish_from_f_divergence(double alpha, int d, int budget,
                                                     std::uint64_t seed);

struct BregmanDistinction {
  double alpha = 0.0;
  double t = 0.0;
  int dim = 0;
  std::vector<double> grid;
  std::vector<double> values;  // K_alpha(tI||sI)
  Eigen::Vector3d quadratic;   // least-squares c0 + c1 s + c2 s^2
  double fit_residual = 0.0;
  double control_residual = 0.0;  // same fit applied to d (t-s)^2
  bool certifies = false;         // fit_residual >= 0.1

  nlohmann::json to_json() const;
  std::string to_text() const;
};

/// Fits a quadratic in s to s -> K_alpha(tI||sI) = d (t-s)^2 / s. Throws
/// std::invalid_argument on a degenerate grid.
BregmanDistinction distinguish_from_bregman(double alpha, double t, const std::vector<double>& grid,
                                            int d = 2);

struct JensenDistinction {
  double alpha = 0.0;
  ComplexMatrix a;
  ComplexMatrix b;
  double k_ab = 0.0;
  double k_ba = 0.0;
  double gap = 0.0;
  double jensen_ab = 0.0;
  double jensen_ba = 0.0;

  nlohmann::json to_json() const;
  std::string to_text() const;
};

/// A = diag(3, 1, ..., 1), B = I: K_alpha(A||B) = 4, K_alpha(B||A) = 4/3.
JensenDistinction distinguish_from_jensen(double alpha, int d);

}  // namespace chi2lab
