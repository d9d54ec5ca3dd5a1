#pragma once

// The quantum chi^2_alpha-divergence
//
//   K_alpha(A||B) = tr B^{-alpha} (A - B) B^{alpha-1} (A - B),
//
// its extension to singular second arguments, and the comparison
// divergences (f-, Bregman and Jensen) it is distinguished from.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "chi2lab/hermitian.hpp"

namespace chi2lab {

class Alpha {
 public:
  /// Throws std::invalid_argument outside [0, 1].
  explicit Alpha(double value);
  double value() const { return value_; }

 private:
  double value_;
};

/// Nonnegative extended real. Infinite only comes from a failed support test.
class DivergenceValue {
 public:
  static constexpr double kNegativeSlack = 1e-10;

  /// Clamps payloads in [-kNegativeSlack, 0) to 0; throws below that.
  static DivergenceValue finite(double v);
  static DivergenceValue infinite() { return DivergenceValue(); }

  bool is_finite() const { return value_.has_value(); }
  /// Throws std::logic_error on Infinite.
  double value() const;
  std::string to_string() const;

  friend bool operator==(const DivergenceValue&, const DivergenceValue&) = default;

 private:
  DivergenceValue() = default;
  std::optional<double> value_;
};

struct ScalarFunction {
  std::function<double(double)> f;
  std::function<double(double)> derivative;  // empty when not needed

  double operator()(double t) const;
  double prime(double t) const;
  bool has_derivative() const { return static_cast<bool>(derivative); }

  /// (t - 1)^2, the generator for which S_f = K_0.
  static ScalarFunction chi2_generator();
  /// t^2.
  static ScalarFunction square();
  /// t log t with 0 log 0 = 0.
  static ScalarFunction x_log_x();
};

/// K_alpha(A||B) for positive definite B, via the Gram form
/// || B^{(alpha-1)/2} (A - B) B^{-alpha/2} ||_HS^2 in the eigenbasis of B.
double chi2(const PsdOperator& a, const PdOperator& b, Alpha alpha);

/// K_0, the quadratic relative entropy.
inline double quadratic_relative_entropy(const PsdOperator& a, const PdOperator& b) {
  return chi2(a, b, Alpha(0.0));
}

/// K_alpha(A||B) for any PSD B: Infinite unless supp A is inside supp B,
/// otherwise the trace taken over supp B.
DivergenceValue chi2_extended(const PsdOperator& a, const PsdOperator& b, Alpha alpha,
                              const Tolerances& tol = default_tolerances());

/// K_alpha(A || B + eps I) along a strictly decreasing positive schedule.
std::vector<double> chi2_limit_probe(const PsdOperator& a, const PsdOperator& b, Alpha alpha,
                                     const std::vector<double>& eps_schedule);

/// Default schedule 1e-1, 1e-2, ..., 1e-6.
std::vector<double> default_eps_schedule();

/// Product formula tr R D^{-alpha} * tr R D^{alpha-1}. For a density D it
/// equals K_alpha(R||D) + 1; in general it equals K_alpha(R||D) + 2 - tr D.
double k_star(const RankOneProjection& r, const PdOperator& d, Alpha alpha);

/// k_star with the two powers of D computed once, for repeated queries.
class KStar {
 public:
  KStar(const PdOperator& d, Alpha alpha);
  double operator()(const RankOneProjection& r) const;
  int dim() const { return static_cast<int>(neg_alpha_.rows()); }

 private:
  ComplexMatrix neg_alpha_;       // D^{-alpha}
  ComplexMatrix alpha_minus_one_;  // D^{alpha-1}
};

/// S_f(A||B) = sum_{a,b} b f(a/b) tr(P_a Q_b) over the clustered spectra.
double f_divergence(const PsdOperator& a, const PdOperator& b, const ScalarFunction& f,
                    const Tolerances& tol = default_tolerances());

/// H_f(A||B) = tr f(A) - tr f(B) - tr f'(B)(A - B).
double bregman(const PdOperator& a, const PdOperator& b, const ScalarFunction& f);

/// J_f(A,B) = tr[(f(A) + f(B))/2 - f((A + B)/2)]; symmetric bit-for-bit.
double jensen(const PsdOperator& a, const PsdOperator& b, const ScalarFunction& f);

/// tr B^{-alpha} X B^{alpha-1} X for Hermitian X and PD B.
double trace_form(const PdOperator& b, const ComplexMatrix& x, Alpha alpha);

}  // namespace chi2lab
