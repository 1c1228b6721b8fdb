#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "rkde/kernel.hpp"
#include "rkde/sequences.hpp"

// Leading-order asymptotics of the recursive estimator and of the
// nonrecursive (Rosenblatt) estimator.  Every formula rejects parameter
// combinations that sit on or beyond one of its poles with
// std::domain_error; inadmissible (a, alpha, d) triples raise
// std::invalid_argument.

namespace rkde {

enum class Regime { bias_dominated, balanced, variance_dominated };

std::string to_string(Regime r);

/// Exact rational input for boundary-exact regime classification.
struct Ratio {
  std::int64_t num;
  std::int64_t den;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct RegimeClassification {
  double a = 0.0;
  double alpha = 0.0;
  std::size_t d = 0;
  Regime regime = Regime::balanced;
  /// Bias has the h_n^2 leading term (a <= alpha/(d+4), or both-valid flag).
  bool bias_expansion = false;
  /// Variance has the gamma_n/h_n^d leading term (a >= alpha/(d+4), or both-valid flag).
  bool variance_expansion = false;
  /// Bias is o(sqrt(gamma_n h_n^-d)) (a > alpha/(d+4)).
  bool bias_negligible = false;
  /// Variance is o(h_n^4) (a < alpha/(d+4)).
  bool variance_negligible = false;
  /// lim n gamma_n > min{2a, (1-ad)/2}; empty when gamma0 was not supplied.
  std::optional<bool> stepsize_condition;
  /// lim n gamma_n > max{2a, (1-ad)/2}: bias and variance expansions both hold.
  std::optional<bool> both_expansions_valid;
};

/// Boundary a = alpha/(d+4) detected within 1e-12.  gamma0 = lim n gamma_n
/// (NaN = unspecified; infinity is allowed).
RegimeClassification classify_regime(double a, double alpha, std::size_t d,
                                     double gamma0 = std::numeric_limits<double>::quiet_NaN());
/// Boundary detected exactly.
RegimeClassification classify_regime(Ratio a, Ratio alpha, std::size_t d,
                                     double gamma0 = std::numeric_limits<double>::quiet_NaN());

// -- bias and variance --------------------------------------------------------

/// h_n^2 S / (2 (1 - 2 a xi)).
double bias_leading(double curvature, const BandwidthPlan& bandwidth, const StepsizePlan& step,
                    std::uint64_t n);
/// h^2 S / 2.
double rosenblatt_bias(double curvature, double h);

/// (gamma_n / h_n^d) f R / (2 - (1 - a d) xi).
double variance_leading(double f_x, const Kernel& k, const BandwidthPlan& bandwidth,
                        const StepsizePlan& step, std::uint64_t n);
/// f R / (n h^d).
double rosenblatt_variance(double f_x, const Kernel& k, std::uint64_t n, double h);

/// Leading MSE of the recursive estimator at explicit (gamma, h), with the
/// constants evaluated at exponent a and xi.
double leading_mse(double curvature, double f_x, const Kernel& k, double a, double xi,
                   double gamma, double h);
/// Leading MSE of the Rosenblatt estimator at sample size n and bandwidth h.
double rosenblatt_leading_mse(double curvature, double f_x, const Kernel& k, std::uint64_t n,
                              double h);

// -- optimal plans ------------------------------------------------------------

/// Optimal plan: gamma_n in GS(-1) with n gamma_n -> 1, bandwidth
/// h_n = bandwidth_constant * gamma_n^{1/(d+4)}, and error
/// error_constant * n^{-4/(d+4)}.
struct OptimalPlan {
  double gamma0 = 1.0;
  double bandwidth_constant = 0.0;
  double bandwidth_exponent = 0.0;  // a = 1/(d+4)
  double error_constant = 0.0;
  double rate_exponent = 0.0;  // 4/(d+4)

  double bandwidth_at(std::uint64_t n) const {
    return bandwidth_constant * std::pow(static_cast<double>(n), -bandwidth_exponent);
  }
  double error_at(std::uint64_t n) const {
    return error_constant * std::pow(static_cast<double>(n), -rate_exponent);
  }
};

/// Pointwise MSE-optimal plan (requires f(x) > 0 and S(x) != 0).
OptimalPlan mse_optimal_plan(double f_x, double curvature, const Kernel& k);

/// MISE-optimal plan from the integrated squared curvature.
OptimalPlan mise_optimal_plan(double curvature_sq_integral, const Kernel& k);

struct MiseValue {
  double value = 0.0;
  Regime branch = Regime::balanced;
};

/// Leading MISE; the branch (bias only, both terms, variance only) follows
/// classify_regime(a, alpha, d).
MiseValue mise_leading(double curvature_sq_integral, const Kernel& k,
                       const BandwidthPlan& bandwidth, const StepsizePlan& step, std::uint64_t n);

/// Ratio of the optimal Rosenblatt MSE to the optimal recursive MSE:
/// [2^4 (d+2)^{2d+4} / (d+4)^{2d+4}]^{1/(d+4)}.
double efficiency_ratio(std::size_t d);

// -- central limit and iterated-logarithm constants ---------------------------

struct CltParams {
  double c = 0.0;  // lim gamma_n^{-1} h_n^{d+4}
  double mean = 0.0;
  double variance = 0.0;
  /// c = infinity: h_n^{-2}(f_n - f) converges in probability to bias_limit.
  bool degenerate = false;
  double bias_limit = 0.0;
};

/// Limit law of sqrt(gamma_n^{-1} h_n^d) (f_n(x) - f(x)).
CltParams clt_params(double c, double f_x, double curvature, const Kernel& k, double a,
                     const StepsizePlan& step);

struct CiConstant {
  double value = 0.0;
  double optimal_gamma0 = 0.0;
  double optimal_value = 0.0;
};

/// sqrt(gamma0 / (2 - (1 - a d)/gamma0)); minimum sqrt(1 - a d) at gamma0 = 1 - a d.
/// The same quantity is the half-width factor of the iterated-logarithm
/// limit interval.
CiConstant ci_constant(double gamma0, double a, std::size_t d);

struct LimitInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Limit set of sqrt(gamma_n^{-1} h_n^d / (2 ln s_n)) (f_n(x) - f(x)) when
/// gamma_n^{-1} h_n^{d+4} / ln s_n -> c1.
LimitInterval lil_limit_interval(double c1, double f_x, double curvature, const Kernel& k,
                                 double a, const StepsizePlan& step);

/// Rosenblatt counterpart [-sqrt(f R), sqrt(f R)].
LimitInterval rosenblatt_lil_interval(double f_x, const Kernel& k);

}  // namespace rkde
