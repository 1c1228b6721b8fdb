#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>

namespace rkde {

/// A regularly varying positive sequence
///
///     v_n = scale * n^exponent * log(n + 1)^log_exponent,   n >= 1.
///
/// The sequence belongs to the class of sequences for which
/// n * (1 - v_{n-1} / v_n) tends to `exponent`; stepsizes, bandwidths and
/// estimator weights are all built from it.
class SequencePlan {
 public:
  SequencePlan() = default;
  SequencePlan(double scale, double exponent, double log_exponent = 0.0);

  static SequencePlan constant(double value = 1.0) { return {value, 0.0}; }
  static SequencePlan power(double scale, double exponent) {
    return {scale, exponent};
  }

  double scale() const { return scale_; }
  double exponent() const { return exponent_; }
  double log_exponent() const { return log_exponent_; }

  double operator()(std::uint64_t n) const;

  /// log(v_{n-1} / v_n) for n >= 2, computed without forming both values.
  double log_ratio_prev(std::uint64_t n) const;

 private:
  double scale_ = 1.0;
  double exponent_ = 0.0;
  double log_exponent_ = 0.0;
};

double value_at(const SequencePlan& plan, std::uint64_t n);

/// n_max * (1 - v_{n_max - 1} / v_{n_max}); tends to plan.exponent().
double gs_index_diagnostic(const SequencePlan& plan, std::uint64_t n_max);

class StepsizeCursor;

/// Stepsize (gain) sequence of the stochastic approximation recursion.
///
/// Two representations are supported: a closed-form power law
/// gamma_n = c * n^{-alpha} (optionally times a log power), and the
/// weight-induced sequence gamma_n = w_n / sum_{k<=n} w_k.  `gamma0` is the
/// limit of n * gamma_n (possibly +infinity) and `xi` its reciprocal.
class StepsizePlan {
 public:
  /// gamma_n = scale * n^{-alpha} * log(n+1)^log_exponent, alpha in (1/2, 1].
  static StepsizePlan power(double scale, double alpha,
                            double log_exponent = 0.0);

  /// gamma_n = w_n / sum_{k<=n} w_k for weights in GS(w_star), w_star > -1.
  static StepsizePlan from_weights(const SequencePlan& weights);

  double alpha() const { return alpha_; }
  double gamma0() const { return gamma0_; }
  double xi() const { return xi_; }
  bool weight_induced() const { return weights_.has_value(); }

  /// The closed-form sequence (power plans) or the weights (weight plans).
  const SequencePlan& sequence() const { return seq_; }
  const std::optional<SequencePlan>& weights() const { return weights_; }

  /// gamma_n; O(n) for weight-induced plans.
  double value_at(std::uint64_t n) const;

  StepsizeCursor cursor() const;

 private:
  friend StepsizePlan stepsize_from_weights(double w_star, const SequencePlan& weights);
  StepsizePlan() = default;

  SequencePlan seq_;
  std::optional<SequencePlan> weights_;
  double alpha_ = 1.0;
  double gamma0_ = 1.0;
  double xi_ = 1.0;
};

/// Streams gamma_1, gamma_2, ... in index order with O(1) state.
class StepsizeCursor {
 public:
  explicit StepsizeCursor(StepsizePlan plan) : plan_(std::move(plan)) {}

  /// Advances to the next index and returns its stepsize.
  double next();
  std::uint64_t index() const { return n_; }

 private:
  StepsizePlan plan_;
  std::uint64_t n_ = 0;
  double weight_sum_ = 0.0;
};

/// Checks the weight hypothesis and builds the plan: weights in GS(w_star), w_star > -1.
/// Throws std::invalid_argument if w_star <= -1 or the plan's exponent differs.
StepsizePlan stepsize_from_weights(double w_star, const SequencePlan& weights);

class BandwidthPlan {
 public:
  /// h_n = scale * n^{-a} (times an optional log power).
  BandwidthPlan(double scale, double a, double log_exponent = 0.0);
  static BandwidthPlan power(double a) { return {1.0, a}; }

  double a() const { return a_; }
  const SequencePlan& sequence() const { return seq_; }
  double value_at(std::uint64_t n) const { return seq_(n); }

 private:
  SequencePlan seq_;
  double a_;
};

/// Throws std::invalid_argument unless alpha in (1/2, 1] and a in (0, alpha/d).
void check_admissible(const StepsizePlan& step, const BandwidthPlan& bandwidth,
                      std::size_t dim);

/// Running product Pi_n = prod_{k<=n} (1 - gamma_k).
///
/// Accumulated in log space while every factor is positive; an exact zero
/// factor pins the product to 0 from then on.  Negative factors flip a sign.
class PartialProduct {
 public:
  void multiply(double gamma);
  double value() const;
  double log_abs() const { return log_abs_; }
  bool is_zero() const { return zero_; }

 private:
  double log_abs_ = 0.0;
  bool negative_ = false;
  bool zero_ = false;
};

/// Pi_n for the given stepsize plan.
double partial_product(const StepsizePlan& step, std::uint64_t n);

/// v_n Pi_n^m sum_{k<=n} Pi_k^{-m} gamma_k / v_k at n = n_max, evaluated by the
/// forward recursion Q_n = (v_n / v_{n-1}) (1 - gamma_n)^m Q_{n-1} + gamma_n.
/// Converges to 1 / (m - v* xi), with v* = v.exponent().
/// Throws std::invalid_argument when m - v* xi <= 0.
double normalized_product_sum(double m, const SequencePlan& v,
                              const StepsizePlan& step, std::uint64_t n_max);

/// The limit 1 / (m - v* xi) of normalized_product_sum.
double normalized_product_sum_limit(double m, const SequencePlan& v,
                                    const StepsizePlan& step);

}  // namespace rkde
