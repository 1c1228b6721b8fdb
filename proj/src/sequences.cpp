#include "rkde/sequences.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rkde {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

SequencePlan::SequencePlan(double scale, double exponent, double log_exponent)
    : scale_(scale), exponent_(exponent), log_exponent_(log_exponent) {
  require(std::isfinite(scale) && scale > 0.0, "sequence scale must be positive");
  require(std::isfinite(exponent), "sequence exponent must be finite");
  require(std::isfinite(log_exponent), "sequence log exponent must be finite");
}

double SequencePlan::operator()(std::uint64_t n) const {
  require(n >= 1, "sequence index starts at 1");
  const auto nd = static_cast<double>(n);
  double v = scale_ * std::pow(nd, exponent_);
  if (log_exponent_ != 0.0) v *= std::pow(std::log(nd + 1.0), log_exponent_);
  return v;
}

double SequencePlan::log_ratio_prev(std::uint64_t n) const {
  require(n >= 2, "ratio v_{n-1}/v_n needs n >= 2");
  const auto nd = static_cast<double>(n);
  double r = exponent_ * std::log1p(-1.0 / nd);
  if (log_exponent_ != 0.0)
    r += log_exponent_ * std::log(std::log(nd) / std::log(nd + 1.0));
  return r;
}

double value_at(const SequencePlan& plan, std::uint64_t n) { return plan(n); }

double gs_index_diagnostic(const SequencePlan& plan, std::uint64_t n_max) {
  require(n_max >= 10, "gs_index_diagnostic needs n_max >= 10");
  return static_cast<double>(n_max) * -std::expm1(plan.log_ratio_prev(n_max));
}

StepsizePlan StepsizePlan::power(double scale, double alpha,
                                 double log_exponent) {
  require(alpha > 0.5 && alpha <= 1.0, "stepsize exponent alpha must lie in (1/2, 1]");
  StepsizePlan p;
  p.seq_ = SequencePlan(scale, -alpha, log_exponent);
  p.alpha_ = alpha;
  if (alpha < 1.0 || log_exponent > 0.0) {
    p.gamma0_ = kInf;
    p.xi_ = 0.0;
  } else {
    require(log_exponent == 0.0,
            "n * gamma_n must not tend to zero (negative log power with alpha = 1)");
    p.gamma0_ = scale;
    p.xi_ = 1.0 / scale;
  }
  return p;
}

StepsizePlan StepsizePlan::from_weights(const SequencePlan& weights) {
  return stepsize_from_weights(weights.exponent(), weights);
}

StepsizePlan stepsize_from_weights(double w_star, const SequencePlan& weights) {
  require(w_star > -1.0, "weight index w* must exceed -1");
  require(std::abs(weights.exponent() - w_star) <= 1e-12,
          "weight plan exponent does not match w*");
  StepsizePlan p = StepsizePlan::power(1.0, 1.0);
  p.seq_ = weights;
  p.weights_ = weights;
  p.alpha_ = 1.0;
  p.gamma0_ = 1.0 + w_star;
  p.xi_ = 1.0 / p.gamma0_;
  return p;
}

double StepsizePlan::value_at(std::uint64_t n) const {
  if (!weights_) return seq_(n);
  StepsizeCursor c(*this);
  double g = 0.0;
  for (std::uint64_t k = 0; k < n; ++k) g = c.next();
  return g;
}

StepsizeCursor StepsizePlan::cursor() const { return StepsizeCursor(*this); }

double StepsizeCursor::next() {
  ++n_;
  if (!plan_.weight_induced()) return plan_.sequence()(n_);
  const double w = (*plan_.weights())(n_);
  weight_sum_ += w;
  return w / weight_sum_;
}

BandwidthPlan::BandwidthPlan(double scale, double a, double log_exponent)
    : seq_(scale, -a, log_exponent), a_(a) {
  require(a > 0.0, "bandwidth exponent a must be positive");
}

void check_admissible(const StepsizePlan& step, const BandwidthPlan& bandwidth,
                      std::size_t dim) {
  require(dim >= 1, "dimension must be positive");
  const double alpha = step.alpha();
  require(alpha > 0.5 && alpha <= 1.0, "alpha must lie in (1/2, 1]");
  const double a = bandwidth.a();
  if (!(a > 0.0 && a < alpha / static_cast<double>(dim)))
    throw std::invalid_argument("bandwidth exponent a=" + std::to_string(a) +
                                " outside (0, alpha/d)");
}

void PartialProduct::multiply(double gamma) {
  if (zero_) return;
  const double factor = 1.0 - gamma;
  if (factor == 0.0) {
    zero_ = true;
    return;
  }
  if (factor < 0.0) negative_ = !negative_;
  log_abs_ += gamma < 1.0 ? std::log1p(-gamma) : std::log(std::abs(factor));
}

double PartialProduct::value() const {
  if (zero_) return 0.0;
  const double v = std::exp(log_abs_);
  return negative_ ? -v : v;
}

double partial_product(const StepsizePlan& step, std::uint64_t n) {
  PartialProduct pi;
  auto c = step.cursor();
  for (std::uint64_t k = 0; k < n; ++k) pi.multiply(c.next());
  return pi.value();
}

double normalized_product_sum_limit(double m, const SequencePlan& v,
                                    const StepsizePlan& step) {
  require(m > 0.0, "m must be positive");
  const double denom = m - v.exponent() * step.xi();
  require(denom > 0.0, "m - v* xi must be positive");
  return 1.0 / denom;
}

double normalized_product_sum(double m, const SequencePlan& v,
                              const StepsizePlan& step, std::uint64_t n_max) {
  normalized_product_sum_limit(m, v, step);
  require(n_max >= 1, "n_max must be positive");
  auto c = step.cursor();
  double q = 0.0;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    const double g = c.next();
    if (n == 1) {
      q = g;
      continue;
    }
    const double growth = std::exp(-v.log_ratio_prev(n));
    q = growth * std::pow(1.0 - g, m) * q + g;
  }
  return q;
}

}  // namespace rkde
