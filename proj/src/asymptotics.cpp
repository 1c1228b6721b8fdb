#include "rkde/asymptotics.hpp"

#include <algorithm>
#include <stdexcept>

namespace rkde {

namespace {

constexpr double kBoundaryTol = 1e-12;

void pole(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

double bias_denominator(double a, double xi) {
  const double den = 1.0 - 2.0 * a * xi;
  pole(den > 0.0, "1 - 2 a xi must be positive (bias formula pole)");
  return den;
}

double variance_denominator(double a, std::size_t d, double xi) {
  const double den = 2.0 - (1.0 - a * static_cast<double>(d)) * xi;
  pole(den > 0.0, "2 - (1 - a d) xi must be positive (variance formula pole)");
  return den;
}

void validate_a2(double a, double alpha, std::size_t d) {
  if (d == 0) throw std::invalid_argument("dimension must be positive");
  if (!(alpha > 0.5 && alpha <= 1.0))
    throw std::invalid_argument("alpha must lie in (1/2, 1]");
  if (!(a > 0.0 && a < alpha / static_cast<double>(d)))
    throw std::invalid_argument("a must lie in (0, alpha/d)");
}

RegimeClassification finish(double a, double alpha, std::size_t d, Regime regime,
                            double gamma0) {
  RegimeClassification r;
  r.a = a;
  r.alpha = alpha;
  r.d = d;
  r.regime = regime;
  r.bias_negligible = regime == Regime::variance_dominated;
  r.variance_negligible = regime == Regime::bias_dominated;
  if (!std::isnan(gamma0)) {
    const double ad = a * static_cast<double>(d);
    const double lo = std::min(2.0 * a, 0.5 * (1.0 - ad));
    const double hi = std::max(2.0 * a, 0.5 * (1.0 - ad));
    r.stepsize_condition = gamma0 > lo;
    r.both_expansions_valid = gamma0 > hi;
  }
  const bool both = r.both_expansions_valid.value_or(false);
  r.bias_expansion = regime != Regime::variance_dominated || both;
  r.variance_expansion = regime != Regime::bias_dominated || both;
  return r;
}

double optimal_constant(std::size_t d) {
  const auto dd = static_cast<double>(d);
  const double e = dd + 4.0;
  return std::pow(e, (3.0 * dd + 8.0) / e) /
         (std::pow(dd, dd / e) * std::pow(4.0, (dd + 6.0) / e) *
          std::pow(dd + 2.0, (2.0 * dd + 4.0) / e));
}

OptimalPlan optimal_plan(double variance_scale, double bias_sq, std::size_t d) {
  const auto dd = static_cast<double>(d);
  const double e = dd + 4.0;
  OptimalPlan p;
  p.gamma0 = 1.0;
  p.bandwidth_exponent = 1.0 / e;
  p.rate_exponent = 4.0 / e;
  p.bandwidth_constant =
      std::pow(dd * (dd + 2.0) / (2.0 * e) * variance_scale / bias_sq, 1.0 / e);
  p.error_constant =
      optimal_constant(d) * std::pow(bias_sq, dd / e) * std::pow(variance_scale, 4.0 / e);
  return p;
}

}  // namespace

std::string to_string(Regime r) {
  switch (r) {
    case Regime::bias_dominated:
      return "bias-dominated";
    case Regime::balanced:
      return "balanced";
    case Regime::variance_dominated:
      return "variance-dominated";
  }
  return "unknown";
}

RegimeClassification classify_regime(double a, double alpha, std::size_t d, double gamma0) {
  validate_a2(a, alpha, d);
  const double lhs = a * (static_cast<double>(d) + 4.0);
  Regime regime = Regime::balanced;
  if (std::abs(lhs - alpha) > kBoundaryTol)
    regime = lhs < alpha ? Regime::bias_dominated : Regime::variance_dominated;
  return finish(a, alpha, d, regime, gamma0);
}

RegimeClassification classify_regime(Ratio a, Ratio alpha, std::size_t d, double gamma0) {
  if (a.den <= 0 || alpha.den <= 0)
    throw std::invalid_argument("ratio denominators must be positive");
  validate_a2(a.value(), alpha.value(), d);
  // a (d+4) vs alpha, cross-multiplied.
  const __int128 lhs = static_cast<__int128>(a.num) * static_cast<__int128>(d + 4) * alpha.den;
  const __int128 rhs = static_cast<__int128>(alpha.num) * a.den;
  Regime regime = Regime::balanced;
  if (lhs < rhs) regime = Regime::bias_dominated;
  if (lhs > rhs) regime = Regime::variance_dominated;
  return finish(a.value(), alpha.value(), d, regime, gamma0);
}

double bias_leading(double curvature, const BandwidthPlan& bandwidth, const StepsizePlan& step,
                    std::uint64_t n) {
  const double den = bias_denominator(bandwidth.a(), step.xi());
  const double h = bandwidth.value_at(n);
  return h * h * curvature / (2.0 * den);
}

double rosenblatt_bias(double curvature, double h) { return 0.5 * h * h * curvature; }

double variance_leading(double f_x, const Kernel& k, const BandwidthPlan& bandwidth,
                        const StepsizePlan& step, std::uint64_t n) {
  const std::size_t d = k.dim();
  const double den = variance_denominator(bandwidth.a(), d, step.xi());
  const double h = bandwidth.value_at(n);
  return step.value_at(n) / std::pow(h, static_cast<double>(d)) * f_x * k.roughness() / den;
}

double rosenblatt_variance(double f_x, const Kernel& k, std::uint64_t n, double h) {
  return f_x * k.roughness() /
         (static_cast<double>(n) * std::pow(h, static_cast<double>(k.dim())));
}

double leading_mse(double curvature, double f_x, const Kernel& k, double a, double xi,
                   double gamma, double h) {
  const std::size_t d = k.dim();
  const double bias = h * h * curvature / (2.0 * bias_denominator(a, xi));
  const double var = gamma / std::pow(h, static_cast<double>(d)) * f_x * k.roughness() /
                     variance_denominator(a, d, xi);
  return bias * bias + var;
}

double rosenblatt_leading_mse(double curvature, double f_x, const Kernel& k, std::uint64_t n,
                              double h) {
  const double bias = rosenblatt_bias(curvature, h);
  return bias * bias + rosenblatt_variance(f_x, k, n, h);
}

OptimalPlan mse_optimal_plan(double f_x, double curvature, const Kernel& k) {
  pole(f_x > 0.0, "f(x) must be positive for the MSE-optimal plan");
  pole(curvature != 0.0 && std::isfinite(curvature),
       "curvature S(x) = 0: optimal bandwidth undefined");
  return optimal_plan(f_x * k.roughness(), curvature * curvature, k.dim());
}

OptimalPlan mise_optimal_plan(double curvature_sq_integral, const Kernel& k) {
  pole(curvature_sq_integral > 0.0 && std::isfinite(curvature_sq_integral),
       "integrated squared curvature must be positive");
  return optimal_plan(k.roughness(), curvature_sq_integral, k.dim());
}

MiseValue mise_leading(double curvature_sq_integral, const Kernel& k,
                       const BandwidthPlan& bandwidth, const StepsizePlan& step,
                       std::uint64_t n) {
  const std::size_t d = k.dim();
  const double a = bandwidth.a();
  const auto cls = classify_regime(a, step.alpha(), d);
  const double h = bandwidth.value_at(n);
  MiseValue out;
  out.branch = cls.regime;
  if (cls.regime != Regime::variance_dominated) {
    const double den = bias_denominator(a, step.xi());
    out.value += std::pow(h, 4.0) * curvature_sq_integral / (4.0 * den * den);
  }
  if (cls.regime != Regime::bias_dominated) {
    out.value += step.value_at(n) / std::pow(h, static_cast<double>(d)) * k.roughness() /
                 variance_denominator(a, d, step.xi());
  }
  return out;
}

double efficiency_ratio(std::size_t d) {
  if (d == 0) throw std::invalid_argument("dimension must be positive");
  const auto dd = static_cast<double>(d);
  const double p = 2.0 * dd + 4.0;
  // Assembled in logs: (d+2)^{2d+4} overflows quickly.
  const double log_inner = 4.0 * std::log(2.0) + p * std::log(dd + 2.0) - p * std::log(dd + 4.0);
  return std::exp(log_inner / (dd + 4.0));
}

CltParams clt_params(double c, double f_x, double curvature, const Kernel& k, double a,
                     const StepsizePlan& step) {
  pole(f_x > 0.0, "f(x) must be positive");
  pole(c >= 0.0, "c must be nonnegative");
  const std::size_t d = k.dim();
  const double xi = step.xi();
  CltParams p;
  p.c = c;
  p.variance = f_x * k.roughness() / variance_denominator(a, d, xi);
  if (c > 0.0) {
    const double den = bias_denominator(a, xi);
    p.bias_limit = curvature / (2.0 * den);
    if (std::isinf(c)) {
      p.degenerate = true;
      p.mean = 0.0;
    } else {
      p.mean = std::sqrt(c) * p.bias_limit;
    }
  }
  return p;
}

CiConstant ci_constant(double gamma0, double a, std::size_t d) {
  const double ad = a * static_cast<double>(d);
  pole(ad < 1.0, "a d must be below 1");
  pole(2.0 * gamma0 > 1.0 - ad, "2 gamma0 must exceed 1 - a d");
  CiConstant r;
  r.value = std::sqrt(gamma0 / (2.0 - (1.0 - ad) / gamma0));
  r.optimal_gamma0 = 1.0 - ad;
  r.optimal_value = std::sqrt(1.0 - ad);
  return r;
}

LimitInterval lil_limit_interval(double c1, double f_x, double curvature, const Kernel& k,
                                 double a, const StepsizePlan& step) {
  pole(f_x > 0.0, "f(x) must be positive");
  pole(c1 >= 0.0 && std::isfinite(c1), "c1 must be finite and nonnegative");
  const std::size_t d = k.dim();
  const double xi = step.xi();
  double center = 0.0;
  if (c1 > 0.0) center = std::sqrt(c1 / 2.0) * curvature / (2.0 * bias_denominator(a, xi));
  const double half = std::sqrt(f_x * k.roughness() / variance_denominator(a, d, xi));
  return {center - half, center + half};
}

LimitInterval rosenblatt_lil_interval(double f_x, const Kernel& k) {
  pole(f_x > 0.0, "f(x) must be positive");
  const double half = std::sqrt(f_x * k.roughness());
  return {-half, half};
}

}  // namespace rkde
