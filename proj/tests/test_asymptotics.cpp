#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rkde/asymptotics.hpp"

using namespace rkde;
using doctest::Approx;

namespace {

const double kPhi0 = 1.0 / std::sqrt(2.0 * std::numbers::pi);
const double kR1 = 1.0 / (2.0 * std::sqrt(std::numbers::pi));

}  // namespace

TEST_CASE("leading bias") {
  const auto k = gaussian_kernel(1);
  const auto ww = StepsizePlan::power(1.0, 1.0);
  const auto bw = BandwidthPlan::power(0.21);
  const double h = bw.value_at(1000);
  CHECK(bias_leading(-kPhi0, bw, ww, 1000) == Approx(-0.34392 * h * h).epsilon(1e-4));
  CHECK(bias_leading(-kPhi0, bw, ww, 1000) == Approx(-kPhi0 * h * h / 1.16).epsilon(1e-14));
  // xi = 0 (alpha < 1): the bias matches the nonrecursive one.
  const auto slow = StepsizePlan::power(1.0, 0.8);
  CHECK(slow.xi() == 0.0);
  CHECK(bias_leading(-kPhi0, bw, slow, 1000) == Approx(rosenblatt_bias(-kPhi0, h)).epsilon(1e-15));
  CHECK(rosenblatt_bias(2.0, 0.5) == 0.25);
  // Pole at 1 - 2 a xi = 0: gamma0 = 2a.
  CHECK_THROWS_AS(bias_leading(1.0, BandwidthPlan::power(0.25), StepsizePlan::power(0.5, 1.0), 10),
                  std::domain_error);
}

TEST_CASE("bias and variance ratios at a = 1/(d+4), gamma_n = 1/n") {
  for (std::size_t d = 1; d <= 4; ++d) {
    const auto dd = static_cast<double>(d);
    const auto k = gaussian_kernel(d);
    const auto bw = BandwidthPlan::power(1.0 / (dd + 4.0));
    const auto ww = StepsizePlan::power(1.0, 1.0);
    const std::uint64_t n = 500;
    const double h = bw.value_at(n);
    CHECK(bias_leading(1.0, bw, ww, n) / rosenblatt_bias(1.0, h) ==
          Approx((dd + 4.0) / (dd + 2.0)).epsilon(1e-13));
    CHECK(variance_leading(0.3, k, bw, ww, n) / rosenblatt_variance(0.3, k, n, h) ==
          Approx((dd + 4.0) / (2.0 * dd + 4.0)).epsilon(1e-13));
  }
}

TEST_CASE("leading variance for the two unit-gain stepsizes") {
  const auto k = gaussian_kernel(1);
  const auto bw = BandwidthPlan::power(0.21);
  const std::uint64_t n = 10'000;
  const double h = bw.value_at(n);
  const double fr = kPhi0 * kR1;
  CHECK(variance_leading(kPhi0, k, bw, StepsizePlan::power(1.0, 1.0), n) ==
        Approx(fr / (n * h * 1.21)).epsilon(1e-13));
  CHECK(variance_leading(kPhi0, k, bw, StepsizePlan::power(0.79, 1.0), n) ==
        Approx(0.79 * fr / (n * h)).epsilon(1e-13));
  CHECK(rosenblatt_variance(kPhi0, k, n, h) == Approx(fr / (n * h)).epsilon(1e-14));
  CHECK_THROWS_AS(variance_leading(kPhi0, k, bw, StepsizePlan::power(0.3, 1.0), n), std::domain_error);
}

TEST_CASE("leading MSE combines squared bias and variance") {
  const auto k = gaussian_kernel(2);
  const double h = 0.4, gamma = 0.01;
  const double a = 0.17;
  const double bias = h * h * 0.7 / (2.0 * (1.0 - 2.0 * a));
  const double var = gamma / (h * h) * 0.2 * k.roughness() / (2.0 - (1.0 - 2.0 * a));
  CHECK(leading_mse(0.7, 0.2, k, a, 1.0, gamma, h) == Approx(bias * bias + var).epsilon(1e-14));
  CHECK(rosenblatt_leading_mse(0.7, 0.2, k, 100, h) ==
        Approx(std::pow(0.5 * h * h * 0.7, 2) + 0.2 * k.roughness() / (100 * h * h)).epsilon(1e-14));
}

TEST_CASE("regime classification") {
  CHECK(classify_regime(0.2, 1.0, 1).regime == Regime::balanced);
  CHECK(classify_regime(0.21, 1.0, 1).regime == Regime::variance_dominated);
  CHECK(classify_regime(0.19, 1.0, 1).regime == Regime::bias_dominated);
  CHECK(classify_regime(0.17, 1.0, 2).regime == Regime::variance_dominated);
  CHECK(classify_regime(0.18, 0.9, 1).regime == Regime::balanced);

  const auto v = classify_regime(0.21, 1.0, 1);
  CHECK(v.bias_negligible);
  CHECK_FALSE(v.variance_negligible);
  CHECK(v.variance_expansion);
  CHECK_FALSE(v.bias_expansion);
  CHECK_FALSE(v.stepsize_condition.has_value());

  const auto g = classify_regime(0.21, 1.0, 1, 1.0);
  CHECK(*g.stepsize_condition);
  CHECK(*g.both_expansions_valid);
  CHECK(g.bias_expansion);
  const auto low = classify_regime(0.21, 1.0, 1, 0.41);
  CHECK(*low.stepsize_condition);
  CHECK_FALSE(*low.both_expansions_valid);
  CHECK_FALSE(*classify_regime(0.21, 1.0, 1, 0.39).stepsize_condition);

  CHECK_THROWS_AS(classify_regime(0.6, 1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(classify_regime(0.1, 0.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(classify_regime(0.1, 1.0, 0), std::invalid_argument);
}

TEST_CASE("exact regime boundary with rational inputs") {
  CHECK(classify_regime(Ratio{1, 5}, Ratio{1, 1}, 1).regime == Regime::balanced);
  CHECK(classify_regime(Ratio{1, 6}, Ratio{1, 1}, 2).regime == Regime::balanced);
  CHECK(classify_regime(Ratio{9, 50}, Ratio{9, 10}, 1).regime == Regime::balanced);
  CHECK(classify_regime(Ratio{1'000'000'001, 5'000'000'000}, Ratio{1, 1}, 1).regime ==
        Regime::variance_dominated);
  CHECK(classify_regime(Ratio{999'999'999, 5'000'000'000}, Ratio{1, 1}, 1).regime ==
        Regime::bias_dominated);
  CHECK_THROWS_AS(classify_regime(Ratio{1, 0}, Ratio{1, 1}, 1), std::invalid_argument);
}

TEST_CASE("MSE-optimal plan for N(0,1) at 0") {
  const auto k = gaussian_kernel(1);
  const auto plan = mse_optimal_plan(kPhi0, -kPhi0, k);
  CHECK(plan.gamma0 == 1.0);
  CHECK(plan.bandwidth_exponent == Approx(0.2));
  CHECK(plan.rate_exponent == Approx(0.8));
  CHECK(plan.bandwidth_constant == Approx(0.7334).epsilon(1e-4));

  // Brute-force minimization of the leading MSE over the bandwidth constant.
  const std::uint64_t n = 1000;
  const double gamma = 1.0 / static_cast<double>(n);
  double best_c = 0.0, best = 1e300;
  for (int i = 1; i <= 20000; ++i) {
    const double c = 1e-4 * i;
    const double m = leading_mse(-kPhi0, kPhi0, k, 0.2, 1.0, gamma, c * std::pow(gamma, 0.2));
    if (m < best) {
      best = m;
      best_c = c;
    }
  }
  CHECK(best_c == Approx(plan.bandwidth_constant).epsilon(2e-4));
  CHECK(best == Approx(plan.error_at(n)).epsilon(1e-6));
  CHECK(plan.bandwidth_at(n) == Approx(plan.bandwidth_constant * std::pow(1000.0, -0.2)));

  CHECK_THROWS_AS(mse_optimal_plan(kPhi0, 0.0, k), std::domain_error);
  CHECK_THROWS_AS(mse_optimal_plan(0.0, -1.0, k), std::domain_error);
}

TEST_CASE("MSE-optimal plan in d = 2 minimizes the leading MSE") {
  const auto k = gaussian_kernel(2);
  const auto plan = mse_optimal_plan(0.1, -0.2, k);
  const double gamma = 1e-3;
  const double at = leading_mse(-0.2, 0.1, k, 1.0 / 6.0, 1.0, gamma,
                                plan.bandwidth_constant * std::pow(gamma, 1.0 / 6.0));
  CHECK(at == Approx(plan.error_at(1000)).epsilon(1e-10));
  for (double f : {0.97, 1.03}) {
    const double off = leading_mse(-0.2, 0.1, k, 1.0 / 6.0, 1.0, gamma,
                                   f * plan.bandwidth_constant * std::pow(gamma, 1.0 / 6.0));
    CHECK(off > at);
  }
}

TEST_CASE("MISE plan and branches") {
  const auto k = gaussian_kernel(1);
  const double i2 = 3.0 / (8.0 * std::sqrt(std::numbers::pi));
  const auto plan = mise_optimal_plan(i2, k);
  const auto ww = StepsizePlan::power(1.0, 1.0);
  const BandwidthPlan opt(plan.bandwidth_constant, 0.2);
  const auto at = mise_leading(i2, k, opt, ww, 1000);
  CHECK(at.branch == Regime::balanced);
  CHECK(at.value == Approx(plan.error_at(1000)).epsilon(1e-10));

  const auto bias_only = mise_leading(i2, k, BandwidthPlan::power(0.15), ww, 1000);
  CHECK(bias_only.branch == Regime::bias_dominated);
  const double h = std::pow(1000.0, -0.15);
  CHECK(bias_only.value == Approx(std::pow(h, 4) * i2 / (4.0 * 0.7 * 0.7)).epsilon(1e-13));

  const auto var_only = mise_leading(i2, k, BandwidthPlan::power(0.25), ww, 1000);
  CHECK(var_only.branch == Regime::variance_dominated);
  const double hv = std::pow(1000.0, -0.25);
  CHECK(var_only.value == Approx(1e-3 / hv * kR1 / 1.25).epsilon(1e-13));

  CHECK_THROWS_AS(mise_optimal_plan(0.0, k), std::domain_error);
}

TEST_CASE("efficiency ratio") {
  CHECK(efficiency_ratio(1) == Approx(0.94320).epsilon(1e-5));
  CHECK(efficiency_ratio(1) == Approx(std::pow(16.0 * 729.0 / 15625.0, 0.2)).epsilon(1e-14));
  std::size_t argmin = 1;
  for (std::size_t d = 1; d <= 50; ++d) {
    const double r = efficiency_ratio(d);
    CHECK(r < 1.0);
    if (r < efficiency_ratio(argmin)) argmin = d;
    if (d < 4) CHECK(efficiency_ratio(d + 1) < r);
    if (d >= 4) CHECK(efficiency_ratio(d + 1) > r);
  }
  CHECK(argmin == 4);
  CHECK(efficiency_ratio(4) == Approx(0.91856).epsilon(1e-5));
  CHECK(efficiency_ratio(10'000) == Approx(1.0).epsilon(1e-3));
  CHECK_THROWS_AS(efficiency_ratio(0), std::invalid_argument);
}

TEST_CASE("limit-law parameters") {
  const auto k = gaussian_kernel(1);
  const double a = 0.21;
  const auto step = StepsizePlan::power(1.0 - a, 1.0);
  const auto p0 = clt_params(0.0, kPhi0, -kPhi0, k, a, step);
  CHECK(p0.mean == 0.0);
  CHECK(p0.variance == Approx(0.112540).epsilon(1e-5));
  CHECK_FALSE(p0.degenerate);

  const auto ww = StepsizePlan::power(1.0, 1.0);
  const auto p = clt_params(0.8, kPhi0, -kPhi0, k, 0.2, ww);
  CHECK(p.mean == Approx(std::sqrt(0.8) * (-kPhi0) / (2.0 * 0.6)).epsilon(1e-14));
  CHECK(p.variance == Approx(kPhi0 * kR1 / 1.2).epsilon(1e-14));

  const auto inf = clt_params(std::numeric_limits<double>::infinity(), kPhi0, -kPhi0, k, 0.2, ww);
  CHECK(inf.degenerate);
  CHECK(inf.bias_limit == Approx(-kPhi0 / 1.2).epsilon(1e-14));
  CHECK_THROWS_AS(clt_params(-1.0, kPhi0, 1.0, k, 0.2, ww), std::domain_error);
}

TEST_CASE("confidence-interval constant") {
  for (double ad : {0.21, 0.34, 0.5}) {
    const auto one = ci_constant(1.0, ad, 1);
    CHECK(one.value == Approx(1.0 / std::sqrt(1.0 + ad)).epsilon(1e-14));
    CHECK(ci_constant(1.0 - ad, ad, 1).value == Approx(std::sqrt(1.0 - ad)).epsilon(1e-14));
    CHECK(one.optimal_gamma0 == Approx(1.0 - ad));
    CHECK(one.optimal_value < one.value);
  }
  // d = 2 uses a d.
  CHECK(ci_constant(1.0, 0.17, 2).value == Approx(1.0 / std::sqrt(1.34)).epsilon(1e-14));
  CHECK_THROWS_AS(ci_constant(1.0, 0.5, 2), std::domain_error);
  CHECK_THROWS_AS(ci_constant(0.39, 0.21, 1), std::domain_error);
  CHECK_NOTHROW(ci_constant(0.396, 0.21, 1));
}

TEST_CASE("recursive variance is C^2 times the nonrecursive variance") {
  // gamma_n = gamma0 / n: gamma_n h^{-d} f R / (2 - (1-ad) xi) = (C^2 / n) h^{-d} f R.
  const auto k = gaussian_kernel(1);
  const double a = 0.21;
  for (double g0 : {0.6, 0.79, 1.0, 2.0}) {
    const auto step = StepsizePlan::power(g0, 1.0);
    const auto bw = BandwidthPlan::power(a);
    const std::uint64_t n = 400;
    const double c = ci_constant(g0, a, 1).value;
    CHECK(variance_leading(kPhi0, k, bw, step, n) ==
          Approx(c * c * rosenblatt_variance(kPhi0, k, n, bw.value_at(n))).epsilon(1e-13));
  }
}

TEST_CASE("iterated-logarithm limit intervals") {
  const auto k = gaussian_kernel(1);
  const auto step = StepsizePlan::power(1.0, 1.0);
  const auto r = rosenblatt_lil_interval(kPhi0, k);
  CHECK(r.hi == Approx(std::sqrt(kPhi0 * kR1)));
  CHECK(r.lo == -r.hi);
  const auto l0 = lil_limit_interval(0.0, kPhi0, -kPhi0, k, 0.21, step);
  CHECK(l0.hi == Approx(std::sqrt(kPhi0 * kR1 / 1.21)).epsilon(1e-14));
  CHECK(l0.lo == -l0.hi);
  const auto l1 = lil_limit_interval(2.0, kPhi0, -kPhi0, k, 0.21, step);
  CHECK(0.5 * (l1.lo + l1.hi) == Approx(-kPhi0 / (2.0 * 0.58)).epsilon(1e-14));
  CHECK(l1.hi - l1.lo == Approx(l0.hi - l0.lo).epsilon(1e-14));
}
