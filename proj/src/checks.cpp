#include "rkde/checks.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rkde/asymptotics.hpp"
#include "rkde/estimator.hpp"
#include "rkde/parallel.hpp"
#include "rkde/reference_tables.hpp"

namespace rkde {

namespace {

CheckOutcome within_abs(std::string name, double observed, double expected, double tol,
                        std::string detail = {}) {
  return {std::move(name), std::abs(observed - expected) <= tol, observed, expected,
          detail.empty() ? fmt::format("|diff| {:.3g} (tol {:.3g})", std::abs(observed - expected), tol)
                         : std::move(detail)};
}

CheckOutcome within_rel(std::string name, double observed, double expected, double tol,
                        std::string extra = {}) {
  const double rel = std::abs(observed / expected - 1.0);
  std::string detail = fmt::format("ratio {:.4f} (tol {:.0f}%)", observed / expected, 100.0 * tol);
  if (!extra.empty()) detail += "; " + extra;
  return {std::move(name), rel <= tol, observed, expected, std::move(detail)};
}

std::vector<Vector> check_grid(std::size_t d) {
  std::vector<Vector> pts;
  for (int i = 0; i < 50; ++i) {
    Vector x(static_cast<Eigen::Index>(d));
    x[0] = -2.5 + 5.0 * i / 49.0;
    if (d == 2) x[1] = -1.5 + 3.0 * ((7 * i) % 50) / 49.0;
    pts.push_back(x);
  }
  return pts;
}

}  // namespace

std::vector<CheckOutcome> check_recursion_closed_form(std::uint64_t n, std::uint64_t seed) {
  std::vector<CheckOutcome> out;
  const double a = 0.21;
  for (std::size_t d : {1u, 2u}) {
    const auto model = DensityModel::standard_gaussian(d);
    const Kernel k = gaussian_kernel(d);
    const auto bw = BandwidthPlan::power(a);
    const auto pts = check_grid(d);
    Philox rng(seed, d);
    const auto sample = model.sample(rng, n);
    const double dd = static_cast<double>(d);
    const std::pair<const char*, double> weights[] = {
        {"1", 0.0}, {"h^{d/2}", -a * dd / 2.0}, {"h^d", -a * dd}};
    for (const auto& [label, w_star] : weights) {
      const auto w = SequencePlan::power(1.0, w_star);
      RecursiveEstimator est(k, stepsize_from_weights(w_star, w), bw, pts);
      for (const auto& obs : sample) est.update(obs);
      const auto closed = weighted_closed_form(w, bw, k, sample, pts);
      double sup = 0.0;
      for (std::size_t i = 0; i < pts.size(); ++i)
        sup = std::max(sup, std::abs(est.value(i) - closed[i]));
      out.push_back({fmt::format("recursion = closed form (d={}, w={})", d, label), sup < 1e-12,
                     sup, 0.0, fmt::format("sup-norm {:.3g} over 50 points, n={}", sup, n)});
    }
  }
  return out;
}

std::vector<CheckOutcome> check_product_sum_limit(std::uint64_t n) {
  std::vector<CheckOutcome> out;
  const auto harmonic = StepsizePlan::power(1.0, 1.0);
  const auto v = SequencePlan::power(1.0, 0.79);
  const double q = normalized_product_sum(2.0, v, harmonic, n);
  out.push_back(within_rel(fmt::format("product-sum limit m=2 v*=0.79 xi=1 (n={})", n), q,
                           1.0 / 1.21, 0.01));
  for (double g0 : {1.0, 0.79, 0.6}) {
    const auto step = StepsizePlan::power(g0, 1.0);
    const double lhs = normalized_product_sum(1.0, SequencePlan::constant(), step, n);
    const double rhs = 1.0 - partial_product(step, n);
    out.push_back(within_abs(fmt::format("product-sum identity m=1 v=1 gamma0={}", g0), lhs, rhs,
                             1e-12));
  }
  return out;
}

std::vector<CheckOutcome> check_variance_oracle(std::uint64_t n, std::uint64_t replications,
                                                std::uint64_t seed, unsigned jobs) {
  std::vector<CheckOutcome> out;
  const double a = 0.21;
  const auto model = DensityModel::standard_gaussian(1);
  const Vector x = Vector::Zero(1);
  const Kernel k = gaussian_kernel(1);
  const auto bw = BandwidthPlan::power(a);
  const std::pair<const char*, StepsizePlan> steps[] = {
      {"gamma=1/n", StepsizePlan::from_weights(SequencePlan::constant())},
      {"gamma=(1-a)/n", StepsizePlan::power(1.0 - a, 1.0)}};
  for (const auto& [label, step] : steps) {
    EstimatorSetup setup{EstimatorKind::recursive, k, bw, step};
    const auto emp = empirical_moments({model, x, n, setup, replications, seed}, jobs);
    const double predicted = variance_leading(model.pdf(x), k, bw, step, n);
    const auto exact = exact_moments(model, x, n, setup);
    out.push_back(within_rel(
        fmt::format("variance oracle {} (n={}, N={})", label, n, replications), emp.variance,
        predicted, 0.10,
        fmt::format("exact finite-n variance / leading {:.4f}", exact.variance / predicted)));
  }
  return out;
}

std::vector<CheckOutcome> check_bias_oracle(std::uint64_t n, std::uint64_t replications,
                                            std::uint64_t seed, unsigned jobs) {
  const double a = 0.1;
  const auto model = DensityModel::standard_gaussian(1);
  const Vector x = Vector::Zero(1);
  const Kernel k = gaussian_kernel(1);
  const auto bw = BandwidthPlan::power(a);
  const auto step = StepsizePlan::from_weights(SequencePlan::constant());
  EstimatorSetup setup{EstimatorKind::recursive, k, bw, step};
  const auto emp = empirical_moments({model, x, n, setup, replications, seed}, jobs);
  const double predicted = bias_leading(curvature(model, k, x), bw, step, n);
  const auto exact = exact_moments(model, x, n, setup);
  return {within_rel(fmt::format("bias oracle gamma=1/n a=0.1 (n={}, N={})", n, replications),
                     emp.mean_bias, predicted, 0.15,
                     fmt::format("exact finite-n bias / leading {:.4f}",
                                 (exact.mean - model.pdf(x)) / predicted))};
}

std::vector<CheckOutcome> check_exact_moments(std::uint64_t n, std::uint64_t replications,
                                              std::uint64_t seed, unsigned jobs) {
  std::vector<CheckOutcome> out;
  const double a = 0.21;
  const auto model = DensityModel::standard_gaussian(1);
  const Vector x = Vector::Constant(1, 0.5);
  for (EstimatorKind kind : {EstimatorKind::rosenblatt, EstimatorKind::recursive}) {
    EstimatorSetup setup{kind, gaussian_kernel(1), BandwidthPlan::power(a), std::nullopt};
    if (kind == EstimatorKind::recursive) setup.step = StepsizePlan::power(1.0 - a, 1.0);
    const auto emp = empirical_moments({model, x, n, setup, replications, seed}, jobs);
    const auto exact = exact_moments(model, x, n, setup);
    const auto reps = static_cast<double>(replications);
    // Four standard errors for the mean; the sample variance of a nearly
    // normal statistic has relative standard error sqrt(2/(N-1)).
    const double mean_tol = 4.0 * std::sqrt(exact.variance / reps);
    const double var_tol = 4.0 * std::sqrt(2.0 / (reps - 1.0));
    out.push_back(within_abs(fmt::format("exact mean {} (n={})", to_string(kind), n), emp.mean,
                             exact.mean, mean_tol));
    out.push_back(within_rel(fmt::format("exact variance {} (n={})", to_string(kind), n),
                             emp.variance, exact.variance, var_tol));
  }
  return out;
}

std::vector<CheckOutcome> check_mise_oracle(std::uint64_t n, std::uint64_t replications,
                                            std::uint64_t seed, unsigned jobs) {
  const auto model = DensityModel::standard_gaussian(1);
  const Kernel k = gaussian_kernel(1);
  const auto plan = mise_optimal_plan(mise_functionals(model, k).value, k);
  const BandwidthPlan bw(plan.bandwidth_constant, plan.bandwidth_exponent);
  const auto step = StepsizePlan::power(plan.gamma0, 1.0);
  const double predicted = mise_leading(mise_functionals(model, k).value, k, bw, step, n).value;

  constexpr int kPoints = 241;
  const double lo = -6.0, dx = 12.0 / (kPoints - 1);
  std::vector<Vector> grid;
  for (int i = 0; i < kPoints; ++i) grid.push_back(Vector::Constant(1, lo + dx * i));
  auto trapezoid = [&](auto&& g) {
    double s = 0.0;
    for (int i = 0; i < kPoints; ++i) s += (i == 0 || i == kPoints - 1 ? 0.5 : 1.0) * g(i);
    return s * dx;
  };

  const auto ise = parallel_map<double>(replications, jobs, [&](std::uint64_t r) {
    Philox rng(seed, r);
    RecursiveEstimator est(k, step, bw, grid);
    Vector obs(1);
    for (std::uint64_t i = 0; i < n; ++i) {
      model.draw(rng, obs);
      est.update(obs);
    }
    return trapezoid([&](int i) {
      const double e = est.value(static_cast<std::size_t>(i)) - model.pdf(grid[i]);
      return e * e;
    });
  });
  double mise = 0.0;
  for (double v : ise) mise += v;
  mise /= static_cast<double>(replications);

  const EstimatorSetup setup{EstimatorKind::recursive, k, bw, step};
  const double exact = trapezoid([&](int i) {
    const auto m = exact_moments(model, grid[i], n, setup);
    const double b = m.mean - model.pdf(grid[i]);
    return b * b + m.variance;
  });
  return {within_rel(fmt::format("MISE oracle, optimal plan (n={}, N={})", n, replications), mise,
                     predicted, 0.10,
                     fmt::format("exact finite-n MISE / leading {:.4f}", exact / predicted))};
}

std::vector<CheckOutcome> check_clt(std::uint64_t n, std::uint64_t replications,
                                    std::uint64_t seed, unsigned jobs) {
  const double a = 0.21;
  const auto model = DensityModel::standard_gaussian(1);
  const Vector x = Vector::Zero(1);
  const Kernel k = gaussian_kernel(1);
  const auto bw = BandwidthPlan::power(a);
  const auto step = StepsizePlan::power(1.0 - a, 1.0);
  EstimatorSetup setup{EstimatorKind::recursive, k, bw, step};
  const auto rep = clt_empirical_check({model, x, n, setup, replications, seed}, jobs);

  // Where the exact finite-n law of the standardized statistic sits.
  const auto exact = exact_moments(model, x, n, setup);
  const double h = bw.value_at(n);
  const double rate = std::sqrt(h / step.value_at(n));
  const double sd = std::sqrt(rep.clt_variance);
  const double c_n = std::pow(h, 5.0) / step.value_at(n);
  return {{fmt::format("CLT sup-CDF distance (n={}, N={})", n, replications), rep.passed,
           rep.ks_distance, rep.critical_value,
           fmt::format("standardized mean {:.3f} var {:.3f}; exact mean {:.3f} var {:.3f}; "
                       "h^5/gamma = {:.3f}",
                       rep.standardized_mean, rep.standardized_variance,
                       rate * (exact.mean - model.pdf(x)) / sd,
                       rate * rate * exact.variance / rep.clt_variance, c_n)}};
}

std::vector<CheckOutcome> check_closed_form_constants() {
  std::vector<CheckOutcome> out;

  // Optimal Rosenblatt MSE over optimal recursive MSE, composed from the two
  // leading MSE expressions.  The Rosenblatt optimum sits at
  // h^{d+4} = d f R / (S^2 n).
  {
    const std::size_t d = 1;
    const auto model = DensityModel::standard_gaussian(d);
    const Kernel k = gaussian_kernel(d);
    const Vector x = Vector::Zero(1);
    const double f = model.pdf(x);
    const double s = curvature(model, k, x);
    const std::uint64_t n = 1000;
    const double dd = static_cast<double>(d);
    const double h_r =
        std::pow(dd * f * k.roughness() / (s * s * static_cast<double>(n)), 1.0 / (dd + 4.0));
    const double mse_r = rosenblatt_leading_mse(s, f, k, n, h_r);
    const auto plan = mse_optimal_plan(f, s, k);
    const double mse_rec = leading_mse(s, f, k, plan.bandwidth_exponent, 1.0 / plan.gamma0,
                                       plan.gamma0 / static_cast<double>(n), plan.bandwidth_at(n));
    out.push_back(within_abs("efficiency ratio d=1 vs composed MSE ratio", efficiency_ratio(1),
                             mse_r / mse_rec, 1e-10));
  }
  {
    std::vector<double> rho;
    for (std::size_t d = 1; d <= 50; ++d) rho.push_back(efficiency_ratio(d));
    const bool below_one = std::all_of(rho.begin(), rho.end(), [](double r) { return r < 1.0; });
    const auto argmin = static_cast<std::size_t>(std::min_element(rho.begin(), rho.end()) - rho.begin());
    bool shape = argmin > 0 && argmin + 1 < rho.size();
    for (std::size_t i = 1; i < rho.size(); ++i)
      shape = shape && (i <= argmin ? rho[i] < rho[i - 1] : rho[i] > rho[i - 1]);
    out.push_back({"efficiency ratio < 1, decreasing then increasing (d=1..50)", below_one && shape,
                   rho[argmin], static_cast<double>(argmin + 1),
                   fmt::format("min {:.5f} at d={}; rho(50)={:.5f}", rho[argmin], argmin + 1,
                               rho.back())});
  }
  for (const auto& [a, d] : {std::pair{0.21, std::size_t{1}}, std::pair{0.17, std::size_t{2}},
                             std::pair{0.1, std::size_t{3}}}) {
    const double g_opt = 1.0 - a * static_cast<double>(d);
    const double c_opt = ci_constant(g_opt, a, d).value;
    out.push_back(within_abs(fmt::format("CI constant minimum a={} d={}", a, d), c_opt,
                             std::sqrt(g_opt), 1e-12));
    bool strict = true;
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 250; ++i) {
      const double g = g_opt * (0.55 + 0.01 * i);
      if (std::abs(g - g_opt) < 1e-9) continue;
      const double c = ci_constant(g, a, d).value;
      worst = std::min(worst, c - c_opt);
      strict = strict && c > c_opt;
    }
    out.push_back({fmt::format("CI constant strict minimum on grid a={} d={}", a, d), strict, worst,
                   0.0, fmt::format("smallest excess over the minimum {:.3g}", worst)});
  }
  return out;
}

std::vector<CheckOutcome> check_mse_first_order() {
  std::vector<CheckOutcome> out;
  for (std::size_t d : {1u, 2u}) {
    const auto model = DensityModel::standard_gaussian(d);
    const Kernel k = gaussian_kernel(d);
    const Vector x = Vector::Zero(static_cast<Eigen::Index>(d));
    const double f = model.pdf(x);
    const double s = curvature(model, k, x);
    const auto plan = mse_optimal_plan(f, s, k);
    const std::uint64_t n = 1000;
    const double gamma = plan.gamma0 / static_cast<double>(n);
    auto mse = [&](double factor) {
      return leading_mse(s, f, k, plan.bandwidth_exponent, 1.0 / plan.gamma0, gamma,
                         factor * plan.bandwidth_at(n));
    };
    const double m0 = mse(1.0), lo = mse(0.99), hi = mse(1.01);
    out.push_back({fmt::format("MSE-optimal bandwidth first-order condition d={}", d),
                   lo > m0 && hi > m0, std::min(lo, hi) - m0, 0.0,
                   fmt::format("MSE {:.6g}; at -1% {:.6g}; at +1% {:.6g}", m0, lo, hi)});
  }
  return out;
}

std::vector<CheckOutcome> compare_with_reference(const std::vector<TableRow>& rows,
                                                 double level_tol, double length_tol) {
  if (rows.empty()) return {};
  const int id = rows.front().table;
  std::size_t level_fail = 0, length_fail = 0;
  double worst_level = 0.0, worst_length = 0.0;
  std::ostringstream level_cells, length_cells;
  for (const auto& r : rows) {
    const auto ref = reference_cell(r);
    const double dl = std::abs(r.result.empirical_level - ref.level);
    const double dr = std::abs(r.result.avg_length / ref.length - 1.0);
    worst_level = std::max(worst_level, dl);
    worst_length = std::max(worst_length, dr);
    const auto tag = fmt::format(" [a={} {} x{} n={}]", r.a, to_string(r.kind), r.x_index, r.n);
    if (dl > level_tol) {
      ++level_fail;
      level_cells << tag;
    }
    if (dr > length_tol) {
      ++length_fail;
      length_cells << tag;
    }
  }

  // Pair each recursive row with its Rosenblatt counterpart.
  std::size_t len_order_fail = 0, lvl_order_fail = 0;
  std::ostringstream order_cells;
  for (const auto& r : rows) {
    if (r.kind != EstimatorKind::recursive) continue;
    const auto base = std::find_if(rows.begin(), rows.end(), [&](const TableRow& o) {
      return o.kind == EstimatorKind::rosenblatt && o.a == r.a && o.x_index == r.x_index &&
             o.n == r.n;
    });
    if (base == rows.end()) continue;
    if (!(r.result.avg_length < base->result.avg_length)) {
      ++len_order_fail;
      order_cells << fmt::format(" [length a={} x{} n={}]", r.a, r.x_index, r.n);
    }
    if (id <= 2 && !(r.result.empirical_level >= base->result.empirical_level)) {
      ++lvl_order_fail;
      order_cells << fmt::format(" [level a={} x{} n={}]", r.a, r.x_index, r.n);
    }
  }

  const auto cells = rows.size();
  std::vector<CheckOutcome> out;
  out.push_back({fmt::format("table {} coverage within {:.1f}pp", id, 100.0 * level_tol),
                 level_fail == 0, worst_level, level_tol,
                 fmt::format("{}/{} cells outside; worst {:.2f}pp{}", level_fail, cells,
                             100.0 * worst_level, level_cells.str())});
  out.push_back({fmt::format("table {} length within {:.0f}%", id, 100.0 * length_tol),
                 length_fail == 0, worst_length, length_tol,
                 fmt::format("{}/{} cells outside; worst {:.2f}%{}", length_fail, cells,
                             100.0 * worst_length, length_cells.str())});
  out.push_back({fmt::format("table {} orderings", id), len_order_fail + lvl_order_fail == 0,
                 static_cast<double>(len_order_fail + lvl_order_fail), 0.0,
                 fmt::format("{} length and {} coverage ordering violations{}", len_order_fail,
                             lvl_order_fail, order_cells.str())});
  return out;
}

std::vector<CheckOutcome> check_table_reproduction(int table_id, std::uint64_t replications,
                                                   std::uint64_t seed, double level_tol,
                                                   double length_tol, unsigned jobs) {
  return compare_with_reference(run_table(table_id, seed, replications, jobs), level_tol,
                                length_tol);
}

std::vector<CheckOutcome> check_determinism(int table_id, std::uint64_t replications,
                                            std::uint64_t seed, unsigned jobs) {
  auto csv = [&](unsigned j) {
    std::ostringstream os;
    write_table_csv(os, run_table(table_id, seed, replications, j), seed);
    return os.str();
  };
  const std::string serial = csv(1);
  const std::string parallel = csv(jobs);
  return {{fmt::format("table {} CSV identical for jobs=1 and jobs={}", table_id, jobs),
           serial == parallel, static_cast<double>(parallel.size()),
           static_cast<double>(serial.size()), fmt::format("{} bytes", serial.size())}};
}

CheckSuite parse_check_suite(const std::string& text) {
  if (text == "fast") return CheckSuite::fast;
  if (text == "full") return CheckSuite::full;
  throw std::invalid_argument("unknown check suite '" + text + "' (fast|full)");
}

std::vector<CheckOutcome> run_check_suite(CheckSuite suite, std::uint64_t seed, unsigned jobs) {
  std::vector<CheckOutcome> out;
  auto add = [&](std::vector<CheckOutcome> v) {
    out.insert(out.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  };
  add(check_recursion_closed_form(1000, seed));
  add(check_product_sum_limit(1'000'000));
  add(check_closed_form_constants());
  add(check_mse_first_order());
  add(check_exact_moments(200, 4000, seed, jobs));
  add(check_determinism(1, 200, seed, 4));
  if (suite == CheckSuite::full) {
    add(check_exact_moments(10'000, 2000, seed, jobs));
    add(check_variance_oracle(10'000, 2000, seed, jobs));
    add(check_bias_oracle(100'000, 200, seed, jobs));
    add(check_mise_oracle(10'000, 200, seed, jobs));
    add(check_clt(10'000, 2000, seed, jobs));
  }
  return out;
}

}  // namespace rkde
