#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "rkde/asymptotics.hpp"
#include "rkde/mc.hpp"
#include "rkde/reference_tables.hpp"

using namespace rkde;
using doctest::Approx;

namespace {

CellConfig cell(double x, std::uint64_t n, double a, EstimatorKind kind, std::uint64_t reps,
                std::uint64_t seed = 9) {
  CellConfig c{DensityModel::standard_gaussian(1), Vector::Constant(1, x), n, a, kind, reps, seed, 1.96};
  return c;
}

}  // namespace

TEST_CASE("interval construction") {
  const auto k = gaussian_kernel(1);
  const double h = std::pow(100.0, -0.21);
  const auto iv = build_interval(0.4, 1.0, k, 100, h, 1, 1.96);
  const double half = 1.96 * std::sqrt(0.4 * k.roughness() / (100.0 * h));
  CHECK(iv.lo == Approx(0.4 - half).epsilon(1e-14));
  CHECK(iv.length() == Approx(2.0 * half).epsilon(1e-14));
  CHECK(iv.contains(0.4));
  const auto rec = build_interval(0.4, std::sqrt(0.79), k, 100, h, 1, 1.96);
  CHECK(rec.length() / iv.length() == Approx(std::sqrt(0.79)).epsilon(1e-14));
  const auto zero = build_interval(0.0, 1.0, k, 100, h, 1, 1.96);
  CHECK(zero.lo == 0.0);
  CHECK(zero.hi == 0.0);
  CHECK_THROWS_AS(build_interval(-0.1, 1.0, k, 100, h, 1, 1.96), std::invalid_argument);
  CHECK_THROWS_AS(build_interval(0.1, 1.0, k, 100, h, 1, 0.0), std::invalid_argument);
}

TEST_CASE("cell setup follows the table conventions") {
  auto c = cell(0.0, 50, 0.21, EstimatorKind::recursive, 10);
  const auto s = cell_setup(c);
  REQUIRE(s.step);
  CHECK(s.step->gamma0() == Approx(0.79));
  CHECK(cell_ci_factor(c) == Approx(std::sqrt(0.79)).epsilon(1e-14));
  c.kind = EstimatorKind::rosenblatt;
  CHECK(cell_ci_factor(c) == 1.0);
  CHECK_FALSE(cell_setup(c).step);
  const auto t3 = table_design(3);
  CellConfig c2{t3.model, t3.points[1], 100, 0.17, EstimatorKind::recursive, 10, 1, 1.96};
  CHECK(cell_ci_factor(c2) == Approx(std::sqrt(0.66)).epsilon(1e-14));
}

TEST_CASE("a single replication gives a 0/1 level and zero stderr") {
  const auto r = run_cell(cell(0.0, 50, 0.21, EstimatorKind::recursive, 1), 1);
  CHECK(r.replications == 1);
  CHECK((r.empirical_level == 0.0 || r.empirical_level == 1.0));
  CHECK(r.stderr_level == 0.0);
  CHECK(r.avg_length > 0.0);
}

TEST_CASE("stderr is the binomial standard error") {
  const auto r = run_cell(cell(0.5, 100, 0.21, EstimatorKind::rosenblatt, 400), 1);
  CHECK(r.stderr_level == Approx(std::sqrt(r.empirical_level * (1 - r.empirical_level) / 400.0)));
  CHECK_THROWS_AS(run_cell(cell(0.5, 100, 0.21, EstimatorKind::rosenblatt, 0), 1), std::invalid_argument);
}

TEST_CASE("cell results do not depend on the thread count") {
  for (auto kind : {EstimatorKind::rosenblatt, EstimatorKind::recursive}) {
    const auto c = cell(0.5, 100, 0.23, kind, 333);
    const auto one = run_cell(c, 1);
    const auto four = run_cell(c, 4);
    CHECK(one.empirical_level == four.empirical_level);
    CHECK(one.avg_length == four.avg_length);
  }
}

TEST_CASE("table 1 grid and CSV layout") {
  const auto rows = run_table(1, 5, 20, 2);
  REQUIRE(rows.size() == 36);
  CHECK(rows.front().a == 0.21);
  CHECK(rows.front().kind == EstimatorKind::rosenblatt);
  CHECK(rows[9].kind == EstimatorKind::recursive);
  CHECK(rows[1].n == 100);
  CHECK(rows[3].x_index == 1);
  CHECK(rows[18].a == 0.23);

  std::ostringstream out;
  write_table_csv(out, rows, 5, {{"hello"}});
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "# hello");
  std::getline(in, line);
  CHECK(line == "table,density,x,a,n,estimator,empirical_level,stderr,avg_length,N,seed,kernel_id");
  int data = 0;
  while (std::getline(in, line)) ++data;
  CHECK(data == 36);

  std::ostringstream a, b;
  write_table_csv(a, rows, 5);
  write_table_csv(b, run_table(1, 5, 20, 1), 5);
  CHECK(a.str() == b.str());
}

TEST_CASE("two-dimensional points are written with ';'") {
  auto rows = run_table(3, 1, 2, 1);
  REQUIRE(rows.size() == 54);
  std::ostringstream out;
  write_table_csv(out, {rows[4]}, 1);
  CHECK(out.str().find(",0.5;0.5,") != std::string::npos);
}

TEST_CASE("simulated moments agree with the exact finite-n moments") {
  const auto model = DensityModel::standard_gaussian(1);
  const Vector x = Vector::Constant(1, 0.5);
  for (auto kind : {EstimatorKind::rosenblatt, EstimatorKind::recursive}) {
    const auto setup = cell_setup(cell(0.5, 50, 0.21, kind, 1));
    const auto exact = exact_moments(model, x, 50, setup);
    const auto emp = empirical_moments({model, x, 50, setup, 3000, 21}, 1);
    const double se = std::sqrt(exact.variance / 3000.0);
    CHECK(std::abs(emp.mean - exact.mean) < 4.0 * se);
    CHECK(std::abs(emp.variance / exact.variance - 1.0) < 4.0 * std::sqrt(2.0 / 2999.0));
    CHECK(emp.mean_bias == Approx(emp.mean - model.pdf(x)).epsilon(1e-12));
  }
}

TEST_CASE("exact moments for n = 1 are gamma_1 times the single-kernel moments") {
  const auto model = DensityModel::standard_gaussian(1);
  const Vector x = Vector::Zero(1);
  const auto setup = cell_setup(cell(0.0, 1, 0.21, EstimatorKind::recursive, 1));
  const auto m = exact_moments(model, x, 1, setup);
  // h_1 = 1: E Z = phi_{sqrt 2}(0), E Z^2 = R phi_{sqrt 1.5}(0).
  const double ez = 1.0 / std::sqrt(2.0 * std::numbers::pi * 2.0);
  const double ez2 = 1.0 / (2.0 * std::sqrt(std::numbers::pi)) / std::sqrt(2.0 * std::numbers::pi * 1.5);
  // f_0 = 0 and gamma_1 = 1 - a.
  CHECK(m.mean == Approx(0.79 * ez).epsilon(1e-14));
  CHECK(m.variance == Approx(0.79 * 0.79 * (ez2 - ez * ez)).epsilon(1e-13));
  const auto ros = exact_moments(model, x, 1, cell_setup(cell(0.0, 1, 0.21, EstimatorKind::rosenblatt, 1)));
  CHECK(ros.mean == Approx(ez).epsilon(1e-14));
  CHECK(ros.variance == Approx(ez2 - ez * ez).epsilon(1e-13));
}

TEST_CASE("recursive interval is shorter by about sqrt(1 - a)") {
  for (double x : {0.5, 1.0}) {
    const auto ros = run_cell(cell(x, 200, 0.21, EstimatorKind::rosenblatt, 2000, 3), 1);
    const auto rec = run_cell(cell(x, 200, 0.21, EstimatorKind::recursive, 2000, 3), 1);
    CHECK(rec.avg_length < ros.avg_length);
    CHECK(rec.avg_length / ros.avg_length == Approx(std::sqrt(0.79)).epsilon(0.02));
  }
}

TEST_CASE("KS distance") {
  CHECK(ks_distance_normal({0.0}) == Approx(0.5));
  CHECK_THROWS_AS(ks_distance_normal({}), std::invalid_argument);
  std::vector<double> q;
  for (int i = 1; i < 1000; ++i) {
    // Normal quantiles by bisection on erfc.
    double lo = -10, hi = 10;
    const double p = i / 1000.0;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      (0.5 * std::erfc(-mid / std::sqrt(2.0)) < p ? lo : hi) = mid;
    }
    q.push_back(lo);
  }
  CHECK(ks_distance_normal(q) < 2e-3);
}

TEST_CASE("CLT check detects a mis-scaled variance") {
  const auto model = DensityModel::standard_gaussian(1);
  const double a = 0.3;
  EstimatorSetup setup{EstimatorKind::recursive, gaussian_kernel(1), BandwidthPlan::power(a),
                       StepsizePlan::power(1.0 - a, 1.0)};
  const MomentConfig cfg{model, Vector::Constant(1, 0.5), 2000, setup, 1000, 17};
  const auto bad = clt_empirical_check(cfg, 1, 2.0);
  CHECK_FALSE(bad.passed);
  CHECK(bad.critical_value == Approx(1.63 / std::sqrt(1000.0)));
  CHECK(bad.standardized_variance < 0.75);
  CHECK_FALSE(bad.slow_convergence);

  EstimatorSetup ros = setup;
  ros.kind = EstimatorKind::rosenblatt;
  CHECK_THROWS_AS(clt_empirical_check({model, Vector::Zero(1), 100, ros, 10, 1}, 1), std::invalid_argument);
  EstimatorSetup over = setup;
  over.bandwidth = BandwidthPlan::power(0.15);
  CHECK_THROWS_AS(clt_empirical_check({model, Vector::Zero(1), 100, over, 10, 1}, 1), std::invalid_argument);
}

TEST_CASE("xi = 0 stepsizes are flagged as slowly converging") {
  const auto model = DensityModel::standard_gaussian(1);
  EstimatorSetup setup{EstimatorKind::recursive, gaussian_kernel(1), BandwidthPlan::power(0.3),
                       StepsizePlan::power(1.0, 0.8)};
  const auto r = clt_empirical_check({model, Vector::Zero(1), 500, setup, 200, 3}, 1);
  CHECK(r.slow_convergence);
  CHECK(r.replications == 200);
  CHECK(std::isfinite(r.ks_distance));
}

TEST_CASE("published reference cells") {
  auto design = table_design(3);
  TableRow row{3, design.density_label, design.points[0], 0, 0.19, 100, EstimatorKind::rosenblatt, {}};
  auto ref = reference_cell(row);
  CHECK(ref.level == Approx(0.9708));
  CHECK(ref.length == Approx(0.1042));
  row.kind = EstimatorKind::recursive;
  ref = reference_cell(row);
  CHECK(ref.level == Approx(0.9726));
  CHECK(ref.length == Approx(0.0829));

  row.n = 75;
  CHECK_THROWS_AS(reference_cell(row), std::invalid_argument);
  row.n = 100;
  row.a = 0.3;
  CHECK_THROWS_AS(reference_cell(row), std::invalid_argument);
  CHECK(reference_table(1).size() == 2);
  CHECK(reference_table(4).size() == 4);
  CHECK_THROWS_AS(reference_table(5), std::invalid_argument);
  CHECK_THROWS_AS(table_design(0), std::invalid_argument);
}

TEST_CASE("estimator names") {
  CHECK(parse_estimator_kind("recursive") == EstimatorKind::recursive);
  CHECK(to_string(EstimatorKind::rosenblatt) == "rosenblatt");
  CHECK_THROWS_AS(parse_estimator_kind("other"), std::invalid_argument);
}
