#include "rkde/mc.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "rkde/asymptotics.hpp"
#include "rkde/parallel.hpp"

namespace rkde {

std::string to_string(EstimatorKind kind) {
  return kind == EstimatorKind::rosenblatt ? "rosenblatt" : "recursive";
}

EstimatorKind parse_estimator_kind(const std::string& text) {
  if (text == "rosenblatt") return EstimatorKind::rosenblatt;
  if (text == "recursive") return EstimatorKind::recursive;
  throw std::invalid_argument("unknown estimator '" + text + "' (rosenblatt|recursive)");
}

double simulate_estimate(const DensityModel& model, const Vector& x, std::uint64_t n,
                         const EstimatorSetup& setup, Philox& rng) {
  if (n == 0) throw std::invalid_argument("sample size must be positive");
  Vector obs(static_cast<Eigen::Index>(model.dim()));
  if (setup.kind == EstimatorKind::recursive) {
    if (!setup.step) throw std::invalid_argument("recursive estimator needs a stepsize plan");
    RecursiveEstimator est(setup.kernel, *setup.step, setup.bandwidth, {x});
    for (std::uint64_t i = 0; i < n; ++i) {
      model.draw(rng, obs);
      est.update(obs);
    }
    return est.value(0);
  }
  RosenblattEstimator est(setup.kernel, setup.bandwidth);
  est.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    model.draw(rng, obs);
    est.add(obs);
  }
  return est.evaluate(x);
}

namespace {

bool is_gaussian_kernel(const Kernel& k) {
  return k.id().rfind("gaussian-product", 0) == 0;
}

/// (f * N(0, s I))(x) from the mixture components of f.
double smoothed_pdf(const std::vector<GaussianComponent>& comps, const Vector& x, double s) {
  const auto d = x.size();
  double total = 0.0;
  for (const auto& c : comps) {
    const Matrix cov = c.covariance + s * Matrix::Identity(d, d);
    Eigen::LLT<Matrix> llt(cov);
    const Matrix l = llt.matrixL();
    const Vector u = llt.matrixL().solve(x - c.mean);
    total += c.weight * std::exp(-0.5 * u.squaredNorm()) /
             (std::pow(2.0 * std::numbers::pi, 0.5 * static_cast<double>(d)) *
              l.diagonal().prod());
  }
  return total;
}

struct KernelTermMoments {
  double mean;
  double variance;
};

// Moments of h^{-d} K((x - X)/h) for the product Gaussian kernel.  Uses
// K^2 = R * phi_{I/2}, so E[Z^2] = R h^{-d} (f * N(0, h^2/2 I))(x).
KernelTermMoments kernel_term_moments(const std::vector<GaussianComponent>& comps,
                                      const Vector& x, double h, const Kernel& k) {
  const double mean = smoothed_pdf(comps, x, h * h);
  const double second = k.roughness() / std::pow(h, static_cast<double>(k.dim())) *
                        smoothed_pdf(comps, x, 0.5 * h * h);
  return {mean, second - mean * mean};
}

}  // namespace

ExactMoments exact_moments(const DensityModel& model, const Vector& x, std::uint64_t n,
                           const EstimatorSetup& setup) {
  if (!is_gaussian_kernel(setup.kernel))
    throw std::invalid_argument("exact moments are available for the Gaussian kernel only");
  if (n == 0) throw std::invalid_argument("sample size must be positive");
  const auto comps = model.gaussian_components();
  ExactMoments m;
  if (setup.kind == EstimatorKind::rosenblatt) {
    const auto t = kernel_term_moments(comps, x, setup.bandwidth.value_at(n), setup.kernel);
    m.mean = t.mean;
    m.variance = t.variance / static_cast<double>(n);
    return m;
  }
  if (!setup.step) throw std::invalid_argument("recursive estimator needs a stepsize plan");
  auto cursor = setup.step->cursor();
  for (std::uint64_t k = 1; k <= n; ++k) {
    const double g = cursor.next();
    const auto t = kernel_term_moments(comps, x, setup.bandwidth.value_at(k), setup.kernel);
    m.mean = (1.0 - g) * m.mean + g * t.mean;
    m.variance = (1.0 - g) * (1.0 - g) * m.variance + g * g * t.variance;
  }
  return m;
}

Interval build_interval(double g_x, double ci_factor, const Kernel& k, std::uint64_t n, double h,
                        std::size_t d, double z) {
  if (g_x < 0.0) throw std::invalid_argument("interval center must be nonnegative");
  if (!(z > 0.0)) throw std::invalid_argument("quantile z must be positive");
  const double half =
      z * ci_factor *
      std::sqrt(g_x * k.roughness() / (static_cast<double>(n) * std::pow(h, static_cast<double>(d))));
  return {g_x - half, g_x + half};
}

EstimatorSetup cell_setup(const CellConfig& cfg) {
  const std::size_t d = cfg.model.dim();
  EstimatorSetup s{cfg.kind, gaussian_kernel(d), BandwidthPlan::power(cfg.a), std::nullopt};
  if (cfg.kind == EstimatorKind::recursive)
    s.step = StepsizePlan::power(1.0 - cfg.a * static_cast<double>(d), 1.0);
  return s;
}

double cell_ci_factor(const CellConfig& cfg) {
  if (cfg.kind == EstimatorKind::rosenblatt) return 1.0;
  return ci_constant(1.0 - cfg.a * static_cast<double>(cfg.model.dim()), cfg.a, cfg.model.dim())
      .value;
}

CellResult run_cell(const CellConfig& cfg, unsigned jobs) {
  if (cfg.replications == 0) throw std::invalid_argument("replications must be positive");
  if (static_cast<std::size_t>(cfg.x.size()) != cfg.model.dim())
    throw std::invalid_argument("evaluation point dimension does not match the density");
  const EstimatorSetup setup = cell_setup(cfg);
  const double c = cell_ci_factor(cfg);
  const double h = setup.bandwidth.value_at(cfg.n);
  const double truth = cfg.model.pdf(cfg.x);
  const std::size_t d = cfg.model.dim();

  struct Outcome {
    bool covered = false;
    double length = 0.0;
  };
  const auto outcomes = parallel_map<Outcome>(cfg.replications, jobs, [&](std::uint64_t r) {
    Philox rng(cfg.seed, r);
    const double g = simulate_estimate(cfg.model, cfg.x, cfg.n, setup, rng);
    const Interval iv = build_interval(g, c, setup.kernel, cfg.n, h, d, cfg.z);
    return Outcome{iv.contains(truth), iv.length()};
  });

  std::uint64_t hits = 0;
  double length_sum = 0.0;
  for (const auto& o : outcomes) {
    hits += o.covered ? 1 : 0;
    length_sum += o.length;
  }
  CellResult res;
  const auto reps = static_cast<double>(cfg.replications);
  res.replications = cfg.replications;
  res.empirical_level = static_cast<double>(hits) / reps;
  res.avg_length = length_sum / reps;
  res.stderr_level = std::sqrt(res.empirical_level * (1.0 - res.empirical_level) / reps);
  return res;
}

TableDesign table_design(int table_id) {
  Matrix a(2, 2);
  a << 1.0, 0.0, 0.5, 1.0;
  const std::vector<Vector> points_1d{Vector::Constant(1, 0.0), Vector::Constant(1, 0.5),
                                      Vector::Constant(1, 1.0)};
  const std::vector<Vector> points_2d{Vector::Constant(2, 0.0), Vector::Constant(2, 0.5),
                                      Vector::Constant(2, 1.0)};
  const std::vector<std::uint64_t> ns{50, 100, 200};
  switch (table_id) {
    case 1:
      return {1, "N(0,1)", DensityModel::standard_gaussian(1), points_1d, {0.21, 0.23}, ns};
    case 2: {
      auto model = DensityModel::mixture({{0.5, Vector::Constant(1, -0.5), Matrix::Identity(1, 1)},
                                          {0.5, Vector::Constant(1, 0.5), Matrix::Identity(1, 1)}});
      return {2, "0.5N(-0.5,1)+0.5N(0.5,1)", model, points_1d, {0.21, 0.23}, ns};
    }
    case 3:
      return {3, "AY;Y~N(0,I2)", DensityModel::linear_image(DensityModel::standard_gaussian(2), a),
              points_2d, {0.17, 0.19, 0.21}, ns};
    case 4: {
      const Vector b = Vector::Constant(2, -0.5);
      auto base = DensityModel::mixture(
          {{0.5, -b, Matrix::Identity(2, 2)}, {0.5, b, Matrix::Identity(2, 2)}});
      return {4, "AY;Y~0.5N(-B,I2)+0.5N(B,I2)", DensityModel::linear_image(base, a), points_2d,
              {0.17, 0.19, 0.21, 0.24}, ns};
    }
    default:
      throw std::invalid_argument("table id must be 1, 2, 3 or 4");
  }
}

std::vector<TableRow> run_table(int table_id, std::uint64_t seed, std::uint64_t replications,
                                unsigned jobs) {
  const TableDesign design = table_design(table_id);
  std::vector<TableRow> rows;
  for (double a : design.a_values) {
    for (EstimatorKind kind : {EstimatorKind::rosenblatt, EstimatorKind::recursive}) {
      for (std::size_t xi = 0; xi < design.points.size(); ++xi) {
        for (std::uint64_t n : design.sample_sizes) {
          CellConfig cfg{design.model, design.points[xi], n, a, kind, replications, seed};
          rows.push_back({table_id, design.density_label, design.points[xi], xi, a, n, kind,
                          run_cell(cfg, jobs)});
        }
      }
    }
  }
  return rows;
}

void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows, std::uint64_t seed,
                     const CsvHeader& header) {
  for (const auto& line : header.comments) out << "# " << line << '\n';
  out << "table,density,x,a,n,estimator,empirical_level,stderr,avg_length,N,seed,kernel_id\n";
  for (const auto& row : rows) {
    std::string x;
    for (Eigen::Index j = 0; j < row.x.size(); ++j)
      x += (j ? ";" : "") + fmt::format("{:.6g}", row.x[j]);
    out << fmt::format("{},{},{},{:.6g},{},{},{:.6g},{:.6g},{:.6g},{},{},{}\n", row.table,
                       row.density, x, row.a, row.n, to_string(row.kind),
                       row.result.empirical_level, row.result.stderr_level,
                       row.result.avg_length, row.result.replications, seed,
                       gaussian_kernel(static_cast<std::size_t>(row.x.size())).id());
  }
}

EmpiricalMoments empirical_moments(const MomentConfig& cfg, unsigned jobs) {
  if (cfg.replications < 2) throw std::invalid_argument("need at least two replications");
  const auto values = parallel_map<double>(cfg.replications, jobs, [&](std::uint64_t r) {
    Philox rng(cfg.seed, r);
    return simulate_estimate(cfg.model, cfg.x, cfg.n, cfg.setup, rng);
  });
  const auto reps = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  EmpiricalMoments m;
  m.replications = cfg.replications;
  m.mean = sum / reps;
  double ss = 0.0;
  for (double v : values) ss += (v - m.mean) * (v - m.mean);
  m.variance = ss / (reps - 1.0);
  m.mean_bias = m.mean - cfg.model.pdf(cfg.x);
  return m;
}

double ks_distance_normal(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("empty sample");
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double cdf = 0.5 * std::erfc(-values[i] / std::numbers::sqrt2);
    d = std::max({d, static_cast<double>(i + 1) / n - cdf, cdf - static_cast<double>(i) / n});
  }
  return d;
}

CltReport clt_empirical_check(const MomentConfig& cfg, unsigned jobs, double variance_scale) {
  if (cfg.setup.kind != EstimatorKind::recursive || !cfg.setup.step)
    throw std::invalid_argument("CLT check runs on the recursive estimator");
  if (cfg.replications < 2) throw std::invalid_argument("need at least two replications");
  const StepsizePlan& step = *cfg.setup.step;
  const std::size_t d = cfg.model.dim();
  const double a = cfg.setup.bandwidth.a();
  if (!(a * (static_cast<double>(d) + 4.0) > step.alpha()))
    throw std::invalid_argument("CLT check needs undersmoothing: a > alpha/(d+4)");

  const double truth = cfg.model.pdf(cfg.x);
  const double s = curvature(cfg.model, cfg.setup.kernel, cfg.x);
  const CltParams limit = clt_params(0.0, truth, s, cfg.setup.kernel, a, step);
  const double var = limit.variance * variance_scale;
  const double h = cfg.setup.bandwidth.value_at(cfg.n);
  const double rate = std::sqrt(std::pow(h, static_cast<double>(d)) / step.value_at(cfg.n));

  const auto z = parallel_map<double>(cfg.replications, jobs, [&](std::uint64_t r) {
    Philox rng(cfg.seed, r);
    const double g = simulate_estimate(cfg.model, cfg.x, cfg.n, cfg.setup, rng);
    return rate * (g - truth) / std::sqrt(var);
  });

  CltReport rep;
  rep.replications = cfg.replications;
  rep.clt_variance = var;
  const auto reps = static_cast<double>(z.size());
  double sum = 0.0;
  for (double v : z) sum += v;
  rep.standardized_mean = sum / reps;
  double ss = 0.0;
  for (double v : z) ss += (v - rep.standardized_mean) * (v - rep.standardized_mean);
  rep.standardized_variance = ss / (reps - 1.0);
  rep.ks_distance = ks_distance_normal(z);
  rep.critical_value = 1.63 / std::sqrt(reps);
  rep.passed = rep.ks_distance < rep.critical_value;
  rep.slow_convergence = step.xi() == 0.0;
  return rep;
}

}  // namespace rkde
