#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rkde/asymptotics.hpp"
#include "rkde/checks.hpp"
#include "rkde/mc.hpp"
#include "rkde/random.hpp"
#include "rkde/reference_tables.hpp"
#include "rkde/run_config.hpp"

namespace {

using namespace rkde;

constexpr std::uint64_t kDefaultSeed = 20240917;

std::string num(double v) { return fmt::format("{:.6g}", v); }

Vector parse_point(const std::string& text, std::size_t dim) {
  std::vector<double> xs;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    std::size_t used = 0;
    const double v = std::stod(part, &used);
    if (used != part.size()) throw std::invalid_argument("bad coordinate '" + part + "'");
    xs.push_back(v);
  }
  if (xs.size() == 1 && dim > 1) xs.assign(dim, xs.front());
  if (xs.size() != dim)
    throw std::invalid_argument(fmt::format("point '{}' needs {} coordinates", text, dim));
  Vector x(static_cast<Eigen::Index>(dim));
  for (std::size_t j = 0; j < dim; ++j) x[static_cast<Eigen::Index>(j)] = xs[j];
  return x;
}

std::string join_point(const Vector& x) {
  std::string s;
  for (Eigen::Index j = 0; j < x.size(); ++j) s += (j ? "," : "") + num(x[j]);
  return s;
}

std::vector<std::string> report_header(const RunConfig& cfg, const std::string& kernel_id) {
  return {"config: " + canonical_text(cfg),
          "seed: " + std::to_string(cfg.seed) + " (" + cfg.seed_source + ")",
          "kernel: " + kernel_id, "rng: " + std::string(kRngId),
          "version: rkde " RKDE_VERSION};
}

/// Runs `write` against --out (with path context on failure) or stdout.
template <class Fn>
void emit(const std::string& path, Fn write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(f);
  f.flush();
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

void print_diff(std::ostream& os, const std::vector<TableRow>& rows) {
  os << fmt::format("{:>5} {:>10} {:>9} {:>4} | {:>7} {:>7} {:>6} | {:>8} {:>8} {:>7}\n", "a",
                    "estimator", "x", "n", "level", "ref", "d(pp)", "length", "ref", "d(%)");
  for (const auto& r : rows) {
    const auto ref = reference_cell(r);
    os << fmt::format("{:>5} {:>10} {:>9} {:>4} | {:>7.2f} {:>7.2f} {:>6.2f} | {:>8.4f} {:>8.4f} {:>7.2f}\n",
                      num(r.a), to_string(r.kind), join_point(r.x), r.n,
                      100.0 * r.result.empirical_level, 100.0 * ref.level,
                      100.0 * std::abs(r.result.empirical_level - ref.level), r.result.avg_length,
                      ref.length, 100.0 * (r.result.avg_length / ref.length - 1.0));
  }
}

int print_outcomes(std::ostream& os, const std::vector<CheckOutcome>& outcomes) {
  int failed = 0;
  for (const auto& o : outcomes) {
    os << (o.passed ? "PASS " : "FAIL ") << o.name << ": observed " << num(o.observed)
       << ", expected " << num(o.expected) << " (" << o.detail << ")\n";
    failed += o.passed ? 0 : 1;
  }
  os << fmt::format("{} checks, {} failed\n", outcomes.size(), failed);
  return failed;
}

struct FormulaInputs {
  int density = 1;
  std::string x = "0";
  double a = 0.21;
  double alpha = 1.0;
  double gamma0 = std::numeric_limits<double>::quiet_NaN();
  std::size_t d = 1;
  std::uint64_t n = 100;
  double c = 0.0;
};

StepsizePlan formula_step(const FormulaInputs& in) {
  const double g0 = std::isnan(in.gamma0) ? 1.0 : in.gamma0;
  return StepsizePlan::power(g0, in.alpha);
}

void run_asymptotics(const std::string& query, const FormulaInputs& in, std::ostream& os) {
  if (query == "rho") {
    os << "rho(d) = [2^4 (d+2)^(2d+4) / (d+4)^(2d+4)]^(1/(d+4))\n";
    os << "rho = " << fmt::format("{:.5f}", efficiency_ratio(in.d)) << "\n";
    return;
  }
  if (query == "ci-constant") {
    const auto c = ci_constant(std::isnan(in.gamma0) ? 1.0 - in.a * static_cast<double>(in.d)
                                                     : in.gamma0,
                               in.a, in.d);
    os << "C = sqrt(gamma0 / (2 - (1 - a d) / gamma0))\n";
    os << "C = " << fmt::format("{:.5f}", c.value) << "\n";
    os << "optimal gamma0 = " << num(c.optimal_gamma0) << ", optimal C = "
       << fmt::format("{:.5f}", c.optimal_value) << "\n";
    return;
  }
  if (query == "regime") {
    const auto r = classify_regime(in.a, in.alpha, in.d, in.gamma0);
    os << to_string(r.regime) << "\n";
    os << "bias_expansion = " << r.bias_expansion << ", variance_expansion = "
       << r.variance_expansion << ", bias_negligible = " << r.bias_negligible
       << ", variance_negligible = " << r.variance_negligible << "\n";
    if (r.stepsize_condition)
      os << "stepsize_condition = " << *r.stepsize_condition
         << ", both_expansions_valid = " << *r.both_expansions_valid << "\n";
    return;
  }

  const auto design = table_design(in.density);
  const DensityModel& model = design.model;
  const std::size_t d = model.dim();
  const Kernel k = gaussian_kernel(d);
  const Vector x = parse_point(in.x, d);
  const double f = model.pdf(x);
  const double s = curvature(model, k, x);
  os << "density = " << design.density_label << ", x = " << join_point(x) << ", f(x) = " << num(f)
     << ", S(x) = " << num(s) << "\n";

  if (query == "mse-optimal" || query == "mise-optimal") {
    OptimalPlan plan;
    if (query == "mse-optimal") {
      plan = mse_optimal_plan(f, s, k);
    } else {
      const auto i2 = mise_functionals(model, k);
      os << "int S^2 = " << num(i2.value) << "\n";
      plan = mise_optimal_plan(i2.value, k);
    }
    os << "gamma_n = " << num(plan.gamma0) << " / n\n";
    os << "h_n = " << fmt::format("{:.4f}", plan.bandwidth_constant) << " n^-" << num(plan.bandwidth_exponent)
       << "\n";
    os << "error = " << fmt::format("{:.6g}", plan.error_constant) << " n^-" << num(plan.rate_exponent)
       << "\n";
    return;
  }

  const auto bw = BandwidthPlan::power(in.a);
  const auto step = formula_step(in);
  if (query == "bias") {
    os << "bias = h_n^2 S / (2 (1 - 2 a xi))\n";
    os << "bias = " << num(bias_leading(s, bw, step, in.n)) << "\n";
    os << "rosenblatt bias = " << num(rosenblatt_bias(s, bw.value_at(in.n))) << "\n";
  } else if (query == "variance") {
    os << "variance = (gamma_n / h_n^d) f R / (2 - (1 - a d) xi)\n";
    os << "variance = " << num(variance_leading(f, k, bw, step, in.n)) << "\n";
    os << "rosenblatt variance = "
       << num(rosenblatt_variance(f, k, in.n, bw.value_at(in.n))) << "\n";
  } else if (query == "clt") {
    const auto p = clt_params(in.c, f, s, k, in.a, step);
    os << "sqrt(h_n^d / gamma_n) (f_n - f) -> N(mean, variance)\n";
    if (p.degenerate) {
      os << "degenerate: h_n^-2 (f_n - f) -> " << num(p.bias_limit) << "\n";
    } else {
      os << "mean = " << num(p.mean) << ", variance = " << num(p.variance) << "\n";
    }
  } else {
    throw std::invalid_argument(
        "unknown query '" + query +
        "' (bias|variance|mse-optimal|mise-optimal|rho|ci-constant|clt|regime)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recursive kernel density estimation: simulations, asymptotics and checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("rkde ") + RKDE_VERSION);

  std::uint64_t seed_flag = 0;
  std::string out;
  unsigned jobs = 0;
  std::uint64_t replications = 5000;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed_flag, "RNG seed (default: $RKDE_SEED, else built-in)");
    sub->add_option("--out", out, "output path (default: stdout)");
    sub->add_option("--jobs", jobs, "worker threads, 0 = all cores");
  };

  auto* table = app.add_subcommand("table", "reproduce one reference table as CSV");
  int table_id = 0;
  table->add_option("id", table_id, "table 1..4");
  table->add_option("--table", table_id, "table 1..4");
  table->add_option("--replications", replications, "Monte Carlo replications per cell");
  add_common(table);

  auto* cell = app.add_subcommand("cell", "one confidence-interval cell");
  int cell_density = 1;
  std::string cell_x = "0";
  std::uint64_t cell_n = 100;
  double cell_a = 0.21;
  std::string cell_est = "recursive";
  double cell_z = 1.96;
  cell->add_option("--density", cell_density, "density of table 1..4");
  cell->add_option("--x", cell_x, "evaluation point, comma separated");
  cell->add_option("--n", cell_n, "sample size");
  cell->add_option("--a", cell_a, "bandwidth exponent, h_n = n^-a");
  cell->add_option("--estimator", cell_est, "rosenblatt|recursive");
  cell->add_option("--z", cell_z, "normal quantile");
  cell->add_option("--replications", replications, "Monte Carlo replications");
  add_common(cell);

  auto* asym = app.add_subcommand("asymptotics", "leading-order constants");
  std::string query;
  FormulaInputs fin;
  asym->add_option("query", query, "bias|variance|mse-optimal|mise-optimal|rho|ci-constant|clt|regime")
      ->required();
  asym->add_option("--density", fin.density, "density of table 1..4");
  asym->add_option("--x", fin.x, "evaluation point");
  asym->add_option("--a", fin.a, "bandwidth exponent");
  asym->add_option("--alpha", fin.alpha, "stepsize exponent");
  asym->add_option("--gamma0", fin.gamma0, "lim n gamma_n");
  asym->add_option("--d", fin.d, "dimension");
  asym->add_option("--n", fin.n, "sample size");
  asym->add_option("--c", fin.c, "lim h_n^(d+4) / gamma_n");
  asym->add_option("--out", out, "output path (default: stdout)");

  auto* check = app.add_subcommand("check", "invariant and oracle suites");
  std::string suite;
  check->add_option("suite", suite, "fast|full")->required()->check(CLI::IsMember({"fast", "full"}));
  add_common(check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg;
    cfg.out = out;
    cfg.jobs = jobs;
    const bool seed_given = [&] {
      for (auto* sub : {table, cell, check})
        if (sub->parsed()) return sub->get_option("--seed")->count() > 0;
      return false;
    }();
    resolve_seed(cfg, seed_given, seed_flag, kDefaultSeed);

    if (table->parsed()) {
      if (table_id < 1 || table_id > 4) throw CLI::ValidationError("table id must be 1..4");
      cfg.command = "table";
      cfg.params = {{"table", std::to_string(table_id)},
                    {"replications", std::to_string(replications)}};
      const auto rows = run_table(table_id, cfg.seed, replications, jobs);
      const std::size_t d = table_design(table_id).model.dim();
      emit(out, [&](std::ostream& os) {
        write_table_csv(os, rows, cfg.seed, {report_header(cfg, gaussian_kernel(d).id())});
      });
      print_diff(out.empty() ? std::cerr : std::cout, rows);
      return 0;
    }

    if (cell->parsed()) {
      const auto design = table_design(cell_density);
      const Vector x = parse_point(cell_x, design.model.dim());
      const EstimatorKind kind = parse_estimator_kind(cell_est);
      cfg.command = "cell";
      cfg.params = {{"density", std::to_string(cell_density)},
                    {"x", join_point(x)},
                    {"n", std::to_string(cell_n)},
                    {"a", num(cell_a)},
                    {"estimator", to_string(kind)},
                    {"z", num(cell_z)},
                    {"replications", std::to_string(replications)}};
      CellConfig cc{design.model, x, cell_n, cell_a, kind, replications, cfg.seed, cell_z};
      TableRow row{cell_density, design.density_label, x, 0, cell_a, cell_n, kind,
                   run_cell(cc, jobs)};
      emit(out, [&](std::ostream& os) {
        write_table_csv(os, {row}, cfg.seed,
                        {report_header(cfg, gaussian_kernel(design.model.dim()).id())});
      });
      return 0;
    }

    if (asym->parsed()) {
      emit(out, [&](std::ostream& os) { run_asymptotics(query, fin, os); });
      return 0;
    }

    cfg.command = "check";
    cfg.params = {{"suite", suite}};
    std::vector<CheckOutcome> outcomes;
    outcomes = run_check_suite(parse_check_suite(suite), cfg.seed, jobs);
    int failed = 0;
    emit(out, [&](std::ostream& os) {
      for (const auto& line : report_header(cfg, "gaussian-product")) os << "# " << line << "\n";
      failed = print_outcomes(os, outcomes);
    });
    return failed == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
