#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rkde/density.hpp"
#include "rkde/estimator.hpp"
#include "rkde/kernel.hpp"
#include "rkde/sequences.hpp"

namespace rkde {

enum class EstimatorKind { rosenblatt, recursive };

std::string to_string(EstimatorKind kind);
EstimatorKind parse_estimator_kind(const std::string& text);

/// Which estimator to run and how it is tuned.  `step` is used only by the
/// recursive estimator.
struct EstimatorSetup {
  EstimatorKind kind = EstimatorKind::recursive;
  Kernel kernel;
  BandwidthPlan bandwidth;
  std::optional<StepsizePlan> step;
};

/// One replication: draw n observations from `model` using `rng` and return
/// the estimate at x.  The recursive estimator starts from f_0 = 0.
double simulate_estimate(const DensityModel& model, const Vector& x, std::uint64_t n,
                         const EstimatorSetup& setup, Philox& rng);

/// Exact mean and variance of the estimate at x for a Gaussian kernel, using
/// closed-form Gaussian convolutions (every model is a Gaussian mixture).
struct ExactMoments {
  double mean = 0.0;
  double variance = 0.0;
};
ExactMoments exact_moments(const DensityModel& model, const Vector& x, std::uint64_t n,
                           const EstimatorSetup& setup);

// -- confidence-interval cells -------------------------------------------------

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool contains(double v) const { return lo <= v && v <= hi; }
};

/// g -/+ z C sqrt(g R / (n h^d)); degenerate [0, 0] when g = 0.
Interval build_interval(double g_x, double ci_factor, const Kernel& k, std::uint64_t n, double h,
                        std::size_t d, double z);

/// One table cell.  The Rosenblatt interval uses C = 1; the recursive
/// estimator uses gamma_n = (1 - a d)/n and C = sqrt(1 - a d).  Bandwidth
/// h_n = n^{-a}, product Gaussian kernel.
struct CellConfig {
  DensityModel model;
  Vector x;
  std::uint64_t n = 50;
  double a = 0.21;
  EstimatorKind kind = EstimatorKind::recursive;
  std::uint64_t replications = 5000;
  std::uint64_t seed = 0;
  double z = 1.96;
};

EstimatorSetup cell_setup(const CellConfig& cfg);
double cell_ci_factor(const CellConfig& cfg);

struct CellResult {
  double empirical_level = 0.0;
  double avg_length = 0.0;
  double stderr_level = 0.0;
  std::uint64_t replications = 0;
};

/// Replication r draws from Philox(seed, r); results are reduced in
/// replication order, so the outcome does not depend on `jobs`.
CellResult run_cell(const CellConfig& cfg, unsigned jobs = 0);

// -- tables ---------------------------------------------------------------------

struct TableDesign {
  int id = 0;
  std::string density_label;
  DensityModel model;
  std::vector<Vector> points;
  std::vector<double> a_values;
  std::vector<std::uint64_t> sample_sizes;
};

TableDesign table_design(int table_id);

struct TableRow {
  int table = 0;
  std::string density;
  Vector x;
  std::size_t x_index = 0;
  double a = 0.0;
  std::uint64_t n = 0;
  EstimatorKind kind = EstimatorKind::rosenblatt;
  CellResult result;
};

/// Rows ordered by a, then estimator (Rosenblatt first), then x, then n.
std::vector<TableRow> run_table(int table_id, std::uint64_t seed, std::uint64_t replications,
                                unsigned jobs = 0);

struct CsvHeader {
  std::vector<std::string> comments;  // written as "# ..." lines
};

/// Columns: table,density,x,a,n,estimator,empirical_level,stderr,avg_length,N,seed,kernel_id.
/// Numbers are written with 6 significant digits; x coordinates joined by ';'.
void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows, std::uint64_t seed,
                     const CsvHeader& header = {});

// -- moment and CLT oracles ----------------------------------------------------

struct MomentConfig {
  DensityModel model;
  Vector x;
  std::uint64_t n = 0;
  EstimatorSetup setup;
  std::uint64_t replications = 100;
  std::uint64_t seed = 0;
};

struct EmpiricalMoments {
  double mean = 0.0;
  double mean_bias = 0.0;
  double variance = 0.0;
  std::uint64_t replications = 0;
};

EmpiricalMoments empirical_moments(const MomentConfig& cfg, unsigned jobs = 0);

struct CltReport {
  double ks_distance = 0.0;
  double critical_value = 0.0;  // 1.63 / sqrt(replications)
  bool passed = false;
  double standardized_mean = 0.0;
  double standardized_variance = 0.0;
  double clt_variance = 0.0;
  /// xi = 0 stepsizes converge slowly; the report is informational only.
  bool slow_convergence = false;
  std::uint64_t replications = 0;
};

/// Standardizes sqrt(h_n^d / gamma_n) (f_n(x) - f(x)) by the limit variance
/// at c = 0 (times `variance_scale`) and measures the sup distance between
/// its empirical CDF and the standard normal CDF.  Requires a recursive
/// setup in the undersmoothing regime a > alpha/(d+4).
CltReport clt_empirical_check(const MomentConfig& cfg, unsigned jobs = 0,
                              double variance_scale = 1.0);

/// sup_x |F_emp(x) - Phi(x)| of the sample.
double ks_distance_normal(std::vector<double> values);

}  // namespace rkde
