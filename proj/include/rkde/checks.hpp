#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rkde/mc.hpp"

namespace rkde {

struct CheckOutcome {
  std::string name;
  bool passed = false;
  double observed = 0.0;
  double expected = 0.0;
  std::string detail;
};

// Each check is self-contained and deterministic for a given seed.

/// Recursion against the weighted closed form for weights 1, h^{d/2}, h^d
/// and d in {1, 2}; sup-norm over a 50-point grid below 1e-12.
std::vector<CheckOutcome> check_recursion_closed_form(std::uint64_t n, std::uint64_t seed);

/// Streaming product-sum limit (m = 2, v* = 0.79, xi = 1) within 1%, and the
/// m = 1, v = 1 identity against 1 - Pi_n to 1e-12.
std::vector<CheckOutcome> check_product_sum_limit(std::uint64_t n);

/// Empirical variance at x = 0 for N(0,1), a = 0.21 against the leading
/// variance, for gamma_n = 1/n and gamma_n = (1 - a)/n.  10% tolerance.
std::vector<CheckOutcome> check_variance_oracle(std::uint64_t n, std::uint64_t replications,
                                                std::uint64_t seed, unsigned jobs);

/// Empirical bias at x = 0 for N(0,1), a = 0.1, gamma_n = 1/n against the
/// leading bias.  15% tolerance.
std::vector<CheckOutcome> check_bias_oracle(std::uint64_t n, std::uint64_t replications,
                                            std::uint64_t seed, unsigned jobs);

/// Simulator against the exact finite-n mean and variance (Gaussian
/// convolution closed forms), both estimators.
std::vector<CheckOutcome> check_exact_moments(std::uint64_t n, std::uint64_t replications,
                                              std::uint64_t seed, unsigned jobs);

/// Monte Carlo MISE of the MISE-optimal plan for N(0,1) (gamma_n = 1/n,
/// trapezoid rule on [-6, 6]) against the leading MISE.  10% tolerance.
std::vector<CheckOutcome> check_mise_oracle(std::uint64_t n, std::uint64_t replications,
                                            std::uint64_t seed, unsigned jobs);

/// Sup-CDF distance of the standardized recursive estimator (gamma0 = 1 - a,
/// a = 0.21, d = 1) to the standard normal at the 1% level.
std::vector<CheckOutcome> check_clt(std::uint64_t n, std::uint64_t replications,
                                    std::uint64_t seed, unsigned jobs);

/// Efficiency ratio, its shape over d = 1..50, and the CI constant minimum.
std::vector<CheckOutcome> check_closed_form_constants();

/// +/-1% perturbations of the MSE-optimal bandwidth constant raise the
/// leading MSE, d in {1, 2}.
std::vector<CheckOutcome> check_mse_first_order();

/// Coverage within `level_tol` (absolute) and length within `length_tol`
/// (relative) of the published cell, plus the orderings: recursive length
/// below Rosenblatt length everywhere, and for tables 1-2 recursive coverage
/// at least Rosenblatt coverage.
std::vector<CheckOutcome> compare_with_reference(const std::vector<TableRow>& rows,
                                                 double level_tol, double length_tol);
std::vector<CheckOutcome> check_table_reproduction(int table_id, std::uint64_t replications,
                                                   std::uint64_t seed, double level_tol,
                                                   double length_tol, unsigned jobs);

/// Table CSV bytes identical for jobs = 1 and jobs = `jobs`.
std::vector<CheckOutcome> check_determinism(int table_id, std::uint64_t replications,
                                            std::uint64_t seed, unsigned jobs);

enum class CheckSuite { fast, full };

CheckSuite parse_check_suite(const std::string& text);

/// fast: exact identities, constants, small Monte Carlo oracles.
/// full: adds the n = 10^4 / 10^5 moment oracles and the CLT check.
std::vector<CheckOutcome> run_check_suite(CheckSuite suite, std::uint64_t seed, unsigned jobs);

}  // namespace rkde
