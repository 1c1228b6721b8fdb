#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rkde/density.hpp"
#include "rkde/kernel.hpp"
#include "rkde/sequences.hpp"

namespace rkde {

/// Recursive stochastic-approximation density estimator on a fixed grid:
///
///     f_n(x) = (1 - gamma_n) f_{n-1}(x) + gamma_n h_n^{-d} K((x - X_n) / h_n).
///
/// Each update costs O(#points) and is independent of n.  The weight still
/// carried by the initial values f_0 after n updates is Pi_n.
class RecursiveEstimator {
 public:
  RecursiveEstimator(Kernel kernel, StepsizePlan step, BandwidthPlan bandwidth,
                     std::vector<Vector> points, std::vector<double> initial = {});

  void update(const Vector& observation);

  std::span<const double> values() const { return values_; }
  double value(std::size_t i) const { return values_.at(i); }
  const std::vector<Vector>& points() const { return points_; }
  std::uint64_t count() const { return n_; }
  std::size_t dim() const { return kernel_.dim(); }

  /// Pi_n = prod_{k<=n} (1 - gamma_k).
  double initial_weight() const { return pi_.value(); }
  /// gamma_n and h_n of the most recent update.
  double last_stepsize() const { return last_gamma_; }
  double last_bandwidth() const { return last_h_; }

  const StepsizePlan& stepsize() const { return step_; }
  const BandwidthPlan& bandwidth() const { return bandwidth_; }
  const Kernel& kernel() const { return kernel_; }

 private:
  Kernel kernel_;
  StepsizePlan step_;
  BandwidthPlan bandwidth_;
  StepsizeCursor cursor_;
  std::vector<Vector> points_;
  std::vector<double> values_;
  std::vector<double> scratch_;
  PartialProduct pi_;
  std::uint64_t n_ = 0;
  double last_gamma_ = 0.0;
  double last_h_ = 0.0;
};

/// (sum_k w_k)^{-1} sum_k w_k h_k^{-d} K((x - X_k) / h_k) at every point.
std::vector<double> weighted_closed_form(const SequencePlan& weights,
                                         const BandwidthPlan& bandwidth, const Kernel& k,
                                         std::span<const Vector> sample,
                                         std::span<const Vector> points);

/// Nonrecursive kernel estimator (n h_n^d)^{-1} sum_k K((x - X_k) / h_n),
/// where h_n is taken at the current sample size.  Stores the sample.
class RosenblattEstimator {
 public:
  RosenblattEstimator(Kernel kernel, BandwidthPlan bandwidth);

  void add(const Vector& observation);
  void reserve(std::size_t n) { sample_.reserve(n * kernel_.dim()); }

  double evaluate(const Vector& x) const;
  std::size_t size() const { return sample_.size() / kernel_.dim(); }
  double current_bandwidth() const;

 private:
  Kernel kernel_;
  BandwidthPlan bandwidth_;
  std::vector<double> sample_;  // row-major, dim() values per observation
};

}  // namespace rkde
