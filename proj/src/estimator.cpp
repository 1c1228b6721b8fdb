#include "rkde/estimator.hpp"

#include <cmath>
#include <stdexcept>

namespace rkde {

namespace {

void check_point(const Vector& x, std::size_t dim) {
  if (static_cast<std::size_t>(x.size()) != dim)
    throw std::invalid_argument("point dimension does not match the kernel");
}

}  // namespace

RecursiveEstimator::RecursiveEstimator(Kernel kernel, StepsizePlan step,
                                       BandwidthPlan bandwidth, std::vector<Vector> points,
                                       std::vector<double> initial)
    : kernel_(std::move(kernel)),
      step_(std::move(step)),
      bandwidth_(std::move(bandwidth)),
      cursor_(step_),
      points_(std::move(points)),
      values_(std::move(initial)),
      scratch_(kernel_.dim()) {
  check_admissible(step_, bandwidth_, kernel_.dim());
  for (const auto& p : points_) check_point(p, kernel_.dim());
  if (values_.empty()) values_.assign(points_.size(), 0.0);
  if (values_.size() != points_.size())
    throw std::invalid_argument("one initial value per evaluation point is required");
}

void RecursiveEstimator::update(const Vector& observation) {
  const std::size_t d = kernel_.dim();
  check_point(observation, d);
  ++n_;
  const double gamma = cursor_.next();
  const double h = bandwidth_.value_at(n_);
  const double inv_h = 1.0 / h;
  const double scale = gamma * std::pow(inv_h, static_cast<double>(d));
  const double keep = 1.0 - gamma;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const Vector& x = points_[i];
    for (std::size_t j = 0; j < d; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      scratch_[j] = (x[jj] - observation[jj]) * inv_h;
    }
    values_[i] = keep * values_[i] + scale * kernel_(scratch_);
  }
  pi_.multiply(gamma);
  last_gamma_ = gamma;
  last_h_ = h;
}

std::vector<double> weighted_closed_form(const SequencePlan& weights,
                                         const BandwidthPlan& bandwidth, const Kernel& k,
                                         std::span<const Vector> sample,
                                         std::span<const Vector> points) {
  if (sample.empty()) throw std::invalid_argument("closed form needs a nonempty sample");
  const std::size_t d = k.dim();
  std::vector<double> out(points.size(), 0.0);
  std::vector<double> z(d);
  double weight_sum = 0.0;
  for (std::size_t t = 0; t < sample.size(); ++t) {
    const auto n = static_cast<std::uint64_t>(t + 1);
    const double w = weights(n);
    const double h = bandwidth.value_at(n);
    weight_sum += w;
    const double scale = w / std::pow(h, static_cast<double>(d));
    check_point(sample[t], d);
    for (std::size_t i = 0; i < points.size(); ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        z[j] = (points[i][jj] - sample[t][jj]) / h;
      }
      out[i] += scale * k(z);
    }
  }
  for (double& v : out) v /= weight_sum;
  return out;
}

RosenblattEstimator::RosenblattEstimator(Kernel kernel, BandwidthPlan bandwidth)
    : kernel_(std::move(kernel)), bandwidth_(std::move(bandwidth)) {}

void RosenblattEstimator::add(const Vector& observation) {
  check_point(observation, kernel_.dim());
  sample_.insert(sample_.end(), observation.data(), observation.data() + observation.size());
}

double RosenblattEstimator::current_bandwidth() const {
  if (size() == 0) throw std::logic_error("Rosenblatt estimator has no observations");
  return bandwidth_.value_at(size());
}

double RosenblattEstimator::evaluate(const Vector& x) const {
  const std::size_t d = kernel_.dim();
  check_point(x, d);
  const std::size_t n = size();
  const double h = current_bandwidth();
  const double inv_h = 1.0 / h;
  std::vector<double> z(d);
  double acc = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double* obs = sample_.data() + t * d;
    for (std::size_t j = 0; j < d; ++j) z[j] = (x[static_cast<Eigen::Index>(j)] - obs[j]) * inv_h;
    acc += kernel_(z);
  }
  return acc / (static_cast<double>(n) * std::pow(h, static_cast<double>(d)));
}

}  // namespace rkde
