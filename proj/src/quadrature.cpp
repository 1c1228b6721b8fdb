#include "rkde/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rkde {

QuadratureRule gauss_legendre(std::size_t count, double lo, double hi) {
  if (count == 0) throw std::invalid_argument("quadrature needs at least one node");
  QuadratureRule rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  const auto n = static_cast<double>(count);
  const double mid = 0.5 * (hi + lo);
  const double half = 0.5 * (hi - lo);
  // Roots are symmetric; Newton on P_n from the Chebyshev initial guess.
  for (std::size_t i = 0; i < (count + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= count; ++k) {
        const auto kd = static_cast<double>(k);
        const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[count - 1 - i] = mid + half * x;
    rule.weights[i] = half * w;
    rule.weights[count - 1 - i] = half * w;
  }
  return rule;
}

double integrate_tensor(std::size_t dim, const QuadratureRule& rule,
                        const std::function<double(std::span<const double>)>& f) {
  if (dim == 0) throw std::invalid_argument("dimension must be positive");
  const std::size_t m = rule.nodes.size();
  std::vector<std::size_t> idx(dim, 0);
  std::vector<double> z(dim);
  double total = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t j = 0; j < dim; ++j) {
      z[j] = rule.nodes[idx[j]];
      w *= rule.weights[idx[j]];
    }
    total += w * f(z);
    std::size_t j = 0;
    while (j < dim && ++idx[j] == m) idx[j++] = 0;
    if (j == dim) break;
  }
  return total;
}

}  // namespace rkde
