#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace rkde {

/// Gauss-Legendre nodes and weights on [lo, hi].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadratureRule gauss_legendre(std::size_t count, double lo, double hi);

/// Tensor-product integral of f over the box [lo, hi]^d using `rule`'s
/// one-dimensional nodes on every axis.
double integrate_tensor(std::size_t dim, const QuadratureRule& rule,
                        const std::function<double(std::span<const double>)>& f);

}  // namespace rkde
