#include "rkde/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "rkde/quadrature.hpp"

namespace rkde {

Kernel::Kernel(std::string id, std::size_t dim, Eval eval,
               std::vector<double> mu2, double roughness)
    : id_(std::move(id)),
      dim_(dim),
      eval_(std::move(eval)),
      mu2_(std::move(mu2)),
      roughness_(roughness) {
  if (dim_ == 0) throw std::invalid_argument("kernel dimension must be positive");
  if (!eval_) throw std::invalid_argument("kernel needs an evaluator");
  if (mu2_.size() != dim_)
    throw std::invalid_argument("kernel needs one second moment per coordinate");
  for (double m : mu2_)
    if (!(m > 0.0)) throw std::invalid_argument("kernel second moments must be positive");
  if (!(roughness_ > 0.0)) throw std::invalid_argument("kernel roughness must be positive");
}

Kernel gaussian_kernel(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("kernel dimension must be positive");
  const double norm = std::pow(2.0 * std::numbers::pi, -0.5 * static_cast<double>(dim));
  const double roughness =
      std::pow(2.0 * std::sqrt(std::numbers::pi), -static_cast<double>(dim));
  auto eval = [norm](std::span<const double> z) {
    double r2 = 0.0;
    for (double v : z) r2 += v * v;
    return norm * std::exp(-0.5 * r2);
  };
  return Kernel("gaussian-product-d" + std::to_string(dim), dim, eval,
                std::vector<double>(dim, 1.0), roughness);
}

KernelMoments kernel_moments(const Kernel& k, const KernelQuadrature& q) {
  const std::size_t d = k.dim();
  const QuadratureRule rule = gauss_legendre(q.nodes, -q.bound, q.bound);
  KernelMoments m;
  m.mass = integrate_tensor(d, rule, [&](std::span<const double> z) { return k(z); });
  m.roughness = integrate_tensor(d, rule, [&](std::span<const double> z) {
    const double v = k(z);
    return v * v;
  });
  for (std::size_t j = 0; j < d; ++j) {
    m.first.push_back(integrate_tensor(
        d, rule, [&](std::span<const double> z) { return z[j] * k(z); }));
    m.second.push_back(integrate_tensor(
        d, rule, [&](std::span<const double> z) { return z[j] * z[j] * k(z); }));
    m.second_abs.push_back(integrate_tensor(d, rule, [&](std::span<const double> z) {
      return z[j] * z[j] * std::abs(k(z));
    }));
  }
  return m;
}

A1Report a1_check(const Kernel& k, double tol, const KernelQuadrature& q) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  A1Report r;
  r.moments = kernel_moments(k, q);
  const KernelMoments wide = kernel_moments(k, {2 * q.nodes, 2.0 * q.bound});

  std::ostringstream why;
  r.unit_mass = std::abs(r.moments.mass - 1.0) < tol;
  if (!r.unit_mass) why << "unit mass violated: int K = " << r.moments.mass << "; ";

  r.centered = true;
  for (std::size_t j = 0; j < k.dim(); ++j) {
    if (!(std::abs(r.moments.first[j]) < tol)) {
      r.centered = false;
      why << "first moment " << j << " = " << r.moments.first[j] << "; ";
    }
  }

  r.finite_second_moments = true;
  for (std::size_t j = 0; j < k.dim(); ++j) {
    const double a = r.moments.second_abs[j];
    const double b = wide.second_abs[j];
    if (!std::isfinite(a) || std::abs(b - a) >= tol * std::max(1.0, std::abs(a))) {
      r.finite_second_moments = false;
      why << "second absolute moment " << j << " not converged (" << a << " vs " << b
          << "); ";
    }
  }

  r.passed = r.unit_mass && r.centered && r.finite_second_moments;
  r.failure = why.str();
  return r;
}

}  // namespace rkde
