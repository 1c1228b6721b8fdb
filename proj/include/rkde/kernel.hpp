#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace rkde {

/// A multivariate smoothing kernel K: R^d -> R with its two constants:
/// per-coordinate second moments mu2[j] = int z_j^2 K(z) dz and the
/// roughness int K(z)^2 dz.
class Kernel {
 public:
  using Eval = std::function<double(std::span<const double>)>;

  Kernel(std::string id, std::size_t dim, Eval eval, std::vector<double> mu2,
         double roughness);

  double operator()(std::span<const double> z) const { return eval_(z); }

  const std::string& id() const { return id_; }
  std::size_t dim() const { return dim_; }
  const std::vector<double>& mu2() const { return mu2_; }
  double roughness() const { return roughness_; }

 private:
  std::string id_;
  std::size_t dim_;
  Eval eval_;
  std::vector<double> mu2_;
  double roughness_;
};

/// Product standard normal kernel; mu2 = 1 and roughness = (2 sqrt(pi))^{-d}.
Kernel gaussian_kernel(std::size_t dim);

/// Quadrature settings for kernel integrals: `nodes` Gauss-Legendre points
/// per axis on [-bound, bound].
struct KernelQuadrature {
  std::size_t nodes = 64;
  double bound = 8.0;
};

struct KernelMoments {
  double mass = 0.0;
  std::vector<double> first;       // int z_j K
  std::vector<double> second;      // int z_j^2 K
  std::vector<double> second_abs;  // int z_j^2 |K|
  double roughness = 0.0;          // int K^2
};

KernelMoments kernel_moments(const Kernel& k, const KernelQuadrature& q = {});

/// Outcome of the numerical check of the kernel moment conditions: unit mass,
/// vanishing first moments and finite absolute second moments.
struct A1Report {
  bool passed = false;
  bool unit_mass = false;
  bool centered = false;
  bool finite_second_moments = false;
  KernelMoments moments;
  std::string failure;  // empty when passed
};

/// Second-moment finiteness is judged by comparing the integral on the
/// default box against one twice as wide with twice the nodes.
A1Report a1_check(const Kernel& k, double tol, const KernelQuadrature& q = {});

}  // namespace rkde
