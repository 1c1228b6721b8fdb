#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "rkde/kernel.hpp"
#include "rkde/quadrature.hpp"

using namespace rkde;
using doctest::Approx;

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  const auto rule = gauss_legendre(8, -1.0, 2.0);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    s += rule.weights[i] * std::pow(rule.nodes[i], 15);
  // int_{-1}^{2} x^15 dx = (2^16 - 1) / 16
  CHECK(s == Approx((65536.0 - 1.0) / 16.0).epsilon(1e-13));
}

TEST_CASE("tensor quadrature of a separable integrand") {
  const auto rule = gauss_legendre(32, 0.0, 1.0);
  const double v = integrate_tensor(2, rule, [](std::span<const double> z) {
    return std::exp(z[0]) * std::cos(z[1]);
  });
  CHECK(v == Approx((std::exp(1.0) - 1.0) * std::sin(1.0)).epsilon(1e-13));
}

TEST_CASE("gaussian kernel constants") {
  const auto k1 = gaussian_kernel(1);
  CHECK(k1.roughness() == Approx(0.2820948).epsilon(1e-7));
  CHECK(k1.mu2() == std::vector<double>{1.0});
  const auto k2 = gaussian_kernel(2);
  CHECK(k2.roughness() == Approx(0.0795775).epsilon(1e-7));
  CHECK(k2.roughness() == Approx(k1.roughness() * k1.roughness()).epsilon(1e-15));
  CHECK(gaussian_kernel(5).mu2() == std::vector<double>(5, 1.0));
  CHECK_THROWS_AS(gaussian_kernel(0), std::invalid_argument);
  const double z0[] = {0.0};
  CHECK(k1(z0) == Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)));
}

TEST_CASE("stored constants agree with fresh quadrature within 1e-8") {
  for (std::size_t d : {1u, 2u}) {
    const auto k = gaussian_kernel(d);
    const auto m = kernel_moments(k);
    CHECK(std::abs(m.roughness - k.roughness()) < 1e-8);
    for (std::size_t j = 0; j < d; ++j) CHECK(std::abs(m.second[j] - k.mu2()[j]) < 1e-8);
    CHECK(std::abs(m.mass - 1.0) < 1e-8);
  }
  // Roughness in d = 1 against an independent fine rule on a wider box.
  const auto k = gaussian_kernel(1);
  const auto rule = gauss_legendre(200, -12.0, 12.0);
  const double r = integrate_tensor(1, rule, [&](std::span<const double> z) {
    const double v = k(z);
    return v * v;
  });
  CHECK(r == Approx(1.0 / (2.0 * std::sqrt(std::numbers::pi))).epsilon(1e-12));
}

TEST_CASE("gaussian kernel is symmetric") {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> nd(0.0, 2.0);
  for (std::size_t d : {1u, 2u, 3u}) {
    const auto k = gaussian_kernel(d);
    for (int t = 0; t < 100; ++t) {
      std::vector<double> z(d), mz(d);
      for (std::size_t j = 0; j < d; ++j) mz[j] = -(z[j] = nd(gen));
      CHECK(k(z) == k(mz));
    }
  }
}

TEST_CASE("a1_check passes the gaussian kernel") {
  const auto rep = a1_check(gaussian_kernel(1), 1e-6);
  CHECK(rep.passed);
  CHECK(rep.failure.empty());
  CHECK(a1_check(gaussian_kernel(2), 1e-6).passed);
}

TEST_CASE("a1_check names the violated condition") {
  const auto g = gaussian_kernel(1);
  const Kernel doubled("double", 1, [g](std::span<const double> z) { return 2.0 * g(z); }, {2.0},
                       4.0 * g.roughness());
  const auto r1 = a1_check(doubled, 1e-6);
  CHECK_FALSE(r1.passed);
  CHECK_FALSE(r1.unit_mass);
  CHECK(r1.failure.find("mass") != std::string::npos);

  const Kernel shifted(
      "shifted", 1,
      [g](std::span<const double> z) {
        const double u[] = {z[0] - 1.0};
        return g(u);
      },
      {2.0}, g.roughness());
  const auto r2 = a1_check(shifted, 1e-6);
  CHECK_FALSE(r2.passed);
  CHECK(r2.unit_mass);
  CHECK_FALSE(r2.centered);

  // Cauchy kernel: unit mass and centered, but z^2 |K| is not integrable.
  const Kernel cauchy(
      "cauchy", 1,
      [](std::span<const double> z) { return 1.0 / (std::numbers::pi * (1.0 + z[0] * z[0])); },
      {1.0}, 1.0);
  const auto r3 = a1_check(cauchy, 1e-1);
  CHECK_FALSE(r3.passed);
  CHECK_FALSE(r3.finite_second_moments);
}

TEST_CASE("kernel construction validates its constants") {
  const auto eval = [](std::span<const double>) { return 0.0; };
  CHECK_THROWS_AS(Kernel("k", 1, eval, {0.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Kernel("k", 1, eval, {1.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Kernel("k", 2, eval, {1.0}, 1.0), std::invalid_argument);
}
