#include "rkde/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rkde {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_dim(const Vector& x, std::size_t dim) {
  if (static_cast<std::size_t>(x.size()) != dim)
    throw std::invalid_argument("point dimension does not match the density");
}

}  // namespace

DensityModel DensityModel::standard_gaussian(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("dimension must be positive");
  return DensityModel(dim, "N(0,I" + std::to_string(dim) + ")", StandardGaussian{});
}

DensityModel DensityModel::mixture(std::vector<GaussianComponent> components) {
  if (components.empty()) throw std::invalid_argument("mixture needs a component");
  const auto dim = static_cast<std::size_t>(components.front().mean.size());
  if (dim == 0) throw std::invalid_argument("dimension must be positive");

  Mixture mix;
  double total = 0.0;
  for (const auto& c : components) {
    if (static_cast<std::size_t>(c.mean.size()) != dim ||
        static_cast<std::size_t>(c.covariance.rows()) != dim ||
        static_cast<std::size_t>(c.covariance.cols()) != dim)
      throw std::invalid_argument("mixture components must share one dimension");
    if (!(c.weight >= 0.0)) throw std::invalid_argument("mixture weights must be nonnegative");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("mixture weights must sum to 1");

  std::ostringstream name;
  name << "mix(";
  double running = 0.0;
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& c = components[i];
    Eigen::LLT<Matrix> llt(c.covariance);
    if (llt.info() != Eigen::Success)
      throw std::invalid_argument("mixture covariance must be positive definite");
    const Matrix chol = llt.matrixL();
    const double det = chol.diagonal().prod();
    const double norm =
        std::pow(2.0 * std::numbers::pi, -0.5 * static_cast<double>(dim)) / det;
    mix.components.push_back(
        {c.weight, c.mean, c.covariance, llt.solve(Matrix::Identity(dim, dim)), chol, norm});
    running += c.weight;
    mix.cumulative.push_back(running);
    if (i) name << "+";
    name << c.weight << "N([";
    for (Eigen::Index j = 0; j < c.mean.size(); ++j) name << (j ? "," : "") << c.mean[j];
    name << "])";
  }
  mix.cumulative.back() = 1.0;
  name << ")";
  return DensityModel(dim, name.str(), std::move(mix));
}

DensityModel DensityModel::linear_image(const DensityModel& base, const Matrix& transform) {
  const auto dim = base.dim();
  if (static_cast<std::size_t>(transform.rows()) != dim ||
      static_cast<std::size_t>(transform.cols()) != dim)
    throw std::invalid_argument("transform must be d x d");
  Eigen::FullPivLU<Matrix> lu(transform);
  if (!lu.isInvertible()) throw std::invalid_argument("transform must be invertible");
  std::ostringstream name;
  name << "A*" << base.name();
  return DensityModel(dim, name.str(),
                      LinearImage{std::make_shared<const DensityModel>(base), transform,
                                  lu.inverse(), std::abs(lu.determinant())});
}

double DensityModel::pdf(const Vector& x) const {
  check_dim(x, dim_);
  return std::visit(
      Overloaded{
          [&](const StandardGaussian&) {
            return std::pow(2.0 * std::numbers::pi, -0.5 * static_cast<double>(dim_)) *
                   std::exp(-0.5 * x.squaredNorm());
          },
          [&](const Mixture& m) {
            double f = 0.0;
            for (const auto& c : m.components) {
              const Vector u = x - c.mean;
              f += c.weight * c.norm * std::exp(-0.5 * u.dot(c.precision * u));
            }
            return f;
          },
          [&](const LinearImage& li) {
            return li.base->pdf(li.inverse * x) / li.abs_det;
          }},
      impl_);
}

Matrix DensityModel::hessian(const Vector& x) const {
  check_dim(x, dim_);
  const auto d = static_cast<Eigen::Index>(dim_);
  return std::visit(
      Overloaded{
          [&](const StandardGaussian&) -> Matrix {
            return pdf(x) * (x * x.transpose() - Matrix::Identity(d, d));
          },
          [&](const Mixture& m) -> Matrix {
            Matrix h = Matrix::Zero(d, d);
            for (const auto& c : m.components) {
              const Vector u = x - c.mean;
              const Vector pu = c.precision * u;
              const double f = c.norm * std::exp(-0.5 * u.dot(pu));
              h += c.weight * f * (pu * pu.transpose() - c.precision);
            }
            return h;
          },
          [&](const LinearImage& li) -> Matrix {
            return li.inverse.transpose() * li.base->hessian(li.inverse * x) * li.inverse /
                   li.abs_det;
          }},
      impl_);
}

Vector DensityModel::mean() const {
  const auto d = static_cast<Eigen::Index>(dim_);
  return std::visit(Overloaded{[&](const StandardGaussian&) -> Vector { return Vector::Zero(d); },
                               [&](const Mixture& m) -> Vector {
                                 Vector mu = Vector::Zero(d);
                                 for (const auto& c : m.components) mu += c.weight * c.mean;
                                 return mu;
                               },
                               [&](const LinearImage& li) -> Vector {
                                 return li.transform * li.base->mean();
                               }},
                    impl_);
}

Matrix DensityModel::covariance() const {
  const auto d = static_cast<Eigen::Index>(dim_);
  return std::visit(
      Overloaded{[&](const StandardGaussian&) -> Matrix { return Matrix::Identity(d, d); },
                 [&](const Mixture& m) -> Matrix {
                   const Vector mu = mean();
                   Matrix s = Matrix::Zero(d, d);
                   for (const auto& c : m.components)
                     s += c.weight * (c.covariance + c.mean * c.mean.transpose());
                   return s - mu * mu.transpose();
                 },
                 [&](const LinearImage& li) -> Matrix {
                   return li.transform * li.base->covariance() * li.transform.transpose();
                 }},
      impl_);
}

std::vector<GaussianComponent> DensityModel::gaussian_components() const {
  const auto d = static_cast<Eigen::Index>(dim_);
  return std::visit(
      Overloaded{[&](const StandardGaussian&) -> std::vector<GaussianComponent> {
                   return {{1.0, Vector::Zero(d), Matrix::Identity(d, d)}};
                 },
                 [&](const Mixture& m) {
                   std::vector<GaussianComponent> out;
                   for (const auto& c : m.components)
                     out.push_back({c.weight, c.mean, c.covariance});
                   return out;
                 },
                 [&](const LinearImage& li) {
                   auto out = li.base->gaussian_components();
                   for (auto& c : out) {
                     c.mean = li.transform * c.mean;
                     c.covariance = li.transform * c.covariance * li.transform.transpose();
                   }
                   return out;
                 }},
      impl_);
}

DensityModel DensityModel::smoothed(double variance) const {
  if (!(variance >= 0.0)) throw std::invalid_argument("smoothing variance must be nonnegative");
  auto comps = gaussian_components();
  const auto d = static_cast<Eigen::Index>(dim_);
  for (auto& c : comps) c.covariance += variance * Matrix::Identity(d, d);
  return mixture(std::move(comps));
}

void DensityModel::draw(Philox& rng, Vector& out) const {
  out.resize(static_cast<Eigen::Index>(dim_));
  std::visit(Overloaded{[&](const StandardGaussian&) {
                          for (Eigen::Index j = 0; j < out.size(); ++j) out[j] = rng.normal();
                        },
                        [&](const Mixture& m) {
                          std::size_t i = 0;
                          if (m.components.size() > 1) {
                            const double u = rng.uniform();
                            while (i + 1 < m.components.size() && u >= m.cumulative[i]) ++i;
                          }
                          const auto& c = m.components[i];
                          Vector z(out.size());
                          for (Eigen::Index j = 0; j < z.size(); ++j) z[j] = rng.normal();
                          out.noalias() = c.mean + c.chol * z;
                        },
                        [&](const LinearImage& li) {
                          Vector y;
                          li.base->draw(rng, y);
                          out.noalias() = li.transform * y;
                        }},
             impl_);
}

std::vector<Vector> DensityModel::sample(Philox& rng, std::size_t count) const {
  std::vector<Vector> xs(count);
  for (auto& x : xs) draw(rng, x);
  return xs;
}

double curvature(const DensityModel& model, const Kernel& k, const Vector& x) {
  if (k.dim() != model.dim()) throw std::invalid_argument("kernel and density dimensions differ");
  const Vector h = model.hessian_diag(x);
  double s = 0.0;
  for (std::size_t j = 0; j < k.dim(); ++j) s += k.mu2()[j] * h[static_cast<Eigen::Index>(j)];
  return s;
}

namespace {

double trapezoid_curvature_sq(const DensityModel& model, const Kernel& k, const Vector& lo,
                              const Vector& hi, std::size_t points) {
  const std::size_t d = model.dim();
  std::vector<double> step(d);
  for (std::size_t j = 0; j < d; ++j)
    step[j] = (hi[static_cast<Eigen::Index>(j)] - lo[static_cast<Eigen::Index>(j)]) /
              static_cast<double>(points - 1);
  std::vector<std::size_t> idx(d, 0);
  Vector x(static_cast<Eigen::Index>(d));
  double total = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      x[jj] = lo[jj] + step[j] * static_cast<double>(idx[j]);
      w *= step[j] * ((idx[j] == 0 || idx[j] == points - 1) ? 0.5 : 1.0);
    }
    const double s = curvature(model, k, x);
    total += w * s * s;
    std::size_t j = 0;
    while (j < d && ++idx[j] == points) idx[j++] = 0;
    if (j == d) break;
  }
  return total;
}

}  // namespace

MiseFunctional mise_functionals(const DensityModel& model, const Kernel& k) {
  const std::size_t d = model.dim();
  if (d > 2) throw std::invalid_argument("mise_functionals supports d <= 2");
  const Vector mu = model.mean();
  const Vector sd = model.covariance().diagonal().cwiseSqrt();

  MiseFunctional r;
  r.points_per_axis = d == 1 ? 2048 : 512;
  r.lower = mu - 10.0 * sd;
  r.upper = mu + 10.0 * sd;
  r.value = trapezoid_curvature_sq(model, k, r.lower, r.upper, r.points_per_axis);
  r.coarse_value = trapezoid_curvature_sq(model, k, r.lower, r.upper, r.points_per_axis / 2);
  if (std::abs(r.value - r.coarse_value) > 1e-3 * std::abs(r.value)) {
    std::ostringstream msg;
    msg << "curvature quadrature not converged: " << r.value << " vs " << r.coarse_value;
    throw std::runtime_error(msg.str());
  }
  return r;
}

}  // namespace rkde
