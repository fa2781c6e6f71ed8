#include "notrade/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "notrade/errors.hpp"
#include "notrade/gaussian.hpp"

namespace notrade {

GaussLegendre::GaussLegendre(int n) {
  if (n < 1) throw InvalidParams("GaussLegendre: n must be positive");
  nodes_.resize(n);
  weights_.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    nodes_[i] = -z;
    nodes_[n - 1 - i] = z;
    weights_[i] = weights_[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

GaussHermite::GaussHermite(int n) {
  if (n < 1) throw InvalidParams("GaussHermite: n must be positive");
  // Probabilists' Hermite recurrence: He_{k+1} = y He_k - k He_{k-1}.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  nodes_.resize(n);
  weights_.resize(n);
  for (int k = 0; k < n; ++k) {
    nodes_[k] = es.eigenvalues()[k];
    const double v0 = es.eigenvectors()(0, k);
    weights_[k] = v0 * v0;
  }
  // enforce exact symmetry of the rule
  for (int k = 0; k < n / 2; ++k) {
    const double x = 0.5 * (nodes_[n - 1 - k] - nodes_[k]);
    const double w = 0.5 * (weights_[k] + weights_[n - 1 - k]);
    nodes_[k] = -x;
    nodes_[n - 1 - k] = x;
    weights_[k] = weights_[n - 1 - k] = w;
  }
  if (n % 2 == 1) nodes_[n / 2] = 0.0;
}

namespace {

// integral over [u, v] of (alpha + beta y) f(y)
double linear_tail(double alpha, double beta, double u, double v) {
  return alpha * gaussian_mass(u, v) + beta * (std_normal_pdf(u) - std_normal_pdf(v));
}

}  // namespace

WeightedIntegral::WeightedIntegral(const GridFunction& h, int points_per_cell)
    : h_(&h), rule_(points_per_cell), cumulative_(h.size(), 0.0) {
  const auto x = h.nodes();
  auto integrand = [&h](double y) { return h(y) * std_normal_pdf(y); };
  for (std::size_t i = 0; i + 1 < h.size(); ++i)
    cumulative_[i + 1] = cumulative_[i] + rule_.integrate(integrand, x[i], x[i + 1]);
}

double WeightedIntegral::antiderivative(double t) const {
  const GridFunction& h = *h_;
  if (t <= h.lo()) {
    const double beta = h.slopes().front();
    const double alpha = h.values().front() - beta * h.lo();
    return -linear_tail(alpha, beta, t, h.lo());
  }
  if (t >= h.hi()) {
    const double beta = h.slopes().back();
    const double alpha = h.values().back() - beta * h.hi();
    return cumulative_.back() + linear_tail(alpha, beta, h.hi(), t);
  }
  const std::size_t i = h.cell(t);
  const double x0 = h.nodes()[i];
  if (t == x0) return cumulative_[i];
  return cumulative_[i] +
         rule_.integrate([&h](double y) { return h(y) * std_normal_pdf(y); }, x0, t);
}

double WeightedIntegral::operator()(double a, double b) const {
  if (std::isnan(a) || std::isnan(b)) throw NonFiniteInput("integrate_weighted: NaN bound");
  if (a == b) return 0.0;
  return antiderivative(b) - antiderivative(a);
}

double integrate_weighted(const GridFunction& h, double a, double b) {
  return WeightedIntegral(h)(a, b);
}

}  // namespace notrade
