#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "notrade/grid_function.hpp"

namespace notrade {

/// n-point Gauss-Legendre rule on [-1, 1].
class GaussLegendre {
 public:
  explicit GaussLegendre(int n);

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }

  template <class F>
  double integrate(F&& fn, double a, double b) const {
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double s = 0.0;
    for (std::size_t k = 0; k < nodes_.size(); ++k)
      s += weights_[k] * fn(mid + half * nodes_[k]);
    return half * s;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// n-point Gauss-Hermite rule for the standard normal weight:
/// E[g(Y)] ~ sum_k w_k g(y_k), exact for polynomials of degree <= 2n-1.
/// Nodes and weights come from the eigen-decomposition of the Jacobi matrix.
class GaussHermite {
 public:
  explicit GaussHermite(int n = 128);

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }

  template <class F>
  double expectation(F&& fn) const {
    double s = 0.0;
    for (std::size_t k = 0; k < nodes_.size(); ++k) s += weights_[k] * fn(nodes_[k]);
    return s;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Antiderivative cache for y -> integral of h(y) f(y), f the standard normal
/// density and h a tabulated function.
///
/// Inside the grid each cell is integrated with a fixed Gauss-Legendre rule on
/// the cell's cubic; beyond the grid h continues linearly and the tail pieces
/// are closed forms in the normal CDF. Infinite bounds are accepted and never
/// reach the quadrature.
class WeightedIntegral {
 public:
  explicit WeightedIntegral(const GridFunction& h, int points_per_cell = 5);

  /// Signed integral over [a, b]; swaps sign when a > b. Throws NonFiniteInput on NaN.
  double operator()(double a, double b) const;

 private:
  double antiderivative(double t) const;

  const GridFunction* h_;
  GaussLegendre rule_;
  std::vector<double> cumulative_;
};

/// One-off version of WeightedIntegral for a single interval.
double integrate_weighted(const GridFunction& h, double a, double b);

}  // namespace notrade
