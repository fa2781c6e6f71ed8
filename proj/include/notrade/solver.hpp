#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "notrade/gaussian.hpp"
#include "notrade/grid_function.hpp"
#include "notrade/model.hpp"

namespace notrade {

class WeightedIntegral;

/// Bias and boundary slices of the long holder (q = +1). The other slices
/// follow from the model symmetries:
///   G(x, -1) = G(x, +1) + c/rho1
///   H+(x, -1) = H+(x, +1) - c,   H-(x, q) = H+(-x, -q).
class BiasBoundary {
 public:
  /// `boundary` must have the MonotoneDecreasing shape.
  BiasBoundary(GridFunction bias, GridFunction boundary, ModelParams params);

  const GridFunction& bias() const noexcept { return bias_; }
  const GridFunction& boundary() const noexcept { return boundary_; }
  const ModelParams& params() const noexcept { return params_; }

  double boundary(double x0, Position q) const;
  double bias_long(double x0, Position q) const;   // H+(x0, q)
  double bias_short(double x0, Position q) const;  // H-(x0, q)

 private:
  GridFunction bias_;
  GridFunction boundary_;
  ModelParams params_;
};

struct GridSpec {
  double extent = kTruncation;
  std::size_t nodes = 1201;
};

struct QuadratureSpec {
  int points_per_cell = 5;
};

enum class InitMode { Naive, ZeroCost, UserSupplied };

struct SolverConfig {
  double epsilon = 1e-8;
  int max_iterations = 500;
  GridSpec grid;
  QuadratureSpec quadrature;
  InitMode init = InitMode::ZeroCost;
  std::optional<BiasBoundary> initial;  // required for UserSupplied

  /// Throws InvalidParams.
  void validate() const;
};

struct SolveReport {
  double lambda = 0.0;
  int iterations = 0;
  std::vector<double> residuals_H;
  std::vector<double> residuals_G;
  bool converged = false;
  double epsilon = 0.0;
  std::vector<std::string> warnings;
};

struct SolveResult {
  BiasBoundary solution;
  SolveReport report;
};

class NotConverged : public std::runtime_error {
 public:
  explicit NotConverged(SolveResult partial);
  const SolveResult& partial() const noexcept { return partial_; }

 private:
  SolveResult partial_;
};

/// One application of the bias map at every node of the current bias grid:
///   rho0 (x + c/(2 rho1)) + rho1 x P(a < Y < -a)
///     + (int_a^0 - int_0^{-a}) H f + c P(0 < Y < -a),      a = G^{-1}(x).
GridFunction bias_update(const BiasBoundary& current, const QuadratureSpec& quad = {});

/// One application of the boundary map at every node of the current boundary grid:
///   -(rho0/rho1) x - c/(2 rho1)
///     + (int_{G^-1(-x)}^{G^-1(-x-c/rho1)} - int_{G^-1(x)}^{G^-1(x-c/rho1)}) H f / (2 rho1)
///     - x P(G^-1(x) < Y < G^-1(x-c/rho1)) - c/(2 rho1) P(G^-1(x) < Y < G^-1(-x)).
/// Throws BoundaryNotInvertible (iteration 0) if the result is not strictly decreasing.
GridFunction boundary_update(const BiasBoundary& current, const QuadratureSpec& quad = {});

/// lambda = -(rho0/(2 rho1)) c - c/2 + 2 int_0^inf H f.
double average_reward(const BiasBoundary& current, const QuadratureSpec& quad = {});

/// Starting pair for the iteration. Naive: naive boundary with the
/// single-period bias rho0 (x + c/(2 rho1)); ZeroCost: naive boundary with
/// the exact zero-cost bias.
BiasBoundary initial_guess(InitMode mode, const ModelParams& params, const GridSpec& grid);

/// Warnings for parameters outside the regime where contraction is proven.
std::vector<std::string> regime_warnings(const ModelParams& params);

/// Jacobi iteration of the bias and boundary maps until both sup-norm
/// updates are <= epsilon. Throws NotConverged (with the last iterate) when
/// max_iterations is exhausted, BoundaryNotInvertible if an iterate loses
/// monotonicity, InvalidParams if rho1 <= 0.
SolveResult solve_fixed_point(const SolverConfig& config, const ModelParams& params);

/// Bias function h(x0, x1, q) rebuilt from the long-holder slices.
double reconstruct_bias(const BiasBoundary& bb, double x0, double x1, Position q);

/// GoLong iff x1 >= G(x0, q); ties go long.
Action decide(const BiasBoundary& bb, const MarketState& s);

namespace detail {
GridFunction bias_update(const BiasBoundary& current, const WeightedIntegral& w);
GridFunction boundary_update(const BiasBoundary& current, const WeightedIntegral& w);
}  // namespace detail

}  // namespace notrade
