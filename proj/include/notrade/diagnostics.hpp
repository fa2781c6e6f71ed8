#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "notrade/grid_function.hpp"
#include "notrade/model.hpp"
#include "notrade/solver.hpp"

namespace notrade {

/// Bounds defining the admissible bias and boundary spaces. The boundary
/// slope, scaled by -rho1/rho0, lies in [A2, A3]; the bias weighted norm is at
/// most A1.
struct SpaceConstants {
  double A1 = 1.0;
  double A2 = 1.0;
  double A3 = 1.0;
  double delta = 0.0;

  /// A2 = 1 - delta, A3 = 1 + delta and
  /// A1 = (1 + k) / (1 - k 2 / (sqrt(2 pi e) A2)),  k = rho1/rho0.
  /// Throws InvalidParams when delta is outside [0, 1) or A1 is not finite
  /// and positive.
  static SpaceConstants from_delta(const ModelParams& params, double delta);
};

/// (1/rho0) sup |H(x) / (x + c/(2 rho1))| over the nodes, skipping nodes
/// within half a grid step of -c/(2 rho1). Throws SingularityOnGrid if a
/// node sits on that point and |H| there exceeds `tolerance`.
double weighted_norm_H(const GridFunction& H, const ModelParams& params,
                       double tolerance = 1e-9);

/// (rho1/rho0) sup |G1(x) - G2(x)| / |x| over the shared nodes, x = 0
/// excluded. Throws InvalidParams if the node sets differ.
double boundary_distance(const GridFunction& G1, const GridFunction& G2,
                         const ModelParams& params);

/// Smallest delta such that -(rho1/rho0) G'(x) stays in [1 - delta, 1 + delta]
/// on a probe grid 4x finer than the boundary grid.
double slope_corridor(const GridFunction& G, const ModelParams& params);

struct ContractionEstimate {
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;
  std::size_t samples = 0;
  SpaceConstants space;
  /// Analytic upper bounds: a11 <= 2 k / (sqrt(2 pi e) A2) and
  /// a21 <= (c/rho1) k^2 / (sqrt(2 pi) A2^2), k = rho1/rho0.
  double a11_bound = 0.0;
  double a21_bound = 0.0;
  /// Geometric residual decay rate of the solve that produced the fixed point.
  double solver_rate = 0.0;

  double row1() const noexcept { return a11 + a12; }
  double row2() const noexcept { return a21 + a22; }
};

/// Samples admissible pairs around the fixed point (smooth bias bumps and
/// slope-space boundary bumps), applies both maps, and fits the smallest
/// row coefficients consistent with every sample. n_pairs >= 10.
ContractionEstimate measure_contraction(const ModelParams& params, std::size_t n_pairs,
                                        std::uint64_t seed, const SolverConfig& config = {});

/// Minimal a + b with a x_k + b y_k >= z_k for all k, a, b >= 0.
/// Exposed for testing.
std::pair<double, double> fit_row(const std::vector<double>& x, const std::vector<double>& y,
                                  const std::vector<double>& z);

/// Geometric mean of the residual ratios from iteration 2 on.
double residual_rate(const SolveReport& report);
/// Largest residual ratio from iteration 2 on (0 if fewer than 3 iterates).
double max_residual_ratio(const SolveReport& report);

struct LemmaSuprema {
  double sup_f = 0.0;             // sup f
  double sup_yf = 0.0;            // sup |y f(y)|
  double sup_yf_scaled = 0.0;     // sup |y f(y / A3)|
  double A3 = 1.0;
};

/// Fine scan plus golden-section refinement.
LemmaSuprema scan_lemma_suprema(double A3);

struct SymmetryReport {
  double boundary_odd = 0.0;        // max |G(x, 1) + G(-x, -1)|
  double slice_shift = 0.0;         // max |G(x, 1) - G(x, -1) + c/rho1|
  double bias_shift = 0.0;          // max |H+(x, 1) - H+(x, -1) - c| and the H- analogue
  double bias_even = 0.0;           // max |h(x0, x1, q) - h(-x0, -x1, -q)|
  double branch_continuity = 0.0;   // long and short branches agree on the boundary
  double lemma_violation = 0.0;     // worst breach of the inverse-boundary bounds
  SpaceConstants space;
  std::size_t probes = 0;
};

SymmetryReport check_symmetries(const BiasBoundary& bb);

}  // namespace notrade
