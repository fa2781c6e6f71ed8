#pragma once

#include <span>

#include "notrade/grid_function.hpp"
#include "notrade/model.hpp"

namespace notrade {

/// Myopic boundary: switch only when this period's reward net of the fee
/// beats holding. -(rho0/rho1) x -/+ c/(2 rho1) for q = +1 / -1.
double naive_boundary(double x, Position q, const ModelParams& p);

/// Bias slice for the long holder at zero cost, normalized so the
/// average-reward relation holds:
///   rho0 x + rho1 x P(|Y| < k x) - 2 rho0 int_0^{k x} y f(y) dy,  k = rho1/rho0.
/// The integrals are evaluated in closed form. Note the result minus rho0 x is
/// even in x; the function itself is not odd.
double h_zero_cost(double x, const ModelParams& p);

/// Sensitivity of the long boundary to the switch cost at c = 0, assembled
/// term by term from the first-order expansion of the boundary equation
/// (H terms from h_zero_cost). The cost field of `p` is ignored.
double dG_dc_zero(double x, const ModelParams& p);

/// -(rho0/rho1) x + dG_dc_zero(x) c, shifted by c/rho1 for the short slice.
double first_order_boundary(double x, double c, Position q, const ModelParams& p);

/// First-order boundary bound to a parameter set; the cost is taken from params.
class FirstOrderBoundary {
 public:
  explicit FirstOrderBoundary(ModelParams params) : params_(params) {}

  const ModelParams& params() const noexcept { return params_; }
  double operator()(double x, Position q = Position::Long) const {
    return first_order_boundary(x, params_.cost(), q, params_);
  }
  GridFunction tabulate(std::span<const double> nodes) const;

 private:
  ModelParams params_;
};

}  // namespace notrade
