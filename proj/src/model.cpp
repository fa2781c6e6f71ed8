#include "notrade/model.hpp"

#include <cmath>
#include <string>

#include "notrade/errors.hpp"

namespace notrade {

ModelParams::ModelParams(double rho0, double rho1, double c)
    : rho0_(rho0), rho1_(rho1), c_(c) {
  if (!std::isfinite(rho0) || !std::isfinite(rho1) || !std::isfinite(c))
    throw InvalidParams("model parameters must be finite");
  if (!(rho0 > 0.0))
    throw InvalidParams("rho0 must be positive, got " + std::to_string(rho0));
  if (rho1 == 0.0)
    throw InvalidParams("rho1 must be nonzero (the boundary divides by rho1)");
  if (!(c >= 0.0))
    throw InvalidParams("switch cost must be nonnegative, got " + std::to_string(c));
}

bool ModelParams::on_circle(double energy, double tol) const noexcept {
  return std::abs(rho0_ * rho0_ + rho1_ * rho1_ - energy) <= tol;
}

MarketState transition(const MarketState& s, Action u, double noise) noexcept {
  return {noise, s.x0, position_after(u)};
}

double reward(const MarketState& s, Action u, const ModelParams& p) noexcept {
  const Position next = position_after(u);
  const double fee = next != s.q ? p.cost() : 0.0;
  return predictable_return(s.x0, s.x1, next, p) - fee;
}

double predictable_return(double x0, double x1, Position q,
                          const ModelParams& p) noexcept {
  return sign(q) * (p.rho0() * x0 + p.rho1() * x1);
}

double target(double x0, double x1, double eps, const ModelParams& p) noexcept {
  return p.rho0() * x0 + p.rho1() * x1 + eps;
}

MarketState mirror(const MarketState& s) noexcept {
  return {-s.x0, -s.x1, opposite(s.q)};
}

}  // namespace notrade
