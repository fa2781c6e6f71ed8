#pragma once

// MDP primitives for the single-asset long/short trading problem with a
// two-lag signal:  Y_t = rho0 * X_t + rho1 * X_{t-1} + eps_t.

namespace notrade {

enum class Position { Long = 1, Short = -1 };

enum class Action { GoLong, GoShort };

constexpr double sign(Position q) { return q == Position::Long ? 1.0 : -1.0; }

constexpr Position opposite(Position q) {
  return q == Position::Long ? Position::Short : Position::Long;
}

constexpr Action opposite(Action u) {
  return u == Action::GoLong ? Action::GoShort : Action::GoLong;
}

constexpr Position position_after(Action u) {
  return u == Action::GoLong ? Position::Long : Position::Short;
}

/// Correlation strengths and switching cost. Validated on construction.
class ModelParams {
 public:
  /// Throws InvalidParams unless rho0 > 0, rho1 != 0, c >= 0 and all finite.
  ModelParams(double rho0, double rho1, double c);

  double rho0() const noexcept { return rho0_; }
  double rho1() const noexcept { return rho1_; }
  double cost() const noexcept { return c_; }
  double kappa() const noexcept { return rho1_ / rho0_; }

  ModelParams with_cost(double c) const { return {rho0_, rho1_, c}; }

  /// True when rho0^2 + rho1^2 equals `energy` to within `tol`.
  bool on_circle(double energy, double tol = 1e-12) const noexcept;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  double rho0_;
  double rho1_;
  double c_;
};

struct MarketState {
  double x0 = 0.0;  // current-period signal
  double x1 = 0.0;  // previous-period signal
  Position q = Position::Long;

  friend bool operator==(const MarketState&, const MarketState&) = default;
};

/// (x0, x1, q) -> (noise, x0, position after u).
MarketState transition(const MarketState& s, Action u, double noise) noexcept;

/// Signal term of the new position minus the switch fee if the position flips.
double reward(const MarketState& s, Action u, const ModelParams& p) noexcept;

/// q * (rho0 x0 + rho1 x1): the expected one-period return of holding q.
double predictable_return(double x0, double x1, Position q,
                          const ModelParams& p) noexcept;

/// Realized target Y = rho0 x0 + rho1 x1 + eps.
double target(double x0, double x1, double eps, const ModelParams& p) noexcept;

/// (x0, x1, q) -> (-x0, -x1, -q).
MarketState mirror(const MarketState& s) noexcept;

}  // namespace notrade
