#include "notrade/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "notrade/approx.hpp"
#include "notrade/errors.hpp"
#include "notrade/quadrature.hpp"

namespace notrade {

BiasBoundary::BiasBoundary(GridFunction bias, GridFunction boundary, ModelParams params)
    : bias_(std::move(bias)), boundary_(std::move(boundary)), params_(params) {
  if (!boundary_.monotone_decreasing())
    throw BoundaryNotInvertible("boundary slice must be strictly decreasing", 0);
}

double BiasBoundary::boundary(double x0, Position q) const {
  const double g = boundary_(x0);
  return q == Position::Long ? g : g + params_.cost() / params_.rho1();
}

double BiasBoundary::bias_long(double x0, Position q) const {
  const double h = bias_(x0);
  return q == Position::Long ? h : h - params_.cost();
}

double BiasBoundary::bias_short(double x0, Position q) const {
  return bias_long(-x0, opposite(q));
}

void SolverConfig::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw InvalidParams("epsilon must be positive");
  if (max_iterations < 1) throw InvalidParams("max_iterations must be at least 1");
  if (!(grid.extent > 0.0) || !std::isfinite(grid.extent))
    throw InvalidParams("grid extent must be positive");
  if (grid.nodes < 3) throw InvalidParams("grid needs at least 3 nodes");
  if (quadrature.points_per_cell < 1)
    throw InvalidParams("quadrature needs at least one point per cell");
  if (init == InitMode::UserSupplied && !initial)
    throw InvalidParams("user-supplied initialization needs an initial pair");
}

NotConverged::NotConverged(SolveResult partial)
    : std::runtime_error("fixed-point iteration did not converge in " +
                         std::to_string(partial.report.iterations) + " iterations"),
      partial_(std::move(partial)) {}

namespace detail {

GridFunction bias_update(const BiasBoundary& current, const WeightedIntegral& w) {
  const ModelParams& p = current.params();
  const double r0 = p.rho0(), r1 = p.rho1(), c = p.cost();
  const GridFunction& g = current.boundary();
  return GridFunction::tabulate(current.bias().nodes(), [&](double x) {
    const double a = g.invert(x);
    return r0 * (x + c / (2.0 * r1)) + r1 * x * gaussian_mass(a, -a) + w(a, 0.0) -
           w(0.0, -a) + c * gaussian_mass(0.0, -a);
  });
}

GridFunction boundary_update(const BiasBoundary& current, const WeightedIntegral& w) {
  const ModelParams& p = current.params();
  const double r0 = p.rho0(), r1 = p.rho1(), c = p.cost();
  const double shift = c / r1;
  const GridFunction& g = current.boundary();
  std::vector<double> values;
  values.reserve(g.size());
  for (double x : g.nodes()) {
    const double lo_here = g.invert(x);            // G^-1(x)
    const double hi_here = g.invert(x - shift);    // G^-1(x - c/rho1)
    const double lo_mirror = g.invert(-x);         // G^-1(-x)
    const double hi_mirror = g.invert(-x - shift); // G^-1(-x - c/rho1)
    values.push_back(-(r0 / r1) * x - c / (2.0 * r1) +
                     (w(lo_mirror, hi_mirror) - w(lo_here, hi_here)) / (2.0 * r1) -
                     x * gaussian_mass(lo_here, hi_here) -
                     c / (2.0 * r1) * gaussian_mass(lo_here, lo_mirror));
  }
  try {
    return GridFunction({g.nodes().begin(), g.nodes().end()}, std::move(values),
                        GridFunction::Shape::MonotoneDecreasing);
  } catch (const NotMonotone& e) {
    throw BoundaryNotInvertible(e.what(), 0);
  }
}

}  // namespace detail

GridFunction bias_update(const BiasBoundary& current, const QuadratureSpec& quad) {
  return detail::bias_update(current, WeightedIntegral(current.bias(), quad.points_per_cell));
}

GridFunction boundary_update(const BiasBoundary& current, const QuadratureSpec& quad) {
  return detail::boundary_update(current,
                                 WeightedIntegral(current.bias(), quad.points_per_cell));
}

double average_reward(const BiasBoundary& current, const QuadratureSpec& quad) {
  const ModelParams& p = current.params();
  const double c = p.cost();
  const WeightedIntegral w(current.bias(), quad.points_per_cell);
  return -(p.rho0() / (2.0 * p.rho1())) * c - 0.5 * c +
         2.0 * w(0.0, std::numeric_limits<double>::infinity());
}

BiasBoundary initial_guess(InitMode mode, const ModelParams& params, const GridSpec& grid) {
  if (mode == InitMode::UserSupplied)
    throw InvalidParams("initial_guess cannot synthesize a user-supplied pair");
  const auto x = uniform_grid(grid.extent, grid.nodes);
  auto g = GridFunction::tabulate(
      x, [&](double v) { return naive_boundary(v, Position::Long, params); },
      GridFunction::Shape::MonotoneDecreasing);
  const double r0 = params.rho0(), shift = params.cost() / (2.0 * params.rho1());
  auto h = mode == InitMode::Naive
               ? GridFunction::tabulate(x, [&](double v) { return r0 * (v + shift); })
               : GridFunction::tabulate(x, [&](double v) { return h_zero_cost(v, params); });
  return {std::move(h), std::move(g), params};
}

std::vector<std::string> regime_warnings(const ModelParams& params) {
  std::vector<std::string> out;
  if (std::abs(params.rho1()) > params.rho0())
    out.emplace_back("rho1 > rho0: outside the regime where the iteration is proven to contract");
  if (params.cost() > params.rho0())
    out.emplace_back("c > rho0: outside the regime where the iteration is proven to contract");
  return out;
}

namespace {

double sup_diff(const GridFunction& a, const GridFunction& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

}  // namespace

SolveResult solve_fixed_point(const SolverConfig& config, const ModelParams& params) {
  config.validate();
  if (!(params.rho1() > 0.0))
    throw InvalidParams("the boundary solver requires rho1 > 0");

  BiasBoundary current = config.init == InitMode::UserSupplied
                             ? *config.initial
                             : initial_guess(config.init, params, config.grid);
  if (!(current.params() == params))
    current = BiasBoundary(current.bias(), current.boundary(), params);

  SolveReport report;
  report.epsilon = config.epsilon;
  report.warnings = regime_warnings(params);

  for (int k = 1; k <= config.max_iterations; ++k) {
    const WeightedIntegral w(current.bias(), config.quadrature.points_per_cell);
    GridFunction h_next = detail::bias_update(current, w);
    GridFunction g_next = [&] {
      try {
        return detail::boundary_update(current, w);
      } catch (const BoundaryNotInvertible& e) {
        throw BoundaryNotInvertible(e.what(), k);
      }
    }();
    const double rh = sup_diff(h_next, current.bias());
    const double rg = sup_diff(g_next, current.boundary());
    report.residuals_H.push_back(rh);
    report.residuals_G.push_back(rg);
    report.iterations = k;
    current = BiasBoundary(std::move(h_next), std::move(g_next), params);
    if (rh <= config.epsilon && rg <= config.epsilon) {
      report.converged = true;
      break;
    }
  }
  report.lambda = average_reward(current, config.quadrature);
  SolveResult result{std::move(current), std::move(report)};
  if (!result.report.converged) throw NotConverged(std::move(result));
  return result;
}

double reconstruct_bias(const BiasBoundary& bb, double x0, double x1, Position q) {
  const double r1 = bb.params().rho1();
  if (x1 >= bb.boundary(x0, q)) return r1 * x1 + bb.bias_long(x0, q);
  return -r1 * x1 + bb.bias_short(x0, q);
}

Action decide(const BiasBoundary& bb, const MarketState& s) {
  return s.x1 >= bb.boundary(s.x0, s.q) ? Action::GoLong : Action::GoShort;
}

}  // namespace notrade
