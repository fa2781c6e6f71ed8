#include <doctest.h>

#include <cmath>

#include "notrade/approx.hpp"
#include "notrade/solver.hpp"
#include "support.hpp"

using namespace notrade;
namespace ts = testing_support;
using doctest::Approx;

TEST_CASE("naive boundary") {
  const ModelParams p(0.8, 0.3, 0.5);
  CHECK(naive_boundary(0.0, Position::Long, p) == Approx(-0.5 / 0.6));
  for (double x : {-2.0, -0.1, 0.0, 1.7})
    CHECK(naive_boundary(x, Position::Short, p) - naive_boundary(x, Position::Long, p) ==
          Approx(0.5 / 0.3));
  const ModelParams z = p.with_cost(0.0);
  for (double x : {-2.0, 0.4})
    for (Position q : {Position::Long, Position::Short})
      CHECK(naive_boundary(x, q, z) == -(0.8 / 0.3) * x);
}

TEST_CASE("zero-cost bias against direct quadrature") {
  const ModelParams p(0.8, 0.4, 0.0);
  CHECK(h_zero_cost(0.0, p) == 0.0);
  for (double x : {-3.0, -1.0, -0.25, 0.5, 1.0, 2.0, 4.5})
    CHECK(h_zero_cost(x, p) == Approx(ts::h_zero_reference(x, 0.8, 0.4)).epsilon(1e-11));
  // H(x, 0) - rho0 x is even; H itself is not odd
  for (double x : {0.3, 1.0, 2.5}) {
    CHECK(h_zero_cost(-x, p) == Approx(h_zero_cost(x, p) - 2.0 * 0.8 * x).epsilon(1e-13));
    CHECK(h_zero_cost(x, p) + h_zero_cost(-x, p) > 1e-3);
  }
  // the cost field is irrelevant
  CHECK(h_zero_cost(1.3, p.with_cost(0.7)) == h_zero_cost(1.3, p));
}

TEST_CASE("boundary sensitivity at zero cost") {
  for (auto [r0, r1] : {std::pair{0.8, 0.4}, {0.8, 0.2}, {0.4, 0.8}, {0.3, 0.843}}) {
    const ModelParams p(r0, r1, 0.5);
    CAPTURE(r0);
    CAPTURE(r1);
    CHECK(dG_dc_zero(0.0, p) == -1.0 / (2.0 * r1));
    for (double x : {-3.0, -1.0, -0.2, 0.05, 0.7, 2.0}) {
      // the printed combination collapses to -Phi(k x)/rho1
      CHECK(dG_dc_zero(x, p) == Approx(-ts::cdf(r1 / r0 * x) / r1).epsilon(1e-12));
      CHECK(dG_dc_zero(x, p) + dG_dc_zero(-x, p) == Approx(-1.0 / r1).epsilon(1e-12));
    }
  }
}

TEST_CASE("sensitivity matches a finite difference of the solver") {
  const ModelParams p(0.8, 0.4, 0.0);
  const double c = 0.01;
  const SolverConfig cfg;
  const auto g0 = solve_fixed_point(cfg, p).solution;
  const auto gc = solve_fixed_point(cfg, p.with_cost(c)).solution;
  for (double x : {-1.0, 1.0}) {
    const double fd = (gc.boundary(x, Position::Long) - g0.boundary(x, Position::Long)) / c;
    CHECK(fd == Approx(dG_dc_zero(x, p)).epsilon(5e-2));
  }
  // solver symmetry under x -> -x: G(x) + G(-x) = -c/rho1 gives the same mirror relation
  const double fd_plus = (gc.boundary(0.6, Position::Long) - g0.boundary(0.6, Position::Long)) / c;
  const double fd_minus =
      (gc.boundary(-0.6, Position::Long) - g0.boundary(-0.6, Position::Long)) / c;
  CHECK(fd_plus + fd_minus == Approx(-1.0 / 0.4).epsilon(1e-6));
}

TEST_CASE("first-order boundary") {
  const ModelParams p(0.8, 0.4, 0.5);
  for (double x : {-2.0, 0.0, 1.5}) {
    CHECK(first_order_boundary(x, 0.0, Position::Long, p) == -(0.8 / 0.4) * x);
    CHECK(first_order_boundary(x, 0.3, Position::Short, p) -
              first_order_boundary(x, 0.3, Position::Long, p) ==
          Approx(0.3 / 0.4));
  }
  CHECK(first_order_boundary(0.0, 0.2, Position::Long, p) == Approx(-0.2 / 0.8));

  const FirstOrderBoundary fo(p);
  CHECK(fo(0.7) == first_order_boundary(0.7, 0.5, Position::Long, p));
  const auto tab = fo.tabulate(uniform_grid(6.0, 601));
  CHECK(tab.monotone_decreasing());

  // deviation from naive, in units of the zone width c/rho1, grows when the
  // lagged signal is comparable to the current one
  auto deviation = [](const ModelParams& q) {
    double m = 0.0;
    for (double x = -3.0; x <= 3.0; x += 0.01)
      m = std::max(m, std::abs(first_order_boundary(x, q.cost(), Position::Long, q) -
                               naive_boundary(x, Position::Long, q)));
    return m * q.rho1() / q.cost();
  };
  const double strong_lag = deviation(ModelParams(0.3, 0.8, 0.5));
  const double weak_lag = deviation(ModelParams(std::sqrt(0.79), 0.1, 0.5));
  CHECK(strong_lag > 0.4);
  CHECK(strong_lag > 2.0 * weak_lag);
}
