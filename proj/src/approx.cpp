#include "notrade/approx.hpp"

#include "notrade/gaussian.hpp"

namespace notrade {

double naive_boundary(double x, Position q, const ModelParams& p) {
  const double intercept = p.cost() / (2.0 * p.rho1());
  return -(p.rho0() / p.rho1()) * x - sign(q) * intercept;
}

double h_zero_cost(double x, const ModelParams& p) {
  const double s = p.kappa() * x;
  // int_{-s}^{s} f = mass(-s, s);  int_0^s y f(y) dy = f(0) - f(s)
  return p.rho0() * x + p.rho1() * x * gaussian_mass(-s, s) -
         2.0 * p.rho0() * (kInvSqrt2Pi - std_normal_pdf(s));
}

double dG_dc_zero(double x, const ModelParams& p) {
  const double r1 = p.rho1(), k = p.kappa();
  const double s = k * x;
  const double fs = std_normal_pdf(s);
  const double h_plus = h_zero_cost(s, p);
  const double h_minus = h_zero_cost(-s, p);
  return -1.0 / (2.0 * r1)
         - (1.0 / (2.0 * r1 * r1)) * h_plus * fs * (-k)
         + (1.0 / (2.0 * r1 * r1)) * h_minus * fs * (-k)
         - x * std_normal_pdf(-s) * (-1.0 / r1) * (-k)
         - (1.0 / (2.0 * r1)) * gaussian_mass(-s, s);
}

double first_order_boundary(double x, double c, Position q, const ModelParams& p) {
  const double g = -(p.rho0() / p.rho1()) * x + dG_dc_zero(x, p) * c;
  return q == Position::Long ? g : g + c / p.rho1();
}

GridFunction FirstOrderBoundary::tabulate(std::span<const double> nodes) const {
  const auto shape = params_.rho1() > 0.0 ? GridFunction::Shape::MonotoneDecreasing
                                          : GridFunction::Shape::General;
  return GridFunction::tabulate(nodes, [this](double x) { return (*this)(x); }, shape);
}

}  // namespace notrade
