#include "notrade/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "notrade/errors.hpp"
#include "notrade/gaussian.hpp"

namespace notrade {

namespace {

constexpr double kSqrt2PiE = 4.1327313541224930;  // sqrt(2 pi e)

double singular_point(const ModelParams& p) { return -p.cost() / (2.0 * p.rho1()); }

double min_spacing(std::span<const double> nodes) {
  double h = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < nodes.size(); ++i) h = std::min(h, nodes[i] - nodes[i - 1]);
  return h;
}

std::vector<double> probe_grid(const GridFunction& g) {
  return uniform_grid(std::max(std::abs(g.lo()), std::abs(g.hi())), 4 * (g.size() - 1) + 1);
}

}  // namespace

SpaceConstants SpaceConstants::from_delta(const ModelParams& params, double delta) {
  if (!(delta >= 0.0 && delta < 1.0)) throw InvalidParams("delta must lie in [0, 1)");
  SpaceConstants s;
  s.delta = delta;
  s.A2 = 1.0 - delta;
  s.A3 = 1.0 + delta;
  const double k = std::abs(params.kappa());
  const double denom = 1.0 - k * 2.0 / (kSqrt2PiE * s.A2);
  if (!(denom > 0.0))
    throw InvalidParams("no finite bias bound for this rho1/rho0 and delta");
  s.A1 = (1.0 + k) / denom;
  return s;
}

double weighted_norm_H(const GridFunction& H, const ModelParams& params, double tolerance) {
  const double xs = singular_point(params);
  const double half = 0.5 * min_spacing(H.nodes());
  const double on_node = 1e-12 * (1.0 + std::abs(xs));
  double m = 0.0;
  for (std::size_t i = 0; i < H.size(); ++i) {
    const double x = H.nodes()[i], v = H.values()[i];
    const double gap = std::abs(x - xs);
    if (gap <= on_node && std::abs(v) > tolerance)
      throw SingularityOnGrid("bias is nonzero at the weight singularity x = -c/(2 rho1)");
    if (gap < half) continue;
    m = std::max(m, std::abs(v / (x - xs)));
  }
  return m / params.rho0();
}

double boundary_distance(const GridFunction& G1, const GridFunction& G2,
                         const ModelParams& params) {
  if (G1.size() != G2.size()) throw InvalidParams("boundaries live on different grids");
  const double scale = 1e-12 * std::max(1.0, G1.hi() - G1.lo());
  double m = 0.0;
  for (std::size_t i = 0; i < G1.size(); ++i) {
    const double x = G1.nodes()[i];
    if (std::abs(x - G2.nodes()[i]) > scale)
      throw InvalidParams("boundaries live on different grids");
    if (std::abs(x) <= scale) continue;
    m = std::max(m, std::abs((G1.values()[i] - G2.values()[i]) / x));
  }
  return std::abs(params.kappa()) * m;
}

double slope_corridor(const GridFunction& G, const ModelParams& params) {
  const double scale = -params.rho1() / params.rho0();
  double d = 0.0;
  for (double x : probe_grid(G)) d = std::max(d, std::abs(scale * G.derivative(x) - 1.0));
  return d;
}

std::pair<double, double> fit_row(const std::vector<double>& x, const std::vector<double>& y,
                                  const std::vector<double>& z) {
  const std::size_t n = z.size();
  auto feasible = [&](double a, double b) {
    if (a < 0.0 || b < 0.0) return false;
    for (std::size_t k = 0; k < n; ++k)
      if (a * x[k] + b * y[k] < z[k] * (1.0 - 1e-12) - 1e-300) return false;
    return true;
  };
  std::vector<std::pair<double, double>> cand{{0.0, 0.0}};
  for (std::size_t k = 0; k < n; ++k) {
    if (x[k] > 0.0) cand.emplace_back(z[k] / x[k], 0.0);
    if (y[k] > 0.0) cand.emplace_back(0.0, z[k] / y[k]);
    for (std::size_t j = k + 1; j < n; ++j) {
      const double det = x[k] * y[j] - x[j] * y[k];
      if (std::abs(det) < 1e-300) continue;
      cand.emplace_back((z[k] * y[j] - z[j] * y[k]) / det, (x[k] * z[j] - x[j] * z[k]) / det);
    }
  }
  std::pair<double, double> best{std::numeric_limits<double>::infinity(), 0.0};
  double best_sum = std::numeric_limits<double>::infinity();
  for (auto [a, b] : cand) {
    if (a + b < best_sum && feasible(a, b)) {
      best_sum = a + b;
      best = {a, b};
    }
  }
  return best;
}

double residual_rate(const SolveReport& r) {
  const std::size_t n = r.residuals_H.size();
  if (n < 3) return 0.0;
  auto res = [&](std::size_t k) { return std::max(r.residuals_H[k], r.residuals_G[k]); };
  // iterations are 1-based; index 1 is iteration 2
  const double first = res(1), last = res(n - 1);
  if (!(first > 0.0) || !(last > 0.0)) return 0.0;
  return std::pow(last / first, 1.0 / static_cast<double>(n - 2));
}

double max_residual_ratio(const SolveReport& r) {
  double m = 0.0;
  for (std::size_t k = 2; k < r.residuals_H.size(); ++k) {
    const double prev = std::max(r.residuals_H[k - 1], r.residuals_G[k - 1]);
    const double cur = std::max(r.residuals_H[k], r.residuals_G[k]);
    if (prev > 0.0) m = std::max(m, cur / prev);
  }
  return m;
}

namespace {

/// A random smooth profile: constant plus three Gaussian bumps.
struct Profile {
  double b0 = 0.0;
  double b[3]{}, mu[3]{}, sigma[3]{};
  double scale = 1.0;

  double operator()(double x) const {
    double s = b0;
    for (int k = 0; k < 3; ++k) s += b[k] * std::exp(-0.5 * std::pow((x - mu[k]) / sigma[k], 2));
    return scale * s;
  }
  /// Integral from 0 to x.
  double integral(double x) const {
    double s = b0 * x;
    for (int k = 0; k < 3; ++k) {
      const double r = sigma[k] * std::sqrt(2.0);
      s += b[k] * sigma[k] * std::sqrt(M_PI / 2.0) *
           (std::erf((x - mu[k]) / r) + std::erf(mu[k] / r));
    }
    return scale * s;
  }
};

Profile random_profile(std::mt19937_64& rng, std::span<const double> nodes, double amplitude) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0), centre(-3.0, 3.0), width(0.3, 2.0);
  Profile p;
  p.b0 = coef(rng);
  for (int k = 0; k < 3; ++k) {
    p.b[k] = coef(rng);
    p.mu[k] = centre(rng);
    p.sigma[k] = width(rng);
  }
  double m = 0.0;
  for (double x : nodes) m = std::max(m, std::abs(p(x)));
  p.scale = m > 0.0 ? amplitude / m : 0.0;
  return p;
}

struct Point {
  GridFunction H, G;
};

}  // namespace

ContractionEstimate measure_contraction(const ModelParams& params, std::size_t n_pairs,
                                        std::uint64_t seed, const SolverConfig& config) {
  if (n_pairs < 10) throw InvalidParams("measure_contraction needs at least 10 pairs");
  const SolveResult fixed = solve_fixed_point(config, params);
  const GridFunction& Hs = fixed.solution.bias();
  const GridFunction& Gs = fixed.solution.boundary();
  const auto nodes = Hs.nodes();
  const double xs = singular_point(params);
  const double r0 = params.rho0(), r1 = params.rho1();

  ContractionEstimate est;
  est.solver_rate = residual_rate(fixed.report);
  const double corridor = slope_corridor(Gs, params);
  const double g_amp_max = 0.25 * (1.0 - std::min(corridor, 0.9));
  try {
    est.space = SpaceConstants::from_delta(params, std::min(corridor + g_amp_max, 0.99));
  } catch (const InvalidParams&) {
    est.space.A1 = std::numeric_limits<double>::infinity();
    est.space.delta = corridor + g_amp_max;
    est.space.A2 = 1.0 - est.space.delta;
    est.space.A3 = 1.0 + est.space.delta;
  }
  const double k = std::abs(params.kappa());
  est.a11_bound = 2.0 * k / (kSqrt2PiE * est.space.A2);
  est.a21_bound =
      params.cost() / std::abs(r1) * k * k / (std::sqrt(2.0 * M_PI) * est.space.A2 * est.space.A2);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto perturb_H = [&](bool active) {
    if (!active) return Hs;
    double amp = 0.01 + 0.19 * unit(rng);
    const Profile beta = random_profile(rng, nodes, 1.0);
    for (int attempt = 0; attempt < 20; ++attempt, amp *= 0.5) {
      GridFunction H = Hs.map([&](double x, double v) { return v + amp * r0 * (x - xs) * beta(x); });
      if (weighted_norm_H(H, params) <= est.space.A1) return H;
    }
    return Hs;
  };
  auto perturb_G = [&](bool active) {
    if (!active) return Gs;
    const double amp = g_amp_max * (0.05 + 0.95 * unit(rng));
    const Profile gamma = random_profile(rng, nodes, amp);
    std::vector<double> v(Gs.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] = Gs.values()[i] - (r0 / r1) * gamma.integral(nodes[i]);
    return GridFunction(std::vector<double>(nodes.begin(), nodes.end()), std::move(v),
                        GridFunction::Shape::MonotoneDecreasing);
  };

  std::vector<double> dH, dG, dT1, dT2;
  for (std::size_t s = 0; s < n_pairs; ++s) {
    const int kind = static_cast<int>(s % 3);  // 0: bias only, 1: boundary only, 2: both
    try {
      GridFunction ha = perturb_H(kind != 1), ga = perturb_G(kind != 0);
      GridFunction hb = perturb_H(kind != 1), gb = perturb_G(kind != 0);
      const Point p[2] = {{std::move(ha), std::move(ga)}, {std::move(hb), std::move(gb)}};
      const BiasBoundary b1(p[0].H, p[0].G, params), b2(p[1].H, p[1].G, params);
      const GridFunction t1a = bias_update(b1, config.quadrature);
      const GridFunction t1b = bias_update(b2, config.quadrature);
      const GridFunction t2a = boundary_update(b1, config.quadrature);
      const GridFunction t2b = boundary_update(b2, config.quadrature);
      std::vector<double> d1(t1a.size());
      for (std::size_t i = 0; i < d1.size(); ++i) d1[i] = t1a.values()[i] - t1b.values()[i];
      std::vector<double> dh(Hs.size());
      for (std::size_t i = 0; i < dh.size(); ++i) dh[i] = p[0].H.values()[i] - p[1].H.values()[i];
      const std::vector<double> nv(nodes.begin(), nodes.end());
      dH.push_back(weighted_norm_H(GridFunction(nv, dh), params));
      dG.push_back(boundary_distance(p[0].G, p[1].G, params));
      dT1.push_back(weighted_norm_H(GridFunction(nv, d1), params));
      dT2.push_back(boundary_distance(t2a, t2b, params));
    } catch (const BoundaryNotInvertible&) {
      continue;  // the perturbed boundary left the admissible set
    } catch (const NotMonotone&) {
      continue;
    }
  }
  est.samples = dH.size();
  std::tie(est.a11, est.a12) = fit_row(dH, dG, dT1);
  std::tie(est.a21, est.a22) = fit_row(dH, dG, dT2);
  return est;
}

namespace {

/// Maximizes fn on [lo, hi]: uniform scan, then golden-section on the
/// bracketing cells.
double scan_max(const std::function<double(double)>& fn, double lo, double hi) {
  constexpr int n = 200000;
  const double h = (hi - lo) / n;
  int best = 0;
  double bv = fn(lo);
  for (int i = 1; i <= n; ++i) {
    const double v = fn(lo + i * h);
    if (v > bv) {
      bv = v;
      best = i;
    }
  }
  double a = lo + std::max(0, best - 1) * h, b = lo + std::min(n, best + 1) * h;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = fn(c), fd = fn(d);
  while (b - a > 1e-13 * std::max(1.0, std::abs(a))) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - g * (b - a); fc = fn(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + g * (b - a); fd = fn(d);
    }
  }
  return std::max({bv, fc, fd});
}

}  // namespace

LemmaSuprema scan_lemma_suprema(double A3) {
  if (!(A3 > 0.0)) throw InvalidParams("A3 must be positive");
  LemmaSuprema s;
  s.A3 = A3;
  s.sup_f = scan_max([](double y) { return std_normal_pdf(y); }, -10.0, 10.0);
  s.sup_yf = scan_max([](double y) { return std::abs(y) * std_normal_pdf(y); }, -10.0, 10.0);
  s.sup_yf_scaled = scan_max(
      [A3](double y) { return std::abs(y) * std_normal_pdf(y / A3); }, -10.0 * A3, 10.0 * A3);
  return s;
}

SymmetryReport check_symmetries(const BiasBoundary& bb) {
  const ModelParams& p = bb.params();
  const double c = p.cost(), r1 = p.rho1();
  const GridFunction& G = bb.boundary();
  const auto probes = probe_grid(G);
  SymmetryReport rep;
  rep.probes = probes.size();

  for (double x : probes) {
    rep.boundary_odd = std::max(
        rep.boundary_odd, std::abs(bb.boundary(x, Position::Long) + bb.boundary(-x, Position::Short)));
    rep.slice_shift = std::max(
        rep.slice_shift,
        std::abs(bb.boundary(x, Position::Long) - bb.boundary(x, Position::Short) + c / r1));
    rep.bias_shift = std::max({rep.bias_shift,
        std::abs(bb.bias_long(x, Position::Long) - bb.bias_long(x, Position::Short) - c),
        std::abs(bb.bias_short(x, Position::Short) - bb.bias_short(x, Position::Long) - c)});
    for (Position q : {Position::Long, Position::Short}) {
      const double g = bb.boundary(x, q);
      const double jump = (r1 * g + bb.bias_long(x, q)) - (-r1 * g + bb.bias_short(x, q));
      rep.branch_continuity = std::max(rep.branch_continuity, std::abs(jump));
    }
  }

  // evenness of the reconstructed bias on a 2-D probe set
  const auto x1s = uniform_grid(G.hi(), 241);
  for (std::size_t i = 0; i < probes.size(); i += 4) {
    const double x0 = probes[i];
    for (double x1 : x1s)
      for (Position q : {Position::Long, Position::Short})
        rep.bias_even = std::max(rep.bias_even,
                                 std::abs(reconstruct_bias(bb, x0, x1, q) -
                                          reconstruct_bias(bb, -x0, -x1, opposite(q))));
  }

  // inverse-boundary bounds with the corridor measured on the same probes
  const double corridor = slope_corridor(G, p);
  const double delta = corridor * (1.0 + 1e-6) + 1e-9;
  if (delta < 1.0) {
    rep.space = SpaceConstants{std::numeric_limits<double>::quiet_NaN(), 1.0 - delta,
                               1.0 + delta, delta};
    try {
      rep.space = SpaceConstants::from_delta(p, delta);
    } catch (const InvalidParams&) {
    }
    const double xs = singular_point(p), k = std::abs(p.kappa());
    for (double x : probes) {
      const double a = std::abs(G.invert(x));
      const double lo = k / rep.space.A3 * std::abs(x - xs);
      const double hi = k / rep.space.A2 * std::abs(x - xs);
      rep.lemma_violation = std::max({rep.lemma_violation, lo - a, a - hi});
    }
  } else {
    rep.space.delta = delta;
    rep.lemma_violation = std::numeric_limits<double>::infinity();
  }
  return rep;
}

}  // namespace notrade
