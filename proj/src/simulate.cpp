#include "notrade/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "notrade/approx.hpp"
#include "notrade/csv.hpp"
#include "notrade/errors.hpp"
#include "notrade/gaussian.hpp"
#include "notrade/quadrature.hpp"
#include "notrade/solver.hpp"

namespace notrade {

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Naive: return "naive";
    case PolicyKind::FirstOrder: return "first_order";
    case PolicyKind::Solver: return "solver";
    case PolicyKind::Custom: return "custom";
  }
  return "unknown";
}

PolicySpec PolicySpec::naive(const ModelParams& p) {
  return {PolicyKind::Naive, "naive",
          [p](double x) { return naive_boundary(x, Position::Long, p); },
          p.cost() / p.rho1()};
}

PolicySpec PolicySpec::first_order(const ModelParams& p) {
  return {PolicyKind::FirstOrder, "first_order",
          [p](double x) { return first_order_boundary(x, p.cost(), Position::Long, p); },
          p.cost() / p.rho1()};
}

PolicySpec PolicySpec::solver(const BiasBoundary& bb) {
  GridFunction g = bb.boundary();
  const ModelParams& p = bb.params();
  return {PolicyKind::Solver, "solver", [g = std::move(g)](double x) { return g(x); },
          p.cost() / p.rho1()};
}

PolicySpec PolicySpec::custom(std::string name, std::function<double(double)> long_boundary,
                              double zone_width) {
  if (!long_boundary) throw InvalidParams("custom policy needs a boundary function");
  if (!(zone_width >= 0.0)) throw InvalidParams("zone width must be nonnegative");
  return {PolicyKind::Custom, std::move(name), std::move(long_boundary), zone_width};
}

void SimConfig::validate() const {
  if (n_steps < 1) throw InvalidParams("n_steps must be at least 1");
  if (batches < 1 || batches > n_steps)
    throw InvalidParams("batches must be between 1 and n_steps");
}

namespace {

double batch_std_error(const std::vector<double>& means) {
  const auto b = static_cast<double>(means.size());
  if (means.size() < 2) return 0.0;
  double m = 0.0;
  for (double v : means) m += v;
  m /= b;
  double ss = 0.0;
  for (double v : means) ss += (v - m) * (v - m);
  return std::sqrt(ss / (b - 1.0) / b);
}

struct Lockstep {
  std::vector<SimResult> results;
  // per-batch mean gross and cost for every policy
  std::vector<std::vector<double>> batch_gross, batch_cost;
};

Lockstep run_lockstep(std::span<const PolicySpec> policies, const SimConfig& cfg) {
  cfg.validate();
  const double c = cfg.params.cost();
  const std::size_t np = policies.size();

  std::mt19937_64 signal_rng(cfg.seed);
  std::seed_seq noise_seed{static_cast<std::uint32_t>(cfg.seed),
                           static_cast<std::uint32_t>(cfg.seed >> 32), 0x6e6f6973u};
  std::mt19937_64 noise_rng(noise_seed);
  std::normal_distribution<double> signal_dist, noise_dist;
  const double flip = cfg.negate_signals ? -1.0 : 1.0;

  std::vector<Position> q(np, cfg.initial);
  std::vector<double> g_sum(np, 0.0), gb(np, 0.0);
  std::vector<std::size_t> sw(np, 0), swb(np, 0);
  Lockstep out;
  out.batch_gross.assign(np, {});
  out.batch_cost.assign(np, {});

  const std::size_t batch_len = cfg.n_steps / cfg.batches;
  std::size_t in_batch = 0;

  double prev = flip * signal_dist(signal_rng);
  const std::size_t total = cfg.burn_in + cfg.n_steps;
  for (std::size_t t = 0; t < total; ++t) {
    const double x = flip * signal_dist(signal_rng);
    const double eps = cfg.include_noise ? flip * noise_dist(noise_rng) : 0.0;
    const bool measured = t >= cfg.burn_in;
    for (std::size_t k = 0; k < np; ++k) {
      const MarketState s{x, prev, q[k]};
      const Position next = position_after(policies[k].decide(s));
      const double r = predictable_return(x, prev, next, cfg.params) + sign(next) * eps;
      if (measured) {
        gb[k] += r;
        if (next != q[k]) ++swb[k];
      }
      q[k] = next;
    }
    prev = x;
    if (measured && ++in_batch == batch_len) {
      // the last batch absorbs the remainder
      const bool last = out.batch_gross[0].size() + 1 == cfg.batches;
      if (!last || t + 1 == total) {
        for (std::size_t k = 0; k < np; ++k) {
          out.batch_gross[k].push_back(gb[k] / static_cast<double>(in_batch));
          out.batch_cost[k].push_back(c * static_cast<double>(swb[k]) /
                                      static_cast<double>(in_batch));
          g_sum[k] += gb[k];
          sw[k] += swb[k];
          gb[k] = 0.0;
          swb[k] = 0;
        }
        in_batch = 0;
      }
    }
  }

  const auto n = static_cast<double>(cfg.n_steps);
  for (std::size_t k = 0; k < np; ++k) {
    SimResult r;
    r.gross = g_sum[k] / n;
    r.switch_rate = static_cast<double>(sw[k]) / n;
    r.cost = c * r.switch_rate;
    r.net = r.gross - r.cost;
    std::vector<double> net_batches(out.batch_gross[k].size());
    for (std::size_t b = 0; b < net_batches.size(); ++b)
      net_batches[b] = out.batch_gross[k][b] - out.batch_cost[k][b];
    r.std_error_gross = batch_std_error(out.batch_gross[k]);
    r.std_error_net = batch_std_error(net_batches);
    r.std_error_cost = batch_std_error(out.batch_cost[k]);
    r.n_steps = cfg.n_steps;
    r.seed = cfg.seed;
    out.results.push_back(r);
  }
  return out;
}

}  // namespace

SimResult run_simulation(const PolicySpec& policy, const SimConfig& config) {
  return run_lockstep({&policy, 1}, config).results.front();
}

Comparison compare_policies(std::span<const PolicySpec> policies, const SimConfig& config) {
  if (policies.size() < 2) throw InvalidParams("compare_policies needs at least two policies");
  Lockstep ls = run_lockstep(policies, config);
  Comparison out;
  out.results = ls.results;
  for (const auto& p : policies) out.names.push_back(p.name());
  for (std::size_t k = 0; k < policies.size(); ++k) {
    PairedDifference d;
    d.gross = ls.results[k].gross - ls.results[0].gross;
    d.cost = ls.results[k].cost - ls.results[0].cost;
    d.net = ls.results[k].net - ls.results[0].net;
    const std::size_t nb = ls.batch_gross[k].size();
    std::vector<double> dg(nb), dc(nb), dn(nb);
    for (std::size_t b = 0; b < nb; ++b) {
      dg[b] = ls.batch_gross[k][b] - ls.batch_gross[0][b];
      dc[b] = ls.batch_cost[k][b] - ls.batch_cost[0][b];
      dn[b] = dg[b] - dc[b];
    }
    d.std_error_gross = batch_std_error(dg);
    d.std_error_cost = batch_std_error(dc);
    d.std_error_net = batch_std_error(dn);
    out.versus_first.push_back(d);
  }
  return out;
}

double switch_probability(const PolicySpec& policy, Position q, const ModelParams&) {
  // Region for a long holder: x1 below the long boundary; for a short holder:
  // x1 above the short one. The x1 direction is integrated exactly on the box.
  const GaussLegendre rule(8);
  auto conditional = [&](double x0) {
    const double g = std::clamp(policy.boundary(x0, q), -kTruncation, kTruncation);
    const double p = q == Position::Long ? gaussian_mass(-kTruncation, g)
                                         : gaussian_mass(g, kTruncation);
    return p * std_normal_pdf(x0);
  };
  constexpr int cells = 1200;
  const double h = 2.0 * kTruncation / cells;
  double s = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double a = -kTruncation + i * h;
    s += rule.integrate(conditional, a, a + h);
  }
  return s;
}

std::vector<TableRow> table_grid(int table) {
  auto r0 = [](double rho1) { return TableRow{std::sqrt(0.8 - rho1 * rho1), rho1}; };
  auto r1 = [](double rho0) { return TableRow{rho0, std::sqrt(0.8 - rho0 * rho0)}; };
  const TableRow shared_head[] = {r0(0.1), r0(0.2), r0(0.3), r0(0.4), r0(0.5), r0(0.6), r1(0.6)};
  const TableRow shared_tail[] = {r1(0.4), r1(0.3), r1(0.2)};
  std::vector<TableRow> rows(std::begin(shared_head), std::end(shared_head));
  if (table == 1)
    rows.push_back(r0(0.7));
  else if (table == 2)
    rows.push_back(r1(0.5));
  else
    throw InvalidParams("table must be 1 or 2");
  rows.insert(rows.end(), std::begin(shared_tail), std::end(shared_tail));
  return rows;
}

void write_results_header(std::ostream& out) {
  out << "rho0,rho1,c,policy,gross,net,cost,switch_rate,se_gross,se_net,n_steps,seed\n";
}

void write_result_row(std::ostream& out, const ModelParams& p, const std::string& policy,
                      const SimResult& r) {
  out << format_real(p.rho0()) << ',' << format_real(p.rho1()) << ','
      << format_real(p.cost()) << ',' << policy << ',' << format_real(r.gross) << ','
      << format_real(r.net) << ',' << format_real(r.cost) << ','
      << format_real(r.switch_rate) << ',' << format_real(r.std_error_gross) << ','
      << format_real(r.std_error_net) << ',' << r.n_steps << ',' << r.seed << '\n';
}

}  // namespace notrade
