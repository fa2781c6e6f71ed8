#include "notrade/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "notrade/csv.hpp"
#include "notrade/errors.hpp"
#include "notrade/grid_function.hpp"

namespace notrade {

DiscreteMDP::DiscreteMDP(ModelParams params, std::size_t n_nodes, double extent)
    : params_(params), nodes_(uniform_grid(extent, n_nodes)) {
  const std::size_t n = nodes_.size();
  weights_.resize(n);
  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const double lo = k == 0 ? -inf : 0.5 * (nodes_[k - 1] + nodes_[k]);
    const double hi = k + 1 == n ? inf : 0.5 * (nodes_[k] + nodes_[k + 1]);
    weights_[k] = gaussian_mass(lo, hi);
  }
  rewards_.resize(state_count() * 2);
  for (Position q : {Position::Long, Position::Short})
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const MarketState s{nodes_[i], nodes_[j], q};
        rewards_[index(i, j, q) * 2] = notrade::reward(s, Action::GoLong, params_);
        rewards_[index(i, j, q) * 2 + 1] = notrade::reward(s, Action::GoShort, params_);
      }
}

DiscreteMDP build_discrete(const ModelParams& params, std::size_t n_nodes, double extent) {
  if (n_nodes < 21 || n_nodes % 2 == 0)
    throw InvalidParams("oracle grid needs an odd node count >= 21");
  return DiscreteMDP(params, n_nodes, extent);
}

OracleNotConverged::OracleNotConverged(RviResult partial)
    : std::runtime_error("relative value iteration did not converge"),
      partial_(std::move(partial)) {}

namespace {

// Expected continuation value E[h(y, x0_i, u)] for every (i, u): the next
// state is (node k, node i, u) with weight w_k.
void continuation(const DiscreteMDP& mdp, const std::vector<double>& h,
                  std::vector<double>& out) {
  const std::size_t n = mdp.size();
  const auto& w = mdp.weights();
  for (Position u : {Position::Long, Position::Short})
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += w[k] * h[mdp.index(k, i, u)];
      out[(u == Position::Long ? 0 : 1) * n + i] = s;
    }
}

}  // namespace

RviResult relative_value_iteration(const DiscreteMDP& mdp, double epsilon,
                                   int max_iterations) {
  if (!(epsilon > 0.0)) throw InvalidParams("epsilon must be positive");
  const std::size_t n = mdp.size();
  const std::size_t mid = n / 2;
  const std::size_t ref = mdp.index(mid, mid, Position::Long);

  RviResult r;
  r.bias.assign(mdp.state_count(), 0.0);
  r.policy.assign(mdp.state_count(), Action::GoLong);
  std::vector<double> cont(2 * n), next(mdp.state_count());

  for (int it = 1; it <= max_iterations; ++it) {
    continuation(mdp, r.bias, cont);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (Position q : {Position::Long, Position::Short})
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const std::size_t s = mdp.index(i, j, q);
          const double vl = mdp.reward(i, j, q, Action::GoLong) + cont[i];
          const double vs = mdp.reward(i, j, q, Action::GoShort) + cont[n + i];
          next[s] = std::max(vl, vs);
          r.policy[s] = vl >= vs ? Action::GoLong : Action::GoShort;
          const double d = next[s] - r.bias[s];
          lo = std::min(lo, d);
          hi = std::max(hi, d);
        }
    r.lambda = next[ref];
    for (std::size_t s = 0; s < next.size(); ++s) r.bias[s] = next[s] - r.lambda;
    r.iterations = it;
    r.span = hi - lo;
    if (r.span < epsilon) return r;
  }
  throw OracleNotConverged(std::move(r));
}

double oracle_threshold(const DiscreteMDP& mdp, const RviResult& rvi, std::size_t i,
                        Position q) {
  const std::size_t n = mdp.size();
  const auto& x = mdp.nodes();
  for (std::size_t j = 0; j < n; ++j)
    if (rvi.action(mdp, i, j, q) == Action::GoLong)
      return j == 0 ? -std::numeric_limits<double>::infinity() : 0.5 * (x[j - 1] + x[j]);
  return std::numeric_limits<double>::infinity();
}

void write_policy_csv(std::ostream& out, const DiscreteMDP& mdp, const RviResult& rvi) {
  out << "x0,x1,q,bias,action\n";
  const auto& x = mdp.nodes();
  for (Position q : {Position::Long, Position::Short})
    for (std::size_t i = 0; i < mdp.size(); ++i)
      for (std::size_t j = 0; j < mdp.size(); ++j) {
        const std::size_t s = mdp.index(i, j, q);
        out << format_real(x[i]) << ',' << format_real(x[j]) << ','
            << (q == Position::Long ? "1" : "-1") << ',' << format_real(rvi.bias[s]) << ','
            << (rvi.policy[s] == Action::GoLong ? "1" : "-1") << '\n';
      }
}

}  // namespace notrade
