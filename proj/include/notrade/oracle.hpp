#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "notrade/gaussian.hpp"
#include "notrade/model.hpp"

namespace notrade {

/// Brute-force discretization of the trading MDP: both signals quantized to
/// the same odd-sized grid on [-extent, extent], positions {+1, -1}.
///
/// State (i, j, q) means x0 = node[i], x1 = node[j]. The next x0 lands on
/// node k with the Gaussian mass of its Voronoi cell (end cells absorb the
/// tails); the next x1 is a copy of x0.
class DiscreteMDP {
 public:
  DiscreteMDP(ModelParams params, std::size_t n_nodes, double extent = kTruncation);

  const ModelParams& params() const noexcept { return params_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double step() const noexcept { return nodes_[1] - nodes_[0]; }

  double reward(std::size_t i, std::size_t j, Position q, Action u) const noexcept {
    return rewards_[index(i, j, q) * 2 + (u == Action::GoLong ? 0 : 1)];
  }

  /// Flat index of (i, j, q).
  std::size_t index(std::size_t i, std::size_t j, Position q) const noexcept {
    return ((q == Position::Long ? 0 : 1) * size() + i) * size() + j;
  }
  std::size_t state_count() const noexcept { return 2 * size() * size(); }

 private:
  ModelParams params_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> rewards_;
};

/// n_nodes must be odd and >= 21. Throws InvalidParams.
DiscreteMDP build_discrete(const ModelParams& params, std::size_t n_nodes,
                           double extent = kTruncation);

struct RviResult {
  double lambda = 0.0;
  std::vector<double> bias;      // indexed by DiscreteMDP::index
  std::vector<Action> policy;    // greedy action per state, ties go long
  int iterations = 0;
  double span = 0.0;             // final span of the update

  Action action(const DiscreteMDP& mdp, std::size_t i, std::size_t j, Position q) const {
    return policy[mdp.index(i, j, q)];
  }
};

class OracleNotConverged : public std::runtime_error {
 public:
  explicit OracleNotConverged(RviResult partial);
  const RviResult& partial() const noexcept { return partial_; }

 private:
  RviResult partial_;
};

/// Relative value iteration with reference state (0, 0, +1), stopped when the
/// span of (T h - h) drops below epsilon.
RviResult relative_value_iteration(const DiscreteMDP& mdp, double epsilon = 1e-10,
                                   int max_iterations = 100000);

/// Smallest x1 node at which the oracle goes long in column (i, q); the
/// boundary estimate is the midpoint between that node and the one below.
/// Returns +-infinity when the column never / always goes long.
double oracle_threshold(const DiscreteMDP& mdp, const RviResult& rvi, std::size_t i,
                        Position q);

/// CSV with columns x0,x1,q,bias,action (action +1 long, -1 short).
void write_policy_csv(std::ostream& out, const DiscreteMDP& mdp, const RviResult& rvi);

}  // namespace notrade
