#include <doctest.h>

#include <cmath>
#include <sstream>

#include "notrade/errors.hpp"
#include "notrade/oracle.hpp"
#include "notrade/solver.hpp"

using namespace notrade;
using doctest::Approx;

TEST_CASE("discretization") {
  const ModelParams p(0.8, 0.4, 0.5);
  CHECK_THROWS_AS(build_discrete(p, 100), InvalidParams);
  CHECK_THROWS_AS(build_discrete(p, 19), InvalidParams);

  const DiscreteMDP mdp = build_discrete(p, 101);
  double total = 0.0;
  for (double w : mdp.weights()) {
    CHECK(w > 0.0);
    total += w;
  }
  CHECK(total == Approx(1.0).epsilon(1e-9));
  CHECK(mdp.nodes()[50] == 0.0);
  CHECK(mdp.state_count() == 2 * 101 * 101);

  // rewards match the model at the nodes
  for (std::size_t i : {0u, 17u, 50u, 99u})
    for (std::size_t j : {3u, 50u, 100u})
      for (Position q : {Position::Long, Position::Short})
        for (Action u : {Action::GoLong, Action::GoShort})
          CHECK(mdp.reward(i, j, q, u) ==
                reward({mdp.nodes()[i], mdp.nodes()[j], q}, u, p));
  // zero signal: only the fee remains
  CHECK(mdp.reward(50, 50, Position::Long, Action::GoShort) == -0.5);
  CHECK(mdp.reward(50, 50, Position::Long, Action::GoLong) == 0.0);
}

TEST_CASE("closed-form anchors") {
  const RviResult zero = relative_value_iteration(build_discrete(ModelParams(0.8, 0.4, 0.0), 201));
  CHECK(zero.lambda == Approx(std::sqrt(0.8) * std::sqrt(2.0 / std::numbers::pi)).epsilon(5e-3 / 0.7137));

  const DiscreteMDP big = build_discrete(ModelParams(0.8, 0.4, 10.0), 101);
  const RviResult hold = relative_value_iteration(big);
  CHECK(std::abs(hold.lambda) < 5e-3);
  // A fee this large still loses to the extreme signals on [-6, 6]; a flip
  // needs the two-period signal advantage to exceed c/2.
  std::size_t flips = 0;
  for (std::size_t i = 0; i < big.size(); ++i)
    for (std::size_t j = 0; j < big.size(); ++j) {
      const double two_period = 1.2 * big.nodes()[i] + 0.4 * big.nodes()[j];
      const bool to_long = hold.action(big, i, j, Position::Short) == Action::GoLong;
      const bool to_short = hold.action(big, i, j, Position::Long) == Action::GoShort;
      flips += to_long + to_short;
      if (to_long) CHECK(two_period >= 5.0);
      if (to_short) CHECK(two_period <= -5.0);
      if (std::abs(two_period) < 5.0) CHECK_FALSE((to_long || to_short));
    }
  CHECK(flips < big.state_count() / 4);
}

TEST_CASE("structure of the oracle solution") {
  const ModelParams p(0.8, 0.4, 0.5);
  const DiscreteMDP mdp = build_discrete(p, 101);
  const RviResult r = relative_value_iteration(mdp);
  CHECK(r.span < 1e-10);

  const RviResult fine = relative_value_iteration(build_discrete(p, 201));
  CHECK(r.lambda == Approx(fine.lambda).epsilon(2e-3 / 0.55));

  const std::size_t n = mdp.size();
  for (std::size_t i = 0; i < n; ++i)
    for (Position q : {Position::Long, Position::Short}) {
      // a single switch from short to long along x1
      int changes = 0;
      for (std::size_t j = 1; j < n; ++j) {
        const Action a = r.action(mdp, i, j - 1, q), b = r.action(mdp, i, j, q);
        if (a != b) {
          ++changes;
          CHECK(b == Action::GoLong);
        }
      }
      CHECK(changes <= 1);
      // mirrored states carry the same bias
      for (std::size_t j = 0; j < n; ++j)
        CHECK(r.bias[mdp.index(i, j, q)] ==
              Approx(r.bias[mdp.index(n - 1 - i, n - 1 - j, opposite(q))]).epsilon(1e-8));
    }
}

TEST_CASE("oracle agrees with the fixed-point solver") {
  const ModelParams p(0.8, 0.4, 0.5);
  const SolveResult s = solve_fixed_point({}, p);
  const DiscreteMDP mdp = build_discrete(p, 201);
  const RviResult r = relative_value_iteration(mdp);
  CHECK(r.lambda == Approx(s.report.lambda).epsilon(2e-3 / 0.55));

  // thresholds bracket the solver boundary within a cell where both are inside the box
  std::size_t inside = 0, ok = 0;
  for (std::size_t i = 0; i < mdp.size(); ++i)
    for (Position q : {Position::Long, Position::Short}) {
      const double g = s.solution.boundary(mdp.nodes()[i], q);
      if (std::abs(g) > 5.5) continue;
      ++inside;
      const double t = oracle_threshold(mdp, r, i, q);
      if (std::abs(t - g) <= mdp.step()) ++ok;
    }
  CHECK(inside > 50);
  CHECK(static_cast<double>(ok) >= 0.99 * static_cast<double>(inside));
}

TEST_CASE("policy export and iteration cap") {
  const DiscreteMDP mdp = build_discrete(ModelParams(0.8, 0.4, 0.5), 21);
  const RviResult r = relative_value_iteration(mdp);
  std::stringstream ss;
  write_policy_csv(ss, mdp, r);
  std::string header;
  std::getline(ss, header);
  CHECK(header == "x0,x1,q,bias,action");
  std::size_t lines = 0;
  for (std::string l; std::getline(ss, l);) ++lines;
  CHECK(lines == mdp.state_count());

  CHECK_THROWS_AS(relative_value_iteration(mdp, 1e-12, 1), OracleNotConverged);
  CHECK_THROWS_AS(relative_value_iteration(mdp, 0.0), InvalidParams);
}
