#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "notrade/errors.hpp"
#include "notrade/model.hpp"

using namespace notrade;

TEST_CASE("params validation") {
  CHECK_NOTHROW(ModelParams(0.8, 0.4, 0.0));
  CHECK_NOTHROW(ModelParams(0.8, -0.4, 0.5));
  CHECK_THROWS_AS(ModelParams(0.0, 0.4, 0.5), InvalidParams);
  CHECK_THROWS_AS(ModelParams(-0.1, 0.4, 0.5), InvalidParams);
  CHECK_THROWS_AS(ModelParams(0.8, 0.0, 0.5), InvalidParams);
  CHECK_THROWS_AS(ModelParams(0.8, 0.4, -1e-3), InvalidParams);
  CHECK_THROWS_AS(ModelParams(std::nan(""), 0.4, 0.5), InvalidParams);
  CHECK_THROWS_AS(ModelParams(0.8, std::numeric_limits<double>::infinity(), 0.5), InvalidParams);

  const ModelParams p(0.8, 0.4, 0.5);
  CHECK(p.kappa() == 0.4 / 0.8);
  CHECK(p.with_cost(0.1).kappa() == p.kappa());
  CHECK(p.with_cost(0.1).cost() == 0.1);
  CHECK(p.on_circle(0.8));
  CHECK_FALSE(ModelParams(0.8, 0.3, 0.5).on_circle(0.8));
}

TEST_CASE("transition shifts the signal and sets the position") {
  const MarketState s{0.5, -0.2, Position::Long};
  const MarketState t = transition(s, Action::GoShort, 1.3);
  CHECK(t == MarketState{1.3, 0.5, Position::Short});
  CHECK(transition({0, 0, Position::Long}, Action::GoLong, 0.0) ==
        MarketState{0, 0, Position::Long});

  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  for (int i = 0; i < 100; ++i) {
    const MarketState a{n(rng), n(rng), i % 2 ? Position::Long : Position::Short};
    const double w = n(rng);
    const MarketState b = transition(a, i % 3 ? Action::GoLong : Action::GoShort, w);
    CHECK(b.x1 == a.x0);
    CHECK(b.x0 == w);
  }
}

TEST_CASE("reward charges the fee only on a flip") {
  const ModelParams p(0.8, 0.3, 0.5);
  CHECK(reward({1, 0, Position::Long}, Action::GoLong, p) == doctest::Approx(0.8));
  CHECK(reward({1, 0, Position::Short}, Action::GoLong, p) == doctest::Approx(0.3));
  CHECK(reward({0, 0, Position::Long}, Action::GoShort, p) == doctest::Approx(-0.5));
  CHECK(reward({0, 0, Position::Short}, Action::GoShort, p) == 0.0);
}

TEST_CASE("predictable return") {
  const ModelParams p(0.8, 0.3, 0.5);
  CHECK(predictable_return(1, 1, Position::Long, p) == doctest::Approx(1.1));
  CHECK(predictable_return(0.3, -2, Position::Short, p) ==
        -predictable_return(0.3, -2, Position::Long, p));
  CHECK(predictable_return(0, 0, Position::Short, p) == 0.0);
  CHECK(target(1, 1, 0.25, p) == doctest::Approx(1.35));
}

TEST_CASE("mirror symmetry of the reward") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n;
  for (double c : {0.0, 0.5}) {
    const ModelParams p(0.8, 0.4, c);
    for (int i = 0; i < 200; ++i) {
      const MarketState s{n(rng), n(rng), i % 2 ? Position::Long : Position::Short};
      const Action u = i % 3 ? Action::GoLong : Action::GoShort;
      // full mirror (signals, position, action) keeps the reward, fee included
      CHECK(reward(mirror(s), opposite(u), p) == doctest::Approx(reward(s, u, p)));
      CHECK(mirror(mirror(s)) == s);
      // at zero cost, negating only the signals negates the reward
      const MarketState neg{-s.x0, -s.x1, s.q};
      if (c == 0.0) CHECK(reward(neg, u, p) == -reward(s, u, p));
    }
  }
}
