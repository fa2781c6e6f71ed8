#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "notrade/approx.hpp"
#include "notrade/errors.hpp"
#include "notrade/simulate.hpp"
#include "notrade/solver.hpp"
#include "support.hpp"

using namespace notrade;
namespace ts = testing_support;
using doctest::Approx;

namespace {

SimConfig small(const ModelParams& p, std::uint64_t seed, std::size_t n = 200'000) {
  SimConfig c(p, seed);
  c.n_steps = n;
  return c;
}

}  // namespace

TEST_CASE("policy specs") {
  const ModelParams p(0.8, 0.4, 0.5);
  const PolicySpec naive = PolicySpec::naive(p);
  CHECK(naive.kind() == PolicyKind::Naive);
  CHECK(naive.name() == "naive");
  CHECK(to_string(PolicyKind::FirstOrder) == "first_order");
  CHECK(naive.boundary(0.3, Position::Long) == naive_boundary(0.3, Position::Long, p));
  CHECK(naive.boundary(0.3, Position::Short) == Approx(naive_boundary(0.3, Position::Short, p)));
  const PolicySpec fo = PolicySpec::first_order(p);
  CHECK(fo.boundary(-1.1, Position::Short) ==
        Approx(first_order_boundary(-1.1, 0.5, Position::Short, p)));
  for (double x = -5.0; x < 5.0; x += 0.1) {
    CHECK(naive.boundary(x + 0.1, Position::Long) < naive.boundary(x, Position::Long));
    CHECK(fo.boundary(x + 0.1, Position::Long) < fo.boundary(x, Position::Long));
  }
  CHECK_THROWS_AS(PolicySpec::custom("x", {}, 0.1), InvalidParams);
  CHECK_THROWS_AS(PolicySpec::custom("x", [](double) { return 0.0; }, -1.0), InvalidParams);

  SimConfig bad(p, 1);
  bad.n_steps = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidParams);
  CHECK_THROWS_AS(run_simulation(naive, bad), InvalidParams);
}

TEST_CASE("accounting identities and determinism") {
  const ModelParams p(0.8, 0.4, 0.5);
  const PolicySpec fo = PolicySpec::first_order(p);
  const SimResult a = run_simulation(fo, small(p, 99));
  const SimResult b = run_simulation(fo, small(p, 99));
  CHECK(a == b);
  CHECK(a.net == Approx(a.gross - a.cost).epsilon(1e-12));
  CHECK(std::abs(a.net - (a.gross - a.cost)) <= 1e-12);
  CHECK(std::abs(a.cost - 0.5 * a.switch_rate) <= 1e-12);
  CHECK(a.switch_rate >= 0.0);
  CHECK(a.switch_rate <= 1.0);
  CHECK(a.std_error_gross > 0.0);
  CHECK(a.n_steps == 200'000);
  CHECK(a.seed == 99);
  CHECK_FALSE(run_simulation(fo, small(p, 100)) == a);
}

TEST_CASE("zero cost earns the folded-normal mean") {
  const ModelParams p(0.8, 0.4, 0.0);
  const SimResult r = run_simulation(PolicySpec::naive(p), small(p, 5, 400'000));
  const double exact = std::sqrt(0.8) * std::sqrt(2.0 / std::numbers::pi);
  CHECK(std::abs(r.gross - exact) <= 3.0 * r.std_error_gross);
  CHECK(r.cost == 0.0);
}

TEST_CASE("mirrored signals give identical results") {
  const ModelParams p(0.8, 0.4, 0.5);
  for (const PolicySpec& pol : {PolicySpec::naive(p), PolicySpec::first_order(p)}) {
    SimConfig c = small(p, 17, 50'000);
    const SimResult a = run_simulation(pol, c);
    c.negate_signals = true;
    c.initial = Position::Short;
    const SimResult b = run_simulation(pol, c);
    CHECK(a.gross == Approx(b.gross).epsilon(1e-12));
    CHECK(a.net == Approx(b.net).epsilon(1e-12));
    CHECK(a.cost == b.cost);
  }
}

TEST_CASE("noise only adds a zero-mean term") {
  const ModelParams p(0.8, 0.4, 0.5);
  SimConfig c = small(p, 23);
  const SimResult clean = run_simulation(PolicySpec::first_order(p), c);
  c.include_noise = true;
  const SimResult noisy = run_simulation(PolicySpec::first_order(p), c);
  CHECK(std::abs(noisy.gross - clean.gross) <= 4.0 / std::sqrt(static_cast<double>(c.n_steps)));
  CHECK(noisy.switch_rate == clean.switch_rate);
}

TEST_CASE("common random numbers") {
  const ModelParams p(0.8, 0.4, 0.5);
  const PolicySpec same[] = {PolicySpec::naive(p), PolicySpec::naive(p)};
  const Comparison c = compare_policies(same, small(p, 4, 50'000));
  CHECK(c.versus_first[1].gross == 0.0);
  CHECK(c.versus_first[1].net == 0.0);
  CHECK(c.versus_first[1].std_error_net == 0.0);
  CHECK_THROWS_AS(compare_policies(std::span<const PolicySpec>(same, 1), small(p, 4)),
                  InvalidParams);

  // lockstep equals separate runs on the same seed
  const PolicySpec two[] = {PolicySpec::first_order(p), PolicySpec::naive(p)};
  const Comparison d = compare_policies(two, small(p, 8, 50'000));
  CHECK(d.results[0] == run_simulation(two[0], small(p, 8, 50'000)));
  CHECK(d.results[1] == run_simulation(two[1], small(p, 8, 50'000)));
  CHECK(d.names[1] == "naive");
}

TEST_CASE("table rows of paired comparisons") {
  SUBCASE("(0.742, 0.500): first-order nets more") {
    const ModelParams p(std::sqrt(0.55), 0.5, 0.5);
    const PolicySpec pols[] = {PolicySpec::naive(p), PolicySpec::first_order(p)};
    const Comparison c = compare_policies(pols, small(p, 31, 1'000'000));
    CHECK(c.versus_first[1].net > 0.0);
    CHECK(c.versus_first[1].net > 2.0 * c.versus_first[1].std_error_net);
    CHECK(c.versus_first[1].net == Approx(0.002).epsilon(0.5));
  }
  SUBCASE("(0.200, 0.872): first-order trades less") {
    const ModelParams p(0.2, std::sqrt(0.76), 0.5);
    const PolicySpec pols[] = {PolicySpec::naive(p), PolicySpec::first_order(p)};
    const Comparison c = compare_policies(pols, small(p, 32, 500'000));
    CHECK(c.results[1].cost < c.results[0].cost);
    CHECK(std::abs(c.results[1].cost - 0.144) <= 0.005);
    CHECK(std::abs(c.results[0].cost - 0.164) <= 0.005);
  }
  SUBCASE("solver policy does at least as well as first-order") {
    const ModelParams p(0.4, 0.8, 0.5);
    const BiasBoundary bb = solve_fixed_point({}, p).solution;
    const PolicySpec pols[] = {PolicySpec::first_order(p), PolicySpec::solver(bb)};
    const Comparison c = compare_policies(pols, small(p, 33, 500'000));
    CHECK(c.versus_first[1].net > -2.0 * c.versus_first[1].std_error_net);
  }
}

TEST_CASE("switch probability") {
  const ModelParams z(0.8, 0.4, 0.0);
  CHECK(switch_probability(PolicySpec::naive(z), Position::Long, z) == Approx(0.5).epsilon(1e-8));
  CHECK(switch_probability(PolicySpec::naive(z), Position::Short, z) == Approx(0.5).epsilon(1e-8));

  // against an independent Monte Carlo of the region
  const ModelParams p(0.8, 0.4, 0.5);
  const PolicySpec fo = PolicySpec::first_order(p);
  for (Position q : {Position::Long, Position::Short}) {
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> n;
    constexpr int draws = 1'000'000;
    int hits = 0;
    for (int i = 0; i < draws; ++i) {
      const double x0 = n(rng), x1 = n(rng);
      if (std::abs(x0) > 6.0 || std::abs(x1) > 6.0) continue;
      const double g = fo.boundary(x0, q);
      if (q == Position::Long ? x1 < g : x1 >= g) ++hits;
    }
    const double mc = static_cast<double>(hits) / draws;
    const double se = std::sqrt(mc * (1.0 - mc) / draws);
    CHECK(std::abs(switch_probability(fo, q, p) - mc) <= 3.0 * se);
  }

  // the short holder's region mirrors the long holder's
  CHECK(switch_probability(fo, Position::Short, p) ==
        Approx(switch_probability(fo, Position::Long, p)).epsilon(1e-10));
}

TEST_CASE("table grids and csv export") {
  for (int t : {1, 2}) {
    const auto rows = table_grid(t);
    CHECK(rows.size() == 11);
    for (const auto& r : rows) CHECK(ModelParams(r.rho0, r.rho1, 0.5).on_circle(0.8));
  }
  CHECK(table_grid(1)[7].rho1 == 0.7);
  CHECK(table_grid(2)[7].rho0 == 0.5);
  CHECK(table_grid(1)[3].rho0 == Approx(0.8).epsilon(1e-15));
  CHECK_THROWS_AS(table_grid(3), InvalidParams);

  std::stringstream ss;
  write_results_header(ss);
  const ModelParams p(0.8, 0.4, 0.5);
  SimResult r;
  r.gross = 0.7;
  r.net = 0.55;
  r.cost = 0.15;
  r.switch_rate = 0.3;
  r.n_steps = 10;
  r.seed = 3;
  write_result_row(ss, p, "naive", r);
  std::string header, row;
  std::getline(ss, header);
  std::getline(ss, row);
  CHECK(header == "rho0,rho1,c,policy,gross,net,cost,switch_rate,se_gross,se_net,n_steps,seed");
  CHECK(row.rfind("0.80000000000000004,0.40000000000000002,0.5,naive,", 0) == 0);
  CHECK(row.substr(row.size() - 5) == ",10,3");
}
