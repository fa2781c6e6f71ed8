#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "notrade/model.hpp"

namespace notrade {

class BiasBoundary;

enum class PolicyKind { Naive, FirstOrder, Solver, Custom };

std::string to_string(PolicyKind kind);

/// A no-trade-zone rule: go long iff x1 >= boundary(x0, q). Only the long
/// slice is stored; the short slice sits `zone_width` above it.
class PolicySpec {
 public:
  static PolicySpec naive(const ModelParams& params);
  static PolicySpec first_order(const ModelParams& params);
  /// Copies the boundary slice out of `bb`.
  static PolicySpec solver(const BiasBoundary& bb);
  static PolicySpec custom(std::string name, std::function<double(double)> long_boundary,
                           double zone_width);

  PolicyKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  double zone_width() const noexcept { return zone_width_; }

  double boundary(double x0, Position q) const {
    const double g = long_boundary_(x0);
    return q == Position::Long ? g : g + zone_width_;
  }
  Action decide(const MarketState& s) const {
    return s.x1 >= boundary(s.x0, s.q) ? Action::GoLong : Action::GoShort;
  }

 private:
  PolicySpec(PolicyKind kind, std::string name, std::function<double(double)> g, double w)
      : kind_(kind), name_(std::move(name)), long_boundary_(std::move(g)), zone_width_(w) {}

  PolicyKind kind_;
  std::string name_;
  std::function<double(double)> long_boundary_;
  double zone_width_;
};

struct SimConfig {
  SimConfig(ModelParams params, std::uint64_t seed) : params(params), seed(seed) {}

  ModelParams params;
  std::uint64_t seed;
  std::size_t n_steps = 1'000'000;  // periods averaged, after burn-in
  std::size_t burn_in = 100;
  std::size_t batches = 100;        // batch-means standard errors
  bool include_noise = false;       // add the target noise eps_t to realized returns
  bool negate_signals = false;      // run on the mirrored signal path
  Position initial = Position::Long;

  void validate() const;
};

/// Per-period averages over the measured window.
struct SimResult {
  double gross = 0.0;
  double net = 0.0;
  double cost = 0.0;
  double switch_rate = 0.0;
  double std_error_gross = 0.0;
  double std_error_net = 0.0;
  double std_error_cost = 0.0;
  std::size_t n_steps = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const SimResult&, const SimResult&) = default;
};

/// Paired difference (policy minus reference) on common random numbers.
struct PairedDifference {
  double gross = 0.0;
  double net = 0.0;
  double cost = 0.0;
  double std_error_gross = 0.0;
  double std_error_net = 0.0;
  double std_error_cost = 0.0;
};

struct Comparison {
  std::vector<std::string> names;
  std::vector<SimResult> results;
  std::vector<PairedDifference> versus_first;  // entry 0 is identically zero
};

SimResult run_simulation(const PolicySpec& policy, const SimConfig& config);

/// Runs every policy in lockstep on the same signal (and noise) stream.
/// Needs at least two policies.
Comparison compare_policies(std::span<const PolicySpec> policies, const SimConfig& config);

/// Probability that a holder of `q` trades in one period when (x0, x1) are
/// independent standard normals: the Gaussian mass of the trade region,
/// restricted to the truncation box, with the x1 direction done exactly.
double switch_probability(const PolicySpec& policy, Position q, const ModelParams& params);

/// Parameter rows of the two published comparison tables (c = 0.5). Every
/// row lies on rho0^2 + rho1^2 = 0.8; the printed three-digit coordinate that
/// is exact is kept and the other is solved from the circle.
struct TableRow {
  double rho0, rho1;
};
std::vector<TableRow> table_grid(int table);  // table is 1 or 2

/// Columns: rho0,rho1,c,policy,gross,net,cost,switch_rate,se_gross,se_net,n_steps,seed
void write_results_header(std::ostream& out);
void write_result_row(std::ostream& out, const ModelParams& params, const std::string& policy,
                      const SimResult& r);

}  // namespace notrade
