#include "notrade/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "notrade/approx.hpp"
#include "notrade/csv.hpp"
#include "notrade/diagnostics.hpp"
#include "notrade/errors.hpp"
#include "notrade/simulate.hpp"
#include "notrade/solver.hpp"

namespace notrade::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::vector<ConfigEntry> parse_config(std::istream& in, const std::string& source) {
  std::vector<ConfigEntry> out;
  std::string raw;
  int line = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string{};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw ConfigError(source + ":" + std::to_string(line) + ": unterminated section header");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(line) + ": expected key = value");
    ConfigEntry e{trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line};
    if (e.key.empty())
      throw ConfigError(source + ":" + std::to_string(line) + ": missing key before '='");
    if (e.value.empty())
      throw ConfigError(source + ":" + std::to_string(line) + ": field '" + e.key +
                        "' has no value");
    out.push_back(std::move(e));
  }
  return out;
}

namespace {

struct Options {
  double rho0 = 0.8;
  double rho1 = 0.4;
  double cost = 0.5;
  double eps = 1e-8;
  double grid_extent = kTruncation;
  std::size_t grid_nodes = 1201;
  int quad_nodes = 5;
  int max_iter = 500;
  std::string init = "zero-cost";
  std::size_t steps = 1'000'000;
  std::uint64_t seed = 0;
  std::string policy = "first_order";
  std::string policies = "naive,first_order,solver";
  bool include_noise = false;
  std::size_t pairs = 60;
  std::string out = ".";
  std::string config;
};

template <class T>
void convert(const std::string& text, T& target) {
  if constexpr (std::is_same_v<T, std::string>) {
    target = text;
  } else if constexpr (std::is_same_v<T, bool>) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") target = true;
    else if (text == "false" || text == "0" || text == "no" || text == "off") target = false;
    else throw std::invalid_argument("expected a boolean");
  } else if constexpr (std::is_floating_point_v<T>) {
    target = parse_real(text);
  } else {
    T v{};
    const char* end = text.data() + text.size();
    auto [p, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || p != end) throw std::invalid_argument("expected an integer");
    target = v;
  }
}

/// Registers each option with CLI11 and keeps a setter so config-file values
/// can be applied to options the command line left untouched.
class Registry {
 public:
  explicit Registry(CLI::App& app) : app_(app) {}

  template <class T>
  CLI::Option* add(const std::string& name, T& target, const std::string& help,
                   const std::string& short_name = "") {
    CLI::Option* opt;
    const std::string flags = short_name.empty() ? "--" + name : short_name + ",--" + name;
    if constexpr (std::is_same_v<T, bool>)
      opt = app_.add_flag(flags, target, help);
    else
      opt = app_.add_option(flags, target, help)->capture_default_str();
    entries_[name] = {opt, [&target](const std::string& s) { convert(s, target); }};
    return opt;
  }

  bool given(const std::string& name) const {
    const auto it = entries_.find(name);
    return (it != entries_.end() && it->second.option->count() > 0) ||
           from_config_.count(name) > 0;
  }

  void apply(const std::vector<ConfigEntry>& entries, const std::string& source) {
    for (const auto& e : entries) {
      const auto it = entries_.find(e.key);
      const std::string where = source + ":" + std::to_string(e.line) + ": ";
      if (it == entries_.end() || e.key == "config")
        throw ConfigError(where + "unknown field '" + e.key + "'");
      if (it->second.option->count() > 0) continue;  // the flag wins
      try {
        it->second.set(e.value);
        from_config_.insert(e.key);
      } catch (const std::exception& ex) {
        throw ConfigError(where + "field '" + e.key + "': cannot use '" + e.value + "' (" +
                          ex.what() + ")");
      }
    }
  }

 private:
  struct Entry {
    CLI::Option* option;
    std::function<void(const std::string&)> set;
  };
  CLI::App& app_;
  std::map<std::string, Entry> entries_;
  std::set<std::string> from_config_;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Writes through `<path>.partial` and renames on success.
void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  fs::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    body(f);
    f.flush();
    if (!f) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

struct Context {
  std::string command;
  Options opt;
  bool seed_given = false;
  fs::path out_dir;
  Clock clock;
  json timings = json::object();
  std::ostream& out;
  std::ostream& err;

  ModelParams params() const { return ModelParams(opt.rho0, opt.rho1, opt.cost); }

  SolverConfig solver_config() const {
    SolverConfig c;
    c.epsilon = opt.eps;
    c.max_iterations = opt.max_iter;
    c.grid = {opt.grid_extent, opt.grid_nodes};
    c.quadrature.points_per_cell = opt.quad_nodes;
    if (opt.init == "zero-cost") c.init = InitMode::ZeroCost;
    else if (opt.init == "naive") c.init = InitMode::Naive;
    else throw InvalidParams("--init must be zero-cost or naive");
    c.validate();
    return c;
  }

  SimConfig sim_config(const ModelParams& p, std::uint64_t seed) const {
    SimConfig c(p, seed);
    c.n_steps = opt.steps;
    c.include_noise = opt.include_noise;
    c.validate();
    return c;
  }

  void require_seed() const {
    if (!seed_given) throw InvalidParams(command + " needs --seed for reproducibility");
  }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    write_file(out_dir / name, body);
  }

  void write_summary(json results) {
    const ModelParams p = params();
    json s;
    s["command"] = command;
    s["params"] = {{"rho0", p.rho0()}, {"rho1", p.rho1()}, {"c", p.cost()},
                   {"kappa", p.kappa()}};
    s["results"] = std::move(results);
    s["versions"] = {{"notrade", kVersion},
                     {"cli11", CLI11_VERSION},
                     {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                           std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                           std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                     {"compiler", __VERSION__}};
    timings["total_seconds"] = clock.seconds();
    s["timings"] = timings;
    write("summary.json", [&](std::ostream& f) { f << s.dump(2) << '\n'; });
  }
};

json report_json(const SolveReport& r) {
  return {{"lambda", r.lambda},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"epsilon", r.epsilon},
          {"residuals_H", r.residuals_H},
          {"residuals_G", r.residuals_G},
          {"max_residual_ratio", max_residual_ratio(r)},
          {"residual_rate", residual_rate(r)},
          {"warnings", r.warnings}};
}

json sim_json(const SimResult& r) {
  return {{"gross", r.gross},
          {"net", r.net},
          {"cost", r.cost},
          {"switch_rate", r.switch_rate},
          {"se_gross", r.std_error_gross},
          {"se_net", r.std_error_net},
          {"se_cost", r.std_error_cost},
          {"n_steps", r.n_steps},
          {"seed", r.seed}};
}

/// Runs the solver; a non-converged run still yields its last iterate.
struct Solved {
  SolveResult result;
  bool converged;
};

Solved solve(Context& ctx, const ModelParams& p) {
  const Clock t;
  try {
    SolveResult r = solve_fixed_point(ctx.solver_config(), p);
    ctx.timings["solve_seconds"] = t.seconds();
    return {std::move(r), true};
  } catch (const NotConverged& e) {
    ctx.timings["solve_seconds"] = t.seconds();
    ctx.err << "warning: " << e.what() << "; writing the last iterate\n";
    return {e.partial(), false};
  }
}

void warn_all(Context& ctx, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) ctx.err << "warning: " << w << '\n';
}

int cmd_solve(Context& ctx) {
  const ModelParams p = ctx.params();
  Solved s = solve(ctx, p);
  warn_all(ctx, s.result.report.warnings);
  const BiasBoundary& bb = s.result.solution;
  ctx.write("boundary.csv", [&](std::ostream& f) {
    f << "x,H,G_long,G_short\n";
    const auto& x = bb.bias().nodes();
    for (std::size_t i = 0; i < x.size(); ++i)
      f << join_reals({x[i], bb.bias().values()[i], bb.boundary(x[i], Position::Long),
                       bb.boundary(x[i], Position::Short)})
        << '\n';
  });
  ctx.write_summary(report_json(s.result.report));
  ctx.out << "lambda " << format_real(s.result.report.lambda) << " after "
          << s.result.report.iterations << " iterations\n";
  return s.converged ? kOk : kNotConverged;
}

int cmd_approx(Context& ctx) {
  const ModelParams p = ctx.params();
  Solved s = solve(ctx, p);
  warn_all(ctx, s.result.report.warnings);
  const BiasBoundary& bb = s.result.solution;
  double gap = 0.0;
  ctx.write("boundaries.csv", [&](std::ostream& f) {
    f << "x,naive_long,naive_short,first_order_long,first_order_short,solver_long,"
         "solver_short,dG_dc_zero\n";
    for (double x : bb.boundary().nodes()) {
      const double fo = first_order_boundary(x, p.cost(), Position::Long, p);
      if (std::abs(x) <= 2.0) gap = std::max(gap, std::abs(fo - bb.boundary(x, Position::Long)));
      f << join_reals({x, naive_boundary(x, Position::Long, p),
                       naive_boundary(x, Position::Short, p), fo,
                       first_order_boundary(x, p.cost(), Position::Short, p),
                       bb.boundary(x, Position::Long), bb.boundary(x, Position::Short),
                       dG_dc_zero(x, p)})
        << '\n';
    }
  });
  json r = report_json(s.result.report);
  r["first_order_gap_sup_abs_x_le_2"] = gap;
  ctx.write_summary(std::move(r));
  ctx.out << "first-order vs solver gap on [-2, 2]: " << format_real(gap) << '\n';
  return s.converged ? kOk : kNotConverged;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

/// Builds the named policies; solves first if any needs the solver.
std::vector<PolicySpec> make_policies(Context& ctx, const ModelParams& p,
                                      const std::vector<std::string>& names, bool& converged) {
  std::optional<Solved> solved;
  std::vector<PolicySpec> out;
  for (const auto& n : names) {
    if (n == "naive") {
      out.push_back(PolicySpec::naive(p));
    } else if (n == "first_order") {
      out.push_back(PolicySpec::first_order(p));
    } else if (n == "solver") {
      if (!solved) {
        solved = solve(ctx, p);
        warn_all(ctx, solved->result.report.warnings);
        converged = converged && solved->converged;
      }
      out.push_back(PolicySpec::solver(solved->result.solution));
    } else {
      throw InvalidParams("unknown policy '" + n + "' (naive, first_order, solver)");
    }
  }
  return out;
}

int cmd_simulate(Context& ctx) {
  ctx.require_seed();
  const ModelParams p = ctx.params();
  const SimConfig cfg = ctx.sim_config(p, ctx.opt.seed);
  bool converged = true;
  const auto policies = make_policies(ctx, p, {ctx.opt.policy}, converged);
  const Clock t;
  const SimResult r = run_simulation(policies.front(), cfg);
  ctx.timings["simulate_seconds"] = t.seconds();
  ctx.write("simulation.csv", [&](std::ostream& f) {
    write_results_header(f);
    write_result_row(f, p, policies.front().name(), r);
  });
  json res = sim_json(r);
  res["policy"] = policies.front().name();
  res["switch_probability_long"] = switch_probability(policies.front(), Position::Long, p);
  ctx.write_summary(std::move(res));
  ctx.out << policies.front().name() << ": gross " << format_real(r.gross) << " net "
          << format_real(r.net) << " cost " << format_real(r.cost) << '\n';
  return converged ? kOk : kNotConverged;
}

int cmd_compare(Context& ctx) {
  ctx.require_seed();
  const ModelParams p = ctx.params();
  const SimConfig cfg = ctx.sim_config(p, ctx.opt.seed);
  bool converged = true;
  const auto policies = make_policies(ctx, p, split_list(ctx.opt.policies), converged);
  const Clock t;
  const Comparison cmp = compare_policies(policies, cfg);
  ctx.timings["simulate_seconds"] = t.seconds();
  ctx.write("comparison.csv", [&](std::ostream& f) {
    write_results_header(f);
    for (std::size_t k = 0; k < cmp.results.size(); ++k)
      write_result_row(f, p, cmp.names[k], cmp.results[k]);
  });
  ctx.write("paired.csv", [&](std::ostream& f) {
    f << "policy,reference,d_gross,d_net,d_cost,se_d_gross,se_d_net,se_d_cost\n";
    for (std::size_t k = 1; k < cmp.results.size(); ++k) {
      const auto& d = cmp.versus_first[k];
      f << cmp.names[k] << ',' << cmp.names[0] << ',';
      f << join_reals({d.gross, d.net, d.cost, d.std_error_gross, d.std_error_net,
                       d.std_error_cost})
        << '\n';
    }
  });
  json res = json::object();
  for (std::size_t k = 0; k < cmp.results.size(); ++k) {
    json r = sim_json(cmp.results[k]);
    r["switch_probability_long"] = switch_probability(policies[k], Position::Long, p);
    r["d_net_vs_" + cmp.names[0]] = cmp.versus_first[k].net;
    r["se_d_net_vs_" + cmp.names[0]] = cmp.versus_first[k].std_error_net;
    res[cmp.names[k]] = std::move(r);
  }
  ctx.write_summary(std::move(res));
  for (std::size_t k = 0; k < cmp.results.size(); ++k)
    ctx.out << cmp.names[k] << ": net " << format_real(cmp.results[k].net) << '\n';
  return converged ? kOk : kNotConverged;
}

int cmd_tables(Context& ctx) {
  ctx.require_seed();
  const double c = ctx.opt.cost;
  // Rows of both tables share one run list; run i uses seed + i.
  std::vector<TableRow> runs = table_grid(1);
  for (const auto& r : table_grid(2)) {
    bool seen = false;
    for (const auto& q : runs) seen = seen || (q.rho0 == r.rho0 && q.rho1 == r.rho1);
    if (!seen) runs.push_back(r);
  }
  std::vector<Comparison> results;
  const Clock t;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const ModelParams p(runs[i].rho0, runs[i].rho1, c);
    const PolicySpec pol[] = {PolicySpec::first_order(p), PolicySpec::naive(p)};
    results.push_back(compare_policies(pol, ctx.sim_config(p, ctx.opt.seed + i)));
  }
  ctx.timings["simulate_seconds"] = t.seconds();
  auto lookup = [&](const TableRow& r) -> const Comparison& {
    for (std::size_t i = 0; i < runs.size(); ++i)
      if (runs[i].rho0 == r.rho0 && runs[i].rho1 == r.rho1) return results[i];
    throw std::logic_error("table row without a run");
  };

  ctx.write("simulations.csv", [&](std::ostream& f) {
    write_results_header(f);
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const ModelParams p(runs[i].rho0, runs[i].rho1, c);
      for (std::size_t k = 0; k < 2; ++k)
        write_result_row(f, p, results[i].names[k], results[i].results[k]);
    }
  });
  ctx.write("table1.csv", [&](std::ostream& f) {
    f << "rho0,rho1,c,gross_optimal,gross_naive,net_optimal,net_naive,se_gross_optimal,"
         "se_gross_naive,se_net_optimal,se_net_naive,se_d_net,n_steps,seed\n";
    for (const auto& row : table_grid(1)) {
      const Comparison& cmp = lookup(row);
      const SimResult &o = cmp.results[0], &n = cmp.results[1];
      f << join_reals({row.rho0, row.rho1, c, o.gross, n.gross, o.net, n.net,
                       o.std_error_gross, n.std_error_gross, o.std_error_net,
                       n.std_error_net, cmp.versus_first[1].std_error_net})
        << ',' << o.n_steps << ',' << o.seed << '\n';
    }
  });
  ctx.write("table2.csv", [&](std::ostream& f) {
    f << "rho0,rho1,c,cost_optimal,cost_naive,se_cost_optimal,se_cost_naive,n_steps,seed\n";
    for (const auto& row : table_grid(2)) {
      const Comparison& cmp = lookup(row);
      const SimResult &o = cmp.results[0], &n = cmp.results[1];
      f << join_reals({row.rho0, row.rho1, c, o.cost, n.cost, o.std_error_cost,
                       n.std_error_cost})
        << ',' << o.n_steps << ',' << o.seed << '\n';
    }
  });
  json res = {{"runs", runs.size()}, {"n_steps", ctx.opt.steps}, {"seed", ctx.opt.seed}};
  ctx.write_summary(std::move(res));
  ctx.out << "wrote table1.csv and table2.csv (" << runs.size() << " runs)\n";
  return kOk;
}

struct Check {
  std::string name;
  double value;
  double threshold;
  bool asserted;
  bool passed() const { return value <= threshold; }
};

int cmd_diagnose(Context& ctx) {
  const ModelParams p = ctx.params();
  const std::vector<std::string> warnings = regime_warnings(p);
  warn_all(ctx, warnings);
  // Contraction is only claimed for rho1 <= rho0/2 and c <= 1/2.
  const bool proven = warnings.empty() && p.kappa() <= 0.5 && p.cost() <= 0.5;

  json report;
  report["params"] = {{"rho0", p.rho0()}, {"rho1", p.rho1()}, {"c", p.cost()}};
  report["regime"] = {{"proven", proven}, {"warnings", warnings}};
  std::vector<Check> checks;

  Solved s = solve(ctx, p);
  report["solve"] = report_json(s.result.report);
  const SymmetryReport sym = check_symmetries(s.result.solution);
  report["symmetries"] = {{"boundary_odd", sym.boundary_odd},
                          {"slice_shift", sym.slice_shift},
                          {"bias_shift", sym.bias_shift},
                          {"bias_even", sym.bias_even},
                          {"branch_continuity", sym.branch_continuity},
                          {"lemma_violation", sym.lemma_violation},
                          {"probes", sym.probes},
                          {"space", {{"A1", sym.space.A1}, {"A2", sym.space.A2},
                                     {"A3", sym.space.A3}, {"delta", sym.space.delta}}}};
  checks.push_back({"boundary_odd", sym.boundary_odd, 1e-6, true});
  checks.push_back({"slice_shift", sym.slice_shift, 1e-12, true});
  checks.push_back({"bias_shift", sym.bias_shift, 1e-12, true});
  checks.push_back({"bias_even", sym.bias_even, 1e-6, true});
  checks.push_back({"branch_continuity", sym.branch_continuity, 1e-6, proven});
  checks.push_back({"lemma_bounds", sym.lemma_violation, 1e-9, proven});

  const double A3 = std::isfinite(sym.space.A3) ? sym.space.A3 : 1.0;
  const LemmaSuprema lem = scan_lemma_suprema(A3);
  const double e1 = std::abs(lem.sup_f - 1.0 / std::sqrt(2.0 * M_PI));
  const double e2 = std::abs(lem.sup_yf - 1.0 / std::sqrt(2.0 * M_PI * M_E));
  const double e3 = std::abs(lem.sup_yf_scaled - A3 / std::sqrt(2.0 * M_PI * M_E));
  report["lemma_suprema"] = {{"sup_f", lem.sup_f}, {"sup_yf", lem.sup_yf},
                             {"sup_yf_scaled", lem.sup_yf_scaled}, {"A3", A3}};
  checks.push_back({"sup_f", e1, 1e-10, true});
  checks.push_back({"sup_yf", e2, 1e-10, true});
  checks.push_back({"sup_yf_scaled", e3, 1e-10, true});

  if (s.converged && p.rho1() > 0.0) {
    const Clock t;
    const ContractionEstimate est =
        measure_contraction(p, ctx.opt.pairs, ctx.opt.seed, ctx.solver_config());
    ctx.timings["contraction_seconds"] = t.seconds();
    report["contraction"] = {{"a11", est.a11}, {"a12", est.a12}, {"a21", est.a21},
                             {"a22", est.a22}, {"row1", est.row1()}, {"row2", est.row2()},
                             {"samples", est.samples}, {"a11_bound", est.a11_bound},
                             {"a21_bound", est.a21_bound}, {"solver_rate", est.solver_rate},
                             {"seed", ctx.opt.seed}};
    const double rate_cap = std::max(est.row1(), est.row2()) + 0.05;
    checks.push_back({"row1_below_one", est.row1(), 1.0 - 1e-12, proven});
    checks.push_back({"row2_below_one", est.row2(), 1.0 - 1e-12, proven});
    checks.push_back({"a11_within_bound", est.a11, 1.1 * est.a11_bound, proven});
    checks.push_back({"a21_within_bound", est.a21, 1.1 * est.a21_bound, proven});
    checks.push_back({"solver_rate", est.solver_rate, rate_cap, proven});
    checks.push_back({"residual_ratio_below_one", max_residual_ratio(s.result.report),
                      1.0 - 1e-12, proven});
  }

  bool ok = s.converged;
  json jc = json::array();
  for (const auto& c : checks) {
    jc.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold},
                  {"status", c.asserted ? (c.passed() ? "pass" : "fail") : "not asserted"}});
    if (c.asserted && !c.passed()) ok = false;
  }
  report["checks"] = jc;
  report["passed"] = ok;
  ctx.write("diagnostics.json", [&](std::ostream& f) { f << report.dump(2) << '\n'; });
  ctx.write_summary({{"passed", ok}, {"proven_regime", proven}});
  for (const auto& c : checks)
    if (c.asserted && !c.passed())
      ctx.err << "check failed: " << c.name << " = " << format_real(c.value) << " > "
              << format_real(c.threshold) << '\n';
  ctx.out << (ok ? "all asserted checks passed\n" : "some checks failed\n");
  if (!s.converged) return kNotConverged;
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"No-trade-zone solver and Monte Carlo harness for a long/short trading model "
               "with switching costs"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  Registry reg(app);
  reg.add("rho0", opt.rho0, "Correlation of the current signal with the target");
  reg.add("rho1", opt.rho1, "Correlation of the lagged signal with the target");
  reg.add("cost", opt.cost, "Fee charged on every position switch");
  reg.add("eps", opt.eps, "Solver stopping tolerance (sup-norm update)");
  reg.add("grid-nodes", opt.grid_nodes, "Solver grid size");
  reg.add("grid-extent", opt.grid_extent, "Solver grid half-width");
  reg.add("quad-nodes", opt.quad_nodes, "Gauss-Legendre points per grid cell");
  reg.add("max-iter", opt.max_iter, "Solver iteration cap");
  reg.add("init", opt.init, "Solver start: zero-cost or naive");
  reg.add("steps", opt.steps, "Simulated periods per run (after burn-in)");
  reg.add("seed", opt.seed, "Master seed (required by simulate and tables)");
  reg.add("policy", opt.policy, "simulate: naive, first_order or solver");
  reg.add("policies", opt.policies, "compare: comma-separated list, first is the reference");
  reg.add("include-noise", opt.include_noise, "Add the target noise to realized returns");
  reg.add("pairs", opt.pairs, "diagnose: sampled pairs for the contraction fit");
  reg.add("out", opt.out, "Output directory", "-o");
  app.add_option("--config", opt.config, "key = value file; command-line flags win")
      ->check(CLI::ExistingFile);

  const std::pair<const char*, const char*> commands[] = {
      {"solve", "Solve the fixed point; writes boundary.csv"},
      {"approx", "Naive, first-order and solver boundaries; writes boundaries.csv"},
      {"simulate", "Monte Carlo run of one policy; writes simulation.csv"},
      {"compare", "Policies on common random numbers; writes comparison.csv, paired.csv"},
      {"tables", "Both comparison tables; writes table1.csv, table2.csv, simulations.csv"},
      {"diagnose", "Symmetry, bound and contraction checks; writes diagnostics.json"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  Context ctx{app.get_subcommands().front()->get_name(), opt, false, {}, {}, json::object(),
              out, err};
  try {
    if (!opt.config.empty()) {
      std::ifstream f(opt.config);
      if (!f) throw ConfigError("cannot read config file " + opt.config);
      reg.apply(parse_config(f, opt.config), opt.config);
    }
    ctx.opt = opt;
    ctx.seed_given = reg.given("seed");
    ctx.out_dir = ctx.opt.out;
    fs::create_directories(ctx.out_dir);
    (void)ctx.params();  // validate before any work

    const std::map<std::string, int (*)(Context&)> dispatch = {
        {"solve", cmd_solve},       {"approx", cmd_approx}, {"simulate", cmd_simulate},
        {"compare", cmd_compare},   {"tables", cmd_tables}, {"diagnose", cmd_diagnose}};
    return dispatch.at(ctx.command)(ctx);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const InvalidParams& e) {
    err << "error: invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const BoundaryNotInvertible& e) {
    err << "error: solver failed at iteration " << e.iteration() << ": " << e.what() << '\n';
    return kNotConverged;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
}

}  // namespace notrade::cli
