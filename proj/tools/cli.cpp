#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <random>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "wigsim/error.hpp"
#include "wigsim/greedy.hpp"
#include "wigsim/oracle.hpp"
#include "wigsim/sim.hpp"

namespace wigsim::cli {
namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> slots;
  std::optional<std::string> strategy;
  std::optional<std::string> out;
  std::optional<double> v;
  std::vector<std::string> settings;  // key=value
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_strategy) {
  cmd->add_option("--config", f.config, "Config file of `key = value` lines")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "Base random seed");
  cmd->add_option("--slots", f.slots, "Number of slots T")->check(CLI::PositiveNumber);
  if (with_strategy) {
    cmd->add_option("--strategy", f.strategy, "proposed | full_power | ecps | ideal")
        ->check(CLI::IsMember({"proposed", "full_power", "ecps", "ideal"}));
  }
  cmd->add_option("--out", f.out, "Metrics CSV path (default: stdout)");
  cmd->add_option("--v", f.v, "Drift-plus-penalty weight V")->check(CLI::NonNegativeNumber);
  cmd->add_option("--set", f.settings, "Extra config setting key=value (repeatable)");
}

ExperimentConfig resolve(const CommonFlags& f) {
  ExperimentConfig cfg;
  if (!f.config.empty()) cfg = load_config(f.config, cfg);
  for (const auto& kv : f.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ParameterError(fmt::format("--set expects key=value, got '{}'", kv));
    apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (f.seed) cfg.seed = *f.seed;
  if (f.slots) cfg.slots = *f.slots;
  if (f.strategy) cfg.strategy = parse_strategy(*f.strategy);
  if (f.out) cfg.output = *f.out;
  if (f.v) cfg.v = *f.v;
  cfg.validate();
  return cfg;
}

void emit(const ExperimentConfig& cfg, std::span<const MetricsRow> rows, std::ostream& out) {
  if (cfg.output.empty()) {
    out << format_metrics_csv(rows);
  } else {
    write_metrics_csv(cfg.output, rows);
  }
}

struct OracleFlags {
  std::size_t instances{200};
  std::size_t subslots{50};
  std::size_t max_links{3};
  std::size_t resolution{400};
  std::uint64_t seed{1};
};

int run_oracle(const OracleFlags& f, std::ostream& out) {
  std::mt19937_64 rng(f.seed);
  std::size_t agree = 0, boundary = 0, disagree = 0, feasible = 0;
  double worst_residual = 0.0;
  for (std::size_t k = 0; k < f.instances; ++k) {
    const std::size_t links = 1 + k % f.max_links;
    const auto inst = oracle::random_instance(rng, links);
    const auto sol = solve_feasibility(inst);
    const auto grid = oracle::grid_feasibility(inst, f.resolution);
    if (sol.feasible) {
      ++feasible;
      worst_residual = std::max(worst_residual, max_relative_violation(inst, sol.power));
    }
    if (sol.feasible == grid.feasible) {
      ++agree;
    } else if (std::abs(grid.best_margin) <= 1.0) {
      ++boundary;
    } else {
      ++disagree;
    }
  }
  out << fmt::format("feasibility: {} instances, {} feasible, {} agree, {} boundary, {} disagree, "
                     "worst residual {:.3g}\n",
                     f.instances, feasible, agree, boundary, disagree, worst_residual);

  std::size_t exact = 0, optimal = 0;
  double worst_gap = 0.0;
  for (std::size_t k = 0; k < f.subslots; ++k) {
    const std::size_t links = 1 + k % 4;
    const auto s = oracle::random_subslot(rng, links);
    const auto chosen = solve_subslot(s.links, s.state, s.cfg, CasePolicy{s.weights, s.v, {}});
    const auto nested = oracle::best_nested_case(s.links, s.state, s.cfg, s.weights, s.v);
    const auto global = oracle::best_subset(s.links, s.state, s.cfg, s.weights, s.v);
    if (chosen.objective == nested.objective) ++exact;
    if (chosen.objective <= global.objective) ++optimal;
    worst_gap = std::max(worst_gap, chosen.objective - global.objective);
  }
  out << fmt::format("greedy: {} sub-slots, {} match nested optimum, {} match global optimum, "
                     "worst gap {:.3g}\n",
                     f.subslots, exact, optimal, worst_gap);
  return (disagree == 0 && exact == f.subslots && worst_residual <= 1e-9) ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wireless GNN link-maximization simulator"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("--verbose", verbose, "Log diagnostics to stderr");

  CommonFlags run_flags;
  auto* run_cmd = app.add_subcommand("run", "Run one experiment and write its metrics CSV");
  add_common(run_cmd, run_flags, true);

  CommonFlags cmp_flags;
  std::size_t seeds = 5;
  bool include_ideal = false;
  auto* cmp_cmd = app.add_subcommand("compare", "Run proposed, full_power and ecps over several seeds");
  add_common(cmp_cmd, cmp_flags, false);
  cmp_cmd->add_option("--seeds", seeds, "Number of seeds, starting at --seed")->check(CLI::PositiveNumber);
  cmp_cmd->add_flag("--include-ideal", include_ideal, "Also run the all-links-delivered upper bound");

  SyntheticGraphParams gen;
  std::uint64_t gen_seed = 0;
  std::string edges_path, features_path;
  auto* gen_cmd = app.add_subcommand("gen-data", "Write a synthetic graph as edge and feature files");
  gen_cmd->add_option("--nodes", gen.nodes, "Node count");
  gen_cmd->add_option("--classes", gen.classes, "Class count");
  gen_cmd->add_option("--p-in", gen.p_in, "Intra-class edge probability");
  gen_cmd->add_option("--p-out", gen.p_out, "Inter-class edge probability");
  gen_cmd->add_option("--dim", gen.feature_dim, "Feature dimension");
  gen_cmd->add_option("--seed", gen_seed, "Random seed");
  gen_cmd->add_option("--edges", edges_path, "Edge file to write")->required();
  gen_cmd->add_option("--features", features_path, "Feature file to write")->required();

  OracleFlags oracle_flags;
  auto* oracle_cmd = app.add_subcommand("oracle", "Check the solvers against brute-force oracles");
  oracle_cmd->add_option("--instances", oracle_flags.instances, "Random feasibility instances");
  oracle_cmd->add_option("--subslots", oracle_flags.subslots, "Random sub-slots for the greedy check");
  oracle_cmd->add_option("--max-links", oracle_flags.max_links, "Links per feasibility instance (1-3)")
      ->check(CLI::Range(1, 3));
  oracle_cmd->add_option("--resolution", oracle_flags.resolution, "Grid cells per axis")
      ->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--seed", oracle_flags.seed, "Random seed");

  std::vector<const char*> argv{"wigsim"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::warn);

  try {
    if (*run_cmd) {
      const auto cfg = resolve(run_flags);
      emit(cfg, run_experiment(cfg), out);
    } else if (*cmp_cmd) {
      const auto base = resolve(cmp_flags);
      std::vector<Strategy> strategies{Strategy::proposed, Strategy::full_power, Strategy::ecps};
      if (include_ideal) strategies.push_back(Strategy::ideal);
      std::vector<ExperimentConfig> configs;
      for (auto s : strategies) {
        for (std::size_t k = 0; k < seeds; ++k) {
          auto cfg = base;
          cfg.strategy = s;
          cfg.seed = base.seed + k;
          configs.push_back(cfg);
        }
      }
      std::vector<MetricsRow> merged;
      for (const auto& rows : run_experiments(configs)) merged.insert(merged.end(), rows.begin(), rows.end());
      emit(base, merged, out);
    } else if (*gen_cmd) {
      save_graph(generate_synthetic(gen, gen_seed), edges_path, features_path);
    } else if (*oracle_cmd) {
      return run_oracle(oracle_flags, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace wigsim::cli
