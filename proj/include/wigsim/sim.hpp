#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wigsim/channel.hpp"
#include "wigsim/graph.hpp"
#include "wigsim/greedy.hpp"
#include "wigsim/lyapunov.hpp"
#include "wigsim/scheduler.hpp"

namespace wigsim {

enum class Strategy {
  proposed,    // queue-aware case selection (drift-plus-penalty)
  full_power,  // every node at P_max until its horizon budget is spent
  ecps,        // case selection with a hard per-slot energy cap
  ideal,       // every message delivered; accuracy upper bound
};

std::string_view to_string(Strategy s);
/// Throws ParameterError for an unknown name.
Strategy parse_strategy(std::string_view name);

struct GraphSource {
  SyntheticGraphParams synthetic;
  std::filesystem::path edges;     // both set: load from files
  std::filesystem::path features;

  bool from_files() const { return !edges.empty() || !features.empty(); }
};

struct ExperimentConfig {
  ChannelConfig channel;
  double energy_budget_j{1.25};  // long-term average supply per node per slot
  double v{1e-5};
  std::size_t slots{200};
  Strategy strategy{Strategy::proposed};
  GraphSource graph;
  double lr{0.05};
  std::size_t hidden{16};
  std::uint64_t seed{0};
  std::filesystem::path output;
  bool eval_with_outage{false};
  bool self_loops{false};

  void validate() const;
};

/// Sets one `key = value` setting. Throws ParameterError for an unknown key
/// or a malformed value.
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// Applies a config file of `key = value` lines ('#' starts a comment) on top
/// of `base`. Throws IngestionError with the line number on bad lines.
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

struct MetricsRow {
  std::size_t slot{0};
  std::size_t n_links{0};
  std::size_t cum_links{0};
  double mean_queue{0.0};    // sum_u Z_u / n after this slot's update
  double energy_total{0.0};  // sum_u E_u over this slot
  double train_loss{0.0};
  double test_acc{0.0};
  Strategy strategy{Strategy::proposed};
  std::uint64_t seed{0};

  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

inline constexpr std::string_view kMetricsHeader =
    "slot,n_links,cum_links,mean_queue,energy_total,train_loss,test_acc,strategy,seed";

std::string format_metrics_csv(std::span<const MetricsRow> rows);
/// Throws IngestionError on a malformed header or row.
std::vector<MetricsRow> parse_metrics_csv(std::string_view text);
void write_metrics_csv(const std::filesystem::path& path, std::span<const MetricsRow> rows);

/// Full Power: every transmitter whose cumulative energy is still below
/// `horizon_budget` sends at P_max; links meeting the required rate are
/// activated. Updates `cumulative` with this slot's spending.
SlotOutcome strategy_full_power(const SubSlotPlan& plan, const ChannelState& st, const ChannelConfig& cfg,
                                std::span<double> cumulative, double horizon_budget);

/// ECPS: nested-case selection without queues, each node capped at
/// `slot_budget` joules within the slot.
SlotOutcome strategy_ecps(const SubSlotPlan& plan, const ChannelState& st, const ChannelConfig& cfg,
                          std::size_t num_nodes, double slot_budget, double v);

/// Proposed rule: nested-case selection scored by -v N + sum Z_u E_u.
SlotOutcome strategy_proposed(const SubSlotPlan& plan, const ChannelState& st, const ChannelConfig& cfg,
                              const VirtualQueues& q, double v);

/// Every link delivered at no energy cost.
SlotOutcome strategy_ideal(std::span<const DirectedLink> links, std::size_t num_nodes);

/// Everything the experiment loop knows at the end of a slot.
struct SlotRecord {
  std::size_t slot{0};
  const SubSlotPlan* plan{nullptr};
  const ChannelState* channel{nullptr};
  const SlotOutcome* outcome{nullptr};
  const VirtualQueues* queues_before{nullptr};
  const VirtualQueues* queues_after{nullptr};
};
using SlotObserver = std::function<void(const SlotRecord&)>;

Graph make_graph(const ExperimentConfig& cfg);

/// Runs the slot loop. Deterministic per config: channels, schedules and
/// model initialization derive from (seed, slot), so strategies run with the
/// same seed see the same channel realizations.
std::vector<MetricsRow> run_experiment(const ExperimentConfig& cfg, const SlotObserver& observer = {});

/// Parallelism cap from WIGSIM_THREADS (0 or unset = hardware concurrency).
std::size_t thread_budget();

/// Runs independent experiments concurrently; results keep input order.
std::vector<std::vector<MetricsRow>> run_experiments(std::span<const ExperimentConfig> configs,
                                                     std::size_t threads = thread_budget());

}  // namespace wigsim
