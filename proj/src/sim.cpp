#include "wigsim/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "wigsim/error.hpp"
#include "wigsim/gnn.hpp"
#include "wigsim/random.hpp"

namespace wigsim {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::proposed: return "proposed";
    case Strategy::full_power: return "full_power";
    case Strategy::ecps: return "ecps";
    case Strategy::ideal: return "ideal";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  for (auto s : {Strategy::proposed, Strategy::full_power, Strategy::ecps, Strategy::ideal}) {
    if (name == to_string(s)) return s;
  }
  throw ParameterError(fmt::format("unknown strategy '{}'", name));
}

void ExperimentConfig::validate() const {
  channel.validate();
  LyapunovConfig{v}.validate();
  if (slots < 1) throw ParameterError("slots must be at least 1");
  if (!(energy_budget_j >= 0.0)) throw ParameterError("energy_budget_j must be non-negative");
  if (!(lr >= 0.0)) throw ParameterError("lr must be non-negative");
  if (hidden < 1) throw ParameterError("hidden must be at least 1");
  if (graph.from_files() && (graph.edges.empty() || graph.features.empty())) {
    throw ParameterError("file graphs need both an edge file and a feature file");
  }
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_value(std::string_view key, std::string_view text) {
  T out{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParameterError(fmt::format("bad value '{}' for {}", text, key));
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ParameterError(fmt::format("bad boolean '{}' for {}", text, key));
}

}  // namespace

void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  auto& ch = cfg.channel;
  auto& syn = cfg.graph.synthetic;
  auto num = [&](double& field) { field = parse_value<double>(key, value); };
  auto count = [&](std::size_t& field) { field = parse_value<std::size_t>(key, value); };

  if (key == "seed") cfg.seed = parse_value<std::uint64_t>(key, value);
  else if (key == "slots") count(cfg.slots);
  else if (key == "strategy") cfg.strategy = parse_strategy(value);
  else if (key == "v") num(cfg.v);
  else if (key == "lr") num(cfg.lr);
  else if (key == "hidden") count(cfg.hidden);
  else if (key == "energy_budget_j") num(cfg.energy_budget_j);
  else if (key == "out") cfg.output = std::string(value);
  else if (key == "eval_with_outage") cfg.eval_with_outage = parse_bool(key, value);
  else if (key == "self_loops") cfg.self_loops = parse_bool(key, value);
  else if (key == "bandwidth_hz") num(ch.bandwidth_hz);
  else if (key == "noise_power_w") num(ch.noise_power_w);
  else if (key == "payload_bits") num(ch.payload_bits);
  else if (key == "tau_max_s") num(ch.tau_max_s);
  else if (key == "p_max_w") num(ch.p_max_w);
  else if (key == "area_side_m") num(ch.area_side_m);
  else if (key == "pathloss_a") num(ch.pathloss_a);
  else if (key == "pathloss_b") num(ch.pathloss_b);
  else if (key == "min_distance_m") num(ch.min_distance_m);
  else if (key == "fixed_distance_m") num(ch.fixed_distance_m);
  else if (key == "placement") {
    if (value == "uniform") ch.placement = Placement::uniform_square;
    else if (value == "fixed") ch.placement = Placement::fixed_distance;
    else throw ParameterError(fmt::format("unknown placement '{}'", value));
  }
  else if (key == "nodes") count(syn.nodes);
  else if (key == "classes") count(syn.classes);
  else if (key == "p_in") num(syn.p_in);
  else if (key == "p_out") num(syn.p_out);
  else if (key == "feature_dim") count(syn.feature_dim);
  else if (key == "edges") cfg.graph.edges = std::string(value);
  else if (key == "features") cfg.graph.features = std::string(value);
  else throw ParameterError(fmt::format("unknown setting '{}'", key));
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw IngestionError(fmt::format("cannot open config {}", path.string()));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view text = line;
    if (auto pos = text.find('#'); pos != std::string_view::npos) text = text.substr(0, pos);
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw IngestionError(fmt::format("{}:{}: expected 'key = value'", path.string(), lineno));
    }
    try {
      apply_setting(base, trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
    } catch (const ParameterError& e) {
      throw IngestionError(fmt::format("{}:{}: {}", path.string(), lineno, e.what()));
    }
  }
  return base;
}

std::string format_metrics_csv(std::span<const MetricsRow> rows) {
  std::string out(kMetricsHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{:.9g},{:.9g},{:.9g},{:.9g},{},{}\n", r.slot, r.n_links, r.cum_links,
                       r.mean_queue, r.energy_total, r.train_loss, r.test_acc, to_string(r.strategy), r.seed);
  }
  return out;
}

std::vector<MetricsRow> parse_metrics_csv(std::string_view text) {
  std::vector<MetricsRow> rows;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineno;
    if (!header_seen) {
      if (line != kMetricsHeader) throw IngestionError("metrics CSV: unexpected header");
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 9) throw IngestionError(fmt::format("metrics CSV line {}: expected 9 fields", lineno));
    try {
      MetricsRow r;
      r.slot = parse_value<std::size_t>("slot", fields[0]);
      r.n_links = parse_value<std::size_t>("n_links", fields[1]);
      r.cum_links = parse_value<std::size_t>("cum_links", fields[2]);
      r.mean_queue = parse_value<double>("mean_queue", fields[3]);
      r.energy_total = parse_value<double>("energy_total", fields[4]);
      r.train_loss = parse_value<double>("train_loss", fields[5]);
      r.test_acc = parse_value<double>("test_acc", fields[6]);
      r.strategy = parse_strategy(fields[7]);
      r.seed = parse_value<std::uint64_t>("seed", fields[8]);
      rows.push_back(r);
    } catch (const ParameterError& e) {
      throw IngestionError(fmt::format("metrics CSV line {}: {}", lineno, e.what()));
    }
  }
  if (!header_seen) throw IngestionError("metrics CSV: missing header");
  return rows;
}

void write_metrics_csv(const std::filesystem::path& path, std::span<const MetricsRow> rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestionError(fmt::format("cannot write {}", path.string()));
  out << format_metrics_csv(rows);
}

SlotOutcome strategy_full_power(const SubSlotPlan& plan, const ChannelState& st, const ChannelConfig& cfg,
                                std::span<double> cumulative, double horizon_budget) {
  SlotOutcome outcome(cumulative.size());
  std::vector<double> powers(cumulative.size(), 0.0);
  for (std::size_t m = 0; m < plan.size(); ++m) {
    std::vector<DirectedLink> active;
    std::vector<NodeId> transmitters;
    for (const auto& l : plan.groups[m]) {
      if (cumulative[l.tx] >= horizon_budget) continue;  // depleted
      active.push_back(l);
      transmitters.push_back(l.tx);
      powers[l.tx] = cfg.p_max_w;
    }
    for (const auto& l : active) {
      const double rate = achievable_rate(sinr(l, powers, transmitters, st, cfg.noise_power_w), cfg.bandwidth_hz);
      const double energy = transmission_energy(cfg.p_max_w, cfg.payload(l.tx), rate, cfg.tau_max_s);
      outcome.record({l, m, cfg.p_max_w, rate, energy, communication_indicator(rate, cfg.required_rate(l.tx))});
    }
    for (const auto& l : active) {
      powers[l.tx] = 0.0;
    }
    for (const auto& t : outcome.transmissions) {
      if (t.subslot == m) cumulative[t.link.tx] += t.energy_j;
    }
  }
  return outcome;
}

SlotOutcome strategy_ecps(const SubSlotPlan& plan, const ChannelState& st, const ChannelConfig& cfg,
                          std::size_t num_nodes, double slot_budget, double v) {
  const std::vector<double> weights(num_nodes, kWeightFloor);
  return run_slot(plan, st, cfg, num_nodes, SlotPolicy{weights, v, slot_budget});
}

SlotOutcome strategy_proposed(const SubSlotPlan& plan, const ChannelState& st, const ChannelConfig& cfg,
                              const VirtualQueues& q, double v) {
  return run_slot(plan, st, cfg, q.z.size(), SlotPolicy{q.z, v, std::nullopt});
}

SlotOutcome strategy_ideal(std::span<const DirectedLink> links, std::size_t num_nodes) {
  SlotOutcome outcome(num_nodes);
  for (const auto& l : links) outcome.record({l, 0, 0.0, 0.0, 0.0, true});
  return outcome;
}

Graph make_graph(const ExperimentConfig& cfg) {
  if (cfg.graph.from_files()) return load_graph(cfg.graph.edges, cfg.graph.features, cfg.seed);
  return generate_synthetic(cfg.graph.synthetic, cfg.seed);
}

std::vector<MetricsRow> run_experiment(const ExperimentConfig& cfg, const SlotObserver& observer) {
  cfg.validate();
  const Graph g = make_graph(cfg);
  const std::size_t n = g.num_nodes();
  const auto links = directed_links(g);
  const auto positions = place_nodes(n, cfg.channel, cfg.seed);
  const std::vector<double> budgets(n, cfg.energy_budget_j);

  const auto theta = theta_bound(cfg.channel, budgets);
  spdlog::debug("{} seed {}: {} nodes, {} directed links, drift constant {:.6g} per node", to_string(cfg.strategy),
                cfg.seed, n, links.size(), theta.empty() ? 0.0 : theta.front());

  const AggregatorOptions agg_opts{cfg.self_loops};
  const auto eval_full = full_aggregator(g, agg_opts);
  GcnModel model = init_model(g.feature_dim(), cfg.hidden, g.num_classes(), cfg.seed);

  VirtualQueues queues = VirtualQueues::empty(n);
  std::vector<double> cumulative(n, 0.0);
  const double horizon_budget = cfg.energy_budget_j * static_cast<double>(cfg.slots);

  std::vector<MetricsRow> rows;
  rows.reserve(cfg.slots);
  std::size_t cum_links = 0;
  for (std::size_t t = 1; t <= cfg.slots; ++t) {
    const auto plan = decompose(links, derive_seed({cfg.seed, stream::schedule, t}));
    const auto pairs = gain_pairs(plan);
    const auto st = sample_channel(positions, pairs, t, cfg.channel, cfg.seed);

    SlotOutcome outcome;
    switch (cfg.strategy) {
      case Strategy::proposed:
        outcome = strategy_proposed(plan, st, cfg.channel, queues, cfg.v);
        break;
      case Strategy::full_power:
        outcome = strategy_full_power(plan, st, cfg.channel, cumulative, horizon_budget);
        break;
      case Strategy::ecps:
        outcome = strategy_ecps(plan, st, cfg.channel, n, cfg.energy_budget_j, cfg.v);
        break;
      case Strategy::ideal:
        outcome = strategy_ideal(links, n);
        break;
    }
    if (outcome.solver_failures > 0) {
      spdlog::info("slot {}: {} case solves failed and were treated as infeasible", t, outcome.solver_failures);
    }

    // Baselines ignore the queues but they are still tracked for comparison.
    VirtualQueues next = update_queues(queues, outcome.energies, budgets);

    const auto agg = build_aggregator(g, outcome, agg_opts);
    const auto step = loss_and_grad(model, g, agg, g.split().train);
    model = train_step(model, step.grads, cfg.lr);
    const double acc = evaluate(model, g, cfg.eval_with_outage ? agg : eval_full, g.split().test);

    cum_links += outcome.n_links;
    double energy_total = 0.0;
    for (double e : outcome.energies) energy_total += e;
    rows.push_back({t, outcome.n_links, cum_links, next.mean(), energy_total, step.loss, acc, cfg.strategy, cfg.seed});

    if (observer) observer({t, &plan, &st, &outcome, &queues, &next});
    queues = std::move(next);
  }
  return rows;
}

std::size_t thread_budget() {
  std::size_t threads = 0;
  if (const char* env = std::getenv("WIGSIM_THREADS")) {
    std::string_view text(env);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), threads);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw ParameterError(fmt::format("WIGSIM_THREADS must be a non-negative integer, got '{}'", text));
    }
  }
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  return threads;
}

std::vector<std::vector<MetricsRow>> run_experiments(std::span<const ExperimentConfig> configs,
                                                     std::size_t threads) {
  for (const auto& c : configs) c.validate();
  std::vector<std::vector<MetricsRow>> results(configs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        results[i] = run_experiment(configs[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t count = std::min(std::max<std::size_t>(threads, 1), std::max<std::size_t>(configs.size(), 1));
  std::vector<std::jthread> pool;
  for (std::size_t k = 1; k < count; ++k) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace wigsim
