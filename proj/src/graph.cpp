#include "wigsim/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <numeric>
#include <random>
#include <string>
#include <string_view>

#include <fmt/format.h>

#include "wigsim/error.hpp"
#include "wigsim/random.hpp"

namespace wigsim {

NodeSplit random_split(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(derive_seed({seed, stream::split}));
  std::shuffle(order.begin(), order.end(), rng);

  const std::size_t n_train = n * 6 / 10;
  const std::size_t n_val = n * 2 / 10;
  NodeSplit split{std::vector<bool>(n), std::vector<bool>(n), std::vector<bool>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    if (i < n_train) {
      split.train[order[i]] = true;
    } else if (i < n_train + n_val) {
      split.val[order[i]] = true;
    } else {
      split.test[order[i]] = true;
    }
  }
  return split;
}

Graph::Graph(std::size_t num_classes, std::span<const std::pair<NodeId, NodeId>> edges,
             Eigen::MatrixXd features, std::vector<int> labels, NodeSplit split)
    : num_classes_(num_classes),
      neighbors_(labels.size()),
      features_(std::move(features)),
      labels_(std::move(labels)),
      split_(std::move(split)) {
  const std::size_t n = labels_.size();
  if (num_classes_ < 1) throw ParameterError("graph needs at least one class");
  if (static_cast<std::size_t>(features_.rows()) != n) {
    throw ParameterError(fmt::format("feature rows {} != node count {}", features_.rows(), n));
  }
  for (int label : labels_) {
    if (label < 0 || static_cast<std::size_t>(label) >= num_classes_) {
      throw ParameterError(fmt::format("label {} outside [0, {})", label, num_classes_));
    }
  }
  for (const auto* mask : {&split_.train, &split_.val, &split_.test}) {
    if (mask->size() != n) throw ParameterError("split mask size does not match node count");
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (int(split_.train[v]) + int(split_.val[v]) + int(split_.test[v]) > 1) {
      throw ParameterError(fmt::format("node {} belongs to more than one split", v));
    }
  }

  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw ParameterError(fmt::format("edge ({}, {}) out of range", u, v));
    if (u == v) throw ParameterError(fmt::format("self-loop at node {}", u));
    neighbors_[u].push_back(v);
    neighbors_[v].push_back(u);
  }
  std::size_t directed = 0;
  for (auto& adj : neighbors_) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    directed += adj.size();
  }
  num_edges_ = directed / 2;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (u >= num_nodes() || v >= num_nodes()) return false;
  const auto& adj = neighbors_[u];
  return std::binary_search(adj.begin(), adj.end(), v);
}

bool operator==(const Graph& a, const Graph& b) {
  return a.num_classes_ == b.num_classes_ && a.neighbors_ == b.neighbors_ &&
         a.labels_ == b.labels_ && a.features_.rows() == b.features_.rows() &&
         a.features_.cols() == b.features_.cols() && a.features_ == b.features_ &&
         a.split_.train == b.split_.train && a.split_.val == b.split_.val &&
         a.split_.test == b.split_.test;
}

Graph generate_synthetic(const SyntheticGraphParams& p, std::uint64_t seed) {
  if (!(0.0 <= p.p_out && p.p_out <= p.p_in && p.p_in <= 1.0)) {
    throw ParameterError(
        fmt::format("need 0 <= p_out <= p_in <= 1, got p_in={} p_out={}", p.p_in, p.p_out));
  }
  if (p.classes < 2 || p.nodes < p.classes) {
    throw ParameterError(fmt::format("need n >= c >= 2, got n={} c={}", p.nodes, p.classes));
  }
  if (p.feature_dim < 1) throw ParameterError("feature dimension must be positive");

  const std::size_t n = p.nodes;
  std::vector<int> labels(n);
  for (std::size_t v = 0; v < n; ++v) labels[v] = static_cast<int>(v % p.classes);

  std::mt19937_64 rng(derive_seed({seed, stream::graph}));
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      const double prob = labels[u] == labels[v] ? p.p_in : p.p_out;
      if (unit_interval(rng()) < prob) edges.emplace_back(u, v);
    }
  }

  std::normal_distribution<double> noise(0.0, 0.5);
  Eigen::MatrixXd features(n, p.feature_dim);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t k = 0; k < p.feature_dim; ++k) features(v, k) = noise(rng);
    features(v, labels[v] % p.feature_dim) += 1.0;
  }

  return Graph(p.classes, edges, std::move(features), std::move(labels), random_split(n, seed));
}

namespace {

std::string_view strip_comment(std::string_view line) {
  if (auto pos = line.find('#'); pos != std::string_view::npos) line = line.substr(0, pos);
  return line;
}

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

template <typename T>
bool parse_number(std::string_view tok, T& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc{} && ptr == tok.data() + tok.size();
}

[[noreturn]] void fail(const std::filesystem::path& path, std::size_t line, std::string_view msg) {
  throw IngestionError(fmt::format("{}:{}: {}", path.string(), line, msg));
}

}  // namespace

Graph load_graph(const std::filesystem::path& edge_path, const std::filesystem::path& feature_path,
                 std::uint64_t split_seed) {
  std::ifstream feat(feature_path);
  if (!feat) throw IngestionError(fmt::format("cannot open {}", feature_path.string()));

  std::string line;
  std::size_t lineno = 0;
  std::size_t n = 0, d = 0, c = 0;
  bool have_header = false;
  while (!have_header && std::getline(feat, line)) {
    ++lineno;
    auto tokens = tokenize(strip_comment(line));
    if (tokens.empty()) continue;
    if (tokens.size() < 3 || tokens.size() > 4 || !parse_number(tokens[0], n) ||
        !parse_number(tokens[1], d) || !parse_number(tokens[2], c)) {
      fail(feature_path, lineno, "expected header \"n d c\"");
    }
    have_header = true;
  }
  if (!have_header) fail(feature_path, lineno, "missing header");
  if (c < 1) fail(feature_path, lineno, "class count must be positive");

  Eigen::MatrixXd features(n, d);
  std::vector<int> labels;
  labels.reserve(n);
  while (labels.size() < n && std::getline(feat, line)) {
    ++lineno;
    auto tokens = tokenize(strip_comment(line));
    if (tokens.empty()) continue;
    if (tokens.size() != d + 1) {
      fail(feature_path, lineno, fmt::format("expected {} values, found {}", d + 1, tokens.size()));
    }
    int label = 0;
    if (!parse_number(tokens[0], label)) fail(feature_path, lineno, "malformed label");
    if (label < 0 || static_cast<std::size_t>(label) >= c) {
      fail(feature_path, lineno, fmt::format("label {} outside [0, {})", label, c));
    }
    const auto row = static_cast<Eigen::Index>(labels.size());
    for (std::size_t k = 0; k < d; ++k) {
      double value = 0.0;
      if (!parse_number(tokens[k + 1], value)) fail(feature_path, lineno, "malformed feature value");
      features(row, static_cast<Eigen::Index>(k)) = value;
    }
    labels.push_back(label);
  }
  if (labels.size() != n) {
    fail(feature_path, lineno, fmt::format("expected {} feature rows, found {}", n, labels.size()));
  }
  while (std::getline(feat, line)) {
    ++lineno;
    if (!tokenize(strip_comment(line)).empty()) fail(feature_path, lineno, "trailing data");
  }

  std::ifstream edges_in(edge_path);
  if (!edges_in) throw IngestionError(fmt::format("cannot open {}", edge_path.string()));
  std::vector<std::pair<NodeId, NodeId>> edges;
  lineno = 0;
  while (std::getline(edges_in, line)) {
    ++lineno;
    auto tokens = tokenize(strip_comment(line));
    if (tokens.empty()) continue;
    std::size_t u = 0, v = 0;
    if (tokens.size() != 2 || !parse_number(tokens[0], u) || !parse_number(tokens[1], v)) {
      fail(edge_path, lineno, "expected \"u v\"");
    }
    if (u >= n || v >= n) {
      fail(edge_path, lineno, fmt::format("node id out of range [0, {})", n));
    }
    if (u == v) fail(edge_path, lineno, "self-loop");
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }

  return Graph(c, edges, std::move(features), std::move(labels), random_split(n, split_seed));
}

void save_graph(const Graph& g, const std::filesystem::path& edge_path,
                const std::filesystem::path& feature_path) {
  std::ofstream edges(edge_path);
  if (!edges) throw IngestionError(fmt::format("cannot write {}", edge_path.string()));
  edges << "# u v\n";
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    for (NodeId v : g.neighbors(u)) {
      if (u < v) edges << u << ' ' << v << '\n';
    }
  }

  std::ofstream feat(feature_path);
  if (!feat) throw IngestionError(fmt::format("cannot write {}", feature_path.string()));
  feat << g.num_nodes() << ' ' << g.feature_dim() << ' ' << g.num_classes() << '\n';
  const auto& x = g.features();
  for (Eigen::Index v = 0; v < x.rows(); ++v) {
    feat << g.labels()[static_cast<std::size_t>(v)];
    for (Eigen::Index k = 0; k < x.cols(); ++k) feat << ' ' << fmt::format("{}", x(v, k));
    feat << '\n';
  }
}

std::vector<DirectedLink> directed_links(const Graph& g) {
  std::vector<DirectedLink> links;
  links.reserve(2 * g.num_edges());
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    for (NodeId v : g.neighbors(u)) links.push_back({u, v});
  }
  return links;
}

std::size_t degree(const Graph& g, NodeId v) { return g.neighbors(v).size(); }

}  // namespace wigsim
