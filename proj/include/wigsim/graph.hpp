#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace wigsim {

using NodeId = std::uint32_t;

/// One transmission direction over an undirected graph edge.
struct DirectedLink {
  NodeId tx{0};
  NodeId rx{0};

  friend auto operator<=>(const DirectedLink&, const DirectedLink&) = default;
};

/// Train/validation/test membership. The three masks are pairwise disjoint;
/// their union may leave nodes unassigned.
struct NodeSplit {
  std::vector<bool> train;
  std::vector<bool> val;
  std::vector<bool> test;
};

/// Shuffled 60/20/20 split of n nodes.
NodeSplit random_split(std::size_t n, std::uint64_t seed);

/// Undirected, unweighted node-classification graph. Immutable once built.
///
/// Node ids are dense in [0, n). Self-loops are rejected; isolated nodes are
/// allowed. Duplicate edges collapse.
class Graph {
 public:
  Graph(std::size_t num_classes, std::span<const std::pair<NodeId, NodeId>> edges,
        Eigen::MatrixXd features, std::vector<int> labels, NodeSplit split);

  std::size_t num_nodes() const noexcept { return neighbors_.size(); }
  std::size_t num_classes() const noexcept { return num_classes_; }
  std::size_t feature_dim() const noexcept { return static_cast<std::size_t>(features_.cols()); }
  std::size_t num_edges() const noexcept { return num_edges_; }

  bool has_edge(NodeId u, NodeId v) const;
  std::span<const NodeId> neighbors(NodeId v) const { return neighbors_.at(v); }

  const Eigen::MatrixXd& features() const noexcept { return features_; }
  const std::vector<int>& labels() const noexcept { return labels_; }
  const NodeSplit& split() const noexcept { return split_; }

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  std::size_t num_classes_;
  std::size_t num_edges_{0};
  std::vector<std::vector<NodeId>> neighbors_;  // sorted, symmetric
  Eigen::MatrixXd features_;
  std::vector<int> labels_;
  NodeSplit split_;
};

struct SyntheticGraphParams {
  std::size_t nodes{30};
  std::size_t classes{3};
  double p_in{0.5};
  double p_out{0.05};
  std::size_t feature_dim{8};
};

/// Planted-partition graph: classes assigned round-robin, intra-class edges
/// with probability p_in, inter-class with p_out. Features are the one-hot
/// class indicator (dimension label % d) plus N(0, 0.5^2) noise per entry.
Graph generate_synthetic(const SyntheticGraphParams& params, std::uint64_t seed);

/// Reads an edge list ("u v" per line, '#' comments) and a feature file
/// (header "n d c", then n lines "label f_1 .. f_d"). Edges are symmetrized.
/// Throws IngestionError naming the offending file and line.
Graph load_graph(const std::filesystem::path& edge_path, const std::filesystem::path& feature_path,
                 std::uint64_t split_seed = 0);

/// Writes the two files read by load_graph. Features are written with
/// round-trip precision.
void save_graph(const Graph& g, const std::filesystem::path& edge_path,
                const std::filesystem::path& feature_path);

/// Every ordered pair (u, v) with an edge, sorted by tx then rx.
std::vector<DirectedLink> directed_links(const Graph& g);

std::size_t degree(const Graph& g, NodeId v);

}  // namespace wigsim
