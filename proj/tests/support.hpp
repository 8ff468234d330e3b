#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <unistd.h>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wigsim/graph.hpp"

namespace wigsim::test {

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("wigsim_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path file(std::string_view name, std::string_view contents) const {
    auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << contents;
    return p;
  }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Graph over n nodes with the given edges, 2 classes by parity, identity-ish
/// features and every node in the training split.
inline Graph small_graph(std::size_t n, std::vector<std::pair<NodeId, NodeId>> edges, std::size_t dim = 2) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  std::vector<int> labels(n);
  for (std::size_t v = 0; v < n; ++v) {
    labels[v] = static_cast<int>(v % 2);
    x(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(v % dim)) = 1.0;
  }
  NodeSplit split{std::vector<bool>(n, true), std::vector<bool>(n, false), std::vector<bool>(n, false)};
  return Graph(2, edges, std::move(x), std::move(labels), std::move(split));
}

}  // namespace wigsim::test
