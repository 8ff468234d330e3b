#include <doctest.h>

#include <algorithm>
#include <set>

#include "support.hpp"
#include "wigsim/error.hpp"
#include "wigsim/graph.hpp"

using namespace wigsim;

TEST_CASE("extreme probabilities give disjoint class cliques") {
  const auto g = generate_synthetic({4, 2, 1.0, 0.0, 2}, 0);
  CHECK(g.num_nodes() == 4);
  CHECK(g.num_edges() == 2);
  // Round-robin labels: 0 1 0 1.
  CHECK(g.labels() == std::vector<int>{0, 1, 0, 1});
  CHECK(g.has_edge(0, 2));
  CHECK(g.has_edge(1, 3));
  CHECK_FALSE(g.has_edge(0, 1));
  CHECK_FALSE(g.has_edge(2, 3));
  auto sorted = g.labels();
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{0, 0, 1, 1});
}

TEST_CASE("planted partition is denser inside classes") {
  const auto g = generate_synthetic({30, 3, 0.5, 0.05, 8}, 1);
  std::size_t intra = 0, inter = 0, intra_pairs = 0, inter_pairs = 0;
  for (NodeId u = 0; u < 30; ++u) {
    for (NodeId v = u + 1; v < 30; ++v) {
      const bool same = g.labels()[u] == g.labels()[v];
      (same ? intra_pairs : inter_pairs)++;
      if (g.has_edge(u, v)) (same ? intra : inter)++;
    }
  }
  CHECK(double(intra) / intra_pairs > double(inter) / inter_pairs);
}

TEST_CASE("synthetic parameters are validated") {
  CHECK_THROWS_AS(generate_synthetic({1, 2, 0.5, 0.1, 2}, 0), ParameterError);
  CHECK_THROWS_AS(generate_synthetic({4, 1, 0.5, 0.1, 2}, 0), ParameterError);
  CHECK_THROWS_AS(generate_synthetic({4, 2, 0.1, 0.5, 2}, 0), ParameterError);
  CHECK_THROWS_AS(generate_synthetic({4, 2, 1.5, 0.5, 2}, 0), ParameterError);
  CHECK_THROWS_AS(generate_synthetic({4, 2, 0.5, -0.1, 2}, 0), ParameterError);
}

TEST_CASE("synthetic graphs are deterministic per seed") {
  const SyntheticGraphParams p{20, 3, 0.6, 0.1, 4};
  CHECK(generate_synthetic(p, 7) == generate_synthetic(p, 7));
  CHECK_FALSE(generate_synthetic(p, 7) == generate_synthetic(p, 8));
}

TEST_CASE("features carry the class signal") {
  const auto g = generate_synthetic({300, 3, 0.1, 0.0, 5}, 3);
  // Mean of the label's own dimension is about 1, others about 0.
  Eigen::VectorXd own = Eigen::VectorXd::Zero(3), other = Eigen::VectorXd::Zero(3);
  for (std::size_t v = 0; v < 300; ++v) {
    const int c = g.labels()[v];
    own(c) += g.features()(v, c) / 100.0;
    other(c) += g.features()(v, (c + 1) % 5) / 100.0;
  }
  for (int c = 0; c < 3; ++c) {
    CHECK(own(c) == doctest::Approx(1.0).epsilon(0.15));
    CHECK(std::abs(other(c)) < 0.15);
  }
}

TEST_CASE("split is 60/20/20 and disjoint") {
  for (std::size_t n : {5u, 10u, 31u, 100u}) {
    const auto s = random_split(n, 11);
    std::size_t tr = 0, va = 0, te = 0;
    for (std::size_t v = 0; v < n; ++v) {
      CHECK(int(s.train[v]) + int(s.val[v]) + int(s.test[v]) == 1);
      tr += s.train[v];
      va += s.val[v];
      te += s.test[v];
    }
    CHECK(tr == n * 6 / 10);
    CHECK(va == n * 2 / 10);
    CHECK(te == n - tr - va);
  }
}

TEST_CASE("graph construction rejects inconsistent input") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(3, 1);
  NodeSplit split{std::vector<bool>(3), std::vector<bool>(3), std::vector<bool>(3)};
  std::vector<std::pair<NodeId, NodeId>> loop{{1, 1}};
  CHECK_THROWS_AS(Graph(2, loop, x, {0, 1, 0}, split), ParameterError);
  std::vector<std::pair<NodeId, NodeId>> far{{0, 3}};
  CHECK_THROWS_AS(Graph(2, far, x, {0, 1, 0}, split), ParameterError);
  CHECK_THROWS_AS(Graph(2, {}, x, {0, 2, 0}, split), ParameterError);
  CHECK_THROWS_AS(Graph(2, {}, x, {0, 1}, split), ParameterError);
  auto overlap = split;
  overlap.train[0] = overlap.test[0] = true;
  CHECK_THROWS_AS(Graph(2, {}, x, {0, 1, 0}, overlap), ParameterError);
}

TEST_CASE("adjacency is symmetric and duplicate edges collapse") {
  const auto g = test::small_graph(3, {{0, 1}, {1, 0}, {0, 1}, {1, 2}});
  CHECK(g.num_edges() == 2);
  for (NodeId u = 0; u < 3; ++u) {
    CHECK_FALSE(g.has_edge(u, u));
    for (NodeId v = 0; v < 3; ++v) CHECK(g.has_edge(u, v) == g.has_edge(v, u));
  }
}

TEST_CASE("directed links") {
  SUBCASE("single edge") {
    const auto links = directed_links(test::small_graph(2, {{0, 1}}));
    CHECK(links == std::vector<DirectedLink>{{0, 1}, {1, 0}});
  }
  SUBCASE("triangle") {
    CHECK(directed_links(test::small_graph(3, {{0, 1}, {1, 2}, {0, 2}})).size() == 6);
  }
  SUBCASE("empty graph") {
    CHECK(directed_links(test::small_graph(3, {})).empty());
  }
  SUBCASE("sorted and closed under reversal") {
    const auto g = generate_synthetic({25, 3, 0.4, 0.1, 3}, 5);
    const auto links = directed_links(g);
    CHECK(links.size() == 2 * g.num_edges());
    CHECK(std::is_sorted(links.begin(), links.end()));
    std::set<DirectedLink> all(links.begin(), links.end());
    CHECK(all.size() == links.size());
    for (const auto& l : links) {
      CHECK(l.tx != l.rx);
      CHECK(all.contains(DirectedLink{l.rx, l.tx}));
    }
  }
}

TEST_CASE("degree") {
  const auto tri = test::small_graph(4, {{0, 1}, {1, 2}, {0, 2}});
  CHECK(degree(tri, 0) == 2);
  CHECK(degree(tri, 3) == 0);
  const auto star = test::small_graph(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}});
  CHECK(degree(star, 0) == 5);
  CHECK(degree(star, 4) == 1);
}

TEST_CASE("loading graph files") {
  test::TempDir dir;
  const auto feats2 = dir.file("f2.txt", "2 1 2\n0 0.5\n1 -1.5\n");
  const auto feats3 = dir.file("f3.txt", "# nodes dim classes\n3 2 2 extra\n0 1 0\n1 0 1\n\n0 1 1\n");

  SUBCASE("one listed edge is symmetrized") {
    const auto g = load_graph(dir.file("e.txt", "0 1\n"), feats2);
    CHECK(g.has_edge(0, 1));
    CHECK(g.has_edge(1, 0));
    CHECK(g.features()(1, 0) == -1.5);
    CHECK(g.labels() == std::vector<int>{0, 1});
  }
  SUBCASE("empty edge file") {
    const auto g = load_graph(dir.file("e.txt", ""), feats3);
    CHECK(g.num_nodes() == 3);
    CHECK(g.num_edges() == 0);
    CHECK(g.feature_dim() == 2);
  }
  SUBCASE("comments and blank lines") {
    const auto g = load_graph(dir.file("e.txt", "# header\n\n0 2  # trailing\n 1\t2\n"), feats3);
    CHECK(g.num_edges() == 2);
  }

  auto expect_error = [&](std::string_view edges, const std::filesystem::path& feats, std::string_view where) {
    const auto e = dir.file("bad_edges.txt", edges);
    try {
      load_graph(e, feats);
      FAIL("expected an ingestion error");
    } catch (const IngestionError& err) {
      CHECK(std::string(err.what()).find(where) != std::string::npos);
    }
  };
  SUBCASE("out of range id names its line") { expect_error("0 1\n0 5\n", feats3, "bad_edges.txt:2:"); }
  SUBCASE("malformed edge line") { expect_error("0 1 2\n", feats3, "bad_edges.txt:1:"); }
  SUBCASE("non-numeric edge") { expect_error("\n\na b\n", feats3, "bad_edges.txt:3:"); }
  SUBCASE("negative id") { expect_error("-1 0\n", feats3, "bad_edges.txt:1:"); }
  SUBCASE("self-loop") { expect_error("1 1\n", feats3, "bad_edges.txt:1:"); }
  SUBCASE("feature dimension mismatch") {
    expect_error("", dir.file("bad_feats.txt", "2 2 2\n0 1 2\n1 1\n"), "bad_feats.txt:3:");
  }
  SUBCASE("label out of range") {
    expect_error("", dir.file("bad_feats.txt", "1 1 2\n2 0.0\n"), "bad_feats.txt:2:");
  }
  SUBCASE("missing rows") { expect_error("", dir.file("bad_feats.txt", "3 1 2\n0 1\n"), "bad_feats.txt:2:"); }
  SUBCASE("bad header") { expect_error("", dir.file("bad_feats.txt", "3 x 2\n"), "bad_feats.txt:1:"); }
  SUBCASE("trailing rows") {
    expect_error("", dir.file("bad_feats.txt", "1 1 2\n0 1\n1 1\n"), "bad_feats.txt:3:");
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_graph(dir / "nope.txt", feats2), IngestionError);
    CHECK_THROWS_AS(load_graph(dir.file("e.txt", ""), dir / "nope.txt"), IngestionError);
  }
}

TEST_CASE("save and load round-trip exactly") {
  test::TempDir dir;
  const auto g = generate_synthetic({17, 3, 0.5, 0.2, 4}, 9);
  save_graph(g, dir / "e.txt", dir / "f.txt");
  CHECK(load_graph(dir / "e.txt", dir / "f.txt", 9) == g);
}
