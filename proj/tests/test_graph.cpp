#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <ndl/graph.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>

using namespace ndl;
namespace fs = std::filesystem;

namespace {

Network cycle(int n) {
  Network g(n);
  for (int i = 0; i < n; ++i) g.set_weight(i, (i + 1) % n, 1.0);
  return g;
}

Network path_graph(int n) {
  Network g(n);
  for (int i = 0; i + 1 < n; ++i) g.set_weight(i, i + 1, 1.0);
  return g;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return s;
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("ndl_test_graph_" + name);
}

}  // namespace

TEST_CASE("network stores symmetric positive weights") {
  Network g(4);
  g.set_weight(0, 1, 2.5);
  g.set_weight(3, 2, 1.0);
  CHECK(g.weight(1, 0) == 2.5);
  CHECK(g.weight(0, 1) == 2.5);
  CHECK(g.weight(2, 3) == 1.0);
  CHECK(g.weight(0, 2) == 0.0);
  CHECK(g.edge_count() == 2);
  CHECK(g.has_edge(0, 1));
  CHECK_FALSE(g.has_edge(0, 3));

  g.set_weight(0, 1, 7.0);  // upsert
  CHECK(g.weight(1, 0) == 7.0);
  CHECK(g.edge_count() == 2);

  g.remove_edge(0, 1);
  CHECK(g.weight(0, 1) == 0.0);
  CHECK(g.edge_count() == 1);

  CHECK_THROWS_AS(g.set_weight(0, 1, -1.0), parameter_error);
  CHECK_THROWS_AS(g.set_weight(0, 1, std::nan("")), parameter_error);
  CHECK_THROWS_AS(g.weight(0, 9), parameter_error);
  CHECK_THROWS_AS((void)Network(-1), parameter_error);
}

TEST_CASE("neighbor lists stay sorted and a self-edge counts once") {
  Network g(5);
  g.set_weight(2, 4, 1.0);
  g.set_weight(2, 0, 1.0);
  g.set_weight(2, 3, 1.0);
  g.set_weight(2, 2, 0.5);
  const auto& nb = g.neighbors(2);
  for (std::size_t i = 1; i < nb.size(); ++i) CHECK(nb[i - 1].first < nb[i].first);
  CHECK(g.degree(2) == 4);
  CHECK(g.edge_count() == 4);
  CHECK(g.has_self_edges());
  CHECK(g.strength(2) == doctest::Approx(3.5));
  CHECK(g.edge_pairs() ==
        std::vector<std::pair<int, int>>{{0, 2}, {2, 2}, {2, 3}, {2, 4}});
}

TEST_CASE("connectivity, components, bipartite classes") {
  Network g = cycle(4);
  CHECK(g.is_connected());
  auto classes = g.bipartite_classes();
  REQUIRE(classes.size() == 4);
  CHECK(classes[0] == 0);
  CHECK(classes[1] == 1);
  CHECK(classes[2] == 0);
  CHECK(classes[3] == 1);

  CHECK(cycle(5).bipartite_classes().empty());

  Network two(6);
  two.set_weight(0, 1, 1.0);
  two.set_weight(3, 4, 1.0);
  CHECK_FALSE(two.is_connected());
  auto comp = two.component_ids();
  CHECK(comp[0] == comp[1]);
  CHECK(comp[3] == comp[4]);
  CHECK(comp[0] != comp[3]);
}

TEST_CASE("er generator: count statistics, determinism, edge cases") {
  Network g = generate(ModelSpec::er(200, 0.1), 42);
  CHECK(g.node_count() == 200);
  double mu = 19900 * 0.1;
  double sigma = std::sqrt(19900 * 0.1 * 0.9);
  CHECK(std::abs(static_cast<double>(g.edge_count()) - mu) < 5 * sigma);
  CHECK_FALSE(g.has_self_edges());

  CHECK(generate(ModelSpec::er(200, 0.1), 42) == g);
  CHECK_FALSE(generate(ModelSpec::er(200, 0.1), 43) == g);

  CHECK(generate(ModelSpec::er(50, 0.0), 1).edge_count() == 0);
  CHECK(generate(ModelSpec::er(50, 1.0), 1).edge_count() == 50 * 49 / 2);
  CHECK_THROWS_AS(generate(ModelSpec::er(10, 1.5), 1), parameter_error);
  CHECK_THROWS_AS(generate(ModelSpec::er(-2, 0.5), 1), parameter_error);
}

TEST_CASE("ws generator: ring structure and rewiring keeps the edge count") {
  Network ring = generate(ModelSpec::ws(20, 4, 0.0), 5);
  CHECK(ring.edge_count() == 40);
  for (int v = 0; v < 20; ++v) CHECK(ring.degree(v) == 4);
  CHECK(ring.has_edge(0, 1));
  CHECK(ring.has_edge(0, 2));
  CHECK_FALSE(ring.has_edge(0, 3));

  Network rew = generate(ModelSpec::ws(20, 4, 1.0), 5);
  CHECK(rew.edge_count() == 40);
  CHECK_FALSE(rew.has_self_edges());

  CHECK_THROWS_AS(generate(ModelSpec::ws(20, 3, 0.1), 1), parameter_error);
  CHECK_THROWS_AS(generate(ModelSpec::ws(4, 4, 0.1), 1), parameter_error);
}

TEST_CASE("ba generator: exact edge count and seed handling") {
  Network g = generate(ModelSpec::ba(30, 3), 9);
  CHECK(g.node_count() == 30);
  CHECK(g.edge_count() == 27 * 3);
  for (int v = 3; v < 30; ++v) CHECK(g.degree(v) >= 3);
  CHECK_FALSE(g.has_self_edges());
  CHECK_THROWS_AS(generate(ModelSpec::ba(3, 4), 1), parameter_error);
  CHECK_THROWS_AS(generate(ModelSpec::ba(10, 0), 1), parameter_error);
}

TEST_CASE("sbm generator: expected edge count at reference scale") {
  std::vector<std::vector<double>> b = {{0.5, 0.001, 0.001},
                                        {0.001, 0.5, 0.001},
                                        {0.001, 0.001, 0.5}};
  Network g = generate(ModelSpec::sbm({1000, 1000, 1000}, b), 11);
  CHECK(g.node_count() == 3000);
  double mu = 3 * (999.0 * 1000.0 / 2) * 0.5 + 3 * 1e6 * 0.001;
  double sigma = std::sqrt(3 * (999.0 * 1000.0 / 2) * 0.25 + 3 * 1e6 * 0.001 * 0.999);
  CHECK(std::abs(static_cast<double>(g.edge_count()) - mu) < 5 * sigma);

  // Within-block edges only appear inside blocks when off-block p = 0.
  Network iso = generate(ModelSpec::sbm({3, 3}, {{1.0, 0.0}, {0.0, 1.0}}), 2);
  CHECK(iso.edge_count() == 6);
  CHECK_FALSE(iso.is_connected());
  CHECK_THROWS_AS(generate(ModelSpec::sbm({3}, {{1.0, 0.5}}), 1), parameter_error);
}

TEST_CASE("subtractive er noise removes non-tree edges and stays connected") {
  Network g = generate(ModelSpec::er(100, 0.08), 3);
  REQUIRE(g.is_connected());
  CorruptionResult res = corrupt(g, NoiseSpec::subtractive_er(0.4), 17);
  std::size_t removable = g.edge_count() - 99;
  CHECK(res.changed.size() == static_cast<std::size_t>(0.4 * removable));
  CHECK(res.graph.is_connected());
  CHECK(res.graph.edge_count() == g.edge_count() - res.changed.size());
  for (const auto& c : res.changed) {
    CHECK(c.label == PairLabel::true_edge);
    CHECK(g.has_edge(c.u, c.v));
    CHECK_FALSE(res.graph.has_edge(c.u, c.v));
  }
  // Untouched edges keep their weights.
  for (auto [u, v] : res.graph.edge_pairs()) CHECK(g.weight(u, v) == res.graph.weight(u, v));
  CHECK_THROWS_AS(corrupt(g, NoiseSpec::subtractive_er(0.0), 1), parameter_error);
  CHECK_THROWS_AS(corrupt(g, NoiseSpec::subtractive_er(1.0), 1), parameter_error);
}

TEST_CASE("additive er noise adds new non-adjacent pairs") {
  Network g = generate(ModelSpec::er(80, 0.1), 5);
  CorruptionResult res = corrupt(g, NoiseSpec::additive_er(0.5), 23);
  CHECK(res.changed.size() == g.edge_count() / 2);
  CHECK(res.graph.edge_count() == g.edge_count() + res.changed.size());
  for (const auto& c : res.changed) {
    CHECK(c.label == PairLabel::false_edge);
    CHECK_FALSE(g.has_edge(c.u, c.v));
    CHECK(res.graph.has_edge(c.u, c.v));
    CHECK(c.u < c.v);
  }
  // Dense fallback: nearly complete graph still finds the remaining non-edges.
  Network dense = generate(ModelSpec::er(30, 0.97), 8);
  std::size_t free_pairs = 30 * 29 / 2 - dense.edge_count();
  if (free_pairs >= dense.edge_count() / 20) {
    CorruptionResult r2 = corrupt(dense, NoiseSpec::additive_er(0.05), 4);
    CHECK(r2.changed.size() == dense.edge_count() / 20);
  }
}

TEST_CASE("additive ws noise overlays a rewired ring on chosen nodes") {
  Network g = generate(ModelSpec::er(150, 0.02), 6);
  NoiseSpec spec = NoiseSpec::additive_ws(40, 6, 0.3);
  CorruptionResult res = corrupt(g, spec, 31);
  CHECK(res.graph.edge_count() == g.edge_count() + res.changed.size());
  CHECK(res.changed.size() <= 40 * 3);
  CHECK(res.changed.size() > 0);
  for (const auto& c : res.changed) {
    CHECK(c.label == PairLabel::false_edge);
    CHECK_FALSE(g.has_edge(c.u, c.v));
  }
  CHECK_THROWS_AS(corrupt(generate(ModelSpec::er(10, 0.5), 1), spec, 1), parameter_error);
}

TEST_CASE("uniform spanning trees of the 4-cycle are equidistributed") {
  Network g = cycle(4);
  Rng rng(7, 99);
  std::map<std::pair<int, int>, int> missing_edge_count;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    auto tree = uniform_spanning_tree(g, rng);
    REQUIRE(tree.size() == 3);
    std::set<std::pair<int, int>> in_tree(tree.begin(), tree.end());
    for (auto e : g.edge_pairs())
      if (!in_tree.count(e)) ++missing_edge_count[e];
  }
  REQUIRE(missing_edge_count.size() == 4);
  for (const auto& [e, c] : missing_edge_count)
    CHECK(std::abs(c / static_cast<double>(draws) - 0.25) <= 0.02);
}

TEST_CASE("structural stats: histogram, clustering, diameter") {
  StructuralStats p = structural_stats(path_graph(4));
  CHECK(p.diameter == 3);
  CHECK(p.mean_clustering == 0.0);
  REQUIRE(p.degree_histogram.size() == 3);
  CHECK(p.degree_histogram[1] == 2);
  CHECK(p.degree_histogram[2] == 2);
  CHECK(p.connected);

  Network tri = cycle(3);
  StructuralStats t = structural_stats(tri);
  CHECK(t.diameter == 1);
  CHECK(t.mean_clustering == 1.0);

  Network two(4);
  two.set_weight(0, 1, 1.0);
  two.set_weight(2, 3, 1.0);
  StructuralStats d = structural_stats(two);
  CHECK_FALSE(d.connected);
  CHECK(d.diameter == 1);  // max eccentricity within components
}

TEST_CASE("edge list round trip preserves the network") {
  Network g(5, {"alpha", "b", "c7", "d", "e"});
  g.set_weight(0, 1, 1.0);
  g.set_weight(1, 2, 0.25);
  g.set_weight(3, 4, 3.0);
  g.set_weight(2, 2, 0.5);
  fs::path p = temp_file("roundtrip.edges");
  save_edge_list(g, p);
  Network h = load_edge_list(p);
  CHECK(h == g);
  fs::remove(p);
}

TEST_CASE("edge list parser: comments, weights, labels, errors") {
  fs::path p = temp_file("parse.edges");
  {
    std::ofstream out(p);
    out << "# comment line\n"
        << "x y\r\n"
        << "\n"
        << "y z 2.5\n"
        << "x y 1\n";  // duplicate with the same weight is fine
  }
  Network g = load_edge_list(p);
  CHECK(g.node_count() == 3);
  CHECK(g.label(0) == "x");  // first-seen label order
  CHECK(g.label(1) == "y");
  CHECK(g.label(2) == "z");
  CHECK(g.weight(0, 1) == 1.0);
  CHECK(g.weight(1, 2) == 2.5);

  auto expect_throw = [&](const std::string& body, auto tag) {
    std::ofstream out(p);
    out << body;
    out.close();
    CHECK_THROWS_AS(load_edge_list(p), decltype(tag));
  };
  expect_throw("a\n", parse_error{""});
  expect_throw("a b 1 extra\n", parse_error{""});
  expect_throw("a b zero\n", parse_error{""});
  expect_throw("a b 0\n", parse_error{""});
  expect_throw("a b -3\n", parse_error{""});
  expect_throw("a b 1\na b 2\n", consistency_error{""});
  CHECK_THROWS_AS(load_edge_list(temp_file("missing_file.edges")), io_error);
  fs::remove(p);
}

TEST_CASE("format_double produces shortest round-trip forms") {
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.25) == "0.25");
  CHECK(format_double(0.1) == "0.1");
  double third = 1.0 / 3.0;
  CHECK(std::stod(format_double(third)) == third);
}

TEST_CASE("atomic_write_file replaces content completely") {
  fs::path p = temp_file("atomic.txt");
  atomic_write_file(p, "first\n");
  CHECK(read_file(p) == "first\n");
  atomic_write_file(p, "x");
  CHECK(read_file(p) == "x");
  fs::remove(p);
}

TEST_CASE("corruption is deterministic per seed") {
  Network g = generate(ModelSpec::er(60, 0.1), 2);
  REQUIRE(g.is_connected());
  CorruptionResult a = corrupt(g, NoiseSpec::additive_er(0.5), 5);
  CorruptionResult b = corrupt(g, NoiseSpec::additive_er(0.5), 5);
  CHECK(a.graph == b.graph);
  CHECK(a.changed.size() == b.changed.size());
  CorruptionResult c = corrupt(g, NoiseSpec::additive_er(0.5), 6);
  CHECK_FALSE(a.graph == c.graph);
}
