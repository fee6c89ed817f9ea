#include <doctest.h>

#include <algorithm>
#include <queue>
#include <random>
#include <sstream>

#include "pottsforge/components.hpp"
#include "pottsforge/graph.hpp"
#include "pottsforge/partition.hpp"
#include "pottsforge/random.hpp"
#include "pottsforge/rational.hpp"
#include "pottsforge/real.hpp"
#include "pottsforge/text_format.hpp"
#include "pottsforge/union_find.hpp"

using namespace pottsforge;

namespace {

// Component count by BFS, independent of the union-find code under test.
int bfs_components(int n, const std::vector<Edge>& edges, const std::vector<int>& subset) {
  std::vector<std::vector<int>> adj(n);
  for (int id : subset) {
    adj[edges[id].u].push_back(edges[id].v);
    adj[edges[id].v].push_back(edges[id].u);
  }
  std::vector<char> seen(n, 0);
  int count = 0;
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++count;
    std::queue<int> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int w : adj[v]) {
        if (!seen[w]) {
          seen[w] = 1;
          q.push(w);
        }
      }
    }
  }
  return count;
}

WeightedGraph triangle(const BigRational& w = 1) {
  return WeightedGraph::uniform(3, {{0, 1}, {1, 2}, {0, 2}}, w);
}

}  // namespace

TEST_CASE("rational parsing and printing") {
  CHECK(parse_rational("3/6") == BigRational(1, 2));
  CHECK(parse_rational("-4") == -4);
  CHECK(parse_rational("0.125") == BigRational(1, 8));
  CHECK(parse_rational("-3.5e-2") == BigRational(-7, 200));
  CHECK(parse_rational("2E3") == 2000);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  CHECK(to_fraction_string(BigRational(6)) == "6/1");
  CHECK(to_fraction_string(parse_rational("-2/4")) == "-1/2");
  CHECK(to_decimal_string(BigRational(2, 3), 4) == "0.6667");
  CHECK(to_decimal_string(BigRational(-1, 8), 2) == "-0.13");
  CHECK(floor(BigRational(-1, 2)) == -1);
  CHECK(ceil(BigRational(-1, 2)) == 0);
  CHECK(pow(BigRational(2, 3), 3) == BigRational(8, 27));
}

TEST_CASE("rational arithmetic is exact") {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<long> d(-1000000, 1000000);
  for (int i = 0; i < 500; ++i) {
    long a = d(gen), b = d(gen);
    if (a == 0 || b == 0) continue;
    BigRational x(a, b);
    x.canonicalize();
    BigRational y = 1 / x;
    CHECK(x * y == 1);
  }
}

TEST_CASE("real enclosures") {
  auto e = exp_bounds(1);
  CHECK(e.lo < e.hi);
  CHECK(e.lo > BigRational(2718281, 1000000));
  CHECK(e.hi < BigRational(2718282, 1000000));
  auto l = log_bounds(2);
  CHECK(l.lo > BigRational(693147, 1000000));
  CHECK(l.hi < BigRational(693148, 1000000));
  auto r = root_power_bounds(2, 1, 2);
  CHECK(r.lo * r.lo < 2);
  CHECK(r.hi * r.hi > 2);
  auto m = root_power_bounds(16, -3, 4);
  CHECK(m.contains(BigRational(1, 8)));
  BigRational root;
  CHECK(exact_sqrt(BigRational(9, 4), root));
  CHECK(root == BigRational(3, 2));
  CHECK_FALSE(exact_sqrt(2, root));
  CHECK(exact_root(BigRational(1, 4096), 4, root));
  CHECK(root == BigRational(1, 8));
  BigRational s = simplest_within(r, BigRational(1, 1000));
  CHECK(abs(s * s - 2) < BigRational(1, 100));
}

TEST_CASE("connected_components worked examples") {
  WeightedGraph empty(3, {}, {});
  auto c = connected_components(empty, {});
  CHECK(c.count == 3);
  CHECK(c.partition == Partition({{0}, {1}, {2}}));
  auto t = connected_components(triangle(), {0, 1, 2});
  CHECK(t.count == 1);
  WeightedGraph path = WeightedGraph::uniform(3, {{0, 1}}, 1);
  auto p = connected_components(path, {0});
  CHECK(p.count == 2);
  CHECK(p.partition == Partition({{0, 1}, {2}}));
  CHECK_THROWS_AS(connected_components(path, {1}), std::out_of_range);
}

TEST_CASE("component count agrees with BFS on random graphs") {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 300; ++trial) {
    int n = 1 + gen() % 12;
    int m = gen() % 20;
    std::vector<Edge> edges;
    for (int i = 0; i < m && n > 1; ++i) {
      int u = gen() % n, v = gen() % n;
      if (u != v) edges.push_back({u, v});
    }
    WeightedGraph g = WeightedGraph::uniform(n, edges, 1);
    std::vector<int> subset;
    for (int i = 0; i < g.edge_count(); ++i) {
      if (gen() & 1) subset.push_back(i);
    }
    auto c = connected_components(g, subset);
    CHECK(c.count == bfs_components(n, edges, subset));
    CHECK(c.count == c.partition.block_count());

    RollbackUnionFind ruf(n);
    auto mark = ruf.checkpoint();
    for (int id : subset) ruf.unite(edges[id].u, edges[id].v);
    CHECK(ruf.blocks() == c.count);
    ruf.rollback(mark);
    CHECK(ruf.blocks() == n);
  }
}

TEST_CASE("hyper_components worked examples") {
  WeightedHypergraph h = WeightedHypergraph::uniform(4, {{0, 1, 2}}, 1);
  auto c = hyper_components(h, {0});
  CHECK(c.count == 2);
  CHECK(c.partition == Partition({{0, 1, 2}, {3}}));
  CHECK(hyper_components(h, {}).count == 4);
  WeightedHypergraph h2 = WeightedHypergraph::uniform(5, {{0, 1}, {1, 2}}, 1);
  auto c2 = hyper_components(h2, {0, 1});
  CHECK(c2.count == 3);
  CHECK(c2.partition == Partition({{0, 1, 2}, {3}, {4}}));
  CHECK_THROWS_AS(hyper_components(h2, {2}), std::out_of_range);
}

TEST_CASE("partition join laws over all partitions of five elements") {
  std::vector<int> ground{0, 1, 2, 3, 4};
  auto all = all_partitions(ground);
  CHECK(all.size() == 52);
  Partition bottom = Partition::finest(ground);
  for (const auto& a : all) {
    CHECK(join(a, a) == a);
    CHECK(join(bottom, a) == a);
  }
  std::mt19937_64 gen(3);
  for (int i = 0; i < 2000; ++i) {
    const auto& a = all[gen() % all.size()];
    const auto& b = all[gen() % all.size()];
    const auto& c = all[gen() % all.size()];
    CHECK(join(a, b) == join(b, a));
    CHECK(join(join(a, b), c) == join(a, join(b, c)));
    CHECK(a.refines(join(a, b)));
  }
  CHECK(join(Partition({{1, 2}, {3}}), Partition({{2, 3}, {1}})) == Partition({{1, 2, 3}}));
  CHECK_THROWS(join(Partition::finest({1}), Partition::finest({2})));
  CHECK(join_extended(Partition({{1, 2}}), Partition({{2, 3}})) == Partition({{1, 2, 3}}));
}

TEST_CASE("graph validation") {
  CHECK_THROWS(WeightedGraph(2, {{0, 0}}, {1}));
  CHECK_THROWS(WeightedGraph(2, {{0, 2}}, {1}));
  CHECK_THROWS(WeightedGraph(2, {{0, 1}}, {-1}));
  CHECK_THROWS(WeightedGraph(2, {{0, 1}}, {}));
  CHECK_THROWS(WeightedHypergraph(2, {{}}, {1}));
  CHECK_THROWS(BipartiteGraph(1, 1, {{0, 0}, {0, 0}}));
  CHECK_THROWS(BipartiteGraph(1, 1, {{0, 1}}));
  BipartiteGraph b(2, 2, {{1, 0}, {0, 0}, {1, 1}});
  CHECK(b.right_neighbours(0) == std::vector<int>{0, 1});
  CHECK(b.max_right_degree() == 2);
}

TEST_CASE("text format round trip") {
  const std::string text =
      "# a triangle\n"
      "graph 3 3\n"
      "0 1 1/2\n"
      "1 2 2   # comment\n"
      "\n"
      "0 2 0.25\n";
  Instance inst = parse_instance(text);
  REQUIRE(std::holds_alternative<WeightedGraph>(inst));
  const auto& g = std::get<WeightedGraph>(inst);
  CHECK(g.weight(2) == BigRational(1, 4));
  std::string out = serialize(inst);
  CHECK(out == "graph 3 3\n0 1 1/2\n1 2 2/1\n0 2 1/4\n");
  CHECK(serialize(parse_instance(out)) == out);

  std::string hyper = "hypergraph 4 2\n3 0 1 2 2\n2 2 3 1/3\n";
  CHECK(serialize(parse_instance(hyper)) == "hypergraph 4 2\n3 0 1 2 2/1\n2 2 3 1/3\n");
  std::string bip = "bipartite 2 1 2\n0 0\n1 0\n";
  CHECK(serialize(parse_instance(bip)) == bip);

  CHECK_THROWS_AS(parse_instance(std::string("graph 3 2\n0 1 1\n")), std::invalid_argument);
  CHECK_THROWS_AS(parse_instance(std::string("tree 3\n")), std::invalid_argument);
  CHECK_THROWS_AS(parse_instance(std::string("graph 2 1\n0 1 x\n")), std::invalid_argument);
  CHECK_THROWS_AS(parse_instance(std::string("graph 2 1\n0 1 1\n0 1 1\n")), std::invalid_argument);
}

TEST_CASE("exact Bernoulli draws") {
  Rng rng(Seed{42});
  Threshold zero(0), one(1), half(BigRational(1, 2)), third(BigRational(1, 3));
  int hits = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    CHECK_FALSE(bernoulli(rng, zero));
    CHECK(bernoulli(rng, one));
    hits += bernoulli(rng, third);
  }
  double p = double(hits) / n;
  CHECK(std::abs(p - 1.0 / 3) < 5 * std::sqrt((1.0 / 3) * (2.0 / 3) / n));

  // Nested thresholds against one variate are consistent.
  for (int i = 0; i < 10000; ++i) {
    ExactUniform u(rng);
    bool a = u.below(third);
    bool b = u.below(half);
    CHECK((!a || b));
  }
  CHECK_THROWS(Threshold(BigRational(3, 2)));

  Rng r1(Seed{9}), r2(Seed{9});
  for (int i = 0; i < 100; ++i) CHECK(r1.next() == r2.next());
  CHECK(derive_seed(Seed{1}, 0).value != derive_seed(Seed{1}, 1).value);
}
