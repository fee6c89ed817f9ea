#include <doctest.h>

#include <random>

#include "pottsforge/errors.hpp"
#include "pottsforge/exact_eval.hpp"

using namespace pottsforge;

namespace {

WeightedGraph random_graph(std::mt19937_64& gen, int max_n, int max_m, int max_weight) {
  int n = 2 + gen() % (max_n - 1);
  int m = gen() % (max_m + 1);
  std::vector<Edge> edges;
  std::vector<BigRational> w;
  for (int i = 0; i < m; ++i) {
    int u = gen() % n, v = gen() % n;
    if (u == v) continue;
    edges.push_back({u, v});
    BigRational x(long(1 + gen() % max_weight), long(1 + gen() % 3));
    x.canonicalize();
    w.push_back(x);
  }
  return WeightedGraph(n, edges, w);
}

// Independent-set polynomial by scanning every vertex subset.
BigRational brute_is(const BipartiteGraph& b, const BigRational& mu, int* xi = nullptr, long* count = nullptr) {
  int n = b.vertex_count();
  BigRational total = 0;
  int best = -1;
  long best_count = 0;
  for (unsigned s = 0; s < (1u << n); ++s) {
    bool ok = true;
    for (const auto& [u, v] : b.edges()) {
      if ((s >> u & 1) && (s >> (b.left_count() + v) & 1)) ok = false;
    }
    if (!ok) continue;
    int k = __builtin_popcount(s);
    total += pow(mu, k);
    if (k > best) {
      best = k;
      best_count = 0;
    }
    if (k == best) ++best_count;
  }
  if (xi) *xi = best;
  if (count) *count = best_count;
  return total;
}

}  // namespace

TEST_CASE("tutte_graph worked examples") {
  CHECK(tutte_graph(WeightedGraph::uniform(2, {{0, 1}}, 1), 2) == 6);
  CHECK(tutte_graph(WeightedGraph(5, {}, {}), 3) == 243);
  WeightedGraph tri = WeightedGraph::uniform(3, {{0, 1}, {1, 2}, {0, 2}}, 1);
  CHECK(tutte_graph(tri, 2) == 28);
  CHECK(tutte_frontier(tri, 2) == 28);
}

TEST_CASE("tutte_hypergraph and potts worked examples") {
  WeightedHypergraph one = WeightedHypergraph::uniform(3, {{0, 1, 2}}, 2);
  CHECK(tutte_hypergraph(one, 3) == 33);
  CHECK(potts(one, 3) == 33);
  CHECK(tutte_hypergraph(WeightedHypergraph(4, {}, {}), 2) == 16);
  WeightedHypergraph apex = WeightedHypergraph::uniform(2, {{0, 1}}, 2);
  CHECK(tutte_hypergraph(apex, 3) == 15);
  WeightedHypergraph tri = WeightedHypergraph::uniform(3, {{0, 1}, {1, 2}, {0, 2}}, 1);
  CHECK(potts(tri, 2) == 28);
  CHECK(fk_check(tri, 2));
  CHECK(fk_check(WeightedHypergraph(3, {}, {}), 5));
  CHECK(potts(WeightedHypergraph(3, {}, {}), 5) == 125);
  CHECK_THROWS_AS(potts(tri, BigRational(5, 2)), std::invalid_argument);
  CHECK_THROWS_AS(potts(tri, 0), std::invalid_argument);
}

TEST_CASE("cap exceeded is reported, never approximated") {
  std::vector<Edge> edges;
  for (int i = 0; i < 25; ++i) edges.push_back({0, 1});
  WeightedGraph big = WeightedGraph::uniform(2, edges, 1);
  EvalLimits limits;
  CHECK_THROWS_AS(tutte_graph(big, 2, limits), CapExceeded);
  try {
    tutte_graph(big, 2, limits);
  } catch (const CapExceeded& e) {
    CHECK(std::string(e.what()).find("instance too large for exact oracle") == 0);
  }
  CHECK_THROWS_AS(potts(WeightedHypergraph(13, {}, {}), 4, limits), CapExceeded);
  // Parallel edges: (1+1)^25 - 1 joined, plus q^2 split.
  CHECK(tutte_frontier(big, 2, limits) == 2 * (pow(BigRational(2), 25) - 1) + 4);
}

TEST_CASE("terminal_split worked examples") {
  BigRational g(3, 2), q(5);
  auto one = terminal_split(WeightedGraph::uniform(2, {{0, 1}}, g), 0, 1, q);
  CHECK(one.z_joined == q * g);
  CHECK(one.z_split == q * q);
  auto apart = terminal_split(WeightedGraph::uniform(4, {{0, 2}, {1, 3}}, g), 0, 1, q);
  CHECK(apart.z_joined == 0);
  auto par = terminal_split(WeightedGraph::uniform(2, {{0, 1}, {0, 1}}, g), 0, 1, q);
  CHECK(par.z_joined == q * (2 * g + g * g));
  CHECK(par.z_split == q * q);
  CHECK_THROWS_AS(terminal_split(WeightedGraph::uniform(2, {{0, 1}}, g), 1, 1, q), std::invalid_argument);
}

TEST_CASE("random instances: representations, strategies and sweep agree") {
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 200; ++trial) {
    WeightedGraph g = random_graph(gen, 7, 10, 4);
    BigRational q(long(1 + gen() % 5), long(1 + gen() % 2));
    q.canonicalize();
    EvalLimits hist, prod;
    hist.strategy = Enumeration::Histogram;
    prod.strategy = Enumeration::Product;
    BigRational z = tutte_graph(g, q, hist);
    CHECK(z == tutte_graph(g, q, prod));
    CHECK(z == tutte_hypergraph(WeightedHypergraph::from_graph(g), q, prod));
    CHECK(z == tutte_frontier(g, q));
    CHECK(z > 0);

    int s = gen() % g.vertex_count();
    int t = (s + 1 + gen() % (g.vertex_count() - 1)) % g.vertex_count();
    auto split = terminal_split(g, s, t, q, hist);
    CHECK(split.total() == z);
    auto split2 = terminal_split(g, s, t, q, prod);
    CHECK(split2.z_joined == split.z_joined);
    auto swept = terminal_split_frontier(g, s, t, q);
    CHECK(swept.z_joined == split.z_joined);
    CHECK(swept.z_split == split.z_split);
  }
}

TEST_CASE("multiplicativity over disjoint unions") {
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 50; ++trial) {
    WeightedGraph a = random_graph(gen, 5, 6, 3);
    WeightedGraph b = random_graph(gen, 5, 6, 3);
    std::vector<Edge> edges = a.edges();
    std::vector<BigRational> w = a.weights();
    for (int i = 0; i < b.edge_count(); ++i) {
      edges.push_back({b.edge(i).u + a.vertex_count(), b.edge(i).v + a.vertex_count()});
      w.push_back(b.weight(i));
    }
    WeightedGraph ab(a.vertex_count() + b.vertex_count(), edges, w);
    BigRational q(3);
    CHECK(tutte_graph(ab, q) == tutte_graph(a, q) * tutte_graph(b, q));
  }
}

TEST_CASE("FK identity on random hypergraphs with integer q") {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 1 + gen() % 4;
    int m = gen() % 5;
    std::vector<std::vector<int>> hs;
    std::vector<BigRational> w;
    for (int i = 0; i < m; ++i) {
      int k = 1 + gen() % n;
      std::vector<int> f;
      for (int j = 0; j < k; ++j) f.push_back(gen() % n);
      hs.push_back(f);
      w.push_back(BigRational(long(gen() % 4), 1));
    }
    WeightedHypergraph h(n, hs, w);
    BigRational q(long(1 + gen() % 4));
    CHECK(fk_check(h, q));
    EvalLimits prod;
    prod.strategy = Enumeration::Product;
    CHECK(potts(h, q, prod) == potts(h, q));
  }
}

TEST_CASE("independent-set oracles agree with vertex-subset scan") {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 150; ++trial) {
    int l = gen() % 5, r = gen() % 5;
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < l; ++u) {
      for (int v = 0; v < r; ++v) {
        if (gen() % 3 == 0) edges.emplace_back(u, v);
      }
    }
    BipartiteGraph b(l, r, edges);
    BigRational mu(long(1 + gen() % 3), long(1 + gen() % 2));
    mu.canonicalize();
    int xi = 0;
    long count = 0;
    CHECK(independent_set_polynomial(b, mu) == brute_is(b, mu, &xi, &count));
    auto best = maximum_independent_sets(b);
    CHECK(best.size == xi);
    CHECK(best.count == count);
  }
  auto k11 = maximum_independent_sets(BipartiteGraph(1, 1, {{0, 0}}));
  CHECK(k11.size == 1);
  CHECK(k11.count == 2);
  CHECK(independent_set_polynomial(BipartiteGraph(1, 1, {{0, 0}}), 2) == 5);
}
