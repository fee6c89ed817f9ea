#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <map>
#include <random>

#include "pottsforge/components.hpp"
#include "pottsforge/errors.hpp"
#include "pottsforge/exact_eval.hpp"
#include "pottsforge/random_cluster.hpp"

using namespace pottsforge;

namespace {

WeightedGraph random_simple_graph(std::mt19937_64& gen, int n, double density) {
  std::vector<Edge> edges;
  std::bernoulli_distribution keep(density);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (keep(gen)) edges.push_back({u, v});
    }
  }
  return WeightedGraph::uniform(n, edges, 1);
}

double chi2_pvalue(const std::vector<double>& observed, const std::vector<double>& expected) {
  double stat = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    stat += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
  }
  boost::math::chi_squared dist(double(observed.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace

TEST_CASE("rc_weight worked examples and the Z_rc identity") {
  WeightedGraph one = WeightedGraph::uniform(2, {{0, 1}}, 1);
  auto half = EdgeProbabilityMap::uniform(1, BigRational(1, 2));
  CHECK(rc_weight(one, {}, 2, half) == 2);
  CHECK(rc_weight(one, {0}, 2, half) == 1);

  WeightedGraph tri = WeightedGraph::uniform(3, {{0, 1}, {1, 2}, {0, 2}}, 1);
  auto certain = EdgeProbabilityMap::uniform(3, 1);
  CHECK(rc_weight(tri, {0, 1}, 3, certain) == 0);
  CHECK(rc_weight(tri, {0, 1, 2}, 3, certain) == 3);

  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 40; ++trial) {
    WeightedGraph g = random_simple_graph(gen, 2 + gen() % 4, 0.6);
    std::vector<BigRational> p;
    for (int e = 0; e < g.edge_count(); ++e) p.push_back(BigRational(long(gen() % 7), 8));
    for (auto& x : p) x.canonicalize();
    EdgeProbabilityMap pm(p);
    BigRational q(long(1 + gen() % 4), 2);
    q.canonicalize();
    BigRational zrc = 0;
    for (unsigned s = 0; s < (1u << g.edge_count()); ++s) {
      std::vector<int> a;
      for (int e = 0; e < g.edge_count(); ++e) {
        if (s >> e & 1) a.push_back(e);
      }
      zrc += rc_weight(g, a, q, pm);
    }
    BigRational scale = 1;
    for (const auto& x : p) scale *= 1 - x;
    CHECK(zrc == scale * tutte_graph(g.reweighted(pm.weights()), q));
  }
}

TEST_CASE("heat-bath edge cases") {
  WeightedGraph one = WeightedGraph::uniform(2, {{0, 1}}, 1);
  Rng rng(Seed{1});
  {
    HeatBathChain chain(one, Model::RandomCluster, 2, EdgeProbabilityMap::uniform(1, 0));
    for (int i = 0; i < 1000; ++i) {
      chain.step(rng);
      CHECK(chain.state().in[0] == 0);
    }
  }
  {
    // Endpoints never connected through other edges: inclusion prob 1/3.
    HeatBathChain chain(one, Model::RandomCluster, 2, EdgeProbabilityMap::uniform(1, BigRational(1, 2)));
    int hits = 0;
    const int n = 300000;
    for (int i = 0; i < n; ++i) {
      chain.step(rng);
      hits += chain.state().in[0];
    }
    CHECK(std::abs(double(hits) / n - 1.0 / 3) < 4 * std::sqrt(2.0 / 9 / n));
  }
  {
    WeightedGraph tri = WeightedGraph::uniform(3, {{0, 1}, {1, 2}, {0, 2}}, 1);
    HeatBathChain chain(tri, Model::RandomCluster, 2, EdgeProbabilityMap::uniform(3, BigRational(1, 2)),
                        Conditioning{{0}, {1}});
    for (int i = 0; i < 500; ++i) {
      chain.step(rng);
      CHECK(chain.state().in[0] == 1);
      CHECK(chain.state().in[1] == 0);
    }
    CHECK(chain.free_edges() == std::vector<int>{2});
    HeatBathChain frozen(tri, Model::RandomCluster, 2, EdgeProbabilityMap::uniform(3, BigRational(1, 2)),
                         Conditioning{{0, 2}, {1}});
    auto before = frozen.state().in;
    frozen.step(rng);
    CHECK(frozen.state().in == before);
  }
  CHECK_THROWS(Conditioning({{0}, {0}}).validate(1, EdgeProbabilityMap::uniform(1, BigRational(1, 2))));
  CHECK_THROWS(Conditioning({{0}, {}}).validate(1, EdgeProbabilityMap::uniform(1, 0)));
  CHECK_THROWS(Conditioning({{}, {0}}).validate(1, EdgeProbabilityMap::uniform(1, 1)));
}

TEST_CASE("sampling is a pure function of inputs and seed") {
  std::mt19937_64 gen(12);
  WeightedGraph g = random_simple_graph(gen, 8, 0.5);
  auto p = EdgeProbabilityMap::uniform(g.edge_count(), BigRational(2, 5));
  auto a = sample_rc(g, Model::RandomCluster, 3, p, {}, 20, Seed{99});
  auto b = sample_rc(g, Model::RandomCluster, 3, p, {}, 20, Seed{99});
  CHECK(a.in == b.in);
  CHECK(a.steps == 20 * std::uint64_t(g.edge_count()));
  std::uint64_t observed = 0;
  sample_rc(g, Model::ErdosRenyi, 3, p, {}, 5, Seed{1}, [&](std::uint64_t sweep, const HeatBathChain&) {
    CHECK(sweep == observed + 1);
    observed = sweep;
  });
  CHECK(observed == 5);
}

TEST_CASE("stationarity on a path with a parallel pair (chi-squared)") {
  WeightedGraph g = WeightedGraph::uniform(3, {{0, 1}, {1, 2}, {0, 1}}, 1);
  EdgeProbabilityMap p({BigRational(1, 2), BigRational(1, 3), BigRational(3, 4)});
  BigRational q(3);
  std::vector<BigRational> exact(8);
  BigRational z = 0;
  for (int s = 0; s < 8; ++s) {
    std::vector<int> a;
    for (int e = 0; e < 3; ++e) {
      if (s >> e & 1) a.push_back(e);
    }
    exact[s] = rc_weight(g, a, q, p);
    z += exact[s];
  }
  HeatBathChain chain(g, Model::RandomCluster, q, p);
  Rng rng(Seed{2718});
  for (int i = 0; i < 1000; ++i) chain.step(rng);
  const int samples = 200000;
  std::vector<double> observed(8, 0);
  for (int i = 0; i < samples; ++i) {
    for (int k = 0; k < 16; ++k) chain.step(rng);
    const auto& in = chain.state().in;
    ++observed[in[0] | in[1] << 1 | in[2] << 2];
  }
  std::vector<double> expected;
  for (const auto& w : exact) expected.push_back(to_double(w / z) * samples);
  CHECK(chi2_pvalue(observed, expected) > 1e-3);
}

TEST_CASE("coupled chains stay ordered") {
  std::mt19937_64 gen(10);
  for (auto kind : {CouplingKind::ErOverRc, CouplingKind::RcOverErq, CouplingKind::RcMonotoneP}) {
    for (int trial = 0; trial < 5; ++trial) {
      WeightedGraph g = random_simple_graph(gen, 10, 0.4);
      std::vector<BigRational> p, pu;
      for (int e = 0; e < g.edge_count(); ++e) {
        BigRational x(long(1 + gen() % 9), 10);
        x.canonicalize();
        p.push_back(x);
        pu.push_back(x + (1 - x) * BigRational(long(gen() % 3), 3));
      }
      CoupledChain chain(g, kind, 3, EdgeProbabilityMap(p), EdgeProbabilityMap(pu));
      Rng rng(derive_seed(Seed{5}, trial));
      for (int i = 0; i < 2000; ++i) chain.step(rng);
      CHECK(chain.contained());
    }
  }

  // q = 1 collapses RC to ER: the two legs coincide.
  WeightedGraph g = random_simple_graph(gen, 8, 0.5);
  auto p = EdgeProbabilityMap::uniform(g.edge_count(), BigRational(1, 3));
  CoupledChain same(g, CouplingKind::ErOverRc, 1, p);
  CoupledChain equal_p(g, CouplingKind::RcMonotoneP, 3, p, p);
  Rng r1(Seed{3}), r2(Seed{4});
  for (int i = 0; i < 3000; ++i) {
    same.step(r1);
    equal_p.step(r2);
    CHECK(same.state().lower.in == same.state().upper.in);
    CHECK(equal_p.state().lower.in == equal_p.state().upper.in);
  }

  CHECK_THROWS(CoupledChain(g, CouplingKind::RcMonotoneP, 3, p, EdgeProbabilityMap::uniform(g.edge_count(), 0)));
  CoupledChain c(g, CouplingKind::ErOverRc, 2, p);
  CoupledState bad = c.state();
  if (g.edge_count() > 0) {
    bad.lower.in[0] = 1;
    CHECK_THROWS_AS(c.set_state(bad), CouplingViolation);
  }
}

TEST_CASE("red_green_split extremes and edge partition") {
  WeightedGraph g = WeightedGraph::uniform(5, {{0, 1}, {1, 2}, {3, 4}}, 1);
  Rng rng(Seed{8});
  auto all = red_green_split(g, {0, 1, 2}, 1, rng);
  CHECK(all.red_vertices.size() == 5);
  CHECK(all.red_edges.size() == 3);
  auto none = red_green_split(g, {0, 2}, 0, rng);
  CHECK(none.red_vertices.empty());
  CHECK(none.green_edges.size() == 2);
  for (int i = 0; i < 200; ++i) {
    auto mixed = red_green_split(g, {0, 1, 2}, BigRational(1, 2), rng);
    CHECK(mixed.red_edges.size() + mixed.green_edges.size() == 3);
    CHECK((mixed.red_vertices.size() == 0 || mixed.red_vertices.size() == 2 || mixed.red_vertices.size() == 3 ||
           mixed.red_vertices.size() == 5));
  }
}

TEST_CASE("red-subgraph law by exact enumeration") {
  // Small graph with a parallel pair; all edge subsets and component colourings.
  WeightedGraph g = WeightedGraph::uniform(4, {{0, 1}, {1, 2}, {0, 1}, {2, 3}}, 1);
  EdgeProbabilityMap p({BigRational(1, 2), BigRational(1, 3), BigRational(2, 5), BigRational(3, 4)});
  BigRational q(3), r(1, 3);
  const int m = g.edge_count(), n = g.vertex_count();
  // joint[R][A] = P~(A) r^{red comps} (1-r)^{green comps}
  std::map<unsigned, std::map<unsigned, BigRational>> joint;
  for (unsigned s = 0; s < (1u << m); ++s) {
    std::vector<int> a;
    for (int e = 0; e < m; ++e) {
      if (s >> e & 1) a.push_back(e);
    }
    BigRational w = rc_weight(g, a, q, p);
    auto comps = connected_components(g, a).partition.blocks();
    for (unsigned c = 0; c < (1u << comps.size()); ++c) {
      unsigned red = 0;
      BigRational cw = w;
      for (std::size_t b = 0; b < comps.size(); ++b) {
        if (c >> b & 1) {
          for (int v : comps[b]) red |= 1u << v;
          cw *= r;
        } else {
          cw *= 1 - r;
        }
      }
      joint[red][s] += cw;
    }
  }
  for (auto& [red, dist] : joint) {
    BigRational total = 0;
    for (auto& [s, w] : dist) total += w;
    std::vector<int> v1, v2;
    for (int v = 0; v < n; ++v) (red >> v & 1 ? v1 : v2).push_back(v);
    std::vector<int> m1, m2;
    WeightedGraph g1 = g.induced(v1, &m1), g2 = g.induced(v2, &m2);
    auto sub = [&](const std::vector<int>& map) {
      std::vector<BigRational> out;
      for (int e : map) out.push_back(p[e]);
      return EdgeProbabilityMap(out);
    };
    auto p1 = sub(m1), p2 = sub(m2);
    auto z = [&](const WeightedGraph& h, const BigRational& qq, const EdgeProbabilityMap& pp) {
      BigRational zz = 0;
      for (unsigned s = 0; s < (1u << h.edge_count()); ++s) {
        std::vector<int> a;
        for (int e = 0; e < h.edge_count(); ++e) {
          if (s >> e & 1) a.push_back(e);
        }
        zz += rc_weight(h, a, qq, pp);
      }
      return zz;
    };
    BigRational z1 = z(g1, r * q, p1), z2 = z(g2, (1 - r) * q, p2);
    for (auto& [s, w] : dist) {
      std::vector<int> a1, a2;
      for (std::size_t i = 0; i < m1.size(); ++i) {
        if (s >> m1[i] & 1) a1.push_back(int(i));
      }
      for (std::size_t i = 0; i < m2.size(); ++i) {
        if (s >> m2[i] & 1) a2.push_back(int(i));
      }
      BigRational expected = rc_weight(g1, a1, r * q, p1) / z1 * rc_weight(g2, a2, (1 - r) * q, p2) / z2;
      CHECK(w / total == expected);
    }
  }
}

TEST_CASE("bicolour bounds") {
  auto zero = bicolour_bounds(10, 2, 5, 0);
  CHECK(zero.no_bicolour_upper == 1);
  CHECK(zero.some_bicolour_upper == 0);
  CHECK_THROWS(bicolour_bounds(3, 4, 1, BigRational(1, 2)));

  // Monotone in s (increasing) and nu (decreasing) on a grid.
  BigRational pi(1, 20);
  for (int nu = 10; nu <= 60; nu += 10) {
    for (int s = 1; s < nu; ++s) {
      CHECK(bicolour_bounds(nu, s, nu, pi).no_bicolour_upper <= bicolour_bounds(nu, s + 1, nu, pi).no_bicolour_upper);
      CHECK(bicolour_bounds(nu + 1, s, nu, pi).no_bicolour_upper <= bicolour_bounds(nu, s, nu, pi).no_bicolour_upper);
    }
  }

  // Direct simulation: nu = 100 in 10 blocks of 10, pi = 1/20.
  const int nu = 100, s = 10, trials = 100000;
  auto bounds = bicolour_bounds(nu, s, 10, pi);
  std::mt19937_64 gen(17);
  std::bernoulli_distribution coin(0.05);
  int none = 0, some = 0;
  for (int t = 0; t < trials; ++t) {
    bool any = false;
    for (int b = 0; b < s; ++b) {
      bool y = false, bl = false;
      for (int i = 0; i < nu / s; ++i) {
        y |= coin(gen);
        bl |= coin(gen);
      }
      any |= y && bl;
    }
    (any ? some : none) += 1;
  }
  // Equal blocks make the first bound tight, so compare with a 4-sigma margin.
  double pn = double(none) / trials, ps = double(some) / trials;
  double sigma = std::sqrt(pn * (1 - pn) / trials);
  CHECK(pn <= to_double(bounds.no_bicolour_upper) + 4 * sigma);
  CHECK(ps <= to_double(bounds.some_bicolour_upper) + 4 * sigma);
}
