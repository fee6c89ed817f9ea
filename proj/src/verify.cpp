#include "pottsforge/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <random>
#include <sstream>
#include <thread>

#include <boost/math/distributions/chi_squared.hpp>

#include "pottsforge/errors.hpp"
#include "pottsforge/gadget.hpp"
#include "pottsforge/gadget_oracles.hpp"
#include "pottsforge/random_cluster.hpp"
#include "pottsforge/real.hpp"
#include "pottsforge/reductions.hpp"
#include "pottsforge/union_find.hpp"

namespace pottsforge {

void CheckReport::fail(const std::string& what) {
  ++failures;
  if (notes.size() < 8) notes.push_back(what);
}

namespace {

class Timer {
 public:
  explicit Timer(CheckReport& r) : r_(r), start_(std::chrono::steady_clock::now()) {}
  ~Timer() { r_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  CheckReport& r_;
  std::chrono::steady_clock::time_point start_;
};

std::string str(const BigRational& x) { return is_integer(x) ? x.get_num().get_str() : to_fraction_string(x); }

BigRational pw(const BigRational& x, long e) { return pow(x, (unsigned long)e); }

// Every multiset of size <= k drawn from items 0..n-1, as sorted index lists.
void multisets(int n, int k, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> cur;
  auto rec = [&](auto&& self, int from) -> void {
    visit(cur);
    if (int(cur.size()) == k) return;
    for (int i = from; i < n; ++i) {
      cur.push_back(i);
      self(self, i);
      cur.pop_back();
    }
  };
  rec(rec, 0);
}

// Every subset of size <= k of items 0..n-1.
void combinations(int n, int k, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> cur;
  auto rec = [&](auto&& self, int from) -> void {
    visit(cur);
    if (int(cur.size()) == k) return;
    for (int i = from; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
}

BigRational random_rational(std::mt19937_64& gen, long max_num, long max_den) {
  BigRational r(long(1 + gen() % max_num), long(1 + gen() % max_den));
  r.canonicalize();
  return r;
}

int kappa_on(int n, unsigned vmask, const std::vector<Edge>& edges, unsigned amask) {
  UnionFind uf(n);
  int comps = 0;
  for (int v = 0; v < n; ++v) comps += (vmask >> v) & 1;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if ((amask >> e) & 1) comps -= uf.unite(edges[e].u, edges[e].v) ? 1 : 0;
  }
  return comps;
}

}  // namespace

// ---------------------------------------------------------------------------

CheckReport verify_fk(int max_n, int max_edges, std::vector<BigRational> gammas, std::vector<BigRational> qs) {
  CheckReport r;
  r.name = "fk identity";
  Timer timer(r);
  for (int n = 1; n <= max_n; ++n) {
    std::vector<std::vector<int>> subsets;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      std::vector<int> f;
      for (int v = 0; v < n; ++v) {
        if ((mask >> v) & 1) f.push_back(v);
      }
      subsets.push_back(f);
    }
    multisets(int(subsets.size()), max_edges, [&](const std::vector<int>& pick) {
      std::vector<std::vector<int>> edges;
      for (int i : pick) edges.push_back(subsets[i]);
      for (const auto& gamma : gammas) {
        auto h = WeightedHypergraph::uniform(n, edges, gamma);
        for (const auto& q : qs) {
          ++r.cases;
          BigRational zp = potts(h, q), zt = tutte_hypergraph(h, q);
          if (zp != zt) r.fail(serialize(h) + " q=" + str(q) + ": potts " + str(zp) + " != tutte " + str(zt));
        }
      }
    });
  }
  return r;
}

CheckReport verify_dp(int max_t, int max_N, int pairs, Seed seed) {
  CheckReport r;
  r.name = "dp vs subset census";
  Timer timer(r);
  std::mt19937_64 gen(seed.value);
  EvalLimits limits = EvalLimits::from_env();
  limits.log2_cap = std::max(limits.log2_cap, max_N * (max_N - 1) / 2 + max_N * max_t);
  for (int t = 0; t <= max_t; ++t) {
    for (int N = 0; N <= max_N; ++N) {
      auto census = gadget_subset_census(t, N, limits);
      for (int i = 0; i < pairs; ++i) {
        BigRational gp = random_rational(gen, 20, 20), gpp = random_rational(gen, 20, 20);
        auto table = dp_weights(t, N, gp, gpp);
        for (int k = 0; k <= t; ++k) {
          for (int l = 0; l <= N; ++l) {
            ++r.cases;
            BigRational want = census_weight(census, k, l, gp, gpp);
            if (table.at(t, N, k, l) != want) {
              r.fail("t=" + std::to_string(t) + " N=" + std::to_string(N) + " k=" + std::to_string(k) +
                     " l=" + std::to_string(l) + " gamma'=" + str(gp) + " gamma''=" + str(gpp));
            }
          }
        }
      }
    }
  }
  return r;
}

CheckReport verify_wiring(int max_t, int max_N, std::vector<BigRational> rhos, std::vector<BigRational> qs) {
  CheckReport r;
  r.name = "wiring identity";
  Timer timer(r);
  for (int N = 1; N <= max_N; ++N) {
    GadgetOptions opts;
    if (N == 1) opts.cross_probability = BigRational(1, 2);
    for (int t = 1; t <= max_t; ++t) {
      for (const auto& rho : rhos) {
        auto spec = build_gadget(N, t, rho, opts);
        for (const auto& q : qs) {
          auto summary = z_k(dp_weights(t, N, spec.gamma_clique(), spec.gamma_cross()), q);
          auto law = exact_y_distribution(spec, q);
          for (int k = 0; k <= t; ++k) {
            ++r.cases;
            if (summary.z[k] / summary.total != law[k]) {
              r.fail("N=" + std::to_string(N) + " t=" + std::to_string(t) + " rho=" + str(rho) + " q=" + str(q) +
                     " k=" + std::to_string(k));
            }
          }
        }
      }
    }
  }
  return r;
}

CheckReport verify_coupling(int graphs, int n, std::uint64_t steps, Seed seed) {
  CheckReport r;
  r.name = "coupling containment";
  Timer timer(r);
  const std::vector<BigRational> qs = {BigRational(3, 2), 2, 3, 5};
  const std::vector<BigRational> ps = {BigRational(1, 5), BigRational(1, 2), BigRational(4, 5)};
  std::uint64_t total_steps = 0;
  int kind_index = 0;
  for (CouplingKind kind : {CouplingKind::ErOverRc, CouplingKind::RcOverErq, CouplingKind::RcMonotoneP}) {
    for (int gi = 0; gi < graphs; ++gi) {
      Rng rng(derive_seed(seed, std::uint64_t(kind_index) * 1000 + gi));
      std::vector<Edge> edges;
      for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
          if (rng.below(2)) edges.push_back({u, v});
        }
      }
      if (edges.empty()) edges.push_back({0, 1});
      const int m = int(edges.size());
      auto g = WeightedGraph::uniform(n, edges, 1);
      const BigRational q = qs[rng.below(qs.size())];
      const std::size_t pi = rng.below(ps.size());
      auto p = EdgeProbabilityMap::uniform(m, ps[pi]);
      auto p_up = EdgeProbabilityMap::uniform(m, ps[std::min(ps.size() - 1, pi + rng.below(ps.size() - pi))]);
      CoupledChain chain(g, kind, q, p, p_up);
      CoupledState s;
      s.lower.in.assign(m, 0);
      s.upper.in.assign(m, 1);
      chain.set_state(s);
      ++r.cases;
      try {
        for (std::uint64_t i = 0; i < steps; ++i) chain.step(rng);
        total_steps += steps;
        if (!chain.contained()) r.fail("final state not contained");
      } catch (const CouplingViolation& e) {
        r.fail(std::string("kind ") + std::to_string(kind_index) + " graph " + std::to_string(gi) + ": " + e.what());
      }
    }
    ++kind_index;
  }
  r.notes.push_back(std::to_string(total_steps) + " coupled steps");
  return r;
}

namespace {

bool edge_less(const Edge& a, const Edge& b) { return std::pair(a.u, a.v) < std::pair(b.u, b.v); }

// Lexicographically least sorted edge list over all relabelings.
std::vector<Edge> canonical_form(int n, const std::vector<Edge>& edges) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Edge> best;
  bool first = true;
  do {
    std::vector<Edge> e;
    for (const auto& x : edges) e.push_back({std::min(perm[x.u], perm[x.v]), std::max(perm[x.u], perm[x.v])});
    std::sort(e.begin(), e.end(), edge_less);
    if (first || std::lexicographical_compare(e.begin(), e.end(), best.begin(), best.end(), edge_less)) best = e;
    first = false;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

std::vector<SmallGraph> connected_graph_classes(int max_edges) {
  std::vector<SmallGraph> out;
  std::set<std::vector<std::pair<int, int>>> seen;
  for (int n = 2; n <= max_edges + 1; ++n) {
    std::vector<Edge> all;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) all.push_back({u, v});
    }
    combinations(int(all.size()), max_edges, [&](const std::vector<int>& pick) {
      if (pick.empty()) return;
      std::vector<Edge> edges;
      UnionFind uf(n);
      int comps = n;
      for (int i : pick) {
        edges.push_back(all[i]);
        comps -= uf.unite(all[i].u, all[i].v) ? 1 : 0;
      }
      if (comps != 1) return;
      auto canon = canonical_form(n, edges);
      std::vector<std::pair<int, int>> key{{n, 0}};
      for (const auto& e : canon) key.push_back({e.u, e.v});
      if (seen.insert(key).second) out.push_back({n, canon});
    });
  }
  return out;
}

std::vector<SmallGraph> graph_classes(int max_edges, int isolated) {
  const auto comps = connected_graph_classes(max_edges);
  std::vector<SmallGraph> out;
  std::vector<int> pick;
  auto rec = [&](auto&& self, std::size_t from, int edges_left) -> void {
    for (int iso = 0; iso <= isolated; ++iso) {
      SmallGraph g;
      for (int i : pick) {
        for (const auto& e : comps[i].edges) g.edges.push_back({e.u + g.n, e.v + g.n});
        g.n += comps[i].n;
      }
      g.n += iso;
      if (g.n > 0) out.push_back(g);
    }
    for (std::size_t i = from; i < comps.size(); ++i) {
      const int m = int(comps[i].edges.size());
      if (m > edges_left) continue;
      pick.push_back(int(i));
      self(self, i, edges_left - m);
      pick.pop_back();
    }
  };
  rec(rec, 0, max_edges);
  return out;
}

CheckReport verify_red_subgraph_law(int max_edges, std::vector<BigRational> rs, std::vector<BigRational> qs,
                                     std::vector<BigRational> ps) {
  CheckReport r;
  r.name = "red-subgraph law";
  Timer timer(r);
  const auto classes = graph_classes(max_edges, 1);
  r.notes.push_back(std::to_string(classes.size()) + " graphs up to isomorphism");
  for (const auto& sg : classes) {
    const int n = sg.n;
    const auto& edges = sg.edges;
    {
      const int m = int(edges.size());
      const unsigned full = (1u << n) - 1;
      auto inside = [&](unsigned vmask) {
        unsigned emask = 0;
        for (int e = 0; e < m; ++e) {
          if (((vmask >> edges[e].u) & 1) && ((vmask >> edges[e].v) & 1)) emask |= 1u << e;
        }
        return emask;
      };
      for (const auto& q : qs) {
        for (const auto& rr : rs) {
          for (const auto& p : ps) {
            // RC law on the subgraph induced by vmask with cluster weight qq.
            auto rc = [&](unsigned vmask, const BigRational& qq, unsigned amask) -> BigRational {
              const unsigned emask = inside(vmask);
              const int me = __builtin_popcount(emask);
              BigRational z = 0, w = 0;
              for (unsigned sub = emask;; sub = (sub - 1) & emask) {
                const int k = __builtin_popcount(sub);
                BigRational term = pw(qq, kappa_on(n, vmask, edges, sub)) * pw(p, k) * pw(1 - p, me - k);
                z += term;
                if (sub == amask) w = term;
                if (sub == 0) break;
              }
              return w / z;
            };
            // Joint law of (R, A) from A ~ RC(G; q, p) and independent colouring.
            std::map<std::pair<unsigned, unsigned>, BigRational> joint;
            std::map<unsigned, BigRational> marginal;
            BigRational total = 0;
            for (unsigned a = 0; a < (1u << m); ++a) {
              UnionFind uf(n);
              for (int e = 0; e < m; ++e) {
                if ((a >> e) & 1) uf.unite(edges[e].u, edges[e].v);
              }
              std::vector<int> roots;
              for (int v = 0; v < n; ++v) roots.push_back(uf.find(v));
              std::vector<int> distinct = roots;
              std::sort(distinct.begin(), distinct.end());
              distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
              const int kappa = int(distinct.size());
              const int k = __builtin_popcount(a);
              const BigRational base = pw(p, k) * pw(1 - p, m - k) * pw(q, kappa);
              total += base;
              for (unsigned col = 0; col < (1u << kappa); ++col) {
                unsigned red = 0;
                for (int v = 0; v < n; ++v) {
                  int c = int(std::lower_bound(distinct.begin(), distinct.end(), roots[v]) - distinct.begin());
                  if ((col >> c) & 1) red |= 1u << v;
                }
                const int reds = __builtin_popcount(col);
                BigRational w = base * pw(rr, reds) * pw(1 - rr, kappa - reds);
                joint[{red, a}] += w;
                marginal[red] += w;
              }
            }
            for (const auto& [key, w] : joint) {
              auto [red, a] = key;
              ++r.cases;
              BigRational cond = w / marginal[red];
              BigRational want = rc(red, rr * q, a & inside(red)) * rc(full & ~red, (1 - rr) * q, a & inside(full & ~red));
              if (cond != want) {
                r.fail("n=" + std::to_string(n) + " m=" + std::to_string(m) + " q=" + str(q) + " r=" + str(rr) +
                       " p=" + str(p) + " R=" + std::to_string(red) + " A=" + std::to_string(a));
              }
            }
          }
        }
      }
    }
  }
  return r;
}

CheckReport verify_stationarity(std::uint64_t samples, int thin, Seed seed, double min_p) {
  CheckReport r;
  r.name = "heat-bath stationarity";
  Timer timer(r);
  struct Case {
    const char* name;
    WeightedGraph g;
    BigRational q, p;
  };
  std::vector<Case> cases = {
      {"triangle", WeightedGraph::uniform(3, {{0, 1}, {1, 2}, {0, 2}}, 1), 2, BigRational(1, 2)},
      {"triangle", WeightedGraph::uniform(3, {{0, 1}, {1, 2}, {0, 2}}, 1), 3, BigRational(2, 3)},
      {"path", WeightedGraph::uniform(4, {{0, 1}, {1, 2}, {2, 3}}, 1), BigRational(3, 2), BigRational(1, 3)},
      {"star", WeightedGraph::uniform(4, {{0, 1}, {0, 2}, {0, 3}}, 1), 4, BigRational(1, 2)},
  };
  int idx = 0;
  for (const auto& c : cases) {
    auto p = EdgeProbabilityMap::uniform(3, c.p);
    std::vector<double> expected(8);
    BigRational z = 0;
    std::vector<BigRational> w(8);
    for (unsigned a = 0; a < 8; ++a) {
      std::vector<int> subset;
      for (int e = 0; e < 3; ++e) {
        if ((a >> e) & 1) subset.push_back(e);
      }
      w[a] = rc_weight(c.g, subset, c.q, p);
      z += w[a];
    }
    HeatBathChain chain(c.g, Model::RandomCluster, c.q, p);
    Rng rng(derive_seed(seed, idx++));
    for (int i = 0; i < 1000; ++i) chain.step(rng);
    std::vector<std::uint64_t> counts(8, 0);
    for (std::uint64_t s = 0; s < samples; ++s) {
      for (int i = 0; i < thin; ++i) chain.step(rng);
      unsigned a = 0;
      for (int e = 0; e < 3; ++e) a |= unsigned(chain.state().in[e] != 0) << e;
      ++counts[a];
    }
    double stat = 0;
    for (int a = 0; a < 8; ++a) {
      double e = to_double(w[a] / z) * double(samples);
      stat += (double(counts[a]) - e) * (double(counts[a]) - e) / e;
    }
    boost::math::chi_squared dist(7);
    double pval = boost::math::cdf(boost::math::complement(dist, stat));
    ++r.cases;
    std::ostringstream line;
    line << c.name << " q=" << str(c.q) << " p=" << str(c.p) << ": chi2=" << stat << " p-value=" << pval;
    if (pval <= min_p) {
      r.fail(line.str());
    } else {
      r.notes.push_back(line.str());
    }
  }
  return r;
}

CheckReport verify_apex_identity(int max_vertices, std::vector<BigRational> mus) {
  CheckReport r;
  r.name = "apex identity";
  Timer timer(r);
  for (int left = 0; left <= max_vertices; ++left) {
    for (int right = 0; left + right <= max_vertices; ++right) {
      const int cells = left * right;
      for (unsigned mask = 0; mask < (1u << cells); ++mask) {
        std::vector<std::pair<int, int>> edges;
        for (int c = 0; c < cells; ++c) {
          if ((mask >> c) & 1) edges.push_back({c / right, c % right});
        }
        BipartiteGraph b(left, right, edges);
        for (const auto& mu : mus) {
          ++r.cases;
          auto h = semiregular_to_hypertutte(b, mu);
          BigRational lhs = independent_set_polynomial(b, mu);
          BigRational rhs = h.scale * tutte_hypergraph(h.hypergraph, h.q);
          if (lhs != rhs) r.fail(serialize(b) + " mu=" + str(mu) + ": " + str(lhs) + " != " + str(rhs));
        }
      }
    }
  }
  return r;
}

CheckReport verify_decomposition(int max_N, std::vector<BigRational> rhos, std::vector<BigRational> qs) {
  CheckReport r;
  r.name = "gadget decomposition";
  Timer timer(r);
  const std::vector<WeightedHypergraph> hs = {
      WeightedHypergraph::uniform(2, {{0, 1}}, 1),
      WeightedHypergraph::uniform(3, {{0, 1}, {1, 2}}, 1),
      WeightedHypergraph::uniform(4, {{0, 1}, {2, 3}}, 1),
      WeightedHypergraph::uniform(2, {{0, 1}, {0, 1}}, 1),
      WeightedHypergraph::uniform(3, {{2, 0}}, 1),
  };
  for (int N = 2; N <= max_N; ++N) {
    for (const auto& rho : rhos) {
      auto spec = build_gadget(N, 2, rho);
      for (const auto& h : hs) {
        auto g = simulate_hyperedges(h, spec);
        for (const auto& q : qs) {
          ++r.cases;
          BigRational lhs = g.edge_count() <= 20 ? tutte_graph(g, q) : tutte_frontier(g, q);
          BigRational rhs = gadget_decomposition(h, spec, q);
          if (lhs != rhs) {
            r.fail("N=" + std::to_string(N) + " rho=" + str(rho) + " q=" + str(q) + " H=" + serialize(h));
          }
        }
      }
    }
  }
  return r;
}

CheckReport verify_series_parallel(int trees, Seed seed) {
  CheckReport r;
  r.name = "series-parallel calculus";
  Timer timer(r);
  Rng rng(seed);
  auto random_tree = [&](auto&& self, int depth) -> CompositionTree {
    if (depth == 0 || rng.below(4) == 0) return CompositionNode::base();
    const int width = 1 + int(rng.below(3));
    std::vector<CompositionTree> parts;
    for (int i = 0; i < width; ++i) parts.push_back(self(self, depth - 1));
    return rng.below(2) ? CompositionNode::series(parts) : CompositionNode::parallel(parts);
  };
  const std::vector<BigRational> qs = {3, BigRational(5, 2), 7};
  const std::vector<BigRational> bases = {BigRational(1, 3), 2, BigRational(7, 4)};
  auto check = [&](auto&& self, const CompositionTree& node, const BigRational& q, const BigRational& base) -> void {
    for (const auto& child : node->children) self(self, child, q, base);
    ++r.cases;
    TreeValue v = evaluate_tree(node, q, base);
    auto g = expand_tree(node, base);
    auto split = g.edge_count() <= 16 ? terminal_split(g, 0, 1, q) : terminal_split_frontier(g, 0, 1, q);
    if (q * split.z_joined / split.z_split != v.gamma || split.z_split / (q * q) != v.scale ||
        g.edge_count() != v.edges) {
      r.fail("tree with " + std::to_string(v.edges) + " edges, q=" + str(q) + ", base=" + str(base));
    }
  };
  for (int i = 0; i < trees; ++i) {
    auto tree = random_tree(random_tree, 3);
    check(check, tree, qs[rng.below(qs.size())], bases[rng.below(bases.size())]);
  }
  return r;
}

CheckReport verify_ising3(int max_n, int max_edges, std::vector<BigRational> gammas) {
  CheckReport r;
  r.name = "3-uniform ising identity";
  Timer timer(r);
  for (int n = 3; n <= max_n; ++n) {
    std::vector<std::vector<int>> triples;
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        for (int c = b + 1; c < n; ++c) triples.push_back({a, b, c});
      }
    }
    multisets(int(triples.size()), max_edges, [&](const std::vector<int>& pick) {
      std::vector<std::vector<int>> edges;
      for (int i : pick) edges.push_back(triples[i]);
      for (const auto& gamma : gammas) {
        auto h = WeightedHypergraph::uniform(n, edges, gamma);
        auto red = ising3_reduce(h, gamma);
        ++r.cases;
        if (!red.exact) {
          r.fail("gamma " + str(gamma) + " has irrational square root of 1 + gamma");
          continue;
        }
        BigRational lhs = potts(WeightedHypergraph::from_graph(red.graph), 2);
        BigRational rhs = red.scale * potts(h, 2);
        if (lhs != rhs) r.fail(serialize(h) + ": " + str(lhs) + " != " + str(rhs));
      }
    });
  }
  return r;
}

CheckReport verify_psi_monotone(int t, int N, const BigRational& q, const BigRational& chi) {
  CheckReport r;
  r.name = "psi monotone on the tuner grid";
  Timer timer(r);
  bool exact = false;
  const BigRational cross = cross_probability(N, &exact);
  if (!exact) r.notes.push_back("N^(-3/4) approximated");
  RhoGrid grid(N, q, tuner_delta(N, t, chi));
  GadgetPolynomial poly(t, N, cross / (1 - cross), q);
  BigRational prev;
  for (std::uint64_t mu = 0; mu < grid.size(); ++mu) {
    BigRational psi = poly.psi(grid.at(mu));
    if (mu > 0) {
      ++r.cases;
      if (psi > prev) r.fail("psi increases at mu=" + std::to_string(mu));
    }
    prev = psi;
  }
  r.notes.push_back(std::to_string(grid.size()) + " grid points");
  return r;
}

std::vector<TunerCase> default_tuner_cases() {
  return {
      {3, 1, 16, 2},
      {3, BigRational(1, 2), 16, 2},
      {3, 5, 16, 2},
      {3, BigRational(1, 1000), 16, 2},
      {4, 1, 16, 2},
      {BigRational(5, 2), 1, 16, 2},
      {10, 2, 16, 2},
      {3, 2, 16, 3},
      {5, 3, 16, 3},
      {3, 100, 16, 3},
  };
}

CheckReport verify_tuner(const std::vector<TunerCase>& cases, const BigRational& chi) {
  CheckReport r;
  r.name = "tuner sandwich";
  Timer timer(r);
  for (const auto& c : cases) {
    ++r.cases;
    auto res = tune_rho(c.N, c.t, c.q, c.gamma, chi);
    const bool bracket = res.zeta_min <= c.gamma && c.gamma <= res.zeta_max;
    std::ostringstream line;
    line << "q=" << str(c.q) << " gamma=" << str(c.gamma) << " N=" << c.N << " t=" << c.t << " zeta in ["
         << to_decimal_string(res.zeta_min, 6) << ", " << to_decimal_string(res.zeta_max, 6) << "]: ";
    if (res.found) {
      const BigRational ratio = res.zeta_hat / c.gamma;
      const bool sandwich = compare_with_exp(ratio, -chi / 2) >= 0 && compare_with_exp(ratio, chi / 2) <= 0;
      line << "rho=" << to_decimal_string(res.rho_hat, 8) << (sandwich ? " sandwich holds" : " SANDWICH FAILS");
      if (!sandwich) {
        r.fail(line.str());
        continue;
      }
    } else {
      line << "no crossing";
      if (bracket) {
        r.fail(line.str() + " although the endpoints bracket gamma");
        continue;
      }
    }
    r.notes.push_back(line.str());
  }
  return r;
}

CheckReport verify_implement(int targets, const BigRational& q_hat, const BigRational& gamma_hat,
                             const BigRational& pi_tol, Seed seed) {
  CheckReport r;
  r.name = "implement_weight";
  Timer timer(r);
  Rng rng(seed);
  std::int64_t max_edges = 0;
  for (int i = 0; i < targets; ++i) {
    const long den = 1 + long(rng.below(1000000));
    BigRational target(long(1 + rng.below(den)), den);
    target.canonicalize();
    ++r.cases;
    auto w = implement_weight(target, q_hat, gamma_hat, pi_tol);
    max_edges = std::max(max_edges, w.edge_count);
    if (w.realized_value > target || w.realized_value < target - pi_tol) {
      r.fail("target " + str(target) + " realized " + str(w.realized_value));
      continue;
    }
    auto g = expand_tree(w.tree, gamma_hat);
    auto split = terminal_split_frontier(g, 0, 1, q_hat);
    if (q_hat * split.z_joined / split.z_split != w.realized_value) {
      r.fail("target " + str(target) + ": expansion implements a different weight");
    } else if (split.z_split / (q_hat * q_hat) != w.accumulated_scale) {
      r.fail("target " + str(target) + ": scale mismatch");
    }
  }
  r.notes.push_back("largest expansion " + std::to_string(max_edges) + " edges");
  return r;
}

// ---------------------------------------------------------------------------

namespace {

template <class Fn>
CheckReport guarded_check(const std::string& name, Fn&& fn) {
  CheckReport r;
  r.name = name;
  Timer timer(r);
  try {
    fn(r);
  } catch (const CapExceeded& e) {
    r.skipped = true;
    r.notes.push_back(e.what());
  } catch (const std::exception& e) {
    r.fail(e.what());
  }
  return r;
}

}  // namespace

std::vector<CheckReport> verify_instance(const Instance& instance, const BigRational& q, const BigRational& mu) {
  std::vector<CheckReport> out;
  const bool integer_q = is_integer(q) && q >= 1;
  if (const auto* g = std::get_if<WeightedGraph>(&instance)) {
    out.push_back(guarded_check("enumeration vs frontier", [&](CheckReport& r) {
      ++r.cases;
      BigRational a = tutte_graph(*g, q), b = tutte_frontier(*g, q);
      if (a != b) r.fail(str(a) + " != " + str(b));
      r.notes.push_back("Z = " + str(a));
    }));
    if (integer_q) {
      out.push_back(guarded_check("fk identity", [&](CheckReport& r) {
        ++r.cases;
        if (!fk_check(WeightedHypergraph::from_graph(*g), q)) r.fail("potts != tutte");
      }));
    }
  } else if (const auto* h = std::get_if<WeightedHypergraph>(&instance)) {
    if (integer_q) {
      out.push_back(guarded_check("fk identity", [&](CheckReport& r) {
        ++r.cases;
        if (!fk_check(*h, q)) r.fail("potts != tutte");
      }));
    }
    if (h->edge_count() > 0 && h->uniform_arity() == 3) {
      const BigRational gamma = h->weight(0);
      const bool uniform =
          std::all_of(h->weights().begin(), h->weights().end(), [&](const BigRational& w) { return w == gamma; });
      BigRational root;
      if (uniform && exact_sqrt(1 + gamma, root)) {
        out.push_back(guarded_check("3-uniform ising identity", [&](CheckReport& r) {
          ++r.cases;
          auto red = ising3_reduce(*h, gamma);
          if (potts(WeightedHypergraph::from_graph(red.graph), 2) != red.scale * potts(*h, 2)) r.fail("identity fails");
        }));
      }
    }
  } else {
    const auto& b = std::get<BipartiteGraph>(instance);
    out.push_back(guarded_check("apex identity", [&](CheckReport& r) {
      ++r.cases;
      auto h = semiregular_to_hypertutte(b, mu);
      BigRational lhs = independent_set_polynomial(b, mu), rhs = h.scale * tutte_hypergraph(h.hypergraph, h.q);
      if (lhs != rhs) r.fail(str(lhs) + " != " + str(rhs));
    }));
    out.push_back(guarded_check("blow-up sandwich", [&](CheckReport& r) {
      ++r.cases;
      auto bl = maxis_blowup(b, mu);
      BigRational ratio = independent_set_polynomial(bl.graph, mu) / bl.divisor;
      if (ratio < BigRational(bl.max_is_count) || ratio > BigRational(bl.max_is_count) + BigRational(1, 4)) {
        r.fail("Z_IS(B') / divisor = " + str(ratio) + " outside [Y, Y + 1/4], Y = " + bl.max_is_count.get_str());
      }
    }));
    out.push_back(guarded_check("padding sandwich", [&](CheckReport& r) {
      ++r.cases;
      auto pad = semiregular_pad(b, mu, BigRational(1, 2));
      BigRational zb = independent_set_polynomial(b, mu), zp = independent_set_polynomial(pad.graph, mu);
      if (zb * pad.correction > zp || zp > zb * pw(pad.psi_value, pad.params.g)) r.fail("sandwich fails");
    }));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<PhaseRow> phase_sweep(const PhaseOptions& options) {
  if (options.N < 2) throw std::invalid_argument("phase sweep needs N >= 2");
  std::vector<double> lambdas = options.lambdas;
  if (lambdas.empty()) {
    const double lc = phase_constants(options.q).lambda_c.to_double();
    for (double f : {0.8, 0.9, 0.95, 1.0, 1.05, 1.1, 1.2}) lambdas.push_back(std::round(lc * f * 1000) / 1000);
  }
  std::vector<PhaseRow> rows;
  for (double l : lambdas) {
    rows.push_back({l, "disordered"});
    rows.push_back({l, "ordered"});
  }
  const int N = options.N;
  std::vector<Edge> edges;
  for (int u = 0; u < N; ++u) {
    for (int v = u + 1; v < N; ++v) edges.push_back({u, v});
  }
  const auto g = WeightedGraph::uniform(N, edges, 1);
  const int m = g.edge_count();

  auto run = [&](std::size_t i) {
    PhaseRow& row = rows[i];
    BigRational p = BigRational(row.lambda) / N;
    if (p >= 1) throw std::invalid_argument("lambda / N must be below 1");
    HeatBathChain chain(g, Model::RandomCluster, options.q, EdgeProbabilityMap::uniform(m, p));
    ChainState s;
    s.in.assign(m, row.start == "ordered" ? 1 : 0);
    chain.set_state(s);
    Rng rng(derive_seed(options.seed, i));
    auto largest = [&] {
      UnionFind uf(N);
      const auto& in = chain.state().in;
      for (int e = 0; e < m; ++e) {
        if (in[e]) uf.unite(edges[e].u, edges[e].v);
      }
      std::vector<int> size(N, 0);
      int best = 0;
      for (int v = 0; v < N; ++v) best = std::max(best, ++size[uf.find(v)]);
      return double(best) / N;
    };
    const std::uint64_t tail = std::max<std::uint64_t>(1, options.sweeps / 4);
    double acc = 0;
    for (std::uint64_t sweep = 1; sweep <= options.sweeps; ++sweep) {
      for (int k = 0; k < m; ++k) chain.step(rng);
      if (sweep + tail > options.sweeps) acc += largest();
    }
    row.largest_fraction = largest();
    row.mean_last_sweeps = acc / double(std::min(tail, options.sweeps));
  };

  const int jobs = std::max(1, options.jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int j = 0; j < jobs; ++j) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next++) < rows.size();) {
          try {
            run(i);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }
  return rows;
}

std::string phase_csv(const std::vector<PhaseRow>& rows) {
  std::ostringstream out;
  out << "lambda,start,largest_fraction,mean_last_quarter\n";
  out.setf(std::ios::fixed);
  for (const auto& r : rows) {
    out.precision(4);
    out << r.lambda << "," << r.start << ",";
    out.precision(6);
    out << r.largest_fraction << "," << r.mean_last_sweeps << "\n";
  }
  return out.str();
}

}  // namespace pottsforge
