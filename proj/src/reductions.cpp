#include "pottsforge/reductions.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "pottsforge/errors.hpp"
#include "pottsforge/real.hpp"
#include "pottsforge/union_find.hpp"

namespace pottsforge {

namespace {

BigRational pw(const BigRational& x, long e) { return pow(x, (unsigned long)e); }

std::string str(const BigRational& x) { return is_integer(x) ? x.get_num().get_str() : to_fraction_string(x); }

BigInt from_u64(std::uint64_t x) {
  BigInt r;
  mpz_import(r.get_mpz_t(), 1, 1, sizeof(x), 0, 0, &x);
  return r;
}

// Smallest e >= 1 with base^e >= bound; base > 1.
long least_power_at_least(const BigRational& base, const BigRational& bound) {
  long e = 1;
  BigRational p = base;
  while (p < bound) {
    p *= base;
    ++e;
  }
  return e;
}

void require_uniform_weight(const WeightedHypergraph& h, const BigRational& gamma, const std::string& stage) {
  for (int f = 0; f < h.edge_count(); ++f) {
    if (h.weight(f) != gamma) {
      throw ReductionError(stage, "hyperedge " + std::to_string(f) + " has weight " + str(h.weight(f)) +
                                      ", expected the uniform weight " + str(gamma));
    }
  }
}

void require_distinct(const std::vector<int>& f, int id, const std::string& stage) {
  std::vector<int> s = f;
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
    throw ReductionError(stage, "hyperedge " + std::to_string(id) + " repeats a vertex");
  }
}

}  // namespace

// ---------------------------------------------------------------------------

BipartiteGraph blow_up(const BipartiteGraph& b, int s) {
  if (s < 1) throw std::invalid_argument("blow-up factor must be positive");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(std::size_t(b.edge_count()) * s * s);
  for (auto [u, v] : b.edges()) {
    for (int i = 0; i < s; ++i) {
      for (int j = 0; j < s; ++j) edges.push_back({u * s + i, v * s + j});
    }
  }
  return BipartiteGraph(b.left_count() * s, b.right_count() * s, std::move(edges));
}

BlowupResult maxis_blowup(const BipartiteGraph& b, const BigRational& mu, const EvalLimits& limits) {
  if (b.vertex_count() == 0) throw ReductionError("maxis_blowup", "bipartite graph has no vertices");
  if (mu <= 0) throw ReductionError("maxis_blowup", "mu must be positive");
  const int n = b.vertex_count();
  BlowupResult r;
  r.s = int(least_power_at_least(1 + 2 * mu / 3, pw(BigRational(2), n + 3)));
  r.graph = blow_up(b, r.s);
  auto mis = maximum_independent_sets(b, limits);
  r.xi = mis.size;
  r.max_is_count = mis.count;
  r.divisor = pw(pw(1 + mu, r.s) - 1, r.xi);
  return r;
}

BigInt maxis_postprocess(const BigRational& z, const BigRational& mu, int s, int xi) {
  return floor(z / pw(pw(1 + mu, s) - 1, xi));
}

PadResult semiregular_pad(const BipartiteGraph& b, const BigRational& mu, const BigRational& eps) {
  if (mu <= 0) throw ReductionError("semiregular_pad", "mu must be positive");
  if (eps <= 0) throw ReductionError("semiregular_pad", "eps must be positive");
  PadResult r;
  r.graph = b;
  r.correction = 1;
  const int d = b.max_right_degree();
  r.params.d = d;
  bool regular = true;
  for (int v = 0; v < b.right_count(); ++v) regular = regular && b.right_degree(v) == d;
  r.params.mu_minus = 4 * mu / 5;
  r.params.mu_plus = 4 * mu / 3;
  if (regular) {
    r.psi_value = 1;
    return r;
  }

  const int n = b.vertex_count();
  auto D = [&](const BigRational& x) { return pw(1 + x, d - 1); };
  auto L = [&](long s, const BigRational& x) { return pw(1 + x, s); };
  PadParams& p = r.params;
  p.D = D(p.mu_plus);
  p.U = p.mu_plus * p.D;
  const BigRational numer = std::max(BigRational(p.D - 1), p.U);
  const BigRational bound = eps / (6 * d * n);
  long s = 1;
  while (numer / L(s, p.mu_minus) > bound) ++s;
  p.s_pad = int(s);
  p.L = L(s, p.mu_minus);
  p.Y = L(s, mu) + D(mu) - 1;
  r.psi_value = L(s, mu) + (1 + mu) * D(mu) - 1;

  int left = b.left_count(), right = b.right_count();
  std::vector<std::pair<int, int>> edges = b.edges();
  for (int v = 0; v < b.right_count(); ++v) {
    for (int c = b.right_degree(v); c < d; ++c) {
      const int z0 = left, y0 = right;
      left += d;
      right += int(s);
      for (int a = 0; a < d; ++a) {
        for (int j = 0; j < s; ++j) edges.push_back({z0 + a, y0 + j});
      }
      edges.push_back({z0, v});
      ++p.g;
    }
  }
  r.graph = BipartiteGraph(left, right, std::move(edges));
  r.correction = pw(p.Y, p.g);
  return r;
}

// ---------------------------------------------------------------------------

HyperTutteResult semiregular_to_hypertutte(const BipartiteGraph& b, const BigRational& mu) {
  if (mu <= 0) throw ReductionError("semiregular_to_hypertutte", "mu must be positive");
  HyperTutteResult r;
  r.apex = b.left_count();
  std::vector<std::vector<int>> hyperedges;
  for (int v = 0; v < b.right_count(); ++v) {
    auto f = b.right_neighbours(v);
    f.push_back(r.apex);
    hyperedges.push_back(std::move(f));
  }
  r.hypergraph = WeightedHypergraph::uniform(b.left_count() + 1, std::move(hyperedges), mu);
  r.q = mu + 1;
  r.scale = 1 / r.q;
  return r;
}

// ---------------------------------------------------------------------------

BigRational eta_for(const BigRational& chi, const BigRational& gamma) {
  if (chi <= 0 || gamma <= 0) throw std::invalid_argument("eta needs chi, gamma > 0");
  auto e = exp_bounds(chi);
  BigRational eta = BigRational(1) / 2;
  for (int k = 1;; ++k) {
    if (1 + eta * (1 + e.hi * gamma) / (1 - eta) <= e.lo) return eta;
    eta /= 2;
    if (k > 100000) throw std::runtime_error("eta underflow");
  }
}

BigInt prescribed_clique_size(int t, const BigRational& eta, const BigRational& n0) {
  if (t < 1) throw std::invalid_argument("arity must be positive");
  if (eta <= 0) throw std::invalid_argument("eta must be positive");
  // r^4 > t^16  <=>  r > t^4
  BigInt r = pow(BigInt(t), 4) + 1;
  // r^32 > 1/eta
  const BigRational inv = 1 / eta;
  BigInt r2;
  BigInt fl = floor(inv);
  mpz_root(r2.get_mpz_t(), fl.get_mpz_t(), 32);
  while (BigRational(pow(r2, 32)) <= inv) ++r2;
  r = std::max(r, r2);
  if (n0 > 0) {
    BigInt r3;
    BigInt f0 = floor(n0);
    mpz_root(r3.get_mpz_t(), f0.get_mpz_t(), 4);
    while (BigRational(pow(r3, 4)) <= n0) ++r3;
    r = std::max(r, r3);
  }
  return pow(r, 4);
}

TwoWeightResult hyper_to_twoweight(const WeightedHypergraph& h, const BigRational& q, const BigRational& gamma,
                                   const BigRational& eps, const TwoWeightOptions& options) {
  const std::string stage = "hyper_to_twoweight";
  if (q <= 2) throw ReductionError(stage, "needs q > 2");
  if (gamma <= 0 || eps <= 0) throw ReductionError(stage, "needs gamma, eps > 0");
  require_uniform_weight(h, gamma, stage);
  TwoWeightResult r;
  r.scale = 1;
  const int n = h.vertex_count();
  if (h.edge_count() == 0) {
    r.graph = WeightedGraph(n, {}, {});
    return r;
  }
  auto arity = h.uniform_arity();
  if (!arity) throw ReductionError(stage, "hypergraph is not uniform");
  r.t = *arity;
  for (int f = 0; f < h.edge_count(); ++f) require_distinct(h.hyperedge(f), f, stage);
  if (r.t == 1) {
    // A singleton hyperedge never changes kappa; it contributes 1 + gamma.
    r.graph = WeightedGraph(n, {}, {});
    r.scale = pw(1 + gamma, h.edge_count());
    return r;
  }

  r.m = h.edge_count();
  r.chi = eps / (4 * r.m);
  r.eta = eta_for(r.chi, gamma);
  r.prescribed_N = prescribed_clique_size(r.t, r.eta, options.tune.n0);
  TuneOptions tune = options.tune;
  if (options.N_override) {
    r.N = *options.N_override;
    r.guarantee_applies = BigInt(r.N) >= r.prescribed_N;
    BigRational root;
    if (!exact_root(BigRational(r.N), 4, root) && !tune.gadget.cross_probability) {
      tune.require_fourth_power = false;
      r.warnings.push_back("N = " + std::to_string(r.N) + " is not a fourth power; N^(-3/4) approximated");
    }
    if (!r.guarantee_applies) {
      r.warnings.push_back("N = " + std::to_string(r.N) + " is below the prescribed N = " + r.prescribed_N.get_str() +
                           "; only the exact decomposition identity holds");
    }
  } else {
    if (r.prescribed_N > options.max_clique) {
      throw ReductionError(stage, "prescribed clique size N = " + r.prescribed_N.get_str() +
                                      " is beyond exact evaluation; supply an N override");
    }
    r.N = int(r.prescribed_N.get_si());
    r.guarantee_applies = true;
  }

  r.tune = tune_rho(r.N, r.t, q, gamma, r.chi, tune);
  if (!r.tune.found) throw NoCrossing(stage, r.tune.report);
  r.rho_hat = r.tune.rho_hat;
  auto spec = build_gadget(r.N, r.t, r.rho_hat, tune.gadget);
  r.gamma_prime = spec.gamma_clique();
  r.gamma_dblprime = spec.gamma_cross();
  auto summary = z_k(dp_weights(r.t, r.N, r.gamma_prime, r.gamma_dblprime), q);
  r.c = summary.z[r.t];
  r.scale = 1 / pw(r.c, r.m);

  const int total = n + r.m * r.N;
  const BigRational v3 = 1 / pw(BigRational(total), 3);
  for (const auto& w : {r.gamma_prime, r.gamma_dblprime}) {
    if (w < v3 || w > 1) r.warnings.push_back("weight " + str(w) + " outside [|V|^-3, 1]");
  }

  r.graph = simulate_hyperedges(h, spec);
  return r;
}

WeightedGraph simulate_hyperedges(const WeightedHypergraph& h, const GadgetSpec& spec) {
  const int n = h.vertex_count(), m = h.edge_count(), N = spec.N;
  const BigRational gp = spec.gamma_clique(), gpp = spec.gamma_cross();
  std::vector<Edge> edges;
  std::vector<BigRational> weights;
  for (int j = 0; j < m; ++j) {
    if (int(h.hyperedge(j).size()) != spec.t) throw std::invalid_argument("hyperedge arity differs from the gadget's");
    const int base = n + j * N;
    for (int a = 0; a < N; ++a) {
      for (int b = a + 1; b < N; ++b) {
        edges.push_back({base + a, base + b});
        weights.push_back(gp);
      }
    }
    for (int a = 0; a < N; ++a) {
      for (int v : h.hyperedge(j)) {
        edges.push_back({base + a, v});
        weights.push_back(gpp);
      }
    }
  }
  return WeightedGraph(n + m * N, std::move(edges), std::move(weights));
}

std::map<Partition, BigRational> gadget_partition_weights(const GadgetSpec& spec, const BigRational& q,
                                                           const EvalLimits& limits) {
  const WeightedGraph g = spec.variant();
  const int m = g.edge_count(), N = spec.N, t = spec.t, n = N + t;
  if (m > limits.log2_cap) {
    throw CapExceeded("gadget with " + std::to_string(m) + " edges exceeds 2^" + std::to_string(limits.log2_cap) +
                      " subsets");
  }
  const int mk = spec.clique_edge_count(), mc = spec.cross_edge_count();
  // Histogram keyed by (terminal labels, x, y, kappa').
  std::map<std::vector<int>, std::vector<std::uint64_t>> hist;
  auto idx = [&](int x, int y, int kp) { return (std::size_t(x) * (mc + 1) + y) * (n + 1) + kp; };
  const std::size_t cells = std::size_t(mk + 1) * (mc + 1) * (n + 1);

  RollbackUnionFind uf(n);
  std::vector<int> labels(t), root_label(n, -1);
  auto rec = [&](auto&& self, int i, int x, int y) -> void {
    if (i == m) {
      int next = 0;
      for (int j = 0; j < t; ++j) {
        int r = uf.find(N + j);
        if (root_label[r] < 0) root_label[r] = next++;
        labels[j] = root_label[r];
      }
      for (int j = 0; j < t; ++j) root_label[uf.find(N + j)] = -1;
      auto& h = hist[labels];
      if (h.empty()) h.assign(cells, 0);
      ++h[idx(x, y, uf.blocks() - next)];
      return;
    }
    self(self, i + 1, x, y);
    auto mark = uf.checkpoint();
    uf.unite(g.edge(i).u, g.edge(i).v);
    self(self, i + 1, x + (i < mk), y + (i >= mk));
    uf.rollback(mark);
  };
  rec(rec, 0, 0, 0);

  const BigRational gp = spec.gamma_clique(), gpp = spec.gamma_cross();
  std::vector<int> ground(t);
  for (int j = 0; j < t; ++j) ground[j] = j;
  std::map<Partition, BigRational> out;
  for (const auto& [lab, h] : hist) {
    BigRational sum = 0;
    for (int x = 0; x <= mk; ++x) {
      for (int y = 0; y <= mc; ++y) {
        for (int kp = 0; kp <= n; ++kp) {
          std::uint64_t c = h[idx(x, y, kp)];
          if (c) sum += BigRational(from_u64(c)) * pw(gp, x) * pw(gpp, y) * pw(q, kp);
        }
      }
    }
    out[Partition::from_labels(ground, lab)] = sum;
  }
  return out;
}

BigRational gadget_decomposition(const WeightedHypergraph& h, const GadgetSpec& spec, const BigRational& q,
                                 const EvalLimits& limits) {
  const int m = h.edge_count(), n = h.vertex_count();
  for (int f = 0; f < m; ++f) {
    if (int(h.hyperedge(f).size()) != spec.t) throw std::invalid_argument("hyperedge arity differs from the gadget's");
  }
  auto weights = gadget_partition_weights(spec, q, limits);
  std::vector<std::pair<Partition, BigRational>> parts(weights.begin(), weights.end());

  BigRational total = 0;
  RollbackUnionFind uf(n);
  auto rec = [&](auto&& self, int j, const BigRational& prod) -> void {
    if (j == m) {
      total += prod * pw(q, uf.blocks());
      return;
    }
    const auto& f = h.hyperedge(j);
    for (const auto& [pi, w] : parts) {
      auto mark = uf.checkpoint();
      for (const auto& block : pi.blocks()) {
        for (std::size_t a = 1; a < block.size(); ++a) uf.unite(f[block[0]], f[block[a]]);
      }
      self(self, j + 1, prod * w);
      uf.rollback(mark);
    }
  };
  rec(rec, 0, BigRational(1));
  return total;
}

// ---------------------------------------------------------------------------

BigRational parallel_compose(const BigRational& g1, const BigRational& g2) {
  if (g1 <= -1 || g2 <= -1) throw std::invalid_argument("parallel composition needs weights > -1");
  return (1 + g1) * (1 + g2) - 1;
}

SeriesValue series_compose(const BigRational& g1, const BigRational& g2, const BigRational& q) {
  BigRational den = q + g1 + g2;
  if (den == 0) throw std::invalid_argument("series composition with q + g1 + g2 = 0");
  return {g1 * g2 / den, den};
}

CompositionTree CompositionNode::base() {
  static const auto leaf = std::make_shared<const CompositionNode>();
  return leaf;
}

CompositionTree CompositionNode::series(std::vector<CompositionTree> parts) {
  if (parts.empty()) throw std::invalid_argument("series composition of nothing");
  auto node = std::make_shared<CompositionNode>();
  node->kind = Kind::Series;
  node->children = std::move(parts);
  return node;
}

CompositionTree CompositionNode::parallel(std::vector<CompositionTree> parts) {
  auto node = std::make_shared<CompositionNode>();
  node->kind = Kind::Parallel;
  node->children = std::move(parts);
  return node;
}

TreeValue evaluate_tree(const CompositionTree& tree, const BigRational& q, const BigRational& base) {
  std::unordered_map<const CompositionNode*, TreeValue> memo;
  auto eval = [&](auto&& self, const CompositionNode* node) -> TreeValue {
    if (auto it = memo.find(node); it != memo.end()) return it->second;
    TreeValue v;
    switch (node->kind) {
      case CompositionNode::Kind::Base:
        v = {base, 1, 1};
        break;
      case CompositionNode::Kind::Series: {
        v = self(self, node->children[0].get());
        for (std::size_t i = 1; i < node->children.size(); ++i) {
          TreeValue c = self(self, node->children[i].get());
          SeriesValue sv = series_compose(v.gamma, c.gamma, q);
          v.gamma = sv.gamma_star;
          v.scale *= c.scale * sv.scale;
          v.edges += c.edges;
        }
        break;
      }
      case CompositionNode::Kind::Parallel: {
        v = {0, 1, 0};
        for (const auto& child : node->children) {
          TreeValue c = self(self, child.get());
          v.gamma = parallel_compose(v.gamma, c.gamma);
          v.scale *= c.scale;
          v.edges += c.edges;
        }
        break;
      }
    }
    memo.emplace(node, v);
    return v;
  };
  return eval(eval, tree.get());
}

namespace {

void append_tree(const CompositionNode* node, int s, int t, int& next_vertex, std::vector<Edge>& edges) {
  switch (node->kind) {
    case CompositionNode::Kind::Base:
      edges.push_back({s, t});
      return;
    case CompositionNode::Kind::Series: {
      int from = s;
      for (std::size_t i = 0; i < node->children.size(); ++i) {
        int to = i + 1 == node->children.size() ? t : next_vertex++;
        append_tree(node->children[i].get(), from, to, next_vertex, edges);
        from = to;
      }
      return;
    }
    case CompositionNode::Kind::Parallel:
      for (const auto& child : node->children) append_tree(child.get(), s, t, next_vertex, edges);
      return;
  }
}

}  // namespace

WeightedGraph expand_tree(const CompositionTree& tree, const BigRational& base) {
  int next = 2;
  std::vector<Edge> edges;
  append_tree(tree.get(), 0, 1, next, edges);
  return WeightedGraph::uniform(next, std::move(edges), base);
}

WeightImplementation implement_weight(const BigRational& target, const BigRational& q_hat,
                                      const BigRational& gamma_hat, const BigRational& pi_tol,
                                      std::optional<std::int64_t> max_branches) {
  const std::string stage = "implement_weight";
  if (target <= 0 || target > 1) throw ReductionError(stage, "target " + str(target) + " not in (0, 1]");
  if (q_hat <= 2) throw ReductionError(stage, "needs q > 2");
  if (gamma_hat <= 0) throw ReductionError(stage, "needs gamma > 0");
  if (pi_tol <= 0) throw ReductionError(stage, "tolerance must be positive");

  WeightImplementation w;
  w.target = target;
  // gamma_1 = k-fold series of gamma_hat: 1 + q/gamma_1 = (1 + q/gamma_hat)^k.
  const BigRational ratio = 1 + q_hat / gamma_hat;
  w.k = int(least_power_at_least(ratio, 1 + 4 * q_hat));
  const BigRational r1 = pw(ratio, w.k);
  w.gamma_1 = q_hat / (r1 - 1);
  w.m = int(least_power_at_least(r1, q_hat * (1 + target) / pi_tol + 1));

  std::vector<CompositionTree> chain_k(w.k, CompositionNode::base());
  const CompositionTree gamma1_tree = w.k == 1 ? CompositionNode::base() : CompositionNode::series(chain_k);
  std::vector<CompositionTree> branches;
  BigRational remaining = 1 + target;
  BigRational rj = 1;
  for (int j = 1; j <= w.m; ++j) {
    rj *= r1;
    const BigRational gj = q_hat / (rj - 1);
    w.gamma_j.push_back(gj);
    std::int64_t dj = 0;
    while (1 + gj <= remaining) {
      remaining /= 1 + gj;
      ++dj;
    }
    w.d.push_back(dj);
    w.branch_count += dj;
    if (dj > 0) {
      CompositionTree branch =
          j == 1 ? gamma1_tree : CompositionNode::series(std::vector<CompositionTree>(j, gamma1_tree));
      for (std::int64_t c = 0; c < dj; ++c) branches.push_back(branch);
    }
  }
  if (max_branches && w.branch_count > *max_branches) {
    throw ReductionError(stage, "implementation of " + str(target) + " needs " + std::to_string(w.branch_count) +
                                    " parallel branches, budget is " + std::to_string(*max_branches));
  }
  if (target == gamma_hat) {
    w.tree = CompositionNode::base();
  } else if (branches.size() == 1) {
    w.tree = branches[0];
  } else {
    w.tree = CompositionNode::parallel(std::move(branches));
  }
  TreeValue v = evaluate_tree(w.tree, q_hat, gamma_hat);
  w.realized_value = v.gamma;
  w.accumulated_scale = v.scale;
  w.edge_count = v.edges;
  if (w.realized_value > target || w.realized_value < target - pi_tol) {
    throw std::logic_error("implemented weight " + str(w.realized_value) + " misses [" + str(target - pi_tol) + ", " +
                           str(target) + "]");
  }
  return w;
}

UniformResult twoweight_to_uniform(const WeightedGraph& g, const BigRational& q, const BigRational& gamma,
                                   const BigRational& eps, const UniformOptions& options) {
  const std::string stage = "twoweight_to_uniform";
  if (q <= 2) throw ReductionError(stage, "needs q > 2");
  if (gamma <= 0 || eps <= 0) throw ReductionError(stage, "needs gamma, eps > 0");
  UniformResult r;
  r.scale = 1;
  const BigInt V = g.vertex_count(), E = g.edge_count();
  r.chi = eps / (4 * (BigRational(V) + BigRational(E * E)));
  r.pi_tol = g.vertex_count() == 0 ? r.chi : r.chi / (2 * BigRational(V * V * V));
  const BigRational v3 = g.vertex_count() == 0 ? BigRational(0) : 1 / pw(BigRational(V), 3);

  std::optional<std::int64_t> budget;
  if (options.enforce_edge_budget) budget = g.edge_count();
  for (const auto& w : g.weights()) {
    if (r.implementations.count(w)) continue;
    if (w < v3) r.warnings.push_back("weight " + str(w) + " below |V|^-3");
    r.implementations.emplace(w, implement_weight(w, q, gamma, r.pi_tol, budget));
  }

  int next = g.vertex_count();
  std::vector<Edge> edges;
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto& impl = r.implementations.at(g.weight(e));
    append_tree(impl.tree.get(), g.edge(e).u, g.edge(e).v, next, edges);
    r.scale *= impl.accumulated_scale;
    r.realized.push_back(impl.realized_value);
  }
  r.graph = WeightedGraph::uniform(next, std::move(edges), gamma);
  return r;
}

// ---------------------------------------------------------------------------

Ising3Result ising3_reduce(const WeightedHypergraph& h, const BigRational& gamma, mpfr_prec_t bits) {
  const std::string stage = "ising3_reduce";
  if (gamma <= 0) throw ReductionError(stage, "needs gamma > 0");
  if (h.edge_count() > 0 && h.uniform_arity() != 3) throw ReductionError(stage, "hypergraph is not 3-uniform");
  require_uniform_weight(h, gamma, stage);
  Ising3Result r;
  BigRational root;
  if (exact_sqrt(1 + gamma, root)) {
    r.y_prime = root;
  } else {
    r.exact = false;
    BigRational tol = 1;
    tol /= pw(BigRational(2), long(bits) - 8);
    r.y_prime = simplest_within(root_power_bounds(1 + gamma, 1, 2, bits), tol);
  }
  r.gamma_prime = r.y_prime - 1;
  std::vector<Edge> edges;
  for (int f = 0; f < h.edge_count(); ++f) {
    const auto& e = h.hyperedge(f);
    require_distinct(e, f, stage);
    edges.push_back({e[0], e[1]});
    edges.push_back({e[1], e[2]});
    edges.push_back({e[0], e[2]});
  }
  r.graph = WeightedGraph::uniform(h.vertex_count(), std::move(edges), r.gamma_prime);
  r.scale = pw(r.y_prime, h.edge_count());
  return r;
}

// ---------------------------------------------------------------------------

PipelineResult run_pipeline(const BipartiteGraph& b, const BigRational& q, const BigRational& gamma,
                            const BigRational& eps, const PipelineOptions& options) {
  if (q <= 2) throw ReductionError("run_pipeline", "needs q > 2");
  if (gamma <= 0 || eps <= 0) throw ReductionError("run_pipeline", "needs gamma, eps > 0");
  PipelineResult out;
  out.mu = q - 1;
  out.total_scale = 1;

  auto guarded = [](const std::string& stage, auto&& fn) {
    try {
      return fn();
    } catch (const ReductionError&) {
      throw;
    } catch (const CapExceeded&) {
      throw;
    } catch (const std::exception& e) {
      throw ReductionError(stage, e.what());
    }
  };

  const BigRational eps_blowup = eps / 8, eps_pad = eps / 8, eps_rest = eps / 4;

  auto blow = guarded("maxis_blowup", [&] { return maxis_blowup(b, out.mu); });
  out.s = blow.s;
  out.xi = blow.xi;
  out.divisor = blow.divisor;
  {
    ReductionTrace tr{"maxis_blowup", blow.graph, 1 / blow.divisor, eps_blowup, {}, {}};
    tr.params["s"] = std::to_string(blow.s);
    tr.params["xi"] = std::to_string(blow.xi);
    tr.params["max_is_count"] = blow.max_is_count.get_str();
    tr.params["mu"] = str(out.mu);
    out.stages.push_back(std::move(tr));
  }

  auto pad = guarded("semiregular_pad", [&] { return semiregular_pad(blow.graph, out.mu, eps_pad); });
  {
    ReductionTrace tr{"semiregular_pad", pad.graph, 1 / pad.correction, eps_pad, {}, {}};
    tr.params["d"] = std::to_string(pad.params.d);
    tr.params["g"] = std::to_string(pad.params.g);
    tr.params["s_pad"] = std::to_string(pad.params.s_pad);
    tr.params["s_blowup"] = std::to_string(blow.s);
    out.total_scale *= tr.scale_factor;
    out.stages.push_back(std::move(tr));
  }

  auto hyper = guarded("semiregular_to_hypertutte", [&] { return semiregular_to_hypertutte(pad.graph, out.mu); });
  {
    ReductionTrace tr{"semiregular_to_hypertutte", hyper.hypergraph, hyper.scale, eps_rest, {}, {}};
    tr.params["q"] = str(hyper.q);
    tr.params["gamma"] = str(out.mu);
    tr.params["apex"] = std::to_string(hyper.apex);
    out.total_scale *= tr.scale_factor;
    out.stages.push_back(std::move(tr));
  }

  TwoWeightOptions two_opts;
  two_opts.N_override = options.N_override;
  two_opts.tune = options.tune;
  auto two = guarded("hyper_to_twoweight",
                     [&] { return hyper_to_twoweight(hyper.hypergraph, hyper.q, out.mu, eps_rest, two_opts); });
  {
    ReductionTrace tr{"hyper_to_twoweight", two.graph, two.scale, eps_rest, {}, two.warnings};
    tr.params["t"] = std::to_string(two.t);
    tr.params["m"] = std::to_string(two.m);
    tr.params["N"] = std::to_string(two.N);
    tr.params["prescribed_N"] = two.prescribed_N.get_str();
    tr.params["guarantee_applies"] = two.guarantee_applies ? "true" : "false";
    tr.params["chi"] = str(two.chi);
    tr.params["eta"] = str(two.eta);
    tr.params["c"] = str(two.c);
    tr.params["rho_hat"] = str(two.rho_hat);
    tr.params["gamma_prime"] = str(two.gamma_prime);
    tr.params["gamma_dblprime"] = str(two.gamma_dblprime);
    out.total_scale *= tr.scale_factor;
    out.stages.push_back(std::move(tr));
  }

  UniformOptions uni_opts;
  uni_opts.enforce_edge_budget = options.enforce_edge_budget;
  auto uni = guarded("twoweight_to_uniform",
                     [&] { return twoweight_to_uniform(two.graph, hyper.q, gamma, eps_rest, uni_opts); });
  {
    ReductionTrace tr{"twoweight_to_uniform", uni.graph, 1 / uni.scale, eps_rest, {}, uni.warnings};
    tr.params["q"] = str(hyper.q);
    tr.params["gamma"] = str(gamma);
    tr.params["chi"] = str(uni.chi);
    tr.params["pi"] = str(uni.pi_tol);
    tr.params["implementations"] = std::to_string(uni.implementations.size());
    out.total_scale *= tr.scale_factor;
    out.stages.push_back(std::move(tr));
  }
  out.final_instance = std::move(uni.graph);
  return out;
}

BigInt pipeline_postprocess(const PipelineResult& result, const BigRational& z_final) {
  return floor(result.total_scale * z_final / result.divisor);
}

}  // namespace pottsforge
