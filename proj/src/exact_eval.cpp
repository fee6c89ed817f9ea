#include "pottsforge/exact_eval.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>

#include "pottsforge/errors.hpp"
#include "subset_census.hpp"

namespace pottsforge {

namespace {

constexpr std::uint64_t kHistogramLimit = std::uint64_t(1) << 22;

std::vector<BigRational> powers(const BigRational& x, int n) {
  std::vector<BigRational> out(n + 1);
  out[0] = 1;
  for (int k = 1; k <= n; ++k) out[k] = out[k - 1] * x;
  return out;
}

void require_subset_cap(int m, const EvalLimits& limits, const char* what) {
  if (m > limits.log2_cap) {
    throw CapExceeded(std::string(what) + " with " + std::to_string(m) + " edges exceeds 2^" +
                      std::to_string(limits.log2_cap) + " subsets (set POTTSFORGE_CAP to raise)");
  }
}

bool use_histogram(const detail::WeightClasses& wc, int n, int labels, const EvalLimits& limits) {
  switch (limits.strategy) {
    case Enumeration::Histogram:
      return true;
    case Enumeration::Product:
      return false;
    case Enumeration::Automatic:
      break;
  }
  std::uint64_t cells = wc.radix_size(kHistogramLimit);
  return cells * std::uint64_t(n + 1) * labels <= kHistogramLimit;
}

// Per-label sums of q^kappa prod gamma over all subsets of `items`.
template <class LabelOf>
std::vector<BigRational> tutte_sums(int n, const std::vector<std::vector<int>>& items,
                                    const std::vector<BigRational>& weights, const BigRational& q, int labels,
                                    const EvalLimits& limits, LabelOf&& label_of) {
  detail::WeightClasses wc(weights);
  if (!use_histogram(wc, n, labels, limits)) {
    return detail::subset_product_sums(n, items, weights, q, labels, label_of);
  }
  detail::Census census = detail::subset_census(n, items, wc, labels, label_of);
  std::vector<std::vector<BigRational>> tables;
  for (std::size_t i = 0; i < wc.values.size(); ++i) tables.push_back(powers(wc.values[i], wc.multiplicity[i]));
  return detail::census_sums(census, powers(q, n), tables);
}

std::vector<std::vector<int>> edge_items(const WeightedGraph& g) {
  std::vector<std::vector<int>> items;
  items.reserve(g.edge_count());
  for (const auto& e : g.edges()) items.push_back({e.u, e.v});
  return items;
}

// Connectivity sweep over the edges in order. Pinned vertices stay active
// to the end; classify(labels, positions) picks the output bucket.
class FrontierSweep {
 public:
  FrontierSweep(const WeightedGraph& g, std::vector<int> pinned, const BigRational& q, const EvalLimits& limits)
      : g_(g), pinned_(std::move(pinned)), q_(q), limits_(limits) {}

  template <class Classify>
  std::vector<BigRational> run(int buckets, Classify&& classify) {
    const int n = g_.vertex_count();
    const int m = g_.edge_count();
    std::vector<int> last(n, -1);
    for (int i = 0; i < m; ++i) {
      last[g_.edge(i).u] = i;
      last[g_.edge(i).v] = i;
    }
    std::vector<char> pinned(n, 0);
    for (int v : pinned_) pinned[v] = 1;

    std::vector<int> active;
    std::vector<int> position(n, -1);
    std::map<std::vector<int>, BigRational> states;
    states[{}] = 1;

    auto activate = [&](int v) {
      if (position[v] >= 0) return;
      position[v] = int(active.size());
      active.push_back(v);
      std::map<std::vector<int>, BigRational> next;
      for (auto& [labels, w] : states) {
        auto l = labels;
        int fresh = l.empty() ? 0 : *std::max_element(l.begin(), l.end()) + 1;
        l.push_back(fresh);
        next.emplace(std::move(l), std::move(w));
      }
      states = std::move(next);
    };

    for (int v : pinned_) activate(v);
    int isolated = 0;
    for (int v = 0; v < n; ++v) {
      if (last[v] < 0 && !pinned[v]) ++isolated;
    }

    for (int i = 0; i < m; ++i) {
      const Edge& e = g_.edge(i);
      activate(e.u);
      activate(e.v);
      const BigRational& gamma = g_.weight(i);
      const int pu = position[e.u], pv = position[e.v];
      std::map<std::vector<int>, BigRational> next;
      for (const auto& [labels, w] : states) {
        next[labels] += w;
        if (gamma == 0) continue;
        next[merged(labels, pu, pv)] += w * gamma;
      }
      states = std::move(next);
      for (int v : {e.u, e.v}) {
        if (last[v] == i && !pinned[v] && position[v] >= 0) retire(v, active, position, states);
      }
      if (states.size() > limits_.max_frontier_states) {
        throw CapExceeded("frontier sweep reached " + std::to_string(states.size()) + " connectivity states");
      }
    }

    std::vector<BigRational> sums(buckets, BigRational(0));
    BigRational tail = pow(q_, isolated);
    for (const auto& [labels, w] : states) {
      int blocks = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
      sums[classify(labels, position)] += w * pow(q_, blocks) * tail;
    }
    return sums;
  }

 private:
  static std::vector<int> canonical(const std::vector<int>& labels) {
    std::vector<int> out(labels.size());
    std::map<int, int> rename;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      auto [it, fresh] = rename.try_emplace(labels[i], int(rename.size()));
      out[i] = it->second;
    }
    return out;
  }

  static std::vector<int> merged(const std::vector<int>& labels, int pu, int pv) {
    int a = labels[pu], b = labels[pv];
    if (a == b) return labels;
    std::vector<int> out = labels;
    for (int& l : out) {
      if (l == b) l = a;
    }
    return canonical(out);
  }

  void retire(int v, std::vector<int>& active, std::vector<int>& position,
              std::map<std::vector<int>, BigRational>& states) const {
    const int pos = position[v];
    std::map<std::vector<int>, BigRational> next;
    for (auto& [labels, w] : states) {
      bool alone = std::count(labels.begin(), labels.end(), labels[pos]) == 1;
      std::vector<int> l = labels;
      l.erase(l.begin() + pos);
      next[canonical(l)] += alone ? w * q_ : w;
    }
    states = std::move(next);
    active.erase(active.begin() + pos);
    position[v] = -1;
    for (std::size_t i = pos; i < active.size(); ++i) position[active[i]] = int(i);
  }

  const WeightedGraph& g_;
  std::vector<int> pinned_;
  BigRational q_;
  EvalLimits limits_;
};

void check_terminals(const WeightedGraph& g, int s, int t) {
  if (s == t) throw std::invalid_argument("terminal_split requires s != t");
  if (s < 0 || t < 0 || s >= g.vertex_count() || t >= g.vertex_count()) {
    throw std::out_of_range("terminal out of range");
  }
}

struct SideCensus {
  // count[a][f]: subsets S of the enumerated side with |S| = a leaving f
  // vertices of the other side without a neighbour in S.
  std::vector<std::vector<BigInt>> count;
};

SideCensus side_census(const BipartiteGraph& b, const EvalLimits& limits) {
  const bool left_small = b.left_count() <= b.right_count();
  const int a = left_small ? b.left_count() : b.right_count();
  const int other = left_small ? b.right_count() : b.left_count();
  if (a > limits.log2_cap || a > 62) {
    throw CapExceeded("independent-set enumeration over " + std::to_string(a) + " vertices");
  }
  std::vector<std::uint64_t> nbr(other, 0);
  for (const auto& [u, v] : b.edges()) {
    if (left_small) {
      nbr[v] |= std::uint64_t(1) << u;
    } else {
      nbr[u] |= std::uint64_t(1) << v;
    }
  }
  std::vector<std::vector<std::uint64_t>> raw(a + 1, std::vector<std::uint64_t>(other + 1, 0));
  for (std::uint64_t s = 0; s < (std::uint64_t(1) << a); ++s) {
    int free = 0;
    for (int v = 0; v < other; ++v) free += (nbr[v] & s) == 0;
    ++raw[__builtin_popcountll(s)][free];
  }
  SideCensus out;
  out.count.assign(a + 1, std::vector<BigInt>(other + 1));
  for (int i = 0; i <= a; ++i) {
    for (int f = 0; f <= other; ++f) {
      mpz_import(out.count[i][f].get_mpz_t(), 1, 1, sizeof(std::uint64_t), 0, 0, &raw[i][f]);
    }
  }
  return out;
}

}  // namespace

EvalLimits EvalLimits::from_env() {
  EvalLimits limits;
  if (const char* env = std::getenv("POTTSFORGE_CAP")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v < 63) limits.log2_cap = int(v);
  }
  return limits;
}

BigRational tutte_graph(const WeightedGraph& g, const BigRational& q, const EvalLimits& limits) {
  require_subset_cap(g.edge_count(), limits, "graph");
  return tutte_sums(g.vertex_count(), edge_items(g), g.weights(), q, 1, limits,
                    [](const RollbackUnionFind&) { return 0; })[0];
}

BigRational tutte_hypergraph(const WeightedHypergraph& h, const BigRational& q, const EvalLimits& limits) {
  require_subset_cap(h.edge_count(), limits, "hypergraph");
  return tutte_sums(h.vertex_count(), h.hyperedges(), h.weights(), q, 1, limits,
                    [](const RollbackUnionFind&) { return 0; })[0];
}

BigRational potts(const WeightedHypergraph& h, const BigRational& q, const EvalLimits& limits) {
  if (!is_integer(q) || q < 1) throw std::invalid_argument("potts requires a positive integer q, got " + to_fraction_string(q));
  const int n = h.vertex_count();
  const BigInt colourings = pow(q.get_num(), n);
  BigInt cap = 1;
  cap <<= limits.log2_cap;
  if (colourings > cap) {
    throw CapExceeded("q^n = " + colourings.get_str() + " colourings exceeds 2^" + std::to_string(limits.log2_cap));
  }
  const int qi = int(q.get_num().get_si());
  const int m = h.edge_count();

  std::vector<BigRational> factors;
  for (const auto& g : h.weights()) factors.push_back(1 + g);
  detail::WeightClasses wc(factors);
  const bool histogram = limits.strategy != Enumeration::Product && wc.radix_size(kHistogramLimit) <= kHistogramLimit;
  std::vector<std::uint64_t> strides(wc.values.size());
  std::uint64_t space = 1;
  for (std::size_t i = 0; i < wc.values.size(); ++i) {
    strides[i] = space;
    space *= std::uint64_t(wc.multiplicity[i]) + 1;
  }
  std::vector<std::uint64_t> hist(histogram ? space : 0, 0);
  BigRational direct = 0;

  std::vector<int> sigma(n, 0);
  while (true) {
    std::uint64_t index = 0;
    BigRational product = 1;
    for (int f = 0; f < m; ++f) {
      const auto& e = h.hyperedge(f);
      bool mono = std::all_of(e.begin(), e.end(), [&](int v) { return sigma[v] == sigma[e[0]]; });
      if (!mono) continue;
      if (histogram) {
        index += strides[wc.class_of[f]];
      } else {
        product *= factors[f];
      }
    }
    if (histogram) {
      ++hist[index];
    } else {
      direct += product;
    }
    int k = 0;
    while (k < n && ++sigma[k] == qi) sigma[k++] = 0;
    if (k == n) break;
  }
  if (!histogram) return direct;

  std::vector<std::vector<BigRational>> tables;
  for (std::size_t i = 0; i < wc.values.size(); ++i) tables.push_back(powers(wc.values[i], wc.multiplicity[i]));
  BigRational total = 0;
  for (std::uint64_t idx = 0; idx < space; ++idx) {
    if (hist[idx] == 0) continue;
    BigRational term = 1;
    std::uint64_t rest = idx;
    for (std::size_t i = strides.size(); i-- > 0;) {
      term *= tables[i][rest / strides[i]];
      rest %= strides[i];
    }
    BigInt c;
    mpz_import(c.get_mpz_t(), 1, 1, sizeof(std::uint64_t), 0, 0, &hist[idx]);
    total += term * BigRational(c);
  }
  return total;
}

bool fk_check(const WeightedHypergraph& h, const BigRational& q, const EvalLimits& limits) {
  return potts(h, q, limits) == tutte_hypergraph(h, q, limits);
}

TerminalSplit terminal_split(const WeightedGraph& g, int s, int t, const BigRational& q, const EvalLimits& limits) {
  check_terminals(g, s, t);
  require_subset_cap(g.edge_count(), limits, "graph");
  auto sums = tutte_sums(g.vertex_count(), edge_items(g), g.weights(), q, 2, limits,
                         [s, t](const RollbackUnionFind& uf) { return uf.same(s, t) ? 0 : 1; });
  return {sums[0], sums[1]};
}

BigRational tutte_frontier(const WeightedGraph& g, const BigRational& q, const EvalLimits& limits) {
  FrontierSweep sweep(g, {}, q, limits);
  return sweep.run(1, [](const std::vector<int>&, const std::vector<int>&) { return 0; })[0];
}

TerminalSplit terminal_split_frontier(const WeightedGraph& g, int s, int t, const BigRational& q,
                                      const EvalLimits& limits) {
  check_terminals(g, s, t);
  FrontierSweep sweep(g, {s, t}, q, limits);
  auto sums = sweep.run(2, [s, t](const std::vector<int>& labels, const std::vector<int>& position) {
    return labels[position[s]] == labels[position[t]] ? 0 : 1;
  });
  return {sums[0], sums[1]};
}

BigRational independent_set_polynomial(const BipartiteGraph& b, const BigRational& mu, const EvalLimits& limits) {
  SideCensus c = side_census(b, limits);
  const int other = int(c.count.empty() ? 0 : c.count[0].size()) - 1;
  auto mu_pow = powers(mu, int(c.count.size()) - 1);
  auto free_pow = powers(1 + mu, std::max(other, 0));
  BigRational total = 0;
  for (std::size_t a = 0; a < c.count.size(); ++a) {
    for (int f = 0; f <= other; ++f) {
      if (c.count[a][f] != 0) total += BigRational(c.count[a][f]) * mu_pow[a] * free_pow[f];
    }
  }
  return total;
}

MaxIndependentSets maximum_independent_sets(const BipartiteGraph& b, const EvalLimits& limits) {
  SideCensus c = side_census(b, limits);
  MaxIndependentSets best;
  const int other = int(c.count[0].size()) - 1;
  for (std::size_t a = 0; a < c.count.size(); ++a) {
    for (int f = 0; f <= other; ++f) {
      if (c.count[a][f] == 0) continue;
      int size = int(a) + f;
      if (size > best.size) {
        best.size = size;
        best.count = c.count[a][f];
      } else if (size == best.size) {
        best.count += c.count[a][f];
      }
    }
  }
  return best;
}

}  // namespace pottsforge
