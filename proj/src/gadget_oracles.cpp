#include "pottsforge/gadget_oracles.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "pottsforge/errors.hpp"
#include "pottsforge/union_find.hpp"

namespace pottsforge {

namespace {

struct EdgeKind {
  int u, v, kind;  // kind 0 = K^(2), 1 = K x T, 2 = T^(2)
};

std::vector<EdgeKind> gadget_edges(int N, int t, bool with_terminal_pairs) {
  std::vector<EdgeKind> edges;
  for (int u = 0; u < N; ++u) {
    for (int v = u + 1; v < N; ++v) edges.push_back({u, v, 0});
  }
  for (int u = 0; u < N; ++u) {
    for (int i = 0; i < t; ++i) edges.push_back({u, N + i, 1});
  }
  if (with_terminal_pairs) {
    for (int i = 0; i < t; ++i) {
      for (int j = i + 1; j < t; ++j) edges.push_back({N + i, N + j, 2});
    }
  }
  return edges;
}

void require_cap(int m, const EvalLimits& limits) {
  if (m > limits.log2_cap) {
    throw CapExceeded("gadget with " + std::to_string(m) + " edges exceeds 2^" + std::to_string(limits.log2_cap) +
                      " subsets");
  }
}

BigInt from_u64(std::uint64_t x) {
  BigInt r;
  mpz_import(r.get_mpz_t(), 1, 1, sizeof(x), 0, 0, &x);
  return r;
}

}  // namespace

std::vector<BigRational> exact_y_distribution(const GadgetSpec& spec, const BigRational& q, const EvalLimits& limits) {
  const int N = spec.N, t = spec.t, n = N + t;
  const auto edges = gadget_edges(N, t, true);
  const int m = int(edges.size());
  require_cap(m, limits);
  const int mk = spec.clique_edge_count(), mc = spec.cross_edge_count(), mt = spec.terminal_edge_count();
  const int first_terminal_pair = mk + mc;

  // hist[x][y][z][kappa][Y]
  auto idx = [&](int x, int y, int z, int kappa, int Y) {
    return ((((std::size_t(x) * (mc + 1) + y) * (mt + 1) + z) * (n + 1) + kappa) * (t + 1)) + Y;
  };
  std::vector<std::uint64_t> hist(std::size_t(mk + 1) * (mc + 1) * (mt + 1) * (n + 1) * (t + 1), 0);

  RollbackUnionFind uf(n);
  int Y = 0;
  auto rec = [&](auto&& self, int i, int x, int y, int z) -> void {
    if (i == first_terminal_pair) {
      // Components of A \ T^(2) that contain terminals.
      std::vector<int> roots;
      for (int j = 0; j < t; ++j) roots.push_back(uf.find(N + j));
      std::sort(roots.begin(), roots.end());
      Y = int(std::unique(roots.begin(), roots.end()) - roots.begin());
    }
    if (i == m) {
      ++hist[idx(x, y, z, uf.blocks(), Y)];
      return;
    }
    self(self, i + 1, x, y, z);
    auto mark = uf.checkpoint();
    uf.unite(edges[i].u, edges[i].v);
    const int kind = edges[i].kind;
    self(self, i + 1, x + (kind == 0), y + (kind == 1), z + (kind == 2));
    uf.rollback(mark);
  };
  rec(rec, 0, 0, 0, 0);

  auto pw = [](const BigRational& b, int e) { return pow(b, (unsigned long)e); };
  std::vector<BigRational> mass(t + 1, BigRational(0));
  BigRational total = 0;
  for (int x = 0; x <= mk; ++x) {
    for (int y = 0; y <= mc; ++y) {
      for (int z = 0; z <= mt; ++z) {
        BigRational w = pw(spec.rho, x) * pw(1 - spec.rho, mk - x) * pw(spec.cross, y) * pw(1 - spec.cross, mc - y) *
                        pw(BigRational(1), z) * pw(BigRational(0), mt - z);
        if (w == 0) continue;
        for (int kappa = 0; kappa <= n; ++kappa) {
          for (int k = 0; k <= t; ++k) {
            std::uint64_t c = hist[idx(x, y, z, kappa, k)];
            if (c == 0) continue;
            BigRational term = w * pw(q, kappa) * BigRational(from_u64(c));
            mass[k] += term;
            total += term;
          }
        }
      }
    }
  }
  for (auto& p : mass) p /= total;
  return mass;
}

GadgetCensus gadget_subset_census(int t, int N, const EvalLimits& limits) {
  if (t < 0 || N < 0) throw std::invalid_argument("census needs t, N >= 0");
  const int n = N + t;
  const auto edges = gadget_edges(N, t, false);
  const int m = int(edges.size());
  require_cap(m, limits);
  const int mk = N * (N - 1) / 2, mc = N * t;
  // hist[k][l][x][y]
  auto idx = [&](int k, int l, int x, int y) {
    return ((std::size_t(k) * (N + 1) + l) * (mk + 1) + x) * (mc + 1) + y;
  };
  std::vector<std::uint64_t> hist(std::size_t(t + 1) * (N + 1) * (mk + 1) * (mc + 1), 0);
  RollbackUnionFind uf(n);
  std::vector<char> has_terminal(n);
  auto rec = [&](auto&& self, int i, int x, int y) -> void {
    if (i == m) {
      std::fill(has_terminal.begin(), has_terminal.end(), 0);
      int k = 0;
      for (int j = 0; j < t; ++j) {
        int r = uf.find(N + j);
        if (!has_terminal[r]) {
          has_terminal[r] = 1;
          ++k;
        }
      }
      ++hist[idx(k, uf.blocks() - k, x, y)];
      return;
    }
    self(self, i + 1, x, y);
    auto mark = uf.checkpoint();
    uf.unite(edges[i].u, edges[i].v);
    self(self, i + 1, x + (edges[i].kind == 0), y + (edges[i].kind == 1));
    uf.rollback(mark);
  };
  rec(rec, 0, 0, 0);

  GadgetCensus census;
  for (int k = 0; k <= t; ++k) {
    for (int l = 0; l <= N; ++l) {
      for (int x = 0; x <= mk; ++x) {
        for (int y = 0; y <= mc; ++y) {
          std::uint64_t c = hist[idx(k, l, x, y)];
          if (c) census[{k, l, x, y}] = from_u64(c);
        }
      }
    }
  }
  return census;
}

BigRational census_weight(const GadgetCensus& census, int k, int l, const BigRational& gamma_prime,
                          const BigRational& gamma_dblprime) {
  BigRational total = 0;
  for (const auto& [key, count] : census) {
    auto [kk, ll, x, y] = key;
    if (kk != k || ll != l) continue;
    total += BigRational(count) * pow(gamma_prime, (unsigned long)x) * pow(gamma_dblprime, (unsigned long)y);
  }
  return total;
}

}  // namespace pottsforge
