#pragma once

// Internal: subset enumeration shared by the exact oracles.

#include <cstdint>
#include <map>
#include <vector>

#include "pottsforge/errors.hpp"
#include "pottsforge/rational.hpp"
#include "pottsforge/union_find.hpp"

namespace pottsforge::detail {

/// Distinct weight values and, per item, the index of its value.
struct WeightClasses {
  std::vector<BigRational> values;
  std::vector<int> class_of;
  std::vector<int> multiplicity;

  explicit WeightClasses(const std::vector<BigRational>& weights) {
    std::map<BigRational, int> index;
    for (const auto& w : weights) {
      auto [it, fresh] = index.try_emplace(w, int(values.size()));
      if (fresh) {
        values.push_back(w);
        multiplicity.push_back(0);
      }
      class_of.push_back(it->second);
      ++multiplicity[it->second];
    }
  }

  /// prod (m_i + 1), saturating at `limit + 1`.
  std::uint64_t radix_size(std::uint64_t limit) const {
    std::uint64_t s = 1;
    for (int m : multiplicity) {
      s *= std::uint64_t(m) + 1;
      if (s > limit) return limit + 1;
    }
    return s;
  }
};

/// Histogram of selected subsets keyed by (label, kappa, per-class counts).
struct Census {
  int labels = 0;
  int kappa_dim = 0;
  std::vector<std::uint64_t> strides;
  std::uint64_t class_space = 1;
  std::vector<std::uint64_t> counts;

  std::uint64_t& at(int label, int kappa, std::uint64_t class_index) {
    return counts[(std::uint64_t(label) * kappa_dim + kappa) * class_space + class_index];
  }
};

/// Per-label sums of count * q^kappa * prod_i table[i][c_i].
inline std::vector<BigRational> census_sums(const Census& c, const std::vector<BigRational>& q_powers,
                                            const std::vector<std::vector<BigRational>>& tables) {
  std::vector<BigRational> sums(c.labels, BigRational(0));
  std::vector<int> digits(c.strides.size());
  for (int label = 0; label < c.labels; ++label) {
    for (int kappa = 0; kappa < c.kappa_dim; ++kappa) {
      for (std::uint64_t ci = 0; ci < c.class_space; ++ci) {
        std::uint64_t count = c.counts[(std::uint64_t(label) * c.kappa_dim + kappa) * c.class_space + ci];
        if (count == 0) continue;
        BigRational term = q_powers[kappa];
        std::uint64_t rest = ci;
        for (std::size_t i = c.strides.size(); i-- > 0;) {
          term *= tables[i][rest / c.strides[i]];
          rest %= c.strides[i];
        }
        BigInt mult;
        mpz_set_ui(mult.get_mpz_t(), 0);
        mpz_import(mult.get_mpz_t(), 1, 1, sizeof(count), 0, 0, &count);
        sums[label] += term * BigRational(mult);
      }
    }
  }
  return sums;
}

/// Enumerates every subset of `items` (vertex lists whose vertices become
/// connected when the item is selected) over n vertices. label_of(uf) maps
/// the final connectivity to a label in [0, labels).
template <class LabelOf>
Census subset_census(int n, const std::vector<std::vector<int>>& items, const WeightClasses& wc, int labels,
                     LabelOf&& label_of) {
  Census c;
  c.labels = labels;
  c.kappa_dim = n + 1;
  c.strides.resize(wc.values.size());
  for (std::size_t i = 0; i < wc.values.size(); ++i) {
    c.strides[i] = c.class_space;
    c.class_space *= std::uint64_t(wc.multiplicity[i]) + 1;
  }
  c.counts.assign(std::uint64_t(labels) * c.kappa_dim * c.class_space, 0);

  RollbackUnionFind uf(n);
  const int m = int(items.size());
  auto rec = [&](auto&& self, int i, std::uint64_t class_index) -> void {
    if (i == m) {
      ++c.at(label_of(uf), uf.blocks(), class_index);
      return;
    }
    self(self, i + 1, class_index);
    auto mark = uf.checkpoint();
    const auto& f = items[i];
    for (std::size_t j = 1; j < f.size(); ++j) uf.unite(f[0], f[j]);
    self(self, i + 1, class_index + c.strides[wc.class_of[i]]);
    uf.rollback(mark);
  };
  rec(rec, 0, 0);
  return c;
}

/// Same sums as census_sums over a subset_census, but carrying the weight
/// product down the recursion. Used when the class space is too large.
template <class LabelOf>
std::vector<BigRational> subset_product_sums(int n, const std::vector<std::vector<int>>& items,
                                             const std::vector<BigRational>& weights, const BigRational& q,
                                             int labels, LabelOf&& label_of) {
  std::vector<BigRational> q_powers(n + 1);
  q_powers[0] = 1;
  for (int k = 1; k <= n; ++k) q_powers[k] = q_powers[k - 1] * q;
  std::vector<BigRational> sums(labels, BigRational(0));
  RollbackUnionFind uf(n);
  const int m = int(items.size());
  auto rec = [&](auto&& self, int i, const BigRational& product) -> void {
    if (product == 0) return;
    if (i == m) {
      sums[label_of(uf)] += product * q_powers[uf.blocks()];
      return;
    }
    self(self, i + 1, product);
    auto mark = uf.checkpoint();
    const auto& f = items[i];
    for (std::size_t j = 1; j < f.size(); ++j) uf.unite(f[0], f[j]);
    BigRational next = product * weights[i];
    self(self, i + 1, next);
    uf.rollback(mark);
  };
  rec(rec, 0, BigRational(1));
  return sums;
}

}  // namespace pottsforge::detail
