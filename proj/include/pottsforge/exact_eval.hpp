#pragma once

#include <cstddef>
#include <cstdint>

#include "pottsforge/graph.hpp"
#include "pottsforge/rational.hpp"

namespace pottsforge {

enum class Enumeration {
  Automatic,  // histogram by weight class when the class space is small
  Histogram,
  Product,    // carry the rational weight product through the recursion
};

/// Bounds on the brute-force oracles. `log2_cap` bounds the number of
/// configurations enumerated: 2^m edge subsets, or q^n colourings.
struct EvalLimits {
  int log2_cap = 24;
  std::size_t max_frontier_states = std::size_t(1) << 20;
  Enumeration strategy = Enumeration::Automatic;

  /// Defaults, with log2_cap taken from POTTSFORGE_CAP when set.
  static EvalLimits from_env();
};

/// sum over F subset of E of q^kappa(V,F) prod_{e in F} gamma_e.
BigRational tutte_graph(const WeightedGraph& g, const BigRational& q, const EvalLimits& limits = EvalLimits::from_env());

/// Hypergraph version, with hyperedge connectivity.
BigRational tutte_hypergraph(const WeightedHypergraph& h, const BigRational& q,
                             const EvalLimits& limits = EvalLimits::from_env());

/// sum over colourings sigma: V -> [q] of prod_f (1 + gamma_f [f monochromatic]).
/// q must be a positive integer.
BigRational potts(const WeightedHypergraph& h, const BigRational& q, const EvalLimits& limits = EvalLimits::from_env());

/// potts(h, q) == tutte_hypergraph(h, q).
bool fk_check(const WeightedHypergraph& h, const BigRational& q, const EvalLimits& limits = EvalLimits::from_env());

struct TerminalSplit {
  BigRational z_joined;  // s and t in the same component
  BigRational z_split;
  BigRational total() const { return z_joined + z_split; }
};

TerminalSplit terminal_split(const WeightedGraph& g, int s, int t, const BigRational& q,
                             const EvalLimits& limits = EvalLimits::from_env());

/// Same quantities as tutte_graph / terminal_split, computed by sweeping the
/// edges in their stored order while tracking the connectivity of the active
/// vertices. Cost depends on the width of that sweep, not on m, so long
/// series-parallel chains built edge by edge are cheap.
BigRational tutte_frontier(const WeightedGraph& g, const BigRational& q, const EvalLimits& limits = EvalLimits::from_env());
TerminalSplit terminal_split_frontier(const WeightedGraph& g, int s, int t, const BigRational& q,
                                      const EvalLimits& limits = EvalLimits::from_env());

/// Independent-set polynomial Z_IS(B; mu) = sum over independent I of mu^|I|.
BigRational independent_set_polynomial(const BipartiteGraph& b, const BigRational& mu,
                                       const EvalLimits& limits = EvalLimits::from_env());

struct MaxIndependentSets {
  int size = 0;       // xi
  BigInt count = 0;   // number of maximum independent sets
};

MaxIndependentSets maximum_independent_sets(const BipartiteGraph& b, const EvalLimits& limits = EvalLimits::from_env());

}  // namespace pottsforge
