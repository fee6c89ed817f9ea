#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pottsforge/exact_eval.hpp"
#include "pottsforge/graph.hpp"
#include "pottsforge/random.hpp"
#include "pottsforge/rational.hpp"
#include "pottsforge/text_format.hpp"

namespace pottsforge {

/// Outcome of one exhaustive or randomized identity check.
struct CheckReport {
  std::string name;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::vector<std::string> notes;  // first few failures, plus summary figures
  double seconds = 0;
  bool skipped = false;  // instance outside the oracles' reach

  bool ok() const { return failures == 0; }
  void fail(const std::string& what);
};

/// Z_Potts = Z_Tutte for every hypergraph on 1..max_n vertices with at most
/// max_edges hyperedges (multisets of non-empty vertex subsets), each of the
/// uniform weights and integer q given.
CheckReport verify_fk(int max_n = 4, int max_edges = 4, std::vector<BigRational> gammas = {1, 2, 3},
                      std::vector<BigRational> qs = {2, 3, 4});

/// DP table against the subset census of Gamma'_{N,t}, t <= max_t, N <= max_N,
/// `pairs` random (gamma', gamma'') per shape.
CheckReport verify_dp(int max_t = 3, int max_N = 5, int pairs = 20, Seed seed = {1});

/// Z^k / Z = Pr(Y = k) under RC(Gamma; q, p), t = 1..max_t, N = 1..max_N.
/// N = 1 uses cross probability 1/2, since N^(-3/4) = 1 there.
CheckReport verify_wiring(int max_t = 3, int max_N = 4, std::vector<BigRational> rhos = {BigRational(1, 8), BigRational(1, 3)},
                          std::vector<BigRational> qs = {3, BigRational(5, 2)});

/// Coupled heat-bath chains of each kind on random G(n, 1/2) graphs; every
/// step is checked for lower subset of upper.
CheckReport verify_coupling(int graphs = 20, int n = 10, std::uint64_t steps = 10000, Seed seed = {2});

struct SmallGraph {
  int n = 0;
  std::vector<Edge> edges;
};

/// Connected simple graphs with 1..max_edges edges, one per isomorphism class.
std::vector<SmallGraph> connected_graph_classes(int max_edges);

/// Simple graphs with at most max_edges edges and at most `isolated`
/// isolated vertices, one per isomorphism class (the empty graph excluded).
std::vector<SmallGraph> graph_classes(int max_edges, int isolated = 0);

/// Exact conditional law of (red, green) given R = V1 against
/// RC(G[V1]; rq, p) x RC(G[V2]; (1-r)q, p), for every graph with at most
/// max_edges edges (and at most one isolated vertex), up to isomorphism.
CheckReport verify_red_subgraph_law(int max_edges = 4,
                                     std::vector<BigRational> rs = {BigRational(1, 2), BigRational(1, 3)},
                                     std::vector<BigRational> qs = {2, 3},
                                     std::vector<BigRational> ps = {BigRational(1, 3), BigRational(3, 4)});

/// Chi-squared goodness of fit of heat-bath samples on 3-edge graphs
/// (triangle, path, star) against exact RC probabilities. Fails if any
/// p-value is <= min_p.
CheckReport verify_stationarity(std::uint64_t samples = 1000000, int thin = 8, Seed seed = {3}, double min_p = 1e-3);

/// Z_IS(B; mu) = (mu + 1)^-1 Z_Tutte(H; mu + 1, mu) for every bipartite graph
/// with at most max_vertices vertices.
CheckReport verify_apex_identity(int max_vertices = 6, std::vector<BigRational> mus = {BigRational(1, 2), 1, 2});

/// Z_Tutte(G-hat) against the partition decomposition for t = 2, N = 2..max_N
/// and hypergraphs with one or two hyperedges.
CheckReport verify_decomposition(int max_N = 4, std::vector<BigRational> rhos = {BigRational(1, 8), BigRational(1, 3)},
                               std::vector<BigRational> qs = {3, BigRational(7, 2)});

/// Series / parallel values and scale factors against terminal_split on
/// random composition trees.
CheckReport verify_series_parallel(int trees = 60, Seed seed = {4});

/// Z_Potts(G; 2, gamma') = y'^|E| Z_Potts(H; 2, gamma) for every 3-uniform H
/// on 3..max_n vertices with at most max_edges hyperedges.
CheckReport verify_ising3(int max_n = 5, int max_edges = 3, std::vector<BigRational> gammas = {3, 8});

/// psi(rho) non-increasing across the whole tuner grid.
CheckReport verify_psi_monotone(int t = 2, int N = 16, const BigRational& q = 3, const BigRational& chi = 1);

struct TunerCase {
  BigRational q;
  BigRational gamma;
  int N = 16;
  int t = 2;
};

/// Tuner returns a zeta-sandwich rho-hat whenever the grid endpoints bracket
/// gamma, and reports no crossing only when they do not.
CheckReport verify_tuner(const std::vector<TunerCase>& cases, const BigRational& chi = BigRational(1, 2));
std::vector<TunerCase> default_tuner_cases();

/// implement_weight on random targets in (0, 1]: value in
/// [target - pi_tol, target], and q Z_st / Z_s|t of the expansion equals it.
CheckReport verify_implement(int targets = 50, const BigRational& q_hat = 3, const BigRational& gamma_hat = 2,
                             const BigRational& pi_tol = BigRational(1, 1000000), Seed seed = {5});

/// Exact identities that apply to one instance: FK and evaluator agreement
/// for graphs and hypergraphs, the apex and blow-up identities for
/// bipartite graphs (apex identity, blow-up sandwich), the ising3 identity for 3-uniform hypergraphs.
std::vector<CheckReport> verify_instance(const Instance& instance, const BigRational& q, const BigRational& mu);

/// Phase-transition sweep on K_N with p = lambda / N. One row per (lambda,
/// start) with start "ordered" (A = E) or "disordered" (A = empty).
struct PhaseRow {
  double lambda = 0;
  std::string start;
  double largest_fraction = 0;
  double mean_last_sweeps = 0;
};

struct PhaseOptions {
  BigRational q = 10;
  int N = 500;
  std::uint64_t sweeps = 2000;
  std::vector<double> lambdas;  // defaults to a sweep around lambda_c
  Seed seed = {7};
  int jobs = 1;
};

std::vector<PhaseRow> phase_sweep(const PhaseOptions& options);
std::string phase_csv(const std::vector<PhaseRow>& rows);

}  // namespace pottsforge
