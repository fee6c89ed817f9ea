#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pottsforge/exact_eval.hpp"
#include "pottsforge/gadget.hpp"
#include "pottsforge/graph.hpp"
#include "pottsforge/partition.hpp"
#include "pottsforge/text_format.hpp"

namespace pottsforge {

// ---------------------------------------------------------------------------
// #BipartiteMaxIS -> #BIS(mu) -> #SemiRegularBIS(mu)

/// Every vertex u becomes (u, 0..s-1); every edge (u, v) becomes all s^2
/// pairs. Copy i of left vertex u is u*s + i, likewise on the right.
BipartiteGraph blow_up(const BipartiteGraph& b, int s);

struct BlowupResult {
  BipartiteGraph graph;  // B'
  int s = 0;
  int xi = 0;            // maximum independent set size of B
  BigInt max_is_count;   // Y, by brute force
  BigRational divisor;   // ((1 + mu)^s - 1)^xi
};

/// s is the least integer with (1 + 2mu/3)^s >= 2^(n+3).
BlowupResult maxis_blowup(const BipartiteGraph& b, const BigRational& mu,
                          const EvalLimits& limits = EvalLimits::from_env());

/// floor(z / ((1 + mu)^s - 1)^xi): recovers Y from an estimate of Z_IS(B'; mu).
BigInt maxis_postprocess(const BigRational& z, const BigRational& mu, int s, int xi);

struct PadParams {
  int s_blowup = 0;
  int s_pad = 0;
  int d = 0;  // target right degree
  int g = 0;  // copies of Psi
  BigRational mu_minus, mu_plus;
  BigRational D, U, L, Y;  // at mu_plus (D, U) and (s_pad, mu_minus) (L); Y = Y(s_pad, mu)
};

struct PadResult {
  BipartiteGraph graph;    // B''
  PadParams params;
  BigRational correction;  // Y(s, mu)^g
  BigRational psi_value;   // Z_IS(Psi; mu)
};

/// Attaches d - deg(v) copies of Psi = K_{d,s} (z-side on the left, z_1
/// joined to v) to every right vertex v. Already semiregular input is
/// returned unchanged with g = 0.
PadResult semiregular_pad(const BipartiteGraph& b, const BigRational& mu, const BigRational& eps);

// ---------------------------------------------------------------------------
// #SemiRegularBIS(mu) -> UniformHyperTutte(mu + 1, mu)

struct HyperTutteResult {
  WeightedHypergraph hypergraph;  // vertices U, then the apex
  BigRational q;                  // mu + 1
  BigRational scale;              // (mu + 1)^-1
  int apex = 0;
};

HyperTutteResult semiregular_to_hypertutte(const BipartiteGraph& b, const BigRational& mu);

// ---------------------------------------------------------------------------
// UniformHyperTutte(q, gamma) -> TwoWeightFerroTutte(q)

/// Largest eta = 2^-k with 1 + eta (1 + e^chi gamma) / (1 - eta) <= e^chi.
BigRational eta_for(const BigRational& chi, const BigRational& gamma);

/// Smallest N with N^(1/4) an integer and N > max(t^16, eta^(-1/8), n0).
BigInt prescribed_clique_size(int t, const BigRational& eta, const BigRational& n0 = 0);

struct TwoWeightOptions {
  std::optional<int> N_override;
  TuneOptions tune;
  /// Largest N tried when no override is given.
  int max_clique = 256;
};

struct TwoWeightResult {
  WeightedGraph graph;  // G-hat: vertices of H first, then K_1, K_2, ...
  int t = 0;
  int N = 0;
  BigInt prescribed_N;
  bool guarantee_applies = false;
  BigRational rho_hat, gamma_prime, gamma_dblprime;
  BigRational c;         // Z_j(bottom), exact
  int m = 0;             // hyperedges simulated by gadgets
  BigRational chi, eta;
  BigRational scale;     // c^-m times (1 + gamma)^(singletons)
  TuneResult tune;
  std::vector<std::string> warnings;
};

TwoWeightResult hyper_to_twoweight(const WeightedHypergraph& h, const BigRational& q, const BigRational& gamma,
                                   const BigRational& eps, const TwoWeightOptions& options = {});

/// G-hat for a given gadget: vertices of h first, then one clique K_j per
/// hyperedge, with K_j^(2) at gamma' and K_j x f_j at gamma''.
WeightedGraph simulate_hyperedges(const WeightedHypergraph& h, const GadgetSpec& spec);

/// Z_j(pi) for every partition pi of the terminals of one gadget copy:
/// sum over edge subsets of Gamma' inducing pi of gamma(A) q^kappa'.
std::map<Partition, BigRational> gadget_partition_weights(const GadgetSpec& spec, const BigRational& q,
                                                           const EvalLimits& limits = EvalLimits::from_env());

/// Right-hand side of the decomposition of Z_Tutte(G-hat): sum over tuples
/// of terminal partitions of q^kappa(join) prod_j Z_j(pi_j).
BigRational gadget_decomposition(const WeightedHypergraph& h, const GadgetSpec& spec, const BigRational& q,
                                 const EvalLimits& limits = EvalLimits::from_env());

// ---------------------------------------------------------------------------
// Series / parallel implementation calculus

/// (1 + g1)(1 + g2) - 1.
BigRational parallel_compose(const BigRational& g1, const BigRational& g2);

struct SeriesValue {
  BigRational gamma_star;
  BigRational scale;  // q + g1 + g2
};

/// g1 g2 / (q + g1 + g2).
SeriesValue series_compose(const BigRational& g1, const BigRational& g2, const BigRational& q);

/// Composition tree over a single base weight. Children may be shared.
/// An empty parallel node is the absent edge (weight 0).
struct CompositionNode {
  enum class Kind { Base, Series, Parallel };
  Kind kind = Kind::Base;
  std::vector<std::shared_ptr<const CompositionNode>> children;

  static std::shared_ptr<const CompositionNode> base();
  static std::shared_ptr<const CompositionNode> series(std::vector<std::shared_ptr<const CompositionNode>> parts);
  static std::shared_ptr<const CompositionNode> parallel(std::vector<std::shared_ptr<const CompositionNode>> parts);
};
using CompositionTree = std::shared_ptr<const CompositionNode>;

struct TreeValue {
  BigRational gamma;  // implemented weight
  BigRational scale;  // Z_{s|t}(Upsilon) / q^2
  std::int64_t edges = 0;
};

TreeValue evaluate_tree(const CompositionTree& tree, const BigRational& q, const BigRational& base);

/// Upsilon as a graph with s = 0, t = 1, every edge of weight `base`. Edges
/// are emitted branch by branch so the frontier evaluator stays narrow.
WeightedGraph expand_tree(const CompositionTree& tree, const BigRational& base);

struct WeightImplementation {
  CompositionTree tree;
  BigRational target;
  BigRational realized_value;
  BigRational accumulated_scale;
  std::int64_t edge_count = 0;
  int k = 0;                  // series length giving gamma_1 <= 1/4
  BigRational gamma_1;
  std::vector<BigRational> gamma_j;  // j = 1..m
  std::vector<std::int64_t> d;       // d_j, j = 1..m
  int m = 0;
  std::int64_t branch_count = 0;     // d_1 + ... + d_m
};

/// Parallel combination of d_j copies of gamma_j (a j-fold series of
/// gamma_1, itself a k-fold series of gamma_hat). The realized value lies in
/// [target - pi_tol, target]. If `max_branches` is given, d_1 + ... + d_m
/// must not exceed it.
WeightImplementation implement_weight(const BigRational& target, const BigRational& q_hat,
                                      const BigRational& gamma_hat, const BigRational& pi_tol,
                                      std::optional<std::int64_t> max_branches = std::nullopt);

struct UniformResult {
  WeightedGraph graph;  // every edge gamma
  BigRational scale;    // Z(graph; q, gamma) = scale * Z(g; q, gamma*)
  BigRational chi, pi_tol;
  std::map<BigRational, WeightImplementation> implementations;
  std::vector<BigRational> realized;  // gamma* per edge of g
  std::vector<std::string> warnings;
};

struct UniformOptions {
  bool enforce_edge_budget = true;
};

UniformResult twoweight_to_uniform(const WeightedGraph& g, const BigRational& q, const BigRational& gamma,
                                   const BigRational& eps, const UniformOptions& options = {});

// ---------------------------------------------------------------------------
// 3-UniformHyperTutte(2, gamma) -> Tutte(2, gamma')

struct Ising3Result {
  WeightedGraph graph;
  BigRational gamma_prime;  // (1 + gamma)^(1/2) - 1
  BigRational y_prime;      // 1 + gamma_prime
  BigRational scale;        // y'^|E|
  bool exact = true;        // false when (1 + gamma)^(1/2) was approximated
};

Ising3Result ising3_reduce(const WeightedHypergraph& h, const BigRational& gamma, mpfr_prec_t bits = 256);

// ---------------------------------------------------------------------------
// Full chain

/// One reduction stage. Scale factors compose: the quantity sought before
/// the stage is (approximately) scale_factor times the quantity after it.
struct ReductionTrace {
  std::string stage;
  Instance output;
  BigRational scale_factor;
  BigRational error_budget;
  std::map<std::string, std::string> params;
  std::vector<std::string> warnings;
};

struct PipelineOptions {
  std::optional<int> N_override;
  bool enforce_edge_budget = true;
  TuneOptions tune;
};

struct PipelineResult {
  std::vector<ReductionTrace> stages;
  WeightedGraph final_instance;
  BigRational mu;       // q - 1
  int s = 0;            // blow-up factor
  int xi = 0;
  BigRational divisor;  // ((1 + mu)^s - 1)^xi
  /// Product of the stage scale factors: Z_IS(B'; mu) ~ total_scale * Z(final).
  BigRational total_scale;
};

/// #BIS instance b (read as #BipartiteMaxIS) to Tutte(q, gamma) with mu = q - 1.
PipelineResult run_pipeline(const BipartiteGraph& b, const BigRational& q, const BigRational& gamma,
                            const BigRational& eps, const PipelineOptions& options = {});

/// Maximum independent set count recovered from an exact or estimated
/// Z_Tutte of the final instance.
BigInt pipeline_postprocess(const PipelineResult& result, const BigRational& z_final);

}  // namespace pottsforge
