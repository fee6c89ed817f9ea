#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "pottsforge/graph.hpp"
#include "pottsforge/random.hpp"
#include "pottsforge/rational.hpp"

namespace pottsforge {

/// p(e) in [0,1] per edge id.
class EdgeProbabilityMap {
 public:
  EdgeProbabilityMap() = default;
  explicit EdgeProbabilityMap(std::vector<BigRational> p);

  static EdgeProbabilityMap uniform(int m, const BigRational& p);
  /// p = gamma / (1 + gamma), the inverse of gamma = p / (1 - p).
  static EdgeProbabilityMap from_weights(const std::vector<BigRational>& gamma);

  int size() const { return int(p_.size()); }
  const BigRational& operator[](int e) const { return p_.at(e); }
  const std::vector<BigRational>& values() const { return p_; }

  /// gamma_e = p / (1 - p); throws if some p(e) = 1.
  std::vector<BigRational> weights() const;

 private:
  std::vector<BigRational> p_;
};

/// A+ (forced in) and A- (forced out).
struct Conditioning {
  std::vector<int> forced_in;
  std::vector<int> forced_out;

  /// Disjoint, in range, p > 0 on A+, p < 1 on A-.
  void validate(int m, const EdgeProbabilityMap& p) const;
};

struct ChainState {
  std::vector<char> in;  // indicator per edge id
  std::uint64_t steps = 0;

  std::vector<int> edges() const;
  int edge_count() const;
};

enum class Model { RandomCluster, ErdosRenyi };

/// P~(G; A, q, p) = q^kappa(V,A) prod_{A} p(e) prod_{E \ A} (1 - p(e)).
BigRational rc_weight(const WeightedGraph& g, const std::vector<int>& subset, const BigRational& q,
                      const EdgeProbabilityMap& p);

/// Heat-bath on an edge: pick a free edge uniformly, resample it from its
/// conditional law given the rest. Randomness is consumed as
/// (edge index, one exact uniform) per step, so chains sharing an Rng
/// stream can be coupled.
class HeatBathChain {
 public:
  HeatBathChain(const WeightedGraph& g, Model model, const BigRational& q, EdgeProbabilityMap p,
                Conditioning cond = {});

  const ChainState& state() const { return state_; }
  /// Replaces the state; it must respect the conditioning.
  void set_state(ChainState s);

  const std::vector<int>& free_edges() const { return free_; }
  int vertex_count() const { return n_; }
  int edge_count() const { return int(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }

  void step(Rng& rng);
  /// Resamples edge e with the supplied variate.
  void update(int e, ExactUniform& u);

  /// Whether the endpoints of e are joined by a path in A - e.
  bool endpoints_connected(int e) const;

 private:
  void rebuild_present();
  void link(int e);
  void unlink(int e);

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> present_;  // edges of A at each vertex
  std::vector<std::array<int, 2>> slot_;   // position of e in present_[u], present_[v]
  Model model_;
  BigRational q_;
  bool q_at_least_one_ = true;
  EdgeProbabilityMap p_;
  std::vector<Threshold> joined_;    // inclusion threshold when endpoints already connected
  std::vector<Threshold> separate_;  // inclusion threshold otherwise
  std::vector<std::uint32_t> kind_;  // index into joined_ / separate_ per edge
  std::vector<int> free_;
  ChainState state_;
  mutable std::vector<std::uint32_t> seen_;
  mutable std::uint32_t generation_ = 0;
  mutable std::vector<int> stack_;
};

ChainState heat_bath_step(const WeightedGraph& g, const ChainState& state, Model model, const BigRational& q,
                          const EdgeProbabilityMap& p, const Conditioning& cond, Rng& rng);

enum class CouplingKind {
  ErOverRc,     // lower ~ RC(q, p), upper ~ ER(p)
  RcOverErq,    // lower ~ ER(p / q), upper ~ RC(q, p)
  RcMonotoneP,  // lower ~ RC(q, p), upper ~ RC(q, p'), p' >= p
};

struct CoupledState {
  ChainState lower;
  ChainState upper;
};

/// Two heat-bath chains driven by one shared edge choice and one shared
/// uniform per step. Throws CouplingViolation if lower.A is ever not a
/// subset of upper.A.
class CoupledChain {
 public:
  /// `p_upper` is only used by RcMonotoneP.
  CoupledChain(const WeightedGraph& g, CouplingKind kind, const BigRational& q, const EdgeProbabilityMap& p,
               const EdgeProbabilityMap& p_upper = {}, Conditioning cond = {});

  CoupledState state() const { return {lower_.state(), upper_.state()}; }
  void set_state(const CoupledState& s);
  void step(Rng& rng);
  bool contained() const;

 private:
  HeatBathChain lower_;
  HeatBathChain upper_;
};

CoupledState coupled_step(const WeightedGraph& g, const CoupledState& cs, CouplingKind kind, const BigRational& q,
                          const EdgeProbabilityMap& p, const EdgeProbabilityMap& p_upper, const Conditioning& cond,
                          Rng& rng);

struct RedGreen {
  std::vector<int> red_vertices;
  std::vector<int> red_edges;
  std::vector<int> green_edges;
};

/// Colours each component of (V, A) red with probability r, independently.
RedGreen red_green_split(const WeightedGraph& g, const std::vector<int>& subset, const BigRational& r, Rng& rng);

struct BicolourBounds {
  BigRational no_bicolour_upper;    // [(1-pi)^(nu/s) (2 - (1-pi)^(nu/s))]^s, rounded up
  BigRational some_bicolour_upper;  // nu [1 - (1-pi)^nu_max]^2, exact
};

BicolourBounds bicolour_bounds(int nu, int s, int nu_max, const BigRational& pi_hat);

/// Called after each sweep with the sweep number (1-based) and the chain.
using SweepObserver = std::function<void(std::uint64_t sweep, const HeatBathChain& chain)>;

/// Runs sweeps * m heat-bath steps from A = A+.
ChainState sample_rc(const WeightedGraph& g, Model model, const BigRational& q, const EdgeProbabilityMap& p,
                     const Conditioning& cond, std::uint64_t sweeps, Seed seed, const SweepObserver& observer = {});

}  // namespace pottsforge
