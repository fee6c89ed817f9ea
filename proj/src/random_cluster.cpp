#include "pottsforge/random_cluster.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

#include "pottsforge/components.hpp"
#include "pottsforge/errors.hpp"
#include "pottsforge/real.hpp"

namespace pottsforge {

EdgeProbabilityMap::EdgeProbabilityMap(std::vector<BigRational> p) : p_(std::move(p)) {
  for (std::size_t e = 0; e < p_.size(); ++e) {
    if (p_[e] < 0 || p_[e] > 1) {
      throw std::invalid_argument("p(" + std::to_string(e) + ") = " + to_fraction_string(p_[e]) + " outside [0,1]");
    }
  }
}

EdgeProbabilityMap EdgeProbabilityMap::uniform(int m, const BigRational& p) {
  return EdgeProbabilityMap(std::vector<BigRational>(m, p));
}

EdgeProbabilityMap EdgeProbabilityMap::from_weights(const std::vector<BigRational>& gamma) {
  std::vector<BigRational> p;
  p.reserve(gamma.size());
  for (const auto& g : gamma) {
    if (g < 0) throw std::invalid_argument("negative weight " + to_fraction_string(g));
    p.push_back(g / (1 + g));
  }
  return EdgeProbabilityMap(std::move(p));
}

std::vector<BigRational> EdgeProbabilityMap::weights() const {
  std::vector<BigRational> gamma;
  gamma.reserve(p_.size());
  for (const auto& p : p_) {
    if (p == 1) throw std::domain_error("p = 1 has infinite weight");
    gamma.push_back(p / (1 - p));
  }
  return gamma;
}

void Conditioning::validate(int m, const EdgeProbabilityMap& p) const {
  std::vector<char> mark(m, 0);
  for (int e : forced_in) {
    if (e < 0 || e >= m) throw std::out_of_range("forced-in edge out of range: " + std::to_string(e));
    if (p[e] == 0) throw std::invalid_argument("forced-in edge " + std::to_string(e) + " has p = 0");
    mark[e] = 1;
  }
  for (int e : forced_out) {
    if (e < 0 || e >= m) throw std::out_of_range("forced-out edge out of range: " + std::to_string(e));
    if (p[e] == 1) throw std::invalid_argument("forced-out edge " + std::to_string(e) + " has p = 1");
    if (mark[e]) throw std::invalid_argument("edge " + std::to_string(e) + " both forced in and out");
  }
}

std::vector<int> ChainState::edges() const {
  std::vector<int> out;
  for (std::size_t e = 0; e < in.size(); ++e) {
    if (in[e]) out.push_back(int(e));
  }
  return out;
}

int ChainState::edge_count() const { return int(std::count(in.begin(), in.end(), 1)); }

BigRational rc_weight(const WeightedGraph& g, const std::vector<int>& subset, const BigRational& q,
                      const EdgeProbabilityMap& p) {
  if (p.size() != g.edge_count()) throw std::invalid_argument("probability map size does not match edge count");
  std::vector<char> in(g.edge_count(), 0);
  for (int e : subset) {
    if (e < 0 || e >= g.edge_count()) throw std::out_of_range("edge id out of range: " + std::to_string(e));
    in[e] = 1;
  }
  BigRational w = pow(q, connected_components(g, subset).count);
  for (int e = 0; e < g.edge_count(); ++e) w *= in[e] ? p[e] : 1 - p[e];
  return w;
}

HeatBathChain::HeatBathChain(const WeightedGraph& g, Model model, const BigRational& q, EdgeProbabilityMap p,
                             Conditioning cond)
    : n_(g.vertex_count()), edges_(g.edges()), model_(model), q_(q), p_(std::move(p)),
      seen_(n_, 0) {
  const int m = int(edges_.size());
  if (p_.size() != m) throw std::invalid_argument("probability map size does not match edge count");
  if (q_ <= 0) throw std::invalid_argument("q must be positive");
  q_at_least_one_ = q_ >= 1;
  cond.validate(m, p_);
  state_.in.assign(m, 0);
  std::vector<char> fixed(m, 0);
  for (int e : cond.forced_in) {
    state_.in[e] = 1;
    fixed[e] = 1;
  }
  for (int e : cond.forced_out) fixed[e] = 1;
  for (int e = 0; e < m; ++e) {
    if (!fixed[e]) free_.push_back(e);
  }
  // Thresholds are shared between edges with the same probability.
  std::map<BigRational, std::uint32_t> known;
  kind_.reserve(m);
  for (int e = 0; e < m; ++e) {
    const BigRational& pe = p_[e];
    auto [it, fresh] = known.try_emplace(pe, std::uint32_t(joined_.size()));
    if (fresh) {
      joined_.emplace_back(pe);
      if (model_ == Model::ErdosRenyi) {
        separate_.emplace_back(pe);
      } else {
        separate_.emplace_back(pe / (pe + q_ * (1 - pe)));
      }
    }
    kind_.push_back(it->second);
  }
  rebuild_present();
}

void HeatBathChain::set_state(ChainState s) {
  if (s.in.size() != edges_.size()) throw std::invalid_argument("state size does not match edge count");
  std::vector<char> is_free(edges_.size(), 0);
  for (int e : free_) is_free[e] = 1;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (!is_free[e] && s.in[e] != state_.in[e]) throw std::invalid_argument("state violates the conditioning");
  }
  state_ = std::move(s);
  rebuild_present();
}

void HeatBathChain::rebuild_present() {
  present_.assign(n_, {});
  slot_.assign(edges_.size(), {-1, -1});
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (state_.in[e]) link(int(e));
  }
}

void HeatBathChain::link(int e) {
  const int ends[2] = {edges_[e].u, edges_[e].v};
  for (int side = 0; side < 2; ++side) {
    slot_[e][side] = int(present_[ends[side]].size());
    present_[ends[side]].push_back(e);
  }
}

void HeatBathChain::unlink(int e) {
  const int ends[2] = {edges_[e].u, edges_[e].v};
  for (int side = 0; side < 2; ++side) {
    auto& list = present_[ends[side]];
    const int pos = slot_[e][side];
    const int last = list.back();
    list[pos] = last;
    slot_[last][edges_[last].u == ends[side] ? 0 : 1] = pos;
    list.pop_back();
    slot_[e][side] = -1;
  }
}

bool HeatBathChain::endpoints_connected(int e) const {
  const int target = edges_[e].v;
  const int source = edges_[e].u;
  if (++generation_ == 0) {
    std::fill(seen_.begin(), seen_.end(), 0);
    generation_ = 1;
  }
  stack_.clear();
  stack_.push_back(source);
  seen_[source] = generation_;
  while (!stack_.empty()) {
    int v = stack_.back();
    stack_.pop_back();
    for (int f : present_[v]) {
      if (f == e) continue;
      int w = edges_[f].u == v ? edges_[f].v : edges_[f].u;
      if (w == target) return true;
      if (seen_[w] != generation_) {
        seen_[w] = generation_;
        stack_.push_back(w);
      }
    }
  }
  return false;
}

void HeatBathChain::update(int e, ExactUniform& u) {
  const Threshold& a = joined_[kind_[e]];
  const Threshold& b = separate_[kind_[e]];
  bool include;
  if (model_ == Model::ErdosRenyi) {
    include = u.below(a);
  } else {
    // Resolve the draw against the smaller threshold first; connectivity is
    // only needed when U lands between the two.
    const Threshold& lo = q_at_least_one_ ? b : a;
    const Threshold& hi = q_at_least_one_ ? a : b;
    if (u.below(lo)) {
      include = true;
    } else if (!u.below(hi)) {
      include = false;
    } else {
      include = endpoints_connected(e) ? u.below(a) : u.below(b);
    }
  }
  if (bool(state_.in[e]) != include) {
    state_.in[e] = include;
    include ? link(e) : unlink(e);
  }
  ++state_.steps;
}

void HeatBathChain::step(Rng& rng) {
  if (free_.empty()) {
    ++state_.steps;
    return;
  }
  int e = free_[rng.below(free_.size())];
  ExactUniform u(rng);
  update(e, u);
}

ChainState heat_bath_step(const WeightedGraph& g, const ChainState& state, Model model, const BigRational& q,
                          const EdgeProbabilityMap& p, const Conditioning& cond, Rng& rng) {
  HeatBathChain chain(g, model, q, p, cond);
  chain.set_state(state);
  chain.step(rng);
  return chain.state();
}

namespace {

EdgeProbabilityMap divided(const EdgeProbabilityMap& p, const BigRational& q) {
  std::vector<BigRational> out;
  for (const auto& x : p.values()) out.push_back(x / q);
  return EdgeProbabilityMap(std::move(out));
}

HeatBathChain lower_chain(const WeightedGraph& g, CouplingKind kind, const BigRational& q,
                          const EdgeProbabilityMap& p, const Conditioning& cond) {
  if (q < 1) throw std::invalid_argument("monotone couplings require q >= 1");
  switch (kind) {
    case CouplingKind::ErOverRc:
    case CouplingKind::RcMonotoneP:
      return HeatBathChain(g, Model::RandomCluster, q, p, cond);
    case CouplingKind::RcOverErq:
      return HeatBathChain(g, Model::ErdosRenyi, q, divided(p, q), cond);
  }
  throw std::logic_error("unknown coupling kind");
}

HeatBathChain upper_chain(const WeightedGraph& g, CouplingKind kind, const BigRational& q,
                          const EdgeProbabilityMap& p, const EdgeProbabilityMap& p_upper,
                          const Conditioning& cond) {
  switch (kind) {
    case CouplingKind::ErOverRc:
      return HeatBathChain(g, Model::ErdosRenyi, q, p, cond);
    case CouplingKind::RcOverErq:
      return HeatBathChain(g, Model::RandomCluster, q, p, cond);
    case CouplingKind::RcMonotoneP:
      if (p_upper.size() != p.size()) throw std::invalid_argument("p' must cover every edge");
      for (int e = 0; e < p.size(); ++e) {
        if (p_upper[e] < p[e]) throw std::invalid_argument("RC-monotone-p requires p'(e) >= p(e)");
      }
      return HeatBathChain(g, Model::RandomCluster, q, p_upper, cond);
  }
  throw std::logic_error("unknown coupling kind");
}

}  // namespace

CoupledChain::CoupledChain(const WeightedGraph& g, CouplingKind kind, const BigRational& q,
                           const EdgeProbabilityMap& p, const EdgeProbabilityMap& p_upper, Conditioning cond)
    : lower_(lower_chain(g, kind, q, p, cond)), upper_(upper_chain(g, kind, q, p, p_upper, cond)) {}

void CoupledChain::set_state(const CoupledState& s) {
  lower_.set_state(s.lower);
  upper_.set_state(s.upper);
  if (!contained()) throw CouplingViolation("initial coupled state is not ordered");
}

bool CoupledChain::contained() const {
  const auto& lo = lower_.state().in;
  const auto& hi = upper_.state().in;
  for (std::size_t e = 0; e < lo.size(); ++e) {
    if (lo[e] && !hi[e]) return false;
  }
  return true;
}

void CoupledChain::step(Rng& rng) {
  const auto& free = lower_.free_edges();
  if (free.empty()) return;
  int e = free[rng.below(free.size())];
  ExactUniform u(rng);
  lower_.update(e, u);
  upper_.update(e, u);
  if (!contained()) {
    throw CouplingViolation("lower chain left the upper chain at step " + std::to_string(lower_.state().steps) +
                            " on edge " + std::to_string(e));
  }
}

CoupledState coupled_step(const WeightedGraph& g, const CoupledState& cs, CouplingKind kind, const BigRational& q,
                          const EdgeProbabilityMap& p, const EdgeProbabilityMap& p_upper, const Conditioning& cond,
                          Rng& rng) {
  CoupledChain chain(g, kind, q, p, p_upper, cond);
  chain.set_state(cs);
  chain.step(rng);
  return chain.state();
}

RedGreen red_green_split(const WeightedGraph& g, const std::vector<int>& subset, const BigRational& r, Rng& rng) {
  Threshold red(r);
  Components c = connected_components(g, subset);
  std::vector<char> is_red(g.vertex_count(), 0);
  RedGreen out;
  for (const auto& block : c.partition.blocks()) {
    if (!bernoulli(rng, red)) continue;
    for (int v : block) is_red[v] = 1;
  }
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (is_red[v]) out.red_vertices.push_back(v);
  }
  for (int e : subset) (is_red[g.edge(e).u] ? out.red_edges : out.green_edges).push_back(e);
  return out;
}

BicolourBounds bicolour_bounds(int nu, int s, int nu_max, const BigRational& pi_hat) {
  if (s < 1 || nu < s || nu_max > nu || nu_max < 0) throw std::invalid_argument("bicolour_bounds needs 1 <= s <= nu, nu_max <= nu");
  if (pi_hat < 0 || pi_hat > 1) throw std::invalid_argument("pi_hat outside [0,1]");
  BicolourBounds out;
  BigRational miss = 1 - pi_hat;
  BigRational hit = 1 - pow(miss, nu_max);
  out.some_bicolour_upper = nu * hit * hit;

  // [y (2 - y)]^s = [1 - (1 - y)^2]^s with y = miss^(nu/s), increasing in y.
  const mpfr_prec_t bits = 256;
  Real y(bits);
  if (miss == 0) {
    mpfr_set_zero(y.get(), 1);
  } else {
    Real base(miss, bits, MPFR_RNDU);
    // base <= 1, so rounding the exponent down keeps an upper bound.
    Real expo(BigRational(nu) / s, bits, MPFR_RNDD);
    mpfr_pow(y.get(), base.get(), expo.get(), MPFR_RNDU);
  }
  if (mpfr_cmp_ui(y.get(), 1) > 0) mpfr_set_ui(y.get(), 1, MPFR_RNDN);
  Real t(bits);
  mpfr_ui_sub(t.get(), 1, y.get(), MPFR_RNDD);
  mpfr_sqr(t.get(), t.get(), MPFR_RNDD);
  mpfr_ui_sub(t.get(), 1, t.get(), MPFR_RNDU);
  mpfr_pow_ui(t.get(), t.get(), (unsigned long)s, MPFR_RNDU);
  out.no_bicolour_upper = t.exact();
  return out;
}

ChainState sample_rc(const WeightedGraph& g, Model model, const BigRational& q, const EdgeProbabilityMap& p,
                     const Conditioning& cond, std::uint64_t sweeps, Seed seed, const SweepObserver& observer) {
  if (sweeps < 1) throw std::invalid_argument("sweeps must be at least 1");
  HeatBathChain chain(g, model, q, p, cond);
  Rng rng(seed);
  const std::uint64_t m = std::max(1, g.edge_count());
  for (std::uint64_t sweep = 1; sweep <= sweeps; ++sweep) {
    for (std::uint64_t i = 0; i < m; ++i) chain.step(rng);
    if (observer) observer(sweep, chain);
  }
  return chain.state();
}

}  // namespace pottsforge
