#pragma once

#include <map>
#include <tuple>
#include <vector>

#include "pottsforge/exact_eval.hpp"
#include "pottsforge/gadget.hpp"

namespace pottsforge {

/// Pr(Y(A) = k) for A ~ RC(Gamma; q, p), k = 0..t, straight from the
/// random-cluster definition: every subset of Gamma's edges (T^(2)
/// included) is enumerated and weighted by q^kappa prod p prod (1-p).
std::vector<BigRational> exact_y_distribution(const GadgetSpec& spec, const BigRational& q,
                                              const EvalLimits& limits = EvalLimits::from_env());

/// Brute-force census of Gamma'_{N,t}: number of edge subsets with k
/// terminal components, l other components, x clique edges and y
/// clique-terminal edges, keyed (k, l, x, y).
using GadgetCensus = std::map<std::tuple<int, int, int, int>, BigInt>;
GadgetCensus gadget_subset_census(int t, int N, const EvalLimits& limits = EvalLimits::from_env());

/// sum over the census of count * gamma'^x gamma''^y for each (k, l).
BigRational census_weight(const GadgetCensus& census, int k, int l, const BigRational& gamma_prime,
                          const BigRational& gamma_dblprime);

}  // namespace pottsforge
