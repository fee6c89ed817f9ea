#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pottsforge/graph.hpp"
#include "pottsforge/rational.hpp"
#include "pottsforge/real.hpp"

namespace pottsforge {

/// lambda_c = 2 ((q-1)/(q-2)) ln(q-1), delta = (q - lambda_c)/2,
/// lambda = lambda_c + delta, theta = (q-2)/(q-1).
struct PhaseConstants {
  BigRational q;
  Real lambda_c;
  Real delta;
  Real lambda;
  BigRational theta;
  // Rigorous rational enclosures of the irrational constants.
  RationalInterval lambda_c_bounds;
  RationalInterval lambda_bounds;
};

PhaseConstants phase_constants(const BigRational& q, mpfr_prec_t bits = 128);

/// N^(-3/4). Exact when N is a fourth power; otherwise a rational within
/// relative distance 2^-64 and `exact` is set to false.
BigRational cross_probability(int N, bool* exact = nullptr);

/// Two-clique gadget: clique K = {0..N-1}, terminals T = {N..N+t-1}.
/// p = rho on K^(2), cross probability on K x T, 1 on T^(2).
struct GadgetSpec {
  int N = 0;
  int t = 0;
  BigRational rho;
  BigRational cross;        // p on K x T
  bool cross_exact = true;  // cross == N^(-3/4) exactly

  int vertex_count() const { return N + t; }
  int terminal(int i) const { return N + i; }
  int clique_edge_count() const { return N * (N - 1) / 2; }
  int cross_edge_count() const { return N * t; }
  int terminal_edge_count() const { return t * (t - 1) / 2; }

  BigRational gamma_clique() const;  // gamma' = rho / (1 - rho)
  BigRational gamma_cross() const;   // gamma'' = cross / (1 - cross)

  /// Gamma' (no T^(2) edges) with gamma_e = p/(1-p). K^(2) edges come
  /// first in lexicographic order, then K x T ordered by clique vertex.
  WeightedGraph variant() const;

  /// Gamma with every edge (K^(2), K x T, T^(2), in that order) and its
  /// edge probabilities.
  WeightedGraph full(std::vector<BigRational>* probabilities) const;
};

struct GadgetOptions {
  /// Replaces N^(-3/4) on K x T.
  std::optional<BigRational> cross_probability;
};

GadgetSpec build_gadget(int N, int t, const BigRational& rho, const GadgetOptions& options = {});

/// w(t', N', k, l) for 0 <= t' <= t, 0 <= N' <= N: total weight of edge
/// subsets of Gamma'_{N',t'} with k terminal components and l others.
/// Held as integers W = w * b^C(N',2) * d^(N' t') where gamma' = a/b and
/// gamma'' = c/d.
class DpTable {
 public:
  DpTable(int t, int N, BigRational gamma_prime, BigRational gamma_dblprime);

  int t() const { return t_; }
  int N() const { return N_; }
  const BigRational& gamma_prime() const { return gp_; }
  const BigRational& gamma_dblprime() const { return gpp_; }

  /// Zero outside the stored range (including k or l equal to -1).
  BigRational at(int tp, int Np, int k, int l) const;
  const BigInt& scaled(int tp, int Np, int k, int l) const;
  BigInt scale(int tp, int Np) const;

  /// Rows "t,N,k,l,w" for every stored entry.
  std::string to_csv() const;

 private:
  std::size_t index(int tp, int Np, int k, int l) const;
  BigInt& cell(int tp, int Np, int k, int l) { return w_[index(tp, Np, k, l)]; }

  int t_, N_;
  BigRational gp_, gpp_;
  BigInt a_, b_, c_, d_;
  std::vector<BigInt> w_;
  static const BigInt zero_;
};

DpTable dp_weights(int t, int N, const BigRational& gamma_prime, const BigRational& gamma_dblprime);

struct GadgetSummary {
  std::vector<BigRational> z;  // z[k] = Z^k for k = 0..t
  BigRational total;           // sum_k Z^k
  BigRational psi;             // Z^t / Z^1
  BigRational zeta;            // Z^1 / Z^t
};

/// Z^k = sum_l w(t, N, k, l) q^l.
GadgetSummary z_k(const DpTable& table, const BigRational& q_hat);

/// Z^k of Gamma'_{N,t} as exact polynomials in gamma' (degree <= C(N,2)),
/// with gamma'' and q fixed. Built by interpolating the DP at integer
/// nodes; intended for sweeping many rho values at small N.
class GadgetPolynomial {
 public:
  GadgetPolynomial(int t, int N, const BigRational& gamma_dblprime, const BigRational& q);

  int degree() const { return degree_; }
  /// Coefficients of Z^k, lowest degree first.
  const std::vector<BigRational>& coefficients(int k) const { return coeff_.at(k); }
  BigRational z(int k, const BigRational& gamma_prime) const;
  BigRational psi(const BigRational& rho) const;

 private:
  int t_, degree_;
  std::vector<std::vector<BigRational>> coeff_;
  std::vector<std::vector<BigInt>> integral_;  // coeff_ scaled by denom_[k]
  std::vector<BigInt> denom_;
};

/// rho_mu = N^-3 (1 + delta)^mu for mu = 0..size()-1, each rounded to
/// `grid_bits` significant bits (rho_0 exact), restricted to
/// rho_mu <= lambda/N (lambda rounded down) and rho_mu < 1.
class RhoGrid {
 public:
  RhoGrid(int N, const BigRational& q, const BigRational& delta, int grid_bits = 64);

  std::uint64_t size() const { return size_; }
  BigRational at(std::uint64_t mu) const;
  const BigRational& delta() const { return delta_; }
  const BigRational& upper() const { return upper_; }

 private:
  int N_;
  BigRational delta_;
  BigRational upper_;
  int grid_bits_;
  std::uint64_t size_ = 0;
};

/// delta = chi / (16 (n + m)) for Gamma' with n = N + t, m = C(N,2) + N t.
BigRational tuner_delta(int N, int t, const BigRational& chi);

/// Sign of x - e^y, decided with rigorous enclosures at increasing precision.
int compare_with_exp(const BigRational& x, const BigRational& y);

struct TuneOptions {
  enum class Search { Bisection, Linear };
  Search search = Search::Bisection;
  BigRational n0 = 0;  // refuse N < n0
  bool require_fourth_power = true;
  int grid_bits = 64;
  GadgetOptions gadget;
};

struct TuneResult {
  bool found = false;
  BigRational rho_hat;
  BigRational zeta_hat;  // exact Z^1 / Z^t at rho_hat
  std::uint64_t mu = 0;
  BigRational delta;
  std::uint64_t grid_size = 0;
  std::uint64_t evaluations = 0;
  BigRational rho_min, rho_max;    // grid endpoints
  BigRational zeta_min, zeta_max;  // exact zeta at the endpoints
  std::string report;              // explanation when !found
};

/// Finds the first grid rho with e^(-chi/2) gamma <= zeta(rho) <= e^(chi/2) gamma,
/// zeta evaluated exactly with the DP. zeta increases with rho, so the
/// bisection and linear searches agree.
TuneResult tune_rho(int N, int t, const BigRational& q, const BigRational& gamma, const BigRational& chi,
                    const TuneOptions& options = {});

}  // namespace pottsforge
