#include <doctest.h>

#include <chrono>
#include <random>

#include "pottsforge/errors.hpp"
#include "pottsforge/exact_eval.hpp"
#include "pottsforge/gadget.hpp"
#include "pottsforge/gadget_oracles.hpp"

using namespace pottsforge;

namespace {

BigRational rat(long a, long b) {
  BigRational r(a, b);
  r.canonicalize();
  return r;
}

}  // namespace

TEST_CASE("phase constants") {
  auto pc3 = phase_constants(3);
  CHECK(std::abs(pc3.lambda_c.to_double() - 4 * std::log(2.0)) < 1e-12);
  CHECK(std::abs(pc3.lambda_c.to_double() - 2.772589) < 1e-6);
  CHECK(std::abs(pc3.lambda.to_double() - 2.886294) < 1e-6);
  CHECK(pc3.theta == rat(1, 2));
  CHECK(pc3.lambda_c_bounds.lo < pc3.lambda_c_bounds.hi);
  auto pc4 = phase_constants(4);
  CHECK(std::abs(pc4.lambda_c.to_double() - 3.295837) < 1e-6);
  CHECK(pc4.theta == rat(2, 3));
  for (const char* q : {"2.1", "2.5", "3", "5", "10", "100"}) {
    auto pc = phase_constants(parse_rational(q));
    CHECK(pc.lambda_c_bounds.hi < pc.q);
    CHECK(pc.lambda_bounds.hi < pc.q);
    CHECK(pc.theta > 0);
    CHECK(pc.theta < 1);
  }
  CHECK_THROWS_AS(phase_constants(2), std::invalid_argument);
}

TEST_CASE("build_gadget") {
  bool exact = false;
  CHECK(cross_probability(16, &exact) == rat(1, 8));
  CHECK(exact);
  CHECK(cross_probability(81, &exact) == rat(1, 27));
  BigRational c4 = cross_probability(4, &exact);
  CHECK_FALSE(exact);
  CHECK(std::abs(to_double(c4) - std::pow(4.0, -0.75)) < 1e-15);

  GadgetOptions half;
  half.cross_probability = rat(1, 2);
  auto one = build_gadget(1, 1, 0, half);
  auto g1 = one.variant();
  CHECK(g1.edge_count() == 1);
  CHECK(g1.weight(0) == one.gamma_cross());
  CHECK_THROWS_AS(build_gadget(1, 1, 0), std::invalid_argument);

  auto spec = build_gadget(3, 2, rat(1, 5));
  auto g = spec.variant();
  CHECK(g.vertex_count() == 5);
  CHECK(g.edge_count() == 9);
  for (int e = 0; e < 3; ++e) CHECK(g.weight(e) == rat(1, 4));
  for (int e = 3; e < 9; ++e) CHECK(g.weight(e) == spec.gamma_cross());
  std::vector<BigRational> p;
  CHECK(spec.full(&p).edge_count() == 10);
  CHECK(p.back() == 1);
  CHECK_THROWS(build_gadget(3, 2, 1));

  // Weights within [|V|^-3, 1] across the tuning range at N = 16, q = 3.
  auto pc = phase_constants(3);
  const int N = 16, t = 2;
  const BigRational v3 = BigRational(1) / BigRational((N + t) * (N + t) * (N + t));
  for (BigRational rho : std::vector<BigRational>{BigRational(1) / (N * N * N), pc.lambda_bounds.lo / N}) {
    auto s = build_gadget(N, t, rho);
    CHECK(s.gamma_clique() >= v3);
    CHECK(s.gamma_clique() <= 1);
    CHECK(s.gamma_cross() >= v3);
    CHECK(s.gamma_cross() <= 1);
  }
}

TEST_CASE("dp boundary rows and tiny cases") {
  auto table = dp_weights(2, 3, rat(1, 3), rat(2, 5));
  CHECK(table.at(2, 0, 2, 0) == 1);
  CHECK(table.at(2, 0, 1, 0) == 0);
  CHECK(table.at(0, 0, 0, 0) == 1);
  CHECK(table.at(0, 2, 0, 0) == 0);
  CHECK(table.at(1, 2, 0, 1) == 0);
  CHECK(table.at(0, 2, 1, 0) == 0);
  CHECK(table.at(2, 3, -1, 0) == 0);
  CHECK(table.at(2, 3, 1, -1) == 0);

  BigRational gpp = rat(3, 7);
  auto t11 = dp_weights(1, 1, rat(1, 2), gpp);
  CHECK(t11.at(1, 1, 1, 1) == 1);
  CHECK(t11.at(1, 1, 1, 0) == gpp);
  CHECK(z_k(t11, 5).z[1] == gpp + 5);
  CHECK(t11.to_csv().rfind("t,N,k,l,w\n", 0) == 0);
}

TEST_CASE("dp matches subset census for small gadgets") {
  std::mt19937_64 gen(6);
  for (int t = 0; t <= 3; ++t) {
    for (int N = 0; N <= 4; ++N) {
      auto census = gadget_subset_census(t, N);
      for (int trial = 0; trial < 3; ++trial) {
        BigRational gp = rat(long(1 + gen() % 9), long(1 + gen() % 9));
        BigRational gpp = rat(long(1 + gen() % 9), long(1 + gen() % 9));
        auto table = dp_weights(t, N, gp, gpp);
        for (int k = 0; k <= t; ++k) {
          for (int l = 0; l <= N; ++l) CHECK(table.at(t, N, k, l) == census_weight(census, k, l, gp, gpp));
        }
      }
    }
  }
}

TEST_CASE("Z^k/Z equals the law of Y under RC(Gamma)") {
  for (int N : {2, 3}) {
    for (int t : {1, 2, 3}) {
      for (BigRational rho : {rat(1, 8), rat(1, 3)}) {
        auto spec = build_gadget(N, t, rho);
        BigRational q = rat(5, 2);
        auto summary = z_k(dp_weights(t, N, spec.gamma_clique(), spec.gamma_cross()), q);
        auto law = exact_y_distribution(spec, q);
        BigRational sum = 0;
        for (int k = 0; k <= t; ++k) {
          CHECK(summary.z[k] / summary.total == law[k]);
          sum += law[k];
        }
        CHECK(sum == 1);
        CHECK(summary.psi * summary.zeta == 1);
      }
    }
  }
  GadgetOptions over;
  over.cross_probability = rat(1, 2);
  auto spec = build_gadget(1, 1, 0, over);
  CHECK(exact_y_distribution(spec, 3)[1] == 1);
}

TEST_CASE("interpolated polynomial agrees with the DP") {
  const int t = 2, N = 5;
  BigRational gpp = cross_probability(N) / (1 - cross_probability(N));
  GadgetPolynomial poly(t, N, gpp, 3);
  CHECK(poly.degree() == 10);
  for (BigRational rho : {rat(1, 125), rat(3, 17), rat(1, 2)}) {
    auto s = z_k(dp_weights(t, N, rho / (1 - rho), gpp), 3);
    CHECK(poly.z(1, rho / (1 - rho)) == s.z[1]);
    CHECK(poly.z(2, rho / (1 - rho)) == s.z[2]);
    CHECK(poly.psi(rho) == s.psi);
  }
}

TEST_CASE("rho grid") {
  const int N = 16, t = 2;
  BigRational delta = tuner_delta(N, t, 1);
  CHECK(delta == rat(1, 16 * (18 + 120 + 32)));
  RhoGrid grid(N, 3, delta);
  REQUIRE(grid.size() > 1);
  CHECK(grid.at(0) == rat(1, 4096));
  CHECK(grid.at(grid.size() - 1) <= grid.upper());
  CHECK(grid.at(grid.size()) > grid.upper());
  for (std::uint64_t mu = 1; mu < 50; ++mu) {
    BigRational ratio = grid.at(mu) / grid.at(mu - 1);
    CHECK(ratio > 1);
    CHECK(std::abs(to_double(ratio) - (1 + to_double(delta))) < 1e-12);
  }
}

TEST_CASE("compare_with_exp") {
  CHECK(compare_with_exp(rat(2718281, 1000000), 1) == -1);
  CHECK(compare_with_exp(rat(2718282, 1000000), 1) == 1);
  CHECK(compare_with_exp(1, 0) == 0);
  CHECK(compare_with_exp(rat(6, 10), rat(-1, 2)) == -1);
}

TEST_CASE("tuner: bisection agrees with the linear scan") {
  TuneOptions lin;
  lin.search = TuneOptions::Search::Linear;
  lin.require_fourth_power = false;
  TuneOptions bis = lin;
  bis.search = TuneOptions::Search::Bisection;
  for (BigRational gamma : {rat(1, 2), BigRational(1), BigRational(2)}) {
    auto a = tune_rho(4, 2, 3, gamma, 2, lin);
    auto b = tune_rho(4, 2, 3, gamma, 2, bis);
    CHECK(a.found == b.found);
    if (a.found) {
      CHECK(a.rho_hat == b.rho_hat);
      CHECK(compare_with_exp(a.zeta_hat / gamma, -1) >= 0);
      CHECK(compare_with_exp(a.zeta_hat / gamma, 1) <= 0);
    }
  }
  auto none = tune_rho(4, 2, 3, BigRational(1000000), 2, bis);
  CHECK_FALSE(none.found);
  CHECK(none.zeta_max < BigRational(1000000));
  CHECK_THROWS(tune_rho(5, 2, 3, 1, 1));
}
