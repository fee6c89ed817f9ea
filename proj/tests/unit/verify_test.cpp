#include <doctest.h>

#include "pottsforge/verify.hpp"

using namespace pottsforge;

namespace {

void expect_clean(const CheckReport& r) {
  INFO(r.name << ": " << (r.notes.empty() ? std::string() : r.notes.front()));
  CHECK(r.cases > 0);
  CHECK(r.ok());
  CHECK_FALSE(r.skipped);
}

}  // namespace

TEST_CASE("exhaustive checks at small size") {
  expect_clean(verify_fk(3, 2, {1, 2}, {2, 3}));
  expect_clean(verify_dp(2, 3, 3));
  expect_clean(verify_wiring(2, 3));
  expect_clean(verify_red_subgraph_law(3, {BigRational(1, 2)}, {2}, {BigRational(1, 3)}));
  expect_clean(verify_apex_identity(4, {1}));
  expect_clean(verify_decomposition(2, {BigRational(1, 3)}, {3}));
  expect_clean(verify_series_parallel(15));
  expect_clean(verify_ising3(4, 2, {3}));
  expect_clean(verify_implement(5));
}

TEST_CASE("randomized checks at small size") {
  expect_clean(verify_coupling(3, 6, 2000));
  auto st = verify_stationarity(20000, 4);
  expect_clean(st);
  CHECK(st.notes.size() == 4);
}

TEST_CASE("fk count matches multiset enumeration") {
  // n = 1: one subset, multisets of size <= 2 -> 3; n = 2: three subsets -> 1 + 3 + 6.
  auto r = verify_fk(2, 2, {1}, {2});
  CHECK(r.cases == 3 + 10);
}

TEST_CASE("tuner cases") {
  auto r = verify_tuner({{3, 1, 16, 2}, {3, 5, 16, 2}});
  expect_clean(r);
  REQUIRE(r.notes.size() == 2);
  CHECK(r.notes[0].find("sandwich holds") != std::string::npos);
  CHECK(r.notes[1].find("no crossing") != std::string::npos);
}

TEST_CASE("instance checks") {
  auto b = BipartiteGraph(2, 2, {{0, 0}, {1, 0}, {1, 1}});
  auto reports = verify_instance(b, 3, 2);
  CHECK(reports.size() == 3);
  for (const auto& r : reports) expect_clean(r);

  auto g = WeightedGraph::uniform(3, {{0, 1}, {1, 2}}, 2);
  reports = verify_instance(g, 3, 2);
  CHECK(reports.size() == 2);
  for (const auto& r : reports) expect_clean(r);

  auto h = WeightedHypergraph::uniform(4, {{0, 1, 2}, {1, 2, 3}}, 3);
  reports = verify_instance(h, 2, 1);
  CHECK(reports.size() == 2);
  for (const auto& r : reports) expect_clean(r);

  std::vector<Edge> edges;
  for (int i = 0; i + 1 < 40; ++i) edges.push_back({i, i + 1});
  for (int i = 0; i + 2 < 40; ++i) edges.push_back({i, i + 2});
  reports = verify_instance(WeightedGraph::uniform(40, edges, 1), 3, 2);
  CHECK(reports.front().skipped);
}

TEST_CASE("phase sweep") {
  PhaseOptions opts;
  opts.N = 30;
  opts.sweeps = 40;
  opts.lambdas = {2.0, 8.0};
  auto rows = phase_sweep(opts);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].start == "disordered");
  CHECK(rows[1].start == "ordered");
  for (const auto& r : rows) {
    CHECK(r.largest_fraction > 0);
    CHECK(r.largest_fraction <= 1);
  }
  opts.jobs = 3;
  auto again = phase_sweep(opts);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(again[i].mean_last_sweeps == rows[i].mean_last_sweeps);
  auto csv = phase_csv(rows);
  CHECK(csv.rfind("lambda,start,largest_fraction,mean_last_quarter\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}

TEST_CASE("graph classes") {
  // Connected graphs: 1 edge: K2; 2: P3; 3: K3, P4, K1,3; 4: C4, P5, K1,4, paw, fork.
  auto conn = connected_graph_classes(4);
  CHECK(conn.size() == 1 + 1 + 3 + 5);
  // Graphs without isolated vertices and at most 2 edges: K2, P3, 2K2.
  CHECK(graph_classes(2).size() == 3);
  CHECK(graph_classes(2, 1).size() == 1 + 3 * 2);
  auto all = graph_classes(4);
  auto largest = std::max_element(all.begin(), all.end(), [](auto& a, auto& b) { return a.n < b.n; });
  CHECK(largest->n == 8);
}
