// pottsforge command-line tool.
//
// Exit codes: 0 success, 1 usage or input error, 2 oracle cap exceeded or no
// tuner crossing, 3 a verification check failed.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pottsforge/errors.hpp"
#include "pottsforge/exact_eval.hpp"
#include "pottsforge/gadget.hpp"
#include "pottsforge/random_cluster.hpp"
#include "pottsforge/reductions.hpp"
#include "pottsforge/text_format.hpp"
#include "pottsforge/union_find.hpp"
#include "pottsforge/verify.hpp"

using namespace pottsforge;
using json = nlohmann::ordered_json;

namespace {

constexpr int kUsage = 1;
constexpr int kCap = 2;
constexpr int kCheckFailed = 3;

struct Globals {
  bool json = false;
  bool timing = false;
  int jobs = 1;
  int digits = 12;
};

std::string exact(const BigRational& x) {
  return is_integer(x) ? x.get_num().get_str() : to_fraction_string(x);
}

std::string decimal(const BigRational& x, int digits) { return to_decimal_string(x, digits); }

json rational_json(const BigRational& x, int digits) {
  return {{"num", x.get_num().get_str()}, {"den", x.get_den().get_str()}, {"decimal", decimal(x, digits)}};
}

std::string render(const BigRational& x, int digits) { return exact(x) + " (" + decimal(x, digits) + ")"; }

BigRational rat(const std::string& text) { return parse_rational(text); }

std::vector<int> parse_id_list(const std::string& text) {
  std::vector<int> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    int v = std::stoi(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad edge id '" + item + "'");
    out.push_back(v);
  }
  return out;
}

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void finish(json& report, const Globals& g, const Stopwatch& clock) {
  if (g.timing) report["seconds"] = clock.seconds();
  std::cout << report.dump(2) << "\n";
}

WeightedGraph as_graph(const Instance& inst, const std::string& what) {
  if (const auto* g = std::get_if<WeightedGraph>(&inst)) return *g;
  throw std::invalid_argument(what + " needs a graph instance");
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string file;
  std::string q = "2";
  std::string mu;
  std::string method = "auto";
};

int run_eval(const EvalArgs& a, const Globals& g) {
  Stopwatch clock;
  const Instance inst = read_instance_file(a.file);
  const BigRational q = rat(a.q);
  BigRational value;
  std::string what;
  if (const auto* graph = std::get_if<WeightedGraph>(&inst)) {
    std::string method = a.method;
    if (method == "auto") method = graph->edge_count() <= EvalLimits::from_env().log2_cap ? "enumerate" : "frontier";
    if (method == "enumerate") {
      value = tutte_graph(*graph, q);
    } else if (method == "frontier") {
      value = tutte_frontier(*graph, q);
    } else if (method == "potts") {
      value = potts(WeightedHypergraph::from_graph(*graph), q);
    } else {
      throw std::invalid_argument("unknown method '" + a.method + "' for a graph");
    }
    what = method == "potts" ? "Z_Potts" : "Z_Tutte";
  } else if (const auto* h = std::get_if<WeightedHypergraph>(&inst)) {
    if (a.method == "potts") {
      value = potts(*h, q);
      what = "Z_Potts";
    } else if (a.method == "auto" || a.method == "enumerate") {
      value = tutte_hypergraph(*h, q);
      what = "Z_Tutte";
    } else {
      throw std::invalid_argument("unknown method '" + a.method + "' for a hypergraph");
    }
  } else {
    if (a.mu.empty()) throw std::invalid_argument("bipartite instances need --mu");
    value = independent_set_polynomial(std::get<BipartiteGraph>(inst), rat(a.mu));
    what = "Z_IS";
  }
  if (g.json) {
    json report = {{"subcommand", "eval"}, {"inputs", {{"file", a.file}, {"q", exact(q)}, {"method", a.method}}}};
    if (!a.mu.empty()) report["inputs"]["mu"] = exact(rat(a.mu));
    report["quantity"] = what;
    report["value_num"] = value.get_num().get_str();
    report["value_den"] = value.get_den().get_str();
    report["value_decimal"] = decimal(value, g.digits);
    finish(report, g, clock);
  } else {
    std::cout << exact(value) << "\n" << decimal(value, g.digits) << "\n";
    if (g.timing) std::cerr << clock.seconds() << " s\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// sample

struct SampleArgs {
  std::string file;
  std::string model = "rc";
  std::string q = "2";
  std::string p;  // uniform p; otherwise p = gamma / (1 + gamma) per edge
  std::uint64_t sweeps = 100;
  std::uint64_t seed = 1;
  std::string force_in, force_out;
  std::string trace;
  int chains = 1;
};

json summarize(const WeightedGraph& graph, const ChainState& s) {
  UnionFind uf(graph.vertex_count());
  for (int e = 0; e < graph.edge_count(); ++e) {
    if (s.in[e]) uf.unite(graph.edge(e).u, graph.edge(e).v);
  }
  std::map<int, int> size;
  for (int v = 0; v < graph.vertex_count(); ++v) ++size[uf.find(v)];
  std::vector<int> sizes;
  for (const auto& [root, n] : size) sizes.push_back(n);
  std::sort(sizes.rbegin(), sizes.rend());
  return {{"edges", s.edges()}, {"edge_count", s.edge_count()}, {"component_sizes", sizes}, {"steps", s.steps}};
}

int largest_component(const HeatBathChain& chain) {
  UnionFind uf(chain.vertex_count());
  const auto& in = chain.state().in;
  for (int e = 0; e < chain.edge_count(); ++e) {
    if (in[e]) uf.unite(chain.edges()[e].u, chain.edges()[e].v);
  }
  std::vector<int> size(chain.vertex_count(), 0);
  int best = 0;
  for (int v = 0; v < chain.vertex_count(); ++v) best = std::max(best, ++size[uf.find(v)]);
  return best;
}

int run_sample(const SampleArgs& a, const Globals& g) {
  Stopwatch clock;
  const WeightedGraph graph = as_graph(read_instance_file(a.file), "sample");
  Model model;
  if (a.model == "rc") {
    model = Model::RandomCluster;
  } else if (a.model == "er") {
    model = Model::ErdosRenyi;
  } else {
    throw std::invalid_argument("--model must be rc or er");
  }
  const BigRational q = rat(a.q);
  const auto p = a.p.empty() ? EdgeProbabilityMap::from_weights(graph.weights())
                             : EdgeProbabilityMap::uniform(graph.edge_count(), rat(a.p));
  Conditioning cond{parse_id_list(a.force_in), parse_id_list(a.force_out)};
  if (!a.trace.empty() && a.trace != "csv") throw std::invalid_argument("--trace only supports csv");
  if (a.chains < 1) throw std::invalid_argument("--chains must be positive");
  if (!a.trace.empty() && a.chains != 1) throw std::invalid_argument("--trace needs a single chain");

  std::vector<ChainState> finals(a.chains);
  std::vector<std::vector<int>> traces(a.chains);
  auto run_chain = [&](int i) {
    const Seed seed = a.chains == 1 ? Seed{a.seed} : derive_seed(Seed{a.seed}, std::uint64_t(i));
    SweepObserver observer;
    if (!a.trace.empty()) {
      observer = [&](std::uint64_t, const HeatBathChain& chain) { traces[i].push_back(largest_component(chain)); };
    }
    finals[i] = sample_rc(graph, model, q, p, cond, a.sweeps, seed, observer);
  };
  const int jobs = std::max(1, std::min(g.jobs, a.chains));
  if (jobs == 1) {
    for (int i = 0; i < a.chains; ++i) run_chain(i);
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) {
      pool.emplace_back([&, j] {
        for (int i = j; i < a.chains; i += jobs) run_chain(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  json report = {{"subcommand", "sample"},
                 {"inputs",
                  {{"file", a.file},
                   {"model", a.model},
                   {"q", exact(q)},
                   {"p", a.p.empty() ? "from weights" : exact(rat(a.p))},
                   {"sweeps", a.sweeps},
                   {"seed", a.seed},
                   {"force_in", cond.forced_in},
                   {"force_out", cond.forced_out}}}};
  if (a.chains == 1) {
    report["result"] = summarize(graph, finals[0]);
  } else {
    report["chains"] = json::array();
    for (int i = 0; i < a.chains; ++i) report["chains"].push_back(summarize(graph, finals[i]));
  }
  if (!a.trace.empty()) {
    std::cout << "sweep,largest_component\n";
    for (std::size_t s = 0; s < traces[0].size(); ++s) std::cout << s + 1 << "," << traces[0][s] << "\n";
    if (g.timing) report["seconds"] = clock.seconds();
    std::cerr << report.dump(2) << "\n";
  } else {
    finish(report, g, clock);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// tune

struct TuneArgs {
  int N = 16;
  int t = 2;
  std::string q = "3";
  std::string gamma = "1";
  std::string chi = "1/2";
  bool linear = false;
  bool any_N = false;
  std::string n0 = "0";
};

int run_tune(const TuneArgs& a, const Globals& g) {
  Stopwatch clock;
  TuneOptions opts;
  opts.search = a.linear ? TuneOptions::Search::Linear : TuneOptions::Search::Bisection;
  opts.require_fourth_power = !a.any_N;
  opts.n0 = rat(a.n0);
  const BigRational q = rat(a.q), gamma = rat(a.gamma), chi = rat(a.chi);
  const auto res = tune_rho(a.N, a.t, q, gamma, chi, opts);
  json report = {{"subcommand", "tune"},
                 {"inputs", {{"N", a.N}, {"t", a.t}, {"q", exact(q)}, {"gamma", exact(gamma)}, {"chi", exact(chi)}}},
                 {"found", res.found},
                 {"grid_size", res.grid_size},
                 {"evaluations", res.evaluations},
                 {"delta", exact(res.delta)},
                 {"zeta_min", rational_json(res.zeta_min, g.digits)},
                 {"zeta_max", rational_json(res.zeta_max, g.digits)}};
  if (res.found) {
    report["mu"] = res.mu;
    report["rho_hat"] = rational_json(res.rho_hat, g.digits);
    report["zeta_hat"] = rational_json(res.zeta_hat, g.digits);
  } else {
    report["report"] = res.report;
  }
  if (g.json) {
    finish(report, g, clock);
  } else if (res.found) {
    std::cout << "rho_hat = " << render(res.rho_hat, g.digits) << "\n"
              << "zeta    = " << decimal(res.zeta_hat, g.digits) << "\n"
              << "grid index " << res.mu << " of " << res.grid_size << ", " << res.evaluations << " DP evaluations\n";
  } else {
    std::cout << "no crossing: " << res.report << "\n"
              << "zeta at rho_min = " << decimal(res.zeta_min, g.digits) << "\n"
              << "zeta at rho_max = " << decimal(res.zeta_max, g.digits) << "\n";
  }
  return res.found ? 0 : kCap;
}

// ---------------------------------------------------------------------------
// gadget dump-dp

struct DumpArgs {
  int N = 4;
  int t = 2;
  std::string rho;
  std::string gamma_prime, gamma_dblprime;
  std::string cross;
};

int run_dump_dp(const DumpArgs& a, const Globals&) {
  BigRational gp, gpp;
  if (!a.rho.empty()) {
    GadgetOptions opts;
    if (!a.cross.empty()) opts.cross_probability = rat(a.cross);
    const auto spec = build_gadget(a.N, a.t, rat(a.rho), opts);
    gp = spec.gamma_clique();
    gpp = spec.gamma_cross();
  } else if (!a.gamma_prime.empty() && !a.gamma_dblprime.empty()) {
    gp = rat(a.gamma_prime);
    gpp = rat(a.gamma_dblprime);
  } else {
    throw std::invalid_argument("give --rho, or both --gamma-prime and --gamma-dblprime");
  }
  std::cout << dp_weights(a.t, a.N, gp, gpp).to_csv();
  return 0;
}

// ---------------------------------------------------------------------------
// reduce

struct ReduceArgs {
  std::string file;
  std::string from = "bis";
  std::string to = "tutte";
  std::string q = "3";
  std::string gamma = "1";
  std::string eps = "1";
  int force_N = 0;
  std::string out_dir = "reduce_out";
  bool no_edge_budget = false;
  bool check = false;
};

json trace_json(const ReductionTrace& t, const std::string& file, int digits) {
  json params = json::object();
  for (const auto& [k, v] : t.params) params[k] = v;
  return {{"stage", t.stage},
          {"scale_num", t.scale_factor.get_num().get_str()},
          {"scale_den", t.scale_factor.get_den().get_str()},
          {"scale_decimal", decimal(t.scale_factor, digits)},
          {"eps_used", exact(t.error_budget)},
          {"warnings", t.warnings},
          {"params", params},
          {"file", file}};
}

int run_reduce(const ReduceArgs& a, const Globals& g) {
  Stopwatch clock;
  if (a.to != "tutte") throw std::invalid_argument("--to must be tutte");
  const Instance inst = read_instance_file(a.file);
  std::filesystem::create_directories(a.out_dir);
  json report = {{"subcommand", "reduce"},
                 {"inputs", {{"file", a.file}, {"from", a.from}, {"to", a.to}, {"q", a.q}, {"gamma", a.gamma}}}};
  json trace = json::array();

  if (a.from == "hyper3") {
    const auto* h = std::get_if<WeightedHypergraph>(&inst);
    if (!h) throw std::invalid_argument("--from hyper3 needs a hypergraph instance");
    const BigRational gamma = rat(a.gamma);
    auto res = ising3_reduce(*h, gamma);
    const std::string file = (std::filesystem::path(a.out_dir) / "01_ising3.txt").string();
    write_instance_file(file, res.graph);
    ReductionTrace t{"ising3", res.graph, 1 / res.scale, 0, {{"gamma_prime", exact(res.gamma_prime)}}, {}};
    if (!res.exact) t.warnings.push_back("sqrt(1 + gamma) is irrational; gamma' approximated");
    trace.push_back(trace_json(t, file, g.digits));
    report["inputs"]["q"] = "2";
    report["gamma_prime"] = rational_json(res.gamma_prime, g.digits);
    report["total_scale"] = rational_json(1 / res.scale, g.digits);
    if (a.check) {
      const BigRational lhs = potts(*h, 2), rhs = potts(WeightedHypergraph::from_graph(res.graph), 2) / res.scale;
      report["check"] = {{"z_source", rational_json(lhs, g.digits)}, {"z_recovered", rational_json(rhs, g.digits)},
                         {"equal", lhs == rhs}};
    }
  } else if (a.from == "bis") {
    const auto* b = std::get_if<BipartiteGraph>(&inst);
    if (!b) throw std::invalid_argument("--from bis needs a bipartite instance");
    PipelineOptions opts;
    if (a.force_N > 0) opts.N_override = a.force_N;
    opts.enforce_edge_budget = !a.no_edge_budget;
    const auto res = run_pipeline(*b, rat(a.q), rat(a.gamma), rat(a.eps), opts);
    int index = 1;
    for (const auto& stage : res.stages) {
      char prefix[16];
      std::snprintf(prefix, sizeof prefix, "%02d_", index++);
      const std::string file = (std::filesystem::path(a.out_dir) / (prefix + stage.stage + ".txt")).string();
      write_instance_file(file, stage.output);
      trace.push_back(trace_json(stage, file, g.digits));
    }
    report["mu"] = exact(res.mu);
    report["s"] = res.s;
    report["xi"] = res.xi;
    report["divisor"] = rational_json(res.divisor, g.digits);
    report["total_scale"] = rational_json(res.total_scale, g.digits);
    report["final_vertices"] = res.final_instance.vertex_count();
    report["final_edges"] = res.final_instance.edge_count();
    if (a.check) {
      const BigRational z = tutte_frontier(res.final_instance, rat(a.q));
      const BigInt recovered = pipeline_postprocess(res, z);
      const auto truth = maximum_independent_sets(*b);
      report["check"] = {{"z_final", rational_json(z, g.digits)},
                         {"recovered_max_is_count", recovered.get_str()},
                         {"brute_force_max_is_count", truth.count.get_str()},
                         {"equal", recovered == truth.count}};
    }
  } else {
    throw std::invalid_argument("--from must be bis or hyper3");
  }

  report["stages"] = trace;
  std::ofstream(std::filesystem::path(a.out_dir) / "trace.json") << trace.dump(2) << "\n";
  if (g.json) {
    finish(report, g, clock);
  } else {
    for (const auto& t : trace) {
      std::cout << t["stage"].get<std::string>() << ": scale " << t["scale_decimal"].get<std::string>() << ", eps "
                << t["eps_used"].get<std::string>() << " -> " << t["file"].get<std::string>() << "\n";
      for (const auto& w : t["warnings"]) std::cout << "  warning: " << w.get<std::string>() << "\n";
    }
    std::cout << "total scale " << report["total_scale"]["decimal"].get<std::string>() << "\n";
    if (report.contains("check")) {
      std::cout << "check: " << (report["check"]["equal"].get<bool>() ? "recovered value matches" : "MISMATCH") << "\n";
    }
  }
  if (report.contains("check") && !report["check"]["equal"].get<bool>()) return kCheckFailed;
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::string suite;
  int max_n = 4;
  int max_edges = 4;
  int max_t = 3;
  int max_N = 5;
  int N = 16;
  int t = 2;
  std::string q = "3";
  std::string mu = "1";
  std::uint64_t samples = 1000000;
  std::uint64_t steps = 10000;
  int count = 0;
  std::uint64_t seed = 0;
  std::string file;
};

const std::vector<std::string> kSuites = {"fk",           "dp",     "wiring",          "coupling", "red-law",
                                          "stationarity", "apex",   "decomposition",   "series-parallel",
                                          "ising3",       "psi",    "tuner",           "implement", "all"};

std::vector<CheckReport> run_suite(const std::string& name, const VerifyArgs& a) {
  auto seed_or = [&](std::uint64_t fallback) { return Seed{a.seed ? a.seed : fallback}; };
  auto count_or = [&](int fallback) { return a.count > 0 ? a.count : fallback; };
  if (name == "fk") return {verify_fk(a.max_n, a.max_edges)};
  if (name == "dp") return {verify_dp(a.max_t, a.max_N, count_or(20), seed_or(1))};
  if (name == "wiring") return {verify_wiring(a.max_t, std::min(a.max_N, 4))};
  if (name == "coupling") return {verify_coupling(count_or(20), 10, a.steps, seed_or(2))};
  if (name == "red-law") return {verify_red_subgraph_law(a.max_edges)};
  if (name == "stationarity") return {verify_stationarity(a.samples, 8, seed_or(3))};
  if (name == "apex") return {verify_apex_identity(6)};
  if (name == "decomposition") return {verify_decomposition(std::min(a.max_N, 4))};
  if (name == "series-parallel") return {verify_series_parallel(count_or(60), seed_or(4))};
  if (name == "ising3") return {verify_ising3(5, 3)};
  if (name == "psi") return {verify_psi_monotone(a.t, a.N, rat(a.q))};
  if (name == "tuner") return {verify_tuner(default_tuner_cases())};
  if (name == "implement") return {verify_implement(count_or(50), 3, 2, BigRational(1, 1000000), seed_or(5))};
  if (name == "all") {
    std::vector<CheckReport> out;
    for (const auto& s : kSuites) {
      if (s == "all") continue;
      for (auto& r : run_suite(s, a)) out.push_back(std::move(r));
    }
    return out;
  }
  throw std::invalid_argument("unknown suite '" + name + "'");
}

int print_reports(const std::vector<CheckReport>& reports, const json& inputs, const Globals& g,
                  const Stopwatch& clock) {
  bool ok = true, skipped = false;
  json list = json::array();
  for (const auto& r : reports) {
    ok = ok && r.ok();
    skipped = skipped || r.skipped;
    json item = {{"name", r.name}, {"cases", r.cases}, {"failures", r.failures}, {"skipped", r.skipped},
                 {"notes", r.notes}};
    if (g.timing) item["seconds"] = r.seconds;
    list.push_back(item);
  }
  if (g.json) {
    json report = {{"subcommand", "verify"}, {"inputs", inputs}, {"ok", ok}, {"checks", list}};
    finish(report, g, clock);
  } else {
    for (const auto& r : reports) {
      std::cout << (r.skipped ? "SKIP" : r.ok() ? "PASS" : "FAIL") << "  " << r.name << "  (" << r.cases
                << " cases, " << r.failures << " failures)\n";
      for (const auto& n : r.notes) std::cout << "      " << n << "\n";
    }
  }
  if (!ok) return kCheckFailed;
  return skipped ? kCap : 0;
}

int run_verify(const VerifyArgs& a, const Globals& g) {
  Stopwatch clock;
  if (a.suite == "instance") {
    if (a.file.empty()) throw std::invalid_argument("verify instance needs a file");
    const auto reports = verify_instance(read_instance_file(a.file), rat(a.q), rat(a.mu));
    return print_reports(reports, {{"suite", "instance"}, {"file", a.file}, {"q", a.q}, {"mu", a.mu}}, g, clock);
  }
  return print_reports(run_suite(a.suite, a), {{"suite", a.suite}}, g, clock);
}

// ---------------------------------------------------------------------------
// demo

struct PhaseArgs {
  std::string q = "10";
  int N = 500;
  std::uint64_t sweeps = 2000;
  std::uint64_t seed = 7;
  std::vector<double> lambdas;
};

int run_demo_phase(const PhaseArgs& a, const Globals& g) {
  PhaseOptions opts;
  opts.q = rat(a.q);
  opts.N = a.N;
  opts.sweeps = a.sweeps;
  opts.seed = Seed{a.seed};
  opts.lambdas = a.lambdas;
  opts.jobs = g.jobs;
  std::cout << phase_csv(phase_sweep(opts));
  return 0;
}

struct GadgetDemoArgs {
  int N = 16;
  int t = 2;
  std::string q = "3";
  int points = 20;
};

int run_demo_gadget(const GadgetDemoArgs& a, const Globals& g) {
  const BigRational q = rat(a.q);
  if (a.points < 2) throw std::invalid_argument("--points must be at least 2");
  bool exact_cross = false;
  const BigRational cross = cross_probability(a.N, &exact_cross);
  RhoGrid grid(a.N, q, tuner_delta(a.N, a.t, 1));
  std::cout << "rho,zeta,psi";
  for (int k = 0; k <= a.t; ++k) std::cout << ",pr_y" << k;
  std::cout << "\n";
  for (int i = 0; i < a.points; ++i) {
    const std::uint64_t mu = (grid.size() - 1) * std::uint64_t(i) / std::uint64_t(a.points - 1);
    const BigRational rho = grid.at(mu);
    const auto z = z_k(dp_weights(a.t, a.N, rho / (1 - rho), cross / (1 - cross)), q);
    std::cout << decimal(rho, g.digits) << "," << decimal(z.zeta, g.digits) << "," << decimal(z.psi, g.digits);
    for (int k = 0; k <= a.t; ++k) std::cout << "," << decimal(z.z[k] / z.total, g.digits);
    std::cout << "\n";
  }
  if (!exact_cross) std::cerr << "note: N is not a fourth power; N^(-3/4) approximated\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pottsforge: exact Tutte/Potts evaluation, random-cluster sampling and the #BIS to Tutte reductions"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_flag("--json", g.json, "machine-readable output");
  app.add_flag("--timing", g.timing, "report wall-clock time (output is then not reproducible)");
  app.add_option("--jobs", g.jobs, "threads for independent work")->check(CLI::PositiveNumber);
  app.add_option("--digits", g.digits, "decimal digits printed")->check(CLI::NonNegativeNumber);

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "exact partition function of an instance file");
  eval->add_option("file", eval_args.file, "instance file")->required();
  eval->add_option("--q", eval_args.q, "cluster weight q");
  eval->add_option("--mu", eval_args.mu, "activity for bipartite instances");
  eval->add_option("--method", eval_args.method, "auto, enumerate, frontier or potts");

  SampleArgs sample_args;
  auto* sample = app.add_subcommand("sample", "heat-bath random-cluster or Erdos-Renyi sampling");
  sample->add_option("file", sample_args.file, "graph file; edge weights give p = gamma/(1+gamma)")->required();
  sample->add_option("--model", sample_args.model, "rc or er");
  sample->add_option("--q", sample_args.q, "cluster weight q");
  sample->add_option("--p", sample_args.p, "uniform edge probability (overrides the weights)");
  sample->add_option("--sweeps", sample_args.sweeps, "sweeps of m heat-bath steps");
  sample->add_option("--seed", sample_args.seed, "seed");
  sample->add_option("--force-in", sample_args.force_in, "comma-separated edge ids forced into A");
  sample->add_option("--force-out", sample_args.force_out, "comma-separated edge ids forced out of A");
  sample->add_option("--trace", sample_args.trace, "csv: per-sweep largest component on stdout");
  sample->add_option("--chains", sample_args.chains, "independent chains (seeds derived from --seed)");

  TuneArgs tune_args;
  auto* tune = app.add_subcommand("tune", "find rho-hat for the gadget");
  tune->add_option("--N", tune_args.N, "clique size");
  tune->add_option("--t", tune_args.t, "terminals");
  tune->add_option("--q", tune_args.q, "q");
  tune->add_option("--gamma", tune_args.gamma, "target hyperedge weight");
  tune->add_option("--chi", tune_args.chi, "accuracy chi");
  tune->add_option("--n0", tune_args.n0, "refuse N below this");
  tune->add_flag("--linear", tune_args.linear, "linear scan instead of bisection");
  tune->add_flag("--any-N", tune_args.any_N, "allow N that is not a fourth power");

  DumpArgs dump_args;
  auto* gadget = app.add_subcommand("gadget", "gadget utilities");
  gadget->require_subcommand(1);
  auto* dump = gadget->add_subcommand("dump-dp", "DP table w(t, N, k, l) as CSV");
  dump->add_option("--N", dump_args.N, "clique size");
  dump->add_option("--t", dump_args.t, "terminals");
  dump->add_option("--rho", dump_args.rho, "clique edge probability");
  dump->add_option("--cross", dump_args.cross, "override the clique-terminal probability");
  dump->add_option("--gamma-prime", dump_args.gamma_prime, "clique edge weight");
  dump->add_option("--gamma-dblprime", dump_args.gamma_dblprime, "clique-terminal edge weight");

  ReduceArgs reduce_args;
  auto* reduce = app.add_subcommand("reduce", "run the reduction chain, writing every stage");
  reduce->add_option("file", reduce_args.file, "input instance")->required();
  reduce->add_option("--from", reduce_args.from, "bis or hyper3");
  reduce->add_option("--to", reduce_args.to, "tutte");
  reduce->add_option("--q", reduce_args.q, "target q (mu = q - 1)");
  reduce->add_option("--gamma", reduce_args.gamma, "target uniform weight");
  reduce->add_option("--eps", reduce_args.eps, "accuracy budget");
  reduce->add_option("--force-N", reduce_args.force_N, "gadget clique size, overriding the prescribed one");
  reduce->add_option("--out-dir", reduce_args.out_dir, "directory for stage files and trace.json");
  reduce->add_flag("--no-edge-budget", reduce_args.no_edge_budget, "allow implementations beyond |E| branches");
  reduce->add_flag("--check", reduce_args.check, "evaluate the final instance exactly and compare");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "replay exact identities");
  verify->add_option("suite", verify_args.suite, "fk, dp, wiring, coupling, red-law, stationarity, apex, decomposition, "
                                                  "series-parallel, ising3, psi, tuner, implement, all, instance")
      ->required();
  verify->add_option("file", verify_args.file, "instance file for 'instance'");
  verify->add_option("--max-n", verify_args.max_n, "vertices (fk)");
  verify->add_option("--max-edges", verify_args.max_edges, "edges (fk, red-law)");
  verify->add_option("--max-t", verify_args.max_t, "terminals (dp, wiring)");
  verify->add_option("--max-N", verify_args.max_N, "clique size (dp, wiring, decomposition)");
  verify->add_option("--N", verify_args.N, "clique size (psi)");
  verify->add_option("--t", verify_args.t, "terminals (psi)");
  verify->add_option("--q", verify_args.q, "q (psi, instance)");
  verify->add_option("--mu", verify_args.mu, "mu (instance)");
  verify->add_option("--samples", verify_args.samples, "samples (stationarity)");
  verify->add_option("--steps", verify_args.steps, "steps per chain (coupling)");
  verify->add_option("--count", verify_args.count, "pairs / graphs / trees / targets");
  verify->add_option("--seed", verify_args.seed, "seed");

  PhaseArgs phase_args;
  GadgetDemoArgs gadget_demo_args;
  auto* demo = app.add_subcommand("demo", "demonstrations with CSV output");
  demo->require_subcommand(1);
  auto* phase = demo->add_subcommand("phase", "largest cluster of RC(K_N; q, lambda/N) from both starts");
  phase->add_option("--q", phase_args.q, "q");
  phase->add_option("--N", phase_args.N, "clique size");
  phase->add_option("--sweeps", phase_args.sweeps, "sweeps");
  phase->add_option("--seed", phase_args.seed, "seed");
  phase->add_option("--lambdas", phase_args.lambdas, "lambda values (default: around lambda_c)");
  auto* gadget_demo = demo->add_subcommand("gadget", "zeta, psi and the law of Y across the tuner grid");
  gadget_demo->add_option("--N", gadget_demo_args.N, "clique size");
  gadget_demo->add_option("--t", gadget_demo_args.t, "terminals");
  gadget_demo->add_option("--q", gadget_demo_args.q, "q");
  gadget_demo->add_option("--points", gadget_demo_args.points, "grid points shown");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*eval) return run_eval(eval_args, g);
    if (*sample) return run_sample(sample_args, g);
    if (*tune) return run_tune(tune_args, g);
    if (*dump) return run_dump_dp(dump_args, g);
    if (*reduce) return run_reduce(reduce_args, g);
    if (*verify) return run_verify(verify_args, g);
    if (*phase) return run_demo_phase(phase_args, g);
    if (*gadget_demo) return run_demo_gadget(gadget_demo_args, g);
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCap;
  } catch (const NoCrossing& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
