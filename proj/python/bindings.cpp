#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pottsforge/errors.hpp"
#include "pottsforge/exact_eval.hpp"
#include "pottsforge/gadget.hpp"
#include "pottsforge/random_cluster.hpp"
#include "pottsforge/reductions.hpp"
#include "pottsforge/text_format.hpp"
#include "pottsforge/verify.hpp"

namespace py = pybind11;
using namespace pottsforge;

namespace {

// Accepts int, str ("3/2", "0.25") or fractions.Fraction.
BigRational to_rational(const py::handle& x) {
  if (py::isinstance<py::str>(x)) return parse_rational(x.cast<std::string>());
  if (py::hasattr(x, "numerator") && py::hasattr(x, "denominator")) {
    BigRational r(BigInt(py::str(x.attr("numerator")).cast<std::string>()),
                  BigInt(py::str(x.attr("denominator")).cast<std::string>()));
    r.canonicalize();
    return r;
  }
  if (py::isinstance<py::float_>(x)) return BigRational(x.cast<double>());
  throw py::type_error("expected int, str or fractions.Fraction");
}

py::object fraction(const BigRational& x) {
  static py::object Fraction = py::module_::import("fractions").attr("Fraction");
  py::object num = py::reinterpret_steal<py::object>(PyLong_FromString(x.get_num().get_str().c_str(), nullptr, 10));
  py::object den = py::reinterpret_steal<py::object>(PyLong_FromString(x.get_den().get_str().c_str(), nullptr, 10));
  return Fraction(num, den);
}

py::object integer(const BigInt& x) {
  return py::reinterpret_steal<py::object>(PyLong_FromString(x.get_str().c_str(), nullptr, 10));
}

std::vector<BigRational> rationals(const py::iterable& xs) {
  std::vector<BigRational> out;
  for (auto x : xs) out.push_back(to_rational(x));
  return out;
}

py::list fractions(const std::vector<BigRational>& xs) {
  py::list out;
  for (const auto& x : xs) out.append(fraction(x));
  return out;
}

py::dict report_dict(const CheckReport& r) {
  py::dict d;
  d["name"] = r.name;
  d["cases"] = r.cases;
  d["failures"] = r.failures;
  d["skipped"] = r.skipped;
  d["notes"] = r.notes;
  d["ok"] = r.ok();
  return d;
}

py::object instance_object(const Instance& inst) {
  return std::visit([](const auto& x) { return py::cast(x); }, inst);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact Tutte/Potts evaluation, random-cluster sampling and the #BIS to Tutte reduction chain";

  auto cap = py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_RuntimeError);
  auto reduction = py::register_exception<ReductionError>(m, "ReductionError", PyExc_RuntimeError);
  py::register_exception<NoCrossing>(m, "NoCrossing", reduction.ptr());
  py::register_exception<CouplingViolation>(m, "CouplingViolation", PyExc_AssertionError);
  (void)cap;

  py::class_<WeightedGraph>(m, "Graph")
      .def(py::init([](int n, const std::vector<std::pair<int, int>>& edges, const py::object& weights) {
             std::vector<Edge> es;
             for (auto [u, v] : edges) es.push_back({u, v});
             if (py::isinstance<py::iterable>(weights) && !py::isinstance<py::str>(weights)) {
               return WeightedGraph(n, es, rationals(weights));
             }
             return WeightedGraph::uniform(n, es, to_rational(weights));
           }),
           py::arg("n"), py::arg("edges"), py::arg("weights") = 1)
      .def_property_readonly("vertex_count", &WeightedGraph::vertex_count)
      .def_property_readonly("edge_count", &WeightedGraph::edge_count)
      .def_property_readonly("edges",
                             [](const WeightedGraph& g) {
                               std::vector<std::pair<int, int>> out;
                               for (const auto& e : g.edges()) out.push_back({e.u, e.v});
                               return out;
                             })
      .def_property_readonly("weights", [](const WeightedGraph& g) { return fractions(g.weights()); })
      .def("__repr__", [](const WeightedGraph& g) {
        return "Graph(n=" + std::to_string(g.vertex_count()) + ", m=" + std::to_string(g.edge_count()) + ")";
      });

  py::class_<WeightedHypergraph>(m, "Hypergraph")
      .def(py::init([](int n, const std::vector<std::vector<int>>& edges, const py::object& weights) {
             if (py::isinstance<py::iterable>(weights) && !py::isinstance<py::str>(weights)) {
               return WeightedHypergraph(n, edges, rationals(weights));
             }
             return WeightedHypergraph::uniform(n, edges, to_rational(weights));
           }),
           py::arg("n"), py::arg("hyperedges"), py::arg("weights") = 1)
      .def_static("from_graph", &WeightedHypergraph::from_graph)
      .def_property_readonly("vertex_count", &WeightedHypergraph::vertex_count)
      .def_property_readonly("edge_count", &WeightedHypergraph::edge_count)
      .def_property_readonly("hyperedges", &WeightedHypergraph::hyperedges)
      .def_property_readonly("weights", [](const WeightedHypergraph& h) { return fractions(h.weights()); });

  py::class_<BipartiteGraph>(m, "BipartiteGraph")
      .def(py::init<int, int, std::vector<std::pair<int, int>>>(), py::arg("left"), py::arg("right"),
           py::arg("edges"))
      .def_property_readonly("left_count", &BipartiteGraph::left_count)
      .def_property_readonly("right_count", &BipartiteGraph::right_count)
      .def_property_readonly("edges", &BipartiteGraph::edges);

  m.def("parse_instance", [](const std::string& text) { return instance_object(parse_instance(text)); });
  m.def("serialize", [](const WeightedGraph& g) { return serialize(g); });
  m.def("serialize", [](const WeightedHypergraph& h) { return serialize(h); });
  m.def("serialize", [](const BipartiteGraph& b) { return serialize(b); });

  m.def("tutte", [](const WeightedGraph& g, const py::object& q) { return fraction(tutte_graph(g, to_rational(q))); },
        py::arg("graph"), py::arg("q"), "Z_Tutte by subset enumeration");
  m.def("tutte_frontier",
        [](const WeightedGraph& g, const py::object& q) { return fraction(tutte_frontier(g, to_rational(q))); },
        py::arg("graph"), py::arg("q"));
  m.def("tutte_hypergraph",
        [](const WeightedHypergraph& h, const py::object& q) { return fraction(tutte_hypergraph(h, to_rational(q))); },
        py::arg("hypergraph"), py::arg("q"));
  m.def("potts", [](const WeightedHypergraph& h, const py::object& q) { return fraction(potts(h, to_rational(q))); },
        py::arg("hypergraph"), py::arg("q"));
  m.def("potts",
        [](const WeightedGraph& g, const py::object& q) {
          return fraction(potts(WeightedHypergraph::from_graph(g), to_rational(q)));
        },
        py::arg("graph"), py::arg("q"));
  m.def("terminal_split",
        [](const WeightedGraph& g, int s, int t, const py::object& q) {
          auto r = terminal_split_frontier(g, s, t, to_rational(q));
          return py::make_tuple(fraction(r.z_joined), fraction(r.z_split));
        },
        py::arg("graph"), py::arg("s"), py::arg("t"), py::arg("q"), "(Z_st, Z_s|t)");
  m.def("independent_set_polynomial",
        [](const BipartiteGraph& b, const py::object& mu) {
          return fraction(independent_set_polynomial(b, to_rational(mu)));
        },
        py::arg("graph"), py::arg("mu"));
  m.def("maximum_independent_sets", [](const BipartiteGraph& b) {
    auto r = maximum_independent_sets(b);
    return py::make_tuple(r.size, integer(r.count));
  });

  m.def(
      "sample_rc",
      [](const WeightedGraph& g, const py::object& q, const py::object& p, std::uint64_t sweeps, std::uint64_t seed,
         const std::string& model, const std::vector<int>& force_in, const std::vector<int>& force_out) {
        auto probs = p.is_none() ? EdgeProbabilityMap::from_weights(g.weights())
                                 : EdgeProbabilityMap::uniform(g.edge_count(), to_rational(p));
        Model mdl = model == "er" ? Model::ErdosRenyi : Model::RandomCluster;
        if (model != "er" && model != "rc") throw py::value_error("model must be 'rc' or 'er'");
        const BigRational qq = to_rational(q);
        py::gil_scoped_release release;
        return sample_rc(g, mdl, qq, probs, Conditioning{force_in, force_out}, sweeps, Seed{seed})
            .edges();
      },
      py::arg("graph"), py::arg("q"), py::arg("p") = py::none(), py::arg("sweeps") = 100, py::arg("seed") = 1,
      py::arg("model") = "rc", py::arg("force_in") = std::vector<int>{}, py::arg("force_out") = std::vector<int>{},
      "Edge ids of A after `sweeps` heat-bath sweeps from A = force_in");

  m.def("phase_constants", [](const py::object& q) {
    auto pc = phase_constants(to_rational(q));
    py::dict d;
    d["lambda_c"] = pc.lambda_c.to_double();
    d["delta"] = pc.delta.to_double();
    d["lambda"] = pc.lambda.to_double();
    d["theta"] = fraction(pc.theta);
    return d;
  });
  m.def("cross_probability", [](int N) {
    bool exact = false;
    auto c = cross_probability(N, &exact);
    return py::make_tuple(fraction(c), exact);
  });
  m.def(
      "z_k",
      [](int t, int N, const py::object& gp, const py::object& gpp, const py::object& q) {
        auto s = z_k(dp_weights(t, N, to_rational(gp), to_rational(gpp)), to_rational(q));
        return fractions(s.z);
      },
      py::arg("t"), py::arg("N"), py::arg("gamma_prime"), py::arg("gamma_dblprime"), py::arg("q"),
      "[Z^0, ..., Z^t] of the gadget");
  m.def("dp_csv", [](int t, int N, const py::object& gp, const py::object& gpp) {
    return dp_weights(t, N, to_rational(gp), to_rational(gpp)).to_csv();
  });
  m.def(
      "tune_rho",
      [](int N, int t, const py::object& q, const py::object& gamma, const py::object& chi, bool any_N) {
        TuneOptions opts;
        opts.require_fourth_power = !any_N;
        auto r = tune_rho(N, t, to_rational(q), to_rational(gamma), to_rational(chi), opts);
        py::dict d;
        d["found"] = r.found;
        d["rho_hat"] = r.found ? fraction(r.rho_hat) : py::none();
        d["zeta_hat"] = r.found ? fraction(r.zeta_hat) : py::none();
        d["zeta_min"] = fraction(r.zeta_min);
        d["zeta_max"] = fraction(r.zeta_max);
        d["grid_size"] = r.grid_size;
        d["report"] = r.report;
        return d;
      },
      py::arg("N"), py::arg("t"), py::arg("q"), py::arg("gamma"), py::arg("chi"), py::arg("any_N") = false);

  m.def("series_compose", [](const py::object& g1, const py::object& g2, const py::object& q) {
    auto s = series_compose(to_rational(g1), to_rational(g2), to_rational(q));
    return py::make_tuple(fraction(s.gamma_star), fraction(s.scale));
  });
  m.def("parallel_compose", [](const py::object& g1, const py::object& g2) {
    return fraction(parallel_compose(to_rational(g1), to_rational(g2)));
  });
  m.def(
      "implement_weight",
      [](const py::object& target, const py::object& q_hat, const py::object& gamma_hat, const py::object& pi_tol) {
        auto w = implement_weight(to_rational(target), to_rational(q_hat), to_rational(gamma_hat), to_rational(pi_tol));
        py::dict d;
        d["realized"] = fraction(w.realized_value);
        d["scale"] = fraction(w.accumulated_scale);
        d["edges"] = w.edge_count;
        d["k"] = w.k;
        d["gamma_1"] = fraction(w.gamma_1);
        d["d"] = w.d;
        d["graph"] = expand_tree(w.tree, to_rational(gamma_hat));
        return d;
      },
      py::arg("target"), py::arg("q_hat"), py::arg("gamma_hat"), py::arg("pi_tol"));
  m.def("ising3_reduce", [](const WeightedHypergraph& h, const py::object& gamma) {
    auto r = ising3_reduce(h, to_rational(gamma));
    py::dict d;
    d["graph"] = r.graph;
    d["gamma_prime"] = fraction(r.gamma_prime);
    d["scale"] = fraction(r.scale);
    d["exact"] = r.exact;
    return d;
  });
  m.def("semiregular_to_hypertutte", [](const BipartiteGraph& b, const py::object& mu) {
    auto r = semiregular_to_hypertutte(b, to_rational(mu));
    return py::make_tuple(r.hypergraph, fraction(r.q), fraction(r.scale));
  });
  m.def(
      "run_pipeline",
      [](const BipartiteGraph& b, const py::object& q, const py::object& gamma, const py::object& eps,
         std::optional<int> force_N, bool enforce_edge_budget) {
        PipelineOptions opts;
        opts.N_override = force_N;
        opts.enforce_edge_budget = enforce_edge_budget;
        auto r = run_pipeline(b, to_rational(q), to_rational(gamma), to_rational(eps), opts);
        py::list stages;
        for (const auto& s : r.stages) {
          py::dict d;
          d["stage"] = s.stage;
          d["scale"] = fraction(s.scale_factor);
          d["eps"] = fraction(s.error_budget);
          d["params"] = s.params;
          d["warnings"] = s.warnings;
          d["instance"] = instance_object(s.output);
          stages.append(d);
        }
        py::dict out;
        out["stages"] = stages;
        out["final"] = r.final_instance;
        out["total_scale"] = fraction(r.total_scale);
        out["divisor"] = fraction(r.divisor);
        out["s"] = r.s;
        out["xi"] = r.xi;
        out["postprocess"] = py::cpp_function([r](const py::object& z) {
          return integer(pipeline_postprocess(r, to_rational(z)));
        });
        return out;
      },
      py::arg("bipartite"), py::arg("q"), py::arg("gamma"), py::arg("eps"), py::arg("force_N") = py::none(),
      py::arg("enforce_edge_budget") = true);

  m.def("verify", [](const std::string& suite) {
    CheckReport r;
    if (suite == "fk") {
      r = verify_fk(3, 3);
    } else if (suite == "apex") {
      r = verify_apex_identity(5);
    } else if (suite == "ising3") {
      r = verify_ising3(4, 2);
    } else if (suite == "series-parallel") {
      r = verify_series_parallel(20);
    } else if (suite == "implement") {
      r = verify_implement(10);
    } else {
      throw py::value_error("unknown suite '" + suite + "'");
    }
    return report_dict(r);
  }, "Quick versions of the exact identity checks");
}
