from fractions import Fraction

import pytest

import pottsforge as pf


def triangle(weight=1):
    return pf.Graph(3, [(0, 1), (1, 2), (0, 2)], weight)


def test_triangle_tutte_and_potts_agree():
    g = triangle()
    assert pf.tutte(g, 2) == 28
    assert pf.potts(g, 2) == 28
    assert pf.tutte_frontier(g, 2) == 28


def test_rational_weights_round_trip_through_text():
    g = pf.Graph(2, [(0, 1)], [Fraction(1, 3)])
    text = pf.serialize(g)
    again = pf.parse_instance(text)
    assert pf.serialize(again) == text
    assert again.weights == [Fraction(1, 3)]
    assert pf.tutte(again, "5/2") == Fraction(5, 2) ** 2 + Fraction(5, 2) * Fraction(1, 3)


def test_ising3_single_hyperedge():
    h = pf.Hypergraph(3, [[0, 1, 2]], 3)
    assert pf.potts(h, 2) == 14
    red = pf.ising3_reduce(h, 3)
    assert red["gamma_prime"] == 1 and red["exact"]
    assert pf.potts(red["graph"], 2) == red["scale"] * 14 == 28


def test_apex_identity_on_k22():
    b = pf.BipartiteGraph(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)])
    h, q, scale = pf.semiregular_to_hypertutte(b, 1)
    assert q == 2
    assert pf.independent_set_polynomial(b, 1) == 7
    assert scale * pf.tutte_hypergraph(h, q) == 7


def test_series_parallel_formulas():
    assert pf.series_compose(2, 2, 2) == (Fraction(2, 3), 6)
    assert pf.parallel_compose(1, 1) == 3


def test_implement_weight_matches_terminal_split():
    w = pf.implement_weight(Fraction(3, 7), 3, 2, Fraction(1, 10**6))
    assert w["k"] == 3 and w["gamma_1"] == Fraction(8, 39)
    z_st, z_split = pf.terminal_split(w["graph"], 0, 1, 3)
    assert 3 * z_st / z_split == w["realized"]
    assert Fraction(3, 7) - Fraction(1, 10**6) <= w["realized"] <= Fraction(3, 7)


def test_tuner_and_no_crossing():
    found = pf.tune_rho(16, 2, 3, 1, Fraction(1, 2))
    assert found["found"] and found["zeta_min"] <= 1 <= found["zeta_max"]
    missing = pf.tune_rho(16, 2, 3, 5, Fraction(1, 2))
    assert not missing["found"] and missing["rho_hat"] is None


def test_sampler_is_deterministic_and_respects_conditioning():
    g = pf.Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)], 1)
    a = pf.sample_rc(g, 2, sweeps=20, seed=5, force_in=[0], force_out=[2])
    assert a == pf.sample_rc(g, 2, sweeps=20, seed=5, force_in=[0], force_out=[2])
    assert 0 in a and 2 not in a


def test_pipeline_single_vertex_recovers_count():
    b = pf.BipartiteGraph(1, 0, [])
    res = pf.run_pipeline(b, 3, 1, 1, force_N=4, enforce_edge_budget=False)
    assert [s["stage"] for s in res["stages"]][0] == "maxis_blowup"
    z = pf.tutte(res["final"], 3)
    assert res["postprocess"](z) == pf.maximum_independent_sets(b)[1] == 1
    assert sum(s["eps"] for s in res["stages"]) == 1


def test_errors_map_to_python_exceptions():
    big = pf.Graph(40, [(i, i + 1) for i in range(39)], 1)
    with pytest.raises(pf.CapExceeded):
        pf.tutte(big, 2)
    with pytest.raises(pf.ReductionError):
        pf.run_pipeline(pf.BipartiteGraph(1, 1, [(0, 0)]), 3, 1, 1)


@pytest.mark.parametrize("suite", ["fk", "apex", "ising3", "series-parallel", "implement"])
def test_quick_verification_suites(suite):
    r = pf.verify(suite)
    assert r["ok"] and r["cases"] > 0
