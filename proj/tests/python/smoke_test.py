"""Smoke tests for the python bindings.

Runs standalone (python smoke_test.py) and under pytest.
"""

import math

import dergm


def test_graph_and_statistics():
    g = dergm.graph_from_edges(4, False, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert g.edge_count() == 4
    assert dergm.degree_sequence(g) == [2, 2, 2, 2]

    dg = dergm.graph_from_edges(3, True, [(0, 1), (1, 2), (2, 0)])
    out_deg, in_deg = dergm.out_in_degrees(dg)
    assert out_deg == [1, 1, 1] and in_deg == [1, 1, 1]

    blocks = dergm.BlockAssignment([0, 0, 1, 1])
    k4 = dergm.graph_from_edges(4, False, [(i, j) for i in range(4) for j in range(i + 1, 4)])
    counts = dergm.block_edge_counts(k4, blocks)
    assert counts[0][1] == 4 and counts[0][0] == 1


def test_likelihood_and_partition():
    er = dergm.erdos_renyi(0.0)
    empty = dergm.Graph(3, False)
    assert abs(dergm.log_likelihood(er, empty) + 3 * math.log(2)) < 1e-12
    assert abs(dergm.log_partition(er, 3) - dergm.brute_log_partition(er, 3)) < 1e-12
    assert abs(dergm.brute_normalization_sum(dergm.beta_model([0.3, -0.2, 0.1]), 3) - 1.0) < 1e-10


def test_fit_and_certify():
    g = dergm.graph_from_edges(4, False, [(0, 1), (1, 2), (2, 3), (3, 0)])
    fit = dergm.fit_beta(g)
    assert fit.converged and fit.max_moment_gap <= 1e-10
    expected = 0.5 * math.log(2.0)
    assert all(abs(b - expected) <= 1e-8 for b in fit.params.flat_params())
    assert dergm.certify_mle(g, fit.params, trials=500, seed=1)

    k4 = dergm.graph_from_edges(4, False, [(i, j) for i in range(4) for j in range(i + 1, 4)])
    try:
        dergm.fit_beta(k4)
        raise AssertionError("complete graph must have no MLE")
    except dergm.NonexistentMleError:
        pass


def test_sampling_determinism():
    m = dergm.beta_model([0.5, -0.5, 0.0, 0.2])
    a = dergm.sample(m, 4, count=5, seed=99)
    b = dergm.sample(m, 4, count=5, seed=99)
    assert all(x == y for x, y in zip(a, b))
    freqs = dergm.empirical_dyad_frequencies(dergm.sample(m, 4, count=4000, seed=5))
    probs = dergm.dyad_probabilities(m, 4)
    assert all(abs(f - p) < 5 * math.sqrt(p * (1 - p) / 4000) for f, p in zip(freqs, probs))


def test_equivariance_checks():
    counter = dergm.builtin_probe("paper-counterexample", 4)
    rep = dergm.check_equivariance(counter)
    assert not rep.equivariant and rep.witness is not None

    addp = dergm.shared_probe(4, False, -1.0, 1.0, lambda u, v: 0.5 * u + 0.5 * v)
    assert dergm.check_equivariance(addp).equivariant
    dec = dergm.check_additivity(addp)
    assert dec.applicable and dec.additive and dec.symmetric_additive
    assert dergm.verify_reduction(addp).passed

    mult = dergm.builtin_probe("multiplicative", 4)
    dec2 = dergm.check_additivity(mult)
    assert not dec2.additive and abs(dec2.max_mixed_partial - 1.0) < 1e-6


def test_params_roundtrip():
    m = dergm.additive_sbm([0, 0, 1, 1, 2], [0.1, -0.2, 0.3], [0.5, 0.0, -0.5])
    text = dergm.params_dumps(m)
    restored, n = dergm.params_loads(text)
    assert restored.family == "additive-sbm"
    assert restored.flat_params() == m.flat_params()
    assert n == 5


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for test in tests:
        test()
        print(f"ok {test.__name__}")
    print(f"{len(tests)} smoke tests passed")


if __name__ == "__main__":
    main()
