"""End-to-end smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import qdpt


def test_ground_truth_helpers():
    p = qdpt.uniform_distribution(4)
    assert math.isclose(qdpt.shannon_entropy(p), math.log(4.0), rel_tol=1e-12)

    rho = qdpt.haar_random_density(4, 2, seed=7)
    assert abs(np.trace(rho.matrix).real - 1.0) <= 1e-12
    assert qdpt.von_neumann_entropy(rho) >= 0.0

    sigma = qdpt.haar_random_density(4, 4, seed=8)
    assert qdpt.schatten_distance(rho, sigma, 2.0) > 0.0
    assert qdpt.schatten_distance(rho, rho, 2.0) == pytest.approx(0.0)


def test_validation_errors_surface_as_exceptions():
    with pytest.raises(qdpt.InvariantError):
        qdpt.ClassicalDistribution(np.array([0.5, 0.4]))
    with pytest.raises(qdpt.InvariantError):
        qdpt.DensityOperator(np.array([[1.0, 0.2], [0.0, 0.0]], dtype=complex))


def test_oracles_and_counters():
    p = qdpt.dirichlet_random(8, seed=3)
    oracle = qdpt.purify_classical(p)
    assert oracle.classical
    assert oracle.system_dim == 8
    np.testing.assert_allclose(oracle.source_probs, p.probs)
    assert oracle.queries() == 0

    table = [0, 0, 1, 2]
    o2 = qdpt.from_discrete_query(table, 3)
    np.testing.assert_allclose(o2.source_probs, [0.5, 0.25, 0.25])


def test_entropy_estimation():
    p = qdpt.uniform_distribution(32)
    oracle = qdpt.purify_classical(p)
    exact = qdpt.entropy_pipeline_exact(oracle, 0.25)
    assert abs(exact - math.log(32.0)) <= 2 * 0.25 / 3

    verdict = qdpt.entropy_classical(oracle, 0.25, seed=1)
    assert abs(verdict["estimate"] - math.log(32.0)) <= 0.25
    assert verdict["queries"] > 0
    assert sum(verdict["trace"].values()) == verdict["queries"]

    # Seeded runs are reproducible.
    again = qdpt.entropy_classical(oracle, 0.25, seed=1)
    assert again["estimate"] == verdict["estimate"]

    rho = qdpt.haar_random_density(8, 8, seed=5)
    quantum = qdpt.entropy_quantum(qdpt.purify_density(rho), 0.25, seed=2)
    assert abs(quantum["estimate"] - qdpt.von_neumann_entropy(rho)) <= 0.25


def test_l2_closeness():
    p, q = qdpt.l2_separated_pair(16, 0.2, seed=4)
    far = qdpt.l2_classical_robust(
        qdpt.purify_classical(p), qdpt.purify_classical(q), 0.2, 0.5, seed=1
    )
    assert far["far"] is True

    same = qdpt.dirichlet_random(16, seed=9)
    close = qdpt.l2_classical_robust(
        qdpt.purify_classical(same), qdpt.purify_classical(same), 0.2, 0.5, seed=1
    )
    assert close["far"] is False

    report = qdpt.l2_exact_report(
        qdpt.purify_classical(p), qdpt.purify_classical(q), 0.2, 0.5
    )
    assert abs(report["combined"] - report["l2_squared"]) <= 2 * report["theta"]
    assert report["max_inverse_map"] < 0.5
    assert report["max_amp_map"] < 0.25


def test_quantum_testers():
    rho, sigma = qdpt.l2_separated_density_pair(8, 0.2, seed=3)
    o1, o2 = qdpt.purify_density(rho), qdpt.purify_density(sigma)
    for route in ("entangled", "swap"):
        verdict = qdpt.l2_quantum(o1, o2, 0.2, 0.5, seed=5, route=route)
        assert verdict["far"] is True

    a = qdpt.purify_density(rho)
    b = qdpt.purify_density(rho)
    assert qdpt.l3_closeness(a, b, 0.4, seed=1)["far"] is False


def test_independence():
    prod = qdpt.purify_classical(qdpt.product_instance(2, 2, seed=6))
    assert qdpt.independence(prod, 2, 2, 0.5, seed=2)["far"] is False
    corr = qdpt.purify_classical(qdpt.correlated_diagonal(2))
    assert qdpt.independence(corr, 2, 2, 0.5, seed=2)["far"] is True
    assert corr.queries() > 0


def test_polynomials():
    s = qdpt.build_S(0.25, 0.05)
    info = s.info
    assert info["certificate"]["max_err_on_domain"] <= 0.05
    assert info["certificate"]["max_abs_on_unit_interval"] <= 1.0 + 1e-9
    lb = 2.0 * math.log(2.0 / 0.25)
    assert abs(s(0.5) - math.log(1.0 / 0.5) / lb) <= 0.05
    assert s(0.5) == pytest.approx(s(-0.5))

    q = qdpt.build_Q(2.0, 0.25, 0.1)
    assert q(0.0) == 0.0


def test_amplitude_estimation():
    pmf = qdpt.ae_outcome_pmf(0.3, 16)
    assert sum(pmf) == pytest.approx(1.0)
    val = qdpt.ae_sample(0.3, 16, seed=11)
    grid = [math.sin(j * math.pi / 16) ** 2 for j in range(16)]
    assert any(abs(val - g) < 1e-12 for g in grid)
    assert qdpt.ae_sample(0.0, 16, seed=1) == 0.0


def test_baselines_and_io():
    p = qdpt.uniform_distribution(4)
    est = qdpt.plugin_entropy(p, samples=200000, seed=3)
    assert abs(est - math.log(4.0)) <= 0.02

    text = qdpt.distribution_to_json(p)
    back = qdpt.parse_distribution_json(text)
    np.testing.assert_allclose(back.probs, p.probs)
