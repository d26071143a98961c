import json

import numpy as np
import pytest

import fermopt


def test_canonical_sign():
    assert fermopt.canonical_sign([2, 0, 1]) == ([0, 1, 2], 1)
    assert fermopt.canonical_sign([1, 0]) == ([0, 1], -1)


def test_pfaffian_matches_determinant():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(6, 6))
    a = a - a.T
    assert fermopt.pfaffian(a) ** 2 == pytest.approx(np.linalg.det(a), rel=1e-10)


def test_hamiltonian_round_trip():
    h = fermopt.Hamiltonian(3, [([0, 2, 3, 5], -7.0), ([0, 1], 1.5)])
    back = fermopt.Hamiltonian.from_json(h.to_json())
    assert back.terms() == h.terms()
    assert h.total_strength() == pytest.approx(8.5)


def test_validation_raises():
    with pytest.raises(fermopt.FermoptError):
        fermopt.Hamiltonian(2, [([0, 1, 2], 1.0)])


def test_optimize_certificate_matches_expectation():
    h = fermopt.gen_sparse_random(20, 4, 2, 1)
    out = fermopt.optimize(h)
    assert fermopt.expectation(h, out["state"]) == pytest.approx(out["achieved"], abs=1e-9)
    assert out["achieved"] >= h.total_strength() / 18 - 1e-12
    cert = json.loads(out["certificate"])
    assert cert["achieved"] == pytest.approx(out["achieved"])


def test_gaussian_bounded_by_lambda_max():
    h = fermopt.gen_syk(4, 4, 7)
    lam = fermopt.lambda_max(h)
    value, gamma = fermopt.gaussian_numeric_max(h, restarts=4, seed=1)
    assert 0 < value <= lam + 1e-9
    assert np.allclose(gamma @ gamma.T, np.eye(8), atol=1e-8)


def test_study_is_deterministic():
    cfg = json.dumps({"study": "ratio-bench", "trials": 3, "base_seed": 5,
                      "ensemble": {"family": "sparse", "n_modes": 6, "q": 4, "k": 2}})
    assert fermopt.run_study(cfg) == fermopt.run_study(cfg)
