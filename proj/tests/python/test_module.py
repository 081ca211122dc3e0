import math

import numpy as np
import pytest

import oil


def test_pinv_and_norms():
    np.testing.assert_allclose(oil.pinv(np.array([[1.0, 1.0], [0.0, 0.0]])), [[0.5, 0], [0.5, 0]], atol=1e-15)
    assert oil.op_norm(np.array([[3.0, 0.0], [4.0, 0.0]])) == pytest.approx(5.0)
    assert oil.rank(np.array([[1.0, 2.0], [2.0, 4.0]])) == 1


def test_complex_input_round_trips():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
    np.testing.assert_allclose(oil.pinv(a), np.linalg.pinv(a), atol=1e-12)


def test_gaps():
    th = math.pi / 6
    e1 = np.array([[1.0], [0.0]])
    rotated = np.array([[math.cos(th)], [math.sin(th)]])
    assert oil.gap_hat(e1, rotated) == pytest.approx(0.5)
    assert oil.delta(rotated, e1) == pytest.approx(0.5)


def test_compute_and_oracle():
    a = np.diag([2.0, 3.0])
    t = np.array([[1.0], [0.0]])
    s = np.array([[0.0], [1.0]])
    np.testing.assert_allclose(oil.compute(a, t, s), np.diag([0.5, 0.0]), atol=1e-15)
    np.testing.assert_allclose(oil.oracle_compute(a, t, s), np.diag([0.5, 0.0]), atol=1e-15)
    assert oil.exists(a, t, s)


def test_existence_failure_is_a_value_error():
    with pytest.raises(ValueError, match="kernel intersection nontrivial"):
        oil.compute(np.diag([1.0, 0.0]), np.array([[0.0], [1.0]]), np.array([[1.0], [0.0]]))


def test_classical_inverses():
    np.testing.assert_allclose(oil.classical(np.diag([3.0, 0.0]), "group"), np.diag([1 / 3, 0.0]), atol=1e-15)
    assert np.abs(oil.classical(np.array([[0.0, 1.0], [0.0, 0.0]]), "drazin")).max() == 0.0
    with pytest.raises(ValueError):
        oil.classical(np.eye(2), "unknown")


def test_perturbation_reports():
    a = np.diag([2.0, 3.0])
    t = np.array([[1.0], [0.0]])
    s = np.array([[0.0], [1.0]])
    r = oil.perturb_A(a, t, s, np.diag([0.1, 0.0]))
    np.testing.assert_allclose(r["formula_result"], np.diag([1 / 2.1, 0.0]), atol=1e-15)
    assert r["all_satisfied"]

    r = oil.stable_bounds(np.eye(2), 0.1 * np.eye(2))
    assert r["norm_actual"] == pytest.approx(1 / 1.1)
    assert r["bounds_hold"]


def test_campaign_from_python(report_schema):
    jsonschema = pytest.importorskip("jsonschema")
    csv, summary, code = oil.run_campaign({"trials": 3, "gen": {"max_dim": 5}})
    assert code == 0
    assert summary["bounds_violations"] == 0
    assert "trial_id,theorem,gap_T" in csv

    report, _, _ = oil.run_campaign({"trials": 2, "format": "json"})
    import json

    jsonschema.validate(json.loads(report), report_schema)
