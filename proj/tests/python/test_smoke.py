import json
import math

import numpy as np
import pytest

import qsdp


def test_case2_closed_forms():
    seeded = qsdp.gen_case2()
    inst = seeded.instance
    assert (inst.n, inst.m) == (3, 3)
    for eta in (0.2, 1.0, 7.0):
        y = qsdp.case2_central_path(eta)
        np.testing.assert_allclose(qsdp.slack(inst, y), np.diag([1 / eta, 1 / eta, 1]), rtol=1e-12)
        np.testing.assert_allclose(qsdp.hessian(inst, y), np.diag([eta**2, eta**2, 2 * eta**2]), rtol=1e-12)
        assert qsdp.potential(inst, y, eta) < 1e-12


def test_gradient_against_numpy():
    seeded = qsdp.gen_random_wellcond(3, 4, 5.0, 2)
    inst, y = seeded.instance, seeded.y0 + 0.01
    eta = 0.7
    s_inv = np.linalg.inv(sum(yi * a for yi, a in zip(y, inst.A)) - inst.C)
    expected = eta * inst.b - np.array([np.trace(s_inv @ a) for a in inst.A])
    np.testing.assert_allclose(qsdp.gradient(inst, y, eta), expected, rtol=1e-10)


def test_schedule():
    assert qsdp.schedule(3) == (pytest.approx(0.2), 3952)
    assert qsdp.schedule(1)[1] == 1843


def test_noisy_solve_is_reproducible():
    seeded = qsdp.gen_random_wellcond(3, 4, 5.0, 1)
    a, trace = qsdp.solve(seeded.instance, seeded.y0, oracle="noisy", seed=3, max_iters=50, trace=True)
    b, _ = qsdp.solve(seeded.instance, seeded.y0, oracle="noisy", seed=3, max_iters=50)
    assert a == b
    assert a["status"] == "MaxIters"
    assert len(trace) == 50
    assert all(r["conditions"]["delta"]["pass"] for r in trace)


def test_estimate_plugin_total():
    seeded = qsdp.gen_case2()
    report = qsdp.estimate(seeded.instance, seeded.y0, seeded.eta0)
    assert report["kappa_H"] == pytest.approx(2.0)
    assert report["plugin_total"] == pytest.approx(math.sqrt(3) * (9 + 3**2.5), abs=1e-9)


def test_instance_json_round_trip():
    inst = qsdp.gen_case1(3).instance
    back = qsdp.Instance.from_json(inst.to_json())
    assert json.loads(back.to_json()) == json.loads(inst.to_json())


def test_errors_are_raised():
    inst = qsdp.gen_case2().instance
    with pytest.raises(qsdp.QsdpError, match="InitNotOnPath"):
        qsdp.solve(inst, np.array([-1.0, -1.0, 0.0]))
    with pytest.raises(qsdp.QsdpError):
        qsdp.Instance([np.array([[0.0, 1.0], [0.0, 0.0]])], np.ones(1), np.zeros((2, 2)))
