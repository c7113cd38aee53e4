import json
import math

import numpy as np
import pytest

import rigidity_lab as rl


def test_constants():
    dc = rl.derive_constants(rl.ParamSet(3, 2.0, 4.0))
    assert dc["beta"] == 2.5
    assert abs(dc["theta"] - 2.0 / 3.0) < 1e-15
    assert abs(dc["kappa"] - 6.0) < 1e-14
    assert dc["s"] == 2.0
    assert abs(rl.certificate_root(3, 2.0, 4.0) + 5.0 / 18.0) < 1e-15


def test_range_errors_map_to_python():
    with pytest.raises(rl.RangeError):
        rl.derive_constants(rl.ParamSet(3, 2.0, 6.0))
    with pytest.raises(rl.RigidityError):
        rl.cdc_certificate(rl.ParamSet(3, 2.0, 4.0), 0.0)
    with pytest.raises(rl.ConfigError):
        rl.Geometry("cube", 3, 100)


def test_geometry_is_normalized():
    g = rl.Geometry("sphere", 3, 200)
    assert g.size == 201
    assert abs(g.cell_measure.sum() - 1.0) < 1e-14
    c2 = g.sample(lambda x: math.cos(x) ** 2)
    assert abs(g.integrate(c2) - 0.25) < 1e-4


def test_identities_on_exp_cos():
    g = rl.Geometry("sphere", 3, 400)
    reports = rl.verify_unconditional(g, rl.ParamSet(3, 2.0, 4.0), rl.named_field(g, "exp-cos"))
    assert len(reports) == 4
    assert all(r["pass"] for r in reports)


def test_solver_returns_the_constant():
    g = rl.Geometry("sphere", 3, 100)
    v0 = g.sample(lambda x: 1.0 + 0.3 * math.cos(x))
    r = rl.solve_stationary(g, rl.ParamSet(3, 2.0, 4.0, 0.1), v0)
    assert r["classification"] == "ConstantOne"
    assert np.max(np.abs(r["field"] - 1.0)) < 1e-6


def test_flow_conserves_mass():
    g = rl.Geometry("torus", 3, 100)
    u0 = g.sample(lambda x: 1.0 + 0.2 * math.cos(x))
    tr = rl.run_flow(g, rl.ParamSet(3, 2.0, 4.0, 0.5), u0, 0.5, samples=10)
    assert tr["mass_drift"] < 1e-6
    assert all(b <= a + 1e-12 for a, b in zip(tr["F"], tr["F"][1:]))
    assert len(tr["fields"]) == len(tr["t"])


def test_first_eigenvalue():
    g = rl.Geometry("torus", 2, 256)
    r = rl.lambda1(g, rl.ParamSet(2, 2.0, 4.0), g.sample(lambda x: 1.0), eps=0.0)
    assert abs(r["value"] - 1.0) < 1e-4


def test_cli_round_trip():
    code, out, err = rl.run_cli(["constants", "--n", "3", "--p", "2", "--q", "4"])
    assert code == 0
    assert json.loads(out)["result"]["beta"] == 2.5
    code, _, err = rl.run_cli(["constants", "--n", "3", "--p", "2", "--q", "6.0"])
    assert code == 2
    assert "RangeError" in err
