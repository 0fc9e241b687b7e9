import json
from fractions import Fraction

import numpy as np
import pytest

import nl4s


@pytest.fixture(scope="module")
def q256():
    grid = nl4s.Grid(1, 256, 20.0)
    return grid, nl4s.ground_state(grid)


def test_grid_and_observables():
    grid = nl4s.Grid(1, 128, 10.0)
    x = grid.coordinates()
    u = np.exp(-x**2).astype(complex)
    assert nl4s.mass(grid, u) == pytest.approx(np.sqrt(np.pi / 2), rel=1e-12)
    assert nl4s.sobolev_norm(grid, u, 0.0) == pytest.approx(np.sqrt(nl4s.mass(grid, u)), rel=1e-12)
    with pytest.raises(nl4s.GridMismatch):
        nl4s.mass(grid, u[:-1])


def test_ground_state(q256):
    grid, gs = q256
    assert gs["residual"] < 1e-10
    Q = gs["Q"]
    assert Q.shape == (256,)
    assert abs(nl4s.energy(grid, Q)) < 1e-6 * gs["laplacian_norm"] ** 2


def test_evolve_conserves_mass(q256):
    grid, gs = q256
    run = nl4s.evolve(grid, 0.9 * gs["Q"], T_max=0.05, dt0=1e-3, snapshot_interval=0.01, N=4.0)
    s = run["series"]
    assert run["stop"] == "horizon"
    assert np.max(np.abs(s["mass"] - s["mass"][0])) < 1e-10 * s["mass"][0]
    assert [t for t, _ in run["snapshots"]] == pytest.approx([0, 0.01, 0.02, 0.03, 0.04, 0.05])
    assert np.all(s["modified_energy"] != s["energy"])


def test_i_operator():
    m = nl4s.i_multiplier(8.0, 1.5, [1.0, 8.0, 16.0, 32.0])
    assert m[0] == 1.0 and m[1] == 1.0
    assert m[2] == 2.0 ** (1.5 - 2.0)


def test_exponents():
    assert nl4s.gamma_pq("16/5", "4", 5) == Fraction(0)
    assert nl4s.gamma_pq("2", "2", 1) == Fraction(-2)
    r = nl4s.paper_exponents(5, 1.9, 0.6)
    assert r["gamma_lower_gwp"] == pytest.approx(40 / 23)
    with pytest.raises(nl4s.DomainError):
        nl4s.paper_exponents(5, 2.5, 0.0)


def test_snapshot_roundtrip(tmp_path):
    grid = nl4s.Grid(2, 16, 1.0)
    rng = np.random.default_rng(0)
    u = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
    path = str(tmp_path / "u.nl4s")
    nl4s.save_snapshot(path, grid, u, 0.5)
    g2, v, t = nl4s.load_snapshot(path)
    assert g2.n == 16 and t == 0.5
    assert np.array_equal(u, v)
    with open(path, "r+b") as f:
        f.write(b"XXXX")
    with pytest.raises(nl4s.FormatError, match="bad magic"):
        nl4s.load_snapshot(path)


def test_run_experiment(tmp_path):
    cfg = {
        "experiment": "evolve",
        "grid": {"dim": 1, "n": 128, "half_width": 20.0},
        "initial": {"recipe": "gaussian", "amplitude": 0.5},
        "evolve": {"T_max": 0.01},
        "output_dir": str(tmp_path / "run"),
    }
    man = nl4s.run_experiment(cfg)
    assert man["status"] == "pass"
    ok, checked, problems = nl4s.verify_manifest(str(tmp_path / "run" / "manifest.json"))
    assert ok and checked == len(man["artifacts"]) and not problems
    json.dumps(man)
