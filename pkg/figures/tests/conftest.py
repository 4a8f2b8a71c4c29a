"""Shared fixtures: real artifacts produced through the simulator CLI."""

import subprocess
import sys

import pytest

MAP_CONFIG = """
n_spins = 4
gamma_over_omega = 0.05
initial_state = half_vacuum_pair:2,3
eval_time_gamma1 = 10
window_omega1 = 80
axis1 = delta
axis1_min = 0.0
axis1_max = 1.0
axis1_steps = 11
axis2 = lambda
axis2_min = 0.05
axis2_max = 0.5
axis2_steps = 10
workers = 2
"""

SPECTRUM_CONFIG = """
n_spins = 4
delta = {delta}
lambda = 0.05
gamma_over_omega = 0.05
pair = 1,2
nu_min = -2.5
nu_max = 2.5
"""

TRAJECTORY_CONFIG = """
n_spins = 4
delta = 0.75
lambda = 0.1
gamma_over_omega = 0.05
initial_state = half_vacuum_pair:2,4
eval_time_gamma1 = 10
window_omega1 = 80
rolling_points = 40
"""


def run_simulator(args):
    proc = subprocess.run([sys.executable, "-m", "dimersync.cli", *args],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture(scope="session")
def map_artifact(tmp_path_factory):
    root = tmp_path_factory.mktemp("map")
    cfg = root / "map.cfg"
    cfg.write_text(MAP_CONFIG, encoding="utf-8")
    out = root / "out"
    run_simulator(["sync-map", "--config", str(cfg), "--out", str(out)])
    return out / "map.csv"


@pytest.fixture(scope="session")
def spectrum_artifacts(tmp_path_factory):
    root = tmp_path_factory.mktemp("spec")
    paths = []
    for delta in (0.8, 0.1):
        cfg = root / f"spec_{delta}.cfg"
        cfg.write_text(SPECTRUM_CONFIG.format(delta=delta), encoding="utf-8")
        out = root / f"out_{delta}"
        run_simulator(["corr-spectrum", "--config", str(cfg), "--out", str(out)])
        paths.append(out / "corr_spectrum_1_2.csv")
    return paths


@pytest.fixture(scope="session")
def trajectory_artifacts(tmp_path_factory):
    root = tmp_path_factory.mktemp("traj")
    cfg = root / "traj.cfg"
    cfg.write_text(TRAJECTORY_CONFIG, encoding="utf-8")
    out = root / "out"
    run_simulator(["evolve", "--config", str(cfg), "--out", str(out)])
    return out / "trajectory.csv", out / "rolling_sync.csv"
