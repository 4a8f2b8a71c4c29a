import numpy as np
import pytest

from dimersync.dynamics import (
    InitialState,
    Trajectory,
    equal_time_correlator,
    evolve,
    evolve_density_matrices,
    observable_matrix,
)
from dimersync.model import ChainParams, excitation_index, one_excitation_indices

REFERENCE = ChainParams.from_detuning(4, 0.25, 0.3, rate_over_freq=0.05)


def test_initial_state_constructors_normalized():
    for state in (InitialState.vacuum(4), InitialState.plus_product(4),
                  InitialState.half_vacuum_pair(4, 2, 3),
                  InitialState.half_vacuum_uniform(4),
                  InitialState.half_vacuum_site(4, 2)):
        assert np.linalg.norm(state.amplitudes) == pytest.approx(1.0, abs=1e-12)


def test_initial_state_rejects_unnormalized():
    with pytest.raises(ValueError):
        InitialState.from_vector(np.array([1.0, 1.0, 0.0, 0.0]))


def test_one_excitation_detection():
    assert InitialState.half_vacuum_pair(4, 2, 3).is_one_excitation
    assert InitialState.vacuum(4).is_one_excitation
    assert not InitialState.plus_product(4).is_one_excitation


def test_one_excitation_amplitudes_roundtrip():
    state = InitialState.half_vacuum_pair(4, 2, 3)
    c0, cs = state.one_excitation_amplitudes
    assert c0 == pytest.approx(1 / np.sqrt(2))
    assert cs[1] == pytest.approx(0.5)
    assert cs[2] == pytest.approx(0.5)
    assert cs[0] == cs[3] == 0.0


def test_parse_descriptors():
    assert InitialState.parse("vacuum", 4).label == "vacuum"
    assert InitialState.parse("plus_product", 4).label == "plus_product"
    pair = InitialState.parse("half_vacuum_pair:2,3", 4)
    assert np.array_equal(pair.amplitudes,
                          InitialState.half_vacuum_pair(4, 2, 3).amplitudes)
    amps = InitialState.parse("amplitudes:0.70710678118654752,0,0.5,0.5,0", 4)
    assert amps.is_one_excitation
    with pytest.raises(ValueError):
        InitialState.parse("nonsense", 4)


def test_vacuum_stays_dark():
    traj = evolve(REFERENCE, InitialState.vacuum(4), t_end=5.0)
    for label, series in traj.series.items():
        assert np.max(np.abs(series)) < 1e-12, label


def test_isolated_spin_population_decay():
    p = ChainParams(2, 1.0, 0.25, 0.0, 0.07, 0.0125)
    init = InitialState.one_excitation(2, 0.0, [1.0, 0.0])
    traj = evolve(p, init, t_end=20.0, observables=["n_1"])
    expected = np.exp(-2 * 0.07 * traj.times)
    assert np.max(np.abs(traj.series["n_1"] - expected)) < 1e-7


def test_trajectory_grid_and_series_lengths():
    traj = evolve(REFERENCE, InitialState.half_vacuum_site(4, 2), t_end=3.0)
    assert len(traj.times) == len(traj.series["sx_1"])
    assert traj.times[0] == 0.0
    assert np.ptp(np.diff(traj.times)) < 1e-12
    with pytest.raises(ValueError):
        Trajectory(traj.times, {"bad": traj.series["sx_1"][:-1]})


def test_trace_hermiticity_positivity_along_trajectory():
    times = np.linspace(0.0, 30.0, 40)
    rhos = evolve_density_matrices(REFERENCE, InitialState.plus_product(4), times)
    traces = np.einsum("tii->t", rhos)
    assert np.max(np.abs(traces - 1.0)) < 1e-8
    herm = np.max(np.abs(rhos - np.conj(np.transpose(rhos, (0, 2, 1)))))
    assert herm < 1e-9
    for rho in rhos[::8]:
        sym = 0.5 * (rho + rho.conj().T)
        assert np.min(np.linalg.eigvalsh(sym)) >= -1e-8


def test_asymptotic_decay_to_vacuum():
    p = REFERENCE
    t_end = 10.0 / min(p.gamma1, p.gamma2)
    init = InitialState.half_vacuum_uniform(4)
    traj = evolve(p, init, t_end, dt_sample=t_end / 200,
                  observables=[f"n_{j}" for j in range(1, 5)])
    bound = np.exp(-2 * min(p.gamma1, p.gamma2) * t_end) + 1e-8
    for j in range(1, 5):
        assert traj.series[f"n_{j}"][-1] < bound


def test_one_excitation_blocks_stay_decoupled():
    times = np.linspace(0.0, 20.0, 30)
    rhos = evolve_density_matrices(REFERENCE, InitialState.half_vacuum_pair(4, 2, 3),
                                   times)
    allowed = {0} | {int(i) for i in one_excitation_indices(4)}
    outside = [i for i in range(16) if i not in allowed]
    pops = np.abs(rhos[:, outside, outside])
    assert np.max(pops) < 1e-10


def test_tolerance_halving_convergence():
    init = InitialState.half_vacuum_pair(4, 2, 3)
    kw = dict(t_end=40.0, dt_sample=0.5, observables=["sx_1", "sx_2"])
    a = evolve(REFERENCE, init, rtol=1e-9, atol=1e-12, **kw)
    b = evolve(REFERENCE, init, rtol=5e-10, atol=5e-13, **kw)
    for label in ("sx_1", "sx_2"):
        assert np.max(np.abs(a.series[label] - b.series[label])) < 1e-7


def test_equal_time_correlator_vacuum_zero():
    traj = equal_time_correlator(REFERENCE, InitialState.vacuum(4), t_end=3.0)
    assert np.max(np.abs(traj.series["sxsx_1_2"])) < 1e-12


def test_equal_time_correlator_identity_in_restricted_sector():
    # <sx_j sx_k> = 2 Re <sp_j sm_k> for states confined to <=1 excitation
    init = InitialState.half_vacuum_pair(4, 2, 3)
    traj = evolve(REFERENCE, init, t_end=25.0,
                  observables=["sxsx_1_2", "spsm_1_2"])
    lhs = traj.series["sxsx_1_2"]
    rhs = 2.0 * traj.series["spsm_1_2_re"]
    assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_observable_matrix_errors():
    with pytest.raises(ValueError):
        observable_matrix("sx_9", 4)
    with pytest.raises(ValueError):
        observable_matrix("foo_1", 4)


def test_evolve_input_validation():
    init = InitialState.vacuum(4)
    with pytest.raises(ValueError):
        evolve(REFERENCE, init, t_end=-1.0)
    with pytest.raises(ValueError):
        evolve(REFERENCE, init, t_end=1.0, dt_sample=0.0)
    with pytest.raises(ValueError):
        evolve(REFERENCE, InitialState.vacuum(6), t_end=1.0)


def test_csv_and_meta_roundtrip(tmp_path):
    init = InitialState.half_vacuum_site(4, 2)
    traj = evolve(REFERENCE, init, t_end=2.0, observables=["sx_1", "sx_2"])
    csv_path = tmp_path / "traj.csv"
    traj.to_csv(csv_path)
    data = np.genfromtxt(csv_path, delimiter=",", names=True)
    assert np.allclose(data["t"], traj.times)
    assert np.allclose(data["sx_1"], traj.series["sx_1"])
    meta_path = tmp_path / "traj.meta.json"
    traj.write_meta(meta_path)
    import json
    meta = json.loads(meta_path.read_text())
    assert meta["params"]["n_spins"] == 4
    assert meta["initial_state"] == "half_vacuum_site:2"
