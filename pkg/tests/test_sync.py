import numpy as np
import pytest

from dimersync.sync import GlobalSync, global_sync, pearson, pearson_max_delay


def make_times(t_end=100.0, dt=0.01):
    return np.arange(0.0, t_end + dt / 2, dt)


def test_identical_series_give_one():
    t = make_times(20.0)
    x = np.sin(1.3 * t) * np.exp(-0.01 * t)
    assert pearson(t, x, x, 2.0, 10.0) == pytest.approx(1.0, abs=1e-12)


def test_negated_series_give_minus_one():
    t = make_times(20.0)
    x = np.sin(1.3 * t)
    assert pearson(t, x, -x, 2.0, 10.0) == pytest.approx(-1.0, abs=1e-12)


def test_phase_shifted_sinusoids_give_cosine():
    # closed form: over whole periods the normalized covariance of
    # sin(wt) and sin(wt + phi) is cos(phi)
    omega = 2.0
    period = 2 * np.pi / omega
    t = make_times(12 * period, period / 4000)
    for phi in (0.3, 1.1, 2.5, -0.8):
        x1 = np.sin(omega * t)
        x2 = np.sin(omega * t + phi)
        c = pearson(t, x1, x2, 0.0, 8 * period)
        assert c == pytest.approx(np.cos(phi), abs=1e-6)


def test_scale_offset_invariance():
    rng = np.random.default_rng(4)
    t = make_times(30.0)
    x1 = np.cos(0.9 * t) + 0.2 * np.sin(2.4 * t)
    x2 = np.sin(0.9 * t + 0.4)
    base = pearson(t, x1, x2, 1.0, 20.0)
    for _ in range(10):
        a, c = rng.uniform(0.1, 5.0, size=2) * rng.choice([-1, 1], size=2)
        b, d = rng.normal(size=2)
        scaled = pearson(t, a * x1 + b, c * x2 + d, 1.0, 20.0)
        assert scaled == pytest.approx(np.sign(a * c) * base, abs=1e-10)


def test_symmetry_at_zero_delay():
    t = make_times(30.0)
    x1 = np.cos(0.9 * t) * np.exp(-0.02 * t)
    x2 = np.sin(1.1 * t)
    assert pearson(t, x1, x2, 1.0, 20.0) == pytest.approx(
        pearson(t, x2, x1, 1.0, 20.0), abs=1e-12)


def test_window_validation():
    t = make_times(10.0)
    x = np.sin(t)
    with pytest.raises(ValueError):
        pearson(t, x, x, 8.0, 5.0)       # runs past the series
    with pytest.raises(ValueError):
        pearson(t, x, x, 0.0, 0.05)      # fewer than 10 samples
    with pytest.raises(ValueError):
        pearson(np.array([0.0, 0.1, 0.3]), np.zeros(3), np.zeros(3), 0.0, 0.2)


def test_variance_floor_flags_constant_series():
    t = make_times(10.0)
    x = np.sin(t)
    flat = np.full_like(t, 0.7)
    assert np.isnan(pearson(t, x, flat, 0.0, 5.0))
    rep = pearson_max_delay(t, x, flat, 0.0, 5.0, 2.0)
    assert rep.undefined


def test_delay_absorbs_quarter_period_shift():
    omega = 1.0
    period = 2 * np.pi
    t = make_times(16 * period, period / 500)
    x1 = np.sin(omega * t)
    x2 = np.cos(omega * t)   # = sin(w t + pi/2): needs delay 3T/4 on x2
    rep = pearson_max_delay(t, x1, x2, 0.0, 4 * period, period)
    assert rep.c_max_delay == pytest.approx(1.0, abs=1e-4)
    # cos(w(t+tau)) = sin(wt) at tau = 3T/4 (first nonnegative solution)
    assert rep.tau_star == pytest.approx(0.75 * period, abs=period / 400)


def test_zero_delay_maximum_for_identical_series():
    t = make_times(40.0)
    x = np.sin(1.7 * t) * np.exp(-0.01 * t)
    rep = pearson_max_delay(t, x, x, 0.0, 20.0, 10.0)
    assert rep.tau_star == 0.0
    assert rep.c_max_delay == pytest.approx(1.0, abs=1e-12)
    assert rep.c_max_delay >= rep.c_value - 1e-12


def test_delayed_scan_matches_single_evaluations():
    rng = np.random.default_rng(12)
    t = make_times(60.0, 0.05)
    x1 = np.cos(0.8 * t) + 0.3 * np.sin(1.9 * t + 0.3)
    x2 = np.cos(0.8 * t + 0.7) + 0.2 * rng.normal(size=len(t))
    width, tau_max = 20.0, 10.0
    rep = pearson_max_delay(t, x1, x2, 5.0, width, tau_max)
    dt = t[1] - t[0]
    best = -2.0
    best_tau = 0.0
    for m in range(int(tau_max / dt) + 1):
        # same window on x1, shifted window on x2
        c = pearson(t[: len(t) - m], x1[: len(t) - m], x2[m:], 5.0, width)
        if c > best:
            best, best_tau = c, m * dt
    assert rep.c_max_delay == pytest.approx(best, abs=1e-12)
    assert rep.tau_star == pytest.approx(best_tau, abs=1e-12)


def test_max_delay_never_below_zero_delay_value():
    rng = np.random.default_rng(21)
    t = make_times(60.0, 0.02)
    for _ in range(10):
        x1 = np.cos(rng.uniform(0.5, 2.0) * t + rng.uniform(0, 6))
        x2 = np.cos(rng.uniform(0.5, 2.0) * t + rng.uniform(0, 6))
        rep = pearson_max_delay(t, x1, x2, 0.0, 30.0, 10.0)
        assert rep.c_max_delay >= rep.c_value - 1e-12


def test_max_delay_nondecreasing_in_tau_range():
    t = make_times(80.0, 0.02)
    x1 = np.sin(0.9 * t)
    x2 = np.sin(0.9 * t + 2.0)
    values = []
    for tau_max in (0.5, 1.5, 3.0, 6.0, 7.5):
        rep = pearson_max_delay(t, x1, x2, 0.0, 30.0, tau_max)
        values.append(rep.c_max_delay)
    assert np.all(np.diff(values) >= -1e-12)


def test_single_decaying_mode_synchronizes_any_phases():
    # one surviving mode: delayed correlation reaches 1 for any site
    # amplitudes and phases
    rng = np.random.default_rng(9)
    nu, rate = 0.7, 0.02
    period = 2 * np.pi / nu
    t = make_times(6 * period, period / 2000)
    for _ in range(8):
        a1, a2 = rng.uniform(0.2, 3.0, size=2)
        p1, p2 = rng.uniform(0, 2 * np.pi, size=2)
        x1 = a1 * np.cos(nu * t + p1) * np.exp(-rate * t)
        x2 = a2 * np.cos(nu * t + p2) * np.exp(-rate * t)
        rep = pearson_max_delay(t, x1, x2, 0.0, 2 * period, period)
        assert rep.c_max_delay >= 1.0 - 1e-3


def test_insufficient_coverage_for_delay_errors():
    t = make_times(10.0)
    x = np.sin(t)
    with pytest.raises(ValueError):
        pearson_max_delay(t, x, x, 0.0, 8.0, 5.0)


def test_global_sync_perfect_pairs():
    t = make_times(50.0, 0.02)
    base = np.sin(0.8 * t) * np.exp(-0.01 * t)
    coh = np.column_stack([base, 0.5 * base, -2.0 * base])
    result = global_sync(t, coh, 0.0, 20.0, 8.0)
    # limited by the delay grid step, not by the estimator
    assert result.c_t == pytest.approx(1.0, abs=1e-4)
    assert result.pair_matrix.shape == (3, 3)
    assert np.allclose(np.diag(result.pair_matrix), 1.0)


def test_global_sync_flagged_pair_zeroes_product():
    t = make_times(50.0, 0.02)
    base = np.sin(0.8 * t)
    coh = np.column_stack([base, base, np.zeros_like(base)])
    result = global_sync(t, coh, 0.0, 20.0, 8.0)
    assert result.c_t == 0.0
    assert (1, 3) in result.flagged_pairs and (2, 3) in result.flagged_pairs


def test_global_sync_product_structure():
    t = make_times(60.0, 0.02)
    x1 = np.sin(0.9 * t)
    x2 = np.sin(0.9 * t + 0.8)
    x3 = np.sin(1.7 * t)
    result = global_sync(t, np.column_stack([x1, x2, x3]), 0.0, 25.0, 7.0)
    product = 1.0
    for rep in result.reports:
        product *= rep.c_max_delay
    assert result.c_t == pytest.approx(product, rel=1e-12)


def test_global_sync_json(tmp_path):
    t = make_times(40.0, 0.02)
    base = np.cos(0.7 * t)
    result = global_sync(t, np.column_stack([base, base]), 0.0, 20.0, 5.0)
    import json
    payload = json.loads(result.to_json())
    assert payload["c_t"] == pytest.approx(1.0)
    assert payload["pairs"][0]["pair"] == [1, 2]
    assert isinstance(result, GlobalSync)
