import numpy as np
import pytest

from dimersync.derivations import (
    BoseHubbardParams,
    CoolingParams,
    effective_spin_params,
    engineered_decay_rate,
)


def test_reference_exchange_coupling_magnitude():
    # t0 = t1 = 4 kHz, u01 = 40 kHz: |exchange| = 2*4*4/40 = 0.8 kHz
    bh = BoseHubbardParams(4.0, 4.0, 40.0, 40.0, 40.0)
    eff = effective_spin_params(bh)
    assert abs(eff.exchange_coupling) == pytest.approx(0.8, rel=1e-12)
    assert eff.exchange_coupling < 0


def test_symmetric_bands_cancel_field_shift():
    bh = BoseHubbardParams(3.0, 3.0, 35.0, 35.0, 50.0)
    assert effective_spin_params(bh).field_shift == pytest.approx(0.0, abs=1e-15)


def test_equal_repulsions_cancel_ising_coupling():
    bh = BoseHubbardParams(4.0, 4.0, 40.0, 40.0, 40.0)
    assert effective_spin_params(bh).ising_coupling == pytest.approx(0.0, abs=1e-15)


def test_nonpositive_repulsion_rejected():
    with pytest.raises(ValueError):
        BoseHubbardParams(4.0, 4.0, 0.0, 40.0, 40.0)
    with pytest.raises(ValueError):
        BoseHubbardParams(-4.0, 4.0, 40.0, 40.0, 40.0)


def test_weak_repulsion_warns_but_builds():
    with pytest.warns(UserWarning):
        bh = BoseHubbardParams(4.0, 4.0, 10.0, 10.0, 10.0)
    assert bh.u00 == 10.0


def _cooling(offset, eta=0.1, rabi=10.0, width=1.0):
    return CoolingParams(lamb_dicke=eta, rabi_eff=rabi, decay_internal=width / 2,
                         dephasing=width / 2, effective_detuning=5.0 + offset,
                         motional_freq=5.0)


def test_engineered_rate_peak_value():
    # on resonance: eta^2 Omega^2 / width
    assert engineered_decay_rate(_cooling(0.0)) == pytest.approx(0.01 * 100.0 / 1.0)


def test_engineered_rate_half_width_point():
    peak = engineered_decay_rate(_cooling(0.0))
    assert engineered_decay_rate(_cooling(1.0)) == pytest.approx(peak / 2)
    assert engineered_decay_rate(_cooling(-1.0)) == pytest.approx(peak / 2)


def test_engineered_rate_direct_value():
    # eta=0.1, Omega=10, width=1, offset=3: 0.01*100*1/(1+9) = 0.1
    assert engineered_decay_rate(_cooling(3.0)) == pytest.approx(0.1, rel=1e-12)


def test_engineered_rate_positive_random():
    rng = np.random.default_rng(2)
    for _ in range(25):
        rate = engineered_decay_rate(_cooling(rng.normal(scale=4.0),
                                              eta=rng.uniform(0.01, 0.2),
                                              rabi=rng.uniform(0.5, 20.0),
                                              width=rng.uniform(0.1, 4.0)))
        assert rate > 0


def test_engineered_rate_zero_width_rejected():
    cooling = CoolingParams(0.1, 10.0, 0.0, 0.0, 5.0, 5.0)
    with pytest.raises(ValueError):
        engineered_decay_rate(cooling)


def test_large_lamb_dicke_warns():
    with pytest.warns(UserWarning):
        CoolingParams(0.5, 10.0, 0.5, 0.5, 5.0, 5.0)
