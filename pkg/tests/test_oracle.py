import time

import pytest

from twoway_qkd.config import RunConfig
from twoway_qkd.oracle import SWAP12, as_fraction, exact_round_distribution

EXACT = 1e-12


def exact(**kw):
    return exact_round_distribution(RunConfig(**kw))


def test_swap_matrix_is_involutive_permutation():
    import numpy as np
    assert np.array_equal(SWAP12 @ SWAP12, np.eye(8))


def test_qmm_lm05():
    d = exact(attack="qmm", attack_fraction=1.0)
    assert d.e_cm_exact == pytest.approx(0.5, abs=EXACT)
    assert d.qber_mm_exact == pytest.approx(0.0, abs=EXACT)
    assert d.eve_accuracy_exact == pytest.approx(1.0, abs=EXACT)
    assert as_fraction(d.e_cm_exact) == "1/2"


@pytest.mark.parametrize("f", [0.0, 0.2, 0.5, 0.8])
def test_qmm_lm05_mixes_linearly(f):
    d = exact(attack="qmm", attack_fraction=f)
    assert d.e_cm_exact == pytest.approx(f / 2, abs=EXACT)
    assert d.qber_mm_exact == pytest.approx(0.0, abs=EXACT)


def test_intercept_resend_lm05():
    d = exact(attack="ir", attack_fraction=1.0)
    assert d.e_cm_exact == pytest.approx(0.25, abs=EXACT)
    assert d.qber_mm_exact == pytest.approx(0.25, abs=EXACT)
    # forward-only Eve learns nothing about Alice's operation
    assert d.eve_accuracy_exact == pytest.approx(0.5, abs=EXACT)


def test_intercept_resend_lm05_both_paths():
    d = exact(attack="ir", attack_fraction=1.0, ir_both_paths=True)
    assert d.e_cm_exact == pytest.approx(0.25, abs=EXACT)
    assert d.qber_mm_exact == pytest.approx(0.25, abs=EXACT)
    # iY flips Eve's own eigenstate, so her second readout reveals the bit
    assert d.eve_accuracy_exact == pytest.approx(1.0, abs=EXACT)


def test_pingpong_qmm():
    zero = exact(protocol="pingpong", attack="qmm", attack_fraction=1.0)
    assert zero.e_cm_exact == pytest.approx(0.5, abs=EXACT)
    # a |0> probe cannot see the phase flip: Eve always replays Pass
    assert zero.qber_mm_exact == pytest.approx(0.5, abs=EXACT)
    assert zero.eve_accuracy_exact == pytest.approx(0.5, abs=EXACT)
    plus = exact(protocol="pingpong", attack="qmm", attack_fraction=1.0, pingpong_probe="plus")
    assert plus.e_cm_exact == pytest.approx(0.5, abs=EXACT)
    assert plus.qber_mm_exact == pytest.approx(0.0, abs=EXACT)
    assert plus.eve_accuracy_exact == pytest.approx(1.0, abs=EXACT)


def test_bb84_intercept_resend():
    d = exact(protocol="bb84", attack="ir", attack_fraction=1.0)
    assert d.qber_mm_exact == pytest.approx(0.25, abs=EXACT)


@pytest.mark.parametrize("protocol", ["lm05", "pingpong", "bb84"])
def test_no_attack_all_zero(protocol):
    d = exact(protocol=protocol, attack="none", attack_fraction=0.7)
    assert d.e_cm_exact == 0 and d.qber_mm_exact == 0
    assert d.eve_accuracy_exact is None


def test_control_prob_does_not_change_rates():
    a = exact(attack="qmm", attack_fraction=1.0, control_prob=0.1)
    b = exact(attack="qmm", attack_fraction=1.0, control_prob=0.9)
    assert a.e_cm_exact == pytest.approx(b.e_cm_exact, abs=EXACT)


def test_fast():
    t = time.perf_counter()
    for p in ("lm05", "pingpong", "bb84"):
        for a in ("none", "ir", "qmm"):
            exact(protocol=p, attack=a, attack_fraction=1.0, cm_backward_check=True)
    assert (time.perf_counter() - t) / 9 < 1.0
