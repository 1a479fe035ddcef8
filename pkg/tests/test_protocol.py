import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import make_draws
from twoway_qkd.adversary import InterceptResend, NoAttack, QmmAttack
from twoway_qkd.protocol import (
    EncodingOp,
    Protocol,
    RecordError,
    RoundMode,
    RoundRecord,
    run_round,
    run_round_bb84,
    run_round_lm05,
    run_round_pingpong,
)
from twoway_qkd.qubit import Basis, BellKind
from twoway_qkd.rng import N_SLOTS

C = 0.25
MM = 0.9  # MODE draw that selects message mode at c = 0.25
CM = 0.1

rows = st.lists(st.floats(0, 1, exclude_max=True), min_size=N_SLOTS, max_size=N_SLOTS)
attacks = st.sampled_from([
    NoAttack(), QmmAttack(0.5), QmmAttack(1.0, "plus"),
    InterceptResend(0.7), InterceptResend(1.0, both_paths=True),
])


def _basis_draw(b):
    return 0.0 if b is Basis.Z else 0.9


class TestLM05:
    def test_flip_decodes_one(self):
        rec = run_round_lm05(make_draws(mode=MM, alice_op=0.9), C, NoAttack())
        assert rec.mode is RoundMode.MESSAGE
        assert rec.prep == (Basis.Z, 0)
        assert rec.alice_action is EncodingOp.FLIP
        assert rec.bob_outcome == 1 and rec.mm_error is False

    @pytest.mark.parametrize("basis,bit,op", list(itertools.product(Basis, (0, 1), EncodingOp)))
    def test_decoding_deterministic_all_combinations(self, basis, bit, op):
        for bob_rand in (0.0, 0.3, 0.7, 0.999999):
            d = make_draws(prep_basis=_basis_draw(basis), prep_bit=0.9 * bit, mode=MM,
                           alice_op=0.9 * op, bob_measure=bob_rand)
            rec = run_round_lm05(d, C, NoAttack())
            assert rec.bob_outcome == op
            assert rec.mm_error is False

    def test_control_undisturbed(self):
        d = make_draws(prep_basis=0.9, prep_bit=0.9, mode=CM, alice_basis=0.9)
        rec = run_round_lm05(d, C, NoAttack())
        assert rec.mode is RoundMode.CONTROL
        assert rec.alice_action == (Basis.X, 1)
        assert rec.cm_basis_matched is True and rec.cm_error is False

    def test_control_unmatched_not_scored(self):
        d = make_draws(prep_basis=0.0, mode=CM, alice_basis=0.9)
        rec = run_round_lm05(d, C, NoAttack())
        assert rec.cm_basis_matched is False and rec.cm_error is None

    @pytest.mark.parametrize("bit", [0, 1])
    def test_qmm_control_error_half(self, bit):
        # enumerate Alice's two Born branches on Eve's |0> probe measured in X
        errors = []
        for alice_rand in (0.25, 0.75):
            d = make_draws(prep_basis=0.9, prep_bit=0.9 * bit, mode=CM, alice_basis=0.9,
                           alice_measure=alice_rand)
            rec = run_round_lm05(d, C, QmmAttack(1.0))
            assert rec.attacked and rec.cm_basis_matched
            errors.append(rec.cm_error)
        assert sorted(errors) == [False, True]

    def test_backward_check_clean_when_both_legs_agree(self):
        d = make_draws(mode=CM, attack=0.0)
        rec = run_round_lm05(d, C, QmmAttack(1.0), cm_backward_check=True)
        assert rec.cm_error is False

    def test_backward_check_flags_backward_disturbance(self):
        # Alice reads 0 off the probe (forward leg clean), resends |+>; Eve's Z
        # readout of |+> gives 1, so she applies iY and Bob sees |->
        d = make_draws(prep_basis=0.9, mode=CM, alice_basis=0.9, alice_measure=0.25,
                       eve_bwd_measure=0.75)
        plain = run_round_lm05(d, C, QmmAttack(1.0))
        checked = run_round_lm05(d, C, QmmAttack(1.0), cm_backward_check=True)
        assert plain.cm_error is False
        assert checked.cm_error is True

    def test_mode_draw_after_intercept_does_not_change_eve_view(self):
        seen = []

        class Spy(NoAttack):
            def __init__(self):
                super().__init__()
                self.fraction = 1.0

            def forward(self, travel, ctx, draws):
                seen.append(travel)
                return travel

        for mode in (MM, CM):
            run_round_lm05(make_draws(mode=mode), C, Spy())
        assert seen[0] == seen[1]


class TestPingPong:
    def test_flip_gives_psi_minus(self):
        rec = run_round_pingpong(make_draws(mode=MM, alice_op=0.9), C, NoAttack())
        assert rec.prep is BellKind.PSI_PLUS
        assert rec.bob_outcome == 1 and rec.mm_error is False

    def test_pass_gives_psi_plus(self):
        rec = run_round_pingpong(make_draws(mode=MM, alice_op=0.1), C, NoAttack())
        assert rec.bob_outcome == 0 and rec.mm_error is False

    @pytest.mark.parametrize("alice_rand", [0.1, 0.4, 0.6, 0.9])
    def test_control_anticorrelated(self, alice_rand):
        d = make_draws(mode=CM, alice_measure=alice_rand, home_measure=0.5)
        rec = run_round_pingpong(d, C, NoAttack())
        alice_bit = rec.alice_action[1]
        assert rec.bob_outcome == 1 - alice_bit
        assert rec.cm_basis_matched is True and rec.cm_error is False

    def test_qmm_control_error_half(self):
        # probe |0>: Alice always reads 0; Bob's home outcome is uniform
        errors = [run_round_pingpong(make_draws(mode=CM, home_measure=h), C,
                                     QmmAttack(1.0)).cm_error for h in (0.25, 0.75)]
        assert sorted(errors) == [False, True]

    def test_phi_outcome_is_error(self):
        # an X-basis intercept leaves |++>, which is half PhiPlus
        d = make_draws(mode=MM, alice_op=0.1, eve_basis=0.9, eve_fwd_measure=0.1,
                       bell_measure=0.1)
        rec = run_round_pingpong(d, C, InterceptResend(1.0))
        assert rec.mm_error is True


class TestBB84:
    def test_matched_no_error(self):
        for basis, bit in itertools.product(Basis, (0, 1)):
            d = make_draws(prep_basis=_basis_draw(basis), prep_bit=0.9 * bit,
                           bob_basis=_basis_draw(basis), bob_measure=0.5)
            rec = run_round_bb84(d, NoAttack())
            assert rec.sifted is True and rec.mm_error is False

    def test_mismatched_excluded(self):
        rec = run_round_bb84(make_draws(prep_basis=0.0, bob_basis=0.9), NoAttack())
        assert rec.sifted is False and rec.mm_error is None


@given(rows, attacks, st.sampled_from(list(Protocol)), st.booleans())
def test_records_satisfy_invariants(row, attack, protocol, back):
    rec = run_round(protocol, row, C, attack, back)
    rec.check()
    assert run_round(protocol, row, C, attack, back) == rec


@given(rows, st.sampled_from(list(Protocol)))
def test_no_attack_never_errs(row, protocol):
    rec = run_round(protocol, row, C, NoAttack())
    assert not rec.attacked
    assert rec.mm_error in (None, False)
    assert rec.cm_error in (None, False)


def test_record_check_rejects_bad_population():
    bad = RoundRecord(Protocol.LM05, RoundMode.MESSAGE, (Basis.Z, 0), EncodingOp.PASS,
                      False, 0, eve_inferred_bit=1, mm_error=False)
    with pytest.raises(RecordError):
        bad.check()
    bad = RoundRecord(Protocol.LM05, RoundMode.CONTROL, (Basis.Z, 0), (Basis.Z, 0),
                      False, 0, cm_basis_matched=True, cm_error=None)
    with pytest.raises(RecordError):
        bad.check()
