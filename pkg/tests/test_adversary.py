import itertools

import pytest

from conftest import make_draws
from twoway_qkd.adversary import (
    AttackStrategy,
    InterceptResend,
    NoAttack,
    QmmAttack,
    QmmContext,
    build_attack,
    intercept_resend_forward,
    qmm_backward,
    qmm_forward,
)
from twoway_qkd.protocol import EncodingOp, Protocol, run_round, run_round_lm05
from twoway_qkd.qubit import (
    I_PAULI_Y,
    PAULI_Z,
    Basis,
    TwoQubitState,
    apply_single,
    prepare,
    same_up_to_phase,
    swap_gate,
)

Z0, Z1, PLUS, MINUS = (prepare(Basis.Z, 0), prepare(Basis.Z, 1),
                       prepare(Basis.X, 0), prepare(Basis.X, 1))


def _ctx():
    return QmmContext(probe_prep=Z0)


class TestQmmForward:
    @pytest.mark.parametrize("travel", [PLUS, Z1, MINUS])
    def test_alice_gets_probe_eve_keeps_bob_qubit(self, travel):
        ctx = _ctx()
        to_alice = qmm_forward(travel, ctx)
        assert same_up_to_phase(to_alice, Z0)
        assert same_up_to_phase(ctx.stored_bob_qubit, travel)

    def test_swap_involution_on_joint_state(self):
        joint = TwoQubitState.product(PLUS, Z0)
        assert swap_gate(swap_gate(joint)) == joint


class TestQmmBackward:
    def test_flip_is_copied(self):
        ctx = _ctx()
        qmm_forward(PLUS, ctx)
        to_bob, bit = qmm_backward(apply_single(I_PAULI_Y, Z0), ctx, 0.5)
        assert bit == 1
        assert same_up_to_phase(to_bob, apply_single(I_PAULI_Y, PLUS))

    def test_pass_leaves_bob_qubit(self):
        ctx = _ctx()
        qmm_forward(Z1, ctx)
        to_bob, bit = qmm_backward(Z0, ctx, 0.5)
        assert bit == 0 and to_bob == Z1

    @pytest.mark.parametrize("basis,bit,op",
                             list(itertools.product(Basis, (0, 1), EncodingOp)))
    def test_exhaustive_inference_lm05(self, basis, bit, op):
        for bob_rand, eve_rand in itertools.product((0.0, 0.5, 0.999999), repeat=2):
            d = make_draws(prep_basis=0.0 if basis is Basis.Z else 0.9, prep_bit=0.9 * bit,
                           mode=0.9, alice_op=0.9 * op, bob_measure=bob_rand,
                           eve_bwd_measure=eve_rand)
            rec = run_round_lm05(d, 0.25, QmmAttack(1.0))
            assert rec.attacked
            assert rec.eve_inferred_bit == op
            assert rec.mm_error is False


class TestInterceptResend:
    def test_matching_basis_undisturbed(self):
        assert intercept_resend_forward(Z0, 0.1, 0.7) == Z0

    def test_conjugate_basis_random(self):
        assert intercept_resend_forward(Z0, 0.9, 0.25) == PLUS
        assert intercept_resend_forward(Z0, 0.9, 0.75) == MINUS

    def test_both_paths_guess_uses_forward_basis(self):
        att = InterceptResend(1.0, both_paths=True)
        ctx = att.new_context()
        att.forward(PLUS, ctx, make_draws(eve_basis=0.9))
        returned, guess = att.backward(MINUS, ctx, make_draws())
        assert returned == MINUS and guess == 1


class TestPingPongProbe:
    def test_zero_probe_blind_to_phase_flip(self):
        assert same_up_to_phase(apply_single(PAULI_Z, Z0), Z0)

    def test_zero_probe_always_infers_pass(self):
        for op in (0.1, 0.9):
            rec = run_round(Protocol.PINGPONG, make_draws(mode=0.9, alice_op=op), 0.25,
                            QmmAttack(1.0))
            assert rec.eve_inferred_bit == 0

    def test_plus_probe_reads_phase(self):
        for op in EncodingOp:
            rec = run_round(Protocol.PINGPONG, make_draws(mode=0.9, alice_op=0.9 * op), 0.25,
                            QmmAttack(1.0, "plus"))
            assert rec.eve_inferred_bit == op
            assert rec.mm_error is False


class _Exploding(AttackStrategy):
    def forward(self, *a):
        raise AssertionError("hook called on an unattacked round")

    backward = forward_pair = backward_pair = forward


@pytest.mark.parametrize("protocol", list(Protocol))
def test_unattacked_rounds_skip_hooks(protocol):
    att = _Exploding(0.0)
    for mode in (0.1, 0.9):
        rec = run_round(protocol, make_draws(mode=mode, attack=0.5), 0.25, att)
        assert not rec.attacked


def test_decide_is_bernoulli_threshold():
    att = QmmAttack(0.3)
    assert att.decide(0.29) and not att.decide(0.3)
    assert not NoAttack().decide(0.0)


def test_fraction_validated():
    with pytest.raises(ValueError):
        QmmAttack(1.5)


def test_build_attack():
    assert isinstance(build_attack("none", 0.7), NoAttack)
    assert isinstance(build_attack("qmm", 0.7), QmmAttack)
    ir = build_attack("ir", 0.7, ir_both_paths=True)
    assert isinstance(ir, InterceptResend) and ir.both_paths
