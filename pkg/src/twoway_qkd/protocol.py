"""One-round state machines for LM05, Ping-Pong and a one-way BB84 baseline.

A round reads its randomness from `draws`, a sequence of uniforms indexed
by `rng.Slot`. Attack hooks are only invoked on rounds the strategy decided
to attack; on every other round the channel is the identity.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence, Union

from .qubit import (
    IDENTITY,
    I_PAULI_Y,
    PAULI_Z,
    Basis,
    BellKind,
    apply_on_wire,
    apply_single,
    bell_measure,
    bell_state,
    measure,
    measure_wire,
    prepare,
)
from .rng import Slot

if TYPE_CHECKING:
    from .adversary import AttackStrategy


class Protocol(enum.Enum):
    LM05 = "lm05"
    PINGPONG = "pingpong"
    BB84 = "bb84"


class RoundMode(enum.Enum):
    MESSAGE = "MM"
    CONTROL = "CM"


class EncodingOp(enum.IntEnum):
    """Alice's message-mode operation; the value is the key bit."""

    PASS = 0
    FLIP = 1


LM05_ENCODING = {EncodingOp.PASS: IDENTITY, EncodingOp.FLIP: I_PAULI_Y}
PINGPONG_ENCODING = {EncodingOp.PASS: IDENTITY, EncodingOp.FLIP: PAULI_Z}

_BELL_DECODE = {BellKind.PSI_PLUS: 0, BellKind.PSI_MINUS: 1}

# plain ints: cheaper to index with than enum members in the hot loop
_ATTACK = int(Slot.ATTACK)
_MODE = int(Slot.MODE)
_PREP_BASIS = int(Slot.PREP_BASIS)
_PREP_BIT = int(Slot.PREP_BIT)
_ALICE_OP = int(Slot.ALICE_OP)
_ALICE_BASIS = int(Slot.ALICE_BASIS)
_ALICE_MEASURE = int(Slot.ALICE_MEASURE)
_BOB_MEASURE = int(Slot.BOB_MEASURE)
_BOB_BASIS = int(Slot.BOB_BASIS)
_BELL_MEASURE = int(Slot.BELL_MEASURE)
_KEY_COIN = int(Slot.KEY_COIN)
_HOME_MEASURE = int(Slot.HOME_MEASURE)

Prep = Union[tuple[Basis, int], BellKind]
AliceAction = Union[EncodingOp, tuple[Basis, int], None]


class RecordError(AssertionError):
    pass


@dataclass(frozen=True, slots=True)
class RoundRecord:
    """Transcript of one round.

    `prep` is Bob's (basis, bit) for LM05, his Bell pair for Ping-Pong and the
    sender's (basis, bit) for BB84. `alice_action` is the EncodingOp in
    message mode and the announced (basis, outcome) in control mode; it is
    None for BB84, whose receiver basis sits in `bob_basis`.
    """

    protocol: Protocol
    mode: RoundMode
    prep: Prep
    alice_action: AliceAction
    attacked: bool
    bob_outcome: int
    eve_inferred_bit: int | None = None
    cm_basis_matched: bool | None = None
    cm_error: bool | None = None
    mm_error: bool | None = None
    sifted: bool | None = None
    bob_basis: Basis | None = None

    @property
    def key_bit(self) -> int | None:
        if self.mode is not RoundMode.MESSAGE:
            return None
        if self.protocol is Protocol.BB84:
            return self.prep[1]
        return int(self.alice_action)

    def check(self) -> None:
        """Raise RecordError if the population invariants do not hold."""
        if self.eve_inferred_bit is not None and not (
                self.attacked and self.mode is RoundMode.MESSAGE):
            raise RecordError("eve_inferred_bit outside an attacked message round")
        if self.mode is RoundMode.MESSAGE:
            if self.cm_basis_matched is not None or self.cm_error is not None:
                raise RecordError("control fields set on a message round")
            if self.protocol is Protocol.BB84:
                if self.sifted is None or (self.mm_error is None) == self.sifted:
                    raise RecordError("BB84 error flag must exist exactly on sifted rounds")
            else:
                if self.mm_error is None:
                    raise RecordError("message round without mm_error")
                if not isinstance(self.alice_action, EncodingOp):
                    raise RecordError("message round without an encoding op")
        else:
            if self.protocol is Protocol.BB84:
                raise RecordError("BB84 has no control mode")
            if self.mm_error is not None:
                raise RecordError("mm_error set on a control round")
            if self.cm_basis_matched is None:
                raise RecordError("control round without cm_basis_matched")
            if (self.cm_error is not None) != self.cm_basis_matched:
                raise RecordError("cm_error must be set exactly on matched control rounds")


def _basis(u: float) -> Basis:
    return Basis.Z if u < 0.5 else Basis.X


def _bit(u: float) -> int:
    return 0 if u < 0.5 else 1


def run_round_lm05(draws: Sequence[float], control_prob: float,
                   attack: AttackStrategy, cm_backward_check: bool = False) -> RoundRecord:
    prep_basis = _basis(draws[_PREP_BASIS])
    prep_bit = _bit(draws[_PREP_BIT])
    travel = prepare(prep_basis, prep_bit)

    attacked = attack.decide(draws[_ATTACK])
    ctx = attack.new_context() if attacked else None
    if attacked:
        travel = attack.forward(travel, ctx, draws)

    if draws[_MODE] < control_prob:
        alice_basis = _basis(draws[_ALICE_BASIS])
        alice_bit, returned = measure(travel, alice_basis, draws[_ALICE_MEASURE])
        if attacked:
            returned, _ = attack.backward(returned, ctx, draws)
        bob_bit, _ = measure(returned, prep_basis, draws[_BOB_MEASURE])
        matched = alice_basis is prep_basis
        error = None
        if matched:
            error = alice_bit != prep_bit
            if cm_backward_check:
                error = error or bob_bit != alice_bit
        return RoundRecord(Protocol.LM05, RoundMode.CONTROL, (prep_basis, prep_bit),
                           (alice_basis, alice_bit), attacked, bob_bit,
                           cm_basis_matched=matched, cm_error=error)

    op = EncodingOp.FLIP if draws[_ALICE_OP] >= 0.5 else EncodingOp.PASS
    returned = apply_single(LM05_ENCODING[op], travel)
    eve_bit = None
    if attacked:
        returned, eve_bit = attack.backward(returned, ctx, draws)
    outcome, _ = measure(returned, prep_basis, draws[_BOB_MEASURE])
    decoded = outcome ^ prep_bit
    return RoundRecord(Protocol.LM05, RoundMode.MESSAGE, (prep_basis, prep_bit), op,
                       attacked, decoded, eve_inferred_bit=eve_bit,
                       mm_error=decoded != op)


def run_round_pingpong(draws: Sequence[float], control_prob: float,
                       attack: AttackStrategy) -> RoundRecord:
    """Single-bit Ping-Pong: Bob keeps wire 0 of PsiPlus and sends wire 1."""
    pair = bell_state(BellKind.PSI_PLUS)
    attacked = attack.decide(draws[_ATTACK])
    ctx = attack.new_context() if attacked else None
    # Alice holds wire 1 of `pair` unless Eve handed her a separate qubit
    held = None
    if attacked:
        pair, held = attack.forward_pair(pair, ctx, draws)

    if draws[_MODE] < control_prob:
        if held is None:
            alice_bit, pair = measure_wire(pair, 1, Basis.Z, draws[_ALICE_MEASURE])
        else:
            alice_bit, held = measure(held, Basis.Z, draws[_ALICE_MEASURE])
        home_bit, pair = measure_wire(pair, 0, Basis.Z, draws[_HOME_MEASURE])
        return RoundRecord(Protocol.PINGPONG, RoundMode.CONTROL, BellKind.PSI_PLUS,
                           (Basis.Z, alice_bit), attacked, home_bit,
                           cm_basis_matched=True, cm_error=alice_bit == home_bit)

    op = EncodingOp.FLIP if draws[_ALICE_OP] >= 0.5 else EncodingOp.PASS
    gate = PINGPONG_ENCODING[op]
    if held is None:
        pair = apply_on_wire(gate, 1, pair)
    else:
        held = apply_single(gate, held)
    eve_bit = None
    if attacked:
        pair, eve_bit = attack.backward_pair(pair, held, ctx, draws)
    kind = bell_measure(pair, draws[_BELL_MEASURE])
    decoded = _BELL_DECODE.get(kind)
    if decoded is None:
        # PhiPlus/PhiMinus carry no valid codeword
        decoded = _bit(draws[_KEY_COIN])
        error = True
    else:
        error = decoded != op
    return RoundRecord(Protocol.PINGPONG, RoundMode.MESSAGE, BellKind.PSI_PLUS, op,
                       attacked, decoded, eve_inferred_bit=eve_bit, mm_error=error)


def run_round_bb84(draws: Sequence[float], attack: AttackStrategy) -> RoundRecord:
    prep_basis = _basis(draws[_PREP_BASIS])
    prep_bit = _bit(draws[_PREP_BIT])
    travel = prepare(prep_basis, prep_bit)
    attacked = attack.decide(draws[_ATTACK])
    if attacked:
        travel = attack.forward(travel, attack.new_context(), draws)
    bob_basis = _basis(draws[_BOB_BASIS])
    outcome, _ = measure(travel, bob_basis, draws[_BOB_MEASURE])
    sifted = bob_basis is prep_basis
    return RoundRecord(Protocol.BB84, RoundMode.MESSAGE, (prep_basis, prep_bit), None,
                       attacked, outcome, mm_error=(outcome != prep_bit) if sifted else None,
                       sifted=sifted, bob_basis=bob_basis)


def run_round(protocol: Protocol, draws: Sequence[float], control_prob: float,
              attack: AttackStrategy, cm_backward_check: bool = False) -> RoundRecord:
    if protocol is Protocol.LM05:
        return run_round_lm05(draws, control_prob, attack, cm_backward_check)
    if protocol is Protocol.PINGPONG:
        return run_round_pingpong(draws, control_prob, attack)
    return run_round_bb84(draws, attack)
