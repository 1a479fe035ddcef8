"""Eavesdropping strategies plugged into the forward and backward channels.

The round engine calls `decide` once per round and only invokes the hooks
when it returns True, so an unattacked round never touches the strategy.
Strategies are immutable; anything Eve keeps between the forward and the
backward leg lives in the per-round context from `new_context`.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .protocol import LM05_ENCODING, PINGPONG_ENCODING, EncodingOp
from .qubit import (
    Basis,
    PureState,
    TwoQubitState,
    apply_on_wire,
    apply_single,
    measure,
    measure_wire,
    prepare,
    split_product,
    swap_gate,
)
from .rng import Slot

_EVE_BASIS = int(Slot.EVE_BASIS)
_EVE_FWD = int(Slot.EVE_FWD_MEASURE)
_EVE_BWD = int(Slot.EVE_BWD_MEASURE)


class AttackKind(enum.Enum):
    NONE = "none"
    INTERCEPT_RESEND = "ir"
    QMM = "qmm"


class ProbeKind(enum.Enum):
    ZERO = "zero"
    PLUS = "plus"


class AttackStrategy:
    """Identity channel; subclasses override the hooks they need.

    `forward`/`backward` carry a single traveling qubit (LM05, BB84).
    `forward_pair`/`backward_pair` carry Ping-Pong's travel qubit, which is
    wire 1 of Bob's pair. `forward_pair` may return a separate qubit for
    Alice in place of wire 1; `backward_pair` then receives it back.
    """

    kind = AttackKind.NONE

    def __init__(self, fraction: float = 0.0) -> None:
        if not 0.0 <= fraction <= 1.0:
            raise ValueError(f"attack fraction must lie in [0, 1], got {fraction}")
        self.fraction = fraction

    def decide(self, round_rand: float) -> bool:
        return round_rand < self.fraction

    def new_context(self):
        return None

    def forward(self, travel: PureState, ctx, draws: Sequence[float]) -> PureState:
        return travel

    def backward(self, returned: PureState, ctx,
                 draws: Sequence[float]) -> tuple[PureState, int | None]:
        return returned, None

    def forward_pair(self, pair: TwoQubitState, ctx,
                     draws: Sequence[float]) -> tuple[TwoQubitState, PureState | None]:
        return pair, None

    def backward_pair(self, pair: TwoQubitState, returned: PureState | None, ctx,
                      draws: Sequence[float]) -> tuple[TwoQubitState, int | None]:
        return pair, None

    def __repr__(self) -> str:
        return f"{type(self).__name__}(fraction={self.fraction})"


class NoAttack(AttackStrategy):
    def __init__(self) -> None:
        super().__init__(0.0)


@dataclass
class QmmContext:
    probe_prep: PureState
    stored_bob_qubit: PureState | None = None
    stored_pair: TwoQubitState | None = None


class QmmAttack(AttackStrategy):
    """Quantum man-in-the-middle.

    Eve swaps the traveling qubit for a probe in a known state, reads the
    probe when Alice sends it back, and replays the inferred encoding on
    Bob's withheld qubit. For LM05 the probe is always |0>. For Ping-Pong
    `pingpong_probe` picks |0> (read in Z, which cannot see a phase flip)
    or |+> (read in X).
    """

    kind = AttackKind.QMM

    def __init__(self, fraction: float = 1.0,
                 pingpong_probe: ProbeKind = ProbeKind.ZERO) -> None:
        super().__init__(fraction)
        self.pingpong_probe = ProbeKind(pingpong_probe)
        self._pp_basis = Basis.Z if self.pingpong_probe is ProbeKind.ZERO else Basis.X

    def new_context(self) -> QmmContext:
        return QmmContext(probe_prep=prepare(Basis.Z, 0))

    def forward(self, travel: PureState, ctx: QmmContext,
                draws: Sequence[float]) -> PureState:
        return qmm_forward(travel, ctx)

    def backward(self, returned: PureState, ctx: QmmContext,
                 draws: Sequence[float]) -> tuple[PureState, int]:
        return qmm_backward(returned, ctx, draws[_EVE_BWD])

    def forward_pair(self, pair, ctx: QmmContext, draws):
        ctx.probe_prep = prepare(self._pp_basis, 0)
        ctx.stored_pair = pair
        return pair, ctx.probe_prep

    def backward_pair(self, pair, returned, ctx: QmmContext, draws):
        bit, _ = measure(returned, self._pp_basis, draws[_EVE_BWD])
        restored = apply_on_wire(PINGPONG_ENCODING[EncodingOp(bit)], 1, ctx.stored_pair)
        return restored, bit

    def __repr__(self) -> str:
        return (f"QmmAttack(fraction={self.fraction}, "
                f"pingpong_probe={self.pingpong_probe.value})")


def qmm_forward(travel: PureState, ctx: QmmContext) -> PureState:
    """Swap Bob's qubit for Eve's probe through the two-qubit SWAP gate.

    The joint register starts as travel (x) probe; after the swap wire 0
    carries the probe on to Alice and wire 1 holds Bob's qubit for Eve.
    """
    joint = swap_gate(TwoQubitState.product(travel, ctx.probe_prep))
    to_alice, kept = split_product(joint)
    ctx.stored_bob_qubit = kept
    return to_alice


def qmm_backward(returned: PureState, ctx: QmmContext,
                 rand: float) -> tuple[PureState, int]:
    """Read Alice's operation off the probe and copy it onto Bob's qubit."""
    bit, _ = measure(returned, Basis.Z, rand)
    to_bob = apply_single(LM05_ENCODING[EncodingOp(bit)], ctx.stored_bob_qubit)
    return to_bob, bit


@dataclass
class InterceptContext:
    basis: Basis | None = None
    outcome: int | None = None


class InterceptResend(AttackStrategy):
    """Measure the forward qubit in a random basis and resend the eigenstate.

    Eve's guess of the key bit is her forward outcome. With `both_paths` she
    also measures the returned qubit in the same basis, resends that
    eigenstate, and guesses forward XOR backward outcome.
    """

    kind = AttackKind.INTERCEPT_RESEND

    def __init__(self, fraction: float = 1.0, both_paths: bool = False) -> None:
        super().__init__(fraction)
        self.both_paths = both_paths

    def new_context(self) -> InterceptContext:
        return InterceptContext()

    def forward(self, travel, ctx: InterceptContext, draws):
        return intercept_resend_forward(travel, draws[_EVE_BASIS], draws[_EVE_FWD], ctx)

    def backward(self, returned, ctx: InterceptContext, draws):
        if not self.both_paths:
            return returned, ctx.outcome
        bit, resent = measure(returned, ctx.basis, draws[_EVE_BWD])
        return resent, ctx.outcome ^ bit

    def forward_pair(self, pair, ctx: InterceptContext, draws):
        ctx.basis = Basis.Z if draws[_EVE_BASIS] < 0.5 else Basis.X
        ctx.outcome, pair = measure_wire(pair, 1, ctx.basis, draws[_EVE_FWD])
        return pair, None

    def backward_pair(self, pair, returned, ctx: InterceptContext, draws):
        if not self.both_paths:
            return pair, ctx.outcome
        bit, pair = measure_wire(pair, 1, ctx.basis, draws[_EVE_BWD])
        return pair, ctx.outcome ^ bit

    def __repr__(self) -> str:
        return f"InterceptResend(fraction={self.fraction}, both_paths={self.both_paths})"


def intercept_resend_forward(travel: PureState, rand_basis: float, rand_outcome: float,
                             ctx: InterceptContext | None = None) -> PureState:
    basis = Basis.Z if rand_basis < 0.5 else Basis.X
    bit, resent = measure(travel, basis, rand_outcome)
    if ctx is not None:
        ctx.basis, ctx.outcome = basis, bit
    return resent


def build_attack(kind: AttackKind, fraction: float,
                 pingpong_probe: ProbeKind = ProbeKind.ZERO,
                 ir_both_paths: bool = False) -> AttackStrategy:
    kind = AttackKind(kind)
    if kind is AttackKind.NONE:
        return NoAttack()
    if kind is AttackKind.QMM:
        return QmmAttack(fraction, pingpong_probe)
    return InterceptResend(fraction, ir_both_paths)
