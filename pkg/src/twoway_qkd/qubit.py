"""Exact pure-state kernel for one and two qubits.

States are immutable values holding Python complex amplitudes. Measurement
never draws its own randomness: callers pass a uniform number in [0, 1),
which keeps every operation a pure function of its arguments.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Sequence

NORM_TOL = 1e-9
# rejection threshold at operation boundaries
UNITARY_TOL = 1e-6
# branches lighter than this are treated as rounding residue
ZERO_BRANCH = 1e-12

SQRT_HALF = 1.0 / math.sqrt(2.0)


class QubitError(ValueError):
    pass


class NonUnitaryError(QubitError):
    pass


class InvalidWireError(QubitError):
    pass


class Basis(enum.Enum):
    Z = "Z"
    X = "X"


class BellKind(enum.Enum):
    PHI_PLUS = "PhiPlus"
    PHI_MINUS = "PhiMinus"
    PSI_PLUS = "PsiPlus"
    PSI_MINUS = "PsiMinus"


def _check_finite(amps: Sequence[complex]) -> None:
    # nan and inf both survive summation, so one check covers every entry
    if not cmath.isfinite(sum(amps)):
        raise QubitError(f"non-finite amplitude in {amps!r}")


@dataclass(frozen=True, slots=True)
class PureState:
    """Single-qubit state a0|0> + a1|1>."""

    amp0: complex
    amp1: complex

    def __post_init__(self) -> None:
        if not cmath.isfinite(self.amp0 + self.amp1):
            raise QubitError(f"non-finite amplitude in {self!r}")

    @property
    def norm2(self) -> float:
        return abs(self.amp0) ** 2 + abs(self.amp1) ** 2

    def inner(self, other: PureState) -> complex:
        """<self|other>."""
        return self.amp0.conjugate() * other.amp0 + self.amp1.conjugate() * other.amp1


@dataclass(frozen=True, slots=True)
class TwoQubitState:
    """Amplitudes ordered |00>, |01>, |10>, |11>; wire 0 is the left factor."""

    amps: tuple[complex, complex, complex, complex]

    def __post_init__(self) -> None:
        if len(self.amps) != 4:
            raise QubitError("two-qubit state needs exactly 4 amplitudes")
        _check_finite(self.amps)

    @property
    def norm2(self) -> float:
        return sum(abs(a) ** 2 for a in self.amps)

    def inner(self, other: TwoQubitState) -> complex:
        return sum(a.conjugate() * b for a, b in zip(self.amps, other.amps))

    @classmethod
    def product(cls, first: PureState, second: PureState) -> TwoQubitState:
        a0, a1 = first.amp0, first.amp1
        b0, b1 = second.amp0, second.amp1
        return cls((a0 * b0, a0 * b1, a1 * b0, a1 * b1))

    @classmethod
    def basis_state(cls, index: int) -> TwoQubitState:
        amps = [0j, 0j, 0j, 0j]
        amps[index] = 1 + 0j
        return cls(tuple(amps))


@dataclass(frozen=True, slots=True)
class Unitary2:
    """2x2 unitary stored row-major as ((a, b), (c, d)).

    Construction checks U^dagger U = I and raises NonUnitaryError when the
    residual exceeds UNITARY_TOL.
    """

    a: complex
    b: complex
    c: complex
    d: complex
    name: str = ""

    def __post_init__(self) -> None:
        _check_finite((self.a, self.b, self.c, self.d))
        if self.residual() > UNITARY_TOL:
            raise NonUnitaryError(
                f"gate {self.name or '<anonymous>'} is not unitary "
                f"(residual {self.residual():.3g})"
            )

    @classmethod
    def from_matrix(cls, m: Sequence[Sequence[complex]], name: str = "") -> Unitary2:
        (a, b), (c, d) = m
        return cls(complex(a), complex(b), complex(c), complex(d), name)

    def residual(self) -> float:
        """Max-entry magnitude of U^dagger U - I."""
        a, b, c, d = self.a, self.b, self.c, self.d
        m00 = a.conjugate() * a + c.conjugate() * c - 1
        m01 = a.conjugate() * b + c.conjugate() * d
        m11 = b.conjugate() * b + d.conjugate() * d - 1
        return max(abs(m00), abs(m01), abs(m11))

    def __matmul__(self, other: Unitary2) -> Unitary2:
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        return Unitary2(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h,
                        f"{self.name}*{other.name}")

    def dagger(self) -> Unitary2:
        return Unitary2(self.a.conjugate(), self.c.conjugate(), self.b.conjugate(),
                        self.d.conjugate(), f"{self.name}^dag")


IDENTITY = Unitary2(1, 0, 0, 1, "I")
PAULI_X = Unitary2(0, 1, 1, 0, "X")
PAULI_Z = Unitary2(1, 0, 0, -1, "Z")
# iY = Z.X: flips the bit value in both the Z and the X basis
I_PAULI_Y = Unitary2(0, 1, -1, 0, "iY")
HADAMARD = Unitary2(SQRT_HALF, SQRT_HALF, SQRT_HALF, -SQRT_HALF, "H")

NAMED_GATES = (IDENTITY, PAULI_X, PAULI_Z, I_PAULI_Y, HADAMARD)

_EIGEN_Z = (PureState(1 + 0j, 0j), PureState(0j, 1 + 0j))
_EIGEN_X = (PureState(SQRT_HALF + 0j, SQRT_HALF + 0j),
            PureState(SQRT_HALF + 0j, -SQRT_HALF + 0j))


def _eigen(basis: Basis, bit: int) -> PureState:
    return (_EIGEN_Z if basis is Basis.Z else _EIGEN_X)[bit]


_BELL = {
    BellKind.PHI_PLUS: TwoQubitState((SQRT_HALF + 0j, 0j, 0j, SQRT_HALF + 0j)),
    BellKind.PHI_MINUS: TwoQubitState((SQRT_HALF + 0j, 0j, 0j, -SQRT_HALF + 0j)),
    BellKind.PSI_PLUS: TwoQubitState((0j, SQRT_HALF + 0j, SQRT_HALF + 0j, 0j)),
    BellKind.PSI_MINUS: TwoQubitState((0j, SQRT_HALF + 0j, -SQRT_HALF + 0j, 0j)),
}
BELL_ORDER = tuple(BellKind)


def prepare(basis: Basis, bit: int) -> PureState:
    """Eigenstate of `basis` carrying `bit` (|0>,|1> or |+>,|->)."""
    return _eigen(basis, bit)


def apply_single(u: Unitary2, s: PureState) -> PureState:
    if not isinstance(u, Unitary2):
        u = Unitary2.from_matrix(u)
    return PureState(u.a * s.amp0 + u.b * s.amp1, u.c * s.amp0 + u.d * s.amp1)


def apply_on_wire(u: Unitary2, wire: int, s: TwoQubitState) -> TwoQubitState:
    """Apply u (x) I for wire 0 or I (x) u for wire 1."""
    if not isinstance(u, Unitary2):
        u = Unitary2.from_matrix(u)
    x00, x01, x10, x11 = s.amps
    if wire == 0:
        return TwoQubitState((
            u.a * x00 + u.b * x10,
            u.a * x01 + u.b * x11,
            u.c * x00 + u.d * x10,
            u.c * x01 + u.d * x11,
        ))
    if wire == 1:
        return TwoQubitState((
            u.a * x00 + u.b * x01,
            u.c * x00 + u.d * x01,
            u.a * x10 + u.b * x11,
            u.c * x10 + u.d * x11,
        ))
    raise InvalidWireError(f"wire must be 0 or 1, got {wire!r}")


def swap_gate(s: TwoQubitState) -> TwoQubitState:
    x00, x01, x10, x11 = s.amps
    return TwoQubitState((x00, x10, x01, x11))


def split_product(s: TwoQubitState) -> tuple[PureState, PureState]:
    """Factor a product state into (wire 0, wire 1) states.

    Raises QubitError if the state is entangled beyond NORM_TOL.
    """
    amps = s.amps
    if abs(amps[0] * amps[3] - amps[1] * amps[2]) > NORM_TOL:
        raise QubitError("state is entangled; cannot split into a product")
    mags = [abs(a) for a in amps]
    i, j = divmod(mags.index(max(mags)), 2)
    # row i of the 2x2 amplitude matrix is proportional to the wire-1 state
    w1 = (amps[2 * i], amps[2 * i + 1])
    n1 = math.sqrt(abs(w1[0]) ** 2 + abs(w1[1]) ** 2)
    second = PureState(w1[0] / n1, w1[1] / n1)
    pivot = second.amp0 if j == 0 else second.amp1
    first = PureState(amps[j] / pivot, amps[2 + j] / pivot)
    return first, second


def same_up_to_phase(a: PureState | TwoQubitState, b: PureState | TwoQubitState,
                     tol: float = NORM_TOL) -> bool:
    return abs(a.inner(b)) >= 1.0 - tol


def measure(s: PureState, basis: Basis, rand: float) -> tuple[int, PureState]:
    """Projective measurement; outcome 0 iff rand < p0."""
    eigen = _EIGEN_Z if basis is Basis.Z else _EIGEN_X
    p0 = abs(eigen[0].inner(s)) ** 2
    bit = 0 if rand < p0 else 1
    return bit, eigen[bit]


def _wire_projection(s: TwoQubitState, wire: int, basis: Basis,
                     bit: int) -> tuple[complex, complex, complex, complex]:
    """Unnormalized (|e><e| on `wire`) s for the eigenstate e = (basis, bit)."""
    e = _eigen(basis, bit)
    x00, x01, x10, x11 = s.amps
    ec0, ec1 = e.amp0.conjugate(), e.amp1.conjugate()
    if wire == 0:
        c0 = ec0 * x00 + ec1 * x10  # remaining wire-1 amplitude |0>
        c1 = ec0 * x01 + ec1 * x11
        return (e.amp0 * c0, e.amp0 * c1, e.amp1 * c0, e.amp1 * c1)
    if wire == 1:
        c0 = ec0 * x00 + ec1 * x01  # remaining wire-0 amplitude |0>
        c1 = ec0 * x10 + ec1 * x11
        return (c0 * e.amp0, c0 * e.amp1, c1 * e.amp0, c1 * e.amp1)
    raise InvalidWireError(f"wire must be 0 or 1, got {wire!r}")


def measure_wire(s: TwoQubitState, wire: int, basis: Basis,
                 rand: float) -> tuple[int, TwoQubitState]:
    """Measure one wire of a two-qubit state; the other wire is untouched."""
    proj0 = _wire_projection(s, wire, basis, 0)
    p0 = sum(abs(a) ** 2 for a in proj0)
    bit = 0 if rand < p0 else 1
    if bit == 0:
        proj, p = proj0, p0
    else:
        proj = _wire_projection(s, wire, basis, 1)
        p = sum(abs(a) ** 2 for a in proj)
    if p <= ZERO_BRANCH:
        bit = 1 - bit
        proj = _wire_projection(s, wire, basis, bit)
        p = sum(abs(a) ** 2 for a in proj)
    scale = 1.0 / math.sqrt(p)
    return bit, TwoQubitState(tuple(a * scale for a in proj))


def bell_state(kind: BellKind) -> TwoQubitState:
    return _BELL[kind]


def bell_probabilities(s: TwoQubitState) -> tuple[float, float, float, float]:
    """|<Bell_k|s>|^2 in BELL_ORDER."""
    return tuple(abs(_BELL[k].inner(s)) ** 2 for k in BELL_ORDER)


def bell_measure(s: TwoQubitState, rand: float) -> BellKind:
    acc = 0.0
    probs = bell_probabilities(s)
    for kind, p in zip(BELL_ORDER, probs):
        acc += p
        if rand < acc:
            return kind
    # rand fell past the accumulated mass through rounding
    return BELL_ORDER[max(range(4), key=probs.__getitem__)]
