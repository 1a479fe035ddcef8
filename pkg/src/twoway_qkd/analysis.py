"""Security quantities estimated from a stream of round records.

Counts are folded into a `Tally`; every estimator reads counts only, so the
result does not depend on record order or on how the stream was split
across workers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields
from statistics import NormalDist
from typing import Callable, Iterable, Union

from .protocol import Protocol, RoundMode, RoundRecord

Z95 = NormalDist().inv_cdf(0.975)
CONFIDENCE = 0.95


class InsufficientSamplesError(ValueError):
    pass


@dataclass
class Tally:
    rounds_total: int = 0
    rounds_mm: int = 0
    rounds_cm: int = 0
    rounds_cm_matched: int = 0
    cm_errors: int = 0
    # message rounds carrying an error flag (all MM rounds, or sifted BB84 rounds)
    mm_scored: int = 0
    mm_errors: int = 0
    attacked: int = 0
    eve_guesses: int = 0
    eve_correct: int = 0

    def add(self, r: RoundRecord) -> None:
        self.rounds_total += 1
        if r.attacked:
            self.attacked += 1
        if r.mode is RoundMode.MESSAGE:
            self.rounds_mm += 1
            if r.mm_error is not None:
                self.mm_scored += 1
                self.mm_errors += r.mm_error
            if r.eve_inferred_bit is not None:
                self.eve_guesses += 1
                self.eve_correct += r.eve_inferred_bit == r.key_bit
        else:
            self.rounds_cm += 1
            if r.cm_basis_matched:
                self.rounds_cm_matched += 1
                self.cm_errors += r.cm_error

    def merge(self, other: Tally) -> Tally:
        return Tally(*(getattr(self, f.name) + getattr(other, f.name) for f in fields(self)))

    @classmethod
    def from_records(cls, records: Iterable[RoundRecord]) -> Tally:
        t = cls()
        for r in records:
            t.add(r)
        return t


Counts = Union[Tally, Iterable[RoundRecord]]


def _as_tally(x: Counts) -> Tally:
    return x if isinstance(x, Tally) else Tally.from_records(x)


@dataclass(frozen=True)
class RateEstimate:
    """Binomial rate with a 95% Wilson interval and a Hoeffding half-width."""

    successes: int
    trials: int
    rate: float
    lo: float
    hi: float
    hoeffding: float

    @property
    def half_width(self) -> float:
        return (self.hi - self.lo) / 2


def wilson_interval(successes: int, trials: int, z: float = Z95) -> tuple[float, float]:
    if trials <= 0:
        raise InsufficientSamplesError("Wilson interval needs at least one trial")
    p = successes / trials
    z2n = z * z / trials
    center = (p + z2n / 2) / (1 + z2n)
    spread = z / (1 + z2n) * math.sqrt(p * (1 - p) / trials + z2n / (4 * trials))
    return max(0.0, center - spread), min(1.0, center + spread)


def hoeffding_half_width(trials: int, confidence: float = CONFIDENCE) -> float:
    return math.sqrt(math.log(2 / (1 - confidence)) / (2 * trials))


def rate_estimate(successes: int, trials: int) -> RateEstimate:
    lo, hi = wilson_interval(successes, trials)
    return RateEstimate(successes, trials, successes / trials, lo, hi,
                        hoeffding_half_width(trials))


def binary_entropy(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def estimate_cm_error(records: Counts) -> RateEstimate:
    """Error rate over matched-basis control rounds."""
    t = _as_tally(records)
    if t.rounds_cm_matched == 0:
        raise InsufficientSamplesError(
            "no matched-basis control rounds; increase the number of rounds "
            "or the control probability")
    return rate_estimate(t.cm_errors, t.rounds_cm_matched)


def estimate_mm_qber(records: Counts) -> RateEstimate:
    t = _as_tally(records)
    if t.mm_scored == 0:
        raise InsufficientSamplesError(
            "no scored message rounds; increase the number of rounds")
    return rate_estimate(t.mm_errors, t.mm_scored)


def empirical_eve_accuracy(records: Counts) -> float:
    t = _as_tally(records)
    if t.eve_guesses == 0:
        raise InsufficientSamplesError("no attacked message rounds carry an Eve guess")
    return t.eve_correct / t.eve_guesses


def mutual_information_ab(qber: float) -> float:
    """1 - h(qber) for the binary symmetric channel from Alice to Bob."""
    if not 0.0 <= qber <= 0.5:
        raise ValueError(f"qber must lie in [0, 0.5], got {qber}; check the decoder")
    return 1.0 - binary_entropy(qber)


def eve_bound_qmm(e_cm: float) -> tuple[float, float]:
    """(f_hat, i_e) for the man-in-the-middle signature of 1/2 per attacked round."""
    if not 0.0 <= e_cm <= 1.0:
        raise ValueError(f"e_cm must lie in [0, 1], got {e_cm}")
    f_hat = min(1.0, 2.0 * e_cm)
    return f_hat, f_hat


def eve_bound_signature(e_cm: float, signature: float, accuracy: float) -> float:
    """Eve information when each attacked round shows control error `signature`.

    The attacked fraction is inferred as e_cm / signature; on each attacked
    message round Eve's guess is a binary channel with the given accuracy.
    """
    if signature <= 0.0:
        return 0.0
    attacked = min(1.0, e_cm / signature)
    return attacked * (1.0 - binary_entropy(accuracy))


def key_rate(i_ab: float, i_e: float) -> float:
    return max(0.0, i_ab - i_e)


def bb84_rate(qber: float) -> float:
    if not 0.0 <= qber <= 0.5:
        raise ValueError(f"qber must lie in [0, 0.5], got {qber}")
    return max(0.0, 1.0 - 2.0 * binary_entropy(qber))


def bb84_threshold(lo: float = 0.10, hi: float = 0.12, tol: float = 1e-12) -> float:
    """QBER at which 1 - 2 h(q) crosses zero, by bisection on [lo, hi]."""
    g = lambda q: 1.0 - 2.0 * binary_entropy(q)  # noqa: E731
    if g(lo) <= 0 or g(hi) >= 0:
        raise ValueError("bracket does not contain the BB84 zero crossing")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


@dataclass(frozen=True)
class EveModel:
    """How I_E is obtained from the control statistics.

    name is one of "none", "qmm", "signature" (intercept-resend, fed from
    exact per-attacked-round values) or "bb84" (one-way h(QBER) cost).
    """

    name: str
    signature: float = 0.0
    accuracy: float = 0.5

    def information(self, e_cm: float) -> float:
        if self.name == "none":
            return 0.0
        if self.name == "qmm":
            return eve_bound_qmm(e_cm)[1]
        if self.name == "signature":
            return eve_bound_signature(e_cm, self.signature, self.accuracy)
        if self.name == "bb84":
            return binary_entropy(min(e_cm, 0.5))
        raise ValueError(f"unknown Eve model {self.name!r}")


@dataclass(frozen=True)
class RunStatistics:
    rounds_total: int
    rounds_mm: int
    rounds_cm: int
    rounds_cm_matched: int
    rounds_mm_scored: int
    attacked_rounds: int
    e_cm: RateEstimate
    qber_mm: RateEstimate
    i_ab: float
    i_e: float
    i_e_model: str
    f_hat: float
    key_rate: float
    key_rate_lo: float
    key_rate_hi: float
    raw_key_rate: float
    eve_empirical_accuracy: float | None

    @property
    def aborted(self) -> bool:
        return self.raw_key_rate < 0.0

    @property
    def key_rate_half_width(self) -> float:
        return (self.key_rate_hi - self.key_rate_lo) / 2


def _rate_fn(model: EveModel) -> Callable[[float, float], float]:
    def rate(e_cm: float, qber: float) -> float:
        i_ab = mutual_information_ab(min(qber, 0.5))
        return i_ab - model.information(e_cm)
    return rate


def build_statistics(tally: Tally, protocol: Protocol, model: EveModel) -> RunStatistics:
    """Fold counts into the key-rate pipeline R = I_AB - I_E.

    For BB84 the disturbance statistic is the sifted QBER itself. Estimated
    QBERs above 1/2 are pure sampling noise here and are clamped to 1/2.
    """
    qber = estimate_mm_qber(tally)
    e_cm = qber if protocol is Protocol.BB84 else estimate_cm_error(tally)
    f_hat = min(1.0, 2.0 * e_cm.rate)
    i_ab = mutual_information_ab(min(qber.rate, 0.5))
    i_e = model.information(e_cm.rate)
    # R falls in both e_cm and qber, so interval endpoints bound it
    rate = _rate_fn(model)
    lo = rate(e_cm.hi, qber.hi)
    hi = rate(e_cm.lo, qber.lo)
    accuracy = tally.eve_correct / tally.eve_guesses if tally.eve_guesses else None
    return RunStatistics(
        rounds_total=tally.rounds_total,
        rounds_mm=tally.rounds_mm,
        rounds_cm=tally.rounds_cm,
        rounds_cm_matched=tally.rounds_cm_matched,
        rounds_mm_scored=tally.mm_scored,
        attacked_rounds=tally.attacked,
        e_cm=e_cm,
        qber_mm=qber,
        i_ab=i_ab,
        i_e=i_e,
        i_e_model=model.name,
        f_hat=f_hat,
        key_rate=key_rate(i_ab, i_e),
        key_rate_lo=max(0.0, lo),
        key_rate_hi=max(0.0, hi),
        raw_key_rate=i_ab - i_e,
        eve_empirical_accuracy=accuracy,
    )
