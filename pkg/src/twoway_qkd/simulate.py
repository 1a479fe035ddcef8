"""Monte Carlo driver: chunked round execution, merge, sweeps."""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .adversary import AttackKind, build_attack
from .analysis import (
    EveModel,
    InsufficientSamplesError,
    RunStatistics,
    Tally,
    build_statistics,
)
from .config import RunConfig
from .oracle import ExactDistribution, exact_round_distribution
from .protocol import Protocol, RoundRecord, run_round
from .rng import derive_seed, uniform_block

log = logging.getLogger(__name__)

BLOCK = 8192


@dataclass
class SimulationResult:
    config: RunConfig
    statistics: RunStatistics
    tally: Tally
    records: list[RoundRecord] | None = None
    oracle: ExactDistribution | None = None


def run_chunk(config: RunConfig, start: int, stop: int,
              retain: bool = False) -> tuple[Tally, list[RoundRecord] | None]:
    """Execute rounds [start, stop) and fold them into a Tally."""
    attack = build_attack(config.attack, config.attack_fraction,
                          config.pingpong_probe, config.ir_both_paths)
    tally = Tally()
    records = [] if retain else None
    protocol, c, back = config.protocol, config.control_prob, config.cm_backward_check
    add = tally.add
    for lo in range(start, stop, BLOCK):
        rows = uniform_block(config.master_seed, lo, min(stop, lo + BLOCK)).tolist()
        for row in rows:
            rec = run_round(protocol, row, c, attack, back)
            add(rec)
            if retain:
                records.append(rec)
    return tally, records


def _partition(n: int, parts: int) -> list[tuple[int, int]]:
    parts = min(parts, n)
    edges = [n * i // parts for i in range(parts + 1)]
    return list(zip(edges[:-1], edges[1:]))


def _chunk_job(args):
    return run_chunk(*args)


def eve_model(config: RunConfig) -> EveModel:
    """Eve-information model for the configured attack.

    Intercept-resend needs its per-attacked-round control signature and
    Eve's guessing accuracy; both come from the exact enumeration.
    """
    if config.protocol is Protocol.BB84:
        return EveModel("bb84")
    if config.attack is AttackKind.QMM:
        return EveModel("qmm")
    if config.attack is AttackKind.INTERCEPT_RESEND:
        exact = exact_round_distribution(config.with_(attack_fraction=1.0))
        return EveModel("signature", signature=exact.e_cm_attacked,
                        accuracy=exact.eve_accuracy_exact)
    return EveModel("none")


def run_simulation(config: RunConfig, with_oracle: bool = False) -> SimulationResult:
    """Run config.rounds rounds split over config.workers processes.

    Draws are keyed by (seed, round index), so the merged counts, and hence
    every statistic, are identical for any worker count.
    """
    retain = config.rounds <= config.retain_records
    chunks = _partition(config.rounds, config.workers)
    jobs = [(config, lo, hi, retain) for lo, hi in chunks]
    if len(jobs) == 1:
        parts = [run_chunk(*jobs[0])]
    else:
        with ProcessPoolExecutor(max_workers=len(jobs)) as pool:
            parts = list(pool.map(_chunk_job, jobs))
    tally = Tally()
    records = [] if retain else None
    for part_tally, part_records in parts:
        tally = tally.merge(part_tally)
        if retain:
            records.extend(part_records)
    try:
        stats = build_statistics(tally, config.protocol, eve_model(config))
    except InsufficientSamplesError as exc:
        raise InsufficientSamplesError(
            f"{exc} (rounds={config.rounds}, control-prob={config.control_prob})") from None
    oracle = exact_round_distribution(config) if with_oracle else None
    return SimulationResult(config, stats, tally, records, oracle)


@dataclass
class SweepPoint:
    fraction: float
    seed: int
    result: SimulationResult | None = None
    error: str | None = None


def sweep(template: RunConfig, f_grid: list[float],
          with_oracle: bool = False) -> list[SweepPoint]:
    """One run per attack fraction, each on its own derived seed.

    A point that fails for lack of samples is reported and the sweep goes on.
    """
    if not f_grid:
        raise ValueError("sweep grid is empty")
    points = []
    for i, f in enumerate(f_grid):
        cfg = template.with_(attack_fraction=f,
                             master_seed=derive_seed(template.master_seed, i))
        point = SweepPoint(f, cfg.master_seed)
        try:
            point.result = run_simulation(cfg, with_oracle)
        except InsufficientSamplesError as exc:
            log.warning("sweep point f=%s failed: %s", f, exc)
            point.error = str(exc)
        points.append(point)
    return points
