"""JSON and CSV serialization of runs and sweeps.

Floats are rounded to 12 significant digits before serialization and dict
keys are emitted in construction order, so a document re-serializes to the
same bytes. `workers` is an execution detail and is left out of the config
echo: output is identical for any worker count.
"""
from __future__ import annotations

import csv
import io
import json
import sys
from typing import Sequence, Union

from .analysis import RateEstimate, RunStatistics
from .config import RunConfig
from .oracle import ExactDistribution
from .simulate import SimulationResult, SweepPoint

SCHEMA_VERSION = 1

CSV_COLUMNS = (
    "protocol", "attack", "fraction", "control_prob", "rounds", "seed",
    "rounds_mm", "rounds_cm", "rounds_cm_matched",
    "e_cm", "e_cm_ci_half_width", "qber_mm", "qber_mm_ci_half_width",
    "i_ab", "i_e", "i_e_model", "f_hat", "key_rate", "key_rate_ci_half_width",
    "aborted", "eve_accuracy", "e_cm_exact", "qber_mm_exact", "eve_accuracy_exact",
    "error",
)

Results = Union[SimulationResult, Sequence[SweepPoint]]


def _g12(x: float) -> float:
    return float(format(x, ".12g"))


def _round_floats(obj):
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        return _g12(obj)
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def config_to_dict(cfg: RunConfig) -> dict:
    return {
        "protocol": cfg.protocol.value,
        "attack": cfg.attack.value,
        "fraction": cfg.attack_fraction,
        "control_prob": cfg.control_prob,
        "rounds": cfg.rounds,
        "seed": cfg.master_seed,
        "pingpong_probe": cfg.pingpong_probe.value,
        "ir_both_paths": cfg.ir_both_paths,
        "cm_backward_check": cfg.cm_backward_check,
    }


def _rate_to_dict(r: RateEstimate, count_name: str) -> dict:
    return {
        "rate": r.rate,
        "ci_low": r.lo,
        "ci_high": r.hi,
        "ci_half_width": r.half_width,
        "hoeffding_half_width": r.hoeffding,
        count_name: r.successes,
        "trials": r.trials,
    }


def statistics_to_dict(s: RunStatistics) -> dict:
    return {
        "rounds_total": s.rounds_total,
        "rounds_mm": s.rounds_mm,
        "rounds_cm": s.rounds_cm,
        "rounds_cm_matched": s.rounds_cm_matched,
        "rounds_mm_scored": s.rounds_mm_scored,
        "attacked_rounds": s.attacked_rounds,
        "e_cm": _rate_to_dict(s.e_cm, "errors"),
        "qber_mm": _rate_to_dict(s.qber_mm, "errors"),
        "i_ab": s.i_ab,
        "i_e": s.i_e,
        "i_e_model": s.i_e_model,
        # the intercept-resend model is a convention, not a proven bound
        "i_e_model_is_convention": s.i_e_model == "signature",
        "f_hat": s.f_hat,
        "key_rate": s.key_rate,
        "key_rate_ci_low": s.key_rate_lo,
        "key_rate_ci_high": s.key_rate_hi,
        "raw_key_rate": s.raw_key_rate,
        "aborted": s.aborted,
        "eve_empirical_accuracy": s.eve_empirical_accuracy,
    }


def run_to_dict(result: SimulationResult) -> dict:
    doc = {
        "schema": SCHEMA_VERSION,
        "kind": "run",
        "config": config_to_dict(result.config),
        "statistics": statistics_to_dict(result.statistics),
    }
    if result.oracle is not None:
        doc["oracle"] = result.oracle.to_dict()
    return _round_floats(doc)


def sweep_to_dict(template: RunConfig, points: Sequence[SweepPoint]) -> dict:
    rows = []
    for p in points:
        row = {"fraction": p.fraction, "seed": p.seed}
        if p.result is None:
            row["error"] = p.error
        else:
            row["statistics"] = statistics_to_dict(p.result.statistics)
            if p.result.oracle is not None:
                row["oracle"] = p.result.oracle.to_dict()
        rows.append(row)
    return _round_floats({
        "schema": SCHEMA_VERSION,
        "kind": "sweep",
        "config": config_to_dict(template),
        "points": rows,
    })


def to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def _csv_row(cfg: RunConfig, stats: RunStatistics | None,
             oracle: ExactDistribution | None, error: str | None) -> list[str]:
    row = {
        "protocol": cfg.protocol.value, "attack": cfg.attack.value,
        "fraction": cfg.attack_fraction, "control_prob": cfg.control_prob,
        "rounds": cfg.rounds, "seed": cfg.master_seed, "error": error,
    }
    if stats is not None:
        row.update(
            rounds_mm=stats.rounds_mm, rounds_cm=stats.rounds_cm,
            rounds_cm_matched=stats.rounds_cm_matched,
            e_cm=stats.e_cm.rate, e_cm_ci_half_width=stats.e_cm.half_width,
            qber_mm=stats.qber_mm.rate, qber_mm_ci_half_width=stats.qber_mm.half_width,
            i_ab=stats.i_ab, i_e=stats.i_e, i_e_model=stats.i_e_model, f_hat=stats.f_hat,
            key_rate=stats.key_rate, key_rate_ci_half_width=stats.key_rate_half_width,
            aborted=stats.aborted, eve_accuracy=stats.eve_empirical_accuracy,
        )
    if oracle is not None:
        row.update(e_cm_exact=oracle.e_cm_exact, qber_mm_exact=oracle.qber_mm_exact,
                   eve_accuracy_exact=oracle.eve_accuracy_exact)
    return [_cell(row.get(col)) for col in CSV_COLUMNS]


def to_csv(results: Results, template: RunConfig | None = None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    if isinstance(results, SimulationResult):
        r = results
        writer.writerow(_csv_row(r.config, r.statistics, r.oracle, None))
    else:
        for p in results:
            if p.result is not None:
                r = p.result
                writer.writerow(_csv_row(r.config, r.statistics, r.oracle, None))
            else:
                cfg = template.with_(attack_fraction=p.fraction, master_seed=p.seed)
                writer.writerow(_csv_row(cfg, None, None, p.error))
    return buf.getvalue()


def emit(results: Results, fmt: str = "json", destination: str | None = None,
         template: RunConfig | None = None) -> str:
    """Serialize and write to `destination` (a path; None or '-' for stdout)."""
    if fmt == "json":
        if isinstance(results, SimulationResult):
            text = to_json(run_to_dict(results))
        else:
            text = to_json(sweep_to_dict(template, results))
    elif fmt == "csv":
        text = to_csv(results, template)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if destination in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(destination, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
