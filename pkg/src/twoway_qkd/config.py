"""Run configuration and its flat ``key = value`` file format.

File keys are the long CLI flag names without the leading dashes, so a
config file and a command line say the same thing the same way.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .adversary import AttackKind, ProbeKind
from .protocol import Protocol

U64 = (1 << 64) - 1


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    protocol: Protocol = Protocol.LM05
    attack: AttackKind = AttackKind.NONE
    attack_fraction: float = 0.0
    control_prob: float = 0.25
    rounds: int = 100_000
    master_seed: int = 1
    workers: int = 1
    pingpong_probe: ProbeKind = ProbeKind.ZERO
    ir_both_paths: bool = False
    cm_backward_check: bool = False
    # full record streams are kept only up to this many rounds
    retain_records: int = 10_000

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "protocol", Protocol(self.protocol))
            object.__setattr__(self, "attack", AttackKind(self.attack))
            object.__setattr__(self, "pingpong_probe", ProbeKind(self.pingpong_probe))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if not 0.0 <= self.attack_fraction <= 1.0:
            raise ConfigError(f"fraction must lie in [0, 1], got {self.attack_fraction}")
        if not 0.0 < self.control_prob < 1.0:
            raise ConfigError(f"control-prob must lie in (0, 1), got {self.control_prob}")
        if self.rounds < 1:
            raise ConfigError(f"rounds must be >= 1, got {self.rounds}")
        if not 0 <= self.master_seed <= U64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.master_seed}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if self.retain_records < 0:
            raise ConfigError("retain_records must be >= 0")

    def with_(self, **changes) -> RunConfig:
        return replace(self, **changes)

    def to_text(self) -> str:
        return "".join(f"{k} = {v}\n" for k, v in _to_items(self))

    @classmethod
    def from_text(cls, text: str) -> RunConfig:
        return cls(**parse_config_text(text))


# file key -> (field name, parser, formatter)
_FIELDS = {
    "protocol": ("protocol", Protocol, lambda v: v.value),
    "attack": ("attack", AttackKind, lambda v: v.value),
    "fraction": ("attack_fraction", float, repr),
    "control-prob": ("control_prob", float, repr),
    "rounds": ("rounds", int, str),
    "seed": ("master_seed", int, str),
    "workers": ("workers", int, str),
    "pingpong-probe": ("pingpong_probe", ProbeKind, lambda v: v.value),
    "ir-both-paths": ("ir_both_paths", None, lambda v: str(v).lower()),
    "cm-backward-check": ("cm_backward_check", None, lambda v: str(v).lower()),
    "retain-records": ("retain_records", int, str),
}
FILE_KEYS = tuple(_FIELDS)


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _to_items(cfg: RunConfig) -> list[tuple[str, str]]:
    return [(key, fmt(getattr(cfg, name))) for key, (name, _, fmt) in _FIELDS.items()]


def parse_config_text(text: str) -> dict:
    """Parse ``key = value`` lines into RunConfig keyword arguments."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lstrip("-").replace("_", "-")
        if key not in _FIELDS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        name, parse, _ = _FIELDS[key]
        try:
            out[name] = _parse_bool(value) if parse is None else parse(value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from None
    return out
