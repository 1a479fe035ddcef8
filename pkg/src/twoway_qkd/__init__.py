"""Monte Carlo simulation and key-rate analysis for two-way QKD."""
from .adversary import AttackKind, InterceptResend, NoAttack, ProbeKind, QmmAttack
from .analysis import RunStatistics, Tally, binary_entropy, bb84_rate, key_rate
from .config import RunConfig
from .oracle import ExactDistribution, exact_round_distribution
from .protocol import Protocol, RoundMode, RoundRecord
from .simulate import run_simulation, sweep

__all__ = [
    "AttackKind", "ExactDistribution", "InterceptResend", "NoAttack", "ProbeKind",
    "Protocol", "QmmAttack", "RoundMode", "RoundRecord", "RunConfig", "RunStatistics",
    "Tally", "bb84_rate", "binary_entropy", "exact_round_distribution", "key_rate",
    "run_simulation", "sweep",
]
