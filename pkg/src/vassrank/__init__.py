"""Termination and complexity analysis for vector addition systems with states."""

from .certificates import verify_ranking, verify_witness
from .complexity import classify, linear_complexity
from .dynamics import longest_trace
from .ranking import analyze, analyze_connected
from .vass import Vass

__all__ = [
    "Vass",
    "analyze",
    "analyze_connected",
    "classify",
    "linear_complexity",
    "longest_trace",
    "verify_ranking",
    "verify_witness",
]
