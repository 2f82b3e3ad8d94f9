"""Ground states of tensor-train operators by alternating sweeps (DMRG1/2, DMRG1c, AMEn)."""

from .models import diag_test_mpo, heisenberg_mpo
from .oracle import exact_ground_state
from .sweeps import Adaptive, FixedSchedule, ScheduleEntry, SweepConfig, SweepResult, run
from .tt import TTMatrix, TTVector, tt_random

__all__ = [
    "Adaptive",
    "FixedSchedule",
    "ScheduleEntry",
    "SweepConfig",
    "SweepResult",
    "TTMatrix",
    "TTVector",
    "diag_test_mpo",
    "exact_ground_state",
    "heisenberg_mpo",
    "run",
    "tt_random",
]
