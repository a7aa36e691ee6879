"""
The oscillating martingale construction, its magnitude schedules and the
processes that make the classic upcrossing bounds tight.
"""

from .schedules import (
    LOG_SQUARED_CAP,
    ScheduleKind,
    Schedule,
    invert_decreasing,
    schedule_finite,
    schedule_log_squared,
    schedule_constant_band,
    schedule_inverse_log,
    custom_schedule,
    validate_schedule,
)
from .construction import (
    EDGE_SLACK,
    SymbolGroup,
    StepCase,
    StepDetails,
    OscillatorState,
    OscillatingProcess,
    DoobTightProcess,
    OscillatorBatch,
    DoobTightBatch,
    choose_symbol_group,
    classify_step,
    oscillator_step,
    build_oscillator,
    doob_tight_process,
)

__all__ = [
    "LOG_SQUARED_CAP",
    "ScheduleKind",
    "Schedule",
    "invert_decreasing",
    "schedule_finite",
    "schedule_log_squared",
    "schedule_constant_band",
    "schedule_inverse_log",
    "custom_schedule",
    "validate_schedule",
    "EDGE_SLACK",
    "SymbolGroup",
    "StepCase",
    "StepDetails",
    "OscillatorState",
    "OscillatingProcess",
    "DoobTightProcess",
    "OscillatorBatch",
    "DoobTightBatch",
    "choose_symbol_group",
    "classify_step",
    "oscillator_step",
    "build_oscillator",
    "doob_tight_process",
]
