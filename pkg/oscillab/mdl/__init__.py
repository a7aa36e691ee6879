"""
Minimum description length selection over a finite model class, and the
experiment showing MDL need not converge along a path.
"""

from .estimator import (
    KRAFT_SLACK,
    SCORE_TOLERANCE,
    EXPERIMENT_SLACK,
    Model,
    ModelClass,
    MdlTrace,
    MdlExperimentResult,
    mdl_select,
    mdl_trace,
    mdl_oscillation_experiment,
)

__all__ = [
    "KRAFT_SLACK",
    "SCORE_TOLERANCE",
    "EXPERIMENT_SLACK",
    "Model",
    "ModelClass",
    "MdlTrace",
    "MdlExperimentResult",
    "mdl_select",
    "mdl_trace",
    "mdl_oscillation_experiment",
]
