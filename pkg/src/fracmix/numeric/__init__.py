"""Grid quadrature, mixed norms and probe families."""

from .grid import AxisSpec, GridFunction, IncompatibleGrid, ShapeMismatch, box_indicator, default_axes, uniform_axes
from .kernels import BACKEND
from .norms import PreconditionViolated, lq_norm, minkowski_swap_check, mixed_norm, tail_scaling_check
from .operators import eval_J, eval_T
from .probes import (GridSpec, LogPower, ProbeReport, dilation_family, logpower_counterexample, ratio_probe,
                     translate_sum, translation_limit_probe)

__all__ = [
    "AxisSpec", "BACKEND", "GridFunction", "GridSpec", "IncompatibleGrid", "LogPower", "PreconditionViolated",
    "ProbeReport", "ShapeMismatch", "box_indicator", "default_axes", "dilation_family", "eval_J", "eval_T",
    "logpower_counterexample", "lq_norm", "minkowski_swap_check", "mixed_norm", "ratio_probe",
    "tail_scaling_check", "translate_sum", "translation_limit_probe", "uniform_axes",
]
