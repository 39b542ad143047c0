"""Task-oriented 3D radar imaging toolkit.

A numpy library for reconstructing 3D radar images under task-specific
regularization: an FFT-based imaging/adjoint operator pair, a multi-split
ADMM solver with pluggable proximal operators, a physical echo simulator
that serves as an independent oracle, presets for three screening and
diagnosis tasks, and evaluation metrics.
"""

from .errors import (ConfigError, DimensionError, FormatError, GeometryError,
                     GstConvergenceError, ProxError, SceneError, SolverError)
from .geometry import GEOMETRY_PRESETS, RadarGeometry
from .metrics import (MetricReport, max_intensity_projection,
                      relative_energy_error, ssim, target_mask_from_truth, tbr)
from .operators import (OperatorPair, build_operator_pair, echo_generation,
                        imaging, spectral_projection)
from .prox import (CognitionSpec, prox_l1, prox_l2, prox_lp, prox_nuclear,
                   prox_transform_l1)
from .shearlet import ShearletFrame, build_shearlet
from .simulate import (Scatterer, Scene, add_noise, make_phantom,
                       measured_echo, point_echo, point_source_gain,
                       range_compress, range_gain_correction, synthesize_echo)
from .solver import SolverParams, SolverState, admm_solve, matched_filter, run_task
from .tasks import TaskPreset, get_preset, reconstruct
from .tensor import fft3, frob_norm, hadamard, ifft3, inner

__version__ = "0.1.0"

__all__ = [
    "CognitionSpec", "ConfigError", "DimensionError", "FormatError",
    "GEOMETRY_PRESETS", "GeometryError", "GstConvergenceError",
    "MetricReport", "OperatorPair", "ProxError", "RadarGeometry",
    "Scatterer", "Scene", "SceneError", "ShearletFrame", "SolverError",
    "SolverParams", "SolverState", "TaskPreset", "add_noise", "admm_solve",
    "build_operator_pair", "build_shearlet", "echo_generation", "fft3",
    "frob_norm", "get_preset", "hadamard", "ifft3", "imaging", "inner",
    "make_phantom", "matched_filter", "max_intensity_projection",
    "measured_echo", "point_echo", "point_source_gain", "prox_l1", "prox_l2",
    "prox_lp", "prox_nuclear", "prox_transform_l1", "range_compress",
    "range_gain_correction", "reconstruct", "relative_energy_error",
    "run_task", "spectral_projection", "ssim", "synthesize_echo",
    "target_mask_from_truth", "tbr",
]
