"""Evaluation metrics: relative energy error, SSIM, and target-to-background
ratio, plus the max-intensity projection used to form 2D views."""

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .errors import DimensionError
from .geometry import RadarGeometry
from .simulate import Scene
from .tensor import as_tensor3

_AXES = {"x": 0, "y": 1, "z": 2, 0: 0, 1: 1, 2: 2}


def max_intensity_projection(img, axis):
    """Per-pixel maximum of |img| along one axis -> 2D real image."""
    if axis not in _AXES:
        raise ValueError(f"axis must be one of x/y/z, got {axis!r}")
    return np.abs(as_tensor3(img)).max(axis=_AXES[axis])


def relative_energy_error(est, scene: Scene, geometry: RadarGeometry,
                          radius=3):
    """Per-scatterer relative peak-magnitude error of a point-scene estimate.

    For each true scatterer, the peak of |est| within a 3-voxel radius of
    its grid position is compared against |amplitude|; an all-zero
    neighborhood scores 1 (a miss).
    """
    if scene.interference is not None:
        raise ValueError("REE is defined for point scenes only")
    if not scene.scatterers:
        raise ValueError("scene has no scatterers")
    a = np.abs(as_tensor3(est))
    if a.shape != geometry.dims:
        raise DimensionError("estimate dims do not match the geometry")
    errors = []
    for sc in scene.scatterers:
        i, j, n = geometry.voxel_of(sc.position)
        sl = tuple(slice(max(c - radius, 0), min(c + radius + 1, s))
                   for c, s in zip((i, j, n), a.shape))
        ii, jj, nn = np.ogrid[sl]
        ball = (ii - i) ** 2 + (jj - j) ** 2 + (nn - n) ** 2 <= radius**2
        peak = float(a[sl][ball].max())
        amp = abs(sc.amplitude)
        errors.append(1.0 if peak == 0.0 else abs(peak - amp) / amp)
    return errors


def ssim(a, b, window=8, data_range=1.0):
    """Mean local SSIM over sliding square windows.

    Inputs are real nonnegative 2D images (magnitude projections); they
    are normalized to [0, 1] by their joint maximum before comparison.
    Stability constants are C1 = (0.01 L)^2, C2 = (0.03 L)^2 with L = 1.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or a.shape != b.shape:
        raise DimensionError(f"need matching 2D images, got {a.shape} vs {b.shape}")
    if min(a.shape) < window:
        raise ValueError("images smaller than the SSIM window")
    if a.min() < 0 or b.min() < 0:
        raise ValueError("SSIM inputs must be nonnegative magnitudes")
    peak = max(a.max(), b.max())
    if peak > 0:
        a = a / peak
        b = b / peak
    c1 = (0.01 * data_range) ** 2
    c2 = (0.03 * data_range) ** 2

    def box(x):
        c = np.cumsum(np.cumsum(x, axis=0), axis=1)
        c = np.pad(c, ((1, 0), (1, 0)))
        return (c[window:, window:] - c[:-window, window:]
                - c[window:, :-window] + c[:-window, :-window]) / window**2

    mu_a, mu_b = box(a), box(b)
    var_a = box(a * a) - mu_a**2
    var_b = box(b * b) - mu_b**2
    cov = box(a * b) - mu_a * mu_b
    score = (((2 * mu_a * mu_b + c1) * (2 * cov + c2))
             / ((mu_a**2 + mu_b**2 + c1) * (var_a + var_b + c2)))
    return float(score.mean())


def tbr(img, target_mask):
    """Target-to-background ratio in dB.

    20*log10(max |img| on the mask / mean |img| off the mask); a perfectly
    empty background gives the +inf sentinel.
    """
    a = np.abs(as_tensor3(img))
    mask = np.asarray(target_mask, dtype=bool)
    if mask.shape != a.shape:
        raise DimensionError("mask dims do not match the image")
    if not mask.any() or mask.all():
        raise ValueError("target mask must be non-empty and not all-true")
    fg = float(a[mask].max())
    bg = float(a[~mask].mean())
    if bg == 0.0:
        return math.inf
    return 20.0 * math.log10(fg / bg)


def target_mask_from_truth(truth, dilation=1):
    """Boolean mask: ground-truth support dilated by one voxel (3x3x3)."""
    support = np.abs(as_tensor3(truth)) > 0
    if dilation <= 0:
        return support
    return ndimage.binary_dilation(support, structure=np.ones((3, 3, 3)),
                                   iterations=dilation)


@dataclass
class MetricReport:
    """Bundle of metric values plus the parameters that produced them."""

    ree_per_scatterer: list | None = None
    ree_mean: float | None = None
    ssim: float | None = None
    tbr_db: float | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.ree_per_scatterer is not None:
            if any(r < 0 for r in self.ree_per_scatterer):
                raise ValueError("REE values must be nonnegative")
        if self.ssim is not None and not -1.0 <= self.ssim <= 1.0:
            raise ValueError("SSIM out of range")

    def to_json_dict(self):
        def enc(v):
            if isinstance(v, float) and math.isinf(v):
                return "inf"
            return v
        return {
            "ree_per_scatterer": self.ree_per_scatterer,
            "ree_mean": self.ree_mean,
            "ssim": self.ssim,
            "tbr_db": enc(self.tbr_db),
            "params": self.params,
        }

    def dumps(self):
        return json.dumps(self.to_json_dict(), indent=2)
