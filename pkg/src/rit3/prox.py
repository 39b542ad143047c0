"""Cognition regularizers as proximal operators over complex tensors.

All scalar maps act on voxel magnitudes with the phase preserved, the
standard convention for complex-valued SAR imagery.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import GstConvergenceError, ProxError

KINDS = ("L1", "Lp", "L2", "TransformL1", "Nuclear")


@dataclass(frozen=True)
class CognitionSpec:
    """One regularization term: kind, weight, parameters, target component."""

    kind: str
    beta: float
    p: float | None = None
    transform: str | None = None
    component: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown cognition kind {self.kind!r}")
        if not self.beta > 0:
            raise ValueError("beta must be positive")
        if self.kind == "Lp":
            if self.p is None or not (0.0 < self.p < 1.0):
                raise ValueError("Lp requires 0 < p < 1")
        if self.kind == "TransformL1" and not self.transform:
            raise ValueError("TransformL1 requires a transform id")
        if self.component < 0:
            raise ValueError("component index must be nonnegative")

    def to_json_dict(self):
        d = {"kind": self.kind, "beta": self.beta, "component": self.component}
        if self.p is not None:
            d["p"] = self.p
        if self.transform is not None:
            d["transform"] = self.transform
        return d

    @classmethod
    def from_json_dict(cls, d):
        return cls(kind=d["kind"], beta=float(d["beta"]),
                   p=d.get("p"), transform=d.get("transform"),
                   component=int(d.get("component", 0)))


def _magnitude_phase(v):
    mag = np.abs(v)
    phase = np.divide(v, mag, out=np.zeros_like(v), where=mag > 0)
    return mag, phase


def prox_l1(v, tau):
    """Complex soft threshold: shrink magnitudes by tau, keep phases."""
    if not tau > 0:
        raise ValueError("tau must be positive")
    mag, phase = _magnitude_phase(np.asarray(v, dtype=complex))
    return phase * np.maximum(mag - tau, 0.0)


def gst_threshold(lam, p):
    """Magnitude below which the scalar lp prox maps to exactly zero."""
    t = (2.0 * lam * (1.0 - p)) ** (1.0 / (2.0 - p))
    return t + lam * p * t ** (p - 1.0)


def prox_lp(v, lam, p, max_iters=64, tol=1e-10):
    """Generalized soft-thresholding for the lp (0<p<1) penalty.

    Magnitudes below the GST threshold map to zero; above it the output
    magnitude is the fixed point of m <- |v| - lam*p*m^(p-1), found by
    fixed-point iteration with a Newton polish for near-threshold inputs
    where plain iteration stalls. Raises if any element still has a
    fixed-point residual above tolerance afterwards.
    """
    if not (0.0 < p < 1.0):
        raise ValueError("p must lie in (0, 1)")
    if not lam > 0:
        raise ValueError("lam must be positive")
    v = np.asarray(v, dtype=complex)
    mag, phase = _magnitude_phase(v)
    above = mag > gst_threshold(lam, p)
    x = mag[above]
    m = x.copy()
    for _ in range(max_iters):
        m_new = x - lam * p * m ** (p - 1.0)
        if np.max(np.abs(m_new - m), initial=0.0) <= tol:
            m = m_new
            break
        m = m_new
    # Newton on f'(m) = m - x + lam*p*m^(p-1); handles the tangency region
    residual = np.abs(m - (x - lam * p * m ** (p - 1.0)))
    stuck = residual > tol
    if np.any(stuck):
        ms, xs = m[stuck], x[stuck]
        for _ in range(32):
            grad = ms - xs + lam * p * ms ** (p - 1.0)
            hess = 1.0 + lam * p * (p - 1.0) * ms ** (p - 2.0)
            step = grad / np.where(np.abs(hess) > 1e-30, hess, 1e-30)
            ms = np.maximum(ms - step, 1e-30)
        m[stuck] = ms
        residual = np.abs(m - (x - lam * p * m ** (p - 1.0)))
        bad = residual > tol * np.maximum(1.0, x)
        if np.any(bad):
            raise GstConvergenceError(int(np.sum(bad)), float(np.max(residual[bad])))
    out_mag = np.zeros_like(mag)
    out_mag[above] = m
    return phase * out_mag


def prox_l2(v, weight):
    """Prox of weight * 0.5 * ||.||_F^2: uniform scaling by 1/(1+weight)."""
    if not weight > 0:
        raise ValueError("weight must be positive")
    return np.asarray(v, dtype=complex) / (1.0 + weight)


def prox_nuclear(v, tau):
    """Singular value thresholding applied to every frontal slice."""
    if not tau > 0:
        raise ValueError("tau must be positive")
    v = np.asarray(v, dtype=complex)
    if v.ndim == 2:
        v = v[:, :, None]
        squeeze = True
    else:
        squeeze = False
    out = np.empty_like(v)
    for n in range(v.shape[2]):
        try:
            u, s, vh = np.linalg.svd(v[:, :, n], full_matrices=False)
        except np.linalg.LinAlgError as exc:
            raise ProxError(f"SVD failed on frontal slice {n}") from exc
        out[:, :, n] = (u * np.maximum(s - tau, 0.0)) @ vh
    return out[:, :, 0] if squeeze else out


def prox_transform_l1(v, tau, transform):
    """Tight-frame approximation to the analysis prox: threshold in the
    transform domain, then synthesize back."""
    if not tau > 0:
        raise ValueError("tau must be positive")
    coeffs = transform.forward(v)
    mag = np.abs(coeffs)
    scale = np.divide(np.maximum(mag - tau, 0.0), mag,
                      out=np.zeros_like(mag), where=mag > 0)
    return transform.adjoint(coeffs * scale)


def nuclear_norm_slices(v):
    """Sum of singular values over all frontal slices."""
    v = np.asarray(v, dtype=complex)
    return float(sum(np.linalg.svd(v[:, :, n], compute_uv=False).sum()
                     for n in range(v.shape[2])))


def regularizer_value(spec: CognitionSpec, z, transform=None):
    """Evaluate g(z) for one cognition term (without the beta weight)."""
    if spec.kind == "L1":
        return float(np.sum(np.abs(z)))
    if spec.kind == "Lp":
        return float(np.sum(np.abs(z) ** spec.p))
    if spec.kind == "L2":
        return float(0.5 * np.linalg.norm(z) ** 2)
    if spec.kind == "TransformL1":
        return float(np.sum(np.abs(transform.forward(z))))
    if spec.kind == "Nuclear":
        return nuclear_norm_slices(z)
    raise ValueError(f"unknown cognition kind {spec.kind!r}")


def apply_prox(spec: CognitionSpec, v, gamma, transform=None):
    """Dispatch prox_{g, beta/gamma} for one cognition term."""
    tau = spec.beta / gamma
    if spec.kind == "L1":
        return prox_l1(v, tau)
    if spec.kind == "Lp":
        return prox_lp(v, tau, spec.p)
    if spec.kind == "L2":
        return prox_l2(v, tau)
    if spec.kind == "TransformL1":
        return prox_transform_l1(v, tau, transform)
    if spec.kind == "Nuclear":
        return prox_nuclear(v, tau)
    raise ValueError(f"unknown cognition kind {spec.kind!r}")
