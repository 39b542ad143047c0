"""Band-limited cone-adapted directional frame (shearlet-type), built in
the DFT domain from Meyer windows.

The system is normalized so the squared filter responses sum to one at
every frequency sample, making it an exact Parseval tight frame: the
adjoint of the analysis map inverts it. Applied to 3D tensors the
transform acts independently on every frontal slice.
"""

import numpy as np
from scipy import fft as _fft


def _fft2(x, axes):
    return _fft.fft2(x, axes=axes, norm="ortho", workers=-1)


def _ifft2(x, axes):
    return _fft.ifft2(x, axes=axes, norm="ortho", workers=-1)


def _meyer_ramp(t):
    """Meyer's polynomial ramp: 0 -> 1 smoothly over [0, 1]."""
    t = np.clip(t, 0.0, 1.0)
    return t**4 * (35.0 - 84.0 * t + 70.0 * t**2 - 20.0 * t**3)


def _radial_step(r, edge):
    """Smooth step from 0 to 1 across [edge/2, edge]."""
    return np.sin(np.pi / 2 * _meyer_ramp((r - edge / 2) / (edge / 2)))


class ShearletFrame:
    """Parseval frame of directional band-pass filters on an n-by-n grid.

    Attributes
    ----------
    filters : (n_filters, n, n) float array of DFT-domain windows.
    labels : list of (cone, scale, shear-slope) tuples; the low-pass
        filter carries the label ("low", -1, 0.0).
    redundancy : number of filters (coefficient stack depth).
    """

    def __init__(self, n, scales=2, shears_per_scale=3, validate=True):
        if n < 16 or (n & (n - 1)) != 0:
            raise ValueError("n must be a power of two >= 16")
        if scales not in (1, 2, 3):
            raise ValueError("scales must be 1, 2, or 3")
        if shears_per_scale < 2:
            raise ValueError("need at least 2 shear directions per cone")
        self.n = n
        self.scales = scales
        self.shears_per_scale = shears_per_scale
        self.filters, self.labels = self._build(n, scales, shears_per_scale)
        self.redundancy = len(self.filters)
        if validate:
            self._validate()

    @staticmethod
    def _build(n, scales, shears):
        w = np.fft.fftfreq(n)
        w1, w2 = np.meshgrid(w, w, indexing="ij")
        r = np.hypot(w1, w2)
        # dyadic band edges ending at the half-band; more scales shrink the
        # low-pass so less image content escapes the directional windows
        steps = [_radial_step(r, 0.5 / 2 ** (scales - j)) for j in range(scales)]
        low = np.sqrt(np.clip(1.0 - steps[0] ** 2, 0.0, None))
        bands = []
        for j in range(scales):
            if j < scales - 1:
                bands.append(np.sqrt(np.clip(steps[j] ** 2 - steps[j + 1] ** 2,
                                             0.0, None)))
            else:
                bands.append(steps[j])
        horizontal = np.abs(w1) >= np.abs(w2)
        slope_h = np.divide(w2, w1, out=np.zeros_like(w1), where=np.abs(w1) > 0)
        slope_v = np.divide(w1, w2, out=np.zeros_like(w2), where=np.abs(w2) > 0)
        centers = np.linspace(-1.0, 1.0, shears)
        du = centers[1] - centers[0]
        filters = [low]
        labels = [("low", -1, 0.0)]
        for j, band in enumerate(bands):
            for cone, slope, mask in (("h", slope_h, horizontal),
                                      ("v", slope_v, ~horizontal)):
                for s in centers:
                    t = np.abs(slope - s) / du
                    angular = np.where(t < 1.0,
                                       np.cos(np.pi / 2 * _meyer_ramp(t)), 0.0)
                    filters.append(band * angular * mask)
                    labels.append((cone, j, float(s)))
        stack = np.stack(filters)
        total = np.sqrt(np.sum(stack**2, axis=0))
        if total.min() <= 0:
            raise ValueError("frame does not cover the frequency plane")
        return stack / total, labels

    def _validate(self, tol=1e-6):
        rng = np.random.default_rng(0)
        x = (rng.standard_normal((self.n, self.n))
             + 1j * rng.standard_normal((self.n, self.n)))
        err = np.linalg.norm(self.adjoint(self.forward(x)) - x) / np.linalg.norm(x)
        if err > tol:
            raise ValueError(f"frame failed the Parseval roundtrip: {err:.3e}")

    def _as_slices(self, x):
        x = np.asarray(x, dtype=complex)
        if x.shape[0] != self.n or x.shape[1] != self.n:
            raise ValueError(
                f"transform built for {self.n}x{self.n} slices, got {x.shape}")
        return x if x.ndim == 3 else x[:, :, None], x.ndim == 2

    def forward(self, x):
        """Analysis: (n, n[, nz]) -> (n_filters, n, n[, nz]) coefficients."""
        xs, squeeze = self._as_slices(x)
        spec = _fft2(xs, axes=(0, 1))
        coeffs = _ifft2(self.filters[:, :, :, None] * spec[None, ...],
                        axes=(1, 2))
        return coeffs[:, :, :, 0] if squeeze else coeffs

    def adjoint(self, coeffs):
        """Synthesis; inverts :meth:`forward` exactly (Parseval)."""
        c = np.asarray(coeffs, dtype=complex)
        squeeze = c.ndim == 3
        if squeeze:
            c = c[:, :, :, None]
        spec = _fft2(c, axes=(1, 2))
        acc = np.sum(self.filters[:, :, :, None] * spec, axis=0)
        out = _ifft2(acc, axes=(0, 1))
        return out[:, :, 0] if squeeze else out


def build_shearlet(dims2d, scales=2, shears_per_scale=3):
    """Construct a validated frame for square slices of size dims2d."""
    n0, n1 = dims2d
    if n0 != n1:
        raise ValueError("shearlet frame requires square slices")
    return ShearletFrame(n0, scales=scales, shears_per_scale=shears_per_scale)
