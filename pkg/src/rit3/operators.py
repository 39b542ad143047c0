"""The approximated observation pair: imaging and echo-generation operators.

Both operators are unitary-up-to-projection pointwise filters in the 3D
spectral domain:

    imaging(y)         = ifft3(fft3(y) * pc)
    echo_generation(x) = ifft3(fft3(x) * conj(pc))

``pc`` is a unit-modulus phase-compensation filter supported on the
propagating spectral region 4k^2 >= kx^2 + ky^2 and exactly zero outside
it, which makes echo_generation the exact adjoint of imaging and their
composition an orthogonal projection onto the supported band.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .geometry import RadarGeometry
from .tensor import as_tensor3, fft3, hadamard, ifft3


@dataclass(frozen=True)
class OperatorPair:
    """Immutable imaging/echo-generation operator pair for one geometry."""

    geometry: RadarGeometry
    pc: np.ndarray
    support_mask: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "pc", as_tensor3(self.pc))
        mag = np.abs(self.pc[self.support_mask])
        if mag.size and np.max(np.abs(mag - 1.0)) > 1e-12:
            raise ValueError("pc must be unit-modulus on its support")
        if np.any(self.pc[~self.support_mask] != 0):
            raise ValueError("pc must vanish off its support")


def build_operator_pair(geometry: RadarGeometry) -> OperatorPair:
    """Construct the phase-compensation filter for a geometry.

    The filter phase is z0 * kz with kz = sqrt(4k^2 - kx^2 - ky^2), the
    monostatic planar-aperture dispersion relation referenced to the scene
    center; at zero transverse wavenumber it reduces to exp(1j*2*k*z0).
    The extra (-1)^q modulation along the frequency axis centers the
    focused scene on range bin nr//2 rather than bin 0.
    """
    kx, ky, k = geometry.wavenumbers()
    kx2 = (kx**2)[:, None, None]
    ky2 = (ky**2)[None, :, None]
    kk = k[None, None, :]
    kz2 = 4.0 * kk**2 - kx2 - ky2
    support = kz2 >= 0.0
    kz = np.sqrt(np.where(support, kz2, 0.0))
    centering = np.where(np.arange(geometry.nr) % 2 == 0, 1.0, -1.0)
    pc = np.exp(1j * geometry.z0 * kz) * centering[None, None, :]
    pc[~support] = 0.0
    return OperatorPair(geometry=geometry, pc=pc, support_mask=support)


def _check_dims(op, t):
    t = as_tensor3(t)
    if t.shape != op.geometry.dims:
        raise DimensionError(
            f"tensor dims {t.shape} do not match geometry {op.geometry.dims}")
    return t


def imaging(op: OperatorPair, y) -> np.ndarray:
    """Focus an echo tensor into the image domain (linear in y)."""
    return ifft3(hadamard(fft3(_check_dims(op, y)), op.pc))


def echo_generation(op: OperatorPair, x) -> np.ndarray:
    """Map an image back to an echo; the exact adjoint of :func:`imaging`."""
    return ifft3(hadamard(fft3(_check_dims(op, x)), np.conj(op.pc)))


def spectral_projection(op: OperatorPair, x) -> np.ndarray:
    """Project onto the supported band; equals imaging(echo_generation(x))."""
    return ifft3(fft3(_check_dims(op, x)) * op.support_mask)
