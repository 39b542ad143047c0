"""Radar acquisition geometry and the image-grid coordinate conventions.

Conventions (shared by the operator pair, the simulator, and the phantoms):

* Aperture positions lie in the z=0 plane on the same transverse grid as
  the image: x(i) = (i - nx//2) * dx, y(j) = (j - ny//2) * dy.
* Frequency samples ascend across the band: f(q) = fc - bw/2 + q * bw/nr.
* The image grid is centered on the scene center: z(n) = z0 + (n - nr//2)
  * dvz with the natural range spacing dvz = c / (2 * bw).

With these choices a point scatterer placed on a grid node focuses at that
node's indices (within the validity region of the planar-spectrum
approximation).
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import GeometryError

SPEED_OF_LIGHT = 2.99792458e8


@dataclass(frozen=True)
class RadarGeometry:
    """Aperture/frequency sampling plus the image voxel grid.

    Parameters
    ----------
    nx, ny : int
        Aperture (and image) sample counts along the two transverse axes.
    nr : int
        Frequency (and image range) sample count.
    dx, dy : float
        Aperture spacing in meters; equals the transverse voxel spacing.
    fc, bw : float
        Center frequency and bandwidth in Hz.
    z0 : float
        Center range (scene center distance from the aperture plane), m.
    c : float
        Propagation speed, m/s.
    dvx, dvy, dvz : float
        Image voxel spacing; default to (dx, dy, c / (2 bw)).
    """

    nx: int
    ny: int
    nr: int
    dx: float
    dy: float
    fc: float
    bw: float
    z0: float
    c: float = SPEED_OF_LIGHT
    dvx: float = field(default=0.0)
    dvy: float = field(default=0.0)
    dvz: float = field(default=0.0)

    def __post_init__(self):
        if min(self.nx, self.ny, self.nr) < 2:
            raise GeometryError("all sample counts must be >= 2")
        if not (self.fc > self.bw / 2 > 0):
            raise GeometryError("need fc > bw/2 > 0")
        if min(self.dx, self.dy, self.z0) <= 0:
            raise GeometryError("dx, dy, z0 must be positive")
        if self.c <= 0:
            raise GeometryError("c must be positive")
        if self.dvx == 0.0:
            object.__setattr__(self, "dvx", self.dx)
        if self.dvy == 0.0:
            object.__setattr__(self, "dvy", self.dy)
        if self.dvz == 0.0:
            object.__setattr__(self, "dvz", self.c / (2.0 * self.bw))
        if min(self.dvx, self.dvy, self.dvz) <= 0:
            raise GeometryError("voxel spacings must be positive")

    @property
    def dims(self):
        return (self.nx, self.ny, self.nr)

    def frequencies(self):
        """Frequency samples, ascending, spanning the band [fc-bw/2, fc+bw/2)."""
        q = np.arange(self.nr)
        return self.fc - self.bw / 2 + q * self.bw / self.nr

    def wavenumbers(self):
        """(kx, ky, k): transverse wavenumber grids and 2*pi*f/c per sample."""
        kx = 2 * np.pi * np.fft.fftfreq(self.nx, self.dx)
        ky = 2 * np.pi * np.fft.fftfreq(self.ny, self.dy)
        k = 2 * np.pi * self.frequencies() / self.c
        return kx, ky, k

    def grid_coords(self):
        """Voxel-center coordinates (x, y, z) of the image grid, in meters."""
        x = (np.arange(self.nx) - self.nx // 2) * self.dvx
        y = (np.arange(self.ny) - self.ny // 2) * self.dvy
        z = self.z0 + (np.arange(self.nr) - self.nr // 2) * self.dvz
        return x, y, z

    def voxel_of(self, position):
        """Nearest grid indices of a scene position (x, y, z) in meters."""
        x, y, z = position
        i = int(round(x / self.dvx)) + self.nx // 2
        j = int(round(y / self.dvy)) + self.ny // 2
        n = int(round((z - self.z0) / self.dvz)) + self.nr // 2
        if not (0 <= i < self.nx and 0 <= j < self.ny and 0 <= n < self.nr):
            raise GeometryError(f"position {position} is outside the image grid")
        return i, j, n


# System parameter presets. The microwave scattering-diagnosis system is
# discretized at 32x32x64; the millimeter-wave screening system uses a finer
# 64x64x64 aperture sampling (its 0.4 m aperture would otherwise be far too
# sparse relative to the 3.8 mm wavelength, swamping images in grating haze).
GEOMETRY_PRESETS = {
    "task1": RadarGeometry(nx=32, ny=32, nr=64, dx=5.0 / 32, dy=5.0 / 32,
                           fc=11e9, bw=2e9, z0=15.0),
    "task2": RadarGeometry(nx=64, ny=64, nr=64, dx=0.4 / 64, dy=0.4 / 64,
                           fc=79e9, bw=4e9, z0=0.6),
    "task3": RadarGeometry(nx=64, ny=64, nr=64, dx=0.4 / 64, dy=0.4 / 64,
                           fc=79e9, bw=4e9, z0=0.6),
}
