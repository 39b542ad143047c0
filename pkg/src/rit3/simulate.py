"""Physical forward model: an independent oracle for echoes, plus phantoms.

The oracle evaluates the exact spherical-wave stepped-frequency response

    y[p, q] = sum_n alpha_n * exp(-1j * 4*pi * f_q * R_n(p) / c)

with R_n the Euclidean distance from aperture position p to scatterer n.
:func:`synthesize_echo` returns these raw frequency-domain samples (a unit
point target gives a unit-modulus tensor). :func:`range_compress` converts
them to the pulse-compressed range-profile tensor that the imaging
operator and solver consume; the two domains are related by a unitary
transform along the third axis.
"""

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DimensionError, SceneError
from .geometry import RadarGeometry
from .tensor import as_tensor3

TASK_SNR_DB = {1: 20.0, 2: 20.0, 3: 30.0}


@dataclass(frozen=True)
class Scatterer:
    """A point scatterer: scene position in meters and complex reflectivity."""

    position: tuple
    amplitude: complex


@dataclass
class Scene:
    """Point scatterers plus optional low-rank image-domain interference."""

    scatterers: list
    interference: np.ndarray | None = None
    noise_snr_db: float = math.inf
    interference_rank: int | None = None
    interference_energy_ratio: float | None = None
    seed: int = 0

    def to_json_dict(self):
        return {
            "scatterers": [
                {"x": s.position[0], "y": s.position[1], "z": s.position[2],
                 "amp_re": complex(s.amplitude).real,
                 "amp_im": complex(s.amplitude).imag}
                for s in self.scatterers
            ],
            "interference_rank": self.interference_rank,
            "interference_energy_ratio": self.interference_energy_ratio,
            "snr_db": None if math.isinf(self.noise_snr_db) else self.noise_snr_db,
            "seed": self.seed,
        }

    @classmethod
    def from_json_dict(cls, d):
        scatterers = [
            Scatterer((s["x"], s["y"], s["z"]), complex(s["amp_re"], s["amp_im"]))
            for s in d["scatterers"]
        ]
        snr = d.get("snr_db")
        return cls(
            scatterers=scatterers,
            noise_snr_db=math.inf if snr is None else float(snr),
            interference_rank=d.get("interference_rank"),
            interference_energy_ratio=d.get("interference_energy_ratio"),
            seed=int(d.get("seed", 0)),
        )

    def dumps(self):
        return json.dumps(self.to_json_dict(), indent=2)

    @classmethod
    def loads(cls, text):
        return cls.from_json_dict(json.loads(text))


def point_echo(scatterers, geometry: RadarGeometry) -> np.ndarray:
    """Frequency-domain echo of a list of point scatterers (noise-free)."""
    xs, ys, _ = geometry.grid_coords()
    xp = np.repeat(xs, geometry.ny)
    yp = np.tile(ys, geometry.nx)
    pos = np.array([s.position for s in scatterers], dtype=float)
    amp = np.array([s.amplitude for s in scatterers], dtype=complex)
    # distances: (apertures, scatterers)
    r = np.sqrt((xp[:, None] - pos[None, :, 0]) ** 2
                + (yp[:, None] - pos[None, :, 1]) ** 2
                + pos[None, :, 2] ** 2)
    f = geometry.frequencies()
    # y[p, q] = sum_n amp_n * exp(-1j * 4 pi f_q r_{pn} / c)
    phase = np.exp((-4j * np.pi / geometry.c) * r[:, :, None] * f[None, None, :])
    y = np.einsum("n,pnq->pq", amp, phase)
    return y.reshape(geometry.dims)


def synthesize_echo(scene: Scene, geometry: RadarGeometry) -> np.ndarray:
    """Realize the forward model for a scene, in the frequency domain.

    Interference (an image-domain tensor) is converted to an echo through
    the echo-generation operator and added; complex circular Gaussian
    noise is added last to meet ``scene.noise_snr_db``.
    """
    if not scene.scatterers and scene.interference is None:
        raise SceneError("scene has no scatterers and no interference")
    if scene.scatterers:
        y = point_echo(scene.scatterers, geometry)
    else:
        y = np.zeros(geometry.dims, dtype=complex)
    if scene.interference is not None:
        interference = as_tensor3(scene.interference)
        if interference.shape != geometry.dims:
            raise DimensionError("interference dims do not match the image grid")
        from .operators import build_operator_pair, echo_generation
        op = build_operator_pair(geometry)
        # The interference tensor lives in calibrated reflectivity units
        # (the units of scatterer amplitudes); the point-source gain
        # bridges it to raw echo scale. echo_generation yields the
        # range-domain echo; rotate it back to the frequency domain this
        # function emits.
        raw = point_source_gain(geometry) * interference
        y = y + np.fft.fft(echo_generation(op, raw), axis=2, norm="ortho")
    return add_noise(y, scene.noise_snr_db, scene.seed)


def range_compress(y_freq) -> np.ndarray:
    """Unitary pulse compression: frequency samples -> range profiles."""
    return np.fft.ifft(as_tensor3(y_freq), axis=2, norm="ortho")


def measured_echo(scene: Scene, geometry: RadarGeometry) -> np.ndarray:
    """Convenience: synthesize and range-compress in one step."""
    return range_compress(synthesize_echo(scene, geometry))


def add_noise(y, snr_db: float, seed: int) -> np.ndarray:
    """Add complex circular Gaussian noise at the requested echo-domain SNR.

    ``snr_db = inf`` is the no-noise sentinel and returns the input
    unchanged.
    """
    y = as_tensor3(y)
    if math.isinf(snr_db) and snr_db > 0:
        return y
    if not math.isfinite(snr_db):
        raise ValueError(f"invalid snr_db {snr_db}")
    signal_power = float(np.sum(np.abs(y) ** 2))
    if signal_power == 0.0:
        raise SceneError("cannot set a finite SNR on a zero-energy echo")
    noise_power = signal_power * 10.0 ** (-snr_db / 10.0)
    sigma = math.sqrt(noise_power / y.size / 2.0)
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(y.shape) + 1j * rng.standard_normal(y.shape)
    return y + sigma * noise


@lru_cache(maxsize=8)
def point_source_gain(geometry: RadarGeometry) -> float:
    """End-to-end gain of a unit scatterer at the grid center.

    Measures the matched-filter peak of the physical-oracle echo once per
    geometry; reconstructions are divided by this constant so image values
    are calibrated to scene reflectivity (as an RCS-calibrated system
    would be after a reference-target measurement).
    """
    from .operators import build_operator_pair, imaging
    xs, ys, zs = geometry.grid_coords()
    center = Scatterer((xs[geometry.nx // 2], ys[geometry.ny // 2],
                        zs[geometry.nr // 2]), 1.0)
    y = range_compress(point_echo([center], geometry))
    img = imaging(build_operator_pair(geometry), y)
    return float(np.max(np.abs(img)))


def range_gain_correction(geometry: RadarGeometry) -> np.ndarray:
    """Per-range-bin amplitude correction z0/z(n), broadcastable to images."""
    _, _, zs = geometry.grid_coords()
    return (geometry.z0 / zs)[None, None, :]


# ---------------------------------------------------------------------------
# Phantoms


def make_phantom(task: int, geometry: RadarGeometry, seed: int):
    """Deterministic synthetic scene + ground-truth image for a task.

    Task 1: three isolated point scatterers with amplitudes 1 : 0.5 : 0.25.
    Task 2: an elongated rifle-like silhouette plus 3 strong scatterers.
    Task 3: the task-2 target plus a rank-3 low-rank interference slab
    carrying 5x the target's energy.
    """
    if task == 1:
        return _phantom_points(geometry, seed)
    if task == 2:
        return _phantom_rifle(geometry, seed)
    if task == 3:
        return _phantom_parcel(geometry, seed)
    raise ValueError(f"unknown task {task!r}")


def _voxelize(indices_amps, geometry):
    truth = np.zeros(geometry.dims, dtype=np.complex128)
    xs, ys, zs = geometry.grid_coords()
    scatterers = []
    for (i, j, n), amp in indices_amps:
        truth[i, j, n] = amp
        scatterers.append(Scatterer((xs[i], ys[j], zs[n]), amp))
    return scatterers, truth


def _phantom_points(g, seed):
    """Three point targets in well-separated range slabs.

    The slab separation (8 range bins) keeps every scatterer outside the
    grating-lobe skirt of the others, which the coarse aperture sampling
    makes unavoidable at small range offsets; amplitudes are shuffled
    across slabs per seed.
    """
    rng = np.random.default_rng(seed)
    cz = g.nr // 2
    slabs = [cz - 8, cz, cz + 8]
    lo_i, hi_i = g.nx // 4, 3 * g.nx // 4
    lo_j, hi_j = g.ny // 4, 3 * g.ny // 4
    positions = []
    for slab in slabs:
        while True:
            cand = (int(rng.integers(lo_i, hi_i)), int(rng.integers(lo_j, hi_j)), slab)
            if all(math.hypot(cand[0] - p[0], cand[1] - p[1]) >= 4 for p in positions):
                positions.append(cand)
                break
    order = rng.permutation(3)
    amps = [1.0, 0.5, 0.25]
    indices_amps = [(positions[k], amps[a]) for a, k in enumerate(order)]
    scatterers, truth = _voxelize(indices_amps, g)
    scene = Scene(scatterers=scatterers, noise_snr_db=TASK_SNR_DB[1], seed=seed)
    return scene, truth


def _rifle_voxels(g, rng, lo=0.12, hi=0.25, stock=0.15, strong=1.0):
    """Voxel set of a tilted rifle-like silhouette near the center plane."""
    nx, ny, nr = g.dims
    cz = nr // 2
    scale = nx / 64.0
    theta = rng.uniform(-np.pi / 7, np.pi / 7)
    ci = nx // 2 + int(rng.integers(-3, 4))
    cj = ny // 2 + int(rng.integers(-3, 4))
    length = int(rng.integers(int(44 * scale), int(50 * scale) + 1))
    vox = {}
    # barrel: graded amplitude rising toward the muzzle, 3 voxels wide,
    # 2 range slices thick
    for t in np.linspace(-length / 2, length / 2, 2 * length):
        i = int(round(ci + t * np.cos(theta)))
        j = int(round(cj + t * np.sin(theta)))
        amp = lo + (hi - lo) * (t / length + 0.5)
        for dj in (0, 1, 2):
            for dn in (0, 1):
                if 2 <= i < nx - 2 and 2 <= j + dj < ny - 2:
                    key = (i, j + dj, cz + dn)
                    vox[key] = max(vox.get(key, 0.0), amp)
    # stock: a block at the tail
    ti = int(round(ci - (length / 2 + 2) * np.cos(theta)))
    tj = int(round(cj - (length / 2 + 2) * np.sin(theta)))
    ext = max(2, int(4 * scale))
    for di in range(-ext, ext + 1):
        for dj in range(-ext // 2, ext + 1):
            for dn in (0, 1):
                i, j = ti + di, tj + dj
                if 2 <= i < nx - 2 and 2 <= j < ny - 2:
                    key = (i, j, cz + dn)
                    vox[key] = max(vox.get(key, 0.0), stock)
    # strong point scatterers at muzzle, mid-body, tail
    for t in (-length / 2, 0.0, length / 2):
        i = int(np.clip(round(ci + t * np.cos(theta)), 2, nx - 3))
        j = int(np.clip(round(cj + t * np.sin(theta)), 2, ny - 3))
        vox[(i, j, cz)] = strong
    return vox


def _phantom_rifle(g, seed):
    rng = np.random.default_rng(seed)
    vox = _rifle_voxels(g, rng)
    scatterers, truth = _voxelize(list(vox.items()), g)
    scene = Scene(scatterers=scatterers, noise_snr_db=TASK_SNR_DB[2], seed=seed)
    return scene, truth


def _smooth_profile(n, rng, modes=10):
    """A smooth complex profile built from a few low Fourier modes."""
    spec = np.zeros(n, dtype=complex)
    spec[:modes] = rng.standard_normal(modes) + 1j * rng.standard_normal(modes)
    return np.fft.ifft(spec) * n / modes


def _phantom_parcel(g, seed, rank=3, energy_ratio=5.0):
    rng = np.random.default_rng(seed)
    vox = _rifle_voxels(g, rng)
    scatterers, truth = _voxelize(list(vox.items()), g)
    cz = g.nr // 2
    interference = np.zeros(g.dims, dtype=np.complex128)
    for n in range(cz - 4, cz + 6):
        for r in range(rank):
            u = _smooth_profile(g.nx, rng)
            v = _smooth_profile(g.ny, rng)
            interference[:, :, n] += np.outer(u, v) / (1 + r)
    interference *= (math.sqrt(energy_ratio) * np.linalg.norm(truth)
                     / np.linalg.norm(interference))
    scene = Scene(scatterers=scatterers, interference=interference,
                  noise_snr_db=TASK_SNR_DB[3], interference_rank=rank,
                  interference_energy_ratio=energy_ratio, seed=seed)
    return scene, truth
