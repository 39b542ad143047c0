"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Tensor dimensions are inconsistent with what an operation requires."""


class GeometryError(ValueError):
    """RadarGeometry fields violate their invariants."""


class SceneError(ValueError):
    """A Scene is empty or otherwise unusable."""


class ProxError(RuntimeError):
    """A proximal operator failed to produce a valid result."""


class GstConvergenceError(ProxError):
    """The generalized soft-thresholding fixed point did not converge.

    Carries the number of offending elements so solver callers can report
    which iteration failed.
    """

    def __init__(self, n_failed, max_residual):
        self.n_failed = n_failed
        self.max_residual = max_residual
        super().__init__(
            f"GST fixed-point iteration failed to converge for {n_failed} "
            f"element(s); max residual {max_residual:.3e}"
        )


class SolverError(RuntimeError):
    """The ADMM solver was wired incorrectly or a prox step failed."""


class FormatError(ValueError):
    """A tensor file or JSON document does not match its schema."""


class ConfigError(ValueError):
    """A run configuration is invalid."""
