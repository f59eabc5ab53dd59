"""Exception hierarchy shared by every module."""


class SepGeomError(Exception):
    """Base class; the CLI maps these to exit code 1 unless noted."""

    code = "error"


class NotHermitian(SepGeomError, ValueError):
    code = "not_hermitian"


class NotPSD(SepGeomError, ValueError):
    code = "not_psd"


class NoConvergence(SepGeomError, RuntimeError):
    code = "no_convergence"


class DimensionMismatch(SepGeomError, ValueError):
    code = "dimension_mismatch"


class InvalidDensityMatrix(SepGeomError, ValueError):
    code = "invalid_density_matrix"


class BlochNormExceeded(SepGeomError, ValueError):
    code = "bloch_norm_exceeded"


class OutsideChartDomain(SepGeomError, ValueError):
    code = "outside_chart_domain"


class NotInSpan(SepGeomError, ValueError):
    code = "not_in_span"


class BoundaryState(SepGeomError, ValueError):
    code = "boundary_state"


class OutsideDomain(SepGeomError, ValueError):
    code = "outside_domain"


class ClassCollision(SepGeomError, ValueError):
    code = "class_collision"


class UnknownClass(SepGeomError, KeyError):
    code = "unknown_class"


class IoFailure(SepGeomError, OSError):
    code = "io_failure"


class ValidationFailure(SepGeomError):
    """A scientific self-check failed (CLI exit code 2)."""

    code = "validation_failure"
