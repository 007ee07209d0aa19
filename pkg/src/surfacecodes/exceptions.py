"""Custom exceptions for surfacecodes."""


class SurfaceCodesError(Exception):
    """Base exception for all surfacecodes errors."""


class FieldError(SurfaceCodesError):
    """Invalid finite field or field operation."""


class FieldMismatchError(FieldError):
    """Operands belong to different fields."""


class DivisionByZeroError(FieldError, ZeroDivisionError):
    """Inverse or division by the zero element."""


class ReducibleModulusError(FieldError):
    """Supplied modulus is not irreducible over the prime field."""


class GeometryError(SurfaceCodesError):
    """Error in projective geometry or surface handling."""


class NotOnSurfaceError(GeometryError):
    """Point does not lie on the surface."""


class SingularPointError(GeometryError):
    """Gradient of the defining form vanishes at the point."""


class SurfaceValidationError(GeometryError):
    """Surface violates a kind-specific invariant."""


class ChartError(GeometryError):
    """Affine chart choice is invalid or leaves no points."""


class NotFoundError(GeometryError):
    """Search exhausted its budget without a result."""


class LinearAlgebraError(SurfaceCodesError):
    """Error in matrix computations over a finite field."""


class ShapeMismatchError(LinearAlgebraError):
    """Matrix shapes or fields are incompatible."""


class CodeError(SurfaceCodesError):
    """Error constructing or querying a linear code."""


class EmptyCodeError(CodeError):
    """Generator has rank zero or every coordinate was removed."""


class BudgetExceededError(CodeError):
    """Exhaustive enumeration would exceed the configured budget."""


class ConstructionError(SurfaceCodesError):
    """Error building a functional code."""


class DimensionMismatchError(ConstructionError):
    """Evaluation rank disagrees with the closed-form dimension."""


class OutOfRangeError(ConstructionError):
    """Degree m outside the supported range."""


class WitnessError(ConstructionError):
    """Dual witness cannot be built from the given line."""


class BoundError(SurfaceCodesError):
    """Error evaluating an intersection-theoretic bound."""


class UnsupportedLatticeError(BoundError):
    """Operation is not available for this Picard lattice."""


class ParityError(BoundError):
    """Adjunction formula produced a non-integral genus."""


class EmptyClassSetError(BoundError):
    """Class set is empty."""


class FormatError(SurfaceCodesError):
    """Malformed surface, matrix or reference file."""


class CheckpointError(SurfaceCodesError):
    """Error reading or writing checkpoint."""


class ConfigMismatchError(CheckpointError):
    """Checkpoint config doesn't match the current run config."""


class ReportError(SurfaceCodesError):
    """Error generating or reading a report."""
