"""Exception hierarchy for polarevans."""


class EvansError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(EvansError, ValueError):
    """Array shapes are incompatible with the requested operation."""


class ParameterError(EvansError, ValueError):
    """A physical or numerical parameter is outside its admissible range."""


class NumericalFailure(EvansError):
    """Base class for failures that arise during a computation on valid input."""


class RankError(NumericalFailure):
    """A matrix that must have full column rank does not."""


class SpectralSeparationFailure(NumericalFailure):
    """An eigenvalue lies too close to the imaginary axis to split the spectrum."""


class EigenFailure(NumericalFailure):
    """The eigensolver did not converge."""


class ProjectionConditionError(NumericalFailure):
    """The left/right pairing of an eigenprojection is too ill-conditioned."""


class ProjectionGapError(NumericalFailure):
    """Consecutive projections along a continuation path differ too much."""


class StepSizeUnderflow(NumericalFailure):
    """The adaptive integrator needed a step below the admissible floor."""


class NonFiniteState(NumericalFailure):
    """The right-hand side produced NaN or Inf."""


class InitError(NumericalFailure):
    """An initial frame does not span the subspace it claims to span."""


class StiefelDrift(NumericalFailure):
    """The integrated frame left the Stiefel manifold beyond tolerance."""


class QuadratureError(NumericalFailure):
    """Too few samples for the requested quadrature rule."""


class NearZeroOnContour(NumericalFailure):
    """The Evans function (nearly) vanishes at a contour sample."""


class RefinementDepthExceeded(NumericalFailure):
    """Adaptive contour refinement could not resolve the phase increments."""


class ImaginaryResidueError(NumericalFailure):
    """A function expected to be real on the real axis has an imaginary part."""
