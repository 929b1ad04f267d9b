"""Exception hierarchy.

Every error raised deliberately by the library derives from
:class:`QutritLabError`. Input-shape problems additionally derive from
``ValueError`` so that generic callers can catch them idiomatically.
"""


class QutritLabError(Exception):
    """Base class for all library errors."""


class ValidationError(QutritLabError, ValueError):
    """An input violates a documented precondition."""


class DimensionError(ValidationError):
    """Operand shapes are incompatible or not square."""


class NonHermitianError(ValidationError):
    """A matrix required to be Hermitian is not.

    Attributes
    ----------
    violation : float
        Largest elementwise ``|m - m^dagger|``.
    """

    def __init__(self, message, violation):
        super().__init__(message)
        self.violation = float(violation)


class NonUnitaryError(ValidationError):
    """A matrix required to be unitary is not."""


class DegenerateStateError(ValidationError):
    """The Bloch radius is too small for the parametrization to exist."""


class IndeterminateAngleError(ValidationError):
    """An angle cannot be recovered because its defining pair vanishes.

    Attributes
    ----------
    angle : str
        Name of the indeterminate angle.
    partial : dict
        Parameters that were recovered before the failure.
    """

    def __init__(self, message, angle, partial=None):
        super().__init__(message)
        self.angle = angle
        self.partial = dict(partial or {})


class UndefinedPhaseError(ValidationError):
    """A phase was requested between (nearly) orthogonal vectors.

    Attributes
    ----------
    modulus : float
        Modulus of the offending overlap.
    segment : int or None
        Index of the failing segment, when applicable.
    """

    def __init__(self, message, modulus, segment=None):
        super().__init__(message)
        self.modulus = float(modulus)
        self.segment = segment


class UndefinedPolarizationError(ValidationError):
    """Degree of polarization requested for a vacuum-supported state."""


class NumericalError(QutritLabError):
    """Integration produced a non-finite or unphysical state."""


class PositivityError(NumericalError):
    """An integrated state lost positivity beyond tolerance.

    Attributes
    ----------
    time : float
        Sample time at which the violation was detected.
    min_eigenvalue : float
        Most negative eigenvalue found.
    """

    def __init__(self, message, time, min_eigenvalue):
        super().__init__(message)
        self.time = float(time)
        self.min_eigenvalue = float(min_eigenvalue)


class ConfigError(QutritLabError, ValueError):
    """A scenario configuration is malformed.

    Attributes
    ----------
    fields : list of str
        Names of the offending fields.
    """

    def __init__(self, message, fields=()):
        super().__init__(message)
        self.fields = list(fields)
