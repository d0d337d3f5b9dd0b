"""Exception hierarchy shared by all modules."""


class SignSampleError(Exception):
    """Base class for every error raised by the package."""


class ParseError(SignSampleError):
    def __init__(self, message, position=None):
        self.reason = message
        self.position = position
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)


class RingMismatch(SignSampleError):
    pass


class SingularMatrix(SignSampleError):
    pass


class SingularJacobian(SignSampleError):
    pass


class NotInvertible(SignSampleError):
    """Raised by quotient arithmetic; carries the nontrivial gcd found."""

    def __init__(self, gcd):
        self.gcd = gcd
        super().__init__(f"element not invertible, gcd with modulus is {gcd}")


class NoReconstruction(SignSampleError):
    pass


class InexactDivision(SignSampleError):
    pass


class DegreeBoundViolation(SignSampleError):
    pass


class BadAlpha(SignSampleError):
    """The chosen linear form does not separate the points."""


class BadRandomness(SignSampleError):
    """Random choices stayed degenerate after all retries."""


class InvalidSystem(SignSampleError):
    pass


class SpotCheckFailed(SignSampleError):
    pass


class LiftingFailed(SignSampleError):
    pass


class VerificationMismatch(SignSampleError):
    pass
