class FreeConvException(Exception):
    """ Base exception class for this package's exceptions. """
    pass


class ImproperlyConfigured(FreeConvException):
    """ A FREECONV_* environment variable could not be parsed. """
    def __init__(self, variable, value):
        super(ImproperlyConfigured, self).__init__(
            '%s=%r is not a valid value' % (variable, value))
        self.variable = variable


class InvalidMeasure(FreeConvException, ValueError):
    """
    Raised when atoms, density grid or parameters do not describe a valid
    (probability or finite nonnegative) measure.
    """
    pass


class InvalidPoint(FreeConvException, ValueError):
    """ A query point is not in the open upper half-plane. """
    pass


class InvalidSpec(FreeConvException, ValueError):
    """ Measure spec text could not be parsed into a measure or pair. """
    pass


class MomentConditionViolated(FreeConvException, ValueError):
    """ A sweep was given measures not satisfying its moment conditions. """
    pass


class NumericalFailure(FreeConvException, ArithmeticError):
    """ Base class for solver and inversion failures. """
    pass


class NoConvergence(NumericalFailure):
    """
    An iteration did not reach its tolerance. ``residuals`` holds the
    residual history of the worst query point.
    """
    def __init__(self, message, residuals=(), iterations=0):
        super(NoConvergence, self).__init__(message)
        self.residuals = list(residuals)
        self.iterations = iterations


class OutsideInvertibilityDomain(NumericalFailure):
    """ A reciprocal Cauchy transform could not be inverted at target. """
    def __init__(self, target, beta=None):
        message = 'cannot invert at %r' % (target,)
        if beta is not None:
            message += ', inverse known to exist above Im z = %g' % beta
        super(OutsideInvertibilityDomain, self).__init__(message)
        self.target = target
        self.beta = beta


class WindowTooSmall(NumericalFailure):
    """ Stieltjes inversion lost too much mass outside of its window. """
    def __init__(self, window, deficit):
        super(WindowTooSmall, self).__init__(
            'window [%g, %g] too small, mass deficit %.3g' % (
                window[0], window[1], deficit))
        self.window = window
        self.deficit = deficit


class NoNormingConstant(NumericalFailure):
    """ The norming equation has no solution for the requested target. """
    def __init__(self, target, supremum):
        super(NoNormingConstant, self).__init__(
            'no norming constant for target %g, attainable range is '
            '(0, %g)' % (target, supremum))
        self.target = target
        self.supremum = supremum


class CommandError(FreeConvException):
    """
    Raised by commands on usage errors, run_command() turns it into the
    exit code in ``returncode``.
    """
    def __init__(self, message, returncode=2):
        super(CommandError, self).__init__(message)
        self.returncode = returncode
