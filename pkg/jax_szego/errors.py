import warnings


class SzegoError(RuntimeError):
    """The base class for JAX-Szego-specific run-time errors."""

    def __repr__(self):
        return "jax_szego.SzegoError(%r)" % (str(self))


class SzegoValueError(SzegoError, ValueError):
    """A JAX-Szego-specific exception class indicating that some user-input value is invalid.

    Attributes:
        value:           The invalid value
        allowed_values:  A list of allowed values if appropriate (may be None)
    """

    def __init__(self, message, value, allowed_values=None):
        self.message = message
        self.value = value
        self.allowed_values = allowed_values
        message += " Value {0!s}".format(value)
        if allowed_values is not None:
            message += " not in {0!s}".format(allowed_values)
        super().__init__(message)

    def __repr__(self):
        return "jax_szego.SzegoValueError(%r,%r,%r)" % (
            self.message,
            self.value,
            self.allowed_values,
        )

    def __reduce__(self):
        return SzegoValueError, (self.message, self.value, self.allowed_values)


class SzegoRangeError(SzegoError, ValueError):
    """A JAX-Szego-specific exception class indicating that some user-input value is
    outside of the allowed range of values.

    Attributes:
        value:  The invalid value
        min:    The minimum allowed value (may be None)
        max:    The maximum allowed value (may be None)
    """

    def __init__(self, message, value, min, max=None):
        self.message = message
        self.value = value
        self.min = min
        self.max = max
        message += " Value {0!s} not in range [{1!s}, {2!s}].".format(value, min, max)
        super().__init__(message)

    def __repr__(self):
        return "jax_szego.SzegoRangeError(%r,%r,%r,%r)" % (
            self.message,
            self.value,
            self.min,
            self.max,
        )

    def __reduce__(self):
        return SzegoRangeError, (self.message, self.value, self.min, self.max)


class SzegoIncompatibleValuesError(SzegoError, ValueError, TypeError):
    """A JAX-Szego-specific exception class indicating that 2 or more values are
    incompatible with each other.

    Attributes:
        values:  A dict of {name : value} giving the set of incompatible values
    """

    def __init__(self, message, values={}, **kwargs):
        self.message = message
        self.values = dict(values, **kwargs)
        message += " Values {0!s}".format(self.values)
        super().__init__(message)

    def __repr__(self):
        return "jax_szego.SzegoIncompatibleValuesError(%r,%r)" % (
            self.message,
            self.values,
        )

    def __reduce__(self):
        return SzegoIncompatibleValuesError, (self.message, self.values)


class SzegoNotImplementedError(SzegoError, NotImplementedError):
    """A JAX-Szego-specific exception class indicating that the requested case is not
    covered by any implemented limit theorem or evaluator.
    """

    def __repr__(self):
        return "jax_szego.SzegoNotImplementedError(%r)" % (str(self))


class SzegoConvergenceError(SzegoError):
    """A JAX-Szego-specific exception class indicating that an iterative method did not
    reach its tolerance.

    Attributes:
        result:  The best (partial) result available when the iteration stopped
    """

    def __init__(self, message, result=None):
        self.message = message
        self.result = result
        super().__init__(message)

    def __repr__(self):
        return "jax_szego.SzegoConvergenceError(%r)" % (self.message)

    def __reduce__(self):
        return SzegoConvergenceError, (self.message, self.result)


class SzegoDegenerateError(SzegoError):
    """A JAX-Szego-specific exception class indicating that a polynomial or a limit constant
    is degenerate (all coefficients vanish, a constant is zero or resonant).
    """

    def __repr__(self):
        return "jax_szego.SzegoDegenerateError(%r)" % (str(self))


class SzegoWarning(UserWarning):
    """The base class for JAX-Szego-emitted warnings."""

    def __repr__(self):
        return "jax_szego.SzegoWarning(%r)" % (str(self))


def szego_warn(message):
    """A helper function for emitting a SzegoWarning with the stack level pointing at the
    caller of the function that emits it.
    """
    warnings.warn(SzegoWarning(message), stacklevel=3)
