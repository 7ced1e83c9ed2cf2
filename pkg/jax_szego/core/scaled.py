"""Complex numbers stored as a mantissa and a base-2 exponent.

Partial sums of entire functions of order lambda mix coefficients like r_n^k / k! whose
magnitudes range over hundreds of orders of magnitude. A `ScaledComplex` keeps a mantissa with
modulus in [1, 2) (or exactly 0) and an integer exponent, so products, quotients and sums of such
numbers never overflow. Rescaling by powers of 2 is exact.
"""

import math

import jax
import jax.numpy as jnp
from jax.tree_util import register_pytree_node_class

LOG2 = math.log(2.0)

# effective exponent of an exact zero during alignment
_ZERO_EXPONENT = -(2**60)
# beyond this shift a mantissa in [1, 2) is below the smallest subnormal
_MAX_SHIFT = 1100


@jax.jit
def _normalize(mantissa, exponent):
    mantissa = jnp.asarray(mantissa, dtype=complex)
    exponent = jnp.asarray(exponent, dtype=jnp.int64)
    _, shift = jnp.frexp(jnp.abs(mantissa))
    shift = shift.astype(jnp.int64) - 1
    is_zero = mantissa == 0
    finite = jnp.isfinite(mantissa)
    shift = jnp.where(is_zero | ~finite, 0, shift)
    m = jnp.ldexp(mantissa.real, -shift) + 1j * jnp.ldexp(mantissa.imag, -shift)
    e = jnp.where(is_zero, 0, exponent + shift)
    return m, e


def _align(m1, e1, m2, e2):
    e1 = jnp.where(m1 == 0, _ZERO_EXPONENT, e1)
    e2 = jnp.where(m2 == 0, _ZERO_EXPONENT, e2)
    e = jnp.maximum(e1, e2)
    s1 = jnp.clip(e1 - e, -_MAX_SHIFT, 0)
    s2 = jnp.clip(e2 - e, -_MAX_SHIFT, 0)
    m1 = jnp.ldexp(m1.real, s1) + 1j * jnp.ldexp(m1.imag, s1)
    m2 = jnp.ldexp(m2.real, s2) + 1j * jnp.ldexp(m2.imag, s2)
    return m1, m2, jnp.where(e == _ZERO_EXPONENT, 0, e)


@jax.jit
def _add(m1, e1, m2, e2):
    m1, m2, e = _align(m1, e1, m2, e2)
    return _normalize(m1 + m2, e)


@jax.jit
def _from_log(log_value):
    log_value = jnp.asarray(log_value, dtype=complex)
    re = log_value.real
    finite = jnp.isfinite(re)
    e = jnp.where(finite, jnp.floor(re / LOG2), 0.0).astype(jnp.int64)
    m = jnp.exp((re - e * LOG2) + 1j * log_value.imag)
    m = jnp.where(re == -jnp.inf, 0.0 + 0.0j, m)
    return _normalize(m, e)


@register_pytree_node_class
class ScaledComplex:
    """A (possibly batched) complex value ``mantissa * 2**exponent``.

    Parameters:
        mantissa:   Complex array; normalized on construction so that its modulus lies in
                    [1, 2) unless the value is exactly 0.
        exponent:   Integer array broadcastable against the mantissa. [default: 0]
    """

    def __init__(self, mantissa, exponent=0, _normalized=False):
        if _normalized:
            self.mantissa = mantissa
            self.exponent = exponent
        else:
            self.mantissa, self.exponent = _normalize(mantissa, exponent)

    @classmethod
    def from_complex(cls, z):
        """Exact conversion of an ordinary complex value."""
        return cls(z, 0)

    @classmethod
    def from_log(cls, log_value):
        """Build exp(log_value) without forming it in ordinary floating point. The imaginary
        part of ``log_value`` is the phase; a real part of -inf gives an exact zero."""
        m, e = _from_log(log_value)
        return cls(m, e, _normalized=True)

    @classmethod
    def zeros(cls, shape=()):
        return cls(
            jnp.zeros(shape, dtype=complex),
            jnp.zeros(shape, dtype=jnp.int64),
            _normalized=True,
        )

    @property
    def shape(self):
        return jnp.shape(self.mantissa)

    def __len__(self):
        return len(self.mantissa)

    def __getitem__(self, index):
        return ScaledComplex(
            self.mantissa[index], self.exponent[index], _normalized=True
        )

    def is_zero(self):
        return self.mantissa == 0

    def to_complex(self):
        """Ordinary complex value; overflows to inf and underflows to 0 as floats would."""
        return jnp.ldexp(self.mantissa.real, self.exponent) + 1j * jnp.ldexp(
            self.mantissa.imag, self.exponent
        )

    def log(self):
        """Principal complex logarithm; -inf for exact zeros."""
        return jnp.log(self.mantissa) + self.exponent * LOG2

    def log_abs(self):
        return jnp.log(jnp.abs(self.mantissa)) + self.exponent * LOG2

    def abs(self):
        return ScaledComplex(jnp.abs(self.mantissa), self.exponent)

    def conj(self):
        return ScaledComplex(jnp.conj(self.mantissa), self.exponent, _normalized=True)

    def ldexp(self, shift):
        """Multiply by 2**shift exactly."""
        shift = jnp.asarray(shift, dtype=jnp.int64)
        return ScaledComplex(
            self.mantissa,
            jnp.where(self.mantissa == 0, 0, self.exponent + shift),
            _normalized=True,
        )

    def __neg__(self):
        return ScaledComplex(-self.mantissa, self.exponent, _normalized=True)

    def __mul__(self, other):
        if isinstance(other, ScaledComplex):
            return ScaledComplex(
                self.mantissa * other.mantissa, self.exponent + other.exponent
            )
        return self * ScaledComplex.from_complex(other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, ScaledComplex):
            other = ScaledComplex.from_complex(other)
        return ScaledComplex(
            self.mantissa / other.mantissa, self.exponent - other.exponent
        )

    def __rtruediv__(self, other):
        return ScaledComplex.from_complex(other) / self

    def __add__(self, other):
        if not isinstance(other, ScaledComplex):
            other = ScaledComplex.from_complex(other)
        m, e = _add(self.mantissa, self.exponent, other.mantissa, other.exponent)
        return ScaledComplex(m, e, _normalized=True)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, ScaledComplex):
            other = ScaledComplex.from_complex(other)
        return self + (-other)

    def __rsub__(self, other):
        return ScaledComplex.from_complex(other) - self

    def __eq__(self, other):
        if not isinstance(other, ScaledComplex):
            return False
        return bool(
            jnp.all(self.mantissa == other.mantissa)
            and jnp.all(self.exponent == other.exponent)
        )

    def __ne__(self, other):
        return not self.__eq__(other)

    __hash__ = None

    def __repr__(self):
        return "jax_szego.ScaledComplex(mantissa=%r, exponent=%r)" % (
            self.mantissa,
            self.exponent,
        )

    def tree_flatten(self):
        """This function flattens the ScaledComplex into a list of children
        nodes that will be traced by JAX and auxiliary static data."""
        children = (self.mantissa, self.exponent)
        return (children, None)

    @classmethod
    def tree_unflatten(cls, aux_data, children):
        """Recreates an instance of the class from flatten representation"""
        return cls(*children, _normalized=True)


def stack(values):
    """Stack a sequence of ScaledComplex scalars into one batched value."""
    return ScaledComplex(
        jnp.stack([v.mantissa for v in values]),
        jnp.stack([v.exponent for v in values]),
        _normalized=True,
    )


@jax.jit
def horner(mantissas, exponents, z):
    """Evaluate p(z) = sum_k d_k z^k, p'(z) and sum_k |d_k| |z|^k at every entry of ``z``.

    The coefficients are given in increasing degree as (mantissa, exponent) arrays. The three
    results are returned as ScaledComplex values shaped like ``z``.
    """
    z = jnp.asarray(z, dtype=complex)
    az = jnp.abs(z).astype(complex)
    zero_m = jnp.zeros_like(z)
    zero_e = jnp.zeros(z.shape, dtype=jnp.int64)

    def _step(carry, coeff):
        pm, pe, dm, de, sm, se = carry
        cm, ce = coeff
        # p' <- p' z + p
        dm, de = _normalize(dm * z, de)
        dm, de = _add(dm, de, pm, pe)
        # p <- p z + d_k
        pm, pe = _normalize(pm * z, pe)
        pm, pe = _add(pm, pe, jnp.broadcast_to(cm, z.shape), jnp.broadcast_to(ce, z.shape))
        # s <- s |z| + |d_k|
        sm, se = _normalize(sm * az, se)
        sm, se = _add(
            sm,
            se,
            jnp.broadcast_to(jnp.abs(cm).astype(complex), z.shape),
            jnp.broadcast_to(ce, z.shape),
        )
        return (pm, pe, dm, de, sm, se), None

    carry = (zero_m, zero_e, zero_m, zero_e, zero_m, zero_e)
    coeffs = (jnp.asarray(mantissas, dtype=complex)[::-1], jnp.asarray(exponents)[::-1])
    (pm, pe, dm, de, sm, se), _ = jax.lax.scan(_step, carry, coeffs)
    return (
        ScaledComplex(pm, pe, _normalized=True),
        ScaledComplex(dm, de, _normalized=True),
        ScaledComplex(sm, se, _normalized=True),
    )
