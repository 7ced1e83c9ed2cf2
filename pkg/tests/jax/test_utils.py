
import jax.numpy as jnp
import numpy as np
from jax.tree_util import Partial as partial

from jax_szego.core.utils import (
    bisect_for_root,
    cast_to_python_float,
    ensure_hashable,
    unit_power,
    wrap_angle,
)


def _shifted_square(x, c):
    return x * x - c


def test_bisect_for_root():
    root = bisect_for_root(partial(_shifted_square, c=2.0), 0.0, 2.0, niter=60)
    np.testing.assert_allclose(root, np.sqrt(2.0), rtol=1e-14)
    assert root >= np.sqrt(2.0)


def test_unit_power_quarter_turns_are_exact():
    values = unit_power(1j, np.arange(8))
    np.testing.assert_array_equal(values, [1, 1j, -1, -1j, 1, 1j, -1, -1j])
    assert unit_power(-1.0, 3) == -1.0
    np.testing.assert_allclose(unit_power(np.exp(0.3j), 5), np.exp(1.5j), rtol=1e-14)


def test_wrap_angle():
    np.testing.assert_allclose(wrap_angle(jnp.array([3 * np.pi, -np.pi, 0.5])), [np.pi, np.pi, 0.5], rtol=1e-15)


def test_casts_and_hashing():
    assert cast_to_python_float(jnp.array([2.5, 1.0])) == 2.5
    assert ensure_hashable(np.array([[1.0, 2.0], [3.0, 4.0]])) == ((1.0, 2.0), (3.0, 4.0))
    assert ensure_hashable([1, [2, 3]]) == (1, (2, 3))
    assert hash(ensure_hashable([float("nan")])) == hash(ensure_hashable([np.nan]))
