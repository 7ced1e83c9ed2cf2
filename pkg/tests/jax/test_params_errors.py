import pickle

import pytest

import jax_szego
from jax_szego.errors import (
    SzegoConvergenceError,
    SzegoDegenerateError,
    SzegoError,
    SzegoIncompatibleValuesError,
    SzegoNotImplementedError,
    SzegoRangeError,
    SzegoValueError,
    SzegoWarning,
    szego_warn,
)
from jax_szego.params import SzegoParams


def test_params_defaults_and_check():
    params = SzegoParams.check(None)
    assert params is SzegoParams.default
    assert params.root_tolerance == 1e-10
    assert params.match_radius_factor == 10.0

    tighter = SzegoParams.check(None, root_tolerance=1e-12)
    assert tighter.root_tolerance == 1e-12
    assert tighter.max_iterations == params.max_iterations
    # None keyword values leave the params alone
    assert SzegoParams.check(params, root_tolerance=None) is params

    with pytest.raises(TypeError):
        SzegoParams.check("not params")
    with pytest.raises(TypeError):
        params.withParams(unknown_knob=1)


def test_params_validation():
    with pytest.raises(SzegoValueError):
        SzegoParams(root_mode="newton")
    with pytest.raises(SzegoValueError):
        SzegoParams(max_iterations=0)
    with pytest.raises(SzegoValueError):
        SzegoParams(restart_fraction=1.5)


def test_params_combine():
    a = SzegoParams(root_tolerance=1e-8, max_iterations=50, seed=7)
    b = SzegoParams(root_tolerance=1e-12, max_iterations=300)
    c = SzegoParams.combine([a, None, b])
    assert c.root_tolerance == 1e-12
    assert c.max_iterations == 300
    assert c.seed == 7
    assert SzegoParams.combine([a]) is a


def test_params_repr_eq_hash_pickle():
    params = SzegoParams(root_tolerance=1e-9, root_mode="jacobi", seed=3)
    assert eval(repr(params)) == params
    assert hash(eval(repr(params))) == hash(params)
    assert pickle.loads(pickle.dumps(params)) == params
    assert params != SzegoParams()
    assert params.to_dict()["root_mode"] == "jacobi"


@pytest.mark.parametrize(
    "err",
    [
        SzegoValueError("bad value.", 3, (1, 2)),
        SzegoRangeError("out of range.", 5.0, 0.0, 1.0),
        SzegoIncompatibleValuesError("clash.", a=1, b=2),
        SzegoConvergenceError("stuck.", result=[1, 2]),
    ],
)
def test_errors_pickle_and_hierarchy(err):
    assert isinstance(err, SzegoError)
    again = pickle.loads(pickle.dumps(err))
    assert type(again) is type(err)
    assert str(again) == str(err)
    assert repr(err).startswith("jax_szego.")


def test_errors_builtin_bases():
    assert issubclass(SzegoValueError, ValueError)
    assert issubclass(SzegoRangeError, ValueError)
    assert issubclass(SzegoIncompatibleValuesError, TypeError)
    assert issubclass(SzegoNotImplementedError, NotImplementedError)
    assert issubclass(SzegoDegenerateError, SzegoError)
    err = SzegoValueError("Unknown family.", "tan", ("exp", "sin"))
    assert err.value == "tan"
    assert err.allowed_values == ("exp", "sin")
    assert "not in" in str(err)


def test_szego_warn():
    with pytest.warns(SzegoWarning, match="clustered"):
        szego_warn("clustered roots")


def test_package_exports():
    assert jax_szego.SzegoParams is SzegoParams
    assert callable(jax_szego.partial_sum)
    assert callable(jax_szego.laplace.watson)
    assert "exp" in jax_szego.FAMILY_NAMES
