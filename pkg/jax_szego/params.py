from dataclasses import dataclass

from jax_szego.errors import SzegoValueError

ROOT_MODES = ("gauss_seidel", "jacobi")


@dataclass(frozen=True, repr=False)
class SzegoParams:
    """The numerical knobs shared by the root finder, the curve tracer, the quadrature
    routines and the prediction harness.

    Parameters:
        root_tolerance:             Backward-error tolerance a root must meet to count as
                                    converged. [default: 1e-10]
        max_iterations:             Maximum number of simultaneous-iteration sweeps.
                                    [default: 200]
        restart_fraction:           Fraction of the worst unconverged roots that are randomly
                                    perturbed at each restart. [default: 0.1]
        cluster_tolerance:          Relative distance below which two roots are reported as a
                                    cluster. [default: 1e-8]
        root_mode:                  Update order of the Aberth sweep, either "gauss_seidel" or
                                    "jacobi". [default: "gauss_seidel"]
        seed:                       Seed of the restart perturbations. [default: 1234]
        curve_bisection_iterations: Bisection steps for the radius of a curve sample.
                                    [default: 75]
        on_curve_tolerance:         Absolute tolerance on |z^lambda exp(1 - z^lambda)| - 1 for
                                    a point to be classified as on the curve. [default: 1e-9]
        quad_tolerance:             Relative/absolute tolerance of the adaptive quadrature.
                                    [default: 1e-12]
        quad_max_level:             Maximum number of step halvings in the adaptive
                                    quadrature. [default: 8]
        erfc_newton_iterations:     Newton steps used to polish each erfc zero. [default: 50]
        erfc_residual_tolerance:    Residual tolerance of an erfc zero relative to its local
                                    scale. [default: 1e-10]
        match_radius_factor:        Matching radius in units of the expected error scale.
                                    [default: 10.0]
        degenerate_threshold:       Magnitude below which a limit constant is reported as
                                    degenerate. [default: 1e-6]
    """

    root_tolerance: float = 1.0e-10
    max_iterations: int = 200
    restart_fraction: float = 0.1
    cluster_tolerance: float = 1.0e-8
    root_mode: str = "gauss_seidel"
    seed: int = 1234
    curve_bisection_iterations: int = 75
    on_curve_tolerance: float = 1.0e-9
    quad_tolerance: float = 1.0e-12
    quad_max_level: int = 8
    erfc_newton_iterations: int = 50
    erfc_residual_tolerance: float = 1.0e-10
    match_radius_factor: float = 10.0
    degenerate_threshold: float = 1.0e-6

    def __post_init__(self):
        if self.root_mode not in ROOT_MODES:
            raise SzegoValueError("Invalid root_mode.", self.root_mode, ROOT_MODES)
        if self.max_iterations < 1:
            raise SzegoValueError("max_iterations must be positive.", self.max_iterations)
        if not 0.0 <= self.restart_fraction <= 1.0:
            raise SzegoValueError(
                "restart_fraction must be in [0, 1].", self.restart_fraction
            )

    @staticmethod
    def check(params, default=None, **kwargs):
        """Checks that params is either a valid SzegoParams instance or None.

        In the former case, it returns params, in the latter it returns default
        (SzegoParams.default if no other default specified). Keyword arguments that are not
        None supersede the corresponding values.
        """
        if params is None:
            if default is not None:
                if isinstance(default, SzegoParams):
                    params = default
                else:
                    raise TypeError("Invalid default SzegoParams: %s" % default)
            else:
                params = SzegoParams.default
        elif not isinstance(params, SzegoParams):
            raise TypeError("Invalid SzegoParams: %s" % params)
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        return params.withParams(**kwargs)

    def withParams(self, **kwargs):
        """Return a `SzegoParams` that is identical to the current one except for any keyword
        arguments given here, which supersede the current value.
        """
        if len(kwargs) == 0:
            return self
        else:
            d = self.__dict__.copy()
            for k in kwargs:
                if k not in d:
                    raise TypeError("parameter %s is invalid" % k)
                d[k] = kwargs[k]
            return SzegoParams(**d)

    @staticmethod
    def combine(params_list):
        """Combine a list of `SzegoParams` instances using the most restrictive parameter
        from each.

        Uses the minimum value for the tolerances and thresholds and the maximum value for the
        iteration counts. The root mode and the seed are taken from the first entry.
        """
        params_list = [p for p in params_list if p is not None]
        if len(params_list) == 1:
            return params_list[0]
        elif all(p == params_list[0] for p in params_list[1:]):
            return params_list[0]
        else:
            return SzegoParams(
                min([p.root_tolerance for p in params_list]),
                max([p.max_iterations for p in params_list]),
                min([p.restart_fraction for p in params_list]),
                min([p.cluster_tolerance for p in params_list]),
                params_list[0].root_mode,
                params_list[0].seed,
                max([p.curve_bisection_iterations for p in params_list]),
                min([p.on_curve_tolerance for p in params_list]),
                min([p.quad_tolerance for p in params_list]),
                max([p.quad_max_level for p in params_list]),
                max([p.erfc_newton_iterations for p in params_list]),
                min([p.erfc_residual_tolerance for p in params_list]),
                min([p.match_radius_factor for p in params_list]),
                min([p.degenerate_threshold for p in params_list]),
            )

    # Define once the order of args in __init__, since we use it a few times.
    def _getinitargs(self):
        return (
            self.root_tolerance,
            self.max_iterations,
            self.restart_fraction,
            self.cluster_tolerance,
            self.root_mode,
            self.seed,
            self.curve_bisection_iterations,
            self.on_curve_tolerance,
            self.quad_tolerance,
            self.quad_max_level,
            self.erfc_newton_iterations,
            self.erfc_residual_tolerance,
            self.match_radius_factor,
            self.degenerate_threshold,
        )

    def to_dict(self):
        return dict(self.__dict__)

    def __getstate__(self):
        return self._getinitargs()

    def __setstate__(self, state):
        self.__init__(*state)

    def __repr__(self):
        return (
            "jax_szego.SzegoParams(%r,%d,%r,%r,%r,%d,%d,%r,%r,%d,%d,%r,%r,%r)"
            % self._getinitargs()
        )

    def __eq__(self, other):
        return self is other or (
            isinstance(other, SzegoParams)
            and self._getinitargs() == other._getinitargs()
        )

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash(repr(self))


# We use the default a lot, so make it a class attribute.
SzegoParams.default = SzegoParams()
