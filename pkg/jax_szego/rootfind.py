"""All zeros of a scaled partial sum by Aberth-Ehrlich simultaneous iteration.

Polynomials are evaluated through the overflow-safe Horner kernel of `jax_szego.core.scaled`, so
coefficients spanning hundreds of orders of magnitude need no special treatment.
"""

from dataclasses import dataclass
from functools import partial

import jax
import jax.numpy as jnp
import numpy as np

from jax_szego.core.scaled import horner
from jax_szego.errors import (
    SzegoConvergenceError,
    SzegoDegenerateError,
    SzegoValueError,
    szego_warn,
)
from jax_szego.params import SzegoParams

_EPS = float(np.finfo(float).eps)
_SEED_ANGLE = 0.7
_RESTART_STEP = 0.1
_MAX_ORACLE_DEGREE = 30


@dataclass(frozen=True)
class RootSet:
    """Zeros of p_{n-1}(r_n z) in the scaled plane.

    Attributes:
        roots:          Complex array with one entry per zero, counted with multiplicity.
        residuals:      Backward errors |p(z)| / sum_k |d_k| |z|^k.
        iterations:     Number of Aberth sweeps used.
        converged:      Per-root flag, residual <= tolerance.
        multiplicities: Size of the cluster each root belongs to (1 for simple roots).
        error_bounds:   First-order forward error estimates eps sum_k |d_k| |z|^k / |p'(z)|.
                        Arc zeros far from the corner are badly conditioned in double precision
                        and carry large bounds.
        conditioned:    Per-root flag, |p'(z)| above its rounding level
                        (deg + 1) eps sum_k k |d_k| |z|^(k-1). Where it is not, p'(z) is noise and
                        error_bounds says nothing about the root.
        n:              Number of terms of the partial sum.
        radius:         The scaling radius r_n.
        scale:          The factor dilation * rotation of the family.
    """

    roots: np.ndarray
    residuals: np.ndarray
    iterations: int
    converged: np.ndarray
    multiplicities: np.ndarray
    n: int
    radius: float
    scale: complex = 1.0
    error_bounds: np.ndarray = None
    conditioned: np.ndarray = None

    @property
    def degree(self):
        return int(self.roots.shape[0])

    @property
    def all_converged(self):
        return bool(np.all(self.converged))

    def reliable(self, threshold):
        """Mask of the roots whose forward error estimate is at most ``threshold``."""
        if self.error_bounds is None:
            return np.ones(self.roots.shape, dtype=bool)
        return self.error_bounds <= threshold

    def certified(self, threshold):
        """Mask of the reliable roots whose derivative is resolved; see ``conditioned``."""
        mask = self.reliable(threshold)
        if self.conditioned is None:
            return mask
        return mask & self.conditioned

    def unscaled(self):
        """The zeros of the raw partial sum p_{n-1}[g]."""
        return self.scale * self.radius * self.roots

    def __len__(self):
        return self.degree


def _aberth_correction(p, dp, s):
    newton = (p / dp).to_complex()
    step = newton / (1.0 - newton * s)
    step = jnp.where(jnp.isfinite(newton), step, -1.0 / s)
    return jnp.where(newton == 0, 0.0 + 0.0j, step)


def _backward_error(p, s):
    return (p.abs() / s).to_complex().real


def _jacobi_sweep(m, e, z, frozen):
    p, dp, _ = horner(m, e, z)
    eye = jnp.eye(z.shape[0], dtype=bool)
    diff = jnp.where(eye, 1.0, z[:, None] - z[None, :])
    s = jnp.sum(jnp.where(eye, 0.0, 1.0 / diff), axis=1)
    w = jnp.where(frozen, 0.0 + 0.0j, _aberth_correction(p, dp, s))
    return z - w, w


def _gauss_seidel_sweep(m, e, z, frozen):
    idx = jnp.arange(z.shape[0])

    def _update(i, z, w):
        zi = z[i]
        p, dp, _ = horner(m, e, zi)
        own = idx == i
        s = jnp.sum(jnp.where(own, 0.0, 1.0 / jnp.where(own, 1.0, zi - z)))
        wi = _aberth_correction(p, dp, s)
        return z.at[i].add(-wi), w.at[i].set(wi)

    def _body(i, carry):
        z, w = carry
        return jax.lax.cond(
            frozen[i], lambda i, z, w: (z, w), _update, i, z, w
        )

    return jax.lax.fori_loop(0, z.shape[0], _body, (z, jnp.zeros_like(z)))


def _restart(z, frozen, be, key, fraction):
    # perturb the worst unconverged roots by a random factor exp(0.1 (u1 + i u2))
    count = jnp.ceil(fraction * jnp.sum(~frozen))
    score = jnp.where(frozen, -jnp.inf, be)
    rank = jnp.argsort(jnp.argsort(-score))
    pick = (rank < count) & ~frozen
    u = jax.random.uniform(key, (2,) + z.shape, minval=-1.0, maxval=1.0)
    return jnp.where(pick, z * jnp.exp(_RESTART_STEP * (u[0] + 1j * u[1])), z)


@partial(jax.jit, static_argnames=("mode", "max_iterations", "restart_every"))
def _aberth(m, e, z0, key, freeze_error, fraction, mode, max_iterations, restart_every):
    sweep = _gauss_seidel_sweep if mode == "gauss_seidel" else _jacobi_sweep

    def _cond(state):
        _, frozen, it, _ = state
        return (it < max_iterations) & ~jnp.all(frozen)

    def _body(state):
        z, frozen, it, key = state
        z, w = sweep(m, e, z, frozen)
        p, _, s = horner(m, e, z)
        be = _backward_error(p, s)
        frozen = frozen | (be <= freeze_error) | (jnp.abs(w) <= 4.0 * _EPS * jnp.abs(z))
        it = it + 1
        key, sub = jax.random.split(key)
        z = jax.lax.cond(
            (it % restart_every == 0) & (it < max_iterations),
            _restart,
            lambda z, frozen, be, key, fraction: z,
            z,
            frozen,
            be,
            sub,
            fraction,
        )
        return z, frozen, it, key

    frozen = jnp.zeros(z0.shape, dtype=bool)
    z, _, it, _ = jax.lax.while_loop(_cond, _body, (z0, frozen, 0, key))
    return z, it


def _upper_hull(k, L):
    hull = []
    for point in zip(k, L):
        while len(hull) >= 2:
            (x0, y0), (x1, y1) = hull[-2], hull[-1]
            if (x1 - x0) * (point[1] - y0) - (y1 - y0) * (point[0] - x0) >= 0:
                hull.pop()
            else:
                break
        hull.append(point)
    return hull


def _newton_polygon_seeds(log_abs):
    """Seeds on circles whose radii come from the upper convex hull of (k, log|d_k|)."""
    finite = np.isfinite(log_abs)
    k = np.flatnonzero(finite)
    hull = _upper_hull(k.tolist(), log_abs[finite].tolist())
    deg = int(k.max() - k.min())
    seeds = []
    for edge, ((ki, Li), (kj, Lj)) in enumerate(zip(hull[:-1], hull[1:])):
        count = kj - ki
        radius = np.exp((Li - Lj) / count)
        angles = (
            2.0 * np.pi * np.arange(count) / count
            + 2.0 * np.pi * edge / deg
            + _SEED_ANGLE
        )
        seeds.append(radius * np.exp(1j * angles))
    return np.concatenate(seeds)


def _deflated(poly):
    # drop vanishing low-order coefficients (roots at 0) and vanishing leading ones
    low = poly.zero_multiplicity
    return poly.coeffs[low : poly.degree + 1], low


def initial_guesses(poly):
    """Starting points for the Aberth iteration, one per nonzero root.

    Parameters:
        poly:   A `PartialSumPoly` of degree >= 1.

    Returns:
        Complex numpy array of pairwise distinct seeds.
    """
    coeffs, low = _deflated(poly)
    if poly.degree < 1:
        raise SzegoDegenerateError("initial_guesses needs degree >= 1.")
    if len(coeffs) == 2:
        return np.asarray([-(coeffs[0] / coeffs[1]).to_complex()])
    if len(coeffs) < 2:
        return np.zeros(0, dtype=complex)
    return _newton_polygon_seeds(np.asarray(coeffs.log_abs()))


def _multiplicities(roots, cluster_tolerance):
    if roots.size == 0:
        return np.zeros(0, dtype=int)
    dist = np.abs(roots[:, None] - roots[None, :])
    close = dist <= cluster_tolerance * (1.0 + np.abs(roots))[:, None]
    return np.sum(close, axis=1).astype(int)


def all_roots(poly, tol=None, params=None, raise_on_failure=True):
    """Every zero of a `PartialSumPoly` in the scaled plane.

    Roots at z = 0 from vanishing low-order coefficients are deflated exactly; the remaining
    ones come from Aberth-Ehrlich iteration seeded by `initial_guesses`. A root stops moving
    once its backward error reaches 4 (deg + 1) eps or its correction is below 4 eps |z|, and
    every max_iterations // 4 sweeps the worst fraction of the moving roots is perturbed at
    random (reproducibly, from ``params.seed``).

    Parameters:
        poly:               The polynomial.
        tol:                Backward-error tolerance for a root to count as converged.
                            [default: params.root_tolerance]
        params:             Optional `SzegoParams`.
        raise_on_failure:   Raise `SzegoConvergenceError` (carrying the flagged `RootSet`) when
                            a root misses the tolerance; otherwise return the flagged set.
                            [default: True]

    Returns:
        A `RootSet`.
    """
    params = SzegoParams.check(params)
    tol = params.root_tolerance if tol is None else tol
    if poly.degree < 1:
        raise SzegoDegenerateError(
            "p_%d of %s is constant." % (poly.n - 1, poly.family.name)
        )
    if poly.degree_reduced:
        szego_warn(
            "Leading coefficients of p_%d of %s vanish; degree reduced to %d."
            % (poly.n - 1, poly.family.name, poly.degree)
        )

    coeffs, low = _deflated(poly)
    deg = len(coeffs) - 1
    iterations = 0
    if deg == 0:
        roots = np.zeros(0, dtype=complex)
    elif deg == 1:
        roots = np.asarray([-(coeffs[0] / coeffs[1]).to_complex()])
    else:
        z0 = jnp.asarray(initial_guesses(poly))
        z, it = _aberth(
            coeffs.mantissa,
            coeffs.exponent,
            z0,
            jax.random.PRNGKey(params.seed),
            4.0 * (deg + 1) * _EPS,
            params.restart_fraction,
            mode=params.root_mode,
            max_iterations=params.max_iterations,
            restart_every=max(params.max_iterations // 4, 1),
        )
        roots = np.asarray(z)
        iterations = int(it)

    if deg > 0:
        p, dp, s = horner(coeffs.mantissa, coeffs.exponent, jnp.asarray(roots))
        residuals = np.asarray(_backward_error(p, s))
        with np.errstate(divide="ignore"):
            bounds = _EPS / np.asarray(_backward_error(dp, s))
        # sum_k k |d_k| |z|^(k-1) is p' of the absolute coefficients at |z|
        _, ds, _ = horner(jnp.abs(coeffs.mantissa), coeffs.exponent, jnp.abs(jnp.asarray(roots)))
        conditioned = np.asarray(_backward_error(dp, ds)) > (deg + 1) * _EPS
    else:
        residuals = np.zeros(0)
        bounds = np.zeros(0)
        conditioned = np.zeros(0, dtype=bool)
    roots = np.concatenate([np.zeros(low, dtype=complex), roots])
    residuals = np.concatenate([np.zeros(low), residuals])
    bounds = np.concatenate([np.zeros(low), bounds])
    conditioned = np.concatenate([np.ones(low, dtype=bool), conditioned])
    converged = np.isfinite(roots) & (residuals <= tol)
    multiplicities = _multiplicities(roots, params.cluster_tolerance)
    if low == 0 and np.any(multiplicities > 1):
        szego_warn(
            "%d roots of p_%d of %s lie in clusters."
            % (int(np.sum(multiplicities > 1)), poly.n - 1, poly.family.name)
        )

    result = RootSet(
        roots=roots,
        residuals=residuals,
        iterations=iterations,
        converged=converged,
        multiplicities=multiplicities,
        n=poly.n,
        radius=poly.r_n,
        scale=poly.family.scale(),
        error_bounds=bounds,
        conditioned=conditioned,
    )
    if raise_on_failure and not result.all_converged:
        raise SzegoConvergenceError(
            "%d of %d roots of p_%d of %s missed the tolerance %r after %d sweeps."
            % (
                int(np.sum(~converged)),
                roots.size,
                poly.n - 1,
                poly.family.name,
                tol,
                iterations,
            ),
            result=result,
        )
    return result


def vieta_check(poly, roots):
    """Relative error between the product of the root moduli and |d_low / d_deg|, in log
    space (roots at zero and the matching vanishing coefficients are left out)."""
    if not roots.all_converged:
        raise SzegoValueError("vieta_check needs a converged RootSet.", roots.converged)
    coeffs, low = _deflated(poly)
    z = roots.roots[roots.roots != 0]
    log_product = np.sum(np.log(np.abs(z)))
    log_ratio = float(coeffs[0].log_abs() - coeffs[len(coeffs) - 1].log_abs())
    return float(abs(np.expm1(log_product - log_ratio)))


def companion_roots(poly):
    """Roots by eigenvalues of the companion matrix; an independent check for degree <= 30."""
    if poly.degree > _MAX_ORACLE_DEGREE:
        raise SzegoValueError(
            "companion_roots is limited to degree %d." % _MAX_ORACLE_DEGREE, poly.degree
        )
    coeffs = poly.prescaled_complex()[: poly.degree + 1]
    return np.polynomial.polynomial.polyroots(coeffs)


def set_distance(a, b):
    """Symmetric Hausdorff distance between two finite point sets."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    dist = np.abs(a[:, None] - b[None, :])
    return float(max(dist.min(axis=1).max(), dist.min(axis=0).max()))

