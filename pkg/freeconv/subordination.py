"""
Free additive convolution through subordination.

For measures mu_1, ..., mu_r taken k_1, ..., k_r times (N = sum k_i) the
subordination functions solve::

    z = k_1 Z_1 + ... + k_r Z_r - (N - 1) F,   F_i(Z_i) = F for every i

and F is the reciprocal Cauchy transform of the convolution at z. Identical
input measures are grouped, so an n-fold power is a single unknown.

Every solve is vectorized over query points. A step is a Newton step when
it lowers the residual and stays in the upper half-plane, otherwise the
better of a damped Newton step and a damped Picard step of the map::

    Z_j <- (z + (k_j - 1) F_j(Z_j) + sum_{i != j} k_i (F_i(Z_i) - Z_i)) / k_j

which sends the upper half-plane into itself. Steps that do not lower the
residual are rejected. Every point is first solved well above the real
axis, at CONTINUATION_HEIGHT (1 + scale), and walked down from there.
"""

import logging
from collections import OrderedDict
from dataclasses import dataclass, field

import numpy as np

from . import settings
from .exceptions import NoConvergence
from .measures import (dirac, mean, support_bounds, translate,
                       transform_measure, variance)
from .transforms import (ReciprocalCauchy, UpperHalfPoint, as_points,
                         stieltjes_invert)

logger = logging.getLogger('freeconv')

# a failing continuation rung is retried with a ratio closer to 1, up to this
MAX_RUNG_RATIO = 0.99


@dataclass(frozen=True)
class SolverConfig:
    """Tolerance, iteration cap and initial damping of every solve."""

    tol: float = settings.TOL
    max_iter: int = settings.MAX_ITER
    damping: float = settings.DAMPING

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError('tol must be positive, got %r' % self.tol)
        if not self.max_iter > 0:
            raise ValueError('max_iter must be positive, got %r' %
                             self.max_iter)
        if not 0 < self.damping <= 1:
            raise ValueError('damping must lie in (0, 1], got %r' %
                             self.damping)


@dataclass(frozen=True)
class SubordinationResult:
    """Subordination functions at one query point with diagnostics."""

    z: UpperHalfPoint
    Z: tuple
    F_value: complex
    residual: float
    iterations: int
    converged: bool


@dataclass
class Solution:
    """Arrays describing a vectorized solve, one row per query point."""

    z: np.ndarray
    Z: np.ndarray
    values: np.ndarray
    derivatives: np.ndarray
    output: np.ndarray
    residual: np.ndarray
    iterations: np.ndarray
    converged: np.ndarray
    history: list = field(default_factory=list)

    def update(self, index, other, rows):
        """Copy the rows of other into the points index of this solution."""
        for name in ('z', 'Z', 'values', 'derivatives', 'output', 'residual',
                     'converged'):
            getattr(self, name)[index] = getattr(other, name)[rows]
        self.iterations[index] += other.iterations[rows]
        self.history.extend(other.history)


class GroupedSystem(object):
    """Subordination equations for groups of identical measures."""

    def __init__(self, measures, multiplicities):
        self.measures = list(measures)
        self.transforms = [ReciprocalCauchy(mu) for mu in self.measures]
        self.k = np.asarray(multiplicities, dtype=float)
        self.total = float(np.sum(self.k))
        self.size = len(self.measures)

    def initial(self, z):
        return np.repeat(z[:, None], self.size, axis=1)

    def evaluate(self, Z):
        values = np.empty_like(Z)
        derivatives = np.empty_like(Z)
        for i, transform in enumerate(self.transforms):
            values[:, i], derivatives[:, i] = (
                transform.values_and_derivatives(Z[:, i]))
        return values, derivatives

    def residual(self, Z, z, values):
        out = values - values[:, :1]
        out[:, 0] = (np.sum(self.k * Z, axis=1) -
                     (self.total - 1) * values[:, 0] - z)
        return out

    def jacobian(self, Z, values, derivatives):
        count = Z.shape[0]
        jacobian = np.zeros((count, self.size, self.size), dtype=complex)
        jacobian[:, 0, :] = self.k
        jacobian[:, 0, 0] -= (self.total - 1) * derivatives[:, 0]
        for i in range(1, self.size):
            jacobian[:, i, i] = derivatives[:, i]
            jacobian[:, i, 0] = -derivatives[:, 0]
        return jacobian

    def picard(self, Z, z, values):
        shift = self.k * (values - Z)
        others = np.sum(shift, axis=1)[:, None] - shift
        return (z[:, None] + (self.k - 1) * values + others) / self.k

    def output(self, Z, values):
        return values[:, 0]

    def output_derivative(self, values, derivatives, dZ):
        return derivatives[:, 0] * dZ[:, 0]

    def scale(self, z, values):
        return 1.0 + np.abs(z) + self.total * np.max(np.abs(values), axis=1)


def _batched_solve(matrices, vectors):
    """Solve every matrices[m] x = vectors[m], nan where singular."""
    if matrices.shape[1] == 1:
        with np.errstate(divide='ignore', invalid='ignore'):
            return vectors / matrices[:, :, 0]
    try:
        return np.linalg.solve(matrices, vectors[..., None])[..., 0]
    except np.linalg.LinAlgError:
        out = np.full(vectors.shape, np.nan, dtype=complex)
        for m in range(matrices.shape[0]):
            try:
                out[m] = np.linalg.solve(matrices[m], vectors[m])
            except np.linalg.LinAlgError:
                pass
        return out


def _max_abs(values):
    return np.max(np.abs(values), axis=1)


def _trial(system, z, Z):
    """
    (Z, values, derivatives, residual, norm) at the candidates Z. Rows
    leaving the upper half-plane get an infinite norm.
    """
    usable = np.all(np.isfinite(Z) & (Z.imag > 0), axis=1)
    Z = np.where(usable[:, None], Z, z[:, None] + 1j)
    values, derivatives = system.evaluate(Z)
    residual = system.residual(Z, z, values)
    with np.errstate(invalid='ignore'):
        norm = np.where(usable, _max_abs(residual), np.inf)
    return Z, values, derivatives, residual, norm


def _choose(mask, first, second):
    """Row-wise first where mask holds, second elsewhere."""
    return tuple(np.where(mask.reshape((-1,) + (1,) * (a.ndim - 1)), a, b)
                 for a, b in zip(first, second))


def iterate(system, z, start, cfg):
    """
    Solve system at the points z starting from start, one row per point.

    A point moves only when its residual drops: first by a full Newton
    step, then by the better of a damped Newton and a damped Picard step.
    Failed steps halve the damping of the point, points failing at
    MIN_DAMPING stop. Returns a Solution, points that did not converge are
    flagged in ``converged``.
    """
    Z = np.array(start, dtype=complex)
    values, derivatives = system.evaluate(Z)
    residual = system.residual(Z, z, values)
    norm = _max_abs(residual)
    damping = np.full(z.shape, cfg.damping)
    iterations = np.zeros(z.shape, dtype=int)
    converged = norm <= cfg.tol * system.scale(z, values)
    stalled = np.zeros(z.shape, dtype=bool)
    history = []

    for iteration in range(cfg.max_iter):
        active = np.nonzero(~(converged | stalled))[0]
        if active.size == 0:
            break
        history.append(float(norm[active].max()))
        Za, za = Z[active], z[active]
        va, da, ra, na = (values[active], derivatives[active],
                          residual[active], norm[active])

        step = _batched_solve(system.jacobian(Za, va, da), -ra)
        trial = _trial(system, za, Za + step)
        accept = trial[4] < na

        rest = np.nonzero(~accept)[0]
        if rest.size:
            lam = damping[active[rest]][:, None]
            damped = _trial(system, za[rest], Za[rest] + lam * step[rest])
            mapped = system.picard(Za[rest], za[rest], va[rest])
            picard = _trial(system, za[rest],
                            (1 - lam) * Za[rest] + lam * mapped)
            best = _choose(damped[4] <= picard[4], damped, picard)
            better = best[4] < na[rest]
            for array, replacement in zip(trial, best):
                array[rest[better]] = replacement[better]
            accept[rest[better]] = True

            index = active[rest]
            damping[index[better]] = np.minimum(
                2.0 * damping[index[better]], cfg.damping)
            failed = index[~better]
            stalled[failed] = damping[failed] <= settings.MIN_DAMPING
            damping[failed] = np.maximum(damping[failed] / 2.0,
                                         settings.MIN_DAMPING)

        moved = active[accept]
        (Z[moved], values[moved], derivatives[moved], residual[moved],
         norm[moved]) = (array[accept] for array in trial)
        iterations[active] += 1
        converged[moved] = norm[moved] <= cfg.tol * system.scale(
            z[moved], values[moved])

    if np.any(stalled & ~converged):
        logger.debug('%d points stalled, worst residual %.3g',
                     np.count_nonzero(stalled & ~converged),
                     norm[stalled & ~converged].max())
    return Solution(z=z, Z=Z, values=values, derivatives=derivatives,
                    output=system.output(Z, values), residual=norm,
                    iterations=iterations, converged=converged,
                    history=history)


class LadderTransform(object):
    """
    Evaluator defined by solving a system at every query point.

    Subclasses set ``system`` and ``cfg``. Calling the transform returns the
    solved output (a reciprocal Cauchy transform).
    """

    system = None
    cfg = None
    scale = 16.0

    def _check(self, solution):
        if not np.all(solution.converged):
            worst = int(np.argmax(np.where(solution.converged, -1.0,
                                           solution.residual)))
            raise NoConvergence(
                'no convergence at %r after %d iterations, residual %.3g' % (
                    complex(solution.z[worst]),
                    int(solution.iterations[worst]),
                    solution.residual[worst]),
                solution.history, int(solution.iterations.max()))
        return solution

    def solve(self, z, hint=None):
        """
        Solution at the points z. Every point is solved cold at height
        CONTINUATION_HEIGHT (1 + scale) or higher and continued down.
        """
        z = as_points(z).reshape(-1)
        if hint is not None:
            start = np.broadcast_to(np.asarray(hint, dtype=complex),
                                    (z.size, self.system.size))
            solution = iterate(self.system, z, start, self.cfg)
            if np.all(solution.converged):
                return solution
        top = settings.CONTINUATION_HEIGHT * (1.0 + self.scale)
        start = z.real + 1j * np.maximum(z.imag, top)
        solution = self._check(iterate(self.system, start,
                                       self.system.initial(start), self.cfg))
        return self.descend(solution, z.imag)

    def descend(self, solution, heights):
        """
        Continue solution down to heights. A rung halves the height of a
        point; where it fails the ratio moves towards 1 and the rung is
        retried from the last converged height.
        """
        heights = np.broadcast_to(np.asarray(heights, dtype=float),
                                  solution.z.shape)
        ratio = np.full(heights.shape, 0.5)
        while True:
            pending = np.nonzero(solution.z.imag > heights)[0]
            if pending.size == 0:
                return solution
            lower = np.maximum(solution.z.imag[pending] * ratio[pending],
                               heights[pending])
            logger.debug('continuation rung of %d points down to %.3g',
                         pending.size, lower.min())
            rung = iterate(self.system, solution.z.real[pending] + 1j * lower,
                           solution.Z[pending], self.cfg)
            done = rung.converged
            solution.update(pending[done], rung, done)
            ratio[pending[done]] = np.maximum(ratio[pending[done]] ** 2, 0.5)
            failed = pending[~done]
            if failed.size:
                ratio[failed] = np.sqrt(ratio[failed])
                if np.any(ratio[failed] > MAX_RUNG_RATIO):
                    self._check(rung)

    def __call__(self, z):
        shape = np.shape(z)
        solution = self.solve(z)
        out = solution.output.reshape(shape)
        return complex(out) if out.ndim == 0 else out

    def derivative(self, z):
        """Derivative of the output by implicit differentiation."""
        shape = np.shape(z)
        solution = self.solve(z)
        jacobian = self.system.jacobian(solution.Z, solution.values,
                                        solution.derivatives)
        unit = np.zeros(solution.Z.shape, dtype=complex)
        unit[:, 0] = 1.0
        dZ = _batched_solve(jacobian, unit)
        out = self.system.output_derivative(
            solution.values, solution.derivatives, dZ).reshape(shape)
        return complex(out) if out.ndim == 0 else out

    def evaluate_levels(self, x, ys):
        """Outputs on the lines x + iy, walking down from the highest y."""
        x = np.asarray(x, dtype=float)
        order = sorted(range(len(ys)), key=lambda i: -ys[i])
        results = [None] * len(ys)
        solution = None
        for i in order:
            heights = np.full(x.shape, float(ys[i]))
            if solution is None:
                solution = self.solve(x + 1j * heights)
            else:
                solution = self.descend(solution, heights)
            results[i] = solution.output.copy()
        return results

    @property
    def cauchy(self):
        """The Cauchy transform 1 / output as an evaluator."""
        return CauchyView(self)


class CauchyView(object):
    """1 / F for a LadderTransform F."""

    def __init__(self, transform):
        self.transform = transform

    def __call__(self, z):
        return 1.0 / np.asarray(self.transform(z))

    def evaluate_levels(self, x, ys):
        return [1.0 / v for v in self.transform.evaluate_levels(x, ys)]


def group_measures(mus):
    """Distinct measures, their multiplicities and the group of each input."""
    groups = OrderedDict()
    membership = []
    for mu in mus:
        index = groups.setdefault(mu.key, (len(groups), mu))[0]
        membership.append(index)
    measures = [mu for _, mu in groups.values()]
    counts = np.bincount(membership, minlength=len(measures))
    return measures, counts, membership


class ConvolutionTransform(LadderTransform):
    """F of the free sum of mus at any upper half-plane points."""

    def __init__(self, mus, cfg=None):
        mus = list(mus)
        if not mus:
            raise ValueError('need at least one measure')
        measures, counts, self.membership = group_measures(mus)
        self.system = GroupedSystem(measures, counts)
        self.cfg = cfg or SolverConfig()
        total_mean = sum(mean(mu) for mu in mus)
        total_variance = sum(variance(mu) for mu in mus)
        self.scale = float(np.sqrt(max(total_variance + total_mean ** 2,
                                       0.0)))

    def result(self, z, hint=None):
        """SubordinationResult at a single point."""
        point = UpperHalfPoint.from_complex(complex(as_points(z)))
        solution = self.solve(np.array([point.z]), hint)
        Z = tuple(complex(solution.Z[0, g]) for g in self.membership)
        return SubordinationResult(
            z=point, Z=Z, F_value=complex(solution.output[0]),
            residual=float(solution.residual[0]),
            iterations=int(solution.iterations[0]),
            converged=bool(solution.converged[0]))


def subordinate(mus, z, cfg=None):
    """Subordination functions Z_1, ..., Z_n of mu_1 + ... + mu_n at z."""
    mus = list(mus)
    if len(mus) < 2:
        raise ValueError('subordinate needs at least 2 measures')
    return ConvolutionTransform(mus, cfg).result(z)


def subordinate_power(mu, n, z, cfg=None):
    """Z of the n-fold free power of mu, nZ - (n - 1) F(Z) = z."""
    n = _power(n)
    return ConvolutionTransform([mu] * n, cfg).result(z)


def _power(n):
    if int(n) != n or n < 1:
        raise ValueError('power must be a positive integer, got %r' % (n,))
    return int(n)


def support_radius(mus):
    """Bound on |x - total mean| over the support of the free sum."""
    radii = []
    for mu in mus:
        lo, hi = support_bounds(mu)
        center = mean(mu)
        radii.append(max(center - lo, hi - center))
    sigma = np.sqrt(sum(max(variance(mu), 0.0) for mu in mus))
    return float(min(sum(radii), max(radii) + 2.0 * sigma))


def default_window(mus):
    """[c - (R + 1), c + (R + 1)] around the total mean c."""
    mus = list(mus)
    center = sum(mean(mu) for mu in mus)
    radius = support_radius(mus) + 1.0
    return center - radius, center + radius


def free_convolve(mus, window=None, resolution=None, cfg=None):
    """mu_1 + ... + mu_n (free sum), recovered by Stieltjes inversion."""
    mus = list(mus)
    if len(mus) < 2:
        raise ValueError('free_convolve needs at least 2 measures')
    return _invert(mus, window, resolution, cfg)


def free_power(mu, n, window=None, resolution=None, cfg=None):
    """n-fold free power of mu, mu itself for n = 1."""
    n = _power(n)
    if n == 1:
        return mu
    return _invert([mu] * n, window, resolution, cfg)


def symmetrize(mu, window=None, resolution=None, cfg=None):
    """mu plus its reflection (free sum)."""
    return free_convolve([mu, transform_measure(mu, -1.0, 0.0)], window,
                         resolution, cfg)


def _is_point_mass(mu):
    return mu.grid is None and mu.positions.size == 1


def _invert(mus, window, resolution, cfg):
    # point masses only translate a free sum
    shift = sum(float(mu.positions[0]) for mu in mus if _is_point_mass(mu))
    mus = [mu for mu in mus if not _is_point_mass(mu)]
    if len(mus) < 2:
        return translate(mus[0], shift) if mus else dirac(shift)
    if window:
        window = (window[0] - shift, window[1] - shift)
    transform = ConvolutionTransform(mus, cfg)
    window = window or default_window(mus)
    logger.info('free sum of %d measures (%d distinct) on [%g, %g]',
                len(mus), transform.system.size, window[0], window[1])
    return translate(stieltjes_invert(transform.cauchy, window, resolution),
                     shift)
