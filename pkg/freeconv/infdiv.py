"""
Infinitely divisible laws from generating pairs.

A :py:class:`GeneratingPair` ``(alpha, nu)`` describes both sides of the
correspondence between free and classical infinite divisibility:

- the free law whose Voiculescu transform is
  ``phi(z) = alpha + int (1 + uz) / (z - u) nu(du)``,
- the classical law with characteristic exponent
  ``f(t) = i alpha t + int (e^{itu} - 1 - itu / (1 + u^2)) (1 + u^2) / u^2
  nu(du)``, the integrand being ``-t^2 / 2`` at ``u = 0``.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidMeasure
from .measures import (GAUSS_NODES, GAUSS_WEIGHTS, FiniteMeasure, combine,
                       dirac, expect, finite_measure, support_bounds)
from .subordination import LadderTransform, SolverConfig
from .transforms import _shaped, as_points, cauchy_pair, stieltjes_invert

logger = logging.getLogger('freeconv')

# slack of the monotonicity test on (1 + u^2) / u nu'(u)
L_SLACK = 1e-12
# slack on the sign of Im phi_gamma
REMAINDER_SLACK = 1e-10
# below this |tu| the exponent kernel is evaluated by its series
SERIES_CUTOFF = 1e-2


@dataclass(frozen=True)
class GeneratingPair:
    """alpha real, nu a finite nonnegative measure."""

    alpha: float
    nu: FiniteMeasure

    def __post_init__(self):
        if not np.isfinite(self.alpha):
            raise InvalidMeasure('alpha must be finite, got %r' % self.alpha)
        if not isinstance(self.nu, FiniteMeasure):
            raise InvalidMeasure('nu must be a FiniteMeasure, got %r' %
                                 (self.nu,))
        object.__setattr__(self, 'alpha', float(self.alpha))

    @property
    def mean(self):
        """Mean of the law, alpha + int u nu(du)."""
        return self.alpha + expect(self.nu, lambda u: u)

    @property
    def variance(self):
        """Variance of the law, int (1 + u^2) nu(du)."""
        return expect(self.nu, lambda u: 1.0 + u * u)

    def __repr__(self):
        return '<GeneratingPair alpha=%g, nu=%r>' % (self.alpha, self.nu)


def semicircle_pair(variance=1.0):
    """(0, variance delta_0), the semicircle law of that variance."""
    return GeneratingPair(0.0, finite_measure([(0.0, variance)]))


def free_poisson_pair(rate, jump=1.0):
    """Free Poisson law of rate lambda and jump size c."""
    if not rate > 0:
        raise InvalidMeasure('rate must be positive, got %r' % rate)
    if jump == 0:
        raise InvalidMeasure('jump size must be nonzero')
    scale = 1.0 + jump * jump
    return GeneratingPair(rate * jump / scale,
                          finite_measure([(jump, rate * jump * jump / scale)]))


def add_pairs(first, second):
    """(alpha_1 + alpha_2, nu_1 + nu_2)."""
    return GeneratingPair(first.alpha + second.alpha,
                          combine([first.nu, second.nu]))


def _continuous(nu):
    if nu.grid is None:
        return None
    return FiniteMeasure(np.empty(0), np.empty(0), nu.grid, nu.values)


def phi_pair(pair, z):
    """phi and phi' at the points z (an array)."""
    z = np.asarray(z, dtype=complex)
    phi = np.full(z.shape, pair.alpha, dtype=complex)
    dphi = np.zeros(z.shape, dtype=complex)
    nu = pair.nu
    if nu.positions.size:
        u, w = nu.positions, nu.weights
        difference = z[..., None] - u
        phi += np.sum(w * (1 + u * z[..., None]) / difference, axis=-1)
        dphi -= np.sum(w * (1 + u * u) / (difference * difference), axis=-1)
    continuous = _continuous(nu)
    if continuous is not None:
        # (1 + uz) / (z - u) = (1 + z^2) / (z - u) - z
        mass = continuous.mass
        g, dg = cauchy_pair(continuous, z)
        phi += (1 + z * z) * g - z * mass
        dphi += 2 * z * g + (1 + z * z) * dg - mass
    return phi, dphi


def phi_of_pair(pair, z):
    """phi(z) = alpha + int (1 + uz) / (z - u) nu(du)."""
    return _shaped(phi_pair(pair, as_points(z))[0])


def selfdecomp_remainder(pair, gamma, z):
    """phi(z) - gamma phi(z / gamma), for 0 < gamma < 1."""
    if not 0 < gamma < 1:
        raise ValueError('gamma must lie in (0, 1), got %r' % (gamma,))
    z = as_points(z)
    return _shaped(phi_pair(pair, z)[0] -
                   gamma * phi_pair(pair, z / gamma)[0])


class PairSystem(object):
    """w + phi(w) = z for the unknown w = F_mu(z)."""

    size = 1

    def __init__(self, pair):
        self.pair = pair

    def initial(self, z):
        return z[:, None].copy()

    def evaluate(self, Z):
        phi, dphi = phi_pair(self.pair, Z[:, 0])
        return phi[:, None], dphi[:, None]

    def residual(self, Z, z, values):
        return Z + values - z[:, None]

    def jacobian(self, Z, values, derivatives):
        return (1.0 + derivatives)[:, :, None]

    def picard(self, Z, z, values):
        return z[:, None] - values

    def output(self, Z, values):
        return Z[:, 0]

    def output_derivative(self, values, derivatives, dZ):
        return dZ[:, 0]

    def scale(self, z, values):
        return 1.0 + np.abs(z) + np.abs(values[:, 0])


class PairTransform(LadderTransform):
    """F_mu of the free infinitely divisible law of a generating pair."""

    def __init__(self, pair, cfg=None):
        self.pair = pair
        self.system = PairSystem(pair)
        self.cfg = cfg or SolverConfig()
        self.scale = float(np.sqrt(pair.variance + pair.mean ** 2))


def pair_window(pair):
    """Interval around the mean holding most of the free law of pair."""
    lo, hi = support_bounds(pair.nu)
    radius = max(abs(lo), abs(hi)) + 2.0 * np.sqrt(pair.variance) + 1.0
    return pair.mean - radius, pair.mean + radius


def measure_of_pair(pair, window=None, resolution=None, cfg=None):
    """
    The free infinitely divisible law of pair: w = F(z) solves
    w + phi(w) = z and 1 / w is inverted on window.
    """
    if pair.nu.mass == 0:
        return dirac(pair.alpha)
    window = window or pair_window(pair)
    logger.info('free law of %r on [%g, %g]', pair, window[0], window[1])
    return stieltjes_invert(PairTransform(pair, cfg).cauchy, window,
                            resolution)


def _exponent_kernel(t, u):
    """
    (e^{itu} - 1 - itu / (1 + u^2)) (1 + u^2) / u^2, -t^2 / 2 at u = 0,
    for a scalar t and an array u.
    """
    x = 1j * t * u
    small = np.abs(x) < SERIES_CUTOFF
    with np.errstate(divide='ignore', invalid='ignore'):
        # (e^x - 1 - x) / x^2
        ratio = np.where(small, 0.0, (np.expm1(x) - x) / (x * x))
    series = 0.5 + x / 6.0 + x * x / 24.0 + x * x * x / 120.0
    ratio = np.where(small, series, ratio)
    return -t * t * (1.0 + u * u) * ratio + x


def _integrate(nu, func):
    """Complex integral of func against nu."""
    total = 0j
    if nu.positions.size:
        total += np.sum(nu.weights * func(nu.positions))
    if nu.grid is not None:
        a, b = nu.grid[:-1], nu.grid[1:]
        fa, fb = nu.values[:-1], nu.values[1:]
        half = (b - a)[:, None] / 2.0
        u = (a + b)[:, None] / 2.0 + half * GAUSS_NODES
        density = fa[:, None] + (fb - fa)[:, None] * (GAUSS_NODES + 1) / 2.0
        total += np.sum(half * GAUSS_WEIGHTS * density * func(u))
    return complex(total)


def classical_exponent(pair, t):
    """f(t) with exp(f(t)) the characteristic function of the classical law."""
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.array([1j * pair.alpha * s + _integrate(
        pair.nu, lambda u, s=s: _exponent_kernel(s, u)) for s in ts])
    if np.ndim(t) == 0:
        return complex(out[0])
    return out.reshape(np.shape(t))


def classical_cf(pair, t):
    """exp(classical_exponent(pair, t))."""
    return np.exp(classical_exponent(pair, t))


@dataclass
class ClassLVerdict:
    """Outcome of check_L_class, violations are (left, right) node pairs."""

    accepted: bool
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.accepted


def _rising(points, levels, slack):
    """Consecutive point pairs where levels increase by more than slack."""
    rising = np.nonzero(np.diff(levels) > slack)[0]
    return [(float(points[i]), float(points[i + 1])) for i in rising]


def check_L_class(nu, slack=L_SLACK):
    """
    Accept nu when u -> (1 + u^2) / u nu'(u) does not increase on either
    half-line. nu' is the density at the grid nodes, only consecutive nodes
    on the same side of 0 are compared. An atom at 0 is free and atoms
    anywhere else are rejected.
    """
    violations = [(float(u), float(u)) for u in nu.positions if u != 0]
    if nu.grid is not None:
        grid, values = nu.grid, nu.values
        with np.errstate(divide='ignore', invalid='ignore'):
            levels = (1 + grid * grid) / grid * values
        for side in (grid < 0, grid > 0):
            violations += _rising(grid[side], levels[side], slack)

    violations.sort()
    if violations:
        logger.debug('class L violations at %r', violations[:3])
    return ClassLVerdict(not violations, violations)


@dataclass
class SelfDecomposabilityVerdict:
    """check_L_class on nu together with the sign of Im phi_gamma."""

    class_l: ClassLVerdict
    worst_imaginary: float
    failures: list = field(default_factory=list)

    @property
    def accepted(self):
        return self.class_l.accepted and not self.failures

    def __bool__(self):
        return self.accepted


def probe_grid(pair, columns=9, rows=5):
    """Upper half-plane points around the mean of the free law of pair."""
    spread = 2.0 * (1.0 + np.sqrt(pair.variance))
    x = pair.mean + spread * np.linspace(-1.0, 1.0, columns)
    y = np.geomspace(0.1, 10.0, rows) * (1.0 + np.sqrt(pair.variance))
    return (x[None, :] + 1j * y[:, None]).reshape(-1)


def is_selfdecomposable(pair, gammas=(0.25, 0.5, 0.75), probes=None):
    """
    Evidence that the free law of pair is self-decomposable: nu passes
    check_L_class and Im phi_gamma <= 0 on probes for every gamma.
    """
    probes = probe_grid(pair) if probes is None else as_points(probes)
    probes = np.asarray(probes).reshape(-1)
    failures = []
    worst = -np.inf
    for gamma in gammas:
        remainder = np.asarray(selfdecomp_remainder(pair, gamma, probes))
        worst = max(worst, float(remainder.imag.max()))
        bad = remainder.imag > REMAINDER_SLACK * (1 + np.abs(remainder))
        failures += [(float(gamma), complex(z)) for z in probes[bad]]
    return SelfDecomposabilityVerdict(check_L_class(pair.nu), worst, failures)
