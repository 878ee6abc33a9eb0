"""
Limit theorem experiments: triangular arrays, norming constants and the
convergence rate sweeps.

Sweeps return plain dataclasses, :py:mod:`freeconv.cli` turns them into CSV
files. Absolute constants of the rate bounds are unknown, so every sweep
reports the ratio of the measured distance to the bound instead of
asserting anything about it.
"""

import itertools
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize

from . import settings
from .exceptions import MomentConditionViolated, NoNormingConstant
from .measures import (combine, dilate, dirac, expect, kolmogorov, levy,
                       mass_of, moment, restrict, semicircle, translate,
                       weighted)
from .subordination import ConvolutionTransform, free_convolve, free_power
from .validators import validate_probability

logger = logging.getLogger('freeconv')

MOMENT_TOL = 1e-9
NORMING_RTOL = 1e-12
# smallest b probed when bracketing the norming constant
NORMING_FLOOR = 1e-8


@dataclass(frozen=True)
class RowSummary:
    """Centerings, drift, Levy measure and infinitesimality of one row."""

    a_nk: tuple
    alpha_n: float
    nu_n: object
    eps_nk: tuple
    eps_max: float


@dataclass
class TriangularArray:
    """Rows of measures mu_n1, ..., mu_nk_n truncated at tau."""

    rows: list
    tau: float = settings.TAU

    def __post_init__(self):
        self.rows = [list(row) for row in self.rows]
        if not all(self.rows):
            raise ValueError('every row of a triangular array needs a measure')
        if not self.tau > 0:
            raise ValueError('tau must be positive, got %r' % (self.tau,))

    def summaries(self):
        return [row_summary(row, self.tau) for row in self.rows]

    def max_tail(self, eps):
        """max over k of mu_nk(|u| >= eps), one value per row."""
        return [max(mu.mass - mass_of(mu, -eps, eps) for mu in row)
                for row in self.rows]


def _levy_weight(u):
    return u * u / (1.0 + u * u)


def row_summary(row, tau=settings.TAU):
    """
    Shift every mu_nk by its truncated mean a_nk and accumulate the Levy
    measure nu_n = sum u^2 / (1 + u^2) mu_nk shifted.
    """
    if not tau > 0:
        raise ValueError('tau must be positive, got %r' % (tau,))
    centerings, parts, eps, drift = [], [], [], 0.0
    for mu in row:
        a = expect(restrict(mu, -tau, tau), lambda u: u)
        centered = translate(mu, -a)
        part = weighted(centered, _levy_weight)
        centerings.append(a)
        parts.append(part)
        eps.append(part.mass)
        drift += a + expect(centered, lambda u: u / (1.0 + u * u))
    return RowSummary(a_nk=tuple(centerings), alpha_n=drift,
                      nu_n=combine(parts), eps_nk=tuple(eps),
                      eps_max=max(eps))


def normed_sum(mus, b, a=0.0, window=None, resolution=None, cfg=None):
    """D_{1/b}(mu_1 + ... + mu_n) shifted by -a (free sum)."""
    return translate(_free_sum([dilate(mu, 1.0 / b) for mu in mus], window,
                               resolution, cfg), -a)


def _free_sum(mus, window=None, resolution=None, cfg=None):
    mus = list(mus)
    if len(mus) == 1:
        return mus[0]
    return free_convolve(mus, window, resolution, cfg)


class NormingEquation(object):
    """
    b -> (1/2) sum_k int u^2 / (b^2 + u^2) mu_k^s(du), mu_k^s the free
    symmetrization, using int u^2 / (b^2 + u^2) d mu = 1 + b Im G_mu(ib).
    """

    def __init__(self, mus, cfg=None):
        groups = {}
        for mu in mus:
            groups.setdefault(mu.key, [mu, 0])[1] += 1
        self.transforms = [
            (count, ConvolutionTransform([mu, dilate(mu, -1.0)], cfg))
            for mu, count in groups.values()]

    def __call__(self, b):
        total = 0.0
        for count, transform in self.transforms:
            g = 1.0 / complex(transform(1j * b))
            total += count * (1.0 + b * g.imag)
        return total / 2.0


@dataclass(frozen=True)
class NormingConstant:
    """b' of the norming equation and the infinitesimality condition there."""

    b: float
    condition: float

    def __float__(self):
        return self.b


def norming_condition(mus, b):
    """max over k of int u^2 / (b^2 + u^2) mu_k(du), o(1) along a sequence."""
    return float(max(expect(mu, lambda u: u * u / (b * b + u * u))
                     for mu in mus))


def norming_constant(mus, target_mass, cfg=None):
    """
    b' > 0 with (1/2) sum_k int u^2 / (b'^2 + u^2) mu_k^s(du) = target_mass,
    the left side decreasing from its supremum at 0+ to 0 at infinity.
    Returned with norming_condition(mus, b').
    """
    if not target_mass > 0:
        raise ValueError('target mass must be positive, got %r' %
                         (target_mass,))
    mus = list(mus)
    equation = NormingEquation(mus, cfg)
    supremum = equation(NORMING_FLOOR)
    if not supremum > target_mass:
        raise NoNormingConstant(target_mass, supremum)

    lo = hi = 1.0
    while equation(lo) <= target_mass:
        lo /= 2.0
    while equation(hi) > target_mass:
        hi *= 2.0
    b = optimize.brentq(lambda b: equation(b) - target_mass, lo, hi,
                        xtol=1e-15, rtol=NORMING_RTOL)
    condition = norming_condition(mus, b)
    logger.info('norming constant %.12g for target %g, condition %.4g', b,
                target_mass, condition)
    return NormingConstant(b, condition)


@dataclass(frozen=True)
class RateInputs:
    """B_n^2 = sum m_2, A_n = sum beta_3 and L_n = A_n / B_n^3."""

    B_n: float
    A_n: float
    L_n: float


@dataclass(frozen=True)
class SweepRow:
    n: int
    delta: float
    levy: float
    bound: float
    ratio: float
    rate: RateInputs = None


@dataclass
class SweepReport:
    """Distances to the semicircle law per n and the fitted log-log slope."""

    rows: list = field(default_factory=list)
    slope: float = float('nan')

    @property
    def constant(self):
        """Largest delta / bound over the rows, 0 without rows."""
        return max([row.ratio for row in self.rows] or [0.0])


@dataclass(frozen=True)
class DegenerateReport:
    """Truncated moment sums of the degenerate law of large numbers."""

    n: int
    eta1: float
    eta2: float
    eta3: float
    levy_to_delta0: float
    bound: float
    constant: float = settings.DEGENERATE_CONSTANT


def fit_slope(ns, values):
    """Least squares slope of log value against log n, zeros skipped."""
    ns = np.asarray(ns, dtype=float)
    values = np.asarray(values, dtype=float)
    keep = (values > 0) & (ns > 0)
    if np.count_nonzero(keep) < 2:
        return float('nan')
    return float(np.polyfit(np.log(ns[keep]), np.log(values[keep]), 1)[0])


def _check_moment(value, expected, name):
    if not abs(value - expected) <= MOMENT_TOL:
        raise MomentConditionViolated('%s is %.12g, expected %g' % (
            name, value, expected))


def _report(rows):
    return SweepReport(rows=rows, slope=fit_slope(
        [row.n for row in rows], [row.delta for row in rows]))


def berry_esseen_sweep(mu, ns, window=None, resolution=None, cfg=None,
                       on_row=None, reference=None):
    """
    Distances between the n-fold free power of mu rescaled by 1 / sqrt(n)
    and the standard semicircle law, against (|m_3| + sqrt(m_4)) / sqrt(n).
    """
    _check_moment(moment(mu, 1), 0.0, 'm1')
    _check_moment(moment(mu, 2), 1.0, 'm2')
    reference = reference or semicircle()
    numerator = abs(moment(mu, 3)) + np.sqrt(moment(mu, 4))
    rows = []
    for n in ns:
        n = int(n)
        power = free_power(dilate(mu, 1.0 / np.sqrt(n)), n, window,
                           resolution, cfg)
        delta = kolmogorov(power, reference)
        bound = numerator / np.sqrt(n)
        row = SweepRow(n, delta, levy(power, reference), bound,
                       delta / bound)
        logger.info('n=%d delta=%.3e levy=%.3e ratio=%.4g', n, row.delta,
                    row.levy, row.ratio)
        rows.append(row)
        if on_row:
            on_row(row)
    return _report(rows)


def rate_inputs(mus):
    """RateInputs of mu_1, ..., mu_n."""
    B = np.sqrt(sum(moment(mu, 2) for mu in mus))
    A = sum(moment(mu, 3, absolute=True) for mu in mus)
    return RateInputs(B_n=float(B), A_n=float(A), L_n=float(A / B ** 3))


def lyapunov_sweep(family, ns, window=None, resolution=None, cfg=None,
                   on_row=None, reference=None):
    """
    Distances between (mu_1 + ... + mu_n) / B_n (free sum) and the standard
    semicircle law, against L_n^{1/2}. family(n) returns mu_1, ..., mu_n.
    """
    reference = reference or semicircle()
    rows = []
    for n in ns:
        n = int(n)
        mus = list(family(n))
        for k, mu in enumerate(mus):
            _check_moment(moment(mu, 1), 0.0, 'm1 of measure %d' % k)
        rate = rate_inputs(mus)
        total = normed_sum(mus, rate.B_n, 0.0, window, resolution, cfg)
        delta = kolmogorov(total, reference)
        bound = np.sqrt(rate.L_n)
        row = SweepRow(n, delta, levy(total, reference), bound,
                       delta / bound, rate)
        logger.info('n=%d B=%.4g L=%.4g delta=%.3e', n, rate.B_n, rate.L_n,
                    delta)
        rows.append(row)
        if on_row:
            on_row(row)
    return _report(rows)


def alternating_family(*mus):
    """family(n) cycling through mus."""
    def family(n):
        return list(itertools.islice(itertools.cycle(mus), n))
    return family


def degenerate_report(mus, n, window=None, resolution=None, cfg=None):
    """
    Truncated moment sums eta1, eta2, eta3 over (-n, n) and the Levy
    distance from the free sum of D_{1/n} mu_k to delta_0, mus being cycled
    to length n.
    """
    n = int(n)
    mus = alternating_family(*mus)(n)
    eta1 = eta2 = eta3 = 0.0
    for mu in mus:
        inner = restrict(mu, -n, n)
        first = expect(inner, lambda u: u)
        eta1 += mu.mass - inner.mass
        eta2 += first
        eta3 += expect(inner, lambda u: u * u) - first * first
    eta2 /= n
    eta3 /= n * n
    total = _free_sum([dilate(mu, 1.0 / n) for mu in mus], window,
                      resolution, cfg)
    distance = levy(total, dirac(0.0))
    constant = settings.DEGENERATE_CONSTANT
    bound = constant * ((max(eta1 + eta3, 0.0)) ** (1.0 / 6.0) + abs(eta2))
    logger.info('n=%d eta=(%.3g, %.3g, %.3g) levy=%.3e', n, eta1, eta2,
                eta3, distance)
    return DegenerateReport(n, eta1, eta2, eta3, distance, bound, constant)


def degenerate_sweep(mus, ns, window=None, resolution=None, cfg=None,
                     on_row=None):
    reports = []
    for n in ns:
        report = degenerate_report(mus, n, window, resolution, cfg)
        reports.append(report)
        if on_row:
            on_row(report)
    return reports


def two_point_power_cdf(p, n, u):
    """
    Distribution function at u of the n-fold free power of two_point(p)
    rescaled by 1 / sqrt(n): a density on [x1, x2] plus, when
    n max(p, q) > n - 1, an atom where the heavier atom of two_point(p)
    lands.
    """
    p = validate_probability(p)
    n = int(n)
    if n < 2:
        raise ValueError('n must be at least 2, got %d' % n)
    q = 1.0 - p
    skew = (p - q) / np.sqrt(p * q)
    center = -skew / np.sqrt(n)
    half = 2.0 * np.sqrt(1.0 - 1.0 / n)
    x1, x2 = center - half, center + half
    for root in (np.sqrt(n * q / p), -np.sqrt(n * p / q)):
        assert not x1 < root < x2, 'denominator vanishes in the support'

    def integrand(theta):
        x = x1 + (x2 - x1) * (1.0 - np.cos(theta)) / 2.0
        denominator = 1.0 - x * (x / n + skew / np.sqrt(n))
        return ((x2 - x1) * np.sin(theta) / 2.0) ** 2 / denominator

    clamped = min(max(u, x1), x2)
    stop = np.arccos(1.0 - 2.0 * (clamped - x1) / (x2 - x1))
    value = integrate.quad(integrand, 0.0, stop, epsabs=1e-13,
                           epsrel=1e-12)[0] / (2.0 * np.pi)

    weight = n * max(p, q) - (n - 1)
    if weight > 0:
        position = np.sqrt(n) * (np.sqrt(q / p) if p > q else -np.sqrt(p / q))
        if u > position:
            value += weight
    return value
