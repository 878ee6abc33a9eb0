"""
Measures on the real line stored as atoms plus a piecewise-linear density.

:py:class:`FiniteMeasure` is any finite nonnegative measure (generating pair
measures, Nevanlinna measures, accumulated row measures), :py:class:`Measure`
is the probability measure every transform and convolution works with.

CDF values are left-continuous: ``cdf_eval(mu, x)`` is ``mu((-inf, x))``.
"""

import enum
import logging
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre

from . import settings
from .exceptions import InvalidMeasure
from .validators import (validate_atoms, validate_density, validate_mass,
                         validate_probability)

logger = logging.getLogger('freeconv')

MASS_EPS = 1e-9
MAX_MOMENT = 12
LEVY_TOL = 1e-9

# exact for a linear density times a polynomial of degree <= 14
GAUSS_NODES, GAUSS_WEIGHTS = legendre.leggauss(8)


class DistanceKind(enum.Enum):
    """Distance between the distribution functions of two measures."""

    KOLMOGOROV = 'kolmogorov'
    LEVY = 'levy'


@dataclass(frozen=True, eq=False)
class FiniteMeasure:
    """
    Finite nonnegative measure: atoms plus an optional density.

    The density is given by its values on a strictly increasing grid and is
    linear between nodes, zero outside of the grid.
    """

    positions: np.ndarray
    weights: np.ndarray
    grid: np.ndarray = None
    values: np.ndarray = None

    def __post_init__(self):
        positions, weights = validate_atoms(self.positions, self.weights)
        grid, values = validate_density(self.grid, self.values)
        object.__setattr__(self, 'positions', positions)
        object.__setattr__(self, 'weights', weights)
        object.__setattr__(self, 'grid', grid)
        object.__setattr__(self, 'values', values)

    @property
    def atoms(self):
        """List of (position, weight) tuples."""
        return list(zip(self.positions.tolist(), self.weights.tolist()))

    @property
    def density(self):
        """(grid, values) or None."""
        if self.grid is None:
            return None
        return self.grid, self.values

    @property
    def atom_mass(self):
        return float(np.sum(self.weights))

    @property
    def density_mass(self):
        if self.grid is None:
            return 0.0
        return float(trapezoid(self.grid, self.values))

    @property
    def mass(self):
        return self.atom_mass + self.density_mass

    @property
    def key(self):
        """Hashable fingerprint, equal for identical representations."""
        parts = [self.positions.tobytes(), self.weights.tobytes()]
        if self.grid is not None:
            parts += [self.grid.tobytes(), self.values.tobytes()]
        return tuple(parts)

    def __repr__(self):
        density = 'no density'
        if self.grid is not None:
            density = 'density on [%g, %g] (%d nodes)' % (
                self.grid[0], self.grid[-1], self.grid.size)
        return '<%s %d atoms, %s, mass %.12g>' % (
            type(self).__name__, self.positions.size, density, self.mass)


class Measure(FiniteMeasure):
    """Probability measure, total mass within MASS_EPS of 1."""

    def __post_init__(self):
        super(Measure, self).__post_init__()
        if np.any(self.weights > 1.0 + MASS_EPS):
            raise InvalidMeasure('atom weights must not exceed 1')
        validate_mass(self.mass, MASS_EPS)


def trapezoid(grid, values):
    """Integral of the piecewise-linear function through (grid, values)."""
    return np.sum((values[1:] + values[:-1]) * np.diff(grid)) / 2.0


def merge_atoms(positions, weights):
    """Sort atoms, add up duplicated positions and drop zero weights."""
    positions = np.asarray(positions, dtype=float).reshape(-1)
    weights = np.asarray(weights, dtype=float).reshape(-1)
    if positions.size == 0:
        return positions, weights
    unique, inverse = np.unique(positions, return_inverse=True)
    merged = np.bincount(inverse, weights=weights, minlength=unique.size)
    keep = merged > 0
    return unique[keep], merged[keep]


def normalized(positions, weights, grid=None, values=None):
    """Build a Measure after dividing everything by the total mass."""
    positions, weights = merge_atoms(positions, weights)
    mass = np.sum(weights)
    if grid is not None:
        mass += trapezoid(np.asarray(grid, float), np.asarray(values, float))
    if not mass > 0:
        raise InvalidMeasure('measure has no mass')
    if grid is not None:
        values = np.asarray(values, float) / mass
    return Measure(positions, weights / mass, grid, values)


def finite_measure(atoms=(), grid=None, values=None):
    """Finite nonnegative measure from (position, weight) pairs and density."""
    atoms = np.asarray(atoms, dtype=float).reshape(-1, 2)
    if np.any(atoms[:, 1] < 0):
        raise InvalidMeasure('atom weights must be nonnegative')
    positions, weights = merge_atoms(atoms[:, 0], atoms[:, 1])
    return FiniteMeasure(positions, weights, grid, values)


def from_atoms(atoms, tolerance=None):
    """
    Probability measure from (position, weight) pairs.

    Weights must be nonnegative and add up to 1 within tolerance (MASS_TOL
    by default), the result is renormalized exactly.
    """
    atoms = np.asarray(atoms, dtype=float).reshape(-1, 2)
    if np.any(atoms[:, 1] < 0):
        raise InvalidMeasure('atom weights must be nonnegative')
    validate_mass(float(np.sum(atoms[:, 1])), _tolerance(tolerance))
    return normalized(atoms[:, 0], atoms[:, 1])


def dirac(position=0.0):
    """Point mass at position."""
    return Measure(np.array([float(position)]), np.array([1.0]))


def from_density(grid, values, atoms=(), tolerance=None):
    """Probability measure from a gridded density and optional atoms."""
    atoms = np.asarray(atoms, dtype=float).reshape(-1, 2)
    if np.any(atoms[:, 1] < 0):
        raise InvalidMeasure('atom weights must be nonnegative')
    grid, values = validate_density(grid, values)
    mass = float(np.sum(atoms[:, 1]) + trapezoid(grid, values))
    validate_mass(mass, _tolerance(tolerance))
    return normalized(atoms[:, 0], atoms[:, 1], grid, values)


def two_point(p):
    """
    Mean zero, variance one measure with mass q = 1 - p at -sqrt(p / q)
    and mass p at sqrt(q / p).
    """
    p = validate_probability(p)
    q = 1.0 - p
    return Measure(np.array([-np.sqrt(p / q), np.sqrt(q / p)]),
                   np.array([q, p]))


def semicircle(variance=1.0, resolution=None):
    """Semicircle law of mean zero, density sqrt(4 s - x^2) / (2 pi s)."""
    if not variance > 0:
        raise InvalidMeasure('variance must be positive, got %r' % variance)
    radius = 2.0 * np.sqrt(variance)

    def density(x):
        return np.sqrt(np.clip(radius ** 2 - x ** 2, 0.0, None)) / (
            2.0 * np.pi * variance)

    def angular(theta):
        return 2.0 / np.pi * np.sin(theta) ** 2

    grid, values = edge_refined_density(
        -radius, radius, density, angular, resolution)
    return normalized((), (), grid, values)


def arcsine(radius=2.0, resolution=None):
    """Arcsine law on [-radius, radius], density 1 / (pi sqrt(r^2 - x^2))."""
    if not radius > 0:
        raise InvalidMeasure('radius must be positive, got %r' % radius)

    def density(x):
        with np.errstate(divide='ignore', invalid='ignore'):
            return 1.0 / (np.pi * np.sqrt(radius ** 2 - x ** 2))

    def angular(theta):
        return np.full_like(theta, 1.0 / np.pi)

    grid, values = edge_refined_density(
        -radius, radius, density, angular, resolution)
    return normalized((), (), grid, values)


def marchenko_pastur(rate, jump=1.0, resolution=None):
    """
    Free Poisson law with the given rate and jump size.

    The absolutely continuous part lives on
    [jump (1 - sqrt(rate))^2, jump (1 + sqrt(rate))^2] and an atom of mass
    1 - rate sits at 0 when rate < 1.
    """
    if not rate > 0:
        raise InvalidMeasure('rate must be positive, got %r' % rate)
    if jump == 0:
        raise InvalidMeasure('jump must be nonzero')
    scale = abs(jump)
    lo = scale * (1.0 - np.sqrt(rate)) ** 2
    hi = scale * (1.0 + np.sqrt(rate)) ** 2
    half = (hi - lo) / 2.0

    def density(x):
        with np.errstate(divide='ignore', invalid='ignore'):
            return np.sqrt(np.clip((hi - x) * (x - lo), 0.0, None)) / (
                2.0 * np.pi * scale * x)

    def angular(theta):
        x = lo + half * (1.0 - np.cos(theta))
        # x vanishes like theta^2 at theta = 0 when rate == 1
        with np.errstate(divide='ignore', invalid='ignore'):
            out = half ** 2 * np.sin(theta) ** 2 / (2.0 * np.pi * scale * x)
        return np.where(x > 0, out, half / (np.pi * scale))

    grid, values = edge_refined_density(lo, hi, density, angular, resolution)
    positions, weights = (), ()
    if rate < 1:
        positions, weights = [0.0], [1.0 - rate]
    out = normalized(positions, weights, grid, values)
    if jump < 0:
        out = transform_measure(out, -1.0, 0.0)
    return out


def edge_refined_density(lo, hi, density, angular, resolution=None):
    """
    Grid and nodal values for a density with square root type edges.

    Base nodes are cosine spaced, ``x = lo + (hi - lo)(1 - cos t) / 2``,
    and every base cell gets a midpoint node. ``angular(t)`` is the
    density with respect to t, its Gauss-Legendre cell masses are exact.

    A density bounded on [lo, hi] is stored as its value at every node,
    scaled by one factor so that the piecewise linear mass is exact. An
    unbounded one stores 0 at the infinite edges and midpoint values that
    make every cell mass exact, so its CDF is exact at the base nodes.
    """
    resolution = int(resolution or settings.GRID_RESOLUTION)
    if resolution < 2:
        raise InvalidMeasure('resolution must be at least 2')
    theta = np.linspace(0.0, np.pi, resolution)
    base = lo + (hi - lo) * (1.0 - np.cos(theta)) / 2.0
    base[0], base[-1] = lo, hi

    t0, t1 = theta[:-1], theta[1:]
    half = (t1 - t0) / 2.0
    nodes = (t0 + t1)[:, None] / 2.0 + half[:, None] * GAUSS_NODES
    cell_mass = half * np.sum(GAUSS_WEIGHTS * angular(nodes), axis=1)

    grid = np.empty(2 * resolution - 1)
    grid[0::2] = base
    grid[1::2] = (base[:-1] + base[1:]) / 2.0
    with np.errstate(divide='ignore', invalid='ignore'):
        values = density(grid)
    if np.all(np.isfinite(values)):
        return grid, values * np.sum(cell_mass) / trapezoid(grid, values)

    values = np.where(np.isfinite(values), values, 0.0)
    at_nodes = values[0::2]
    width = np.diff(base)
    middle = 2.0 * cell_mass / width - (at_nodes[:-1] + at_nodes[1:]) / 2.0
    values[1::2] = np.clip(middle, 0.0, None)
    return grid, values


def construct(spec):
    """
    Build the Measure named by a MeasureSpec.

    ``spec.kind`` is one of atoms, density, semicircle, two_point, arcsine,
    marchenko_pastur and ``spec.params`` holds the family parameters.
    """
    params = dict(spec.params)
    kind = spec.kind
    try:
        if kind == 'atoms':
            return from_atoms(params['atoms'])
        if kind == 'density':
            return from_density(params['grid'], params['values'],
                                params.get('atoms', ()))
        if kind == 'semicircle':
            return semicircle(params.get('variance', 1.0),
                              params.get('resolution'))
        if kind == 'two_point':
            return two_point(params['p'])
        if kind == 'arcsine':
            return arcsine(params.get('radius', 2.0),
                           params.get('resolution'))
        if kind == 'marchenko_pastur':
            return marchenko_pastur(params['rate'], params.get('jump', 1.0),
                                    params.get('resolution'))
    except KeyError as e:
        raise InvalidMeasure('%s spec misses parameter %s' % (kind, e))
    raise InvalidMeasure('unsupported measure family %r' % (kind,))


def _tolerance(tolerance):
    return settings.MASS_TOL if tolerance is None else tolerance


def _scalar(value, like):
    if np.ndim(like) == 0:
        return float(value)
    return value


def cdf_eval(mu, x, right=False):
    """
    Left-continuous CDF mu((-inf, x)), or mu((-inf, x]) when right is set.

    Accepts scalars or arrays.
    """
    x_array = np.asarray(x, dtype=float)
    cumulated = np.concatenate([[0.0], np.cumsum(mu.weights)])
    side = 'right' if right else 'left'
    out = cumulated[np.searchsorted(mu.positions, x_array, side=side)]
    if mu.grid is not None:
        out = out + _density_cdf(mu.grid, mu.values, x_array)
    return _scalar(out, x)


def _density_cdf(grid, values, x):
    cells = (values[1:] + values[:-1]) * np.diff(grid) / 2.0
    cumulated = np.concatenate([[0.0], np.cumsum(cells)])
    index = np.clip(np.searchsorted(grid, x, side='right') - 1,
                    0, grid.size - 2)
    start = grid[index]
    slope = (values[index + 1] - values[index]) / (grid[index + 1] - start)
    inside = np.clip(x, grid[0], grid[-1]) - start
    partial = inside * (2.0 * values[index] + slope * inside) / 2.0
    out = cumulated[index] + partial
    out = np.where(x <= grid[0], 0.0, out)
    return np.where(x >= grid[-1], cumulated[-1], out)


def density_eval(mu, x):
    """Density value at x (0 outside of the grid)."""
    if mu.grid is None:
        return _scalar(np.zeros_like(np.asarray(x, dtype=float)), x)
    return _scalar(np.interp(x, mu.grid, mu.values, left=0.0, right=0.0), x)


def expect(mu, func):
    """
    Integral of func against mu. func must accept and return arrays.

    Atoms are summed exactly, the density is integrated cell by cell with
    Gauss-Legendre nodes.
    """
    total = 0.0
    if mu.positions.size:
        total += float(np.sum(mu.weights * func(mu.positions)))
    if mu.grid is not None:
        a, b = mu.grid[:-1], mu.grid[1:]
        fa, fb = mu.values[:-1], mu.values[1:]
        half = (b - a) / 2.0
        t = (a + b)[:, None] / 2.0 + half[:, None] * GAUSS_NODES
        f = fa[:, None] + (fb - fa)[:, None] * (t - a[:, None]) / (
            2.0 * half[:, None])
        total += float(np.sum(half * np.sum(GAUSS_WEIGHTS * f * func(t),
                                            axis=1)))
    return total


def split_at(mu, point):
    """Same measure with point inserted in the density grid."""
    if mu.grid is None or not mu.grid[0] < point < mu.grid[-1]:
        return mu
    if np.any(mu.grid == point):
        return mu
    index = np.searchsorted(mu.grid, point)
    grid = np.insert(mu.grid, index, point)
    values = np.insert(mu.values, index,
                       np.interp(point, mu.grid, mu.values))
    return type(mu)(mu.positions, mu.weights, grid, values)


def moment(mu, k, absolute=False):
    """m_k(mu), or the absolute moment beta_k(mu) when absolute is set."""
    k = int(k)
    if not 0 <= k <= MAX_MOMENT:
        raise ValueError('moment order must be in [0, %d], got %d' % (
            MAX_MOMENT, k))
    if absolute:
        return expect(split_at(mu, 0.0), lambda t: np.abs(t) ** k)
    return expect(mu, lambda t: t ** k)


def mean(mu):
    return moment(mu, 1)


def variance(mu):
    return moment(mu, 2) - moment(mu, 1) ** 2


def restrict(mu, lo, hi):
    """FiniteMeasure made of the mass of mu inside the open interval."""
    keep = (mu.positions > lo) & (mu.positions < hi)
    grid = values = None
    if mu.grid is not None:
        start, stop = max(lo, mu.grid[0]), min(hi, mu.grid[-1])
        if stop > start:
            inner = mu.grid[(mu.grid > start) & (mu.grid < stop)]
            grid = np.concatenate([[start], inner, [stop]])
            values = np.interp(grid, mu.grid, mu.values)
    return FiniteMeasure(mu.positions[keep], mu.weights[keep], grid, values)


def mass_of(mu, lo, hi):
    """mu((lo, hi))."""
    return restrict(mu, lo, hi).mass


def support_bounds(mu):
    """Smallest interval holding every atom and the density grid."""
    points = [mu.positions]
    if mu.grid is not None:
        points.append(mu.grid[[0, -1]])
    points = np.concatenate(points)
    if points.size == 0:
        return 0.0, 0.0
    return float(points.min()), float(points.max())


def weighted(mu, func):
    """FiniteMeasure with density func(u) d mu(u), func >= 0."""
    positions, weights = merge_atoms(mu.positions,
                                     mu.weights * func(mu.positions))
    values = None
    if mu.grid is not None:
        values = mu.values * func(mu.grid)
    return FiniteMeasure(positions, weights, mu.grid, values)


def combine(measures, coefficients=None):
    """
    FiniteMeasure sum of c_i * mu_i with nonnegative coefficients.

    Densities on different grids are merged on the union grid, with one
    extra node just outside every support edge so that jumps survive.
    """
    measures = list(measures)
    if coefficients is None:
        coefficients = [1.0] * len(measures)
    if any(c < 0 for c in coefficients):
        raise InvalidMeasure('coefficients must be nonnegative')
    positions = [mu.positions for mu in measures]
    weights = [c * mu.weights for mu, c in zip(measures, coefficients)]
    positions, weights = merge_atoms(
        np.concatenate(positions or [[]]), np.concatenate(weights or [[]]))

    parts = [(mu.grid, c * mu.values) for mu, c in zip(measures, coefficients)
             if mu.grid is not None and c > 0]
    grid = values = None
    if parts and all(np.array_equal(g, parts[0][0]) for g, _ in parts):
        grid, values = parts[0][0], np.sum([v for _, v in parts], axis=0)
    elif parts:
        edges = []
        for g, _ in parts:
            edges += [np.nextafter(g[0], -np.inf), np.nextafter(g[-1], np.inf)]
        grid = np.unique(np.concatenate([g for g, _ in parts] + [edges]))
        values = np.zeros_like(grid)
        for g, v in parts:
            values += np.interp(grid, g, v, left=0.0, right=0.0)
    return FiniteMeasure(positions, weights, grid, values)


def transform_measure(mu, gamma, shift=0.0):
    """
    Image of mu under x -> gamma x + shift.

    gamma = -1 gives the reflection, gamma = 1 a translation.
    """
    if gamma == 0:
        raise InvalidMeasure('dilation factor must be nonzero')
    order = slice(None, None, -1) if gamma < 0 else slice(None)
    positions = (gamma * mu.positions + shift)[order]
    weights = mu.weights[order]
    grid = values = None
    if mu.grid is not None:
        grid = (gamma * mu.grid + shift)[order]
        values = (mu.values / abs(gamma))[order]
    return type(mu)(positions, weights, grid, values)


def dilate(mu, gamma):
    """D_gamma mu."""
    return transform_measure(mu, gamma, 0.0)


def translate(mu, shift):
    """mu shifted by shift."""
    return transform_measure(mu, 1.0, shift)


def _breakpoints(mu):
    points = [mu.positions]
    if mu.grid is not None:
        points.append(mu.grid)
    return np.concatenate(points)


def _inner_density(mu, x, middle):
    """Density at x seen from inside the cell whose midpoint is middle."""
    if mu.grid is None:
        return np.zeros_like(x)
    inside = (middle > mu.grid[0]) & (middle < mu.grid[-1])
    return np.where(inside, np.interp(x, mu.grid, mu.values), 0.0)


def sup_difference(mu, nu):
    """
    sup over x of mu((-inf, x)) - nu((-inf, x)) including right limits.

    Both CDFs are piecewise quadratic between merged breakpoints, so the
    supremum is attained at a breakpoint or where the densities cross.
    """
    points = np.unique(np.concatenate([_breakpoints(mu), _breakpoints(nu)]))
    candidates = [points]
    if points.size > 1:
        a, b = points[:-1], points[1:]
        middle = (a + b) / 2.0
        da = _inner_density(mu, a, middle) - _inner_density(nu, a, middle)
        db = _inner_density(mu, b, middle) - _inner_density(nu, b, middle)
        crossing = da * db < 0
        candidates.append(a[crossing] + (b - a)[crossing] * da[crossing] / (
            da[crossing] - db[crossing]))
    x = np.concatenate(candidates)
    if x.size == 0:
        return 0.0
    left = cdf_eval(mu, x) - cdf_eval(nu, x)
    right = cdf_eval(mu, x, right=True) - cdf_eval(nu, x, right=True)
    return float(max(0.0, left.max(), right.max()))


def kolmogorov(mu, nu):
    """sup over x of |mu((-inf, x)) - nu((-inf, x))|."""
    return max(sup_difference(mu, nu), sup_difference(nu, mu))


def levy(mu, nu, tolerance=LEVY_TOL):
    """
    Infimum of h such that mu((-inf, x - h)) - h <= nu((-inf, x))
    <= mu((-inf, x + h)) + h for every x, by bisection on [0, 1].
    """
    upper = min(1.0, kolmogorov(mu, nu))
    if upper == 0:
        return 0.0

    def feasible(h):
        return (sup_difference(nu, translate(mu, -h)) <= h and
                sup_difference(mu, translate(nu, -h)) <= h)

    lower = 0.0
    while upper - lower > tolerance:
        middle = (lower + upper) / 2.0
        if feasible(middle):
            upper = middle
        else:
            lower = middle
    return upper


def distance(mu, nu, kind=DistanceKind.KOLMOGOROV):
    """Kolmogorov or Levy distance between two measures."""
    kind = DistanceKind(kind)
    if kind is DistanceKind.LEVY:
        return levy(mu, nu)
    return kolmogorov(mu, nu)
