"""
Cauchy transform G, its reciprocal F = 1/G, the Voiculescu transform and
the Nevanlinna / Stieltjes-Perron machinery.

Evaluators are plain callables mapping complex numpy arrays of upper
half-plane points to complex arrays. An evaluator may also carry:

- ``derivative(z)``, used by Newton steps instead of difference quotients,
- ``scale``, the square root of the second moment, used to seed inversions,
- ``evaluate_levels(x, ys)``, returning its values on the horizontal lines
  ``x + iy`` for every ``y`` in ``ys``; solvers use it to walk down to the
  real axis once instead of once per line.
"""

import logging
from dataclasses import dataclass

import numpy as np

from . import settings
from .exceptions import (InvalidMeasure, InvalidPoint, NoConvergence,
                         OutsideInvertibilityDomain, WindowTooSmall)
from .measures import (FiniteMeasure, merge_atoms, moment, normalized,
                       support_bounds, trapezoid, weighted)

logger = logging.getLogger('freeconv')

# z points times density cells evaluated per block
BLOCK_SIZE = 2 ** 20

INVERSE_TOL = 1e-12
NEWTON_MAX_ITER = 200
CONE_DOUBLINGS = 10
ATOM_RATIO = 0.85

# support edges: density level relative to the maximum, node cells kept on
# each side, refinement factor and the most edges refined
EDGE_LEVEL = 1e-3
EDGE_CELLS = 32
EDGE_REFINEMENT = 16
MAX_EDGES = 16

_SERIES = np.array([(-1.0) ** (k + 1) / k for k in range(24, 1, -1)])


@dataclass(frozen=True)
class UpperHalfPoint:
    """Point of the open upper half-plane."""

    re: float
    im: float

    def __post_init__(self):
        if not self.im > 0:
            raise InvalidPoint('%r is not in the upper half-plane' % (
                complex(self.re, self.im),))

    @property
    def z(self):
        return complex(self.re, self.im)

    @classmethod
    def from_complex(cls, z):
        z = complex(z)
        return cls(z.real, z.imag)

    def __complex__(self):
        return self.z


@dataclass(frozen=True)
class TruncatedCone:
    """{z = x + iy : |x| < alpha y, y > beta}."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError('cone needs alpha > 0 and beta > 0')

    def contains(self, z):
        z = complex(z)
        return z.imag > self.beta and abs(z.real) < self.alpha * z.imag

    def probe_points(self, rows=4, columns=5):
        """rows * columns points inside the cone."""
        heights = self.beta * np.geomspace(1.25, 5.0, rows)
        spread = self.alpha * np.linspace(-0.8, 0.8, columns)
        return (heights[:, None] * (spread[None, :] + 1j)).reshape(-1)


@dataclass(frozen=True)
class NevanlinnaRep:
    """
    f(z) = a + b z + int (1 + u z) / (u - z) tau(du), tau finite and
    nonnegative.
    """

    a: float
    b: float
    tau: FiniteMeasure

    def __post_init__(self):
        if not self.b >= 0:
            raise InvalidMeasure('b must be nonnegative, got %r' % self.b)

    def evaluate(self, z):
        z = as_points(z)
        out = self.a + self.b * z
        tau = self.tau
        if tau.positions.size:
            u = tau.positions
            out = out + np.sum(
                tau.weights * (1 + u * z[..., None]) / (u - z[..., None]),
                axis=-1)
        if tau.grid is not None:
            continuous = FiniteMeasure((), (), tau.grid, tau.values)
            out = out + z * continuous.mass - (1 + z * z) * cauchy_eval(
                continuous, z)
        return _shaped(out)


def as_points(z):
    """
    Complex array of query points, rejecting points off the upper
    half-plane.
    """
    if isinstance(z, UpperHalfPoint):
        z = z.z
    elif isinstance(z, (list, tuple)):
        z = [complex(p) for p in z]
    z = np.asarray(z, dtype=complex)
    if not np.all(z.imag > 0):
        raise InvalidPoint('query points must have positive imaginary part')
    return z


def _shaped(values):
    if np.ndim(values) == 0:
        return complex(values)
    return values


def _log1p_minus(u):
    """log(1 + u) - u, accurate for small |u|."""
    small = np.abs(u) < 0.1
    series = np.zeros_like(u)
    for c in _SERIES:
        series = series * u + c
    series = series * u * u
    with np.errstate(divide='ignore', invalid='ignore'):
        direct = np.log(1 + u) - u
    return np.where(small, series, direct)


def _density_transform(grid, values, z, derivative=False):
    """
    Exact integral of the piecewise-linear density against 1 / (z - t),
    and against -1 / (z - t)^2 when derivative is set.

    Per cell, with u = (b - a) / (z - b) and D = log(1 + u) - u:
    int f / (z - t) = f(b) log(1 + u) + s (z - b) D.
    """
    a, b = grid[:-1], grid[1:]
    fb = values[1:]
    width = b - a
    slope = (values[1:] - values[:-1]) / width
    flat = z.reshape(-1)
    out = np.empty(flat.shape, dtype=complex)
    dout = np.empty(flat.shape, dtype=complex) if derivative else None
    step = max(1, BLOCK_SIZE // a.size)
    for start in range(0, flat.size, step):
        block = flat[start:start + step, None]
        zb = block - b
        u = width / zb
        d = _log1p_minus(u)
        out[start:start + step] = np.sum(fb * (u + d) + slope * zb * d,
                                         axis=1)
        if derivative:
            dout[start:start + step] = np.sum(
                -fb * width / ((block - a) * zb) +
                slope * (d + u * u / (1 + u)), axis=1)
    out = out.reshape(z.shape)
    if derivative:
        return out, dout.reshape(z.shape)
    return out


def cauchy_pair(mu, z):
    """G_mu(z) and G_mu'(z) for an array of points."""
    z = np.asarray(z, dtype=complex)
    g = np.zeros(z.shape, dtype=complex)
    dg = np.zeros(z.shape, dtype=complex)
    if mu.positions.size:
        inverse = 1.0 / (z[..., None] - mu.positions)
        g += np.sum(mu.weights * inverse, axis=-1)
        dg -= np.sum(mu.weights * inverse * inverse, axis=-1)
    if mu.grid is not None:
        dens, ddens = _density_transform(mu.grid, mu.values, z, True)
        g += dens
        dg += ddens
    return g, dg


def cauchy_eval(mu, z):
    """G_mu(z) = int mu(dt) / (z - t), exact for the stored representation."""
    z = as_points(z)
    g = np.zeros(z.shape, dtype=complex)
    if mu.positions.size:
        g += np.sum(mu.weights / (z[..., None] - mu.positions), axis=-1)
    if mu.grid is not None:
        g += _density_transform(mu.grid, mu.values, z)
    return _shaped(g)


def cauchy_derivative(mu, z):
    """G_mu'(z)."""
    return _shaped(cauchy_pair(mu, as_points(z))[1])


def reciprocal_eval(mu, z):
    """F_mu(z) = 1 / G_mu(z)."""
    return _shaped(1.0 / np.asarray(cauchy_eval(mu, z)))


class CauchyTransform(object):
    """G_mu as an evaluator."""

    def __init__(self, mu):
        self.mu = mu

    def __call__(self, z):
        return cauchy_eval(self.mu, z)

    def derivative(self, z):
        return cauchy_derivative(self.mu, z)


class ReciprocalCauchy(object):
    """F_mu as an evaluator with derivative -G' / G^2."""

    def __init__(self, mu):
        self.mu = mu
        self.scale = float(np.sqrt(max(moment(mu, 2), 0.0)))

    def __call__(self, z):
        return reciprocal_eval(self.mu, z)

    def values_and_derivatives(self, z):
        g, dg = cauchy_pair(self.mu, z)
        return 1.0 / g, -dg / (g * g)

    def derivative(self, z):
        return _shaped(self.values_and_derivatives(as_points(z))[1])


def _difference_quotient(func, w):
    step = 1e-6 * (1.0 + abs(w))
    return (func(w + step) - func(w - step)) / (2.0 * step)


def _newton_inverse(func, derivative, zeta, w, tol, max_iter):
    """Solve func(w) = zeta by damped Newton steps, Picard as fallback."""
    residual = func(w) - zeta
    history = []
    for iteration in range(max_iter):
        history.append(abs(residual))
        if abs(residual) <= tol * (1.0 + abs(zeta)):
            return w
        step = residual / derivative(w)
        damping = 1.0
        while damping >= settings.MIN_DAMPING:
            candidate = w - damping * step
            if candidate.imag > 0:
                candidate_residual = func(candidate) - zeta
                if abs(candidate_residual) < abs(residual):
                    w, residual = candidate, candidate_residual
                    break
            damping /= 2.0
        else:
            # w -> zeta - (F(w) - w)
            candidate = zeta - (func(w) - w)
            if not candidate.imag > 0:
                raise NoConvergence('inverse left the upper half-plane',
                                    history, iteration)
            w, residual = candidate, func(candidate) - zeta
    raise NoConvergence('inverse did not converge at %r' % zeta, history,
                        max_iter)


def invert_class_F(func, target, hint=None, tol=INVERSE_TOL,
                   max_iter=NEWTON_MAX_ITER):
    """
    Return w in the upper half-plane with |func(w) - target| <= tol
    (1 + |target|), func being a reciprocal Cauchy transform.

    Without a usable hint the solve starts at target + iT with
    T = 16 (1 + func.scale) and follows the targets target + iT 2^-k down
    to target.
    """
    target = complex(as_points(target))
    scalar = _ScalarEvaluator(func)
    derivative = scalar.derivative
    height = 16.0 * (1.0 + getattr(func, 'scale', 16.0))

    offsets = [height / 2.0 ** k for k in range(64)
               if height / 2.0 ** k > target.imag / 64.0]
    attempts = []
    if hint is not None:
        attempts.append(([0.0], complex(hint)))
    attempts.append((offsets + [0.0], target + 1j * height))
    for ladder, w in attempts:
        try:
            for offset in ladder:
                w = _newton_inverse(scalar, derivative, target + 1j * offset,
                                    w, tol, max_iter)
        except NoConvergence as e:
            logger.debug('inverse at %r failed: %s', target, e)
            continue
        return w
    raise OutsideInvertibilityDomain(target)


class _ScalarEvaluator(object):
    """Wrap an array evaluator for complex scalars."""

    def __init__(self, func):
        self.func = func
        self.has_derivative = hasattr(func, 'derivative')

    def __call__(self, w):
        return complex(np.asarray(self.func(np.asarray([w])))[0])

    def derivative(self, w):
        if self.has_derivative:
            return complex(np.asarray(self.func.derivative(
                np.asarray([w])))[0])
        return _difference_quotient(self, w)


def voiculescu_eval(mu, z, hint=None):
    """phi_mu(z) = F_mu^(-1)(z) - z."""
    func = mu if callable(mu) else ReciprocalCauchy(mu)
    z = complex(as_points(z))
    phi = invert_class_F(func, z, hint) - z
    if phi.imag > 1e-10:
        logger.warning('Im phi(%r) = %g is positive', z, phi.imag)
    return phi


def invertibility_cone(mu, alpha=1.0):
    """
    TruncatedCone where the inverse of F_mu was found at every probe point.

    beta starts at 8 (1 + sqrt(m2)) and doubles on failure, at most
    CONE_DOUBLINGS times.
    """
    func = mu if callable(mu) else ReciprocalCauchy(mu)
    beta = 8.0 * (1.0 + getattr(func, 'scale', 16.0))
    for doubling in range(CONE_DOUBLINGS + 1):
        cone = TruncatedCone(alpha, beta)
        try:
            for point in cone.probe_points(2, 5):
                invert_class_F(func, point)
        except OutsideInvertibilityDomain:
            beta *= 2.0
            continue
        logger.debug('invertibility cone alpha=%g beta=%g', alpha, beta)
        return cone
    raise OutsideInvertibilityDomain(complex(0.0, beta), beta)


def growth_diagnostic(func, ys=(1.0, 10.0, 100.0, 1000.0)):
    """max over ys of |y func(iy)|, a finite value suggests boundedness."""
    ys = np.asarray(ys, dtype=float)
    return float(np.max(np.abs(ys * np.asarray(func(1j * ys)))))


def is_symmetric(mu, ys=(0.5, 1.0, 2.0, 5.0), tol=1e-12):
    """True if G_mu(iy) is purely imaginary on ys."""
    values = np.asarray(cauchy_eval(mu, 1j * np.asarray(ys, dtype=float)))
    return bool(np.all(np.abs(values.real) <= tol * np.maximum(
        1.0, np.abs(values))))


def evaluate_levels(func, x, ys):
    """Values of func on the lines x + iy for every y in ys."""
    if hasattr(func, 'evaluate_levels'):
        return func.evaluate_levels(x, ys)
    return [np.asarray(func(x + 1j * y)) for y in ys]


def _richardson(f1, f2, f4):
    """Limit at 0 of values at h, h/2, h/4, exact for quadratics."""
    return (8.0 * f4 - 6.0 * f2 + f1) / 3.0


def _detect_atoms(func, x, h, v4, v8):
    """Positions and weights of the atoms seen on the grid x."""
    threshold = settings.ATOM_THRESHOLD
    spacing = x[1] - x[0]
    padded = np.concatenate([[-np.inf], v4, [-np.inf]])
    peak = (v4 > padded[:-2]) & (v4 >= padded[2:])
    with np.errstate(divide='ignore', invalid='ignore'):
        candidates = peak & (v4 > threshold) & (v8 / v4 > 0.6)
    x0 = x[candidates]
    if x0.size == 0:
        return np.empty(0), np.empty(0)

    z1, z2, z3 = x0 + 1j * h / 4, x0 + 1j * h / 8, x0 + 1j * h / 16
    g1, g2, g3 = (np.asarray(func(p)) for p in (z1, z2, z3))
    with np.errstate(divide='ignore', invalid='ignore'):
        # w / (z - a) + c through three points
        ratio = (g1 - g2) * (z3 - z1) / ((g1 - g3) * (z2 - z1))
        pole = ((z3 - ratio * z2) / (1 - ratio)).real
    near = np.isfinite(pole) & (np.abs(pole - x0) <= spacing)
    pole = pole[near]
    if pole.size == 0:
        return np.empty(0), np.empty(0)

    w8, w16, w32 = (-(h / d) * np.asarray(func(pole + 1j * h / d)).imag
                    for d in (8, 16, 32))
    # -y Im G(a + iy) is the weight plus terms linear and quadratic in y
    weights = _richardson(w8, w16, w32)
    with np.errstate(divide='ignore', invalid='ignore'):
        keep = (w16 / w8 >= ATOM_RATIO) & (weights > threshold)
    return merge_atoms(pole[keep], weights[keep])


def _densities(func, x, h, positions, weights, levels=None):
    """Extrapolated density at the nodes x and its trapezoid mass."""
    if levels is None:
        levels = evaluate_levels(func, x, [h, h / 2, h / 4])
    densities = []
    for y, values in zip((h, h / 2, h / 4), levels[:3]):
        if positions.size:
            z = x + 1j * y
            values = values - np.sum(
                weights / (z[:, None] - positions), axis=1)
        densities.append(-values.imag / np.pi)
    density = np.clip(_richardson(*densities), 0.0, None)
    return density, _richardson(*[trapezoid(x, d) for d in densities])


def _recover(func, lo, hi, resolution):
    """Atoms, density nodes and continuous window mass seen by func."""
    x = np.linspace(lo, hi, resolution)
    h = 4.0 * (hi - lo) / resolution
    levels = evaluate_levels(func, x, [h, h / 2, h / 4, h / 8])
    v4 = -(h / 4) * levels[2].imag
    v8 = -(h / 8) * levels[3].imag
    positions, weights = _detect_atoms(func, x, h, v4, v8)
    density, window_mass = _densities(func, x, h, positions, weights, levels)
    logger.debug('window [%g, %g]: %d atoms, continuous mass %.6g',
                 lo, hi, positions.size, window_mass)
    return positions, weights, x, density, window_mass


def _edge_spans(x, density, positions):
    """
    Node ranges around the ends of the support of density, merged where
    they overlap. Ranges holding an atom are left out.
    """
    if not np.any(density > 0):
        return []
    inside = density > EDGE_LEVEL * density.max()
    edges = np.nonzero(inside[1:] != inside[:-1])[0]
    if edges.size > MAX_EDGES:
        logger.debug('%d support edges, no refinement', edges.size)
        return []
    spans = []
    for i in edges:
        lo, hi = max(i - EDGE_CELLS, 0), min(i + 1 + EDGE_CELLS, x.size - 1)
        if spans and lo <= spans[-1][1]:
            spans[-1][1] = hi
        else:
            spans.append([lo, hi])
    return [(lo, hi) for lo, hi in spans
            if not np.any((positions >= x[lo]) & (positions <= x[hi]))]


def _refine_edges(func, x, density, positions, weights):
    """
    Grid and density with every support edge seen on x resolved
    EDGE_REFINEMENT times finer, at correspondingly lower heights.
    """
    pieces, last = [], 0
    for lo, hi in _edge_spans(x, density, positions):
        local = np.linspace(x[lo], x[hi], (hi - lo) * EDGE_REFINEMENT + 1)
        h = 4.0 * (local[1] - local[0])
        local_density, _ = _densities(func, local, h, positions, weights)
        pieces += [(x[last:lo], density[last:lo]), (local, local_density)]
        last = hi + 1
    if not pieces:
        return x, density
    pieces.append((x[last:], density[last:]))
    logger.debug('refined %d support edges', len(pieces) // 2)
    return (np.concatenate([grid for grid, _ in pieces]),
            np.concatenate([values for _, values in pieces]))


def stieltjes_invert(func, window, resolution=None):
    """
    Probability measure whose Cauchy transform is func.

    func is evaluated on horizontal lines at heights h, h/2, h/4 with
    h = 4 (window width) / resolution and the density is extrapolated to
    the real axis; atoms are located where -y Im func(x + iy) does not
    vanish with y. The window grows by 50% while more than MASS_DEFICIT
    of the mass is missing. Around every end of the support the density
    is evaluated again on a grid EDGE_REFINEMENT times finer.
    """
    resolution = int(resolution or settings.GRID_RESOLUTION)
    lo, hi = float(window[0]), float(window[1])
    if not hi > lo:
        raise ValueError('empty window [%g, %g]' % (lo, hi))
    for expansion in range(settings.MAX_WINDOW_EXPANSIONS + 1):
        positions, weights, x, density, window_mass = _recover(
            func, lo, hi, resolution)
        deficit = 1.0 - np.sum(weights) - window_mass
        if deficit <= settings.MASS_DEFICIT:
            break
        if expansion < settings.MAX_WINDOW_EXPANSIONS:
            logger.warning('mass deficit %.3g on [%g, %g], expanding window',
                           deficit, lo, hi)
            margin = (hi - lo) / 4.0
            lo, hi = lo - margin, hi + margin
    else:
        raise WindowTooSmall((lo, hi), deficit)
    if deficit < -settings.MASS_DEFICIT:
        logger.warning('inversion found %.3g excess mass', -deficit)

    continuous = 1.0 - np.sum(weights)
    if continuous <= 1e-12 or not trapezoid(x, density) > 0:
        return normalized(positions, weights)
    x, density = _refine_edges(func, x, density, positions, weights)
    density_mass = trapezoid(x, density)
    return normalized(positions, weights, x,
                      density * continuous / density_mass)


def recover_finite_measure(func, window, resolution=None):
    """
    Finite measure rho with -Im func = pi P_y * rho in the limit, for func
    = (Cauchy transform of rho) + real constant. No normalization.
    """
    resolution = int(resolution or settings.GRID_RESOLUTION)
    positions, weights, x, density, _ = _recover(
        func, float(window[0]), float(window[1]), resolution)
    if not np.any(density > 0):
        return FiniteMeasure(positions, weights)
    return FiniteMeasure(positions, weights, x, density)


def nevanlinna_rep(mu, window=None, resolution=None):
    """
    (a, 1, tau) representing F_mu: a = Re F(i), tau(R) = Im F(i) - 1, tau
    recovered by inverting -(F(z) - z), whose measure is (1 + u^2) tau.
    """
    func = ReciprocalCauchy(mu)
    at_i = complex(func(1j))
    if window is None:
        lo, hi = support_bounds(mu)
        window = (lo - 1.0, hi + 1.0)

    def remainder(z):
        return -(np.asarray(func(z)) - z)

    rho = recover_finite_measure(remainder, window, resolution)
    tau = weighted(rho, lambda u: 1.0 / (1.0 + u * u))
    logger.debug('tau mass %.6g, expected %.6g', tau.mass, at_i.imag - 1.0)
    return NevanlinnaRep(a=at_i.real, b=1.0, tau=tau)
