"""Checks shared by the measure constructors and the spec parser."""

import numpy as np

from .exceptions import InvalidMeasure


def validate_probability(p):
    """Return p as a float if 0 < p < 1."""
    try:
        p = float(p)
    except (TypeError, ValueError):
        raise InvalidMeasure('p must be a number, got %r' % (p,))
    if not 0.0 < p < 1.0:
        raise InvalidMeasure('p must lie in (0, 1), got %r' % p)
    return p


def validate_atoms(positions, weights):
    """
    Return positions and weights as read-only float arrays.

    Positions must be finite and strictly increasing, weights finite and
    positive.
    """
    positions = np.array(positions, dtype=float).reshape(-1)
    weights = np.array(weights, dtype=float).reshape(-1)
    if positions.shape != weights.shape:
        raise InvalidMeasure('%d atom positions but %d weights' % (
            positions.size, weights.size))
    if not (np.all(np.isfinite(positions)) and np.all(np.isfinite(weights))):
        raise InvalidMeasure('atoms must be finite')
    if np.any(weights <= 0):
        raise InvalidMeasure('atom weights must be positive')
    if np.any(np.diff(positions) <= 0):
        raise InvalidMeasure('atom positions must be strictly increasing')
    return _frozen(positions), _frozen(weights)


def validate_density(grid, values):
    """Return grid and values as read-only float arrays, or (None, None)."""
    if grid is None and values is None:
        return None, None
    if grid is None or values is None:
        raise InvalidMeasure('density needs both grid and values')
    grid = np.array(grid, dtype=float).reshape(-1)
    values = np.array(values, dtype=float).reshape(-1)
    if grid.size < 2:
        raise InvalidMeasure('density grid needs at least 2 nodes')
    if grid.shape != values.shape:
        raise InvalidMeasure('%d grid nodes but %d density values' % (
            grid.size, values.size))
    if not (np.all(np.isfinite(grid)) and np.all(np.isfinite(values))):
        raise InvalidMeasure('density grid and values must be finite')
    if np.any(np.diff(grid) <= 0):
        raise InvalidMeasure('density grid must be strictly increasing')
    if np.any(values < 0):
        raise InvalidMeasure('density values must be nonnegative')
    return _frozen(grid), _frozen(values)


def validate_mass(mass, tolerance):
    """Raise InvalidMeasure unless mass is within tolerance of 1."""
    if not abs(mass - 1.0) <= tolerance:
        raise InvalidMeasure(
            'total mass is %.12g, expected 1 within %g' % (mass, tolerance))


def _frozen(array):
    array.flags.writeable = False
    return array
