"""
Settings for this package. Every value can be overridden from the
environment before :py:mod:`freeconv` is imported.

.. py:data:: GRID_RESOLUTION

    Base node count used by the density constructors (semicircle, arcsine,
    Marchenko-Pastur) and default resolution of Stieltjes inversions. Density
    constructors refine every cell once, so the stored grid holds
    ``2 * GRID_RESOLUTION - 1`` nodes. Overridable in
    ``FREECONV_GRID_RESOLUTION``.

.. py:data:: TOL

    Default solver tolerance of the fixed point iterations. The residual of
    a solve is compared against ``TOL`` times the magnitude of the terms of
    the equation. Overridable in ``FREECONV_TOL``.

.. py:data:: MAX_ITER

    Default iteration cap of every solve. Overridable in
    ``FREECONV_MAX_ITER``.

.. py:data:: DAMPING

    Initial damping factor of Picard steps. It is halved, per query point,
    whenever a step fails to lower the residual. Overridable in
    ``FREECONV_DAMPING``.

.. py:data:: MIN_DAMPING

    Smallest damping factor reachable by halving. Overridable in
    ``FREECONV_MIN_DAMPING``.

.. py:data:: CONTINUATION_HEIGHT

    Relative height of cold solves. A query point is first solved at
    imaginary part ``CONTINUATION_HEIGHT * (1 + scale)``, scale being the
    root of the second moment of the solved law, then walked down by
    halving the height and reusing each rung as the starting point of the
    next one. Overridable in ``FREECONV_CONTINUATION_HEIGHT``.

.. py:data:: TAU

    Default truncation level of triangular arrays, used by the centerings
    ``a_nk``. Overridable in ``FREECONV_TAU``.

.. py:data:: MASS_TOL

    Mass defect accepted from user supplied measures before they get
    renormalized. Overridable in ``FREECONV_MASS_TOL``.

.. py:data:: ATOM_THRESHOLD

    A point is reported as an atom by the Stieltjes inversion when
    ``-y Im G(x + iy)`` stays above this value as ``y`` decreases.
    Overridable in ``FREECONV_ATOM_THRESHOLD``.

.. py:data:: MASS_DEFICIT

    Mass missing from an inversion window before the window gets expanded.
    Overridable in ``FREECONV_MASS_DEFICIT``.

.. py:data:: MAX_WINDOW_EXPANSIONS

    How many times an inversion window may grow by 50% before giving up
    with :py:class:`~freeconv.exceptions.WindowTooSmall`. Overridable in
    ``FREECONV_MAX_WINDOW_EXPANSIONS``.

.. py:data:: DEGENERATE_CONSTANT

    Empirical constant multiplying the degenerate convergence bound.
    Overridable in ``FREECONV_DEGENERATE_CONSTANT``.

.. py:data:: DATA_DIR

    Directory where the command line writes artifacts given as relative
    paths. Default is ``freeconv-data`` in the working directory.
    Overridable in ``FREECONV_DATA_DIR``.
"""

import os
import os.path

from .exceptions import ImproperlyConfigured

__all__ = [
    'GRID_RESOLUTION', 'TOL', 'MAX_ITER', 'DAMPING', 'MIN_DAMPING',
    'CONTINUATION_HEIGHT', 'TAU', 'MASS_TOL', 'ATOM_THRESHOLD',
    'MASS_DEFICIT', 'MAX_WINDOW_EXPANSIONS', 'DEGENERATE_CONSTANT',
    'DATA_DIR']


def from_env(name, default, cast=float):
    """Return FREECONV_<name> from the environment, cast, or default."""
    variable = 'FREECONV_%s' % name
    value = os.environ.get(variable)
    if value is None:
        return default
    try:
        return cast(value)
    except ValueError:
        raise ImproperlyConfigured(variable, value)


GRID_RESOLUTION = from_env('GRID_RESOLUTION', 2048, int)
TOL = from_env('TOL', 1e-12)
MAX_ITER = from_env('MAX_ITER', 10000, int)
DAMPING = from_env('DAMPING', 1.0)
MIN_DAMPING = from_env('MIN_DAMPING', 2.0 ** -10)
CONTINUATION_HEIGHT = from_env('CONTINUATION_HEIGHT', 1.0)

TAU = from_env('TAU', 1.0)

MASS_TOL = from_env('MASS_TOL', 1e-6)
ATOM_THRESHOLD = from_env('ATOM_THRESHOLD', 1e-4)
MASS_DEFICIT = from_env('MASS_DEFICIT', 1e-3)
MAX_WINDOW_EXPANSIONS = from_env('MAX_WINDOW_EXPANSIONS', 4, int)

# c in c((eta1 + eta3) ** (1/6) + |eta2|), never asserted as the true value
DEGENERATE_CONSTANT = from_env('DEGENERATE_CONSTANT', 10.0)

DATA_DIR = from_env(
    'DATA_DIR',
    os.path.normpath(os.path.join(os.getcwd(), 'freeconv-data')),
    str)
