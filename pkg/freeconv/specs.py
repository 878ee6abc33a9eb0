"""
Text format shared by every command.

A spec is a JSON object tagged by ``type``::

    {"type": "atoms", "atoms": [[0.0, 0.5], [1.0, 0.5]]}
    {"type": "density", "grid": [...], "values": [...], "atoms": [...]}
    {"type": "semicircle", "variance": 1.0}
    {"type": "two_point", "p": 0.3}
    {"type": "arcsine", "radius": 2.0}
    {"type": "marchenko_pastur", "rate": 0.5, "jump": 1.0}
    {"type": "pair", "alpha": 0.0, "nu": {"atoms": [[0.0, 1.0]]}}
    {"type": "free_poisson", "rate": 2.0, "jump": 1.0}

The last two describe a :py:class:`~freeconv.infdiv.GeneratingPair`, the
others a :py:class:`~freeconv.measures.Measure`. The measure CSV written by
the commands (header ``x,cdf,density,atom``) is read back as well.
"""

import csv
import io
import json
import logging
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidSpec
from .infdiv import GeneratingPair, free_poisson_pair
from .measures import (cdf_eval, construct, finite_measure, from_atoms,
                       from_density)

logger = logging.getLogger('freeconv')

MEASURE_TYPES = ('atoms', 'density', 'semicircle', 'two_point', 'arcsine',
                 'marchenko_pastur')
PAIR_TYPES = ('pair', 'free_poisson')
MEASURE_CSV_HEADER = ('x', 'cdf', 'density', 'atom')


@dataclass(frozen=True)
class MeasureSpec:
    """Type tag and family parameters of a measure or generating pair."""

    kind: str
    params: dict = field(default_factory=dict)

    @classmethod
    def from_data(cls, data):
        if not isinstance(data, dict):
            raise InvalidSpec('spec must be a JSON object, got %s' %
                              type(data).__name__)
        params = dict(data)
        kind = params.pop('type', None)
        if kind not in MEASURE_TYPES + PAIR_TYPES:
            raise InvalidSpec('unknown spec type %r' % (kind,))
        return cls(kind, params)

    @property
    def is_pair(self):
        return self.kind in PAIR_TYPES

    def build(self):
        """The Measure or GeneratingPair described by this spec."""
        if not self.is_pair:
            return construct(self)
        try:
            if self.kind == 'free_poisson':
                return free_poisson_pair(self.params['rate'],
                                         self.params.get('jump', 1.0))
            return GeneratingPair(self.params.get('alpha', 0.0),
                                  _finite_measure(self.params['nu']))
        except KeyError as e:
            raise InvalidSpec('%s spec misses parameter %s' % (self.kind, e))


def _finite_measure(data):
    if not isinstance(data, dict):
        raise InvalidSpec('nu must be a JSON object')
    return finite_measure(data.get('atoms', ()), data.get('grid'),
                          data.get('values'))


def parse_measure_spec(text):
    """Measure or GeneratingPair from JSON spec text or measure CSV text."""
    text = text.strip()
    if text.startswith(','.join(MEASURE_CSV_HEADER)):
        return parse_measure_csv(text)
    try:
        data = json.loads(text)
    except ValueError as e:
        raise InvalidSpec('cannot parse spec: %s' % e)
    return MeasureSpec.from_data(data).build()


def load_measure_spec(path):
    """parse_measure_spec on the content of the file at path."""
    logger.debug('Reading spec %s', path)
    with open(path, encoding='utf-8') as f:
        return parse_measure_spec(f.read())


def parse_measure_csv(text):
    """Measure from rows x, cdf, density, atom (density empty off the grid)."""
    reader = csv.reader(io.StringIO(text))
    header = tuple(next(reader))
    if header != MEASURE_CSV_HEADER:
        raise InvalidSpec('unexpected CSV header %r' % (header,))
    grid, values, atoms = [], [], []
    try:
        for number, row in enumerate(reader, 2):
            if not row:
                continue
            x, _, density, atom = row
            if density:
                grid.append(float(x))
                values.append(float(density))
            if atom and float(atom) > 0:
                atoms.append((float(x), float(atom)))
    except ValueError as e:
        raise InvalidSpec('bad CSV row %d: %s' % (number, e))
    if grid:
        return from_density(grid, values, atoms)
    return from_atoms(atoms)


def _float_list(array):
    return [float(v) for v in np.asarray(array).tolist()]


def _finite_data(mu):
    data = {'atoms': [[float(x), float(w)] for x, w in mu.atoms]}
    if mu.grid is not None:
        data['grid'] = _float_list(mu.grid)
        data['values'] = _float_list(mu.values)
    return data


def dump_measure_spec(obj):
    """JSON spec text of a Measure or GeneratingPair, keys sorted."""
    if isinstance(obj, GeneratingPair):
        data = {'type': 'pair', 'alpha': obj.alpha, 'nu': _finite_data(obj.nu)}
    else:
        data = _finite_data(obj)
        data['type'] = 'atoms' if obj.grid is None else 'density'
    return json.dumps(data, sort_keys=True) + '\n'


def measure_rows(mu):
    """Rows x, cdf, density, atom at every breakpoint of mu."""
    points = [mu.positions]
    if mu.grid is not None:
        points.append(mu.grid)
    x = np.unique(np.concatenate(points))
    cdf = np.asarray(cdf_eval(mu, x))
    atoms = dict(zip(mu.positions.tolist(), mu.weights.tolist()))
    density = {}
    if mu.grid is not None:
        density = dict(zip(mu.grid.tolist(), mu.values.tolist()))
    rows = []
    for point, value in zip(x.tolist(), cdf.tolist()):
        on_grid = density.get(point)
        rows.append((repr(point), repr(value),
                     '' if on_grid is None else repr(on_grid),
                     repr(atoms.get(point, 0.0))))
    return rows
