"""Environment overrides and input validation."""


import os

import mock
import numpy as np

from freeconv.exceptions import ImproperlyConfigured, InvalidMeasure
from freeconv.settings import from_env
from freeconv.validators import (validate_atoms, validate_density,
                                 validate_mass, validate_probability)

from .base import TestMeasureBase


class TestSettings(TestMeasureBase):

    """from_env."""

    @mock.patch.dict(os.environ, {'FREECONV_TOL': '1e-8'})
    def test_override(self):
        self.assertEqual(from_env('TOL', 1e-12), 1e-8)

    @mock.patch.dict(os.environ, {}, clear=True)
    def test_default(self):
        self.assertEqual(from_env('MAX_ITER', 10, int), 10)

    @mock.patch.dict(os.environ, {'FREECONV_MAX_ITER': 'many'})
    def test_invalid(self):
        with self.assertRaises(ImproperlyConfigured) as context:
            from_env('MAX_ITER', 10, int)
        self.assertEqual(context.exception.variable, 'FREECONV_MAX_ITER')


class TestValidators(TestMeasureBase):

    """Atoms, densities and masses."""

    def test_probability(self):
        self.assertEqual(validate_probability('0.25'), 0.25)
        for p in (None, 'x', 0.0, 1.0, float('nan')):
            with self.assertRaises(InvalidMeasure):
                validate_probability(p)

    def test_atoms_read_only(self):
        positions, weights = validate_atoms([0.0, 1.0], [0.5, 0.5])
        with self.assertRaises(ValueError):
            positions[0] = 2.0
        self.assertFalse(weights.flags.writeable)

    def test_atoms(self):
        for positions, weights in (([0.0], [0.5, 0.5]),
                                   ([1.0, 0.0], [0.5, 0.5]),
                                   ([0.0], [0.0]),
                                   ([np.inf], [1.0])):
            with self.assertRaises(InvalidMeasure):
                validate_atoms(positions, weights)

    def test_density(self):
        self.assertEqual(validate_density(None, None), (None, None))
        for grid, values in (([0.0, 1.0], None),
                             ([0.0], [1.0]),
                             ([0.0, 1.0], [1.0]),
                             ([0.0, 0.0], [1.0, 1.0]),
                             ([0.0, 1.0], [1.0, np.nan]),
                             ([0.0, 1.0], [1.0, -1.0])):
            with self.assertRaises(InvalidMeasure):
                validate_density(grid, values)

    def test_mass(self):
        validate_mass(1.0 + 1e-7, 1e-6)
        with self.assertRaises(InvalidMeasure):
            validate_mass(1.0 + 1e-5, 1e-6)
        with self.assertRaises(InvalidMeasure):
            validate_mass(float('nan'), 1e-6)
