"""Cauchy, reciprocal Cauchy and Voiculescu transforms, Stieltjes inversion."""


import numpy as np

from freeconv.exceptions import InvalidPoint, WindowTooSmall
from freeconv.measures import (cdf_eval, dilate, dirac, levy, semicircle,
                               two_point)
from freeconv.transforms import (CauchyTransform, ReciprocalCauchy,
                                 TruncatedCone, UpperHalfPoint, cauchy_eval,
                                 growth_diagnostic, invert_class_F,
                                 invertibility_cone, is_symmetric,
                                 nevanlinna_rep, reciprocal_eval,
                                 stieltjes_invert, voiculescu_eval)

from .base import TestMeasureBase, random_atomic, random_mixed, seeded


def semicircle_cauchy(z):
    z = np.asarray(z, dtype=complex)
    return (z - np.sqrt(z - 2) * np.sqrt(z + 2)) / 2


def arcsine_cauchy(z):
    z = np.asarray(z, dtype=complex)
    return 1 / (np.sqrt(z - 2) * np.sqrt(z + 2))


class TestCauchy(TestMeasureBase):

    """G and F on the stored representation."""

    def test_points(self):
        self.assertEqual(UpperHalfPoint.from_complex(1 + 2j).z, 1 + 2j)
        with self.assertRaises(InvalidPoint):
            UpperHalfPoint(0.0, 0.0)
        with self.assertRaises(InvalidPoint):
            cauchy_eval(dirac(), 1.0 - 1j)

    def test_cauchy_values(self):
        self.assertComplexAlmostEqual(cauchy_eval(dirac(0.0), 1j), -1j)
        self.assertComplexAlmostEqual(cauchy_eval(two_point(0.5), 1j),
                                      -0.5j)
        self.assertComplexAlmostEqual(
            cauchy_eval(semicircle(resolution=512), 2j),
            1j * (1 - np.sqrt(2)), delta=1e-6)

    def test_cauchy_vectorized(self):
        mu = semicircle(resolution=256)
        z = np.array([[1j, 1 + 1j], [-2 + 0.1j, 0.5 + 3j]])
        values = cauchy_eval(mu, z)
        self.assertEqual(values.shape, (2, 2))
        self.assertAllClose(values, semicircle_cauchy(z), atol=1e-5)
        self.assertTrue(np.all(values.imag < 0))

    def test_normalization_at_infinity(self):
        mu = two_point(0.3)
        for y in (1e2, 1e3, 1e4):
            value = cauchy_eval(mu, 1j * y)
            self.assertLess(value.imag, 0)
            self.assertLess(abs(1j * y * value - 1), 2.0 / y)

    def test_reciprocal_values(self):
        self.assertComplexAlmostEqual(reciprocal_eval(dirac(2.0), 1j),
                                      -2 + 1j)
        self.assertComplexAlmostEqual(reciprocal_eval(two_point(0.5), 1j),
                                      2j)
        self.assertComplexAlmostEqual(
            reciprocal_eval(semicircle(resolution=512), 2j),
            1j * (1 + np.sqrt(2)), delta=1e-6)

    def test_derivatives(self):
        mu = semicircle(resolution=256)
        z, step = 0.3 + 0.7j, 1e-6
        for func in (CauchyTransform(mu), ReciprocalCauchy(mu)):
            quotient = (func(z + step) - func(z - step)) / (2 * step)
            self.assertComplexAlmostEqual(func.derivative(z), quotient,
                                          delta=1e-6)

    def test_growth_and_symmetry(self):
        self.assertAlmostEqual(
            growth_diagnostic(CauchyTransform(dirac(0.0))), 1.0)
        self.assertTrue(is_symmetric(two_point(0.5)))
        self.assertTrue(is_symmetric(semicircle(resolution=128)))
        self.assertFalse(is_symmetric(two_point(0.3)))


class TestInverse(TestMeasureBase):

    """invert_class_F and the Voiculescu transform."""

    def test_identity(self):
        func = ReciprocalCauchy(dirac(0.0))
        self.assertComplexAlmostEqual(invert_class_F(func, 1 + 2j), 1 + 2j)

    def test_translation(self):
        func = ReciprocalCauchy(dirac(-0.5))
        self.assertComplexAlmostEqual(invert_class_F(func, 1 + 2j),
                                      0.5 + 2j)

    def test_semicircle(self):
        func = ReciprocalCauchy(semicircle(resolution=512))
        w = invert_class_F(func, 2j)
        self.assertComplexAlmostEqual(w, 1.5j, delta=1e-6)
        self.assertComplexAlmostEqual(func(w), 2j, delta=1e-10)

    def test_hint(self):
        func = ReciprocalCauchy(two_point(0.3))
        w = invert_class_F(func, 0.5 + 3j)
        self.assertComplexAlmostEqual(
            invert_class_F(func, 0.5 + 3j, hint=w), w, delta=1e-10)

    def test_voiculescu(self):
        self.assertComplexAlmostEqual(voiculescu_eval(dirac(0.7), 1 + 1j),
                                      0.7)
        self.assertComplexAlmostEqual(
            voiculescu_eval(semicircle(resolution=512), 2j), -0.5j,
            delta=1e-6)
        # double root of w - 1 / w = 2i
        self.assertComplexAlmostEqual(voiculescu_eval(two_point(0.5), 2j),
                                      -1j, delta=1e-5)

    def test_cone(self):
        mu = two_point(0.5)
        cone = invertibility_cone(mu)
        self.assertEqual(cone.beta, 16.0)
        points = cone.probe_points()
        self.assertEqual(points.shape, (20,))
        self.assertTrue(all(cone.contains(z) for z in points))
        with self.assertRaises(ValueError):
            TruncatedCone(0.0, 1.0)


class TestInversion(TestMeasureBase):

    """Stieltjes inversion and the Nevanlinna representation."""

    def test_dirac(self):
        mu = stieltjes_invert(lambda z: 1 / np.asarray(z), (-1.0, 1.0), 513)
        self.assertEqual(len(mu.atoms), 1)
        position, weight = mu.atoms[0]
        self.assertAlmostEqual(position, 0.0, places=9)
        self.assertAlmostEqual(weight, 1.0, places=6)

    def test_shifted_atoms(self):
        mu = two_point(0.5)
        recovered = stieltjes_invert(CauchyTransform(mu), (-2.0, 2.0), 401)
        self.assertEqual(len(recovered.atoms), 2)
        for (x, w), (x0, w0) in zip(recovered.atoms, mu.atoms):
            self.assertAlmostEqual(x, x0, places=6)
            self.assertAlmostEqual(w, w0, places=6)

    def test_semicircle(self):
        mu = stieltjes_invert(semicircle_cauchy, (-3.0, 3.0), 2048)
        self.assertEqual(mu.positions.size, 0)
        x = np.linspace(-1.9, 1.9, 77)
        expected = np.sqrt(4 - x * x) / (2 * np.pi)
        self.assertAllClose(np.interp(x, mu.grid, mu.values), expected,
                            atol=1e-3)

    def test_arcsine(self):
        mu = stieltjes_invert(arcsine_cauchy, (-3.0, 3.0), 2048)
        self.assertEqual(mu.positions.size, 0)
        x = np.linspace(-1.9, 1.9, 77)
        expected = 1 / (np.pi * np.sqrt(4 - x * x))
        self.assertAllClose(np.interp(x, mu.grid, mu.values), expected,
                            atol=2e-3)
        self.assertLess(abs(cdf_eval(mu, 1.0) - 2.0 / 3.0), 2e-3)

    def test_window_expansion(self):
        wide = dilate(semicircle(resolution=128), 2.0)
        mu = stieltjes_invert(CauchyTransform(wide), (-2.0, 2.0), 512)
        self.assertAlmostEqual(mu.mass, 1.0, places=9)
        self.assertLessEqual(mu.grid[0], -4.0)

    def test_window_too_small(self):
        far = dirac(100.0)
        with self.assertRaises(WindowTooSmall):
            stieltjes_invert(CauchyTransform(far), (-1.0, 1.0), 64)
        with self.assertRaises(ValueError):
            stieltjes_invert(CauchyTransform(far), (1.0, 1.0), 64)

    def test_nevanlinna_diracs(self):
        rep = nevanlinna_rep(dirac(0.0), resolution=257)
        self.assertAlmostEqual(rep.a, 0.0)
        self.assertEqual(rep.b, 1.0)
        self.assertAlmostEqual(rep.tau.mass, 0.0)
        rep = nevanlinna_rep(dirac(1.0), resolution=257)
        self.assertAlmostEqual(rep.a, -1.0)
        self.assertAlmostEqual(rep.tau.mass, 0.0)

    def test_nevanlinna_two_point(self):
        mu = two_point(0.5)
        rep = nevanlinna_rep(mu, resolution=1025)
        self.assertAlmostEqual(rep.a, 0.0)
        self.assertEqual(len(rep.tau.atoms), 1)
        position, weight = rep.tau.atoms[0]
        self.assertAlmostEqual(position, 0.0, places=9)
        self.assertAlmostEqual(weight, 1.0, places=6)
        z = np.linspace(-3, 3, 50) + 0.5j
        self.assertAllClose(rep.evaluate(z), reciprocal_eval(mu, z),
                            atol=1e-6)


class TestSeededRoundTrips(TestMeasureBase):

    """G, F, phi and the inversion on seeded random measures."""

    def test_cauchy_reciprocal(self):
        for rng in seeded(7):
            mu = random_atomic(rng)
            z = rng.uniform(-3, 3, 10) + 1j * rng.uniform(0.05, 8, 10)
            self.assertAllClose(cauchy_eval(mu, z) * reciprocal_eval(mu, z),
                                np.ones(10), atol=1e-12)

    def test_voiculescu_round_trip(self):
        for rng in seeded(11):
            mu = random_atomic(rng)
            func = ReciprocalCauchy(mu)
            cone = TruncatedCone(1.0, 8.0 * (1.0 + func.scale))
            for z in cone.probe_points(2, 3):
                w = complex(func(z))
                self.assertComplexAlmostEqual(invert_class_F(func, w), z,
                                              delta=1e-8)
                self.assertComplexAlmostEqual(voiculescu_eval(mu, w) + w, z,
                                              delta=1e-8)

    def test_inversion_round_trip(self):
        for rng in seeded(13):
            mu = random_mixed(rng)
            recovered = stieltjes_invert(CauchyTransform(mu), (-4.0, 4.0),
                                         2048)
            self.assertLessEqual(levy(mu, recovered), 2e-3)
