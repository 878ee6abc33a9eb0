"""Generating pairs, free and classical infinitely divisible laws."""


import numpy as np

from freeconv.exceptions import InvalidMeasure
from freeconv.infdiv import (GeneratingPair, PairTransform, add_pairs,
                             check_L_class, classical_cf, classical_exponent,
                             free_poisson_pair, is_selfdecomposable,
                             measure_of_pair, phi_of_pair, phi_pair,
                             probe_grid, selfdecomp_remainder,
                             semicircle_pair)
from freeconv.measures import (finite_measure, kolmogorov, marchenko_pastur,
                               semicircle)

from .base import TestMeasureBase


def uniform_pair():
    return GeneratingPair(0.25, finite_measure(grid=[0.0, 1.0],
                                               values=[1.0, 1.0]))


class TestGeneratingPair(TestMeasureBase):

    """Pairs and their Voiculescu transforms."""

    def test_validation(self):
        with self.assertRaises(InvalidMeasure):
            GeneratingPair(float('nan'), finite_measure())
        with self.assertRaises(InvalidMeasure):
            GeneratingPair(0.0, [(0.0, 1.0)])

    def test_moments(self):
        pair = free_poisson_pair(2.0, 3.0)
        self.assertAlmostEqual(pair.mean, 6.0)
        self.assertAlmostEqual(pair.variance, 18.0)
        self.assertAlmostEqual(semicircle_pair(2.0).variance, 2.0)

    def test_phi_values(self):
        self.assertComplexAlmostEqual(
            phi_of_pair(GeneratingPair(0.7, finite_measure()), 1 + 1j), 0.7)
        self.assertComplexAlmostEqual(phi_of_pair(semicircle_pair(), 2j),
                                      -0.5j)
        delta1 = GeneratingPair(0.0, finite_measure([(1.0, 1.0)]))
        self.assertComplexAlmostEqual(phi_of_pair(delta1, 2j), 0.6 - 0.8j)

    def test_phi_density(self):
        z = 0.3 + 0.5j
        u = (np.arange(200000) + 0.5) / 200000
        expected = 0.25 + np.mean((1 + u * z) / (z - u))
        self.assertComplexAlmostEqual(phi_of_pair(uniform_pair(), z),
                                      expected, delta=1e-8)

    def test_phi_derivative(self):
        z, step = np.array([0.3 + 0.5j]), 1e-6
        for pair in (uniform_pair(), free_poisson_pair(1.5)):
            phi, dphi = phi_pair(pair, z)
            quotient = (phi_pair(pair, z + step)[0] -
                        phi_pair(pair, z - step)[0]) / (2 * step)
            self.assertComplexAlmostEqual(dphi[0], quotient[0], delta=1e-6)

    def test_phi_growth(self):
        for pair in (uniform_pair(), free_poisson_pair(2.0),
                     semicircle_pair()):
            self.assertLess(abs(phi_of_pair(pair, 1000j)) / 1000, 0.01)

    def test_add_pairs(self):
        first, second = uniform_pair(), free_poisson_pair(2.0)
        total = add_pairs(first, second)
        self.assertAlmostEqual(total.alpha, first.alpha + second.alpha)
        self.assertAlmostEqual(total.nu.mass,
                               first.nu.mass + second.nu.mass, places=9)
        z = -0.5 + 0.75j
        self.assertComplexAlmostEqual(
            phi_of_pair(total, z),
            phi_of_pair(first, z) + phi_of_pair(second, z), delta=1e-9)


class TestFreeLaw(TestMeasureBase):

    """measure_of_pair and the pair equation w + phi(w) = z."""

    def test_transform_closed_form(self):
        transform = PairTransform(semicircle_pair())
        for z in (2j, 1 + 0.5j, 0.5 + 0.002j):
            expected = (z + np.sqrt(z - 2) * np.sqrt(z + 2)) / 2
            self.assertComplexAlmostEqual(transform(z), expected, delta=1e-8)

    def test_drift_only(self):
        law = measure_of_pair(GeneratingPair(-1.5, finite_measure()))
        self.assertEqual(law.atoms, [(-1.5, 1.0)])

    def test_semicircle(self):
        law = measure_of_pair(semicircle_pair(), resolution=1024)
        self.assertLess(kolmogorov(law, semicircle(resolution=512)), 5e-3)

    def test_semicircle_variance_two(self):
        law = measure_of_pair(semicircle_pair(2.0), resolution=1024)
        self.assertLess(kolmogorov(law, semicircle(2.0, resolution=512)),
                        5e-3)

    def test_free_poisson(self):
        law = measure_of_pair(free_poisson_pair(2.0), resolution=1024)
        self.assertLess(
            kolmogorov(law, marchenko_pastur(2.0, resolution=512)), 5e-3)


class TestClassicalExponent(TestMeasureBase):

    """Classical characteristic exponents of generating pairs."""

    def test_drift(self):
        pair = GeneratingPair(0.5, finite_measure())
        self.assertComplexAlmostEqual(classical_exponent(pair, 2.0), 1j)

    def test_gaussian(self):
        ts = np.linspace(0.0, 10.0, 11)
        values = classical_exponent(semicircle_pair(), ts)
        self.assertEqual(values.shape, ts.shape)
        self.assertAllClose(values, -ts * ts / 2, atol=1e-12)
        self.assertAllClose(classical_cf(semicircle_pair(), ts),
                            np.exp(-ts * ts / 2), atol=1e-12)

    def test_unit_atom(self):
        pair = GeneratingPair(0.0, finite_measure([(1.0, 1.0)]))
        self.assertComplexAlmostEqual(classical_exponent(pair, np.pi),
                                      -4 - 1j * np.pi)

    def test_small_argument_series(self):
        pair = GeneratingPair(0.0, finite_measure([(1e-3, 1.0)]))
        t = 2.0
        x = 1j * t * 1e-3
        exact = (np.exp(x) - 1 - x / (1 + 1e-6)) * (1 + 1e-6) / 1e-6
        self.assertComplexAlmostEqual(classical_exponent(pair, t), exact,
                                      delta=1e-9)

    def test_density(self):
        pair = uniform_pair()
        t = 1.5
        u = (np.arange(200000) + 0.5) / 200000
        x = 1j * t * u
        integrand = (np.exp(x) - 1 - x / (1 + u * u)) * (1 + u * u) / (u * u)
        expected = 1j * 0.25 * t + np.mean(integrand)
        self.assertComplexAlmostEqual(classical_exponent(pair, t), expected,
                                      delta=1e-8)


class TestSelfDecomposability(TestMeasureBase):

    """The class L test on nu and the remainder phi_gamma."""

    def test_remainder(self):
        drift = GeneratingPair(2.0, finite_measure())
        self.assertComplexAlmostEqual(selfdecomp_remainder(drift, 0.25, 1j),
                                      1.5)
        self.assertComplexAlmostEqual(
            selfdecomp_remainder(semicircle_pair(), 0.5, 2j), -0.375j)
        for gamma in (0.0, 1.0, 1.5):
            with self.assertRaises(ValueError):
                selfdecomp_remainder(drift, gamma, 1j)

    def test_atom_at_zero(self):
        self.assertTrue(check_L_class(finite_measure([(0.0, 1.0)])))

    def test_atom_off_zero(self):
        verdict = check_L_class(finite_measure([(1.0, 1.0)]))
        self.assertFalse(verdict)
        self.assertEqual(verdict.violations, [(1.0, 1.0)])

    def test_constant_criterion(self):
        u = np.linspace(0.0, 1.0, 101)
        nu = finite_measure(grid=u, values=u / (1 + u * u))
        self.assertTrue(check_L_class(nu))
        u = np.linspace(-1.0, 0.0, 101)
        nu = finite_measure(grid=u, values=-u / (1 + u * u))
        self.assertTrue(check_L_class(nu))

    def test_increasing_criterion(self):
        u = np.linspace(0.0, 1.0, 101)
        nu = finite_measure(grid=u, values=u ** 3 / (1 + u * u))
        verdict = check_L_class(nu)
        self.assertFalse(verdict.accepted)
        self.assertGreater(len(verdict.violations), 90)

    def test_grid_excluding_zero(self):
        u = np.linspace(0.01, 0.99, 99)
        self.assertTrue(check_L_class(finite_measure(grid=u,
                                                     values=u / (1 + u * u))))
        verdict = check_L_class(finite_measure(grid=u,
                                               values=u ** 3 / (1 + u * u)))
        self.assertFalse(verdict)
        left, right = verdict.violations[0]
        self.assertAlmostEqual(left, 0.01)
        self.assertAlmostEqual(right, 0.02)
        u = -u[::-1]
        self.assertTrue(check_L_class(finite_measure(grid=u,
                                                     values=-u / (1 + u * u))))

    def test_rising_off_zero(self):
        nu = finite_measure(grid=[1.0, 2.0], values=[1.0, 1.0])
        self.assertEqual(check_L_class(nu).violations, [(1.0, 2.0)])
        nu = finite_measure(grid=[-2.0, -1.0], values=[1.0, 1.0])
        self.assertEqual(check_L_class(nu).violations, [(-2.0, -1.0)])

    def test_semicircle_selfdecomposable(self):
        pair = semicircle_pair()
        self.assertEqual(probe_grid(pair).shape, (45,))
        verdict = is_selfdecomposable(pair)
        self.assertTrue(verdict)
        self.assertEqual(verdict.failures, [])
        self.assertLess(verdict.worst_imaginary, 0)
        for gamma in (0.25, 0.5, 0.75):
            remainder = selfdecomp_remainder(pair, gamma, probe_grid(pair))
            self.assertTrue(np.all(remainder.imag <= 0))

    def test_free_poisson_rejected(self):
        verdict = is_selfdecomposable(free_poisson_pair(2.0))
        self.assertFalse(verdict.accepted)
        self.assertFalse(verdict.class_l)
