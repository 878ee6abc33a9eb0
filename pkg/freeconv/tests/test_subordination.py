"""Subordination solves and free convolutions."""


import numpy as np

from freeconv.exceptions import NoConvergence
from freeconv.measures import (arcsine, dilate, dirac, from_atoms,
                               kolmogorov, semicircle, two_point)
from freeconv.subordination import (ConvolutionTransform, GroupedSystem,
                                    SolverConfig, default_window,
                                    free_convolve, free_power,
                                    group_measures, iterate, subordinate,
                                    subordinate_power, symmetrize)
from freeconv.transforms import (TruncatedCone, cauchy_eval, reciprocal_eval,
                                 voiculescu_eval)

from .base import TestMeasureBase, random_atomic, seeded


def arcsine_reciprocal(z):
    z = np.asarray(z, dtype=complex)
    return np.sqrt(z - 2) * np.sqrt(z + 2)


class TestSolverConfig(TestMeasureBase):

    """SolverConfig validation."""

    def test_defaults(self):
        cfg = SolverConfig()
        self.assertEqual(cfg.tol, 1e-12)
        self.assertEqual(cfg.damping, 1.0)

    def test_invalid(self):
        for kwargs in ({'tol': 0}, {'max_iter': 0}, {'damping': 0},
                       {'damping': 1.5}):
            with self.assertRaises(ValueError):
                SolverConfig(**kwargs)


class TestSubordinate(TestMeasureBase):

    """Subordination functions at single points."""

    def test_identity_summand(self):
        mu = two_point(0.3)
        z = 0.5 + 2j
        result = subordinate([mu, dirac(0.0)], z)
        self.assertTrue(result.converged)
        self.assertComplexAlmostEqual(result.Z[0], z)
        self.assertComplexAlmostEqual(result.Z[1], reciprocal_eval(mu, z))
        self.assertComplexAlmostEqual(result.F_value, reciprocal_eval(mu, z))
        self.assertEqual(result.z.z, z)

    def test_semicircles(self):
        mu = semicircle(resolution=512)
        result = subordinate([mu, mu], 3j)
        self.assertComplexAlmostEqual(result.Z[0], 3.2807764064j, delta=1e-5)
        self.assertEqual(result.Z[0], result.Z[1])
        self.assertComplexAlmostEqual(result.F_value, 3.5615528128j,
                                      delta=1e-5)

    def test_two_points(self):
        result = subordinate([two_point(0.5), two_point(0.5)], 3j)
        self.assertComplexAlmostEqual(result.Z[0], 3.3027756377j)
        self.assertComplexAlmostEqual(result.Z[1], 3.3027756377j)
        self.assertComplexAlmostEqual(result.F_value, 3.6055512755j)
        self.assertLess(result.residual, 1e-10)

    def test_needs_two_measures(self):
        with self.assertRaises(ValueError):
            subordinate([two_point(0.5)], 1j)

    def test_power(self):
        z = 0.25 + 1.5j
        self.assertComplexAlmostEqual(
            subordinate_power(dirac(0.0), 5, z).Z[0], z)
        self.assertComplexAlmostEqual(
            subordinate_power(two_point(0.5), 2, 3j).Z[0], 3.3027756377j)
        self.assertComplexAlmostEqual(
            subordinate_power(semicircle(resolution=512), 2, 3j).Z[0],
            3.2807764064j, delta=1e-5)
        with self.assertRaises(ValueError):
            subordinate_power(dirac(), 0, 1j)
        with self.assertRaises(ValueError):
            subordinate_power(dirac(), 1.5, 1j)

    def test_distinct_measures(self):
        mus = [two_point(0.3), from_atoms([(-1.0, 0.2), (0.5, 0.8)]),
               two_point(0.3)]
        result = subordinate(mus, 0.3 + 0.8j)
        self.assertEqual(len(result.Z), 3)
        self.assertEqual(result.Z[0], result.Z[2])
        for mu, Z in zip(mus, result.Z):
            self.assertGreater(Z.imag, 0.8 - 1e-12)
            self.assertComplexAlmostEqual(reciprocal_eval(mu, Z),
                                          result.F_value, delta=1e-9)
        total = sum(result.Z) - 2 * result.F_value
        self.assertComplexAlmostEqual(total, 0.3 + 0.8j, delta=1e-9)

    def test_no_convergence(self):
        mus = [two_point(0.3), from_atoms([(-1.0, 0.2), (0.5, 0.8)])]
        with self.assertRaises(NoConvergence) as context:
            subordinate(mus, 0.3 + 1j, SolverConfig(max_iter=1))
        self.assertEqual(len(context.exception.residuals), 1)


class TestLowHeight(TestMeasureBase):

    """Solves close to the real axis for many summands."""

    def assertSubordinates(self, mu, n, z):
        result = subordinate_power(mu, n, z)
        self.assertTrue(result.converged)
        Z = result.Z[0]
        self.assertGreaterEqual(Z.imag, z.imag - 1e-12)
        self.assertComplexAlmostEqual(
            n * Z - (n - 1) * reciprocal_eval(mu, Z), z, delta=1e-9)

    def test_sixteen_summands(self):
        self.assertSubordinates(dilate(two_point(0.3), 0.25), 16,
                                -0.5568 + 0.05j)

    def test_many_summands(self):
        self.assertSubordinates(dilate(two_point(0.5), 1 / 16.0), 256,
                                0.332 + 0.05j)

    def test_residual_history(self):
        measures, counts, _ = group_measures([dilate(two_point(0.3), 0.25)]
                                             * 16)
        system = GroupedSystem(measures, counts)
        z = np.linspace(-2, 2, 41) + 0.05j
        solution = iterate(system, z, system.initial(z), SolverConfig())
        self.assertTrue(np.all(np.diff(solution.history) <= 0))
        transform = ConvolutionTransform([dilate(two_point(0.3), 0.25)] * 16)
        self.assertEqual(transform.solve(z).converged.tolist(), [True] * 41)


class TestSeededPairs(TestMeasureBase):

    """Free sums of seeded random atomic pairs."""

    def setUp(self):
        self.pairs = [(random_atomic(rng), random_atomic(rng))
                      for rng in seeded(2024)]

    def test_residuals(self):
        x = np.linspace(-3.0, 3.0, 13)
        y = np.geomspace(0.05, 8.0, 6)
        z = (x[None, :] + 1j * y[:, None]).reshape(-1)
        for pair in self.pairs:
            transform = ConvolutionTransform(pair)
            solution = transform.solve(z)
            self.assertTrue(np.all(solution.converged))
            self.assertTrue(np.all(
                solution.residual <= 1e-10 * (1 + np.abs(solution.output))))
            self.assertTrue(np.all(solution.Z.imag >= z.imag[:, None] - 1e-12))
            for mu, group in zip(pair, transform.membership):
                Z = solution.Z[:, group]
                self.assertAllClose(reciprocal_eval(mu, Z), solution.output,
                                    atol=1e-8 * (1 + np.abs(
                                        solution.output).max()))

    def test_phi_additivity(self):
        for first, second in self.pairs:
            transform = ConvolutionTransform([first, second])
            cone = TruncatedCone(1.0, 8.0 * (1.0 + transform.scale))
            z = cone.probe_points()
            self.assertEqual(z.shape, (20,))
            w = np.array([point + voiculescu_eval(first, point) +
                          voiculescu_eval(second, point) for point in z])
            self.assertAllClose(transform(w), z, atol=1e-7)
        first, second = self.pairs[0]
        transform = ConvolutionTransform([first, second])
        point = 2 * 8.0 * (1.0 + transform.scale) * 1j
        self.assertComplexAlmostEqual(
            voiculescu_eval(transform, point),
            voiculescu_eval(first, point) + voiculescu_eval(second, point),
            delta=1e-7)


class TestConvolutionTransform(TestMeasureBase):

    """The reciprocal Cauchy transform of a free sum as an evaluator."""

    def setUp(self):
        self.transform = ConvolutionTransform([two_point(0.5)] * 2)

    def test_group_measures(self):
        a, b = two_point(0.3), dirac(1.0)
        measures, counts, membership = group_measures([a, b, a])
        self.assertEqual(len(measures), 2)
        self.assertEqual(counts.tolist(), [2, 1])
        self.assertEqual(membership, [0, 1, 0])

    def test_vectorized(self):
        z = np.array([[1j, 2j], [1 + 1j, -0.5 + 3j]])
        values = self.transform(z)
        self.assertEqual(values.shape, (2, 2))
        self.assertAllClose(values, arcsine_reciprocal(z), atol=1e-10)

    def test_continuation(self):
        z = 0.5 + 0.001j
        self.assertComplexAlmostEqual(self.transform(z),
                                      arcsine_reciprocal(z), delta=1e-8)

    def test_derivative(self):
        z = 3j
        expected = z / arcsine_reciprocal(z)
        self.assertComplexAlmostEqual(self.transform.derivative(z),
                                      expected, delta=1e-8)

    def test_levels(self):
        x = np.linspace(-1.5, 1.5, 7)
        ys = [0.2, 0.01, 0.05]
        levels = self.transform.evaluate_levels(x, ys)
        for y, values in zip(ys, levels):
            self.assertAllClose(values, arcsine_reciprocal(x + 1j * y),
                                atol=1e-8)

    def test_cauchy_view(self):
        self.assertComplexAlmostEqual(
            self.transform.cauchy(2j), 1 / arcsine_reciprocal(2j))

    def test_phi_additivity(self):
        first = two_point(0.3)
        second = from_atoms([(-1.0, 0.2), (0.5, 0.8)])
        transform = ConvolutionTransform([first, second])
        for z in (1 + 10j, -2 + 8j, 0.5 + 12j):
            expected = voiculescu_eval(first, z) + voiculescu_eval(second, z)
            self.assertComplexAlmostEqual(voiculescu_eval(transform, z),
                                          expected, delta=1e-7)


class TestFreeConvolve(TestMeasureBase):

    """Free sums recovered as measures."""

    def test_diracs(self):
        self.assertEqual(free_convolve([dirac(0.5), dirac(-2.0)]).atoms,
                         [(-1.5, 1.0)])
        with self.assertRaises(ValueError):
            free_convolve([dirac()])

    def test_semicircles(self):
        mu = semicircle(resolution=256)
        total = free_convolve([mu, mu], resolution=1024)
        self.assertLess(kolmogorov(total, semicircle(2.0, resolution=512)),
                        5e-3)

    def test_arcsine(self):
        mu = two_point(0.5)
        total = free_convolve([mu, mu], resolution=2048)
        self.assertLess(kolmogorov(total, arcsine(resolution=2048)), 5e-3)

    def test_power(self):
        mu = two_point(0.5)
        self.assertIs(free_power(mu, 1), mu)
        power = free_power(mu, 2, resolution=2048)
        self.assertLess(kolmogorov(power, arcsine(resolution=2048)), 5e-3)

    def test_default_window(self):
        self.assertEqual(default_window([two_point(0.5)] * 2), (-3.0, 3.0))

    def test_symmetrize(self):
        self.assertEqual(symmetrize(dirac(3.0)).atoms, [(0.0, 1.0)])
        mu = two_point(0.3)
        transform = ConvolutionTransform([mu, dilate(mu, -1.0)])
        self.assertLess(abs(complex(transform.cauchy(1j)).real), 1e-10)
        symmetric = symmetrize(mu, resolution=1024)
        self.assertLess(abs(cauchy_eval(symmetric, 1j).real), 1e-5)
