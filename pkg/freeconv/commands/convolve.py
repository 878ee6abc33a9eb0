"""conv, power, invert and phi."""

import numpy as np

from ..exceptions import CommandError
from ..subordination import free_convolve, free_power
from ..transforms import (ReciprocalCauchy, invert_class_F,
                          invertibility_cone, voiculescu_eval)
from .base import BaseCommand


class ConvCommand(BaseCommand):
    name = 'conv'
    help = """
Free additive convolution of two or more measure specs:

    freeconv conv a.json b.json --out sum.json

Writes the result as a density spec, or as x,cdf,density,atom plot data
when --out ends with .csv.
    """.strip()
    default_output = 'conv.json'

    def add_arguments(self, parser):
        parser.add_argument('specs', nargs='+', help='Measure spec files')

    def handle(self, **options):
        if len(options['specs']) < 2:
            raise CommandError('conv needs at least 2 measures, got %d' %
                               len(options['specs']))
        mus = [self.load_measure(path) for path in options['specs']]
        result = free_convolve(mus, options['window'], options['grid'],
                               self.cfg)
        return [self.write_measure(result, self.output_path(options))]


class PowerCommand(BaseCommand):
    name = 'power'
    help = """
n-fold free additive convolution power of a measure spec:

    freeconv power two_point.json --n 2 --out arcsine.json
    """.strip()
    default_output = 'power.json'

    def add_arguments(self, parser):
        parser.add_argument('spec', help='Measure spec file')
        parser.add_argument('--n', type=int, required=True,
            help='Number of summands'
        )

    def handle(self, **options):
        if options['n'] < 1:
            raise CommandError('--n must be positive')
        mu = self.load_measure(options['spec'])
        result = free_power(mu, options['n'], options['window'],
                            options['grid'], self.cfg)
        return [self.write_measure(result, self.output_path(options))]


class PointsCommand(BaseCommand):
    """Evaluate something of a measure at upper half-plane points."""

    default_output = 'points.csv'
    columns = ()

    def add_arguments(self, parser):
        parser.add_argument('spec', help='Measure spec file')
        parser.add_argument('--z', type=complex, action='append', default=[],
            help='Query point such as 1+2j, repeatable.\n'
                 'Defaults to probe points of the invertibility cone.'
        )

    def points(self, mu, options):
        if options['z']:
            points = np.array(options['z'], dtype=complex)
            if np.any(points.imag <= 0):
                raise CommandError('--z points must have positive '
                                   'imaginary part')
            return points
        return invertibility_cone(mu).probe_points()

    def evaluate(self, func, point):
        raise NotImplementedError()

    def handle(self, **options):
        mu = self.load_measure(options['spec'])
        func = ReciprocalCauchy(mu)
        points = self.points(mu, options)
        self.progress_start(len(points), 'points')
        rows = []
        for i, point in enumerate(points):
            value = self.evaluate(func, complex(point))
            rows.append((point.real, point.imag, value.real, value.imag))
            self.progress_update(i + 1)
        self.progress_finish()
        return [self.write_table(self.output_path(options), self.columns,
                                 rows)]


class InvertCommand(PointsCommand):
    name = 'invert'
    help = """
Inverse of the reciprocal Cauchy transform F of a measure spec at the --z
points, CSV columns z_re,z_im,w_re,w_im with F(w) = z.
    """.strip()
    default_output = 'invert.csv'
    columns = ('z_re', 'z_im', 'w_re', 'w_im')

    def evaluate(self, func, point):
        return invert_class_F(func, point)


class PhiCommand(PointsCommand):
    name = 'phi'
    help = """
Voiculescu transform phi(z) = F^(-1)(z) - z of a measure spec at the --z
points, CSV columns z_re,z_im,phi_re,phi_im.
    """.strip()
    default_output = 'phi.csv'
    columns = ('z_re', 'z_im', 'phi_re', 'phi_im')

    def evaluate(self, func, point):
        return voiculescu_eval(func, point)
