"""pair2measure, pair2cf and selfdecomp."""

import argparse

import numpy as np

from ..infdiv import (classical_exponent, is_selfdecomposable,
                      measure_of_pair, selfdecomp_remainder)
from .base import BaseCommand, floats_type


def t_grid_type(text):
    """START:STOP:COUNT."""
    try:
        start, stop, count = text.split(':')
        return np.linspace(float(start), float(stop), int(count))
    except ValueError:
        raise argparse.ArgumentTypeError(
            'expected START:STOP:COUNT, got %r' % text)


class PairToMeasureCommand(BaseCommand):
    name = 'pair2measure'
    help = """
Free infinitely divisible law of a generating pair spec:

    freeconv pair2measure pair.json --out law.csv
    """.strip()
    default_output = 'pair2measure.json'

    def add_arguments(self, parser):
        parser.add_argument('spec', help='Generating pair spec file')

    def handle(self, **options):
        pair = self.load_pair(options['spec'])
        law = measure_of_pair(pair, options['window'], options['grid'],
                              self.cfg)
        return [self.write_measure(law, self.output_path(options))]


class PairToCharacteristicCommand(BaseCommand):
    name = 'pair2cf'
    help = """
Characteristic exponent f and characteristic function exp(f) of the
classical infinitely divisible law of a generating pair spec, CSV columns
t,f_re,f_im,cf_re,cf_im:

    freeconv pair2cf gauss_pair.json --t 0:10:100
    """.strip()
    default_output = 'pair2cf.csv'

    def add_arguments(self, parser):
        parser.add_argument('spec', help='Generating pair spec file')
        parser.add_argument('--t', type=t_grid_type,
            default=np.linspace(0.0, 10.0, 101),
            help='Grid START:STOP:COUNT (default 0:10:101)'
        )

    def handle(self, **options):
        pair = self.load_pair(options['spec'])
        ts = options['t']
        exponents = classical_exponent(pair, ts)
        functions = np.exp(exponents)
        rows = [(t, f.real, f.imag, cf.real, cf.imag)
                for t, f, cf in zip(ts, exponents, functions)]
        return [self.write_table(self.output_path(options),
                                 ('t', 'f_re', 'f_im', 'cf_re', 'cf_im'),
                                 rows)]


class SelfDecompCommand(BaseCommand):
    name = 'selfdecomp'
    help = """
Self-decomposability evidence for the free law of a generating pair spec:
phi(z) - gamma phi(z / gamma) at --probes random points drawn with --seed,
CSV columns gamma,z_re,z_im,remainder_re,remainder_im. The verdict,
including the monotonicity test on nu, is logged.
    """.strip()
    default_output = 'selfdecomp.csv'

    def add_arguments(self, parser):
        parser.add_argument('spec', help='Generating pair spec file')
        parser.add_argument('--gammas', type=floats_type,
            default=[0.25, 0.5, 0.75],
            help='Comma separated gammas in (0, 1)'
        )
        parser.add_argument('--probes', type=int, default=50,
            help='Number of random probe points'
        )

    def probe_points(self, pair, count, seed):
        rng = np.random.default_rng(seed)
        spread = 2.0 * (1.0 + np.sqrt(pair.variance))
        x = pair.mean + rng.uniform(-spread, spread, count)
        y = np.exp(rng.uniform(np.log(0.1), np.log(10.0), count))
        return x + 1j * y * (1.0 + np.sqrt(pair.variance))

    def handle(self, **options):
        pair = self.load_pair(options['spec'])
        probes = self.probe_points(pair, options['probes'], options['seed'])
        rows = []
        for gamma in options['gammas']:
            remainders = np.atleast_1d(selfdecomp_remainder(pair, gamma,
                                                            probes))
            rows += [(gamma, z.real, z.imag, r.real, r.imag)
                     for z, r in zip(probes, remainders)]
        verdict = is_selfdecomposable(pair, options['gammas'], probes)
        self.logger.info(
            'self-decomposable: %s (nu %s, worst Im remainder %.3g)',
            'yes' if verdict else 'no',
            'passes' if verdict.class_l else 'fails', verdict.worst_imaginary)
        return [self.write_table(
            self.output_path(options),
            ('gamma', 'z_re', 'z_im', 'remainder_re', 'remainder_im'), rows)]
