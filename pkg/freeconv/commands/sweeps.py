"""sweep-be, sweep-lyapunov, lln and norming."""

from ..harness import (alternating_family, berry_esseen_sweep,
                       degenerate_sweep, lyapunov_sweep, norming_constant)
from .base import BaseCommand, integers_type


class SweepCommand(BaseCommand):
    """Base of the commands producing one CSV row per n."""

    default_ns = [16, 64, 256]

    def add_arguments(self, parser):
        parser.add_argument('specs', nargs='+', help='Measure spec files')
        parser.add_argument('--ns', type=integers_type,
            default=self.default_ns,
            help='Comma separated values of n (default %s)' %
                 ','.join(str(n) for n in self.default_ns)
        )

    def sweep(self, mus, ns, on_row, **options):
        raise NotImplementedError()

    def handle(self, **options):
        mus = [self.load_measure(path) for path in options['specs']]
        ns = options['ns']
        self.progress_start(len(ns), 'n values')
        done = []

        def on_row(row):
            done.append(row)
            self.progress_update(len(done))

        report = self.sweep(mus, on_row=on_row, **options)
        self.progress_finish()
        return [self.write_plot_data(report, self.output_path(options))]


class BerryEsseenCommand(SweepCommand):
    name = 'sweep-be'
    help = """
Distance between the n-fold free power of a mean 0, variance 1 measure
rescaled by 1 / sqrt(n) and the semicircle law, against the bound
(|m3| + sqrt(m4)) / sqrt(n). CSV columns n,delta,levy,bound,ratio:

    freeconv sweep-be two_point.json --ns 16,64,256,1024
    """.strip()
    default_output = 'sweep-be.csv'

    def sweep(self, mus, ns, on_row, **options):
        report = berry_esseen_sweep(mus[0], ns, options['window'],
                                    options['grid'], self.cfg, on_row)
        self.logger.info('fitted slope %.4f, largest ratio %.4g',
                         report.slope, report.constant)
        return report


class LyapunovCommand(SweepCommand):
    name = 'sweep-lyapunov'
    help = """
Distance between (mu_1 + ... + mu_n) / B_n (free sum) and the semicircle
law, against L_n^(1/2) = (A_n / B_n^3)^(1/2), the specs being cycled to
length n. CSV columns n,delta,levy,bound,ratio.
    """.strip()
    default_output = 'sweep-lyapunov.csv'

    def sweep(self, mus, ns, on_row, **options):
        report = lyapunov_sweep(alternating_family(*mus), ns,
                                options['window'], options['grid'], self.cfg,
                                on_row)
        self.logger.info('largest delta / L^(1/2) %.4g', report.constant)
        return report


class DegenerateCommand(SweepCommand):
    name = 'lln'
    help = """
Law of large numbers: Levy distance from (mu_1 + ... + mu_n) / n (free sum)
to delta_0 with the truncated sums eta1, eta2, eta3 and the bound
c ((eta1 + eta3)^(1/6) + |eta2|). CSV columns n,eta1,eta2,eta3,levy,bound.
    """.strip()
    default_output = 'lln.csv'

    def sweep(self, mus, ns, on_row, **options):
        return degenerate_sweep(mus, ns, options['window'], options['grid'],
                                self.cfg, on_row)


class NormingCommand(BaseCommand):
    name = 'norming'
    help = """
Norming constant b > 0 solving
(1/2) sum_k int u^2 / (b^2 + u^2) mu_k^s(du) = TARGET
with mu_k^s the free symmetrization of each spec. CSV columns target,b,
condition, the last one being max_k int u^2 / (b^2 + u^2) mu_k(du).
    """.strip()
    default_output = 'norming.csv'

    def add_arguments(self, parser):
        parser.add_argument('specs', nargs='+', help='Measure spec files')
        parser.add_argument('--target', type=float, required=True,
            help='Target mass'
        )

    def handle(self, **options):
        mus = [self.load_measure(path) for path in options['specs']]
        norming = norming_constant(mus, options['target'], self.cfg)
        return [self.write_table(
            self.output_path(options), ('target', 'b', 'condition'),
            [(options['target'], norming.b, norming.condition)])]
