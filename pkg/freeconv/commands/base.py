"""Shared machinery of the freeconv commands."""

import argparse
import logging
import os
from argparse import RawTextHelpFormatter

import numpy as np
import progressbar

from .. import settings
from ..artifacts import ArtifactWriter, plot_rows
from ..exceptions import CommandError
from ..infdiv import GeneratingPair
from ..specs import dump_measure_spec, load_measure_spec
from ..subordination import SolverConfig


def window_type(text):
    """LO:HI with LO < HI."""
    try:
        lo, hi = [float(part) for part in text.split(':')]
    except ValueError:
        raise argparse.ArgumentTypeError('expected LO:HI, got %r' % text)
    if not hi > lo:
        raise argparse.ArgumentTypeError('empty window %r' % text)
    return lo, hi


def integers_type(text):
    """Comma separated positive integers."""
    try:
        values = [int(part) for part in text.split(',') if part]
    except ValueError:
        raise argparse.ArgumentTypeError('expected integers, got %r' % text)
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError('expected positive integers')
    return values


def floats_type(text):
    """Comma separated reals."""
    try:
        return [float(part) for part in text.split(',') if part]
    except ValueError:
        raise argparse.ArgumentTypeError('expected numbers, got %r' % text)


class BaseCommand(object):
    """
    One freeconv verb. Subclasses set ``name``, ``help`` and
    ``default_output`` and implement add_arguments() and handle(), which
    returns the list of written paths.
    """

    name = None
    help = ''
    default_output = 'output.json'

    logger = logging.getLogger('freeconv')

    def __init__(self, writer=None):
        self.writer = writer or ArtifactWriter()
        self.progress_enabled = False
        self.progress = None

    def create_parser(self, prog='freeconv'):
        parser = argparse.ArgumentParser(
            prog='%s %s' % (prog, self.name), description=self.help,
            formatter_class=RawTextHelpFormatter)
        parser.add_argument('--grid', type=int, default=None,
            help='Inversion resolution (default %d)' %
                 settings.GRID_RESOLUTION
        )
        parser.add_argument('--window', type=window_type, default=None,
            help='Inversion window LO:HI (default from the inputs)'
        )
        parser.add_argument('--tol', type=float, default=settings.TOL,
            help='Solver tolerance'
        )
        parser.add_argument('--out', default=None,
            help='Output path, .csv for plot data (default in %s)' %
                 settings.DATA_DIR
        )
        parser.add_argument('--seed', type=int, default=0,
            help='Seed of random probe points'
        )
        parser.add_argument('--progress', action='store_true',
            default=False,
            help='Show progress bar'
        )
        parser.add_argument('--verbosity', type=int, choices=(0, 1, 2),
            default=1,
            help='0 warnings only, 1 info, 2 debug'
        )
        self.add_arguments(parser)
        return parser

    def add_arguments(self, parser):
        pass

    def run_from_argv(self, argv):
        options = vars(self.create_parser().parse_args(argv))
        return self.execute(**options)

    def execute(self, **options):
        self.progress_enabled = options.get('progress', False)
        self.progress = None
        self.cfg = SolverConfig(tol=options['tol'])
        return self.handle(**options)

    def handle(self, **options):
        raise NotImplementedError()

    def progress_start(self, max_value, label):
        """Show a bar counting label, one step per solved item."""
        if self.progress_enabled:
            self.progress = progressbar.ProgressBar(
                max_value=max_value,
                widgets=['%s: ' % label, progressbar.SimpleProgress(), ' ',
                         progressbar.Bar(), ' ', progressbar.ETA()],
            ).start()

    def progress_update(self, value):
        """Update progress bar."""
        if self.progress:
            self.progress.update(value)

    def progress_finish(self):
        """Finalize progress bar."""
        if self.progress:
            self.progress.finish()
            self.progress = None

    def output_path(self, options):
        return options.get('out') or os.path.join(settings.DATA_DIR,
                                                  self.default_output)

    def load(self, path):
        try:
            return load_measure_spec(path)
        except FileNotFoundError:
            raise CommandError('no such file: %s' % path)

    def load_measure(self, path):
        measure = self.load(path)
        if isinstance(measure, GeneratingPair):
            raise CommandError('%s describes a generating pair, expected a '
                               'measure' % path)
        return measure

    def load_pair(self, path):
        pair = self.load(path)
        if not isinstance(pair, GeneratingPair):
            raise CommandError('%s describes a measure, expected a '
                               'generating pair' % path)
        return pair

    def write_measure(self, measure, path):
        """Measure spec, or plot data when path ends with .csv."""
        if path.endswith('.csv'):
            return self.write_plot_data(measure, path)
        return self.writer.write_text(path, dump_measure_spec(measure))

    def write_plot_data(self, report, path):
        return self.writer.write_rows(path, *plot_rows(report))

    def write_table(self, path, header, rows):
        return self.writer.write_rows(path, header, [
            [_cell(value) for value in row] for row in rows])


def _cell(value):
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))
