"""Output files of the commands."""

import csv
import io
import logging
import os
import tempfile

from .harness import DegenerateReport, SweepReport
from .measures import FiniteMeasure
from .specs import MEASURE_CSV_HEADER, measure_rows

SWEEP_HEADER = ('n', 'delta', 'levy', 'bound', 'ratio')
DEGENERATE_HEADER = ('n', 'eta1', 'eta2', 'eta3', 'levy', 'bound')


class ArtifactWriter(object):

    """Write files atomically: temporary file first, then rename."""

    def write_text(self, path, text):
        """Write text to path, creating missing directories."""
        logger = logging.getLogger('freeconv')

        directory = os.path.dirname(os.path.abspath(path))
        if not os.path.exists(directory):
            logger.info('Creating %s', directory)
            os.makedirs(directory)

        descriptor, temporary = tempfile.mkstemp(
            dir=directory, prefix='.freeconv-', suffix='.tmp')
        try:
            with os.fdopen(descriptor, 'w', encoding='utf-8',
                           newline='') as f:
                f.write(text)
            os.replace(temporary, path)
        except BaseException:
            if os.path.exists(temporary):
                os.unlink(temporary)
            raise

        logger.info('Wrote %s', path)
        return path

    def write_rows(self, path, header, rows):
        """Write a CSV file with a header row."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(header)
        writer.writerows(rows)
        return self.write_text(path, buffer.getvalue())


def _number(value):
    return repr(float(value))


def plot_rows(report):
    """Header and rows of the CSV plot data of a measure or report."""
    if isinstance(report, FiniteMeasure):
        return MEASURE_CSV_HEADER, measure_rows(report)
    if isinstance(report, SweepReport):
        return SWEEP_HEADER, [
            (str(row.n), _number(row.delta), _number(row.levy),
             _number(row.bound), _number(row.ratio)) for row in report.rows]
    if isinstance(report, DegenerateReport):
        report = [report]
    reports = list(report)
    if not all(isinstance(r, DegenerateReport) for r in reports):
        raise TypeError('no plot data for %r' % (report,))
    return DEGENERATE_HEADER, [
        (str(r.n), _number(r.eta1), _number(r.eta2), _number(r.eta3),
         _number(r.levy_to_delta0), _number(r.bound)) for r in reports]
