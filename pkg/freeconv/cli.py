"""
Command line entry point.

Exit codes: 0 on success, 2 on usage errors (unknown command, bad flags,
invalid specs), 3 on numerical failures and I/O errors.
"""

import logging
import sys
from dataclasses import dataclass

from .artifacts import ArtifactWriter, plot_rows
from .commands import COMMANDS
from .exceptions import CommandError, NumericalFailure

logger = logging.getLogger('freeconv')

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FAILURE = 3

VERBOSITY_LEVELS = {0: logging.WARNING, 1: logging.INFO, 2: logging.DEBUG}


@dataclass(frozen=True)
class CommandOutcome:
    exit_code: int
    artifacts: tuple = ()


def usage():
    lines = ['usage: freeconv COMMAND [options]', '', 'commands:']
    for command in COMMANDS:
        summary = command.help.splitlines()[0] if command.help else ''
        lines.append('  %-16s %s' % (command.name, summary))
    return '\n'.join(lines)


def _verbosity(argv):
    """--verbosity value of argv, before argparse sees it."""
    for i, arg in enumerate(argv):
        value = None
        if arg == '--verbosity' and i + 1 < len(argv):
            value = argv[i + 1]
        elif arg.startswith('--verbosity='):
            value = arg.split('=', 1)[1]
        if value in ('0', '1', '2'):
            return int(value)
    return 1


def emit_plot_data(report, path, writer=None):
    """Write the CSV plot data of a measure, sweep or degenerate report."""
    writer = writer or ArtifactWriter()
    try:
        return CommandOutcome(EXIT_OK, (writer.write_rows(
            path, *plot_rows(report)),))
    except OSError as e:
        logger.error('cannot write %s: %s', path, e)
        return CommandOutcome(EXIT_FAILURE)


def run_command(argv, writer=None):
    """Run the command named by argv[0] and return its CommandOutcome."""
    argv = list(argv)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter('%(levelname)s %(message)s'))
    logger.addHandler(handler)
    previous = logger.level
    logger.setLevel(VERBOSITY_LEVELS[_verbosity(argv)])
    try:
        return _run(argv, writer)
    finally:
        logger.removeHandler(handler)
        logger.setLevel(previous)


def _run(argv, writer):
    commands = dict((command.name, command) for command in COMMANDS)
    if not argv or argv[0] not in commands:
        if argv and argv[0] in ('-h', '--help'):
            sys.stdout.write(usage() + '\n')
            return CommandOutcome(EXIT_OK)
        logger.error('unknown command %r', argv[0] if argv else '')
        sys.stderr.write(usage() + '\n')
        return CommandOutcome(EXIT_USAGE)

    command = commands[argv[0]](writer)
    try:
        artifacts = command.run_from_argv(argv[1:])
    except SystemExit as e:
        # argparse exits 0 on --help and 2 on bad flags
        return CommandOutcome(e.code or EXIT_OK)
    except CommandError as e:
        logger.error('%s: %s', command.name, e)
        return CommandOutcome(e.returncode)
    except NumericalFailure as e:
        logger.error('%s failed: %s', command.name, e)
        residuals = getattr(e, 'residuals', None)
        if residuals:
            logger.error('residual history: %s', ', '.join(
                '%.3g' % r for r in residuals[-10:]))
        return CommandOutcome(EXIT_FAILURE)
    except OSError as e:
        logger.error('%s: %s', command.name, e)
        return CommandOutcome(EXIT_FAILURE)
    except ValueError as e:
        logger.error('%s: %s', command.name, e)
        return CommandOutcome(EXIT_USAGE)
    return CommandOutcome(EXIT_OK, tuple(artifacts))


def main():
    sys.exit(run_command(sys.argv[1:]).exit_code)
