"""
Diagnostics for the library. Nothing here writes to stdout, which belongs to
the command output (verdicts, summaries, reports). Run any command with the
--debug flag to see the library's decisions on stderr.
"""

import logging
import sys

from .config import Config

config = Config()

logger = logging.getLogger('bohreq')
logger.addHandler(logging.NullHandler())

handler = None


def init_print():
    """attaches the stderr handler"""
    global handler
    if handler is None:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter('%(levelname)s %(name)s: %(message)s'))
        logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if config.debug else logging.WARNING)


def debug_print(*args, sep=' '):
    """
    simulates the behavior of __builtins__.print but sends it to the logger.
    ignored unless debug logging is enabled.
    """
    if logger.isEnabledFor(logging.DEBUG):
        logger.debug(sep.join(map(str, args)))


def warn_print(*args, sep=' '):
    """same as debug_print, at warning level"""
    logger.warning(sep.join(map(str, args)))


def end_print():
    """detaches the stderr handler"""
    global handler
    if handler is not None:
        logger.removeHandler(handler)
        handler = None
