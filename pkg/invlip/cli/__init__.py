"""
Module to define the command-line interface for invariant approximants.

Once installed, this can be invoked simply by using the ``invlip`` command.
It can also be run via ``python -m invlip`` from the repository root if you
have not or cannot install it.

Exit codes are 0 when every check passed, 1 when a bound or certificate
failed or the run errored, and 2 for unusable input files or arguments.
"""
import argparse
import logging

from ..exceptions import CertificationError, InstanceError
from .parser import create_parser

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_BAD_INPUT = 2


def entrypoint() -> int:
    """
    This is the function called when you run ``invlip``
    """
    return main(create_parser().parse_args())


def main(args: argparse.Namespace) -> int:
    """
    Given some arguments, run the command-line program.

    This outer function exists only to handle uncaught exceptions.
    """
    try:
        return _main(args)
    except InstanceError as exc:
        if args.verbose:
            raise
        print(exc)
        return EXIT_BAD_INPUT
    except CertificationError as exc:
        if args.verbose:
            raise
        logger.error('%s', exc)
        witness = getattr(exc.report, 'witness', None)
        if witness is not None:
            logger.error('Witness: %s', witness)
        return EXIT_FAILED
    except Exception as exc:
        if args.verbose:
            raise
        print(exc)
        return EXIT_FAILED


def _main(args: argparse.Namespace) -> int:
    """
    Given some arguments, run the command-line program.

    This inner function does some setup and then defers to the more specific
    helper function as needed.
    """
    if args.version:
        from ..version import version
        print(version)
        return EXIT_OK
    if args.verbose:
        logging.basicConfig(level=logging.DEBUG)
    else:
        logging.basicConfig(
            level=logging.INFO,
            format='%(levelname)s: %(message)s',
        )
    if args.max_ball is not None:
        from ..config import set_max_ball
        set_max_ball(args.max_ball)
    from ..config import set_workers
    set_workers(args.workers)
    if args.subparser is None:
        create_parser().print_help()
        return EXIT_BAD_INPUT
    from .run_config import RunConfig, run
    return run(RunConfig.from_args(args))
