import argparse

APPROX_KINDS = ('free', 'adjusted', 'presented', 'orbit')


def _add_instance(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        '--instance', '-i',
        required=True,
        help='JSON instance file with the group and the function. See docs/formats.md.',
    )


def _add_radius(parser: argparse.ArgumentParser, default: int = 4) -> None:
    parser.add_argument(
        '--radius', '-r',
        type=int,
        default=default,
        help=(
            'Radius of the balls scanned where the result cannot be computed '
            f'over the whole group. Defaults to {default}.'
        ),
    )


def _add_output(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        '--out', '-o',
        help='Write the JSON report here instead of to stdout.',
    )
    parser.add_argument(
        '--table',
        action='store_true',
        help='Also print a summary table.',
    )


def _add_approx_options(parser: argparse.ArgumentParser) -> None:
    _add_instance(parser)
    _add_radius(parser)
    _add_output(parser)
    parser.add_argument(
        '--seed',
        type=int,
        help='Seed for instances whose function is drawn at random.',
    )
    parser.add_argument(
        '--seeds',
        help=(
            'Sweep over seeds instead, e.g. 1..100 or 1,5,9. '
            'Only instances with a random function can be swept.'
        ),
    )
    parser.add_argument(
        '--csv',
        help='Write one row per seed (seed,delta_hat,bound,achieved,pass) to this file.',
    )
    parser.add_argument(
        '--values',
        help='Comma separated generator values for the adjusted approximant, e.g. "1/2,-1".',
    )
    parser.add_argument(
        '--eta',
        default='0',
        help='Allowed distance of --values from the mean growth constants. Defaults to 0.',
    )


def create_parser() -> argparse.ArgumentParser:
    """
    Create the parser used to process command-line input.
    """
    parser = argparse.ArgumentParser(
        prog='invlip',
        description='Invariant approximants of almost-invariant Lipschitz functions on groups',
    )
    parser.add_argument(
        '--version',
        action='store_true',
        help='Show version information and exit'
    )
    parser.add_argument(
        '--verbose', '-v',
        action='store_true',
        help='Show tracebacks and debug statements',
    )
    parser.add_argument(
        '--max-ball',
        type=int,
        help=(
            'Largest number of group elements to enumerate in a ball or a '
            'finite Cayley closure. Overrides INVLIP_MAX_BALL.'
        ),
    )
    parser.add_argument(
        '--workers', '-j',
        type=int,
        default=1,
        help='Number of processes used for seed sweeps.',
    )

    subparsers = parser.add_subparsers(dest='subparser')

    approx = subparsers.add_parser(
        'approx',
        help='Build an invariant approximant and certify its error bound.',
    )
    approx.add_argument(
        'kind',
        choices=APPROX_KINDS,
        help=(
            'free: homomorphism from the mean growth on a free group. '
            'adjusted: homomorphism with given generator values. '
            'presented: kernel-projected homomorphism on a finitely presented group. '
            'orbit: orbit collapse on a finite action space.'
        ),
    )
    _add_approx_options(approx)
    for kind in ('free', 'presented', 'orbit'):
        alias = subparsers.add_parser(
            f'approx-{kind}',
            help=f'Same as approx {kind}.',
        )
        _add_approx_options(alias)

    growth = subparsers.add_parser(
        'mean-growth',
        help='Compute the mean growth constants c+, c- and c along a direction.',
    )
    _add_instance(growth)
    _add_radius(growth)
    _add_output(growth)
    growth.add_argument(
        '--direction', '-s',
        required=True,
        help='The direction as a word, e.g. "a" or "a b^-1".',
    )
    growth.add_argument(
        '--base', '-x',
        default='e',
        help='The base point as a word. Defaults to the identity.',
    )

    kernel = subparsers.add_parser(
        'kernel-project',
        help='Find the nearest point of ker A to x in the sup norm.',
    )
    kernel.add_argument(
        '--matrix', '-A',
        required=True,
        help='JSON file holding the rows of A.',
    )
    kernel.add_argument(
        '--vector', '-x',
        required=True,
        help='JSON file holding x.',
    )
    kernel.add_argument(
        '--oracle',
        action='store_true',
        help='Also solve by vertex enumeration and fail if the answers differ.',
    )
    _add_output(kernel)

    qm = subparsers.add_parser(
        'qm',
        help='Compute quasimorphism defects and check the partial quasimorphism implications.',
    )
    _add_instance(qm)
    _add_radius(qm, default=3)
    _add_output(qm)
    qm.add_argument(
        '--delta', '-d',
        help=(
            'The delta to test the implications at. '
            'Defaults to the instance delta, then to the measured two-sided defect.'
        ),
    )
    qm.add_argument(
        '--lenient',
        action='store_true',
        help=(
            'Accept metrics that are not right invariant. Only the implications '
            'that hold for left-invariant metrics are checked.'
        ),
    )

    check = subparsers.add_parser(
        'check',
        help='Re-evaluate the witnesses in a report and confirm they reproduce its values.',
    )
    check.add_argument(
        '--report',
        required=True,
        help='A JSON report written by approx, mean-growth or qm.',
    )
    _add_instance(check)

    suite = subparsers.add_parser(
        'suite',
        help='Run the acceptance checks and print a summary.',
    )
    suite.add_argument(
        '--config', '--cfg',
        help='YAML file with settings merged over the packaged suite configuration.',
    )
    suite.add_argument(
        '--seeds',
        help='Seed selection used by every check, e.g. 1..100.',
    )
    suite.add_argument(
        '--only',
        action='append',
        help='Run only this check. Can be repeated.',
    )
    suite.add_argument(
        '--determinism',
        action='store_true',
        help='Run again with a single worker and fail unless the reports are identical.',
    )
    suite.add_argument(
        '--out', '-o',
        help='Write the JSON results here.',
    )
    return parser
