from core.config import PROFILES, THEOREMS, RunConfig
from core.errors import SpecError, WorkbenchError
from core.managers.logger_manager import logger_manager
from core.runner import run_verification
from core.spec_parser import split_ideal_texts
from typing import Optional, Sequence
import argparse
import asyncio
import sys

class ArgumentParser(argparse.ArgumentParser):
    """ArgumentParser raising SpecError so bad flags map to exit code 3."""
    def error(self, message: str):
        raise SpecError(message)

def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog='multicomm', description='Exact verification of multiple commutator formulas over finite rings.')
    subparsers = parser.add_subparsers(dest='command', required=True)

    verify = subparsers.add_parser('verify', help='Verify a commutator formula and write a JSON report.')
    verify.add_argument('--ring', default='', help='Ring, for example "Z/8", "Z/2[x]/(x^3)", "UT2(Z/2)".')
    verify.add_argument('--ideals', default='', help='Comma separated ideals, for example "(2),(2)".')
    verify.add_argument('--n', type=int, default=3, help='Matrix size, 3 or 4.')
    verify.add_argument('--theorem', default='generalized', choices=THEOREMS)
    verify.add_argument('--tree', default=None, help='Bracket tree, for example "[[0,1],2]".')
    verify.add_argument('--slots', default=None, help='Slot kinds, for example "E,GL,GL".')
    verify.add_argument('--cap-members', type=int, default=None, help='Largest subgroup materialized.')
    verify.add_argument('--seed', type=int, default=0)
    verify.add_argument('--samples', type=int, default=10000, help='Sample count of the lemma suite.')
    verify.add_argument('--json', dest='json_path', default=None, help='Report path.')
    verify.add_argument('--log-dir', default='logs')
    verify.add_argument('--timings', action='store_true', help='Include elapsed milliseconds in the report.')
    verify.add_argument('--workers', type=int, default=1)

    profile = verify.add_mutually_exclusive_group()
    profile.add_argument('--quick', action='store_const', dest='profile', const='quick')
    profile.add_argument('--flagship', action='store_const', dest='profile', const='flagship')
    verify.set_defaults(profile=PROFILES[0])

    return parser

def parse_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """Parse command line arguments into a RunConfig.

    Raises
    ------
    SpecError
        On unknown or malformed flags
    """
    args = build_parser().parse_args(argv)

    return RunConfig(
        ring=args.ring,
        ideals=split_ideal_texts(args.ideals) if args.ideals else [],
        n=args.n,
        theorem=args.theorem,
        tree=args.tree,
        slots=args.slots,
        cap_members=args.cap_members,
        seed=args.seed,
        json_path=args.json_path,
        profile=args.profile,
        log_dir=args.log_dir,
        timings=args.timings,
        workers=args.workers,
        samples=args.samples,
    )

async def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = parse_args(argv)
    except WorkbenchError as error:
        print(f'error: {error}', file=sys.stderr)
        return error.exit_code

    # start loggers
    await logger_manager.setup_logger_verification(config.log_dir)
    await logger_manager.setup_logger_lemmas(config.log_dir)

    report = await run_verification(config)

    for verdict in report.verdicts:
        print(f'{verdict.status:<26} {verdict.ring:<14} {verdict.claim}')
    for check in report.lemma_checks:
        print(f'{check.status:<26} {check.name} ({check.checked} checked)')
    if report.error:
        print(f'error: {report.error}', file=sys.stderr)

    # shut down loggers
    await logger_manager.shutdown()

    return report.exit_code

if __name__ == '__main__':
    sys.exit(asyncio.run(main()))
