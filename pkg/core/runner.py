"""Module that turns a RunConfig into verification cases, runs them and builds the report.

Cases are independent callables pushed onto the verdict processor; the
runner only plans, collects and logs.
"""
import asyncio
from dataclasses import replace
from functools import partial
from typing import Callable
from core.commutator_calculus import FuzzResult
from core.config import PROFILES, THEOREMS, RunConfig
from core.errors import NOT_VERIFIED, CapExceededError, SpecError, WorkbenchError
from core.lemma_checks import run_lemma_suite
from core.managers.logger_manager import logger_manager
from core.matrix_group import KEY_LIMIT
from core.processors.verdict_processor import verdict_processor
from core.report import VerifyReport, write_report
from core.ring_core import build_ring
from core.spec_parser import parse_ideals, parse_ring_spec, parse_slots, parse_tree
from core.theorem_verifier import (
    SlotSpec, VerdictRecord, enumerate_bracketings, single_elementary_placements, standard_form,
    verify_arrangements, verify_generalized, verify_multiple, verify_standard, verify_tree, verify_triple
)

QUICK_ORDER = 8

# ring, ideals, theorem; every ring of order at most QUICK_ORDER
QUICK_ZOO = (
    ('Z/4', ('(2)',), 'standard'),
    ('Z/4', ('(2)', '(2)'), 'generalized'),
    ('Z/8', ('(2)', '(2)'), 'generalized'),
    ('Z/8', ('(2)', '(4)'), 'generalized'),
    ('Z/8', ('(2)', '(2)', '(2)'), 'triple'),
    ('Z/2[x]/(x^2)', ('(x)', '(x)'), 'generalized'),
    ('Z/2 x Z/2', ('((1,0))', '((0,1))'), 'generalized'),
    ('UT2(Z/2)', ('(E12)', '(E12)'), 'generalized'),
    ('Z/4', ('(2)', '(2)'), 'lemmas'),
)

FLAGSHIP = ('Z/16', ('(2)', '(2)', '(2)'), 'triple')

# theorem -> (smallest, largest) number of ideals
IDEAL_COUNTS = {
    'standard': (1, 1),
    'generalized': (2, 2),
    'triple': (3, 3),
    'multiple': (2, 5),
    'arrangements': (2, 5),
    'lemmas': (1, 2),
}

Case = Callable[[], list]

def _largest_packable_order(n: int) -> int:
    order = 2
    while (order + 1) ** (n * n) <= KEY_LIMIT:
        order += 1
    return order

def plan_cases(config: RunConfig) -> list[Case]:
    """Return the cases of a run in report order.

    Raises
    ------
    SpecError
        On an unknown theorem or profile, a bad dimension, or the wrong number of ideals,
        or n = 4 over a ring too large for packed matrix keys
    ParseError
        On malformed ring, ideal, tree or slot text
    CapExceededError
        If the ring is larger than the caps allow
    """
    if config.theorem not in THEOREMS:
        raise SpecError(f'unknown theorem {config.theorem!r}, expected one of {", ".join(THEOREMS)}')
    if config.profile not in PROFILES:
        raise SpecError(f'unknown profile {config.profile!r}')

    if not config.ring:
        if config.profile == 'quick':
            return [case for ring, ideals, theorem in QUICK_ZOO for case in plan_cases(replace(config, ring=ring, ideals=list(ideals), theorem=theorem))]
        if config.profile == 'flagship':
            ring, ideals, theorem = FLAGSHIP
            return plan_cases(replace(config, ring=ring, ideals=list(ideals), theorem=theorem, profile='default'))
        raise SpecError('--ring is required unless --quick or --flagship is given')

    if not 3 <= config.n <= 4:
        raise SpecError(f'n must be 3 or 4, got {config.n}')

    caps = config.caps
    ring = build_ring(parse_ring_spec(config.ring), caps.ring_order)

    if config.profile == 'quick' and ring.order > QUICK_ORDER:
        raise CapExceededError('quick profile ring order', QUICK_ORDER, ring.order)

    # matrix keys pack n*n entries base |A| into one int64
    if ring.order ** (config.n * config.n) > KEY_LIMIT:
        raise SpecError(
            f'n={config.n} needs a ring of order at most {_largest_packable_order(config.n)}, '
            f'{ring.spec} has order {ring.order}'
        )

    ideals = parse_ideals(','.join(config.ideals), ring) if config.ideals else []
    low, high = IDEAL_COUNTS[config.theorem]

    if not low <= len(ideals) <= high:
        raise SpecError(f'theorem {config.theorem} takes {low}..{high} ideals, got {len(ideals)}')

    n = config.n
    theorem = config.theorem

    if theorem == 'standard':
        return [partial(verify_standard, ring, ideals[0], n, caps)]
    if theorem == 'generalized':
        return [lambda: [verify_generalized(ring, ideals[0], ideals[1], n, caps)]]
    if theorem == 'triple':
        return [lambda: [verify_triple(ring, *ideals, n, caps)]]
    if theorem == 'lemmas':
        return [partial(run_lemma_suite, ring, ideals, n, config.samples, config.seed, caps)]

    m = len(ideals) - 1

    if theorem == 'multiple':
        if config.slots is None:
            return [lambda: [verify_multiple(ring, ideals, n, caps)]]
        slots = SlotSpec(tuple(ideals), parse_slots(config.slots, m + 1))
        return [lambda: [verify_tree(standard_form(m), slots, n, caps, 'multiple')]]

    trees = [parse_tree(config.tree)] if config.tree else enumerate_bracketings(m)
    placements = [parse_slots(config.slots, m + 1)] if config.slots else single_elementary_placements(m)

    if any(len(tree.leaves()) != m + 1 for tree in trees):
        raise SpecError(f'tree {config.tree} does not have {m + 1} leaves')

    # one case per tree and placement so workers can share the load
    return [partial(verify_arrangements, ring, ideals, n, [tree], [kinds], caps) for tree in trees for kinds in placements]

def exit_code_for(report: VerifyReport, errors: list[WorkbenchError]) -> int:
    """3 on a config error, else 1 on any mismatch, else 2 on anything not verified, else 0."""
    codes = {error.exit_code for error in errors}

    if 3 in codes:
        return 3
    if 1 in codes or any(v.status == 'mismatch' for v in report.verdicts) or any(c.failed for c in report.lemma_checks):
        return 1
    if 2 in codes or any(v.status == NOT_VERIFIED for v in report.verdicts) or any(c.not_verified for c in report.lemma_checks):
        return 2

    return 0

async def _log_results(report: VerifyReport) -> None:
    for verdict in report.verdicts:
        payload = {
            'type': 'INFO' if verdict.status != 'mismatch' else 'WARNING',
            'message': 'Verdict.',
            'theorem': verdict.theorem,
            'claim': verdict.claim,
            'ring': verdict.ring,
            'ideals': verdict.ideals,
            'tree': verdict.tree,
            'status': verdict.status,
            'lhs_order': verdict.lhs_order,
            'rhs_order': verdict.rhs_order,
            'degenerate': verdict.degenerate,
            'elapsed_ms': verdict.elapsed_ms,
        }
        if verdict.status == 'mismatch':
            await logger_manager.verification.warning(payload)
        else:
            await logger_manager.verification.info(payload)

    for check in report.lemma_checks:
        payload = {'type': 'WARNING' if check.failed else 'INFO', 'message': 'Lemma check.', **check.to_report()}
        if not check.failed:
            await logger_manager.lemmas.info(payload)
        else:
            await logger_manager.lemmas.warning(payload)

async def run_verification(config: RunConfig) -> VerifyReport:
    """Plan, run and report one verification run.

    Loggers must be set up before the call.  The report is written to
    config.json_path when one is given, also when planning failed.

    Returns
    -------
    VerifyReport
        Report with exit_code set per the exit-code contract
    """
    report = VerifyReport(config)
    await logger_manager.verification.info({'type': 'INFO', 'message': 'Run started.', 'config': config.render()})

    try:
        cases = plan_cases(config)
    except WorkbenchError as error:
        report.error = str(error)
        report.exit_code = error.exit_code
        await logger_manager.verification.error({'type': 'ERROR', 'message': report.error, 'exit_code': report.exit_code})
        if config.json_path:
            await write_report(report, config.json_path)
        return report

    task = asyncio.create_task(verdict_processor.run(config.workers))
    await verdict_processor.started()

    for index, case in enumerate(cases):
        await verdict_processor.process(index, case)

    await verdict_processor.join()
    results = verdict_processor.results()
    await verdict_processor.shutdown()
    await task

    errors = []

    for items, error in results:
        if error is not None:
            errors.append(error)
            report.error = report.error or str(error)
        report.verdicts += [item for item in items if isinstance(item, VerdictRecord)]
        report.lemma_checks += [item for item in items if isinstance(item, FuzzResult)]

    report.exit_code = exit_code_for(report, errors)
    await _log_results(report)
    await logger_manager.verification.info({'type': 'INFO', 'message': 'Run finished.', **report.totals()})

    if config.json_path:
        await write_report(report, config.json_path)

    return report
