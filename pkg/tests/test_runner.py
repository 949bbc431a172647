"""Tests for planning, running and reporting verification runs, and for the command line entry point."""
import asyncio
import json
import pytest
from core.commutator_calculus import FuzzResult
from core.config import RunConfig
from core.errors import NOT_VERIFIED, CapExceededError, CaseFailure, MathematicalMismatch, SpecError
from core.managers.logger_manager import logger_manager
from core.processors.verdict_processor import verdict_processor
from core.report import VERSION, VerifyReport
from core.runner import QUICK_ZOO, exit_code_for, plan_cases, run_verification
from core.theorem_verifier import VerdictRecord
from multicomm import main


def verdict(status: str) -> VerdictRecord:
    return VerdictRecord('generalized', 'claim', 'Z/4', [['0', '2']], 3, '[0,1]', ['E', 'GL'], status=status)


# ============================================================================
# Planning
# ============================================================================


class TestPlan:

    def test_generalized(self) -> None:
        assert len(plan_cases(RunConfig(ring='Z/4', ideals=['(2)', '(2)']))) == 1

    def test_arrangements_split_per_case(self) -> None:
        config = RunConfig(ring='Z/8', ideals=['(2)', '(2)', '(2)'], theorem='arrangements')
        assert len(plan_cases(config)) == 6

    def test_arrangements_with_tree_and_slots(self) -> None:
        config = RunConfig(ring='Z/8', ideals=['(2)', '(2)', '(2)'], theorem='arrangements', tree='[0,[1,2]]', slots='GL,E,GL')
        assert len(plan_cases(config)) == 1

    def test_quick_zoo(self) -> None:
        assert len(plan_cases(RunConfig(profile='quick'))) == len(QUICK_ZOO)

    def test_dimension_four_rings(self) -> None:
        assert len(plan_cases(RunConfig(ring='Z/8', ideals=['(2)', '(2)'], n=4))) == 1
        with pytest.raises(SpecError) as raised:
            plan_cases(RunConfig(ring='Z/16', ideals=['(2)', '(2)'], n=4))
        assert 'at most 15' in str(raised.value)

    def test_quick_rejects_large_rings(self) -> None:
        with pytest.raises(CapExceededError):
            plan_cases(RunConfig(ring='Z/16', ideals=['(2)', '(2)'], profile='quick'))

    @pytest.mark.parametrize('config', [
        RunConfig(),
        RunConfig(ring='Z/4', ideals=['(2)']),
        RunConfig(ring='Z/4', ideals=['(2)', '(2)'], n=5),
        RunConfig(ring='Z/4', ideals=['(2)', '(2)'], theorem='mystery'),
        RunConfig(ring='Z/8', ideals=['(2)', '(2)', '(2)'], theorem='arrangements', tree='[0,1]'),
        RunConfig(ring='Z/8', ideals=['(2)', '(2)'], theorem='multiple', slots='GL,GL,E'),
    ])
    def test_config_errors(self, config: RunConfig) -> None:
        with pytest.raises(SpecError):
            plan_cases(config)


class TestExitCode:

    def test_clean(self) -> None:
        assert exit_code_for(VerifyReport(RunConfig(), [verdict('verified')]), []) == 0

    def test_priority(self) -> None:
        report = VerifyReport(RunConfig(), [verdict('verified'), verdict(NOT_VERIFIED), verdict('mismatch')])
        assert exit_code_for(report, []) == 1
        assert exit_code_for(report, [SpecError('bad')]) == 3

    def test_not_verified(self) -> None:
        assert exit_code_for(VerifyReport(RunConfig(), [verdict(NOT_VERIFIED)]), []) == 2
        assert exit_code_for(VerifyReport(RunConfig()), [CapExceededError('closure', 16, 17)]) == 2

    def test_lemma_failures(self) -> None:
        report = VerifyReport(RunConfig(), lemma_checks=[FuzzResult('group-identities', 10, 1, 'x')])
        assert exit_code_for(report, []) == 1
        assert exit_code_for(VerifyReport(RunConfig()), [MathematicalMismatch('no')]) == 1

    def test_capped_lemma(self) -> None:
        report = VerifyReport(RunConfig(), lemma_checks=[FuzzResult.capped('suslin-generators', 'closure: cap 16 exceeded')])
        assert exit_code_for(report, []) == 2
        assert report.totals()['lemma_not_verified'] == 1
        assert report.totals()['lemma_failures'] == 0

    def test_case_failure(self) -> None:
        assert exit_code_for(VerifyReport(RunConfig(), [verdict(NOT_VERIFIED)]), [CaseFailure(ValueError('boom'))]) == 1


# ============================================================================
# Runs
# ============================================================================


class TestRun:

    async def test_generalized_report(self, loggers) -> None:
        path = loggers / 'out' / 'report.json'
        report = await run_verification(RunConfig(ring='Z/4', ideals=['(2)', '(2)'], json_path=str(path)))
        assert report.exit_code == 0

        data = json.loads(path.read_text(encoding='utf-8'))
        assert data['version'] == VERSION
        assert data['config']['ring'] == 'Z/4'
        assert data['totals']['verified'] == 1
        assert data['totals']['exit_code'] == 0
        assert data['verdicts'][0]['status'] == 'verified'
        assert data['verdicts'][0]['degenerate'] is True
        assert 'elapsed_ms' not in data['verdicts'][0]
        assert 'error' not in data

    async def test_timings(self, loggers) -> None:
        report = await run_verification(RunConfig(ring='Z/4', ideals=['(2)', '(2)'], timings=True))
        assert 'elapsed_ms' in report.to_report()['verdicts'][0]

    async def test_standard(self, loggers) -> None:
        report = await run_verification(RunConfig(ring='Z/4', ideals=['(2)'], theorem='standard'))
        assert report.exit_code == 0
        assert len(report.verdicts) == 2

    async def test_zero_ring(self, loggers) -> None:
        path = loggers / 'report.json'
        report = await run_verification(RunConfig(ring='Z/1', ideals=['(0)', '(0)'], json_path=str(path)))
        assert report.exit_code == 3
        assert 'position 0' in json.loads(path.read_text(encoding='utf-8'))['error']

    async def test_member_cap(self, loggers) -> None:
        report = await run_verification(RunConfig(ring='Z/8', ideals=['(2)', '(2)'], cap_members=16))
        assert report.exit_code == 2
        assert report.verdicts[0].status == NOT_VERIFIED

    async def test_lemmas(self, loggers) -> None:
        report = await run_verification(RunConfig(ring='Z/4', ideals=['(2)', '(2)'], theorem='lemmas', samples=100))
        assert report.exit_code == 0
        assert report.lemma_checks
        assert not report.verdicts

    async def test_workers_keep_case_order(self, loggers) -> None:
        config = RunConfig(ring='Z/8', ideals=['(2)', '(2)', '(2)'], theorem='arrangements', workers=3)
        report = await run_verification(config)
        assert report.exit_code == 0
        assert [(v.tree, ''.join(s[0] for s in v.slots)) for v in report.verdicts] == [
            ('[[0,1],2]', 'EGG'), ('[[0,1],2]', 'GEG'), ('[[0,1],2]', 'GGE'),
            ('[0,[1,2]]', 'EGG'), ('[0,[1,2]]', 'GEG'), ('[0,[1,2]]', 'GGE'),
        ]

    async def test_runs_back_to_back(self, loggers) -> None:
        config = RunConfig(ring='Z/4', ideals=['(2)', '(2)'])
        first = await run_verification(config)
        second = await run_verification(config)
        assert first.to_report() == second.to_report()

    async def test_logs_written(self, loggers) -> None:
        await run_verification(RunConfig(ring='Z/4', ideals=['(2)', '(2)']))
        await logger_manager.shutdown()
        lines = (loggers / 'verification.log').read_text(encoding='utf-8').splitlines()
        entries = [json.loads(line) for line in lines]
        messages = [entry.get('msg', entry)['message'] for entry in entries]
        assert 'Run started.' in messages
        assert 'Verdict.' in messages
        assert messages[-1] == 'Verification logger shutdown.'

    async def test_unexpected_error_in_case(self, loggers) -> None:
        def broken() -> list:
            raise ValueError('boom')

        task = asyncio.create_task(verdict_processor.run(1))
        await verdict_processor.started()
        await verdict_processor.process(0, broken)
        await verdict_processor.process(1, lambda: ['done'])
        await asyncio.wait_for(verdict_processor.join(), 5)
        results = verdict_processor.results()
        await verdict_processor.shutdown()
        await task

        items, error = results[0]
        assert items == []
        assert isinstance(error, CaseFailure)
        assert error.exit_code == 1
        assert isinstance(error.cause, ValueError)
        assert results[1] == (['done'], None)

    async def test_unexpected_error_reported(self, loggers, monkeypatch) -> None:
        def broken() -> list:
            raise IndexError('index 9 is out of bounds')

        monkeypatch.setattr('core.runner.plan_cases', lambda config: [broken])
        path = loggers / 'report.json'
        report = await asyncio.wait_for(run_verification(RunConfig(ring='Z/4', ideals=['(2)', '(2)'], json_path=str(path))), 5)
        assert report.exit_code == 1
        assert 'IndexError' in json.loads(path.read_text(encoding='utf-8'))['error']

    @pytest.mark.slow
    async def test_quick_profile_reports_identical(self, loggers) -> None:
        first = loggers / 'first.json'
        second = loggers / 'second.json'
        await run_verification(RunConfig(profile='quick', samples=500, json_path=str(first)))
        await run_verification(RunConfig(profile='quick', samples=500, json_path=str(second), workers=3))
        assert first.read_bytes() == second.read_bytes()

    @pytest.mark.slow
    async def test_quick_profile(self, loggers) -> None:
        report = await run_verification(RunConfig(profile='quick', samples=500))
        assert report.exit_code == 0
        assert len(report.verdicts) == 9

    @pytest.mark.slow
    async def test_flagship_profile(self, loggers) -> None:
        report = await run_verification(RunConfig(profile='flagship'))
        assert report.exit_code == 0
        assert not report.verdicts[0].degenerate


# ============================================================================
# Command line
# ============================================================================


class TestMain:

    async def test_bad_flag(self, capsys) -> None:
        assert await main(['verify', '--bogus']) == 3
        assert 'error:' in capsys.readouterr().err

    async def test_verify(self, tmp_path, capsys) -> None:
        path = tmp_path / 'report.json'
        code = await main([
            'verify', '--ring', 'Z/4', '--ideals', '(2),(2)', '--json', str(path), '--log-dir', str(tmp_path / 'logs')
        ])
        assert code == 0
        assert path.exists()
        assert 'verified' in capsys.readouterr().out
        assert (tmp_path / 'logs' / 'lemmas.log').exists()
