"""JSON report of a verification run."""
import json
import os
from dataclasses import dataclass, field
from typing import Optional
import aiofiles
from core.commutator_calculus import FuzzResult
from core.config import RunConfig
from core.theorem_verifier import VerdictRecord

VERSION = '1.0.0'

@dataclass
class VerifyReport:
    """Everything a run produced.

    Attributes
    ----------
    config : RunConfig
        Configuration the run was started with
    verdicts : list[VerdictRecord]
        Theorem records in case order
    lemma_checks : list[FuzzResult]
        Lemma suite results in check order
    error : str, optional
        Message of the error that stopped the run
    exit_code : int
        0 verified, 1 mismatch, 2 not verified at this scale, 3 parse or config error
    """
    config: RunConfig
    verdicts: list[VerdictRecord] = field(default_factory=list)
    lemma_checks: list[FuzzResult] = field(default_factory=list)
    error: Optional[str] = None
    exit_code: int = 0

    def totals(self) -> dict:
        statuses = [v.status for v in self.verdicts]
        return {
            'verdicts': len(statuses),
            'verified': statuses.count('verified'),
            'mismatch': statuses.count('mismatch'),
            'not_verified': len(statuses) - statuses.count('verified') - statuses.count('mismatch'),
            'degenerate': sum(v.degenerate for v in self.verdicts),
            'lemma_checks': len(self.lemma_checks),
            'lemma_failures': sum(1 for c in self.lemma_checks if c.failed),
            'lemma_not_verified': sum(1 for c in self.lemma_checks if c.not_verified),
            'exit_code': self.exit_code,
        }

    def to_report(self) -> dict:
        report = {
            'config': self.config.to_report(),
            'verdicts': [v.to_report(self.config.timings) for v in self.verdicts],
            'lemma_checks': [c.to_report() for c in self.lemma_checks],
            'totals': self.totals(),
            'version': VERSION,
        }

        if self.error is not None:
            report['error'] = self.error

        return report

    def dumps(self) -> str:
        return json.dumps(self.to_report(), sort_keys=True, indent=2, ensure_ascii=False) + '\n'

async def write_report(report: VerifyReport, path: str) -> None:
    """Write the report as UTF-8 JSON, creating parent directories."""
    directory = os.path.dirname(path)

    if directory:
        os.makedirs(directory, exist_ok=True)

    async with aiofiles.open(path, 'w', encoding='utf-8') as handle:
        await handle.write(report.dumps())
