"""Run configuration and computation caps."""
from dataclasses import dataclass, field, replace
from typing import Optional

THEOREMS = ('standard', 'generalized', 'triple', 'multiple', 'arrangements', 'lemmas')
PROFILES = ('default', 'quick', 'flagship')

@dataclass(frozen=True)
class Caps:
    """Engineering guards for every exhaustive computation.

    Attributes
    ----------
    ring_order : int
        Largest ring order build_ring accepts
    enumeration : int
        Largest |I|^(n*n) congruence_members will enumerate
    members : int
        Largest subgroup closure materializes
    oracle_pairs : int
        Largest |H|*|K| the brute force commutator oracle accepts
    ideal_lattice : int
        Largest ring order for which all two-sided ideals are listed
    """
    ring_order: int = 64
    enumeration: int = 2 ** 20
    members: int = 2 ** 24
    oracle_pairs: int = 2 ** 22
    ideal_lattice: int = 16

    @property
    def gl_validation(self) -> int:
        """Largest GL_n(A, I) whose gl_generators closure is compared with enumeration."""
        return min(self.enumeration, self.members)

    def with_members(self, members: Optional[int]) -> 'Caps':
        if members is None:
            return self
        return replace(self, members=members)

DEFAULT_CAPS = Caps()

@dataclass
class RunConfig:
    """Everything a verification run needs, as parsed from the command line.

    ``render`` re-emits the canonical command line so parse(render(c)) == c.
    """
    ring: str = ''
    ideals: list[str] = field(default_factory=list)
    n: int = 3
    theorem: str = 'generalized'
    tree: Optional[str] = None
    slots: Optional[str] = None
    cap_members: Optional[int] = None
    seed: int = 0
    json_path: Optional[str] = None
    profile: str = 'default'
    log_dir: str = 'logs'
    timings: bool = False
    workers: int = 1
    samples: int = 10000

    @property
    def caps(self) -> Caps:
        return DEFAULT_CAPS.with_members(self.cap_members)

    def render(self) -> str:
        """Return the canonical command line text for this configuration."""
        parts = ['verify']

        if self.ring:
            parts.append(f'--ring "{self.ring}"')
        if self.ideals:
            parts.append(f'--ideals "{",".join(self.ideals)}"')

        parts.append(f'--n {self.n}')
        parts.append(f'--theorem {self.theorem}')

        if self.tree is not None:
            parts.append(f'--tree "{self.tree}"')
        if self.slots is not None:
            parts.append(f'--slots "{self.slots}"')
        if self.cap_members is not None:
            parts.append(f'--cap-members {self.cap_members}')

        parts.append(f'--seed {self.seed}')

        if self.samples != 10000:
            parts.append(f'--samples {self.samples}')
        if self.json_path is not None:
            parts.append(f'--json "{self.json_path}"')
        if self.log_dir != 'logs':
            parts.append(f'--log-dir "{self.log_dir}"')
        if self.workers != 1:
            parts.append(f'--workers {self.workers}')
        if self.profile == 'quick':
            parts.append('--quick')
        elif self.profile == 'flagship':
            parts.append('--flagship')
        if self.timings:
            parts.append('--timings')

        return ' '.join(parts)

    def to_report(self) -> dict:
        """Configuration fields that belong in the JSON report."""
        return {
            'ring': self.ring,
            'ideals': list(self.ideals),
            'n': self.n,
            'theorem': self.theorem,
            'tree': self.tree,
            'slots': self.slots,
            'cap_members': self.caps.members,
            'seed': self.seed,
            'samples': self.samples,
            'profile': self.profile,
        }
