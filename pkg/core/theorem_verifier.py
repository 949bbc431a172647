"""Module that evaluates multiple commutator subgroups and checks the commutator formulas as set equalities.

Every verdict compares a mixed evaluation, where some slots hold the
congruence subgroup GL_n(A, I_k), with the evaluation of the same bracket
tree where every slot holds the relative elementary subgroup E_n(A, I_k).
The all-E side is computed first and its containment in the mixed side is
checked before equality, so a failure always points at the reverse
inclusion.

routine listings
----------------
enumerate_bracketings, standard_form, tree_ideal
    Bracket trees
evaluate_multicommutator
    Subgroup of a tree over a slot assignment
verify_standard, verify_generalized, verify_triple, verify_multiple,
verify_arrangements, verify_containment_chain
    VerdictRecord producers
"""
from __future__ import annotations
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence
from core.config import DEFAULT_CAPS, Caps
from core.errors import NOT_VERIFIED, CapExceededError, SpecError
from core.matrix_group import GroupSet
from core.ring_core import IdealSet, RingTable, sym_product, unit_ideal
from core.subgroup_engine import (
    commutator_subgroup, congruence_group, containment_witness, full_elementary, materialize,
    members_in_congruence, relative_elementary, subgroup_contains, subgroup_equal, symmetric_difference_witness,
    elementary_subgroup, validate_gl_generators
)

KINDS = ('E', 'GL')

@dataclass(frozen=True)
class BracketTree:
    """A full binary bracketing over the slots 0..m, leaves left to right in order.

    A leaf carries its slot index, an internal node its two subtrees.
    """
    slot: Optional[int] = None
    left: Optional['BracketTree'] = None
    right: Optional['BracketTree'] = None

    @classmethod
    def leaf(cls, slot: int) -> BracketTree:
        return cls(slot=slot)

    @classmethod
    def node(cls, left: BracketTree, right: BracketTree) -> BracketTree:
        return cls(left=left, right=right)

    @property
    def is_leaf(self) -> bool:
        return self.slot is not None

    def leaves(self) -> list[int]:
        if self.is_leaf:
            return [self.slot]
        return self.left.leaves() + self.right.leaves()

    def is_valid(self) -> bool:
        """Full binary with in-order leaves 0..m."""
        return self.leaves() == list(range(len(self.leaves())))

    def notation(self) -> str:
        """Nested list text, for example [[0,1],2]."""
        if self.is_leaf:
            return str(self.slot)
        return f'[{self.left.notation()},{self.right.notation()}]'

    def __str__(self) -> str:
        return self.notation()

def _bracketings(low: int, high: int) -> list[BracketTree]:
    if low == high:
        return [BracketTree.leaf(low)]

    trees = []

    # larger left parts first, so the left comb leads the list
    for split in range(high - 1, low - 1, -1):
        for left in _bracketings(low, split):
            for right in _bracketings(split + 1, high):
                trees.append(BracketTree.node(left, right))

    return trees

def enumerate_bracketings(m: int) -> list[BracketTree]:
    """All Catalan(m) full binary bracketings of the slots 0..m.

    Raises
    ------
    SpecError
        If m is outside 1..4
    """
    if not 1 <= m <= 4:
        raise SpecError(f'bracketings are enumerated for 1 <= m <= 4, got {m}')

    return _bracketings(0, m)

def standard_form(m: int) -> BracketTree:
    """The left comb [[...[0,1],...],m]."""
    tree = BracketTree.leaf(0)

    for slot in range(1, m + 1):
        tree = BracketTree.node(tree, BracketTree.leaf(slot))

    return tree

def tree_ideal(tree: BracketTree, ideals: Sequence[IdealSet]) -> IdealSet:
    """Fold the symmetrized product IJ + JI along the tree."""
    if tree.is_leaf:
        return ideals[tree.slot]
    return sym_product(tree_ideal(tree.left, ideals), tree_ideal(tree.right, ideals))

@dataclass(frozen=True)
class SlotSpec:
    """The group placed at every slot: E_n(A, I_k) or GL_n(A, I_k).

    Attributes
    ----------
    ideals : tuple[IdealSet, ...]
        I_0..I_m, all over the same ring
    kinds : tuple[str, ...]
        'E' or 'GL' per slot
    """
    ideals: tuple[IdealSet, ...]
    kinds: tuple[str, ...]

    def __post_init__(self):
        if len(self.ideals) != len(self.kinds):
            raise SpecError(f'{len(self.ideals)} ideals but {len(self.kinds)} slot kinds')
        if any(k not in KINDS for k in self.kinds):
            raise SpecError(f'slot kinds must be E or GL, got {",".join(self.kinds)}')
        if any(I.ring is not self.ideals[0].ring for I in self.ideals):
            raise SpecError('all slot ideals must be over the same ring')

    @property
    def ring(self) -> RingTable:
        return self.ideals[0].ring

    @property
    def has_elementary(self) -> bool:
        return 'E' in self.kinds

    def all_elementary(self) -> SlotSpec:
        return SlotSpec(self.ideals, ('E',) * len(self.ideals))

@dataclass
class VerdictRecord:
    """One checked equality with its evidence.

    Attributes
    ----------
    theorem : str
        Selector that produced the record
    claim : str
        The equality checked, for example [E(A,I0),GL(A,I1)] = [E(A,I0),E(A,I1)]
    status : str
        'verified', 'mismatch' or 'not verified at this scale'
    degenerate : bool
        Both sides are the trivial group
    checks : dict
        Auxiliary checks: containment of the all-E side, the ideal upper bound,
        and whether the GL generating sets were validated against enumeration
        (None where enumeration is out of reach)
    """
    theorem: str
    claim: str
    ring: str
    ideals: list[list[str]]
    n: int
    tree: str
    slots: list[str]
    lhs_order: Optional[int] = None
    rhs_order: Optional[int] = None
    equal: Optional[bool] = None
    degenerate: bool = False
    status: str = NOT_VERIFIED
    witness: Optional[str] = None
    checks: dict = field(default_factory=dict)
    elapsed_ms: int = 0

    @property
    def verified(self) -> bool:
        return self.status == 'verified'

    def to_report(self, timings: bool = False) -> dict:
        report = {
            'theorem': self.theorem,
            'claim': self.claim,
            'ring': self.ring,
            'ideals': self.ideals,
            'n': self.n,
            'tree': self.tree,
            'slots': self.slots,
            'lhs_order': self.lhs_order,
            'rhs_order': self.rhs_order,
            'equal': self.equal,
            'degenerate': self.degenerate,
            'status': self.status,
            'witness': self.witness,
            'checks': self.checks,
        }

        if timings:
            report['elapsed_ms'] = self.elapsed_ms

        return report

@lru_cache(maxsize=128)
def _leaf(ideal: IdealSet, kind: str, n: int) -> GroupSet:
    if kind == 'E':
        return relative_elementary(ideal.ring, ideal, n, lazy=True)
    return congruence_group(ideal.ring, ideal, n, lazy=True)

def _operand(tree: BracketTree, slots: SlotSpec, n: int, caps: Caps) -> GroupSet:
    if tree.is_leaf:
        return _leaf(slots.ideals[tree.slot], slots.kinds[tree.slot], n)

    try:
        left = _operand(tree.left, slots, n, caps)
        right = _operand(tree.right, slots, n, caps)
        return commutator_subgroup(left, right, caps.members, label=tree_expression(tree, slots.kinds))
    except CapExceededError as error:
        if 'subtree' in error.what:
            raise
        raise CapExceededError(f'{error.what} in subtree {tree.notation()}', error.limit, error.partial) from error

def evaluate_multicommutator(tree: BracketTree, slots: SlotSpec, n: int, caps: Caps = DEFAULT_CAPS) -> GroupSet:
    """Subgroup denoted by tree with slot k holding E_n(A, I_k) or GL_n(A, I_k).

    Leaves stay lazy (generators only) and every internal node is a
    commutator_subgroup, so GL leaves far beyond enumeration caps are fine.
    A bare leaf is materialized.

    Raises
    ------
    CapExceededError
        With the offending subtree named in what
    """
    return materialize(_operand(tree, slots, n, caps), caps.members)

def tree_expression(tree: BracketTree, kinds: Sequence[str]) -> str:
    if tree.is_leaf:
        return f'{kinds[tree.slot]}(A,I{tree.slot})'
    return f'[{tree_expression(tree.left, kinds)},{tree_expression(tree.right, kinds)}]'

def _record(theorem: str, claim: str, slots: SlotSpec, n: int, tree: str) -> VerdictRecord:
    return VerdictRecord(
        theorem=theorem,
        claim=claim,
        ring=slots.ring.spec.render(),
        ideals=[I.names() for I in slots.ideals],
        n=n,
        tree=tree,
        slots=list(slots.kinds)
    )

def _gl_validation(slots: SlotSpec, n: int, caps: Caps) -> Optional[bool]:
    results = [validate_gl_generators(I.ring, I, n, caps.gl_validation) for I, k in zip(slots.ideals, slots.kinds) if k == 'GL']

    if any(r is False for r in results):
        return False
    if results and all(r is True for r in results):
        return True

    return None

def _compare(record: VerdictRecord, lhs: GroupSet, rhs: GroupSet, bound: IdealSet, rhs_inside_lhs: bool = True) -> VerdictRecord:
    """Fill record from the two evaluated sides; rhs is the elementary side."""
    record.lhs_order = lhs.order
    record.rhs_order = rhs.order

    if rhs_inside_lhs:
        record.checks['elementary side contained'] = subgroup_contains(rhs, lhs)

    record.checks['upper bound'] = members_in_congruence(lhs, bound) and members_in_congruence(rhs, bound)
    record.equal = subgroup_equal(lhs, rhs)
    record.degenerate = lhs.is_trivial and rhs.is_trivial

    if not record.equal:
        witness = containment_witness(lhs, rhs) or symmetric_difference_witness(lhs, rhs)
        record.witness = witness.render() if witness is not None else None

    record.status = 'verified' if record.equal and all(v is not False for v in record.checks.values()) else 'mismatch'

    return record

def verify_tree(
    tree: BracketTree,
    slots: SlotSpec,
    n: int,
    caps: Caps = DEFAULT_CAPS,
    theorem: str = 'arrangements'
) -> VerdictRecord:
    """Compare the evaluation of tree over slots with its all-E evaluation.

    Raises
    ------
    SpecError
        If no slot is E, or the tree and slots disagree in size
    """
    if not slots.has_elementary:
        raise SpecError('at least one slot must hold the relative elementary subgroup')
    if len(tree.leaves()) != len(slots.kinds) or not tree.is_valid():
        raise SpecError(f'tree {tree.notation()} does not fit {len(slots.kinds)} slots')

    started = time.perf_counter()
    elementary = slots.all_elementary()
    record = _record(theorem, f'{tree_expression(tree, slots.kinds)} = {tree_expression(tree, elementary.kinds)}', slots, n, tree.notation())
    record.checks['gl generators validated'] = _gl_validation(slots, n, caps)

    try:
        rhs = evaluate_multicommutator(tree, elementary, n, caps)
        lhs = rhs if slots.kinds == elementary.kinds else evaluate_multicommutator(tree, slots, n, caps)
        _compare(record, lhs, rhs, tree_ideal(tree, slots.ideals))
    except CapExceededError as error:
        record.status = NOT_VERIFIED
        record.witness = str(error)

    record.elapsed_ms = int((time.perf_counter() - started) * 1000)

    return record

def verify_generalized(ring: RingTable, I: IdealSet, J: IdealSet, n: int, caps: Caps = DEFAULT_CAPS) -> VerdictRecord:
    """[E_n(A,I), GL_n(A,J)] = [E_n(A,I), E_n(A,J)]."""
    return verify_tree(standard_form(1), SlotSpec((I, J), ('E', 'GL')), n, caps, 'generalized')

def verify_triple(ring: RingTable, I: IdealSet, J: IdealSet, K: IdealSet, n: int, caps: Caps = DEFAULT_CAPS) -> VerdictRecord:
    """[[E_n(A,I), GL_n(A,J)], GL_n(A,K)] = [[E_n(A,I), E_n(A,J)], E_n(A,K)]."""
    return verify_tree(standard_form(2), SlotSpec((I, J, K), ('E', 'GL', 'GL')), n, caps, 'triple')

def verify_multiple(ring: RingTable, ideals: Sequence[IdealSet], n: int, caps: Caps = DEFAULT_CAPS) -> VerdictRecord:
    """Standard form [E(A,I_0), GL(A,I_1), ..., GL(A,I_m)] against the all-E standard form."""
    m = len(ideals) - 1
    return verify_tree(standard_form(m), SlotSpec(tuple(ideals), ('E',) + ('GL',) * m), n, caps, 'multiple')

def single_elementary_placements(m: int) -> list[tuple[str, ...]]:
    return [tuple('E' if k == e else 'GL' for k in range(m + 1)) for e in range(m + 1)]

def verify_arrangements(
    ring: RingTable,
    ideals: Sequence[IdealSet],
    n: int,
    trees: Optional[Sequence[BracketTree]] = None,
    placements: Optional[Sequence[Sequence[str]]] = None,
    caps: Caps = DEFAULT_CAPS
) -> list[VerdictRecord]:
    """Every requested tree against every requested slot assignment.

    Parameters
    ----------
    trees : Sequence[BracketTree], optional
        Defaults to every bracketing of the slots
    placements : Sequence[Sequence[str]], optional
        Slot kinds per case, defaults to one E slot with GL elsewhere, at each position
    """
    m = len(ideals) - 1
    trees = list(trees) if trees is not None else enumerate_bracketings(m)
    placements = [tuple(p) for p in placements] if placements is not None else single_elementary_placements(m)

    return [verify_tree(tree, SlotSpec(tuple(ideals), kinds), n, caps, 'arrangements') for tree in trees for kinds in placements]

def verify_standard(ring: RingTable, I: IdealSet, n: int, caps: Caps = DEFAULT_CAPS) -> list[VerdictRecord]:
    """[E_n(A,I), GL_n(A)] = E_n(A,I) and [E_n(A), GL_n(A,I)] = E_n(A,I).

    Returns
    -------
    list[VerdictRecord]
        One record per equality
    """
    A = unit_ideal(ring)
    cases = (
        ('[E(A,I),GL(A)] = E(A,I)', SlotSpec((I, A), ('E', 'GL'))),
        ('[E(A),GL(A,I)] = E(A,I)', SlotSpec((A, I), ('E', 'GL'))),
    )
    records = []

    for claim, slots in cases:
        started = time.perf_counter()
        record = _record('standard', claim, slots, n, standard_form(1).notation())
        record.checks['gl generators validated'] = _gl_validation(slots, n, caps)

        try:
            rhs = relative_elementary(ring, I, n, caps.members)
            lhs = commutator_subgroup(_leaf(slots.ideals[0], 'E', n), _leaf(slots.ideals[1], 'GL', n), caps.members)
            _compare(record, lhs, rhs, I)
        except CapExceededError as error:
            record.witness = str(error)

        record.elapsed_ms = int((time.perf_counter() - started) * 1000)
        records.append(record)

    return records

def verify_containment_chain(ring: RingTable, I: IdealSet, J: IdealSet, n: int, caps: Caps = DEFAULT_CAPS) -> VerdictRecord:
    """E_n(A, IJ+JI) <= [E_n(I), E_n(J)] <= [E_n(A,I), E_n(A,J)] <= GL_n(A, IJ+JI)."""
    started = time.perf_counter()
    bound = sym_product(I, J)
    slots = SlotSpec((I, J), ('E', 'E'))
    record = _record('containment-chain', 'E(A,IJ+JI) <= [E(I),E(J)] <= [E(A,I),E(A,J)] <= GL(A,IJ+JI)', slots, n, standard_form(1).notation())

    try:
        bottom = relative_elementary(ring, bound, n, caps.members)
        middle = commutator_subgroup(elementary_subgroup(ring, I, n), elementary_subgroup(ring, J, n), caps.members)
        top = commutator_subgroup(_leaf(I, 'E', n), _leaf(J, 'E', n), caps.members)

        record.checks = {
            'E(A,IJ+JI) <= [E(I),E(J)]': subgroup_contains(bottom, middle),
            '[E(I),E(J)] <= [E(A,I),E(A,J)]': subgroup_contains(middle, top),
            '[E(A,I),E(A,J)] <= GL(A,IJ+JI)': members_in_congruence(top, bound),
        }
        record.lhs_order = middle.order
        record.rhs_order = top.order
        record.equal = all(record.checks.values())
        record.degenerate = top.is_trivial
        record.status = 'verified' if record.equal else 'mismatch'
    except CapExceededError as error:
        record.witness = str(error)

    record.elapsed_ms = int((time.perf_counter() - started) * 1000)

    return record

def elementary_normality(ring: RingTable, I: IdealSet, n: int, caps: Caps = DEFAULT_CAPS) -> bool:
    """E_n(A, I) is normalized by the generators of E_n(A)."""
    group = relative_elementary(ring, I, n, caps.members)
    ambient = full_elementary(ring, n)
    normal = commutator_subgroup(group, ambient, caps.members)

    return subgroup_contains(normal, group)
