"""Tests for bracket trees and the commutator formula verdicts."""
import pytest
from core.config import DEFAULT_CAPS
from core.errors import SpecError
from core.ring_core import unit_ideal, zero_ideal
from core.theorem_verifier import (
    NOT_VERIFIED, BracketTree, SlotSpec, elementary_normality, enumerate_bracketings, evaluate_multicommutator,
    single_elementary_placements, standard_form, tree_expression, tree_ideal, verify_arrangements,
    verify_containment_chain, verify_generalized, verify_multiple, verify_standard, verify_tree, verify_triple
)
from tests.conftest import principal, ring_of


# ============================================================================
# Bracket trees
# ============================================================================


class TestBracketTrees:

    @pytest.mark.parametrize('m, count', [(1, 1), (2, 2), (3, 5), (4, 14)])
    def test_catalan_counts(self, m: int, count: int) -> None:
        trees = enumerate_bracketings(m)
        assert len(trees) == count
        assert len({t.notation() for t in trees}) == count
        assert all(t.is_valid() for t in trees)

    def test_order(self) -> None:
        assert [t.notation() for t in enumerate_bracketings(2)] == ['[[0,1],2]', '[0,[1,2]]']

    def test_left_comb_leads(self) -> None:
        assert enumerate_bracketings(3)[0] == standard_form(3)
        assert standard_form(3).notation() == '[[[0,1],2],3]'

    @pytest.mark.parametrize('m', [0, 5])
    def test_range(self, m: int) -> None:
        with pytest.raises(SpecError):
            enumerate_bracketings(m)

    def test_invalid_leaves(self) -> None:
        tree = BracketTree.node(BracketTree.leaf(1), BracketTree.leaf(0))
        assert not tree.is_valid()

    def test_tree_ideal(self, z16) -> None:
        two = principal(z16, '2')
        assert tree_ideal(standard_form(1), [two, two]).members == (0, 4, 8, 12)
        assert tree_ideal(standard_form(2), [two, two, two]).members == (0, 8)
        assert tree_ideal(standard_form(3), [two] * 4).is_zero

    def test_expression(self) -> None:
        assert tree_expression(standard_form(2), ('E', 'GL', 'GL')) == '[[E(A,I0),GL(A,I1)],GL(A,I2)]'

    def test_placements(self) -> None:
        assert single_elementary_placements(2) == [('E', 'GL', 'GL'), ('GL', 'E', 'GL'), ('GL', 'GL', 'E')]


class TestSlotSpec:

    def test_size_mismatch(self, z8) -> None:
        with pytest.raises(SpecError):
            SlotSpec((unit_ideal(z8),), ('E', 'GL'))

    def test_unknown_kind(self, z8) -> None:
        with pytest.raises(SpecError):
            SlotSpec((unit_ideal(z8),), ('SL',))

    def test_mixed_rings(self, z4, z8) -> None:
        with pytest.raises(SpecError):
            SlotSpec((unit_ideal(z4), unit_ideal(z8)), ('E', 'GL'))


# ============================================================================
# Evaluation
# ============================================================================


class TestEvaluate:

    def test_bare_leaf_is_materialized(self, z4) -> None:
        group = evaluate_multicommutator(BracketTree.leaf(0), SlotSpec((principal(z4, '2'),), ('GL',)), 3)
        assert group.order == 512

    def test_level_bound(self, z8) -> None:
        two = principal(z8, '2')
        group = evaluate_multicommutator(standard_form(1), SlotSpec((two, two), ('E', 'GL')), 3)
        assert not group.is_trivial
        assert group.order <= 512

    def test_zero_slot(self, z8) -> None:
        slots = SlotSpec((zero_ideal(z8), unit_ideal(z8)), ('E', 'GL'))
        assert evaluate_multicommutator(standard_form(1), slots, 3).is_trivial


# ============================================================================
# Verdicts
# ============================================================================


class TestVerdicts:

    def test_standard(self, z4) -> None:
        records = verify_standard(z4, principal(z4, '2'), 3)
        assert [r.claim for r in records] == ['[E(A,I),GL(A)] = E(A,I)', '[E(A),GL(A,I)] = E(A,I)']
        assert all(r.verified for r in records)
        assert all(r.lhs_order == r.rhs_order == 256 for r in records)

    def test_generalized_abelian_level(self, z4) -> None:
        record = verify_generalized(z4, principal(z4, '2'), principal(z4, '2'), 3)
        assert record.verified
        assert record.degenerate
        assert record.checks['gl generators validated'] is True

    def test_generalized_z8(self, z8) -> None:
        two = principal(z8, '2')
        record = verify_generalized(z8, two, two, 3)
        assert record.status == 'verified'
        assert record.equal
        assert not record.degenerate
        assert record.lhs_order == record.rhs_order
        assert 512 % record.lhs_order == 0
        assert record.checks['elementary side contained']
        assert record.checks['upper bound']
        assert record.checks['gl generators validated'] is True

    def test_generalized_mixed_levels(self, z8) -> None:
        record = verify_generalized(z8, principal(z8, '2'), principal(z8, '4'), 3)
        assert record.verified
        assert record.checks['gl generators validated'] is True

    @pytest.mark.parametrize('text, name', [('Z/2[x]/(x^2)', 'x'), ('UT2(Z/2)', 'E12')])
    def test_generalized_zoo(self, text: str, name: str) -> None:
        ring = ring_of(text)
        ideal = principal(ring, name)
        assert verify_generalized(ring, ideal, ideal, 3).verified

    def test_generalized_product_ring(self) -> None:
        ring = ring_of('Z/2 x Z/2')
        record = verify_generalized(ring, principal(ring, '(1,0)'), principal(ring, '(0,1)'), 3)
        assert record.verified
        assert record.degenerate

    def test_triple_degenerate(self, z8) -> None:
        two = principal(z8, '2')
        record = verify_triple(z8, two, two, two, 3)
        assert record.verified
        assert record.degenerate
        assert record.claim == '[[E(A,I0),GL(A,I1)],GL(A,I2)] = [[E(A,I0),E(A,I1)],E(A,I2)]'

    @pytest.mark.slow
    def test_triple_z16(self, z16) -> None:
        """The smallest cyclic ring where the triple commutator survives."""
        two = principal(z16, '2')
        record = verify_triple(z16, two, two, two, 3)
        assert record.verified
        assert not record.degenerate
        assert record.checks['upper bound']

    def test_multiple(self, z8) -> None:
        two = principal(z8, '2')
        record = verify_multiple(z8, [two, two, two], 3)
        assert record.theorem == 'multiple'
        assert record.verified

    def test_arrangements(self, z8) -> None:
        two = principal(z8, '2')
        records = verify_arrangements(z8, [two, two, two], 3)
        assert len(records) == 6
        assert all(r.verified for r in records)
        assert {r.tree for r in records} == {'[[0,1],2]', '[0,[1,2]]'}

    def test_tree_without_elementary_slot(self, z8) -> None:
        two = principal(z8, '2')
        with pytest.raises(SpecError):
            verify_tree(standard_form(1), SlotSpec((two, two), ('GL', 'GL')), 3)

    def test_tree_and_slots_disagree(self, z8) -> None:
        two = principal(z8, '2')
        with pytest.raises(SpecError):
            verify_tree(standard_form(2), SlotSpec((two, two), ('E', 'GL')), 3)

    def test_cap_gives_not_verified(self, z8) -> None:
        two = principal(z8, '2')
        record = verify_generalized(z8, two, two, 3, DEFAULT_CAPS.with_members(16))
        assert record.status == NOT_VERIFIED
        assert 'subtree [0,1]' in record.witness
        assert record.equal is None

    def test_timings_only_on_request(self, z4) -> None:
        record = verify_generalized(z4, principal(z4, '2'), principal(z4, '2'), 3)
        assert 'elapsed_ms' not in record.to_report()
        assert 'elapsed_ms' in record.to_report(timings=True)

    def test_containment_chain(self, z8) -> None:
        two = principal(z8, '2')
        record = verify_containment_chain(z8, two, two, 3)
        assert record.theorem == 'containment-chain'
        assert record.verified
        assert all(record.checks.values())

    def test_elementary_normality(self, z4, ut2) -> None:
        assert elementary_normality(z4, principal(z4, '2'), 3)
        assert elementary_normality(ut2, principal(ut2, 'E12'), 3)
