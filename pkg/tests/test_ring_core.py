"""Tests for finite ring tables and ideal arithmetic."""
from dataclasses import replace
import numpy as np
import pytest
from core.errors import CapExceededError, SpecError
from core.ring_core import (
    RingSpec, build_ring, check_ring_axioms, enumerate_ideals, fold_sym_product, ideal_contains, ideal_generate,
    ideal_power, ideal_product, ideal_sum, sym_product, unit_ideal, zero_ideal
)
from tests.conftest import principal, ring_of


# ============================================================================
# RingSpec
# ============================================================================


class TestRingSpec:

    def test_zero_ring_rejected(self) -> None:
        with pytest.raises(SpecError):
            RingSpec.modular(1)

    def test_non_monic_modulus_rejected(self) -> None:
        with pytest.raises(SpecError):
            RingSpec.poly_quotient(4, [1, 0, 2])

    def test_constant_modulus_rejected(self) -> None:
        with pytest.raises(SpecError):
            RingSpec.poly_quotient(2, [1])

    def test_orders(self) -> None:
        assert RingSpec.poly_quotient(2, [0, 0, 0, 1]).order() == 8
        assert RingSpec.triangular(2, RingSpec.modular(2)).order() == 8
        assert RingSpec.full_matrix(2, RingSpec.modular(2)).order() == 16
        assert RingSpec.product(RingSpec.modular(2), RingSpec.modular(3)).order() == 6

    def test_product_flattens(self) -> None:
        nested = RingSpec.product(RingSpec.modular(2), RingSpec.product(RingSpec.modular(3), RingSpec.modular(5)))
        assert len(nested.factors) == 3
        assert nested.render() == 'Z/2 x Z/3 x Z/5'

    def test_render(self) -> None:
        assert RingSpec.poly_quotient(2, [1, 1, 1]).render() == 'Z/2[x]/(1+x+x^2)'
        assert RingSpec.triangular(2, RingSpec.modular(2)).render() == 'UT2(Z/2)'


# ============================================================================
# RingTable
# ============================================================================


class TestBuildRing:

    def test_z8(self, z8) -> None:
        assert z8.order == 8
        assert z8.names == tuple(str(k) for k in range(8))
        assert z8.unit_set == (1, 3, 5, 7)
        assert z8.commutative

    def test_truncated_polynomials(self) -> None:
        """Units of Z/2[x]/(x^3) are exactly the elements with constant term 1."""
        ring = ring_of('Z/2[x]/(x^3)')
        assert ring.order == 8
        assert ring.commutative
        assert sorted(ring.names[u] for u in ring.unit_set) == sorted(['1', '1+x', '1+x^2', '1+x+x^2'])

    def test_x_is_nilpotent(self, dual) -> None:
        x = dual.index_of('x')
        assert dual.mul[x, x] == 0

    def test_field_of_four(self) -> None:
        ring = ring_of('Z/2[x]/(x^2+x+1)')
        assert len(ring.unit_set) == 3

    def test_upper_triangular_is_noncommutative(self, ut2) -> None:
        assert ut2.order == 8
        assert not ut2.commutative

    def test_full_matrix_units(self) -> None:
        ring = ring_of('M2(Z/2)')
        assert ring.order == 16
        assert len(ring.unit_set) == 6

    def test_zero_and_one_positions(self, ut2) -> None:
        assert ut2.names[0] == '[0,0;0,0]'
        assert ut2.names[1] == '[1,0;0,1]'
        assert (ut2.mul[1] == np.arange(ut2.order)).all()

    def test_matrix_unit_aliases(self, ut2) -> None:
        e12 = ut2.index_of('E12')
        assert ut2.names[e12] == '[0,1;0,0]'
        assert ut2.mul[e12, e12] == 0

    def test_unknown_element(self, z8) -> None:
        with pytest.raises(SpecError):
            z8.index_of('9')

    def test_inverse(self, z8) -> None:
        assert z8.inverse(3) == 3
        assert z8.inverse(5) == 5
        with pytest.raises(SpecError):
            z8.inverse(2)

    def test_order_cap(self) -> None:
        with pytest.raises(CapExceededError) as raised:
            build_ring(RingSpec.modular(65))
        assert raised.value.partial == 65
        assert build_ring(RingSpec.modular(65), order_cap=128).order == 65

    @pytest.mark.parametrize('text', ['Z/8', 'Z/6', 'Z/2[x]/(x^3)', 'UT2(Z/2)', 'M2(Z/2)', 'Z/2 x Z/4', 'UT2(Z/3)', 'Z/64'])
    def test_axioms_hold(self, text: str) -> None:
        assert check_ring_axioms(ring_of(text)) == []

    def test_axiom_scan_catches_a_broken_table(self, z4) -> None:
        broken = z4.mul.copy()
        broken[2, 3] = 1
        faulty = replace(z4, mul=broken)
        assert check_ring_axioms(faulty)


# ============================================================================
# Ideals
# ============================================================================


class TestIdeals:

    def test_generate(self, z8) -> None:
        assert ideal_generate(z8, [2]).members == (0, 2, 4, 6)
        assert ideal_generate(z8, [6]).members == (0, 2, 4, 6)
        assert ideal_generate(z8, [3]) == unit_ideal(z8)
        assert ideal_generate(ring_of('Z/6'), [3]).members == (0, 3)

    def test_empty_generators_give_zero(self, z8) -> None:
        assert ideal_generate(z8, []) == zero_ideal(z8)

    def test_matrix_unit_ideal(self, ut2) -> None:
        assert principal(ut2, 'E12').names() == ['[0,0;0,0]', '[0,1;0,0]']

    def test_polynomial_ideal(self) -> None:
        ring = ring_of('Z/2[x]/(x^3)')
        assert sorted(principal(ring, 'x').names()) == sorted(['0', 'x', 'x^2', 'x+x^2'])

    def test_sum_and_product(self, z8) -> None:
        two, four = principal(z8, '2'), principal(z8, '4')
        assert ideal_sum(two, four) == two
        assert ideal_product(two, two) == four
        assert ideal_power(two, 3) == zero_ideal(z8)

    def test_sym_product(self, z8, ut2) -> None:
        two, four = principal(z8, '2'), principal(z8, '4')
        assert sym_product(two, two).members == (0, 4)
        assert sym_product(two, four).is_zero
        assert sym_product(principal(ut2, 'E12'), principal(ut2, 'E12')).is_zero

    def test_fold(self, z8, z16) -> None:
        assert fold_sym_product([principal(z8, '2')] * 3).is_zero
        assert fold_sym_product([principal(z16, '2')] * 3).members == (0, 8)

    def test_contains_reads_second_inside_first(self, z8) -> None:
        assert ideal_contains(principal(z8, '2'), principal(z8, '4'))
        assert not ideal_contains(principal(z8, '4'), principal(z8, '2'))

    def test_ring_mismatch(self, z4, z8) -> None:
        with pytest.raises(SpecError):
            ideal_sum(unit_ideal(z4), unit_ideal(z8))

    def test_lattice(self, z8) -> None:
        assert [len(I) for I in enumerate_ideals(z8)] == [1, 2, 4, 8]
        assert len(enumerate_ideals(ring_of('Z/2 x Z/2'))) == 4

    def test_lattice_cap(self) -> None:
        with pytest.raises(CapExceededError):
            enumerate_ideals(ring_of('Z/32'))

    @pytest.mark.parametrize('text', ['Z/8', 'Z/12', 'Z/2[x]/(x^3)', 'Z/2 x Z/4', 'UT2(Z/2)', 'M2(Z/2)'])
    def test_generate_is_idempotent(self, text: str) -> None:
        ring = ring_of(text)
        for ideal in enumerate_ideals(ring):
            assert ideal_generate(ring, list(ideal.members)) == ideal

    @pytest.mark.parametrize('text', ['Z/8', 'Z/12', 'Z/2[x]/(x^3)', 'Z/2 x Z/4', 'UT2(Z/2)'])
    def test_product_distributes_over_sum(self, text: str) -> None:
        ideals = enumerate_ideals(ring_of(text))
        for I in ideals:
            for J in ideals:
                for K in ideals:
                    assert ideal_product(I, ideal_sum(J, K)) == ideal_sum(ideal_product(I, J), ideal_product(I, K))
                    assert ideal_product(ideal_sum(J, K), I) == ideal_sum(ideal_product(J, I), ideal_product(K, I))

    def test_sym_product_is_symmetric(self) -> None:
        ring = ring_of('UT2(Z/2)')
        ideals = enumerate_ideals(ring)
        for I in ideals:
            for J in ideals:
                assert sym_product(I, J) == sym_product(J, I)
