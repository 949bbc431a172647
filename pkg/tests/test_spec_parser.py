import pytest
from core.errors import ParseError
from core.ring_core import RingSpec, build_ring, enumerate_ideals, unit_ideal, zero_ideal
from core.spec_parser import (
    parse_ideal_spec, parse_ideals, parse_ring_spec, parse_slots, parse_tree, render_ring_spec, split_ideal_texts
)
from tests.conftest import ring_of


# ============================================================================
# Rings
# ============================================================================


class TestParseRing:

    def test_modular(self) -> None:
        assert parse_ring_spec('Z/8') == RingSpec.modular(8)

    def test_polynomial_quotient(self) -> None:
        spec = parse_ring_spec('Z/2[x]/(x^3)')
        assert spec.kind == 'poly'
        assert spec.modulus == 2
        assert spec.poly == (0, 0, 0, 1)

    def test_whitespace_is_ignored(self) -> None:
        assert parse_ring_spec('  Z/ 2 [x]/( x^2 + 1 ) ') == parse_ring_spec('Z/2[x]/(x^2+1)')

    def test_nested(self) -> None:
        spec = parse_ring_spec('UT2(Z/2 x Z/3) x M2(Z/2)')
        assert spec.kind == 'product'
        assert [f.kind for f in spec.factors] == ['triangular', 'matrix']
        assert spec.factors[0].base.kind == 'product'

    def test_parenthesized(self) -> None:
        assert parse_ring_spec('(Z/4)') == RingSpec.modular(4)

    @pytest.mark.parametrize('text', [
        'Z/2', 'Z/8', 'Z/64', 'Z/6', 'Z/9',
        'Z/2[x]/(x^2)', 'Z/2[x]/(x^3)', 'Z/2[x]/(x^2+x+1)', 'Z/3[x]/(x^2+1)', 'Z/4[x]/(x^2+2)', 'Z/2[x]/(1+x+x^3)',
        'UT2(Z/2)', 'UT3(Z/2)', 'UT2(Z/4)', 'M2(Z/2)', 'M2(Z/3)', 'M2(Z/2[x]/(x^2))', 'UT3(Z/2[x]/(1+x^2))',
        'Z/2 x Z/4', 'Z/2 x Z/2 x Z/2', '(Z/2 x Z/3) x Z/4', 'UT2(Z/2 x Z/2)', 'Z/2[x]/(x^2) x Z/2', 'M2(Z/2) x Z/3',
    ])
    def test_render_round_trip(self, text: str) -> None:
        spec = parse_ring_spec(text)
        assert parse_ring_spec(render_ring_spec(spec)) == spec

    @pytest.mark.parametrize('text, position', [
        ('Z/1', 0),
        ('', 0),
        ('Z/', 2),
        ('Q/3', 0),
        ('Z/8 y', 4),
        ('UT2(Z/2', 7),
        ('Z/4[x]/(2x^2+1)', 0),
    ])
    def test_errors_carry_positions(self, text: str, position: int) -> None:
        with pytest.raises(ParseError) as raised:
            parse_ring_spec(text)
        assert raised.value.position == position
        assert f'(at position {position})' in str(raised.value)

    def test_zero_ring_maps_to_config_exit_code(self) -> None:
        with pytest.raises(ParseError) as raised:
            parse_ring_spec('Z/1')
        assert raised.value.exit_code == 3


# ============================================================================
# Ideals
# ============================================================================


class TestParseIdeal:

    def test_principal(self, z8) -> None:
        assert parse_ideal_spec('(2)', z8).members == (0, 2, 4, 6)

    def test_zero_and_unit(self, z8) -> None:
        assert parse_ideal_spec('(0)', z8) == zero_ideal(z8)
        assert parse_ideal_spec('(1)', z8) == unit_ideal(z8)

    def test_several_generators(self, z8) -> None:
        assert parse_ideal_spec('(4, 6)', z8).members == (0, 2, 4, 6)

    def test_polynomial_generators(self) -> None:
        ring = ring_of('Z/2[x]/(x^3)')
        assert len(parse_ideal_spec('(x)', ring)) == 4
        assert len(parse_ideal_spec('(x^2)', ring)) == 2

    def test_product_ring_names(self) -> None:
        ring = ring_of('Z/2 x Z/4')
        assert parse_ideal_spec('((0,2))', ring).names() == ['(0,0)', '(0,2)']

    def test_matrix_unit(self, ut2) -> None:
        assert len(parse_ideal_spec('(E12)', ut2)) == 2

    def test_unknown_generator(self, z8) -> None:
        with pytest.raises(ParseError) as raised:
            parse_ideals('(2),(9)', z8)
        assert raised.value.position == 5

    def test_missing_parentheses(self, z8) -> None:
        with pytest.raises(ParseError):
            parse_ideal_spec('2', z8)

    def test_list(self, z8) -> None:
        assert [len(I) for I in parse_ideals('(2),(2),(4)', z8)] == [4, 4, 2]

    @pytest.mark.parametrize('text', ['Z/8', 'Z/12', 'Z/2[x]/(x^3)', 'Z/2[x]/(x^2+x+1)', 'Z/2 x Z/4', 'UT2(Z/2)', 'M2(Z/2)'])
    def test_member_names_round_trip(self, text: str) -> None:
        ring = ring_of(text)
        for ideal in enumerate_ideals(ring):
            assert parse_ideal_spec('(' + ', '.join(ideal.names()) + ')', ring) == ideal

    def test_split_respects_nesting(self) -> None:
        assert split_ideal_texts('((1,0)), ((0,1))') == ['((1,0))', '((0,1))']


# ============================================================================
# Trees and slots
# ============================================================================


class TestParseTree:

    def test_left_comb(self) -> None:
        tree = parse_tree('[[0,1],2]')
        assert tree.notation() == '[[0,1],2]'
        assert tree.leaves() == [0, 1, 2]

    def test_spaces(self) -> None:
        assert parse_tree(' [ 0 , [ 1 , 2 ] ] ').notation() == '[0,[1,2]]'

    @pytest.mark.parametrize('text', ['[1,0]', '0', '[0,1', '[0,[1,1]]', '[0,1]]'])
    def test_invalid(self, text: str) -> None:
        with pytest.raises(ParseError):
            parse_tree(text)


class TestParseSlots:

    def test_kinds(self) -> None:
        assert parse_slots('E,GL,GL') == ('E', 'GL', 'GL')
        assert parse_slots('e, gl') == ('E', 'GL')

    def test_unknown_kind(self) -> None:
        with pytest.raises(ParseError):
            parse_slots('E,SL')

    def test_count(self) -> None:
        with pytest.raises(ParseError):
            parse_slots('E,GL', expected=3)
