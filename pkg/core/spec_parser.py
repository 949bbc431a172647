"""Module containing the parsers for ring, ideal, bracket tree and slot specifications.

Ring grammar (whitespace is ignored everywhere)::

    ring   := factor ("x" factor)*
    factor := "Z/" int [ "[x]/(" poly ")" ] | "UT" int "(" ring ")" | "M" int "(" ring ")" | "(" ring ")"

Every parser reports failures as ParseError carrying the offset into the
original text.
"""
from __future__ import annotations
import re
from typing import Optional
from core.errors import ParseError, SpecError
from core.ring_core import IdealSet, RingSpec, RingTable, ideal_generate, parse_polynomial
from core.theorem_verifier import KINDS, BracketTree

class Cursor:
    """Position-tracking reader over a spec string.

    Attributes
    ----------
    text : str
        Text being parsed
    position : int
        Offset of the next unread character
    """
    def __init__(self, text: str):
        self.text = text
        self.position = 0

    def skip(self) -> None:
        while self.position < len(self.text) and self.text[self.position].isspace():
            self.position += 1

    def peek(self, literal: str) -> bool:
        self.skip()
        return self.text.startswith(literal, self.position)

    def accept(self, literal: str) -> bool:
        if self.peek(literal):
            self.position += len(literal)
            return True
        return False

    def expect(self, literal: str) -> None:
        if not self.accept(literal):
            raise ParseError(f'expected {literal!r}', self.position)

    def integer(self) -> int:
        self.skip()
        match = re.compile(r'\d+').match(self.text, self.position)

        if not match:
            raise ParseError('expected an integer', self.position)

        self.position = match.end()

        return int(match.group())

    def until_closing(self) -> tuple[str, int]:
        """Read up to the parenthesis closing the one just consumed; return the text and its offset."""
        start = self.position
        depth = 1

        while self.position < len(self.text):
            char = self.text[self.position]
            depth += {'(': 1, ')': -1}.get(char, 0)
            if depth == 0:
                self.position += 1
                return self.text[start:self.position - 1], start
            self.position += 1

        raise ParseError('unbalanced parenthesis', start)

    def at_end(self) -> bool:
        self.skip()
        return self.position >= len(self.text)

def _factor(cursor: Cursor) -> RingSpec:
    start = cursor.position

    try:
        if cursor.accept('Z/'):
            modulus = cursor.integer()
            if cursor.accept('[x]/('):
                poly, offset = cursor.until_closing()
                return RingSpec.poly_quotient(modulus, parse_polynomial(poly, modulus, offset))
            return RingSpec.modular(modulus)

        for prefix, build in (('UT', RingSpec.triangular), ('M', RingSpec.full_matrix)):
            if cursor.accept(prefix):
                size = cursor.integer()
                cursor.expect('(')
                base = _ring(cursor)
                cursor.expect(')')
                return build(size, base)

        if cursor.accept('('):
            inner = _ring(cursor)
            cursor.expect(')')
            return inner
    except ParseError:
        raise
    except SpecError as error:
        raise ParseError(str(error), start) from error

    raise ParseError('expected Z/, UT, M or (', cursor.position)

def _ring(cursor: Cursor) -> RingSpec:
    factors = [_factor(cursor)]

    while cursor.accept('x'):
        factors.append(_factor(cursor))

    return factors[0] if len(factors) == 1 else RingSpec.product(*factors)

def parse_ring_spec(text: str) -> RingSpec:
    """Parse ring text such as 'Z/8', 'Z/2[x]/(x^3)', 'UT2(Z/2)' or 'Z/2 x Z/4'.

    Raises
    ------
    ParseError
        On malformed text, a zero ring, or a non-monic modulus polynomial
    """
    cursor = Cursor(text)

    if cursor.at_end():
        raise ParseError('empty ring specification', 0)

    spec = _ring(cursor)

    if not cursor.at_end():
        raise ParseError('unexpected trailing text', cursor.position)

    return spec

def render_ring_spec(spec: RingSpec) -> str:
    return spec.render()

def _split_top_level(text: str, offset: int) -> list[tuple[str, int]]:
    """Split at commas outside (), [] with the offset of each part."""
    parts = []
    depth = 0
    start = 0

    for position, char in enumerate(text):
        if char in '([':
            depth += 1
        elif char in ')]':
            depth -= 1
        elif char == ',' and depth == 0:
            parts.append((text[start:position], offset + start))
            start = position + 1

    parts.append((text[start:], offset + start))

    return parts

def parse_ideal_spec(text: str, ring: RingTable, offset: int = 0) -> IdealSet:
    """Parse '(g1, g2, ...)' into the two-sided ideal the named elements generate.

    Raises
    ------
    ParseError
        On malformed text or an unknown element name
    """
    stripped = text.strip()
    lead = offset + len(text) - len(text.lstrip())

    if not (stripped.startswith('(') and stripped.endswith(')')):
        raise ParseError(f'ideal must be written as (g1, g2, ...), got {text!r}', lead)

    generators = []

    for name, position in _split_top_level(stripped[1:-1], lead + 1):
        if not name.strip():
            raise ParseError('empty generator', position)
        try:
            generators.append(ring.index_of(name))
        except SpecError as error:
            raise ParseError(str(error), position) from error

    return ideal_generate(ring, generators)

def parse_ideals(text: str, ring: RingTable) -> list[IdealSet]:
    """Parse a comma separated ideal list such as '(2),(2),(4)'."""
    return [parse_ideal_spec(part, ring, position) for part, position in _split_top_level(text, 0)]

def split_ideal_texts(text: str) -> list[str]:
    return [part.strip() for part, _ in _split_top_level(text, 0)]

def _tree(cursor: Cursor) -> BracketTree:
    if cursor.accept('['):
        left = _tree(cursor)
        cursor.expect(',')
        right = _tree(cursor)
        cursor.expect(']')
        return BracketTree.node(left, right)

    return BracketTree.leaf(cursor.integer())

def parse_tree(text: str) -> BracketTree:
    """Parse nested list notation such as '[[0,1],2]'.

    Raises
    ------
    ParseError
        On malformed text or leaves not reading 0..m left to right
    """
    cursor = Cursor(text)
    tree = _tree(cursor)

    if not cursor.at_end():
        raise ParseError('unexpected trailing text', cursor.position)
    if tree.is_leaf or not tree.is_valid():
        raise ParseError(f'leaves must read 0..m left to right with m >= 1, got {tree.leaves()}', 0)

    return tree

def parse_slots(text: str, expected: Optional[int] = None) -> tuple[str, ...]:
    """Parse slot kinds such as 'E,GL,GL'.

    Raises
    ------
    ParseError
        On an unknown kind or a count different from expected
    """
    kinds = []

    for part, position in _split_top_level(text, 0):
        kind = part.strip().upper()
        if kind not in KINDS:
            raise ParseError(f'slot kind must be E or GL, got {part.strip()!r}', position)
        kinds.append(kind)

    if expected is not None and len(kinds) != expected:
        raise ParseError(f'expected {expected} slot kinds, got {len(kinds)}', 0)

    return tuple(kinds)
