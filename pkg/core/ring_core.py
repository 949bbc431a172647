"""Module holding finite unital rings, their two-sided ideals and ideal algebra.

Rings are realized as explicit tables over element indices.  Index 0 is always
zero and index 1 is always one; every other element keeps the canonical order of
its ring kind (residues, little-endian coefficient vectors, lexicographic tuples
or row-major entry tuples), so names, packing keys and reports are reproducible.

routine listings
----------------
build_ring
    Build a RingTable from a RingSpec
ideal_generate, ideal_sum, ideal_product, sym_product
    Two-sided ideal closure and ideal arithmetic
enumerate_ideals
    Every two-sided ideal of a small ring
check_ring_axioms
    Exhaustive (or sampled) ring axiom scan
"""
from __future__ import annotations
from dataclasses import dataclass, field
from functools import reduce
from itertools import product as cartesian
from typing import Iterable, Optional
import re
import numpy as np
from core.errors import CapExceededError, ParseError, SpecError

KINDS = ('modular', 'poly', 'product', 'triangular', 'matrix')

@dataclass(frozen=True)
class RingSpec:
    """Exact description of a finite unital ring.

    Attributes
    ----------
    kind : str
        One of 'modular', 'poly', 'product', 'triangular', 'matrix'
    modulus : int
        m for Z/m, and the coefficient modulus p for Z/p[x]/(f)
    poly : tuple[int, ...]
        Ascending coefficients of the monic modulus polynomial f
    factors : tuple[RingSpec, ...]
        Factors of a product ring
    size : int
        k for UTk(B) and Mk(B)
    base : RingSpec, optional
        Base ring B of UTk(B) and Mk(B)
    """
    kind: str
    modulus: int = 0
    poly: tuple[int, ...] = ()
    factors: tuple['RingSpec', ...] = ()
    size: int = 0
    base: Optional['RingSpec'] = None

    @classmethod
    def modular(cls, m: int) -> RingSpec:
        return cls('modular', modulus=m).validated()

    @classmethod
    def poly_quotient(cls, p: int, coefficients: Iterable[int]) -> RingSpec:
        return cls('poly', modulus=p, poly=tuple(coefficients)).validated()

    @classmethod
    def product(cls, *factors: RingSpec) -> RingSpec:
        flat = []

        # Z/2 x (Z/3 x Z/5) and (Z/2 x Z/3) x Z/5 are the same three-factor ring
        for factor in factors:
            flat.extend(factor.factors if factor.kind == 'product' else (factor,))

        return cls('product', factors=tuple(flat)).validated()

    @classmethod
    def triangular(cls, k: int, base: RingSpec) -> RingSpec:
        return cls('triangular', size=k, base=base).validated()

    @classmethod
    def full_matrix(cls, k: int, base: RingSpec) -> RingSpec:
        return cls('matrix', size=k, base=base).validated()

    def validated(self) -> RingSpec:
        """Return self after checking the RingSpec invariants, raise SpecError otherwise."""
        if self.kind not in KINDS:
            raise SpecError(f'unknown ring kind {self.kind!r}')

        if self.kind in ('modular', 'poly') and self.modulus < 2:
            raise SpecError(f'modulus must be at least 2, got {self.modulus} (the zero ring is not supported)')

        if self.kind == 'poly':
            coefficients = [c % self.modulus for c in self.poly]

            while coefficients and coefficients[-1] == 0:
                coefficients.pop()

            if len(coefficients) < 2:
                raise SpecError('modulus polynomial must have degree at least 1')
            if coefficients[-1] != 1:
                raise SpecError('modulus polynomial must be monic')

            object.__setattr__(self, 'poly', tuple(coefficients))

        if self.kind == 'product' and len(self.factors) < 2:
            raise SpecError('a product ring needs at least two factors')

        if self.kind in ('triangular', 'matrix'):
            if self.size < 2:
                raise SpecError(f'matrix ring size must be at least 2, got {self.size}')
            if self.base is None:
                raise SpecError('matrix ring needs a base ring')

        return self

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    def order(self) -> int:
        """Number of elements of the described ring, computed without building it."""
        if self.kind == 'modular':
            return self.modulus
        if self.kind == 'poly':
            return self.modulus ** self.degree
        if self.kind == 'product':
            return reduce(lambda acc, f: acc * f.order(), self.factors, 1)
        if self.kind == 'triangular':
            return self.base.order() ** (self.size * (self.size + 1) // 2)

        return self.base.order() ** (self.size * self.size)

    def render(self) -> str:
        """Canonical text of the spec, accepted back by spec_parser.parse_ring_spec."""
        if self.kind == 'modular':
            return f'Z/{self.modulus}'
        if self.kind == 'poly':
            return f'Z/{self.modulus}[x]/({poly_text(self.poly)})'
        if self.kind == 'product':
            return ' x '.join(f.render() for f in self.factors)
        if self.kind == 'triangular':
            return f'UT{self.size}({self.base.render()})'

        return f'M{self.size}({self.base.render()})'

    def __str__(self) -> str:
        return self.render()

@dataclass(frozen=True, eq=False)
class RingTable:
    """A finite unital ring given by exact operation tables on element indices.

    Attributes
    ----------
    spec : RingSpec
        Spec the ring was built from
    order : int
        Number of elements
    names : tuple[str, ...]
        Canonical element names, index 0 is zero and index 1 is one
    add, mul : numpy.ndarray
        order x order tables of sums and products
    neg : numpy.ndarray
        Additive inverses
    commutative : bool
        True iff x*y == y*x for all pairs
    unit_set : tuple[int, ...]
        Indices of two-sided invertible elements
    unit_inverse : numpy.ndarray
        Inverse index of each unit, -1 for non-units
    """
    spec: RingSpec
    order: int
    names: tuple[str, ...]
    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    commutative: bool
    unit_set: tuple[int, ...]
    unit_inverse: np.ndarray
    aliases: dict[str, int] = field(default_factory=dict)

    def index_of(self, name: str) -> int:
        """Return the index of the element called name, raise SpecError if unknown."""
        text = re.sub(r'\s+', '', name)

        if text in self.aliases:
            return self.aliases[text]

        if self.spec.kind == 'poly':
            coefficients = _poly_from_text(text, self.spec.modulus)
            if coefficients is not None and len(coefficients) <= self.spec.degree:
                value = tuple(coefficients) + (0,) * (self.spec.degree - len(coefficients))
                return self.aliases[_poly_name(value)]

        raise SpecError(f'unknown element {name!r} of ring {self.spec}')

    def name_of(self, index: int) -> str:
        return self.names[index]

    def is_unit(self, index: int) -> bool:
        return self.unit_inverse[index] >= 0

    def inverse(self, index: int) -> int:
        if self.unit_inverse[index] < 0:
            raise SpecError(f'{self.names[index]} is not a unit of {self.spec}')

        return int(self.unit_inverse[index])

    def __repr__(self) -> str:
        return f'RingTable({self.spec}, order={self.order})'

@dataclass(frozen=True, eq=False)
class IdealSet:
    """A two-sided ideal given by its sorted member indices (always containing 0)."""
    ring: RingTable
    members: tuple[int, ...]

    def __contains__(self, index: int) -> bool:
        return index in self._member_set

    def __len__(self) -> int:
        return len(self.members)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IdealSet):
            return NotImplemented
        return self.ring is other.ring and self.members == other.members

    def __hash__(self) -> int:
        return hash((self.ring.spec, self.members))

    @property
    def _member_set(self) -> frozenset:
        cached = self.__dict__.get('_cached_set')
        if cached is None:
            cached = frozenset(self.members)
            object.__setattr__(self, '_cached_set', cached)
        return cached

    @property
    def mask(self) -> np.ndarray:
        """Boolean membership vector over all ring indices."""
        flags = np.zeros(self.ring.order, dtype=bool)
        flags[list(self.members)] = True
        return flags

    @property
    def is_zero(self) -> bool:
        return self.members == (0,)

    def names(self) -> list[str]:
        return [self.ring.names[m] for m in self.members]

    def render(self) -> str:
        return '{' + ', '.join(self.names()) + '}'

def build_ring(spec: RingSpec, order_cap: int = 64) -> RingTable:
    """Build the operation tables of the ring described by spec.

    Parameters
    ----------
    spec : RingSpec
        Validated ring description
    order_cap : int, optional
        Largest accepted ring order, by default 64

    Returns
    -------
    RingTable
        Ring passing all RingTable invariants

    Raises
    ------
    CapExceededError
        If the ring would have more than order_cap elements
    """
    spec.validated()
    order = spec.order()

    if order > order_cap:
        raise CapExceededError(f'ring {spec}', order_cap, order)

    values, add_v, mul_v, name_v, aliases_v = _ring_model(spec, order_cap)

    # canonical order, with one moved to index 1
    one_value = _one_value(spec)
    ordered = [values[0], one_value] + [v for v in values[1:] if v != one_value]
    position = {v: i for i, v in enumerate(ordered)}

    add = np.empty((order, order), dtype=np.int64)
    mul = np.empty((order, order), dtype=np.int64)

    for i, x in enumerate(ordered):
        for j, y in enumerate(ordered):
            add[i, j] = position[add_v(x, y)]
            mul[i, j] = position[mul_v(x, y)]

    neg = np.argmin(add, axis=1).astype(np.int64)
    commutative = bool(np.array_equal(mul, mul.T))
    unit_inverse = np.full(order, -1, dtype=np.int64)

    for u in range(order):
        for v in np.nonzero(mul[u] == 1)[0]:
            if mul[v, u] == 1:
                unit_inverse[u] = v
                break

    names = tuple(name_v(v) for v in ordered)
    aliases = {name: i for i, name in enumerate(names)}
    aliases.update({'0': 0, '1': 1})
    aliases.update({alias: position[v] for alias, v in aliases_v.items()})

    for table in (add, mul, neg, unit_inverse):
        table.setflags(write=False)

    return RingTable(
        spec=spec,
        order=order,
        names=names,
        add=add,
        mul=mul,
        neg=neg,
        commutative=commutative,
        unit_set=tuple(int(u) for u in np.nonzero(unit_inverse >= 0)[0]),
        unit_inverse=unit_inverse,
        aliases=aliases,
    )

def check_ring_axioms(ring: RingTable, samples: int = 10 ** 4, rng: Optional[np.random.Generator] = None) -> list[str]:
    """Scan the RingTable invariants, exhaustively up to 64 elements and sampled above.

    Returns
    -------
    list[str]
        Description of every violated law, empty when the ring is sound
    """
    add, mul, order = ring.add, ring.mul, ring.order
    violations = []

    if order <= 64:
        a, b, c = (axis.ravel() for axis in np.meshgrid(np.arange(order), np.arange(order), np.arange(order), indexing='ij'))
    else:
        rng = rng or np.random.default_rng(0)
        a, b, c = (rng.integers(0, order, samples) for _ in range(3))

    laws = {
        'associativity of *': mul[mul[a, b], c] == mul[a, mul[b, c]],
        'associativity of +': add[add[a, b], c] == add[a, add[b, c]],
        'left distributivity': mul[a, add[b, c]] == add[mul[a, b], mul[a, c]],
        'right distributivity': mul[add[a, b], c] == add[mul[a, c], mul[b, c]],
        'commutativity of +': add[a, b] == add[b, a],
    }

    for law, holds in laws.items():
        if not holds.all():
            violations.append(law)

    everything = np.arange(order)

    if not (mul[0] == 0).all() or not (mul[:, 0] == 0).all():
        violations.append('0*x == 0')
    if not (mul[1] == everything).all() or not (mul[:, 1] == everything).all():
        violations.append('1*x == x*1 == x')
    if not (add[everything, ring.neg] == 0).all():
        violations.append('x + (-x) == 0')
    if ring.commutative != bool(np.array_equal(mul, mul.T)):
        violations.append('commutative flag')

    for u in range(order):
        two_sided = any(mul[u, v] == 1 and mul[v, u] == 1 for v in range(order))
        if two_sided != (u in ring.unit_set):
            violations.append(f'unit set at {ring.names[u]}')

    return violations

def ideal_generate(ring: RingTable, gens: Iterable[int]) -> IdealSet:
    """Return the smallest two-sided ideal containing gens.

    Computed by fixed-point iteration of two-sided multiplication a*x*b and
    additive closure.
    """
    members = np.unique(np.array([0] + [int(g) for g in gens], dtype=np.int64))
    everything = np.arange(ring.order)

    while True:
        left = ring.mul[everything[:, None], members[None, :]]
        two_sided = ring.mul[left[:, :, None], everything[None, None, :]]
        grown = np.union1d(members, two_sided.ravel())
        grown = np.union1d(grown, ring.neg[grown])

        # additive closure
        while True:
            sums = np.unique(ring.add[grown[:, None], grown[None, :]])
            if len(sums) == len(grown):
                break
            grown = sums

        if len(grown) == len(members):
            return IdealSet(ring, tuple(int(m) for m in members))

        members = grown

def zero_ideal(ring: RingTable) -> IdealSet:
    return IdealSet(ring, (0,))

def unit_ideal(ring: RingTable) -> IdealSet:
    return IdealSet(ring, tuple(range(ring.order)))

def ideal_sum(I: IdealSet, J: IdealSet) -> IdealSet:
    _require_same_ring(I, J)
    return ideal_generate(I.ring, I.members + J.members)

def ideal_product(I: IdealSet, J: IdealSet) -> IdealSet:
    """Ideal generated by all products alpha*beta with alpha in I and beta in J."""
    _require_same_ring(I, J)
    products = I.ring.mul[np.ix_(np.array(I.members), np.array(J.members))]

    return ideal_generate(I.ring, products.ravel().tolist())

def sym_product(I: IdealSet, J: IdealSet) -> IdealSet:
    """The symmetrized product IJ + JI."""
    return ideal_sum(ideal_product(I, J), ideal_product(J, I))

def ideal_power(I: IdealSet, k: int) -> IdealSet:
    power = I
    for _ in range(k - 1):
        power = ideal_product(power, I)
    return power

def ideal_contains(I: IdealSet, J: IdealSet) -> bool:
    """True when J is a subset of I."""
    _require_same_ring(I, J)
    return set(J.members) <= set(I.members)

def fold_sym_product(ideals: list[IdealSet]) -> IdealSet:
    """Fold I_0, I_1, ... into I_k*F_(k-1) + F_(k-1)*I_k with F_0 = I_0."""
    folded = ideals[0]

    for ideal in ideals[1:]:
        folded = sym_product(ideal, folded)

    return folded

def enumerate_ideals(ring: RingTable, order_cap: int = 16) -> list[IdealSet]:
    """Every two-sided ideal of ring, as sums of principal ideals.

    Raises
    ------
    CapExceededError
        If the ring has more than order_cap elements
    """
    if ring.order > order_cap:
        raise CapExceededError(f'ideal lattice of {ring.spec}', order_cap, ring.order)

    found = {ideal_generate(ring, [x]) for x in range(ring.order)}
    frontier = set(found)

    while frontier:
        grown = {ideal_sum(I, J) for I in frontier for J in found} - found
        found |= grown
        frontier = grown

    return sorted(found, key=lambda ideal: (len(ideal), ideal.members))

def poly_text(coefficients: tuple[int, ...]) -> str:
    """Render ascending coefficients as '1+x+x^2' ('0' for the zero polynomial)."""
    terms = []

    for power, c in enumerate(coefficients):
        if c == 0:
            continue
        if power == 0:
            terms.append(str(c))
        else:
            variable = 'x' if power == 1 else f'x^{power}'
            terms.append(variable if c == 1 else f'{c}{variable}')

    return '+'.join(terms) if terms else '0'

_TERM = re.compile(r'(\d*)\*?(x(?:\^(\d+))?)?$')

def _poly_from_text(text: str, modulus: int) -> Optional[list[int]]:
    """Parse '1+x+2x^3' into ascending coefficients mod modulus, None if not a polynomial."""
    if not text:
        return None

    coefficients: dict[int, int] = {}

    for term in text.split('+'):
        match = _TERM.match(term)

        if not term or not match or (not match.group(1) and not match.group(2)):
            return None

        c = int(match.group(1)) if match.group(1) else 1
        power = 0 if not match.group(2) else int(match.group(3) or 1)
        coefficients[power] = coefficients.get(power, 0) + c

    degree = max(coefficients)

    return [coefficients.get(p, 0) % modulus for p in range(degree + 1)]

def parse_polynomial(text: str, modulus: int, offset: int = 0) -> list[int]:
    """Parse polynomial text, raising ParseError with the offset of the text on failure."""
    coefficients = _poly_from_text(re.sub(r'\s+', '', text), modulus)

    if coefficients is None:
        raise ParseError(f'malformed polynomial {text!r}', offset)

    return coefficients

def _poly_name(value: tuple[int, ...]) -> str:
    return poly_text(value)

def _require_same_ring(I: IdealSet, J: IdealSet) -> None:
    if I.ring is not J.ring:
        raise SpecError(f'ideals live in different rings: {I.ring.spec} and {J.ring.spec}')

def _one_value(spec: RingSpec) -> object:
    """The multiplicative identity as a model value of the given kind."""
    if spec.kind == 'modular':
        return 1
    if spec.kind == 'poly':
        return (1,) + (0,) * (spec.degree - 1)
    if spec.kind == 'product':
        return (1,) * len(spec.factors)

    k = spec.size
    return tuple(1 if r == c else 0 for r in range(k) for c in range(k))

def _ring_model(spec: RingSpec, order_cap: int) -> tuple:
    """Return (values, add, mul, name, aliases) describing the ring on hashable values.

    values is in canonical order with zero first.
    """
    if spec.kind == 'modular':
        m = spec.modulus
        return (
            list(range(m)),
            lambda x, y: (x + y) % m,
            lambda x, y: (x * y) % m,
            str,
            {},
        )

    if spec.kind == 'poly':
        p, f, d = spec.modulus, spec.poly, spec.degree

        # little-endian: the constant coefficient varies fastest
        values = [tuple(reversed(digits)) for digits in cartesian(range(p), repeat=d)]

        def poly_mul(x: tuple, y: tuple) -> tuple:
            full = [0] * (2 * d - 1)
            for i, a in enumerate(x):
                if a:
                    for j, b in enumerate(y):
                        full[i + j] += a * b

            # reduce by the monic modulus from the top degree down
            for top in range(2 * d - 2, d - 1, -1):
                c = full[top] % p
                if c:
                    for k in range(d + 1):
                        full[top - d + k] -= c * f[k]

            return tuple(c % p for c in full[:d])

        return (
            values,
            lambda x, y: tuple((a + b) % p for a, b in zip(x, y)),
            poly_mul,
            _poly_name,
            {},
        )

    if spec.kind == 'product':
        tables = [build_ring(factor, order_cap) for factor in spec.factors]
        values = list(cartesian(*(range(t.order) for t in tables)))

        return (
            values,
            lambda x, y: tuple(int(t.add[a, b]) for t, a, b in zip(tables, x, y)),
            lambda x, y: tuple(int(t.mul[a, b]) for t, a, b in zip(tables, x, y)),
            lambda x: '(' + ','.join(t.names[a] for t, a in zip(tables, x)) + ')',
            {},
        )

    base = build_ring(spec.base, order_cap)
    k = spec.size
    free = [(r, c) for r in range(k) for c in range(k) if spec.kind == 'matrix' or r <= c]
    values = []

    for digits in cartesian(range(base.order), repeat=len(free)):
        entries = [0] * (k * k)
        for (r, c), d in zip(free, digits):
            entries[r * k + c] = d
        values.append(tuple(entries))

    def mat_mul(x: tuple, y: tuple) -> tuple:
        out = []
        for r in range(k):
            for c in range(k):
                acc = 0
                for j in range(k):
                    acc = base.add[acc, base.mul[x[r * k + j], y[j * k + c]]]
                out.append(int(acc))
        return tuple(out)

    def mat_name(x: tuple) -> str:
        rows = [','.join(base.names[x[r * k + c]] for c in range(k)) for r in range(k)]
        return '[' + ';'.join(rows) + ']'

    aliases = {}
    for r, c in free:
        unit_entries = [0] * (k * k)
        unit_entries[r * k + c] = 1
        aliases[f'E{r + 1}{c + 1}'] = tuple(unit_entries)

    return (
        values,
        lambda x, y: tuple(int(base.add[a, b]) for a, b in zip(x, y)),
        mat_mul,
        mat_name,
        aliases,
    )
