"""Module with the commutator identity checkers and the generator rewriting engine.

Conventions: [x, y] = x y x^-1 y^-1 and ^x y = x y x^-1.

The identity checkers work on stacks of matrices carried together with their
inverses (``Pair``), so a fuzzing run over ten thousand random triples is a
handful of vectorized table lookups rather than ten thousand matrix
inversions.
"""
from __future__ import annotations
from dataclasses import dataclass, field
from typing import Optional, Sequence
import numpy as np
from core.errors import NOT_VERIFIED, MathematicalMismatch, NotInvertibleError, PreconditionError, SpecError
from core.matrix_group import (
    GroupSet, Mat, batch_add, batch_in_congruence, batch_inverse, batch_keys, batch_mul, batch_sub,
    elementary, entries_in_ideal, identity, mat_add, mat_inverse, mat_is_invertible, mat_mul, mat_product,
    mat_sub, render_entries
)
from core.ring_core import IdealSet, RingTable, sym_product
from core.subgroup_engine import random_elements

@dataclass(frozen=True)
class FuzzResult:
    """Outcome of one randomized or exhaustive identity run.

    Attributes
    ----------
    name : str
        Identity or lemma checked
    checked : int
        Number of instances evaluated
    failures : int
        Number of instances where the two sides differ
    witness : str, optional
        Rendering of the first failing instance, or the cap that stopped the run
    not_verified : bool
        The check hit a cap before evaluating anything
    """
    name: str
    checked: int
    failures: int = 0
    witness: Optional[str] = None
    not_verified: bool = False

    @classmethod
    def capped(cls, name: str, reason: str) -> FuzzResult:
        return cls(name, 0, 0, reason, not_verified=True)

    @property
    def failed(self) -> bool:
        return self.failures > 0

    @property
    def passed(self) -> bool:
        return not self.failed and not self.not_verified

    @property
    def status(self) -> str:
        if self.not_verified:
            return NOT_VERIFIED
        return 'failed' if self.failed else 'passed'

    def to_report(self) -> dict:
        return {
            'name': self.name,
            'status': self.status,
            'checked': self.checked,
            'failures': self.failures,
            'witness': self.witness,
        }

@dataclass(frozen=True, eq=False)
class Pair:
    """A stack of matrices together with the stack of their inverses."""
    value: np.ndarray
    inverse: np.ndarray
    ring: RingTable
    n: int

    @classmethod
    def of(cls, mats: Sequence[Mat]) -> Pair:
        ring, n = mats[0].ring, mats[0].n
        value = np.array([m.entries for m in mats], dtype=np.int64)
        inverse, ok = batch_inverse(value, ring, n)

        if not ok.all():
            raise NotInvertibleError(f'matrix {mats[int(np.argmin(ok))].render()} is not invertible')

        return cls(value, inverse, ring, n)

    def __mul__(self, other: Pair) -> Pair:
        return Pair(
            batch_mul(self.value, other.value, self.ring, self.n),
            batch_mul(other.inverse, self.inverse, self.ring, self.n),
            self.ring,
            self.n
        )

    def inv(self) -> Pair:
        return Pair(self.inverse, self.value, self.ring, self.n)

    def keys(self) -> np.ndarray:
        return batch_keys(self.value, self.ring, self.n)

def comm(x: Pair, y: Pair) -> Pair:
    return x * y * x.inv() * y.inv()

def conj(x: Pair, y: Pair) -> Pair:
    return x * y * x.inv()

def commutator(x: Mat, y: Mat) -> Mat:
    """[x, y] = x y x^-1 y^-1."""
    return mat_product([x, y, mat_inverse(x), mat_inverse(y)])

def conjugate(x: Mat, y: Mat) -> Mat:
    """^x y = x y x^-1."""
    return mat_product([x, y, mat_inverse(x)])

def _is_one(p: Pair) -> np.ndarray:
    return (p.value == identity(p.ring, p.n).array[None, :]).all(axis=1)

def _same(p: Pair, q: Pair) -> np.ndarray:
    return (p.value == q.value).all(axis=1)

def identity_table(x: Pair, y: Pair, z: Pair) -> dict[str, np.ndarray]:
    """Row-wise truth of every group identity on the triples (x, y, z)."""
    xi, yi, zi = x.inv(), y.inv(), z.inv()

    return {
        'commutator-of-product-right': _same(comm(x, y * z), comm(x, y) * conj(y, comm(x, z))),
        'commutator-of-product-left': _same(comm(x * y, z), conj(x, comm(y, z)) * comm(x, z)),
        'hall-witt': _is_one(conj(x, comm(comm(xi, y), z)) * conj(z, comm(comm(zi, x), y)) * conj(y, comm(comm(yi, z), x))),
        'conjugate-right': _same(comm(x, conj(y, z)), conj(y, comm(conj(yi, x), z))),
        'conjugate-left': _same(comm(conj(y, x), z), conj(y, comm(x, conj(yi, z)))),
        'inverse-swap': _same(comm(x, y).inv(), comm(y, x)),
        'hall-witt-variant': _same(comm(x, comm(yi, z)), conj(yi * x, comm(comm(xi, y), z)) * conj(yi * z, comm(comm(zi, x), y))),
    }

def check_group_identities(x: Mat, y: Mat, z: Mat) -> bool:
    """True iff every commutator identity, the Hall-Witt identity and its variant hold for (x, y, z).

    Raises
    ------
    NotInvertibleError
        If any input is not invertible
    """
    table = identity_table(Pair.of([x]), Pair.of([y]), Pair.of([z]))
    return all(bool(v[0]) for v in table.values())

def check_product_expansions(x: Mat, us: Sequence[Mat]) -> dict[str, bool]:
    """Check [x, u_1...u_k] and [u_1...u_k, x] against their products of conjugated commutators."""
    if not 1 <= len(us) <= 4:
        raise SpecError('product expansions are checked for 1 to 4 factors')

    k = len(us)
    right = identity(x.ring, x.n)
    left = identity(x.ring, x.n)

    for i in range(k):
        right = mat_mul(right, conjugate(mat_product([identity(x.ring, x.n)] + list(us[:i])), commutator(x, us[i])))
        left = mat_mul(left, conjugate(mat_product([identity(x.ring, x.n)] + list(us[:k - i - 1])), commutator(us[k - i - 1], x)))

    return {
        'product-expansion-right': commutator(x, mat_product(us)) == right,
        'product-expansion-left': commutator(mat_product(us), x) == left,
    }

def check_elementary_relations(ring: RingTable, n: int, i: int, j: int, k: int, l: int, a: int, b: int) -> dict[str, bool]:
    """The relations among elementary matrices that apply to the index pattern (i, j), (k, l).

    additivity: e_{i,j}(a) e_{i,j}(b) = e_{i,j}(a+b), checked when (i, j) == (k, l)
    commuting: [e_{i,j}(a), e_{k,l}(b)] = 1 when i != l and j != k
    chevalley: [e_{i,j}(a), e_{j,l}(b)] = e_{i,l}(ab) when j == k and i != l
    """
    x, y = elementary(ring, n, i, j, a), elementary(ring, n, k, l, b)
    result = {}

    if (i, j) == (k, l):
        result['additivity'] = mat_mul(x, y) == elementary(ring, n, i, j, int(ring.add[a, b]))
    if i != l and j != k:
        result['commuting'] = commutator(x, y).is_identity
    if j == k and i != l:
        result['chevalley'] = commutator(x, y) == elementary(ring, n, i, l, int(ring.mul[a, b]))

    return result

def _elementary_batch(ring: RingTable, n: int, i: int, j: int, values: np.ndarray) -> np.ndarray:
    batch = np.repeat(identity(ring, n).array[None, :], len(values), axis=0)
    batch[:, (i - 1) * n + (j - 1)] = values
    return batch

def fuzz_elementary_relations(ring: RingTable, n: int, samples: int, rng: np.random.Generator) -> FuzzResult:
    """Every index pattern with samples random (a, b) each, all relations that apply."""
    pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    checked = failures = 0
    witness = None

    for i, j in pairs:
        for k, l in pairs:
            a = rng.integers(0, ring.order, samples)
            b = rng.integers(0, ring.order, samples)
            x = _elementary_batch(ring, n, i, j, a)
            y = _elementary_batch(ring, n, k, l, b)
            x_inverse = _elementary_batch(ring, n, i, j, ring.neg[a])
            y_inverse = _elementary_batch(ring, n, k, l, ring.neg[b])
            c = Pair(x, x_inverse, ring, n) * Pair(y, y_inverse, ring, n) * Pair(x_inverse, x, ring, n) * Pair(y_inverse, y, ring, n)
            bad = np.zeros(samples, dtype=bool)

            if (i, j) == (k, l):
                bad |= ~(batch_mul(x, y, ring, n) == _elementary_batch(ring, n, i, j, ring.add[a, b])).all(axis=1)
            if i != l and j != k:
                bad |= ~_is_one(c)
            if j == k and i != l:
                bad |= ~(c.value == _elementary_batch(ring, n, i, l, ring.mul[a, b])).all(axis=1)

            checked += samples
            failures += int(bad.sum())

            if witness is None and bad.any():
                row = int(np.argmax(bad))
                witness = f'e({i},{j};{ring.names[a[row]]}), e({k},{l};{ring.names[b[row]]})'

    return FuzzResult('elementary-relations', checked, failures, witness)

def fuzz_identities(group: GroupSet, count: int, rng: np.random.Generator, length: int = 24) -> FuzzResult:
    """Evaluate every group identity on count random triples from group.

    The triples are random words in the generators of group, carried with
    their inverses.
    """
    x, y, z = (Pair(*random_elements(group, count, rng, length), group.ring, group.n) for _ in range(3))
    table = identity_table(x, y, z)
    failures = 0
    witness = None

    for name, holds in table.items():
        failures += int((~holds).sum())
        if witness is None and not holds.all():
            row = int(np.argmin(holds))
            witness = f'{name}: ' + ' | '.join(render_entries(p.value[row], group.ring, group.n) for p in (x, y, z))

    return FuzzResult('group-identities', count * len(table), failures, witness)

@dataclass(frozen=True)
class Factor:
    """One factor of a GenWord.

    kind is 'elem' (e_{i,j}(value)), 'inv' (its inverse), 'conj' (^{left}right)
    or 'comm' ([left, right]).
    """
    kind: str
    i: int = 0
    j: int = 0
    value: int = 0
    left: Optional['GenWord'] = None
    right: Optional['GenWord'] = None

@dataclass(frozen=True, eq=False)
class GenWord:
    """A structured product of elementary factors with its evaluated matrix.

    Attributes
    ----------
    ring : RingTable
        Ring of the entries
    n : int
        Dimension
    factors : tuple[Factor, ...]
        Factors in multiplication order
    mat : Mat
        Evaluation of the factors
    case : str
        Rewriting case that produced the word, empty for plain words
    """
    ring: RingTable
    n: int
    factors: tuple[Factor, ...]
    mat: Mat = field(default=None)
    case: str = ''

    def __post_init__(self):
        if self.mat is None:
            object.__setattr__(self, 'mat', evaluate_word(self))

    def verify(self) -> bool:
        return evaluate_word(self) == self.mat

    def render(self) -> str:
        return render_word(self)

    def __mul__(self, other: GenWord) -> GenWord:
        return GenWord(self.ring, self.n, self.factors + other.factors)

def evaluate_word(word: GenWord) -> Mat:
    result = identity(word.ring, word.n)

    for f in word.factors:
        if f.kind == 'elem':
            value = elementary(word.ring, word.n, f.i, f.j, f.value)
        elif f.kind == 'inv':
            value = elementary(word.ring, word.n, f.i, f.j, int(word.ring.neg[f.value]))
        elif f.kind == 'conj':
            value = conjugate(evaluate_word(f.left), evaluate_word(f.right))
        elif f.kind == 'comm':
            value = commutator(evaluate_word(f.left), evaluate_word(f.right))
        else:
            raise SpecError(f'unknown factor kind {f.kind}')
        result = mat_mul(result, value)

    return result

def word_elem(ring: RingTable, n: int, i: int, j: int, value: int) -> GenWord:
    return GenWord(ring, n, (Factor('elem', i, j, int(value)),))

def word_conj(w: GenWord, v: GenWord) -> GenWord:
    return GenWord(w.ring, w.n, (Factor('conj', left=w, right=v),))

def word_comm(x: GenWord, y: GenWord) -> GenWord:
    return GenWord(x.ring, x.n, (Factor('comm', left=x, right=y),))

def render_word(word: GenWord) -> str:
    """Text form such as ^{e(1,2;a)}e(2,3;b); the empty word renders as 1."""
    if not word.factors:
        return '1'

    parts = []

    for f in word.factors:
        if f.kind == 'elem':
            parts.append(f'e({f.i},{f.j};{word.ring.names[f.value]})')
        elif f.kind == 'inv':
            parts.append(f'e({f.i},{f.j};{word.ring.names[f.value]})^-1')
        elif f.kind == 'conj':
            inner = render_word(f.right)
            parts.append('^{' + render_word(f.left) + '}' + (inner if len(f.right.factors) == 1 else f'({inner})'))
        else:
            parts.append(f'[{render_word(f.left)},{render_word(f.right)}]')

    return ''.join(parts)

def comgenerator_decompose(
    ring: RingTable,
    n: int,
    i1: int,
    j1: int,
    alpha: int,
    i: int,
    j: int,
    a: int,
    beta: int,
    I: Optional[IdealSet] = None,
    J: Optional[IdealSet] = None
) -> GenWord:
    """Rewrite [e_{i1,j1}(alpha), ^{e_{i,j}(a)} e_{j,i}(beta)] as a word in the commutator generators.

    ===========================  ==========================================
    index pattern                result
    ===========================  ==========================================
    i1 = j, j1 = i               the input commutator itself
    i1 = j, j1 != i              ^{e_{i,j}(a)} e_{j,j1}(beta a alpha)
    i1 != j, j1 = i              ^{e_{i,j}(a)} e_{i1,i}(alpha a beta)
    i1 = i, j1 = j               ^{e_{i,j}(a)} [e_{i,j}(alpha), e_{j,i}(beta)]
    i1 = i, j1 != j              ^{e_{i,j}(a)} e_{j,j1}(-beta alpha)
    i1 != i, j1 = j              ^{e_{i,j}(a)} e_{i1,i}(alpha beta)
    {i1, j1} disjoint from {i,j}  empty word
    ===========================  ==========================================

    Raises
    ------
    SpecError
        On i1 == j1, i == j, an index out of range, or a disjoint pattern with n < 4
    PreconditionError
        If alpha is not in I or beta is not in J
    MathematicalMismatch
        If the word does not evaluate to the input commutator
    """
    if i1 == j1 or i == j:
        raise SpecError(f'index constraint violated: ({i1},{j1}), ({i},{j})')
    if not all(1 <= v <= n for v in (i1, j1, i, j)):
        raise SpecError(f'indices ({i1},{j1}), ({i},{j}) out of range for n={n}')
    if I is not None and alpha not in I:
        raise PreconditionError(f'{ring.names[alpha]} is not in {I.render()}')
    if J is not None and beta not in J:
        raise PreconditionError(f'{ring.names[beta]} is not in {J.render()}')

    mul, neg = ring.mul, ring.neg
    frame = word_elem(ring, n, i, j, a)

    if i1 == j and j1 == i:
        case = 'opposite'
        word = word_comm(word_elem(ring, n, j, i, alpha), word_conj(frame, word_elem(ring, n, j, i, beta)))
    elif i1 == j:
        case = 'starts-at-column'
        word = word_conj(frame, word_elem(ring, n, j, j1, mul[mul[beta, a], alpha]))
    elif j1 == i:
        case = 'ends-at-row'
        word = word_conj(frame, word_elem(ring, n, i1, i, mul[mul[alpha, a], beta]))
    elif i1 == i and j1 == j:
        case = 'same'
        word = word_conj(frame, word_comm(word_elem(ring, n, i, j, alpha), word_elem(ring, n, j, i, beta)))
    elif i1 == i:
        case = 'same-row'
        word = word_conj(frame, word_elem(ring, n, j, j1, neg[mul[beta, alpha]]))
    elif j1 == j:
        case = 'same-column'
        word = word_conj(frame, word_elem(ring, n, i1, i, mul[alpha, beta]))
    else:
        if n < 4:
            raise SpecError('disjoint index patterns need n >= 4')
        case = 'disjoint'
        word = GenWord(ring, n, ())

    word = GenWord(ring, n, word.factors, word.mat, case)
    target = commutator(elementary(ring, n, i1, j1, alpha), conjugate(elementary(ring, n, i, j, a), elementary(ring, n, j, i, beta)))

    if word.mat != target:
        raise MathematicalMismatch(f'rewriting case {case} does not evaluate to its input', target.render())

    return word

def check_conjugation_reduction(c: Mat, i1: int, j1: int, a: int, alpha: int, i: int, j: int, b: int, beta: int) -> bool:
    """^c[^{e_{i1,j1}(a)} e_{j1,i1}(alpha), ^{e_{i,j}(b)} e_{j,i}(beta)]
    == ^{c e_{i1,j1}(a)}[e_{j1,i1}(alpha), ^{e_{i1,j1}(-a) e_{i,j}(b)} e_{j,i}(beta)]."""
    ring, n = c.ring, c.n
    outer = elementary(ring, n, i1, j1, a)
    left = conjugate(c, commutator(
        conjugate(outer, elementary(ring, n, j1, i1, alpha)),
        conjugate(elementary(ring, n, i, j, b), elementary(ring, n, j, i, beta))
    ))
    right = conjugate(mat_mul(c, outer), commutator(
        elementary(ring, n, j1, i1, alpha),
        conjugate(mat_mul(elementary(ring, n, i1, j1, int(ring.neg[a])), elementary(ring, n, i, j, b)), elementary(ring, n, j, i, beta))
    ))

    return left == right

@dataclass(frozen=True, eq=False)
class ExpansionParts:
    """e = 1 + delta, e^-1 = 1 + delta', g = 1 + eps, g^-1 = 1 + eps'."""
    delta: Mat
    delta_inv: Mat
    eps: Mat
    eps_inv: Mat

    @classmethod
    def of(cls, e: Mat, g: Mat) -> ExpansionParts:
        one = identity(e.ring, e.n)
        return cls(mat_sub(e, one), mat_sub(mat_inverse(e), one), mat_sub(g, one), mat_sub(mat_inverse(g), one))

    def invariants_hold(self) -> bool:
        """delta + delta' + delta delta' = delta + delta' + delta' delta = 0, and likewise for eps."""
        zero = mat_sub(self.delta, self.delta)

        for x, y in ((self.delta, self.delta_inv), (self.eps, self.eps_inv)):
            base = mat_add(x, y)
            if mat_add(base, mat_mul(x, y)) != zero or mat_add(base, mat_mul(y, x)) != zero:
                return False

        return True

    def seven_terms(self) -> Mat:
        d, dp, e, ep = self.delta, self.delta_inv, self.eps, self.eps_inv
        terms = [
            mat_mul(dp, ep), mat_mul(e, dp), mat_product([e, dp, ep]), mat_product([d, dp, ep]),
            mat_product([d, e, dp]), mat_product([d, e, dp, ep])
        ]
        result = identity(d.ring, d.n)

        for term in terms:
            result = mat_add(result, term)

        return result

def expansion_check(e: Mat, g: Mat, I: IdealSet, J: IdealSet) -> bool:
    """Seven-term expansion of [e, g] and the entry bound IJ + JI, for g in GL_n(A, I), e in GL_n(A, J).

    Raises
    ------
    PreconditionError
        If e is not in GL_n(A, J) or g is not in GL_n(A, I)
    """
    if not (mat_is_invertible(e) and entries_in_ideal(e, J)):
        raise PreconditionError(f'{e.render()} is not in GL(A,{J.render()})')
    if not (mat_is_invertible(g) and entries_in_ideal(g, I)):
        raise PreconditionError(f'{g.render()} is not in GL(A,{I.render()})')

    parts = ExpansionParts.of(e, g)
    direct = commutator(e, g)

    return parts.invariants_hold() and parts.seven_terms() == direct and entries_in_ideal(direct, sym_product(I, J))

def fuzz_expansion(e: Pair, g: Pair, I: IdealSet, J: IdealSet) -> FuzzResult:
    """Vectorized expansion_check over stacks of pairs, with the full sixteen-term product as oracle."""
    ring, n = e.ring, e.n
    one = identity(ring, n).array[None, :]
    d, dp = batch_sub(e.value, one, ring), batch_sub(e.inverse, one, ring)
    x, xp = batch_sub(g.value, one, ring), batch_sub(g.inverse, one, ring)

    def mul(*stacks: np.ndarray) -> np.ndarray:
        result = stacks[0]
        for s in stacks[1:]:
            result = batch_mul(result, s, ring, n)
        return result

    seven = one
    for term in (mul(dp, xp), mul(x, dp), mul(x, dp, xp), mul(d, dp, xp), mul(d, x, dp), mul(d, x, dp, xp)):
        seven = batch_add(seven, term, ring)

    # (1 + d)(1 + x)(1 + d')(1 + x') multiplied out term by term
    sixteen = np.zeros_like(d)
    factors = (d, x, dp, xp)
    for mask in range(16):
        chosen = [factors[p] for p in range(4) if mask >> p & 1]
        sixteen = batch_add(sixteen, mul(*chosen) if chosen else np.repeat(one, len(d), axis=0), ring)

    direct = comm(e, g).value
    bound = sym_product(I, J)
    ok = (
        (seven == direct).all(axis=1)
        & (sixteen == direct).all(axis=1)
        & batch_in_congruence(direct, bound, n)
        & batch_in_congruence(e.value, J, n)
        & batch_in_congruence(g.value, I, n)
    )
    witness = None

    if not ok.all():
        row = int(np.argmin(ok))
        witness = f'{render_entries(e.value[row], ring, n)} | {render_entries(g.value[row], ring, n)}'

    return FuzzResult('commutator-expansion', len(ok), int((~ok).sum()), witness)
