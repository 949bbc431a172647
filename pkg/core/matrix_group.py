"""Module holding exact n x n matrix arithmetic over a RingTable and the generator factories.

Matrices are stored as row-major tuples of ring element indices.  Every matrix
has a canonical mixed-radix packing key (row-major, radix = ring order, first
entry most significant), which is how subgroups are stored and compared.

Most computations go through the batch functions, which work on numpy stacks of
shape (count, n*n) so whole frontiers of a closure are multiplied at once.

routine listings
----------------
elementary, mat_mul, mat_is_invertible, mat_inverse
    Single matrix operations
batch_mul, batch_inverse, batch_keys, batch_decode
    Vectorized counterparts used by subgroup_engine
congruence_members
    Enumerate GL_n(A, I) as a GroupSet
suslin_generators, gl_generators, elementary_generators, comgenerator_generators
    Generator factories
semilocal_decompose
    Split g in GL_n(A, K) as an elementary factor times a one-spot diagonal matrix
"""
from __future__ import annotations
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Optional, Sequence
import numpy as np
from core.errors import CapExceededError, MathematicalMismatch, NotInvertibleError, SpecError
from core.ring_core import IdealSet, RingTable

MAX_N = 4
KEY_LIMIT = 2 ** 63

@dataclass(frozen=True, eq=False)
class Mat:
    """An n x n matrix over a finite ring.

    Attributes
    ----------
    ring : RingTable
        Ring holding the entries
    n : int
        Dimension
    entries : tuple[int, ...]
        Row-major element indices
    """
    ring: RingTable
    n: int
    entries: tuple[int, ...]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.ring is other.ring and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.n, self.entries))

    def __getitem__(self, position: tuple[int, int]) -> int:
        """Entry at 1-based (row, column)."""
        row, column = position
        return self.entries[(row - 1) * self.n + (column - 1)]

    @property
    def key(self) -> int:
        return pack_key(self.entries, self.ring.order)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)

    @property
    def is_identity(self) -> bool:
        return self.entries == identity(self.ring, self.n).entries

    def render(self) -> str:
        return render_entries(self.entries, self.ring, self.n)

    def __repr__(self) -> str:
        return f'Mat({self.render()})'

def render_entries(entries: Sequence[int], ring: RingTable, n: int) -> str:
    """Rows separated by ';', entries by ',', elements by canonical name."""
    rows = []

    for r in range(n):
        rows.append(','.join(ring.names[int(e)] for e in entries[r * n:(r + 1) * n]))

    return ';'.join(rows)

def pack_key(entries: Iterable[int], radix: int) -> int:
    key = 0
    for e in entries:
        key = key * radix + int(e)
    return key

def unpack_key(key: int, ring: RingTable, n: int) -> Mat:
    digits = []

    for _ in range(n * n):
        key, digit = divmod(key, ring.order)
        digits.append(digit)

    return Mat(ring, n, tuple(reversed(digits)))

@lru_cache(maxsize=None)
def key_weights(radix: int, n: int) -> np.ndarray:
    """Positional weights of the packing key, raise CapExceededError if keys overflow int64."""
    if radix ** (n * n) > KEY_LIMIT:
        raise CapExceededError(f'packing key width for radix {radix}, n={n}', KEY_LIMIT, radix ** (n * n))

    weights = np.array([radix ** (n * n - 1 - p) for p in range(n * n)], dtype=np.int64)
    weights.setflags(write=False)

    return weights

def batch_keys(batch: np.ndarray, ring: RingTable, n: int) -> np.ndarray:
    return np.atleast_2d(batch) @ key_weights(ring.order, n)

def batch_decode(keys: np.ndarray, ring: RingTable, n: int) -> np.ndarray:
    weights = key_weights(ring.order, n)
    return (np.asarray(keys, dtype=np.int64)[:, None] // weights[None, :]) % ring.order

def identity(ring: RingTable, n: int) -> Mat:
    return Mat(ring, n, tuple(1 if r == c else 0 for r in range(n) for c in range(n)))

def mat_from_rows(ring: RingTable, rows: Sequence[Sequence]) -> Mat:
    """Build a matrix from rows of element indices or element names."""
    n = len(rows)
    entries = []

    for row in rows:
        if len(row) != n:
            raise SpecError('matrix rows must all have length n')
        entries.extend(ring.index_of(e) if isinstance(e, str) else int(e) for e in row)

    _check_dimension(n)

    return Mat(ring, n, tuple(entries))

def diagonal(ring: RingTable, n: int, position: int, unit: int) -> Mat:
    """Identity matrix with unit at the 1-based diagonal position."""
    entries = list(identity(ring, n).entries)
    entries[(position - 1) * n + (position - 1)] = unit

    return Mat(ring, n, tuple(entries))

def elementary(ring: RingTable, n: int, i: int, j: int, alpha: int) -> Mat:
    """Elementary matrix e_{i,j}(alpha): identity with alpha at 1-based (i, j).

    Raises
    ------
    SpecError
        If i == j or an index is out of range
    """
    _check_dimension(n)

    if i == j:
        raise SpecError(f'elementary matrix needs i != j, got i = j = {i}')
    if not (1 <= i <= n and 1 <= j <= n):
        raise SpecError(f'index ({i},{j}) out of range for n={n}')

    entries = list(identity(ring, n).entries)
    entries[(i - 1) * n + (j - 1)] = int(alpha)

    return Mat(ring, n, tuple(entries))

def batch_mul(x: np.ndarray, y: np.ndarray, ring: RingTable, n: int) -> np.ndarray:
    """Row-wise product of two stacks of matrices (a single row broadcasts)."""
    x = np.atleast_2d(x)
    y = np.atleast_2d(y)
    add, mul = ring.add, ring.mul
    out = np.empty((max(len(x), len(y)), n * n), dtype=np.int64)

    for i in range(n):
        for k in range(n):
            acc = mul[x[:, i * n], y[:, k]]
            for j in range(1, n):
                acc = add[acc, mul[x[:, i * n + j], y[:, j * n + k]]]
            out[:, i * n + k] = acc

    return out

def batch_add(x: np.ndarray, y: np.ndarray, ring: RingTable) -> np.ndarray:
    return ring.add[np.atleast_2d(x), np.atleast_2d(y)]

def batch_sub(x: np.ndarray, y: np.ndarray, ring: RingTable) -> np.ndarray:
    return ring.add[np.atleast_2d(x), ring.neg[np.atleast_2d(y)]]

def mat_mul(x: Mat, y: Mat) -> Mat:
    _check_compatible(x, y)
    return Mat(x.ring, x.n, tuple(int(e) for e in batch_mul(x.array, y.array, x.ring, x.n)[0]))

def mat_add(x: Mat, y: Mat) -> Mat:
    _check_compatible(x, y)
    return Mat(x.ring, x.n, tuple(int(e) for e in batch_add(x.array, y.array, x.ring)[0]))

def mat_sub(x: Mat, y: Mat) -> Mat:
    _check_compatible(x, y)
    return Mat(x.ring, x.n, tuple(int(e) for e in batch_sub(x.array, y.array, x.ring)[0]))

def mat_product(factors: Sequence[Mat]) -> Mat:
    result = factors[0]
    for factor in factors[1:]:
        result = mat_mul(result, factor)
    return result

@lru_cache(maxsize=32)
def _all_vectors(order: int, n: int) -> np.ndarray:
    """Every column vector of A^n, in packing order."""
    vectors = np.array(np.unravel_index(np.arange(order ** n), (order,) * n)).T.astype(np.int64)
    vectors.setflags(write=False)

    return vectors

def _images(x: np.ndarray, ring: RingTable, n: int) -> np.ndarray:
    """x*v for every matrix in x and every vector v, packed as vector keys, shape (count, |A|^n)."""
    vectors = _all_vectors(ring.order, n)
    keys = np.zeros((len(x), len(vectors)), dtype=np.int64)

    for i in range(n):
        acc = ring.mul[x[:, i * n][:, None], vectors[None, :, 0]]
        for j in range(1, n):
            acc = ring.add[acc, ring.mul[x[:, i * n + j][:, None], vectors[None, :, j]]]
        keys = keys * ring.order + acc

    return keys

def _chunks(count: int, width: int, budget: int = 2 ** 21) -> Iterable[slice]:
    step = max(1, budget // max(1, width))
    for start in range(0, count, step):
        yield slice(start, min(count, start + step))

def batch_inverse(x: np.ndarray, ring: RingTable, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Invert a stack of matrices by a columnwise solve of x*X = 1 over A^n.

    A finite ring is Dedekind-finite, so a matrix whose left multiplication map
    on A^n is a bijection is two-sided invertible and the right inverse found
    here is the inverse.

    Returns
    -------
    tuple[numpy.ndarray, numpy.ndarray]
        Inverses (rows of non-invertible inputs are zero) and the invertibility mask
    """
    x = np.atleast_2d(x)

    if ring.commutative:
        return _adjugate_inverse(x, ring, n)

    return solve_inverse(x, ring, n)

def solve_inverse(x: np.ndarray, ring: RingTable, n: int) -> tuple[np.ndarray, np.ndarray]:
    """The columnwise solve behind batch_inverse, valid over any finite ring."""
    x = np.atleast_2d(x)
    vectors = _all_vectors(ring.order, n)
    targets = np.array([ring.order ** (n - 1 - k) for k in range(n)], dtype=np.int64)
    inverses = np.zeros_like(x)
    ok = np.zeros(len(x), dtype=bool)

    for part in _chunks(len(x), len(vectors) * n):
        images = _images(x[part], ring, n)
        hits = images[:, :, None] == targets[None, None, :]
        solved = hits.any(axis=1)
        choice = hits.argmax(axis=1)
        ok[part] = solved.all(axis=1)

        for k in range(n):
            for i in range(n):
                inverses[part, i * n + k] = vectors[choice[:, k], i]

    inverses[~ok] = 0

    return inverses, ok

def _adjugate_inverse(x: np.ndarray, ring: RingTable, n: int) -> tuple[np.ndarray, np.ndarray]:
    det_inverse = ring.unit_inverse[_leibniz(x, ring, n)]
    ok = det_inverse >= 0
    scale = np.where(ok, det_inverse, 0)
    inverses = np.zeros_like(x)

    for r in range(n):
        for c in range(n):
            keep = [p * n + q for p in range(n) for q in range(n) if p != r and q != c]
            cofactor = _leibniz(x[:, keep], ring, n - 1)
            if (r + c) % 2:
                cofactor = ring.neg[cofactor]
            inverses[:, c * n + r] = ring.mul[scale, cofactor]

    inverses[~ok] = 0

    return inverses, ok

def _leibniz(x: np.ndarray, ring: RingTable, n: int) -> np.ndarray:
    if n == 0:
        return np.ones(len(x), dtype=np.int64)

    det = np.zeros(len(x), dtype=np.int64)

    for perm in permutations(range(n)):
        term = x[:, perm[0]]
        for row in range(1, n):
            term = ring.mul[term, x[:, row * n + perm[row]]]

        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        det = ring.add[det, ring.neg[term] if inversions % 2 else term]

    return det

def batch_kernel_trivial(x: np.ndarray, ring: RingTable, n: int) -> np.ndarray:
    """True where x*v == 0 only for v == 0, the invertibility test valid over any finite ring."""
    x = np.atleast_2d(x)
    result = np.empty(len(x), dtype=bool)

    for part in _chunks(len(x), ring.order ** n):
        result[part] = (_images(x[part], ring, n) == 0).sum(axis=1) == 1

    return result

def batch_determinant(x: np.ndarray, ring: RingTable, n: int) -> np.ndarray:
    """Leibniz determinant, meaningful for commutative rings only."""
    if not ring.commutative:
        raise SpecError(f'determinant requested over non-commutative ring {ring.spec}')

    return _leibniz(np.atleast_2d(x), ring, n)

def batch_is_invertible(x: np.ndarray, ring: RingTable, n: int, method: str = 'auto') -> np.ndarray:
    """Invertibility of a stack of matrices.

    Parameters
    ----------
    method : str, optional
        'kernel' (any ring), 'determinant' (commutative rings) or 'auto' which
        takes the determinant fast path whenever the ring is commutative
    """
    if method == 'auto':
        method = 'determinant' if ring.commutative else 'kernel'

    if method == 'determinant':
        return ring.unit_inverse[batch_determinant(x, ring, n)] >= 0

    return batch_kernel_trivial(x, ring, n)

def determinant(x: Mat) -> int:
    return int(batch_determinant(x.array, x.ring, x.n)[0])

def mat_is_invertible(x: Mat, method: str = 'auto') -> bool:
    return bool(batch_is_invertible(x.array, x.ring, x.n, method)[0])

def mat_inverse(x: Mat) -> Mat:
    """Inverse of x, raise NotInvertibleError when it has none."""
    inverse, ok = batch_inverse(x.array, x.ring, x.n)

    if not ok[0]:
        raise NotInvertibleError(f'matrix {x.render()} is not invertible')

    return Mat(x.ring, x.n, tuple(int(e) for e in inverse[0]))

def entries_in_ideal(x: Mat, ideal: IdealSet) -> bool:
    """True when every entry of x - 1 lies in ideal."""
    difference = batch_sub(x.array, identity(x.ring, x.n).array, x.ring)
    return bool(ideal.mask[difference].all())

def batch_in_congruence(x: np.ndarray, ideal: IdealSet, n: int) -> np.ndarray:
    """Row-wise: x is congruent to the identity modulo ideal."""
    ring = ideal.ring
    difference = batch_sub(x, identity(ring, n).array, ring)
    return ideal.mask[difference].all(axis=1)

@dataclass(frozen=True, eq=False)
class GenDescriptor:
    """A named generator together with its evaluated matrix.

    Attributes
    ----------
    kind : str
        'elementary' e_{i,j}(value), 'conjugated' ^{outer}inner, 'diagonal'
        (unit at diagonal position), 'commutator' [outer[0], inner] or 'derived'
        (a matrix with provenance label only)
    mat : Mat
        Evaluated matrix
    """
    kind: str
    mat: Mat
    i: int = 0
    j: int = 0
    value: int = 0
    outer: tuple['GenDescriptor', ...] = ()
    inner: Optional['GenDescriptor'] = None
    position: int = 0
    label: str = ''

    def evaluate(self) -> Mat:
        """Recompute the matrix from the structure alone."""
        ring, n = self.mat.ring, self.mat.n

        if self.kind == 'elementary':
            return elementary(ring, n, self.i, self.j, self.value)
        if self.kind == 'diagonal':
            return diagonal(ring, n, self.position, self.value)
        if self.kind == 'conjugated':
            frame = mat_product([d.evaluate() for d in self.outer])
            return mat_product([frame, self.inner.evaluate(), mat_inverse(frame)])
        if self.kind == 'commutator':
            x, y = self.outer[0].evaluate(), self.inner.evaluate()
            return mat_product([x, y, mat_inverse(x), mat_inverse(y)])

        return self.mat

    def verify(self) -> bool:
        return self.evaluate() == self.mat

    def inverse(self) -> GenDescriptor:
        """Descriptor of the inverse matrix, symbolic where the kind allows it."""
        cached = self.__dict__.get('_inverse')
        if cached is not None:
            return cached

        ring, n = self.mat.ring, self.mat.n

        if self.kind == 'elementary':
            result = elementary_descriptor(ring, n, self.i, self.j, int(ring.neg[self.value]))
        elif self.kind == 'diagonal':
            result = diagonal_descriptor(ring, n, self.position, ring.inverse(self.value))
        elif self.kind == 'conjugated':
            result = conjugated_descriptor(self.outer, self.inner.inverse())
        else:
            result = derived_descriptor(mat_inverse(self.mat), f'({self.render()})^-1')

        object.__setattr__(self, '_inverse', result)

        return result

    def render(self) -> str:
        ring = self.mat.ring

        if self.kind == 'elementary':
            return f'e({self.i},{self.j};{ring.names[self.value]})'
        if self.kind == 'diagonal':
            return f'd({self.position};{ring.names[self.value]})'
        if self.kind == 'conjugated':
            return '^{' + ''.join(d.render() for d in self.outer) + '}' + self.inner.render()
        if self.kind == 'commutator':
            return f'[{self.outer[0].render()},{self.inner.render()}]'

        return self.label or self.mat.render()

def elementary_descriptor(ring: RingTable, n: int, i: int, j: int, alpha: int) -> GenDescriptor:
    return GenDescriptor('elementary', elementary(ring, n, i, j, alpha), i=i, j=j, value=int(alpha))

def diagonal_descriptor(ring: RingTable, n: int, position: int, unit: int) -> GenDescriptor:
    if not ring.is_unit(unit):
        raise SpecError(f'{ring.names[unit]} is not a unit')
    return GenDescriptor('diagonal', diagonal(ring, n, position, unit), position=position, value=int(unit))

def conjugated_descriptor(outer: Sequence[GenDescriptor], inner: GenDescriptor) -> GenDescriptor:
    """^{w}v with w the product of outer and w^-1 taken from the outer descriptors' inverses."""
    frame = mat_product([d.mat for d in outer])
    frame_inverse = mat_product([d.inverse().mat for d in reversed(outer)])

    return GenDescriptor('conjugated', mat_product([frame, inner.mat, frame_inverse]), outer=tuple(outer), inner=inner)

def commutator_descriptor(x: GenDescriptor, y: GenDescriptor) -> GenDescriptor:
    mat = mat_product([x.mat, y.mat, x.inverse().mat, y.inverse().mat])
    return GenDescriptor('commutator', mat, outer=(x,), inner=y)

def derived_descriptor(mat: Mat, label: str = '') -> GenDescriptor:
    return GenDescriptor('derived', mat, label=label)

def descriptors_from_batch(batch: np.ndarray, ring: RingTable, n: int, labels: Sequence[str]) -> list[GenDescriptor]:
    return [derived_descriptor(Mat(ring, n, tuple(int(e) for e in row)), label) for row, label in zip(batch, labels)]

def dedup_descriptors(descriptors: Iterable[GenDescriptor]) -> list[GenDescriptor]:
    """Keep the first descriptor of every distinct matrix, in the given order."""
    seen = set()
    kept = []

    for descriptor in descriptors:
        key = descriptor.mat.key
        if key not in seen:
            seen.add(key)
            kept.append(descriptor)

    return kept

def _pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]

def elementary_generators(ring: RingTable, ideal: IdealSet, n: int) -> list[GenDescriptor]:
    """e_{i,j}(alpha) for all i != j and nonzero alpha in ideal: generators of E_n(I)."""
    _check_dimension(n)
    return [elementary_descriptor(ring, n, i, j, alpha) for i, j in _pairs(n) for alpha in ideal.members if alpha]

def suslin_generators(ring: RingTable, ideal: IdealSet, n: int, dedup: bool = True) -> list[GenDescriptor]:
    """The generators ^{e_{i,j}(a)} e_{j,i}(alpha) of E_n(A, I), over all i != j, a in A, alpha in I.

    Parameters
    ----------
    dedup : bool, optional
        Drop descriptors whose matrix repeats an earlier one, by default True
    """
    _check_dimension(n)
    descriptors = []

    for i, j in _pairs(n):
        frames = [elementary_descriptor(ring, n, i, j, a) for a in range(ring.order)]
        for alpha in ideal.members:
            inner = elementary_descriptor(ring, n, j, i, alpha)
            descriptors.extend(conjugated_descriptor((frame,), inner) for frame in frames)

    return dedup_descriptors(descriptors) if dedup else descriptors

def one_plus_ideal_units(ring: RingTable, ideal: IdealSet) -> list[int]:
    """Units u with u - 1 in ideal."""
    return [u for u in ring.unit_set if int(ring.add[u, ring.neg[1]]) in ideal]

def gl_generators(ring: RingTable, ideal: IdealSet, n: int) -> list[GenDescriptor]:
    """Suslin generators plus the one-spot diagonal matrices with entries in (1 + I) among the units.

    Over a ring of stable rank 1 (every finite ring) these generate GL_n(A, I);
    the equality with congruence_members is checked wherever enumeration is feasible.
    """
    diagonals = [
        diagonal_descriptor(ring, n, k, u)
        for k in range(1, n + 1)
        for u in one_plus_ideal_units(ring, ideal)
        if u != 1
    ]

    return dedup_descriptors(suslin_generators(ring, ideal, n) + diagonals)

def comgenerator_generators(ring: RingTable, I: IdealSet, J: IdealSet, n: int) -> list[GenDescriptor]:
    """The four families whose E_n(A)-normal closure is [E_n(A, I), E_n(A, J)].

    [e_{j,i}(alpha), ^{e_{i,j}(a)} e_{j,i}(beta)], [e_{j,i}(alpha), e_{i,j}(beta)],
    e_{i,j}(alpha beta) and e_{i,j}(beta alpha), for i != j, alpha in I, beta in J, a in A.
    """
    descriptors = []

    for i, j in _pairs(n):
        for alpha in I.members:
            left = elementary_descriptor(ring, n, j, i, alpha)
            for beta in J.members:
                for a in range(ring.order):
                    framed = conjugated_descriptor((elementary_descriptor(ring, n, i, j, a),), elementary_descriptor(ring, n, j, i, beta))
                    descriptors.append(commutator_descriptor(left, framed))

                descriptors.append(commutator_descriptor(left, elementary_descriptor(ring, n, i, j, beta)))
                descriptors.append(elementary_descriptor(ring, n, i, j, int(ring.mul[alpha, beta])))
                descriptors.append(elementary_descriptor(ring, n, i, j, int(ring.mul[beta, alpha])))

    return dedup_descriptors(descriptors)

def permutation_descriptors(ring: RingTable, n: int) -> list[GenDescriptor]:
    """All n x n permutation matrices as derived descriptors."""
    descriptors = []

    for perm in permutations(range(n)):
        entries = [0] * (n * n)
        for row, column in enumerate(perm):
            entries[row * n + column] = 1
        descriptors.append(derived_descriptor(Mat(ring, n, tuple(entries)), 'perm(' + ''.join(str(p + 1) for p in perm) + ')'))

    return descriptors

@dataclass(frozen=True, eq=False)
class GroupSet:
    """A finite subgroup of GL_n(A), as its generators and optionally its members.

    A GroupSet whose members are None is lazy: it is known through its
    generators only, which is all commutator_subgroup needs.

    Attributes
    ----------
    ring : RingTable
        Ring of the matrix entries
    n : int
        Dimension
    generators : tuple[GenDescriptor, ...]
        Generating list
    label : str
        Provenance tag such as 'E(A,I)', 'GL(A,J)' or '[H,K]'
    members : numpy.ndarray, optional
        Sorted packing keys of all members
    """
    ring: RingTable
    n: int
    generators: tuple[GenDescriptor, ...]
    label: str
    members: Optional[np.ndarray] = None

    @property
    def materialized(self) -> bool:
        return self.members is not None

    @property
    def order(self) -> int:
        self._require_members()
        return len(self.members)

    @property
    def is_trivial(self) -> bool:
        self._require_members()
        return len(self.members) == 1

    def contains_keys(self, keys: np.ndarray) -> np.ndarray:
        self._require_members()
        keys = np.asarray(keys, dtype=np.int64)
        where = np.searchsorted(self.members, keys).clip(0, max(0, len(self.members) - 1))
        return self.members[where] == keys

    def __contains__(self, x: Mat) -> bool:
        return bool(self.contains_keys(np.array([x.key]))[0])

    def member_batch(self) -> np.ndarray:
        self._require_members()
        return batch_decode(self.members, self.ring, self.n)

    def generator_batch(self) -> np.ndarray:
        if not self.generators:
            return np.empty((0, self.n * self.n), dtype=np.int64)
        return np.array([g.mat.entries for g in self.generators], dtype=np.int64)

    def generator_inverse_batch(self) -> np.ndarray:
        if not self.generators:
            return np.empty((0, self.n * self.n), dtype=np.int64)
        return np.array([g.inverse().mat.entries for g in self.generators], dtype=np.int64)

    def is_closed(self, rng: Optional[np.random.Generator] = None, samples: int = 4096) -> bool:
        """Closure under products and inverses, exhaustive up to 2^10 members and sampled above."""
        self._require_members()
        batch = self.member_batch()

        if len(batch) <= 2 ** 10:
            left = np.repeat(batch, len(batch), axis=0)
            right = np.tile(batch, (len(batch), 1))
            subject = batch
        else:
            rng = rng or np.random.default_rng(0)
            left = batch[rng.integers(0, len(batch), samples)]
            right = batch[rng.integers(0, len(batch), samples)]
            subject = left

        products = batch_mul(left, right, self.ring, self.n)
        inverses, ok = batch_inverse(subject, self.ring, self.n)

        return bool(
            ok.all()
            and self.contains_keys(batch_keys(products, self.ring, self.n)).all()
            and self.contains_keys(batch_keys(inverses, self.ring, self.n)).all()
            and identity(self.ring, self.n) in self
        )

    def _require_members(self) -> None:
        if self.members is None:
            raise SpecError(f'group {self.label} is not materialized')

def congruence_members(ring: RingTable, ideal: IdealSet, n: int, cap: int = 2 ** 20, verify: bool = True) -> GroupSet:
    """Enumerate GL_n(A, I): all invertible 1 + M with every entry of M in I.

    The returned GroupSet carries gl_generators as its generating list.

    Raises
    ------
    CapExceededError
        If |I|^(n*n) exceeds cap
    MathematicalMismatch
        If verify is set and the enumerated set fails the closure check
    """
    _check_dimension(n)
    size = len(ideal) ** (n * n)

    if size > cap:
        raise CapExceededError(f'congruence enumeration GL_{n}({ring.spec}, {ideal.render()})', cap, size)

    members = np.array(ideal.members, dtype=np.int64)
    choice = np.array(np.unravel_index(np.arange(size), (len(members),) * (n * n))).T
    candidates = ring.add[identity(ring, n).array[None, :], members[choice]]

    invertible = np.concatenate([batch_is_invertible(candidates[part], ring, n) for part in _chunks(len(candidates), n * n * 8)])
    keys = np.unique(batch_keys(candidates[invertible], ring, n))

    group = GroupSet(ring, n, tuple(gl_generators(ring, ideal, n)), f'GL({ring.spec},{ideal.render()})', keys)

    if verify and not group.is_closed():
        raise MathematicalMismatch(f'enumerated {group.label} is not closed under products and inverses')

    return group

def semilocal_decompose(g: Mat, elementary_group: GroupSet, ideal: IdealSet, position: int = 1) -> tuple[Mat, GenDescriptor]:
    """Write g in GL_n(A, K) as g = eps * h with eps in E_n(A, K) and h one-spot diagonal.

    Parameters
    ----------
    g : Mat
        Element of GL_n(A, K)
    elementary_group : GroupSet
        Materialized E_n(A, K)
    ideal : IdealSet
        The level K
    position : int, optional
        1-based diagonal position carrying the unit of h, by default 1

    Returns
    -------
    tuple[Mat, GenDescriptor]
        The elementary factor eps and the diagonal descriptor h

    Raises
    ------
    MathematicalMismatch
        If no unit u in 1 + K gives g * h^-1 in E_n(A, K)
    """
    ring, n = g.ring, g.n

    for u in one_plus_ideal_units(ring, ideal):
        h = diagonal_descriptor(ring, n, position, u)
        eps = mat_mul(g, h.inverse().mat)
        if eps in elementary_group:
            return eps, h

    raise MathematicalMismatch('no elementary times one-spot diagonal decomposition', g.render())

def _check_dimension(n: int) -> None:
    if not (1 <= n <= MAX_N):
        raise SpecError(f'dimension n={n} outside 1..{MAX_N}')

def _check_compatible(x: Mat, y: Mat) -> None:
    if x.ring is not y.ring or x.n != y.n:
        raise SpecError(f'matrices over {x.ring.spec} (n={x.n}) and {y.ring.spec} (n={y.n}) cannot be combined')
