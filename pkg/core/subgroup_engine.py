"""Module for finite subgroup computations inside GL_n(A).

Closures are built incrementally: generators are sifted one at a time, a
generator that is already a member is dropped, and a new one extends the
member set by breadth-first right multiplication with every retained
generator.  Members are kept as a sorted numpy array of packing keys, so set
operations are numpy set operations and the result never depends on the order
in which a frontier was processed.
"""
from __future__ import annotations
from functools import lru_cache
from typing import Callable, Iterable, Optional, Sequence
import numpy as np
from core.config import DEFAULT_CAPS
from core.errors import CapExceededError, MathematicalMismatch
from core.matrix_group import (
    GenDescriptor, GroupSet, Mat, batch_decode, batch_in_congruence, batch_inverse, batch_keys, batch_mul,
    commutator_descriptor, congruence_members, conjugated_descriptor, dedup_descriptors, derived_descriptor,
    elementary_generators, gl_generators, identity, suslin_generators, unpack_key
)
from core.ring_core import IdealSet, RingTable, unit_ideal

FRONTIER_CHUNK = 2 ** 16

class ClosureBuilder:
    """Grows a subgroup one generator at a time.

    Attributes
    ----------
    ring : RingTable
        Ring of the matrix entries
    n : int
        Dimension
    cap : int
        Largest member count before CapExceededError
    members : numpy.ndarray
        Sorted packing keys of the group generated so far
    generators : list[GenDescriptor]
        Retained generators, each of which enlarged the group when added

    Methods
    -------
    add(descriptor)
        Sift one generator into the group, return True if it was retained
    sift(batch, describe)
        Add every row of batch that is not yet a member
    group(label)
        Freeze the current state as a GroupSet
    """
    def __init__(self, ring: RingTable, n: int, cap: int = DEFAULT_CAPS.members, what: str = 'closure'):
        self.ring = ring
        self.n = n
        self.cap = cap
        self.what = what
        self.members = batch_keys(identity(ring, n).array, ring, n)
        self.generators: list[GenDescriptor] = []
        self.__batch = np.empty((0, n * n), dtype=np.int64)

    def contains(self, keys: np.ndarray) -> np.ndarray:
        where = np.searchsorted(self.members, keys).clip(0, len(self.members) - 1)
        return self.members[where] == keys

    def add(self, descriptor: GenDescriptor) -> bool:
        row = descriptor.mat.array[None, :]

        if self.contains(batch_keys(row, self.ring, self.n))[0]:
            return False

        self.generators.append(descriptor)
        self.__batch = np.vstack([self.__batch, row])

        # the coset (old group) * g seeds the frontier
        frontier = self._fresh(self._products(batch_decode(self.members, self.ring, self.n), row))

        while len(frontier):
            self._absorb(frontier)
            frontier = self._fresh(np.concatenate([
                self._products(batch_decode(frontier, self.ring, self.n), g[None, :]) for g in self.__batch
            ]))

        return True

    def sift(self, batch: np.ndarray, describe: Callable[[int], GenDescriptor]) -> int:
        """Add the rows of batch that are not members, smallest key first.

        Parameters
        ----------
        batch : numpy.ndarray
            Candidate matrices, shape (count, n*n)
        describe : Callable[[int], GenDescriptor]
            Builds the descriptor of the candidate at a row index

        Returns
        -------
        int
            Number of generators retained
        """
        if not len(batch):
            return 0

        keys, first = np.unique(batch_keys(batch, self.ring, self.n), return_index=True)
        added = 0

        while True:
            missing = ~self.contains(keys)
            if not missing.any():
                return added

            where = int(np.argmax(missing))
            self.add(describe(int(first[where])))
            keys, first = keys[where + 1:], first[where + 1:]
            added += 1

    def group(self, label: str) -> GroupSet:
        return GroupSet(self.ring, self.n, tuple(self.generators), label, self.members)

    def _products(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        return np.concatenate([
            batch_keys(batch_mul(left[start:start + FRONTIER_CHUNK], right, self.ring, self.n), self.ring, self.n)
            for start in range(0, len(left), FRONTIER_CHUNK)
        ]) if len(left) else np.empty(0, dtype=np.int64)

    def _fresh(self, keys: np.ndarray) -> np.ndarray:
        keys = np.unique(keys)
        return keys[~self.contains(keys)] if len(keys) else keys

    def _absorb(self, keys: np.ndarray) -> None:
        self.members = np.union1d(self.members, keys)

        if len(self.members) > self.cap:
            raise CapExceededError(self.what, self.cap, len(self.members))

def closure(gens: Iterable[GenDescriptor], ring: RingTable, n: int, cap: int = DEFAULT_CAPS.members, label: str = '<gens>') -> GroupSet:
    """Subgroup generated by gens.

    Raises
    ------
    CapExceededError
        If the group outgrows cap; the partial member count is attached
    """
    builder = ClosureBuilder(ring, n, cap, f'closure of {label}')

    for descriptor in gens:
        builder.add(descriptor)

    return builder.group(label)

def materialize(group: GroupSet, cap: int = DEFAULT_CAPS.members) -> GroupSet:
    if group.materialized:
        return group
    return closure(group.generators, group.ring, group.n, cap, group.label)

def conjugator_batches(ambient: Sequence[GenDescriptor], n: int) -> tuple[list[GenDescriptor], np.ndarray, np.ndarray]:
    """Ambient generators and their inverses, deduplicated, with their matrix and inverse stacks."""
    conjugators = dedup_descriptors(list(ambient) + [d.inverse() for d in ambient])

    if not conjugators:
        empty = np.empty((0, n * n), dtype=np.int64)
        return conjugators, empty, empty

    forward = np.array([d.mat.entries for d in conjugators], dtype=np.int64)
    backward = np.array([d.inverse().mat.entries for d in conjugators], dtype=np.int64)

    return conjugators, forward, backward

def _sweep(builder: ClosureBuilder, ambient: Sequence[GenDescriptor]) -> None:
    """Conjugate every retained generator by the ambient generators until nothing new appears."""
    conjugators, forward, backward = conjugator_batches(ambient, builder.n)
    swept = 0

    while swept < len(builder.generators) and len(forward):
        target = builder.generators[swept]
        swept += 1
        conjugates = batch_mul(batch_mul(forward, target.mat.array, builder.ring, builder.n), backward, builder.ring, builder.n)
        builder.sift(conjugates, lambda row: conjugated_descriptor((conjugators[row],), target))

def normal_closure(
    seed: Iterable[GenDescriptor],
    ambient: Sequence[GenDescriptor],
    ring: RingTable,
    n: int,
    cap: int = DEFAULT_CAPS.members,
    label: str = '<normal closure>'
) -> GroupSet:
    """Smallest subgroup containing seed and normalized by the ambient generators.

    The retained generators are swept in order; each sweep conjugates one of
    them by every ambient generator and inverse, and any conjugate outside
    the current group is added as a new generator.  When every retained
    generator has been swept the group is normalized by the ambient group.
    """
    builder = ClosureBuilder(ring, n, cap, f'normal closure {label}')

    for descriptor in seed:
        builder.add(descriptor)

    _sweep(builder, ambient)

    return builder.group(label)

def elementary_subgroup(ring: RingTable, ideal: IdealSet, n: int) -> GroupSet:
    """E_n(I), known through its generators e_{i,j}(alpha)."""
    return GroupSet(ring, n, tuple(elementary_generators(ring, ideal, n)), f'E({ideal.render()})')

def full_elementary(ring: RingTable, n: int) -> GroupSet:
    return GroupSet(ring, n, tuple(elementary_generators(ring, unit_ideal(ring), n)), 'E(A)')

def relative_elementary(
    ring: RingTable,
    ideal: IdealSet,
    n: int,
    cap: int = DEFAULT_CAPS.members,
    lazy: bool = False,
    debug: bool = False
) -> GroupSet:
    """E_n(A, I) as the closure of the Suslin generators.

    Parameters
    ----------
    lazy : bool, optional
        Return the generators only, without materializing the members
    debug : bool, optional
        Also compute the normal closure of E_n(I) in E_n(A) and require equality

    Raises
    ------
    MathematicalMismatch
        In debug mode, when the two constructions differ
    """
    label = f'E(A,{ideal.render()})'
    generators = suslin_generators(ring, ideal, n)

    if lazy:
        return GroupSet(ring, n, tuple(generators), label)

    group = closure(generators, ring, n, cap, label)

    if debug:
        normal = normal_closure(
            elementary_generators(ring, ideal, n), full_elementary(ring, n).generators, ring, n, cap, label
        )
        witness = symmetric_difference_witness(group, normal)
        if witness is not None:
            raise MathematicalMismatch(f'Suslin generators and normal closure disagree for {label}', witness.render())

    return group

@lru_cache(maxsize=64)
def _gl_generators_generate(ring: RingTable, ideal: IdealSet, n: int) -> bool:
    size = len(ideal) ** (n * n)
    enumerated = congruence_members(ring, ideal, n, cap=size)
    generated = closure(enumerated.generators, ring, n, cap=size, label=enumerated.label)

    return subgroup_equal(enumerated, generated)

def validate_gl_generators(ring: RingTable, ideal: IdealSet, n: int, limit: int = DEFAULT_CAPS.enumeration) -> Optional[bool]:
    """Compare the closure of gl_generators with the enumerated congruence subgroup.

    The comparison is memoized per (ring, ideal, n), so every verdict over
    the same slots shares one enumeration.

    Returns
    -------
    bool or None
        None when |I|^(n*n) exceeds limit and no comparison was made
    """
    if len(ideal) ** (n * n) > limit:
        return None

    return _gl_generators_generate(ring, ideal, n)

def congruence_group(
    ring: RingTable,
    ideal: IdealSet,
    n: int,
    enumeration_cap: int = DEFAULT_CAPS.enumeration,
    lazy: bool = False
) -> GroupSet:
    """GL_n(A, I): enumerated when |I|^(n*n) fits enumeration_cap, otherwise the lazy gl_generators proxy.

    The proxy is trusted only where validate_gl_generators has compared it
    with enumeration; verdicts and the lemma suite record that comparison.
    """
    if not lazy and len(ideal) ** (n * n) <= enumeration_cap:
        return congruence_members(ring, ideal, n, cap=enumeration_cap)

    return GroupSet(ring, n, tuple(gl_generators(ring, ideal, n)), f'GL(A,{ideal.render()})')

def commutator_batch(left: np.ndarray, left_inverse: np.ndarray, right: np.ndarray, right_inverse: np.ndarray, ring: RingTable, n: int) -> np.ndarray:
    """[s, t] for every s in left and t in right, ordered by s first."""
    blocks = []

    for s, s_inverse in zip(left, left_inverse):
        st = batch_mul(s, right, ring, n)
        blocks.append(batch_mul(batch_mul(st, s_inverse, ring, n), right_inverse, ring, n))

    return np.concatenate(blocks) if blocks else np.empty((0, n * n), dtype=np.int64)

def commutator_subgroup(H: GroupSet, K: GroupSet, cap: int = DEFAULT_CAPS.members, label: Optional[str] = None) -> GroupSet:
    """Mixed commutator subgroup [H, K].

    [H, K] is the normal closure in <H, K> of the commutators of generator
    pairs, so only |gens(H)| * |gens(K)| commutators are formed.  H and K may
    be lazy.
    """
    ring, n = H.ring, H.n
    label = label or f'[{H.label},{K.label}]'
    builder = ClosureBuilder(ring, n, cap, label)

    if H.generators and K.generators:
        seeds = commutator_batch(H.generator_batch(), H.generator_inverse_batch(), K.generator_batch(), K.generator_inverse_batch(), ring, n)
        width = len(K.generators)
        builder.sift(seeds, lambda row: commutator_descriptor(H.generators[row // width], K.generators[row % width]))
        _sweep(builder, dedup_descriptors(H.generators + K.generators))

    return builder.group(label)

def brute_force_commutator(H: GroupSet, K: GroupSet, pair_cap: int = DEFAULT_CAPS.oracle_pairs, cap: int = DEFAULT_CAPS.members) -> GroupSet:
    """[H, K] as the closure of every commutator [h, k] of members.

    Raises
    ------
    CapExceededError
        If |H| * |K| exceeds pair_cap
    """
    pairs = H.order * K.order

    if pairs > pair_cap:
        raise CapExceededError(f'commutator oracle [{H.label},{K.label}]', pair_cap, pairs)

    ring, n = H.ring, H.n
    left, right = H.member_batch(), K.member_batch()
    left_inverse, _ = batch_inverse(left, ring, n)
    right_inverse, _ = batch_inverse(right, ring, n)

    keys = np.unique(batch_keys(commutator_batch(left, left_inverse, right, right_inverse, ring, n), ring, n))
    commutators = batch_decode(keys, ring, n)

    builder = ClosureBuilder(ring, n, cap, 'commutator oracle')
    builder.sift(commutators, lambda row: derived_descriptor(Mat(ring, n, tuple(int(e) for e in commutators[row]))))

    return builder.group(f'[{H.label},{K.label}]')

def subgroup_equal(H: GroupSet, K: GroupSet) -> bool:
    return H.ring is K.ring and H.n == K.n and np.array_equal(H.members, K.members)

def subgroup_contains(H: GroupSet, K: GroupSet) -> bool:
    """True when H is a subset of K."""
    return bool(K.contains_keys(H.members).all())

def symmetric_difference_witness(H: GroupSet, K: GroupSet) -> Optional[Mat]:
    """The member of smallest key lying in exactly one of H and K, None when they are equal."""
    difference = np.setxor1d(H.members, K.members)

    if not len(difference):
        return None

    return unpack_key(int(difference[0]), H.ring, H.n)

def containment_witness(H: GroupSet, K: GroupSet) -> Optional[Mat]:
    """A member of H outside K, None when H is a subset of K."""
    outside = H.members[~K.contains_keys(H.members)]
    return unpack_key(int(outside[0]), H.ring, H.n) if len(outside) else None

def is_closed(H: GroupSet, rng: Optional[np.random.Generator] = None, samples: int = 4096) -> bool:
    return H.is_closed(rng, samples)

def members_in_congruence(H: GroupSet, ideal: IdealSet) -> bool:
    """Every member of H is congruent to the identity modulo ideal.

    Lazy groups are checked on their generators, which suffices since the
    congruence subgroup is a group.
    """
    if not H.materialized:
        return bool(batch_in_congruence(H.generator_batch(), ideal, H.n).all()) if H.generators else True

    return all(
        batch_in_congruence(batch_decode(H.members[start:start + FRONTIER_CHUNK], H.ring, H.n), ideal, H.n).all()
        for start in range(0, len(H.members), FRONTIER_CHUNK)
    )

def random_elements(group: GroupSet, count: int, rng: np.random.Generator, length: int = 24) -> tuple[np.ndarray, np.ndarray]:
    """Random products of length generators or inverses, with their inverses, each of shape (count, n*n)."""
    ring, n = group.ring, group.n
    value = np.repeat(identity(ring, n).array[None, :], count, axis=0)
    inverse = value.copy()

    if not group.generators:
        return value, inverse

    forward, backward = group.generator_batch(), group.generator_inverse_batch()
    letters = np.concatenate([forward, backward])
    letter_inverses = np.concatenate([backward, forward])

    for _ in range(length):
        pick = rng.integers(0, len(letters), count)
        value = batch_mul(value, letters[pick], ring, n)
        inverse = batch_mul(letter_inverses[pick], inverse, ring, n)

    return value, inverse
