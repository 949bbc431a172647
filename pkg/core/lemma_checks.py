"""Lemma suite: randomized and exhaustive checks of the identities and lemmas the formulas rest on.

Each check returns a FuzzResult; run_lemma_suite strings them together for
the 'lemmas' theorem selector.
"""
from itertools import product
from math import isqrt
from typing import Optional
import numpy as np
from core.commutator_calculus import (
    FuzzResult, Pair, check_conjugation_reduction, check_product_expansions, comgenerator_decompose,
    fuzz_elementary_relations, fuzz_expansion, fuzz_identities
)
from core.config import DEFAULT_CAPS, Caps
from core.errors import NOT_VERIFIED, CapExceededError, MathematicalMismatch
from core.matrix_group import GroupSet, Mat, comgenerator_generators, semilocal_decompose
from core.ring_core import IdealSet, RingTable, check_ring_axioms, sym_product, unit_ideal
from core.subgroup_engine import (
    brute_force_commutator, commutator_subgroup, congruence_group, elementary_subgroup, full_elementary, materialize,
    normal_closure, random_elements, relative_elementary, symmetric_difference_witness,
    validate_gl_generators
)
from core.theorem_verifier import elementary_normality, verify_containment_chain

def _single(name: str, holds: bool, witness: Optional[str] = None) -> FuzzResult:
    return FuzzResult(name, 1, 0 if holds else 1, None if holds else witness)

def _mats(batch: np.ndarray, ring: RingTable, n: int) -> list[Mat]:
    return [Mat(ring, n, tuple(int(e) for e in row)) for row in batch]

def check_ring(ring: RingTable, samples: int, rng: np.random.Generator) -> FuzzResult:
    violations = check_ring_axioms(ring, samples, rng)
    return FuzzResult('ring-axioms', 1, len(violations), ', '.join(violations) or None)

def check_identities(ring: RingTable, n: int, samples: int, rng: np.random.Generator) -> list[FuzzResult]:
    """Elementary relations and group identities over GL_n(A), product expansions on a few draws."""
    group = congruence_group(ring, unit_ideal(ring), n, lazy=True)
    results = [fuzz_elementary_relations(ring, n, max(1, samples // 36), rng), fuzz_identities(group, samples, rng)]

    draws = min(samples, 64)
    value, _ = random_elements(group, draws * 5, rng)
    mats = _mats(value, ring, n)
    failures = 0
    witness = None

    for d in range(draws):
        x, us = mats[5 * d], mats[5 * d + 1:5 * d + 1 + 1 + d % 4]
        outcome = check_product_expansions(x, us)
        if not all(outcome.values()):
            failures += 1
            witness = witness or x.render()

    results.append(FuzzResult('product-expansions', draws, failures, witness))

    return results

def check_suslin_equivalence(ring: RingTable, ideal: IdealSet, n: int, caps: Caps = DEFAULT_CAPS) -> FuzzResult:
    """Closure of the Suslin generators against the normal closure of E_n(I) in E_n(A)."""
    try:
        relative_elementary(ring, ideal, n, caps.members, debug=True)
    except MathematicalMismatch as error:
        return _single('suslin-generators', False, error.witness)

    return _single('suslin-generators', True)

def disjoint_patterns() -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Every ((i1, j1), (i, j)) over 1..4 with {i1, j1} and {i, j} disjoint."""
    pairs = [(i, j) for i in range(1, 5) for j in range(1, 5) if i != j]
    return [(p, q) for p in pairs for q in pairs if set(p).isdisjoint(q)]

def check_comgenerator(
    ring: RingTable,
    I: IdealSet,
    J: IdealSet,
    n: int = 3,
    samples: int = 10 ** 4,
    rng: Optional[np.random.Generator] = None,
    exhaustive_limit: int = 2 ** 16
) -> FuzzResult:
    """Decompose [e_{i1,j1}(alpha), ^{e_{i,j}(a)} e_{j,i}(beta)] for every index pattern.

    Exhaustive over alpha in I, beta in J, a in A when that fits exhaustive_limit,
    sampled otherwise.  At n = 3 every disjoint pattern is added, evaluated at n = 4.
    """
    rng = rng or np.random.default_rng(0)
    pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    patterns = [(p, q) for p in pairs for q in pairs if n >= 4 or set(p) & set(q)]
    values = list(product(I.members, J.members, range(ring.order)))

    if len(patterns) * len(values) > exhaustive_limit:
        values = [values[k] for k in rng.integers(0, len(values), max(1, samples // len(patterns)))]

    cases = [(p, q, v) for p, q in patterns for v in values]

    if n == 3:
        cases += [(p, q, v) for p, q in disjoint_patterns() for v in values]

    checked = failures = 0
    witness = None

    for (i1, j1), (i, j), (alpha, beta, a) in cases:
        size = 4 if {i1, j1}.isdisjoint({i, j}) else n
        checked += 1
        try:
            comgenerator_decompose(ring, size, i1, j1, alpha, i, j, a, beta, I, J)
        except MathematicalMismatch as error:
            failures += 1
            witness = witness or error.witness

    return FuzzResult('comgenerator-decomposition', checked, failures, witness)

def check_comgenerator_generation(ring: RingTable, I: IdealSet, J: IdealSet, n: int, caps: Caps = DEFAULT_CAPS) -> FuzzResult:
    """The E_n(A)-normal closure of the four generator families is [E_n(A,I), E_n(A,J)]."""
    generated = normal_closure(comgenerator_generators(ring, I, J, n), full_elementary(ring, n).generators, ring, n, caps.members)
    direct = commutator_subgroup(relative_elementary(ring, I, n, lazy=True), relative_elementary(ring, J, n, lazy=True), caps.members)
    witness = symmetric_difference_witness(generated, direct)

    return _single('comgenerator-generation', witness is None, witness.render() if witness is not None else None)

def check_conjugation_reductions(ring: RingTable, n: int, samples: int, rng: np.random.Generator) -> FuzzResult:
    group = full_elementary(ring, n)
    value, _ = random_elements(group, samples, rng, length=8)
    pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    failures = 0
    witness = None

    for c in _mats(value, ring, n):
        (i1, j1), (i, j) = pairs[rng.integers(len(pairs))], pairs[rng.integers(len(pairs))]
        a, alpha, b, beta = (int(v) for v in rng.integers(0, ring.order, 4))
        if not check_conjugation_reduction(c, i1, j1, a, alpha, i, j, b, beta):
            failures += 1
            witness = witness or c.render()

    return FuzzResult('conjugation-reduction', samples, failures, witness)

def check_expansion(ring: RingTable, I: IdealSet, J: IdealSet, n: int, samples: int, rng: np.random.Generator) -> FuzzResult:
    """Seven-term expansion of [e, g] for random e in GL_n(A, J) and g in GL_n(A, I)."""
    e = Pair(*random_elements(congruence_group(ring, J, n, lazy=True), samples, rng), ring, n)
    g = Pair(*random_elements(congruence_group(ring, I, n, lazy=True), samples, rng), ring, n)

    return fuzz_expansion(e, g, I, J)

def check_gl_generators(ring: RingTable, ideal: IdealSet, n: int, caps: Caps = DEFAULT_CAPS) -> Optional[FuzzResult]:
    """None when the congruence subgroup is too large to enumerate for comparison."""
    outcome = validate_gl_generators(ring, ideal, n, caps.gl_validation)

    if outcome is None:
        return None

    return _single('gl-generators', outcome, f'GL({ring.spec},{ideal.render()})')

def check_containment_chain(ring: RingTable, I: IdealSet, J: IdealSet, n: int, caps: Caps = DEFAULT_CAPS) -> FuzzResult:
    record = verify_containment_chain(ring, I, J, n, caps)

    if record.status == NOT_VERIFIED:
        return FuzzResult.capped('containment-chain', record.witness)

    failed = [name for name, holds in record.checks.items() if not holds]
    return _single('containment-chain', record.verified, ', '.join(failed))

def check_commutator_oracle(groups: list[GroupSet], caps: Caps = DEFAULT_CAPS) -> FuzzResult:
    """Generator-pair commutator subgroups against the brute force oracle, and [H, K] = [K, H]."""
    checked = failures = 0
    witness = None

    for a, H in enumerate(groups):
        for K in groups[a:]:
            if H.order * K.order > caps.oracle_pairs:
                continue

            fast = commutator_subgroup(H, K, caps.members)
            checked += 1
            mismatch = symmetric_difference_witness(fast, brute_force_commutator(H, K, caps.oracle_pairs, caps.members))
            mismatch = mismatch or symmetric_difference_witness(fast, commutator_subgroup(K, H, caps.members))

            if mismatch is not None:
                failures += 1
                witness = witness or f'[{H.label},{K.label}]: {mismatch.render()}'

    return FuzzResult('commutator-oracle', checked, failures, witness)

def check_semilocal(ring: RingTable, ideal: IdealSet, n: int, samples: int, rng: np.random.Generator, caps: Caps = DEFAULT_CAPS) -> FuzzResult:
    """Split random g in GL_n(A, K) as an elementary factor times a one-spot diagonal matrix."""
    elementary = relative_elementary(ring, ideal, n, caps.members)
    value, _ = random_elements(congruence_group(ring, ideal, n, lazy=True), samples, rng)
    failures = 0
    witness = None

    for g in _mats(value, ring, n):
        try:
            semilocal_decompose(g, elementary, ideal, position=1 + int(rng.integers(n)))
        except MathematicalMismatch:
            failures += 1
            witness = witness or g.render()

    return FuzzResult('semilocal-decomposition', samples, failures, witness)

def oracle_groups(ring: RingTable, ideal: IdealSet, n: int, caps: Caps = DEFAULT_CAPS) -> list[GroupSet]:
    """Small subgroups used for the commutator oracle: E(I), E(A,I) and GL(A,I) where they fit."""
    groups = []

    for make in (
        lambda: relative_elementary(ring, ideal, n, caps.members),
        lambda: congruence_group(ring, ideal, n, isqrt(caps.oracle_pairs)),
    ):
        try:
            group = make()
        except CapExceededError:
            continue
        if group.materialized and group.order ** 2 <= caps.oracle_pairs:
            groups.append(group)

    return groups

def run_lemma_suite(
    ring: RingTable,
    ideals: list[IdealSet],
    n: int,
    samples: int = 10 ** 4,
    seed: int = 0,
    caps: Caps = DEFAULT_CAPS
) -> list[FuzzResult]:
    """Every lemma check for the ring and its first two ideals, in a fixed order."""
    rng = np.random.default_rng(seed)
    I = ideals[0]
    J = ideals[1] if len(ideals) > 1 else I

    results = [check_ring(ring, samples, rng)]
    results += check_identities(ring, n, samples, rng)
    results.append(check_comgenerator(ring, I, J, n, samples, rng))
    results.append(check_conjugation_reductions(ring, n, min(samples, 256), rng))
    results.append(check_expansion(ring, I, J, n, samples, rng))

    gl = check_gl_generators(ring, I, n, caps)
    if gl is not None:
        results.append(gl)

    for name, step in (
        ('suslin-generators', lambda: check_suslin_equivalence(ring, I, n, caps)),
        ('elementary-normality', lambda: _single('elementary-normality', elementary_normality(ring, I, n, caps))),
        ('comgenerator-generation', lambda: check_comgenerator_generation(ring, I, J, n, caps)),
        ('containment-chain', lambda: check_containment_chain(ring, I, J, n, caps)),
        ('commutator-oracle', lambda: check_commutator_oracle(
            oracle_groups(ring, I, n, caps) + [elementary_subgroup_materialized(ring, sym_product(I, J), n, caps)], caps
        )),
        ('semilocal-decomposition', lambda: check_semilocal(ring, I, n, min(samples, 256), rng, caps)),
    ):
        try:
            results.append(step())
        except CapExceededError as error:
            results.append(FuzzResult.capped(name, str(error)))

    return results

def elementary_subgroup_materialized(ring: RingTable, ideal: IdealSet, n: int, caps: Caps = DEFAULT_CAPS) -> GroupSet:
    return materialize(elementary_subgroup(ring, ideal, n), caps.members)
