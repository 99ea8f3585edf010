"""Constraint graphs and the feasibility-preserving permutation group.

The constraint graph has one vertex per bit; two vertices are adjacent iff
their coordinates share a position (same machine and time) or share a job.
Each job block and each position block is therefore a clique, and the feasible
strings are exactly the independent sets of size J.

The group that maps solutions to solutions is generated by job permutations,
position permutations, and (in the busy case P = J) a transposer exchanging
the two roles. Its order is 2*(J!)^2 when busy, P!*J! otherwise. Only the
job-side adjacent transpositions are ever compiled to gates; the rest exists
for verification.

Permutations are 0-based one-line tuples (perm[k] = image of k). Public bit
and vertex labels are 1-based to match printed strings; when a permutation
meets a 1-based label, the bridge is label - 1. cycle_notation renders
1-based cycles.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import CapabilityError, DomainError
from .instances import (
    OsspInstance,
    check_bitstring,
    enumerate_solutions,
    index_to_coordinate,
    is_feasible,
)

BRUTE_FORCE_VERTEX_CAP = 10
GROUP_CLOSURE_CAP = 1_000_000


# ---------------------------------------------------------------------------
# permutation primitives


def identity_perm(n: int) -> tuple[int, ...]:
    return tuple(range(n))


def compose_perms(a, b) -> tuple[int, ...]:
    """a after b: (a o b)[x] = a[b[x]]."""
    return tuple(a[x] for x in b)


def invert_perm(p) -> tuple[int, ...]:
    out = [0] * len(p)
    for x, y in enumerate(p):
        out[y] = x
    return tuple(out)


def _check_perm(p, n: int) -> tuple[int, ...]:
    p = tuple(p)
    if len(p) != n or sorted(p) != list(range(n)):
        raise DomainError(f"not a permutation of 0..{n - 1}: {p!r}")
    return p


def cycle_notation(perm) -> str:
    """Disjoint cycles with 1-based labels, e.g. '(1,2)(5,6)'; 'id' if trivial."""
    perm = tuple(perm)
    seen = [False] * len(perm)
    cycles = []
    for start in range(len(perm)):
        if seen[start] or perm[start] == start:
            seen[start] = True
            continue
        cycle = [start]
        seen[start] = True
        nxt = perm[start]
        while nxt != start:
            cycle.append(nxt)
            seen[nxt] = True
            nxt = perm[nxt]
        cycles.append(cycle)
    if not cycles:
        return "id"
    return "".join("(" + ",".join(str(v + 1) for v in c) + ")" for c in cycles)


# ---------------------------------------------------------------------------
# group elements and their action on bits


@dataclass(frozen=True)
class GroupElement:
    """A pair (position permutation, job permutation), optionally composed
    with the busy-case position/job transposer."""

    position_perm: tuple[int, ...]
    job_perm: tuple[int, ...]
    swap_roles: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "position_perm", tuple(self.position_perm))
        object.__setattr__(self, "job_perm", tuple(self.job_perm))


def identity_element(instance: OsspInstance) -> GroupElement:
    return GroupElement(identity_perm(instance.positions), identity_perm(instance.jobs))


def _adjacent_transposition(n: int, i: int) -> tuple[int, ...]:
    """Swap of (i, i+1) in 1-based labels over 0..n-1."""
    if not (1 <= i <= n - 1):
        raise DomainError(f"adjacent transposition index {i} out of range 1..{n - 1}")
    p = list(range(n))
    p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


def job_transposition_element(instance: OsspInstance, i: int) -> GroupElement:
    """The element (id, (i, i+1)) swapping adjacent jobs i and i+1."""
    return GroupElement(
        identity_perm(instance.positions),
        _adjacent_transposition(instance.jobs, i),
    )


def position_transposition_element(instance: OsspInstance, p: int) -> GroupElement:
    """The element ((p, p+1), id) swapping adjacent positions."""
    return GroupElement(
        _adjacent_transposition(instance.positions, p),
        identity_perm(instance.jobs),
    )


def transposer_element(instance: OsspInstance) -> GroupElement:
    """Busy case only: exchange the roles of positions and jobs."""
    if not instance.is_busy:
        raise DomainError("the position/job transposer exists only when P = J")
    return GroupElement(
        identity_perm(instance.positions), identity_perm(instance.jobs), swap_roles=True
    )


def vertex_permutation(instance: OsspInstance, g: GroupElement) -> tuple[int, ...]:
    """The induced 0-based permutation of the N bit positions."""
    if g.swap_roles and not instance.is_busy:
        raise DomainError("swap_roles is only valid on busy instances (P = J)")
    jobs = instance.jobs
    sigma = _check_perm(g.position_perm, instance.positions)
    tau = _check_perm(g.job_perm, jobs)
    out = []
    for n in range(instance.n_bits):
        p, j = divmod(n, jobs)
        p2, j2 = sigma[p], tau[j]
        if g.swap_roles:
            p2, j2 = j2, p2
        out.append(jobs * p2 + j2)
    return tuple(out)


def apply_vertex_permutation(perm, z: str) -> str:
    """Move the bit at vertex n to vertex perm[n]."""
    chars = ["0"] * len(z)
    for n, c in enumerate(z):
        chars[perm[n]] = c
    return "".join(chars)


def apply_group_element(instance: OsspInstance, g: GroupElement, z: str) -> str:
    check_bitstring(z, instance.n_bits)
    return apply_vertex_permutation(vertex_permutation(instance, g), z)


# ---------------------------------------------------------------------------
# constraint graph


@dataclass(eq=False)
class ConstraintGraph:
    n_vertices: int
    adjacency: np.ndarray  # boolean, symmetric, zero diagonal

    def edge_count(self) -> int:
        return int(self.adjacency.sum()) // 2


def build_constraint_graph(instance: OsspInstance) -> ConstraintGraph:
    """Vertices are bits; edges join coordinates sharing a position or a job."""
    n = instance.n_bits
    coords = [index_to_coordinate(instance, i) for i in range(1, n + 1)]
    adj = np.zeros((n, n), dtype=bool)
    for u in range(n):
        mu, tu, ju = coords[u]
        for v in range(u + 1, n):
            mv, tv, jv = coords[v]
            if (mu == mv and tu == tv) or ju == jv:
                adj[u, v] = adj[v, u] = True
    return ConstraintGraph(n, adj)


def is_independent_set(graph: ConstraintGraph, vertices) -> bool:
    """No two of the given vertices (1-based labels) are adjacent."""
    vs = sorted(set(vertices))
    for v in vs:
        if not (1 <= v <= graph.n_vertices):
            raise DomainError(f"vertex {v} out of range 1..{graph.n_vertices}")
    for a, b in itertools.combinations(vs, 2):
        if graph.adjacency[a - 1, b - 1]:
            return False
    return True


def is_automorphism(graph: ConstraintGraph, perm) -> bool:
    """True iff the 0-based vertex permutation preserves adjacency both ways."""
    p = np.asarray(_check_perm(perm, graph.n_vertices))
    return bool(np.array_equal(graph.adjacency[np.ix_(p, p)], graph.adjacency))


# ---------------------------------------------------------------------------
# generators, order, orbits


def job_generators(instance: OsspInstance) -> list[GroupElement]:
    return [
        job_transposition_element(instance, i) for i in range(1, instance.jobs)
    ]


def group_generators(instance: OsspInstance) -> list[GroupElement]:
    """Adjacent job and position transpositions, plus the transposer when busy.

    The degenerate single-bit instance has a trivial group and an empty list.
    """
    gens = job_generators(instance)
    gens += [
        position_transposition_element(instance, p)
        for p in range(1, instance.positions)
    ]
    if instance.is_busy and instance.jobs > 1:
        gens.append(transposer_element(instance))
    return gens


def group_order(instance: OsspInstance) -> int:
    """2*(J!)^2 when busy, P!*J! otherwise (1 for the single-bit instance)."""
    import math

    if instance.is_busy:
        if instance.jobs == 1:
            return 1
        return 2 * math.factorial(instance.jobs) ** 2
    return math.factorial(instance.positions) * math.factorial(instance.jobs)


def generate_group(perms, max_size: int = GROUP_CLOSURE_CAP) -> set[tuple[int, ...]]:
    """Closure of the given 0-based permutations under composition."""
    perms = [tuple(p) for p in perms]
    if not perms:
        return {()}
    n = len(perms[0])
    group = {identity_perm(n)}
    frontier = [identity_perm(n)]
    while frontier:
        nxt = []
        for g in frontier:
            for p in perms:
                h = compose_perms(p, g)
                if h not in group:
                    if len(group) >= max_size:
                        raise CapabilityError(
                            f"group closure exceeded the cap of {max_size} elements"
                        )
                    group.add(h)
                    nxt.append(h)
        frontier = nxt
    return group


def generated_group_order(instance: OsspInstance) -> int:
    perms = [vertex_permutation(instance, g) for g in group_generators(instance)]
    if not perms:
        return 1
    return len(generate_group(perms))


def orbit(instance: OsspInstance, z: str, generators) -> set[str]:
    """Breadth-first closure of {z} under the given group elements."""
    if not is_feasible(instance, z):
        raise DomainError(f"orbit seed {z!r} is not a feasible string")
    perms = [vertex_permutation(instance, g) for g in generators]
    seen = {z}
    frontier = [z]
    while frontier:
        nxt = []
        for s in frontier:
            for p in perms:
                img = apply_vertex_permutation(p, s)
                if img not in seen:
                    seen.add(img)
                    nxt.append(img)
        frontier = nxt
    return seen


def verify_block_system(instance: OsspInstance, blocks, generators) -> bool:
    """True iff every generator maps every block onto a block of the partition."""
    block_sets = [frozenset(b) for b in blocks]
    all_vertices = set()
    for b in block_sets:
        if not b:
            raise DomainError("blocks must be nonempty")
        for v in b:
            if not (1 <= v <= instance.n_bits):
                raise DomainError(f"vertex {v} out of range 1..{instance.n_bits}")
        if all_vertices & b:
            raise DomainError("blocks overlap; not a partition")
        all_vertices |= b
    if all_vertices != set(range(1, instance.n_bits + 1)):
        raise DomainError("blocks do not cover every vertex; not a partition")
    partition = set(block_sets)
    for g in generators:
        perm = vertex_permutation(instance, g)
        for b in block_sets:
            image = frozenset(perm[v - 1] + 1 for v in b)
            if image not in partition:
                return False
    return True


# ---------------------------------------------------------------------------
# transposition words


def decompose_job_permutation(tau) -> list[int]:
    """Factor tau (0-based one-line tuple) into adjacent transpositions.

    Returns 1-based generator indices [i1, ..., ik] meaning: apply (i1, i1+1)
    first, then (i2, i2+1), and so on. The length equals the inversion count
    of tau, hence is at most J(J-1)/2.
    """
    tau = tuple(tau)
    arr = list(_check_perm(tau, len(tau)))
    word: list[int] = []
    changed = True
    while changed:
        changed = False
        for k in range(len(arr) - 1):
            if arr[k] > arr[k + 1]:
                arr[k], arr[k + 1] = arr[k + 1], arr[k]
                word.append(k + 1)
                changed = True
    return word


def recompose_word(word, n: int) -> tuple[int, ...]:
    """Multiply out a word: first listed transposition acts first."""
    e = identity_perm(n)
    for i in word:
        e = compose_perms(_adjacent_transposition(n, i), e)
    return e


# ---------------------------------------------------------------------------
# mixing families and brute-force verification


def check_mixing_family(instance: OsspInstance, family) -> bool:
    """True iff the job transpositions {tau_i : i in family} connect all solutions.

    Connectivity of the move graph on the solution set is equivalent to the
    family leaving no nontrivial coordinate subspace of the solution span
    invariant.
    """
    family = list(family)
    for i in family:
        if not (1 <= i <= instance.jobs - 1):
            raise DomainError(f"generator index {i} out of range 1..{instance.jobs - 1}")
    solutions = enumerate_solutions(instance)
    if len(solutions) <= 1:
        return True
    perms = [
        vertex_permutation(instance, job_transposition_element(instance, i))
        for i in family
    ]
    seen = {solutions[0]}
    frontier = [solutions[0]]
    while frontier:
        nxt = []
        for s in frontier:
            for p in perms:
                img = apply_vertex_permutation(p, s)
                if img not in seen:
                    seen.add(img)
                    nxt.append(img)
        frontier = nxt
    return len(seen) == len(solutions)


def bruteforce_feasibility_preservers(graph: ConstraintGraph, solutions) -> set[tuple[int, ...]]:
    """All N! vertex permutations mapping every solution to a solution.

    Guarded at N <= 10; beyond that the factorial scan is refused.
    """
    n = graph.n_vertices
    if n > BRUTE_FORCE_VERTEX_CAP:
        raise CapabilityError(
            f"brute-force permutation scan refused for N = {n} > {BRUTE_FORCE_VERTEX_CAP}"
        )
    sol_vertices = []
    sol_masks = set()
    for z in solutions:
        vs = tuple(k for k, c in enumerate(z) if c == "1")
        sol_vertices.append(vs)
        mask = 0
        for v in vs:
            mask |= 1 << v
        sol_masks.add(mask)
    out = set()
    for perm in itertools.permutations(range(n)):
        ok = True
        for vs in sol_vertices:
            mask = 0
            for v in vs:
                mask |= 1 << perm[v]
            if mask not in sol_masks:
                ok = False
                break
        if ok:
            out.add(perm)
    return out
