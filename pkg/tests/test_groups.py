"""Constraint-graph and permutation-group tests against frozen structure."""

import itertools
import math

import pytest

from ossvqa.errors import CapabilityError, DomainError
from ossvqa.groups import (
    GroupElement,
    apply_group_element,
    apply_vertex_permutation,
    build_constraint_graph,
    bruteforce_feasibility_preservers,
    check_mixing_family,
    compose_perms,
    cycle_notation,
    decompose_job_permutation,
    generate_group,
    generated_group_order,
    group_generators,
    group_order,
    identity_element,
    identity_perm,
    invert_perm,
    is_automorphism,
    is_independent_set,
    job_generators,
    job_transposition_element,
    orbit,
    position_transposition_element,
    recompose_word,
    transposer_element,
    vertex_permutation,
    verify_block_system,
)
from ossvqa.instances import (
    OsspInstance,
    enumerate_solutions,
    indices_of_ones,
    is_feasible,
    job_blocks,
    position_blocks,
)

OSSP224 = OsspInstance(2, 2, 4)
OSSP133 = OsspInstance(1, 3, 3)
OSSP132 = OsspInstance(1, 3, 2)
OSSP122 = OsspInstance(1, 2, 2)
OSSP111 = OsspInstance(1, 1, 1)


def test_perm_primitives():
    p = (1, 2, 0)
    q = (0, 2, 1)
    assert compose_perms(p, q) == (1, 0, 2)  # p after q
    assert compose_perms(q, p) == (2, 1, 0)
    assert invert_perm(p) == (2, 0, 1)
    assert compose_perms(p, invert_perm(p)) == identity_perm(3)
    assert cycle_notation((1, 0, 3, 2)) == "(1,2)(3,4)"
    assert cycle_notation((1, 2, 0)) == "(1,2,3)"
    assert cycle_notation(identity_perm(4)) == "id"


def test_graph_counts():
    g224 = build_constraint_graph(OSSP224)
    assert g224.n_vertices == 16 and g224.edge_count() == 48
    g133 = build_constraint_graph(OSSP133)
    assert g133.n_vertices == 9 and g133.edge_count() == 18
    g111 = build_constraint_graph(OSSP111)
    assert g111.n_vertices == 1 and g111.edge_count() == 0


def test_edge_count_formula():
    # P*C(J,2) same-position edges plus J*C(P,2) same-job edges, disjoint families
    for inst in (OSSP224, OSSP133, OSSP132, OsspInstance(2, 3, 4), OsspInstance(2, 2, 2)):
        g = build_constraint_graph(inst)
        p, j = inst.positions, inst.jobs
        expected = p * (j * (j - 1) // 2) + j * (p * (p - 1) // 2)
        assert g.edge_count() == expected


def test_independent_sets():
    g224 = build_constraint_graph(OSSP224)
    # the drawn example solution: jobs 1..4 at (1,1), (2,2), (2,1), (1,2)
    assert is_independent_set(g224, {1, 8, 11, 14})
    assert is_independent_set(g224, set())
    g133 = build_constraint_graph(OSSP133)
    assert not is_independent_set(g133, {1, 2})  # same position block
    assert not is_independent_set(g133, {1, 4})  # same job
    # feasible strings are exactly the J-element independent sets
    for z in enumerate_solutions(OSSP224):
        assert is_independent_set(g224, indices_of_ones(z))
    import numpy as np

    rng = np.random.default_rng(3)
    for _ in range(100):
        vs = tuple(sorted(rng.choice(16, size=4, replace=False) + 1))
        chars = ["0"] * 16
        for v in vs:
            chars[v - 1] = "1"
        assert is_independent_set(g224, vs) == is_feasible(OSSP224, "".join(chars))
    with pytest.raises(DomainError):
        is_independent_set(g133, {0})


def test_group_action_goldens():
    z0 = "100010001"
    t1 = job_transposition_element(OSSP133, 1)
    t2 = job_transposition_element(OSSP133, 2)
    assert apply_group_element(OSSP133, identity_element(OSSP133), z0) == z0
    assert apply_group_element(OSSP133, t1, z0) == "010100001"
    assert apply_group_element(OSSP133, t2, z0) == "100001010"
    # tau1 tau2 means tau2 acts first
    t1t2 = GroupElement(identity_perm(3), compose_perms(t1.job_perm, t2.job_perm))
    assert apply_group_element(OSSP133, t1t2, z0) == "010001100"
    with pytest.raises(DomainError):
        apply_group_element(OSSP132, transposer_element(OSSP133), "100010")
    with pytest.raises(DomainError):
        transposer_element(OSSP132)


def test_action_preserves_solutions():
    import numpy as np

    for inst in (OSSP224, OSSP133, OSSP132):
        sols = set(enumerate_solutions(inst))
        gens = group_generators(inst)
        for g in gens:
            for z in sols:
                assert apply_group_element(inst, g, z) in sols
        # random words in the generators stay inside the solution set
        rng = np.random.default_rng(11)
        perms = [vertex_permutation(inst, g) for g in gens]
        for _ in range(50):
            z = list(sols)[rng.integers(len(sols))]
            for k in rng.integers(len(perms), size=6):
                z = apply_vertex_permutation(perms[k], z)
            assert z in sols


def test_generator_cycles_goldens():
    cycles224 = [
        cycle_notation(vertex_permutation(OSSP224, g)) for g in job_generators(OSSP224)
    ]
    assert cycles224 == [
        "(1,2)(5,6)(9,10)(13,14)",
        "(2,3)(6,7)(10,11)(14,15)",
        "(3,4)(7,8)(11,12)(15,16)",
    ]
    cycles133 = [
        cycle_notation(vertex_permutation(OSSP133, g)) for g in job_generators(OSSP133)
    ]
    assert cycles133 == ["(1,2)(4,5)(7,8)", "(2,3)(5,6)(8,9)"]
    assert group_generators(OSSP111) == []


def test_group_orders():
    assert group_order(OSSP224) == 1152  # 2*(4!)^2
    assert group_order(OSSP133) == 72  # 2*(3!)^2
    assert group_order(OSSP132) == 12  # 3!*2!
    assert group_order(OSSP122) == 8
    assert group_order(OSSP111) == 1
    for inst in (OSSP133, OSSP132, OSSP122, OSSP111, OSSP224):
        assert generated_group_order(inst) == group_order(inst)


def test_generate_group_basics():
    assert generate_group([]) == {()}
    s3 = generate_group([(1, 0, 2), (0, 2, 1)])
    assert len(s3) == 6
    with pytest.raises(CapabilityError):
        generate_group([(1, 0, 2), (0, 2, 1)], max_size=3)


def test_orbit_transitivity():
    for inst in (OSSP224, OSSP133, OSSP132, OSSP122):
        sols = enumerate_solutions(inst)
        assert orbit(inst, sols[0], group_generators(inst)) == set(sols)
    # busy case: job permutations alone already reach everything
    sols133 = enumerate_solutions(OSSP133)
    assert orbit(OSSP133, "100010001", job_generators(OSSP133)) == set(sols133)
    # non-busy case: job permutations alone are stuck on the occupied positions
    partial = orbit(OSSP132, enumerate_solutions(OSSP132)[0], job_generators(OSSP132))
    assert len(partial) < len(enumerate_solutions(OSSP132))
    assert orbit(OSSP133, "100010001", []) == {"100010001"}
    with pytest.raises(DomainError):
        orbit(OSSP133, "110000000", job_generators(OSSP133))


def test_block_systems():
    # job and position blocks are block systems for the permutation pairs
    pair_gens = job_generators(OSSP224) + [
        position_transposition_element(OSSP224, p) for p in range(1, 4)
    ]
    jb = job_blocks(OSSP224)
    pb = position_blocks(OSSP224)
    assert verify_block_system(OSSP224, jb, pair_gens)
    assert verify_block_system(OSSP224, pb, pair_gens)
    # the role transposer maps job blocks onto position blocks, which overlap
    # the original job blocks in one diagonal vertex each, so the law fails
    theta = transposer_element(OSSP224)
    assert not verify_block_system(OSSP224, jb, [theta])
    assert not verify_block_system(OSSP224, pb, [theta])
    # singletons always map to singletons
    singletons = [{v} for v in range(1, 17)]
    assert verify_block_system(OSSP224, singletons, group_generators(OSSP224))
    with pytest.raises(DomainError):
        verify_block_system(OSSP224, [{1, 2}, {2, 3}], pair_gens)
    with pytest.raises(DomainError):
        verify_block_system(OSSP224, [jb[0]], pair_gens)


def test_transposer_exchanges_block_partitions():
    theta = vertex_permutation(OSSP224, transposer_element(OSSP224))
    jb = [frozenset(b) for b in job_blocks(OSSP224)]
    pb = [frozenset(b) for b in position_blocks(OSSP224)]
    images = {frozenset(theta[v - 1] + 1 for v in b) for b in jb}
    assert images == set(pb)


def test_decompose_recompose_exhaustive():
    for n in range(1, 6):
        for tau in itertools.permutations(range(n)):
            word = decompose_job_permutation(tau)
            assert len(word) <= n * (n - 1) // 2
            assert recompose_word(word, n) == tau
    assert decompose_job_permutation((0, 1, 2)) == []
    assert decompose_job_permutation((1, 0, 2)) == [1]
    # the (1,3) swap needs three adjacent transpositions
    word = decompose_job_permutation((2, 1, 0))
    assert len(word) == 3
    assert recompose_word(word, 3) == (2, 1, 0)


def test_decompose_random_s6():
    import numpy as np

    rng = np.random.default_rng(5)
    for _ in range(100):
        tau = tuple(int(x) for x in rng.permutation(6))
        word = decompose_job_permutation(tau)
        assert len(word) <= 15
        assert recompose_word(word, 6) == tau


def su_orbit_count(instance, family):
    """Independent route: orbit partition of the solutions under the closed
    subgroup generated by the named job transpositions."""
    perms = [
        vertex_permutation(instance, job_transposition_element(instance, i))
        for i in family
    ]
    subgroup = generate_group(perms) if perms else {()}
    sols = enumerate_solutions(instance)
    unassigned = set(sols)
    orbits = 0
    while unassigned:
        z = next(iter(unassigned))
        members = {
            apply_vertex_permutation(p, z) if p else z for p in subgroup
        }
        unassigned -= members
        orbits += 1
    return orbits


@pytest.mark.parametrize(
    "instance,family,connected",
    [
        (OSSP224, [1, 2, 3], True),
        (OSSP224, [1], False),
        (OSSP224, [2], False),
        (OSSP224, [3], False),
        (OSSP224, [1, 2], False),
        (OSSP224, [], False),
        (OSSP133, [1, 2], True),
        (OSSP133, [1], False),
        (OSSP133, [], False),
        (OSSP111, [], True),
    ],
)
def test_mixing_family(instance, family, connected):
    assert check_mixing_family(instance, family) == connected
    assert (su_orbit_count(instance, family) == 1) == connected


def test_mixing_family_validation():
    with pytest.raises(DomainError):
        check_mixing_family(OSSP133, [3])


def test_bruteforce_preservers_small():
    g122 = build_constraint_graph(OSSP122)
    found = bruteforce_feasibility_preservers(g122, enumerate_solutions(OSSP122))
    assert len(found) == 8
    gens = [vertex_permutation(OSSP122, g) for g in group_generators(OSSP122)]
    assert found == generate_group(gens)
    assert all(is_automorphism(g122, p) for p in found)

    g111 = build_constraint_graph(OSSP111)
    assert bruteforce_feasibility_preservers(g111, ["1"]) == {(0,)}

    g121 = build_constraint_graph(OsspInstance(1, 2, 1))
    found121 = bruteforce_feasibility_preservers(g121, ["10", "01"])
    assert found121 == {(0, 1), (1, 0)}

    with pytest.raises(CapabilityError):
        bruteforce_feasibility_preservers(
            build_constraint_graph(OSSP224), enumerate_solutions(OSSP224)
        )


def test_is_automorphism():
    g224 = build_constraint_graph(OSSP224)
    assert is_automorphism(g224, identity_perm(16))
    for g in group_generators(OSSP224):
        assert is_automorphism(g224, vertex_permutation(OSSP224, g))
    g133 = build_constraint_graph(OSSP133)
    bad = list(identity_perm(9))
    bad[0], bad[4] = bad[4], bad[0]  # swap vertices 1 and 5 only
    assert not is_automorphism(g133, tuple(bad))
    # all feasibility preservers of the 2x2 busy instance respect adjacency
    g122 = build_constraint_graph(OSSP122)
    autos = {
        p
        for p in itertools.permutations(range(4))
        if is_automorphism(g122, p)
    }
    assert autos == bruteforce_feasibility_preservers(g122, enumerate_solutions(OSSP122))
