import random
from itertools import combinations

import pytest

from bigraded.errors import DomainError
from bigraded.sympf2 import (
    CANONICAL_SUBSETS,
    SWAP_MATRIX,
    all_symplectic_matrices,
    apply_matrix,
    compose_lr,
    cycle_notation,
    is_symplectic,
    mat_mul,
    matrix_from_rows,
    pairing,
    parse_matrix,
    perm_sign,
    phi,
    totally_nonorthogonal_subsets,
    vector_name,
    vector_of_name,
    verify_isomorphism,
)

IDENTITY = matrix_from_rows([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])


def test_pairing_is_alternating_and_standard():
    for v in range(16):
        assert pairing(v, v) == 0
    e1, f1, e2, f2 = 1, 2, 4, 8
    assert pairing(e1, f1) == 1 and pairing(e2, f2) == 1
    assert pairing(e1, e2) == 0 and pairing(e1, f2) == 0


def test_exactly_six_subsets_matching_printed_list():
    subs = totally_nonorthogonal_subsets()
    assert len(subs) == 6
    assert subs[0] == frozenset(
        vector_of_name(nm)
        for nm in ("e1", "f1", "e1+f1+e2", "e1+f1+f2", "e1+f1+e2+f2")
    )
    assert list(subs) == list(CANONICAL_SUBSETS)


def test_all_pairwise_pairings_are_one():
    for s in totally_nonorthogonal_subsets():
        assert all(pairing(u, v) == 1 for u, v in combinations(sorted(s), 2))
        assert 0 not in s


def test_phi_swap_is_the_triple_transposition():
    p = phi(SWAP_MATRIX)
    assert cycle_notation(p) == "(12)(34)(56)"
    assert perm_sign(p) == -1  # odd, hence nontrivial in the mod-2 abelianization


def test_phi_identity():
    assert phi(IDENTITY) == (0, 1, 2, 3, 4, 5)
    assert cycle_notation(phi(IDENTITY)) == "()"


def test_phi_rejects_nonsymplectic():
    bad = matrix_from_rows([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0]])
    with pytest.raises(DomainError):
        phi(bad)


def test_group_permutes_the_subsets():
    # closure: applying any form-preserving matrix permutes the six subsets
    subs = set(totally_nonorthogonal_subsets())
    rng = random.Random(6)
    group = all_symplectic_matrices()
    for m in rng.sample(group, 60):
        for s in subs:
            assert frozenset(apply_matrix(v, m) for v in s) in subs


def test_phi_is_a_homomorphism_on_random_pairs():
    rng = random.Random(9)
    group = all_symplectic_matrices()
    for _ in range(300):
        a, b = rng.choice(group), rng.choice(group)
        assert phi(mat_mul(a, b)) == compose_lr(phi(a), phi(b))


def test_verify_isomorphism():
    rep = verify_isomorphism(random_pairs=500)
    assert rep.group_order == 720
    assert rep.kernel_trivial
    assert rep.image_is_full_symmetric
    assert rep.has_transposition and rep.has_six_cycle
    assert rep.is_isomorphism


def test_parse_matrix_round_trip():
    m = parse_matrix("0,0,1,0;0,0,0,1;1,0,0,0;0,1,0,0")
    assert m == SWAP_MATRIX
    assert is_symplectic(m)


def test_vector_names():
    assert vector_name(vector_of_name("e1+f1+e2")) == "e1+f1+e2"
    assert vector_name(0) == "0"
