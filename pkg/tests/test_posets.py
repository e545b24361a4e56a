import random

import pytest

from bigraded.errors import InputError
from bigraded.posets import (
    INF,
    CoverFunctor,
    FinitePoset,
    PosetMap,
    antichain_poset,
    chain_poset,
    check_nerve_theorem,
    check_poset_map_theorem,
    cone_homology_f2,
    connectivity_report,
    euler_characteristic,
    fuzz_nerve,
    fuzz_poset_map,
    is_homologically_connected,
    order_chains,
    parse_cover,
    parse_weights,
    poset_from_text,
    random_monotone_map,
    random_poset,
    reduced_homology_f2,
    reduced_homology_q,
    reduced_homology_z,
    subsets_poset,
    wreath_poset,
)


def test_order_complex_of_total_chain():
    chains = order_chains(chain_poset(3))
    assert [len(level) for level in chains] == [3, 3, 1]  # a full 2-simplex


def test_order_complex_of_antichain():
    chains = order_chains(antichain_poset(4))
    assert [len(level) for level in chains] == [4, 0, 0, 0]


def test_subsets_of_three_is_a_circle():
    # barycentric subdivision of the boundary of a triangle
    p = subsets_poset(3)
    assert reduced_homology_f2(p) == {1: 1}
    assert reduced_homology_q(p) == {1: 1}
    assert reduced_homology_z(p) == {1: (1, [])}


@pytest.mark.parametrize("base", [2, 3, 4, 5, 6])
def test_boundary_of_simplex_connectivity(base):
    # proper nonempty subsets of a (p+1)-set: sphere of dimension p-1
    p = base - 1
    rep = connectivity_report(subsets_poset(base))
    assert rep.connectivity == p - 2
    assert rep.dims == {p - 1: 1}


def test_boundary_of_simplex_integral_homology():
    for base in (3, 4):
        hz = reduced_homology_z(subsets_poset(base))
        assert hz == {base - 2: (1, [])}


def test_empty_poset_convention():
    empty = FinitePoset([], [])
    rep = connectivity_report(empty)
    assert rep.connectivity == -2
    assert rep.dims == {-1: 1}


def test_cone_posets_are_acyclic():
    rng = random.Random(4)
    for _ in range(25):
        q = random_poset(rng, 7)
        pairs = q.cover_pairs() + [(nm, "TOP") for nm in q.names]
        cone = FinitePoset(list(q.names) + ["TOP"], pairs)
        assert connectivity_report(cone).connectivity == INF
        bottom = FinitePoset(list(q.names) + ["BOT"], q.cover_pairs() + [("BOT", nm) for nm in q.names])
        assert connectivity_report(bottom).connectivity == INF


def test_euler_characteristic_matches_homology():
    rng = random.Random(8)
    for _ in range(20):
        p = random_poset(rng, 7)
        chi_chains = euler_characteristic(p)
        hom = reduced_homology_q(p)
        chi_hom = sum((-1) ** k * v for k, v in hom.items())
        assert chi_chains == chi_hom


def test_homology_f2_and_q_agree_on_small_random_posets():
    # no torsion is reachable at these sizes, so the surrogates coincide
    rng = random.Random(15)
    for _ in range(15):
        p = random_poset(rng, 6)
        assert reduced_homology_f2(p) == reduced_homology_q(p)


def test_poset_validation():
    with pytest.raises(InputError):
        FinitePoset(["a", "b"], [("a", "b"), ("b", "a")])
    with pytest.raises(InputError):
        FinitePoset(["a", "a"], [])
    with pytest.raises(InputError):
        FinitePoset(["a"], [("a", "zzz")])


def test_identity_map_theorem_holds():
    p = subsets_poset(3)
    f = PosetMap(p, p, {nm: nm for nm in p.names})
    assert cone_homology_f2(f, 3) == {}
    t = {nm: 5 for nm in p.names}
    rep = check_poset_map_theorem(f, t, 0, "i")
    assert rep.conclusion_holds
    assert rep.consistent


def test_point_to_antichain_fails_consistently():
    pt = FinitePoset(["*"], [])
    ac = antichain_poset(2)
    f = PosetMap(pt, ac, {"*": "a0"})
    # conclusion fails at n = 0 and some hypothesis fails for every t
    for t0 in range(-2, 4):
        for t1 in range(-2, 4):
            for variant in ("i", "ii"):
                rep = check_poset_map_theorem(f, {"a0": t0, "a1": t1}, 0, variant)
                assert not rep.conclusion_holds
                assert not rep.hypotheses_hold
                assert rep.consistent


def test_non_order_preserving_map_rejected():
    c = chain_poset(2)
    a = antichain_poset(2)
    with pytest.raises(InputError):
        PosetMap(c, a, {"c0": "a0", "c1": "a1"})


def test_nerve_point_cover_trivial_case():
    X = chain_poset(3)
    A = FinitePoset(["*"], [])
    F = CoverFunctor(A, X, {"*": list(X.names)})
    tX = {"c0": 0, "c1": 1, "c2": 2}
    rep = check_nerve_theorem(X, A, F, 2, tX, {"*": 0})
    assert rep.hypotheses_hold and rep.conclusion_holds


def test_cover_functor_validation():
    X = chain_poset(2)
    A = chain_poset(2)
    with pytest.raises(InputError):
        CoverFunctor(A, X, {"c0": ["c1"], "c1": []})  # not closed downward
    with pytest.raises(InputError):
        CoverFunctor(A, X, {"c0": ["c0"], "c1": ["c0", "c1"]})  # not contravariant


def test_wreath_poset_counts_and_projections():
    rng = random.Random(21)
    for _ in range(10):
        A = random_poset(rng, 4)
        X = random_poset(rng, 5)
        F = None
        from bigraded.posets import random_cover

        F = random_cover(rng, A, X)
        w, pi1, pi2 = wreath_poset(A, F)
        assert w.n == sum(len(F.value(a).names) for a in A.names)
        # projections validated order-preserving at construction; fibers of
        # pi1 have the homology of F(a)
        for a in A.names:
            fib = pi1.fiber_leq(a)
            assert reduced_homology_f2(fib) == reduced_homology_f2(F.value(a))


def test_wreath_point_index():
    X = subsets_poset(3)
    A = FinitePoset(["*"], [])
    F = CoverFunctor(A, X, {"*": list(X.names)})
    w, _, _ = wreath_poset(A, F)
    assert w.n == X.n
    assert reduced_homology_f2(w) == reduced_homology_f2(X)


def test_connected_checks_conventions():
    empty = FinitePoset([], [])
    assert is_homologically_connected(empty, -2)
    assert not is_homologically_connected(empty, -1)
    pt = FinitePoset(["*"], [])
    assert is_homologically_connected(pt, -1)
    assert is_homologically_connected(pt, 10)
    circle = subsets_poset(3)
    assert is_homologically_connected(circle, 0)
    assert not is_homologically_connected(circle, 1)


def test_fuzz_campaigns_small():
    rep = fuzz_poset_map(400, 9, seed=1234)
    assert rep.instances == 400
    assert rep.hypotheses_satisfied > 0
    assert rep.clean, rep.counterexamples
    rep2 = fuzz_nerve(400, 9, seed=4321)
    assert rep2.instances == 400
    assert rep2.hypotheses_satisfied > 0
    assert rep2.clean, rep2.counterexamples


def test_fuzz_determinism():
    a = fuzz_poset_map(100, 8, seed=7)
    b = fuzz_poset_map(100, 8, seed=7)
    assert (a.hypotheses_satisfied, a.resampled_oversize) == (
        b.hypotheses_satisfied,
        b.resampled_oversize,
    )


def test_counterexample_minimizers_produce_wellformed_dumps():
    # the campaigns never find violations, so exercise the dump plumbing
    # directly on fabricated instances
    from bigraded.posets import _minimize_map_instance, _minimize_nerve_instance

    pt = FinitePoset(["*"], [])
    ac = antichain_poset(2)
    f = PosetMap(pt, ac, {"*": "a0"})
    dump = _minimize_map_instance(f, {"a0": 0, "a1": 0}, 0, "i")
    assert set(dump) == {
        "source", "source_elements", "target", "target_elements", "map", "t", "n", "variant",
    }
    X = subsets_poset(2)
    A = FinitePoset(["*"], [])
    F = CoverFunctor(A, X, {"*": list(X.names)})
    dump2 = _minimize_nerve_instance(X, A, F, 1, {x: 1 for x in X.names}, {"*": 5})
    assert set(dump2) == {"X", "X_elements", "A", "A_elements", "F", "n", "tA", "tX"}


def test_random_monotone_map_is_monotone():
    rng = random.Random(2)
    for _ in range(50):
        X, Y = random_poset(rng, 7), random_poset(rng, 7)
        f = random_monotone_map(rng, X, Y)  # constructor validates
        assert set(f.mapping) == set(X.names)


def test_parsers():
    p = poset_from_text("a < b\nb < c\nd\n")
    assert p.n == 4 and p.leq("a", "c") and not p.leq("a", "d")
    w = parse_weights("a 1\nb -2\n")
    assert w == {"a": 1, "b": -2}
    X = chain_poset(2)
    A = FinitePoset(["*"], [])
    F = parse_cover("* : c0 c1\n", A, X)
    assert F.member("*", "c0")
    with pytest.raises(InputError):
        parse_weights("a\n")
