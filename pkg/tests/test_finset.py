"""Tests for the finite-set site: simplices, complexes, set-level gluing,
and the covering/sheaf correspondence."""

import itertools

import pytest

from finsite.finset import (
    FinSetError,
    all_injection_families,
    asc,
    asc_presentation,
    contains_bijection,
    face_injection,
    face_label,
    face_space,
    finset,
    finset_glue_space,
    finset_path_limit,
    finset_presentation,
    identity_injection,
    injection,
    is_jointly_surjective,
    monodromy_wedge_counterexample,
    sheaf_axiom_check,
    simplex_space,
    subcanonicity_sweep,
    _subset_orbit_reps,
)
from finsite.locales import is_sober, sobrification_unit


def letters(n):
    return finset(tuple("abcd"[:n]))


def oracle_matching_families(family, Y):
    """Brute force: every tuple of maps, filtered by pairwise agreement."""
    spaces = [list(itertools.product(range(Y.size), repeat=f.source.size))
              for f in family]
    out = []
    for combo in itertools.product(*spaces):
        ok = True
        for i, fi in enumerate(family):
            for j, fj in enumerate(family):
                for b in range(fi.source.size):
                    for c in range(fj.source.size):
                        if fi(b) == fj(c) and combo[i][b] != combo[j][c]:
                            ok = False
        if ok:
            out.append(combo)
    return out


def oracle_sheaf(family, Y, target):
    """Independent verdict: restriction to matching families is bijective."""
    matchings = oracle_matching_families(family, Y)
    restrictions = [tuple(tuple(h[f(b)] for b in range(f.source.size))
                          for f in family)
                    for h in itertools.product(range(Y.size),
                                               repeat=target.size)]
    return (len(set(restrictions)) == len(restrictions)
            and set(restrictions) == set(matchings))


def test_finset_and_injection_validation():
    A = letters(2)
    with pytest.raises(FinSetError):
        finset(("a", "a"))
    with pytest.raises(FinSetError):
        injection(A, A, (0,))
    with pytest.raises(FinSetError):
        injection(A, A, (0, 2))
    with pytest.raises(FinSetError):
        injection(A, A, (0, 0))
    empty = finset(())
    e = injection(empty, A, ())
    assert e.images == () and not e.is_bijective
    assert injection(empty, empty, ()).is_bijective
    assert identity_injection(A).is_bijective
    assert identity_injection(A)(1) == 1


def test_joint_surjectivity_and_bijection_flags():
    A = letters(2)
    singles = [face_injection(A, [0]), face_injection(A, [1])]
    assert is_jointly_surjective(singles)
    assert not contains_bijection(singles)
    assert not is_jointly_surjective([face_injection(A, [0])])
    assert contains_bijection([face_injection(A, [0, 1])])
    assert not contains_bijection([])
    assert not is_jointly_surjective([], A)
    assert is_jointly_surjective([], finset(()))
    with pytest.raises(FinSetError):
        is_jointly_surjective([])
    with pytest.raises(FinSetError):
        is_jointly_surjective([face_injection(A, [0]),
                               face_injection(letters(3), [0])])


def test_simplex_sizes_and_unique_closed_top_face():
    for n in range(4):
        A = finset(tuple(f"v{i}" for i in range(n + 1)))
        X = simplex_space(A)
        assert X.n == 2 ** (n + 1) - 1
        closed_points = [p for p in range(X.n)
                         if X.is_closed(frozenset([p]))]
        assert closed_points == [X.n - 1]
        assert X.points[-1] == face_label(A, range(A.size))
        for i in range(A.size):
            assert X.is_open(frozenset([X.points.index(face_label(A, [i]))]))
        assert X.is_t0()
        assert is_sober(X)[0]


def test_simplex_on_two_vertices_matches_its_locale_points():
    X = simplex_space(letters(2))
    assert X.points == ("{a}", "{b}", "{a,b}")
    assert len(X.opens) == 5
    unit = sobrification_unit(X)
    assert unit.is_homeomorphism()


def test_simplex_needs_a_vertex():
    with pytest.raises(FinSetError):
        simplex_space(finset(()))


def test_asc_closure_and_validation():
    K = asc("abc", ["ab", "bc", "ca"])
    assert K.face_labels() == ("{a}", "{b}", "{c}",
                               "{a,b}", "{a,c}", "{b,c}")
    K2 = asc("abcd", ["abc", "bcd"])
    sizes = [len(f) for f in K2.faces]
    assert len(K2.faces) == 11
    assert sizes.count(1) == 4 and sizes.count(2) == 5 and sizes.count(3) == 2
    with pytest.raises(FinSetError):
        asc("ab", ["a"])
    with pytest.raises(FinSetError):
        asc("ab", ["ac"])
    with pytest.raises(FinSetError):
        asc("aa", ["aa"])


def test_face_space_of_hollow_triangle():
    K = asc("abc", ["ab", "bc", "ca"])
    X = face_space(K)
    assert X.n == 6
    closed_points = sorted(X.points[p] for p in range(X.n)
                           if X.is_closed(frozenset([p])))
    assert closed_points == ["{a,b}", "{a,c}", "{b,c}"]
    for v in ("{a}", "{b}", "{c}"):
        assert X.is_open(frozenset([X.index(v)]))
    assert X.is_t0() and is_sober(X)[0]


def test_asc_presentation_shape():
    K = asc("abc", ["ab", "bc", "ca"])
    P = asc_presentation(K)
    assert P.names == K.face_labels()
    assert [A.size for A in P.carriers] == [1, 1, 1, 2, 2, 2]
    assert len(P.arrows) == 6
    for si, di, f in P.arrows:
        assert P.carriers[si].size < P.carriers[di].size
        assert f.source == P.carriers[si] and f.target == P.carriers[di]


def test_glued_space_equals_face_poset():
    for vertices, gens in [("abc", ["ab", "bc", "ca"]),
                           ("abcd", ["abc", "bcd"]),
                           ("abcd", ["abcd"]),
                           ("abc", ["ab", "c"])]:
        K = asc(vertices, gens)
        G = finset_glue_space(asc_presentation(K))
        F = face_space(K)
        assert G.space.points == tuple(f"{l}:{l}" for l in K.face_labels())
        assert G.space.specialization_leq() == F.specialization_leq()
        assert G.space.opens == F.opens


def test_glued_charts_are_open_embeddings():
    K = asc("abcd", ["abc", "bcd"])
    G = finset_glue_space(asc_presentation(K))
    for chart in G.charts:
        assert chart.is_open_embedding()


def test_presentation_without_arrows_glues_discrete():
    pt = finset(("p",))
    P = finset_presentation([("P0", pt), ("P1", pt), ("P2", pt)], [])
    G = finset_glue_space(P)
    assert G.space.n == 3
    assert len(G.space.opens) == 8
    assert G.space.points == ("P0:{p}", "P1:{p}", "P2:{p}")


def test_presentation_validation():
    pt = finset(("p",))
    two = letters(2)
    with pytest.raises(FinSetError):
        finset_presentation([("P", pt), ("P", pt)], [])
    with pytest.raises(FinSetError):
        finset_presentation([("P", pt)], [("P", "Q", identity_injection(pt))])
    with pytest.raises(FinSetError):
        finset_presentation([("P", pt), ("Q", two)],
                            [("P", "Q", identity_injection(two))])


def test_path_limits_open_and_closed():
    K = asc("abc", ["ab", "ac"])
    P = asc_presentation(K)
    a_ab = next(i for i, (si, di, _) in enumerate(P.arrows)
                if P.names[si] == "{a}" and P.names[di] == "{a,b}")
    a_ac = next(i for i, (si, di, _) in enumerate(P.arrows)
                if P.names[si] == "{a}" and P.names[di] == "{a,c}")
    span = ((a_ab, False), (a_ac, True))
    opened = finset_path_limit(P, P.node("{a,b}"), span, "opened")
    assert opened.labels == ("(a,a,a)",)
    with pytest.raises(FinSetError):
        finset_path_limit(P, P.node("{a,b}"), span, "closed")
    loop = ((a_ab, False), (a_ab, True))
    closed = finset_path_limit(P, P.node("{a,b}"), loop, "closed")
    assert closed.size == 1
    assert closed.size == finset_path_limit(P, P.node("{a,b}"), loop,
                                            "opened").size
    start_only = finset_path_limit(P, P.node("{a,b}"), (), "closed")
    assert start_only.size == 2
    with pytest.raises(ValueError):
        finset_path_limit(P, 0, (), "sideways")
    with pytest.raises(FinSetError):
        finset_path_limit(P, P.node("{a,b}"), ((a_ab, True),), "opened")


def test_wedge_counterexample():
    report = monodromy_wedge_counterexample()
    assert report.closed_limit.size == 0
    assert report.opened_limit.size == 1
    assert report.opened_limit.labels == ("(x,x,y)",)
    assert not report.free
    assert report.witness == "V <- U -> V"


def test_sheaf_check_against_bruteforce_oracle():
    A = letters(2)
    for family in all_injection_families(A):
        for ysize in range(3):
            Y = finset(tuple(f"y{j}" for j in range(ysize)))
            got, _ = sheaf_axiom_check(family, Y, A)
            assert got == oracle_sheaf(family, Y, A)
    B = letters(3)
    spot = [
        [face_injection(B, [0, 1]), face_injection(B, [1, 2])],
        [face_injection(B, [0]), face_injection(B, [1, 2]),
         face_injection(B, [])],
        [face_injection(B, [0, 1, 2])],
    ]
    Y = letters(2)
    for family in spot:
        got, _ = sheaf_axiom_check(family, Y, B)
        assert got == oracle_sheaf(family, Y, B)


def test_sheaf_condition_tracks_joint_surjectivity_small():
    tests = [finset(tuple(f"y{j}" for j in range(y))) for y in range(4)]
    for size in (1, 2, 3):
        A = letters(size)
        for family in all_injection_families(A):
            sheafy = all(sheaf_axiom_check(family, Y, A)[0] for Y in tests)
            assert sheafy == is_jointly_surjective(family, A)


def test_bijection_pretopology_is_strictly_coarser():
    for size in (2, 3, 4):
        A = letters(size)
        singles = [face_injection(A, [i]) for i in range(size)]
        assert is_jointly_surjective(singles, A)
        assert not contains_bijection(singles)
    A = letters(1)
    for family in all_injection_families(A):
        if is_jointly_surjective(family, A):
            assert contains_bijection(family)


def test_orbit_reduction_is_sound():
    for size in (1, 2, 3):
        m = 1 << size
        perms = list(itertools.permutations(range(size)))

        def act(perm, fam):
            moved = 0
            for s in range(m):
                if fam & (1 << s):
                    t = sum(1 << perm[i] for i in range(size)
                            if s & (1 << i))
                    moved |= 1 << t
            return moved

        canon = {fam: min(act(p, fam) for p in perms)
                 for fam in range(1 << m)}
        reps = _subset_orbit_reps(size)
        assert len(reps) == len(set(canon.values()))
        assert {canon[r] for r in reps} == set(canon.values())


def test_subcanonicity_sweep_small():
    report = subcanonicity_sweep(3, 3)
    assert report["agree"]
    assert report["families"] == 96
    assert report["disagreements"] == []
