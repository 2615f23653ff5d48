"""Chart presentations, monodromy checks, and gluing."""

import itertools

import pytest

from finsite.catalog import boolean, boolean_pair, catalog, trivial, zmod
from finsite.glue import (
    DiagramPath,
    GlueError,
    affine_glue_check,
    atlas,
    closed_walks,
    glue_space,
    glued_chain,
    is_monodromy_free,
    loop_comparison,
    path_limit,
    presentation,
    visualization_map,
    visualization_space,
)
from finsite.semiring import SemiringHom, find_isomorphism, localize
from finsite.site import cover_family, covers
from finsite.spectra import prime_spectrum, visualization_chain
from finsite.topology import disjoint_union, quotient_space


def oracle_homeomorphic(X, Y):
    if X.n != Y.n or len(X.opens) != len(Y.opens):
        return False
    for perm in itertools.permutations(range(Y.n)):
        if {frozenset(perm[x] for x in u) for u in X.opens} == set(Y.opens):
            return True
    return False


def oracle_glued_space(P, vis):
    """Glue the slow way: materialize the disjoint union of the chart
    spaces and take the quotient by the arrow identifications."""
    spaces = [visualization_space(R, vis) for R in P.semirings]
    union, embeddings = disjoint_union(spaces, prefixes=P.names)
    pairs = []
    for (si, di, h) in P.arrows:
        m = visualization_map(h, vis)
        for x in range(spaces[si].n):
            pairs.append((embeddings[si](x), embeddings[di](m(x))))
    return quotient_space(union, pairs)[0]


def swap_presentation():
    BB = boolean_pair()
    images = []
    for e in BB.elements:
        a, b = e[1:-1].split(",")
        images.append(BB.elements.index(f"({b},{a})"))
    swap = SemiringHom(BB, BB, tuple(images))
    return presentation([("X", BB)], [("X", "X", swap)])


def wedge_presentation():
    BB = boolean_pair()
    B = boolean()
    first = SemiringHom(BB, B, tuple(int(e[1]) for e in BB.elements))
    second = SemiringHom(BB, B, tuple(int(e[3]) for e in BB.elements))
    return presentation([("X", BB), ("U", B)],
                        [("U", "X", first), ("U", "X", second)])


def doubled_point_presentation():
    Z6 = zmod(6)
    loc = localize(Z6, 2)
    return presentation(
        [("A", Z6), ("B", Z6), ("O", loc.semiring)],
        [("O", "A", loc.to_local), ("O", "B", loc.to_local)])


COVERING_FAMILIES = [
    ("B unit", boolean(), [1]),
    ("BxB split", boolean_pair(), [2, 1]),
    ("BxB unit", boolean_pair(), [3]),
    ("Z6 two", zmod(6), [2, 3]),
    ("Z6 three", zmod(6), [1, 2, 3]),
    ("Z6 redundant", zmod(6), [2, 3, 4]),
]


def test_presentation_validation():
    Z6 = zmod(6)
    B = boolean()
    BB = boolean_pair()
    loc = localize(Z6, 2)
    with pytest.raises(GlueError, match="duplicate"):
        presentation([("X", Z6), ("X", Z6)], [])
    with pytest.raises(GlueError, match="not a chart"):
        presentation([("X", Z6)], [("X", "Y", loc.to_local)])
    # hom endpoints must run head algebra -> tail algebra
    with pytest.raises(GlueError, match="head chart"):
        presentation([("X", Z6), ("U", B)], [("U", "X", loc.to_local)])
    # the diagonal B -> BxB is injective, never a localization
    diag = SemiringHom(B, BB, (0, 3))
    with pytest.raises(GlueError, match="not a finite localization"):
        presentation([("X", B), ("U", BB)], [("U", "X", diag)])


def test_atlas_shapes():
    Z6 = zmod(6)
    P = atlas(cover_family(Z6, [2, 3]))
    assert P.names == ("U0", "U1", "U0_1")
    assert [R.n for R in P.semirings] == [3, 2, 1]
    assert P.arrow_names() == (("U0_1", "U0"), ("U0_1", "U1"))

    BB = boolean_pair()
    split = atlas(cover_family(
        BB, [BB.elements.index("(1,0)"), BB.elements.index("(0,1)")]))
    assert [R.n for R in split.semirings] == [2, 2, 1]

    single = atlas(cover_family(Z6, [1]))
    assert single.names == ("U0",)
    assert single.arrows == ()


def test_walk_validation_and_description():
    P = doubled_point_presentation()
    walk = DiagramPath(P, P.node("A"), ((0, False), (1, True)))
    assert walk.describe() == "A <- O -> B"
    assert not walk.is_closed
    loop = DiagramPath(P, P.node("O"), ((0, True), (0, False)))
    assert loop.describe() == "O -> A <- O"
    assert loop.is_closed
    with pytest.raises(GlueError, match="does not start"):
        DiagramPath(P, P.node("A"), ((0, True),)).nodes_visited()


def test_closed_walk_census():
    Z6 = zmod(6)
    P = atlas(cover_family(Z6, [1, 2, 3]))
    walks = closed_walks(P, 8)
    # one doubling per arrow plus the six-cycle through all charts
    assert len(walks) == 7
    assert sorted(len(w.steps) for w in walks) == [2, 2, 2, 2, 2, 2, 6]
    assert [w.describe() for w in closed_walks(P, 8)] == \
        [w.describe() for w in walks]

    assert len(closed_walks(swap_presentation(), 8)) == 2
    # wedge: two doublings plus the two-arrow cycle
    assert len(closed_walks(wedge_presentation(), 8)) == 3


def test_path_limit_single_node():
    Z6 = zmod(6)
    P = presentation([("X", Z6)], [])
    lim = path_limit(DiagramPath(P, 0, ()), "closed")
    assert find_isomorphism(lim, Z6) is not None


def test_path_limit_cospan_is_product_localization():
    Z6 = zmod(6)
    l2, l4 = localize(Z6, 2), localize(Z6, 4)
    P = presentation(
        [("X", Z6), ("U2", l2.semiring), ("U4", l4.semiring)],
        [("U2", "X", l2.to_local), ("U4", "X", l4.to_local)])
    walk = DiagramPath(P, P.node("U2"), ((0, True), (1, False)))
    opened = path_limit(walk, "opened")
    both = localize(Z6, Z6.mul[2][4]).semiring
    assert find_isomorphism(opened, both) is not None
    with pytest.raises(GlueError, match="identify the endpoints"):
        path_limit(walk, "closed")
    with pytest.raises(ValueError, match="unknown walk mode"):
        path_limit(walk, "sideways")


def test_single_arrow_doublings_always_pass():
    presentations = [swap_presentation(), wedge_presentation(),
                     doubled_point_presentation()]
    presentations += [atlas(cover_family(R, els))
                      for _, R, els in COVERING_FAMILIES]
    for P in presentations:
        for ai in range(len(P.arrows)):
            start = P.arrows[ai][0]
            doubling = DiagramPath(P, start, ((ai, True), (ai, False)))
            assert loop_comparison(doubling).is_bijective()


def test_atlases_are_monodromy_free():
    for name, R, els in COVERING_FAMILIES:
        report = is_monodromy_free(atlas(cover_family(R, els)))
        assert report.free and report.exhaustive, name


def test_swap_loop_fails_monodromy():
    report = is_monodromy_free(swap_presentation())
    assert not report.free
    assert report.witness.describe() == "X -> X"
    with pytest.raises(GlueError, match="X -> X"):
        glue_space(swap_presentation())


def test_wedge_fails_monodromy():
    report = is_monodromy_free(wedge_presentation())
    assert not report.free
    assert report.witness.describe() == "X <- U -> X"
    # closed limit collapses to the trivial algebra, cut open it is a point
    assert path_limit(report.witness, "closed").n == 1
    assert path_limit(report.witness, "opened").n == 2


def test_tight_bound_reports_inconclusive():
    Z6 = zmod(6)
    P = atlas(cover_family(Z6, [1, 2, 3]))
    report = is_monodromy_free(P, bound=5)
    assert report.free and not report.exhaustive
    assert "inconclusive beyond bound" in report.verdict()
    wide = is_monodromy_free(P, bound=8)
    assert wide.free and wide.exhaustive


def test_single_node_glue_is_identity():
    Z6 = zmod(6)
    P = presentation([("X", Z6)], [])
    report = is_monodromy_free(P)
    assert report.free and report.walks_checked == 0
    glued = glue_space(P, "prime")
    assert glued.charts[0].is_homeomorphism()
    assert oracle_homeomorphic(glued.space, prime_spectrum(Z6).space)


def test_doubled_point_glue():
    P = doubled_point_presentation()
    glued = glue_space(P, "prime")
    assert glued.space.n == 3
    assert len(glued.space.opens) == 8  # discrete on three points
    shared = [ps for ps in glued.provenance if len(ps) > 1]
    assert shared == [(("A", "{0,3}"), ("B", "{0,3}"), ("O", "{0}"))]
    assert all(c.is_open_embedding() for c in glued.charts)


def test_glue_matches_quotient_oracle():
    cases = [(doubled_point_presentation(), "prime"),
             (doubled_point_presentation(), "weak"),
             (doubled_point_presentation(), "k"),
             (atlas(cover_family(zmod(6), [2, 3])), "prime"),
             (atlas(cover_family(zmod(6), [2, 3])), "twisted"),
             (atlas(cover_family(boolean_pair(), [2, 1])), "strong"),
             (atlas(cover_family(zmod(6), [1, 2, 3])), "prime")]
    for P, vis in cases:
        glued = glue_space(P, vis)
        assert oracle_homeomorphic(glued.space, oracle_glued_space(P, vis))


def test_glue_rejects_unknown_visualization():
    with pytest.raises(ValueError, match="unknown visualization"):
        glue_space(doubled_point_presentation(), "mild")


def test_chart_embeddings_into_glued_space():
    for name, R, els in COVERING_FAMILIES:
        glued = glue_space(atlas(cover_family(R, els)), "prime")
        assert all(c.is_open_embedding() for c in glued.charts), name


def test_affine_gluing_reproduces_base_spectrum():
    for name, R, els in COVERING_FAMILIES:
        S = cover_family(R, els)
        assert covers(S), name
        ok, comparison = affine_glue_check(S)
        assert ok, name
        assert comparison.is_homeomorphism()


def test_affine_gluing_detects_non_covers():
    Z6 = zmod(6)
    S = cover_family(Z6, [2])
    assert not covers(S)
    ok, comparison = affine_glue_check(S)
    assert not ok
    # the comparison lands inside the basic open, missing (2)
    assert not comparison.is_surjective()


def test_doubled_point_chain():
    chain = glued_chain(doubled_point_presentation())
    assert chain.names == ("twisted", "strong", "weak", "k", "prime")
    assert [lvl.space.n for lvl in chain.levels] == [3, 3, 3, 3, 3]
    assert all(m.is_bijective() for m in chain.maps)
    assert chain.kernel_map_surjective


def test_identity_cover_chain_is_affine_chain():
    Z6 = zmod(6)
    P = atlas(cover_family(Z6, [1]))
    chain = glued_chain(P)
    affine = visualization_chain(P.semirings[0])
    for lvl, space in zip(chain.levels, affine.spaces):
        assert oracle_homeomorphic(lvl.space, space)
    for glued_map, affine_map in zip(chain.maps, affine.maps):
        assert glued_map.images == affine_map.images
    assert chain.kernel_map_surjective == affine.kernel_map_surjective


def test_glued_chain_on_split_cover():
    BB = boolean_pair()
    P = atlas(cover_family(
        BB, [BB.elements.index("(1,0)"), BB.elements.index("(0,1)")]))
    chain = glued_chain(P)
    affine = visualization_chain(BB)
    assert [lvl.space.n for lvl in chain.levels] == \
        [s.n for s in affine.spaces]
    assert chain.kernel_map_surjective


def test_glued_point_table_provenance():
    glued = glue_space(atlas(cover_family(zmod(6), [2, 3])), "prime")
    table = glued.point_table()
    assert [row[0] for row in table] == ["U0:{0}", "U1:{0}"]
    assert all(len(row[1]) == 1 for row in table)
