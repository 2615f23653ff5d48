"""Ideals, primality flavors, the spectra, and the comparison chain."""

import json

import pytest

from finsite.catalog import (
    boolean,
    catalog,
    chain,
    trivial,
    truncated_naturals,
    zmod,
)
from finsite.semiring import (
    Congruence,
    SemiringError,
    diagonal_congruence,
    enumerate_congruences,
    enumerate_homs,
    localize,
    total_congruence,
)
from finsite.spectra import (
    FLAVORS,
    congruence_pullback,
    congruence_spectrum,
    congruence_spectrum_pullback,
    enumerate_ideals,
    ideal_closure,
    is_ideal,
    is_k_ideal,
    is_prime_ideal,
    k_spectrum,
    kernel_ideal,
    localization_spectrum_map,
    primality,
    prime_congruences,
    prime_spectrum,
    spectrum_pullback,
    spectrum_report,
    visualization_chain,
)
from finsite.topology import subspace

from oracles import (oracle_ideals, oracle_is_k_ideal,
                     oracle_is_prime_ideal)

# (name, ideal count, k-ideal count, chain sizes (t, s, w, k, prime), opens)
FROZEN_TABLE = [
    ("B", 2, 2, (1, 1, 1, 1, 1), 2),
    ("BxB", 4, 4, (2, 2, 2, 2, 2), 4),
    ("Z2", 2, 2, (1, 1, 1, 1, 1), 2),
    ("Z3", 2, 2, (1, 1, 1, 1, 1), 2),
    ("Z6", 4, 4, (2, 2, 2, 2, 2), 4),
    ("N2", 3, 2, (1, 1, 2, 1, 2), 3),
    ("N3", 4, 2, (1, 1, 3, 1, 2), 3),
    ("chain4", 4, 4, (3, 3, 7, 3, 3), 4),
]


def test_ideal_enumeration_matches_subset_oracle():
    for name, R in catalog():
        assert enumerate_ideals(R) == oracle_ideals(R), name


def test_ideal_predicates_match_oracles():
    for name, R in catalog():
        for I in enumerate_ideals(R):
            assert is_ideal(R, I)
            assert is_k_ideal(R, I) == oracle_is_k_ideal(R, I), (name, I)
            assert is_prime_ideal(R, I) == oracle_is_prime_ideal(R, I)


def test_ideal_closure_is_smallest_ideal():
    Z6 = zmod(6)
    assert ideal_closure(Z6, [2]) == {0, 2, 4}
    assert ideal_closure(Z6, [1]) == frozenset(range(6))
    assert ideal_closure(Z6, []) == {0}
    N2 = truncated_naturals(2)
    assert ideal_closure(N2, [2]) == {0, 2}  # the top absorbs


def test_frozen_counts_across_catalog():
    table = {name: R for name, R in catalog()}
    for name, n_ideals, n_k, sizes, n_opens in FROZEN_TABLE:
        R = table[name]
        ideals = enumerate_ideals(R)
        assert len(ideals) == n_ideals, name
        assert sum(1 for I in ideals if is_k_ideal(R, I)) == n_k, name
        ch = visualization_chain(R)
        assert tuple(s.n for s in ch.spaces) == sizes, name
        assert len(prime_spectrum(R).space.opens) == n_opens, name
        assert ch.kernel_map_surjective, name
        assert ch.unreached_k_points == ()


def test_boolean_spectrum_is_a_point():
    spec = prime_spectrum(boolean())
    assert spec.space.points == ("{0}",)
    assert spec.primes == (frozenset({0}),)


def test_zmod6_spectrum_is_two_discrete_points():
    spec = prime_spectrum(zmod(6))
    assert spec.space.points == ("{0,3}", "{0,2,4}")
    assert len(spec.space.opens) == 4  # discrete
    assert spec.basic_open(2) == {0}   # 2 lies outside (3) only
    assert spec.basic_open(3) == {1}


def test_truncated_naturals_has_a_non_k_prime():
    N2 = truncated_naturals(2)
    spec = prime_spectrum(N2)
    assert frozenset({0, 2}) in spec.primes  # {0, T}
    assert not is_k_ideal(N2, {0, 2})
    k_space, incl = k_spectrum(N2)
    assert k_space.points == ("{0}",)
    assert incl.is_injective()


def test_trivial_semiring_has_empty_spectra():
    T = trivial()
    assert enumerate_ideals(T) == [frozenset({0})]
    spec = prime_spectrum(T)
    assert spec.space.n == 0
    ch = visualization_chain(T)
    assert all(s.n == 0 for s in ch.spaces)
    for flavor in FLAVORS:
        assert prime_congruences(T, flavor) == []


def test_basic_open_laws():
    for name, R in catalog():
        spec = prime_spectrum(R)
        full = frozenset(range(len(spec.primes)))
        assert spec.basic_open(R.one) == full
        assert spec.basic_open(R.zero) == frozenset()
        for g in range(R.n):
            for h in range(R.n):
                assert (spec.basic_open(g) & spec.basic_open(h)
                        == spec.basic_open(R.mul[g][h])), (name, g, h)


def test_specialization_order_is_prime_containment():
    for name, R in catalog():
        spec = prime_spectrum(R)
        leq = spec.space.specialization_leq()
        k = len(spec.primes)
        for i in range(k):
            for j in range(k):
                assert leq[i][j] == (spec.primes[i] <= spec.primes[j]), name


def test_spectrum_dot_output():
    dot = prime_spectrum(chain(4)).space.specialization_dot()
    assert '"{c0,c1}" -> "{c0}";' in dot
    assert '"{c0,c1,c2}" -> "{c0,c1}";' in dot
    assert '"{c0,c1,c2}" -> "{c0}";' not in dot
    discrete = prime_spectrum(zmod(6)).space.specialization_dot()
    assert "->" not in discrete


def test_k_spectrum_of_a_ring_is_everything():
    Z6 = zmod(6)
    spec = prime_spectrum(Z6)
    k_space, incl = k_spectrum(Z6, spec)
    assert k_space.n == spec.space.n
    assert incl.is_bijective()


def test_flavor_containment_on_all_congruences():
    for name, R in catalog():
        for c in enumerate_congruences(R):
            t, s, w = (primality(c, f) for f in ("twisted", "strong",
                                                 "weak"))
            assert (not t or s) and (not s or w), (name, c.blocks)


def test_primality_witness_cases():
    Z6 = zmod(6)
    assert not primality(diagonal_congruence(Z6), "weak")  # 2*3 = 0
    B = boolean()
    assert primality(diagonal_congruence(B), "twisted")
    for name, R in catalog():
        for flavor in FLAVORS:
            assert not primality(total_congruence(R), flavor), name
    with pytest.raises(ValueError):
        primality(diagonal_congruence(B), "mild")


def test_kernel_ideal_obeys_the_lemma():
    for name, R in catalog():
        for c in prime_congruences(R, "weak"):
            I = kernel_ideal(c)
            assert oracle_is_prime_ideal(R, I), name
            assert oracle_is_k_ideal(R, I), name


def test_kernel_ideal_rejects_non_weak_prime():
    Z6 = zmod(6)
    with pytest.raises(SemiringError):
        kernel_ideal(diagonal_congruence(Z6))
    with pytest.raises(SemiringError):
        kernel_ideal(total_congruence(boolean()))


def test_congruence_spectrum_maps_down_continuously():
    for name, R in catalog():
        spec = prime_spectrum(R)
        for flavor in FLAVORS:
            space, down = congruence_spectrum(R, flavor, spec)
            assert down.is_continuous()
            assert down.target == spec.space


def test_zmod6_weak_congruences_match_the_primes():
    Z6 = zmod(6)
    space, down = congruence_spectrum(Z6, "weak")
    assert space.points == ("{0,2,4}{1,3,5}", "{0,3}{1,4}{2,5}")
    spec = prime_spectrum(Z6)
    # the congruence mod 2 has kernel (2), the one mod 3 kernel (3)
    assert spec.primes[down(0)] == frozenset({0, 2, 4})
    assert spec.primes[down(1)] == frozenset({0, 3})
    assert down.is_bijective()


def test_strong_and_twisted_spaces_carry_subspace_topology():
    for name, R in catalog():
        weak_points = prime_congruences(R, "weak")
        weak_space, _ = congruence_spectrum(R, "weak")
        for flavor in ("strong", "twisted"):
            own_space, _ = congruence_spectrum(R, flavor)
            keep = [i for i, c in enumerate(weak_points)
                    if primality(c, flavor)]
            traced, _ = subspace(weak_space, keep)
            assert traced.opens == own_space.opens, (name, flavor)


def test_visualization_chain_maps_compose():
    for name, R in catalog():
        ch = visualization_chain(R)
        t_s, s_w, w_k, k_p = ch.maps
        assert t_s.is_injective() and s_w.is_injective()
        assert k_p.is_injective()
        full = k_p.compose(w_k).compose(s_w).compose(t_s)
        assert full.is_continuous()
        # a twisted point's kernel is reached the same way both ways
        for i in range(ch.spaces[0].n):
            assert full(i) == k_p(w_k(s_w(t_s(i))))


def test_spectrum_pullback_is_contravariantly_functorial():
    Z6 = zmod(6)
    homs = enumerate_homs(Z6, Z6)
    spec = prime_spectrum(Z6)
    for f in homs:
        m = spectrum_pullback(f, spec, spec)
        for i, q in enumerate(spec.primes):
            pre = frozenset(a for a in range(Z6.n) if f(a) in q)
            assert oracle_is_prime_ideal(Z6, pre)
            assert spec.primes[m(i)] == pre
        for g in homs:
            gf = g.compose(f)
            left = spectrum_pullback(f, spec, spec).compose(
                spectrum_pullback(g, spec, spec))
            right = spectrum_pullback(gf, spec, spec)
            assert left.images == right.images


def test_congruence_pullback_preserves_flavors():
    N2 = truncated_naturals(2)
    B = boolean()
    for f in enumerate_homs(N2, B):
        for flavor in FLAVORS:
            for c in prime_congruences(B, flavor):
                back = congruence_pullback(f, c)
                assert primality(back, flavor)
    m = congruence_spectrum_pullback(
        enumerate_homs(N2, B)[0], "weak")
    assert m.is_continuous()


def test_localization_spectrum_is_an_open_embedding():
    for name, R in catalog():
        spec = prime_spectrum(R)
        for h in range(R.n):
            loc = localize(R, h)
            m, image = localization_spectrum_map(loc, spec)
            assert image == spec.basic_open(h), (name, h)
            assert m.is_open_embedding()


def test_spectrum_report_is_deterministic():
    a = json.dumps(spectrum_report(zmod(6)), sort_keys=False)
    b = json.dumps(spectrum_report(zmod(6)), sort_keys=False)
    assert a == b
    rep = spectrum_report(truncated_naturals(2))
    assert rep["prime_count"] == 2
    assert rep["k_prime_count"] == 1
    assert rep["kernel_map_surjective"] is True
    assert list(rep)[:4] == ["elements", "ideal_count", "k_ideal_count",
                             "prime_count"]
