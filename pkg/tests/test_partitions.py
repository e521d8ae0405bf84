import itertools
from math import comb

import pytest
from hypothesis import given, strategies as st

from conftest import PI1, PI2, PI3, PI4, brute_set_partitions, partitions
from easywishart.partitions import (
    MAX_POINTS,
    Partition,
    adjoint,
    common_coarsening,
    crossing_count,
    delta,
    enumerate_partitions,
    half_pairing,
    horizontal_pairing,
    is_coarser,
    is_noncrossing,
    kernel,
    kreweras,
    middle_symmetry,
    nc_to_permutation,
    noncrossing_partitions,
    orbit_partition,
    parse_partition,
    signature,
    signature_by_switch_search,
    tensor,
    vertical_compose,
)
from easywishart.permutations import Permutation, all_permutations

P = parse_partition


def catalan(p):
    return comb(2 * p, p) // (p + 1)


def as_blocks(pi):
    return frozenset(frozenset(b) for b in pi.blocks())


# ------------------------------------------------------------------ parsing

def test_parse_crossing_pairing():
    pi = P(PI2)
    assert (pi.upper, pi.lower) == (2, 2)
    assert as_blocks(pi) == {frozenset({0, 3}), frozenset({1, 2})}


def test_parse_one_block_and_identity():
    assert P(PI4).n_blocks == 1
    assert as_blocks(P(PI1)) == {frozenset({0, 2}), frozenset({1, 3})}


def test_parse_lower_only_row():
    pi = P("/abc")
    assert (pi.upper, pi.lower, pi.n_blocks) == (0, 3, 3)


def test_parse_relabels_canonically():
    assert str(P("ba/ab")) == "ab/ba"


@pytest.mark.parametrize("bad", ["ab", "a/b/c", "/", "aB/ab", "a1/ab", ""])
def test_parse_rejects_malformed(bad):
    with pytest.raises(ValueError):
        P(bad)


def test_partition_rejects_noncanonical_labels():
    with pytest.raises(ValueError):
        Partition(1, 1, (1, 0))


def test_print_round_trip_up_to_eight_points():
    for k, l in [(0, 4), (2, 2), (3, 3), (4, 4), (1, 5)]:
        for pi in enumerate_partitions(k, l):
            assert P(str(pi)) == pi


# -------------------------------------------------------------- enumeration

def test_enumeration_counts():
    assert len(enumerate_partitions(2, 2, even_only=True)) == 4
    assert len(enumerate_partitions(2, 2)) == 15
    assert len(enumerate_partitions(0, 3)) == 5


def test_even_two_by_two_are_the_four_basic_shapes():
    assert {str(pi) for pi in enumerate_partitions(2, 2, even_only=True)} == set(
        map(lambda s: str(P(s)), (PI1, PI2, PI3, PI4))
    )


@pytest.mark.parametrize("n", range(1, 6))
def test_enumeration_matches_brute_force(n):
    ours = {as_blocks(pi) for pi in enumerate_partitions(0, n)}
    assert len(ours) == len(enumerate_partitions(0, n))
    assert ours == brute_set_partitions(n)


def test_enumeration_guard():
    with pytest.raises(ValueError):
        enumerate_partitions(MAX_POINTS, 1)


# ------------------------------------------------------------- noncrossing

def test_noncrossing_examples():
    assert not is_noncrossing(P(PI2))
    assert is_noncrossing(P(PI1))
    assert is_noncrossing(P(PI4))


def test_noncrossing_counts():
    assert len(noncrossing_partitions(3)) == 5
    assert len(noncrossing_partitions(4)) == 14
    empty = noncrossing_partitions(0)
    assert len(empty) == 1 and empty[0].size == 0


def test_only_one_crossing_partition_of_four_points():
    crossing = [pi for pi in enumerate_partitions(0, 4) if not is_noncrossing(pi)]
    assert [as_blocks(pi) for pi in crossing] == [
        {frozenset({0, 2}), frozenset({1, 3})}
    ]


def _crosses_by_definition(pi):
    order = pi.boundary_order()
    lab = [pi.labels[x] for x in order]
    for a, b, c, d in itertools.combinations(range(len(lab)), 4):
        if lab[a] == lab[c] and lab[b] == lab[d] and lab[a] != lab[b]:
            return True
    return False


@given(partitions(max_upper=4, max_lower=4))
def test_noncrossing_matches_quadruple_definition(pi):
    assert is_noncrossing(pi) == (not _crosses_by_definition(pi))


@pytest.mark.parametrize("p", range(7))
def test_catalan_and_kreweras_counts(p):
    ncs = noncrossing_partitions(p)
    assert len(ncs) == catalan(p)
    for sigma in ncs:
        if p:
            assert sigma.n_blocks + kreweras(sigma).n_blocks == p + 1


# ---------------------------------------------------------- kernel / delta

def test_kernel_examples():
    assert kernel((5, 5), (5, 5)) == P(PI4)
    assert kernel((1, 2), (2, 1)) == P(PI2)
    assert kernel((1, 2), (3, 4)).n_blocks == 4


def test_delta_examples():
    assert delta(P(PI4), (3, 3), (3, 3)) == 1
    assert delta(P(PI4), (1, 2), (1, 2)) == 0
    assert delta(P(PI2), (1, 2), (2, 1)) == 1


def test_delta_shape_mismatch():
    with pytest.raises(ValueError):
        delta(P(PI1), (1,), (1, 2))


@pytest.mark.parametrize("shape", [(2, 2), (4, 4)])
def test_delta_is_kernel_coarser(shape):
    k, l = shape
    for pi in enumerate_partitions(k, l, even_only=True):
        for vals in itertools.product((1, 2), repeat=k + l):
            up, low = vals[:k], vals[k:]
            assert delta(pi, up, low) == int(is_coarser(kernel(up, low), pi))


# ---------------------------------------------------------- order / joins

def test_is_coarser_examples():
    assert is_coarser(P(PI4), P(PI2))
    assert not is_coarser(P(PI1), P(PI2))
    assert is_coarser(P(PI2), P(PI2))


def test_common_coarsening_examples():
    one = Partition.from_labels(0, 2, (0, 0))
    disc = Partition.from_labels(0, 2, (0, 1))
    assert common_coarsening(one, disc) == one
    a = Partition.from_blocks(0, 4, [(0, 2), (1, 3)])
    b = Partition.from_blocks(0, 4, [(0, 1), (2, 3)])
    assert common_coarsening(a, b).n_blocks == 1


@given(partitions(), st.data())
def test_common_coarsening_is_least_upper_bound(sigma, data):
    labels = data.draw(st.lists(st.integers(0, sigma.size), min_size=sigma.size, max_size=sigma.size))
    tau = Partition.from_labels(sigma.upper, sigma.lower, labels)
    join = common_coarsening(sigma, tau)
    assert is_coarser(join, sigma) and is_coarser(join, tau)
    assert common_coarsening(sigma, sigma) == sigma
    for other in enumerate_partitions(sigma.upper, sigma.lower) if sigma.size <= 5 else []:
        if is_coarser(other, sigma) and is_coarser(other, tau):
            assert is_coarser(other, join)


# ------------------------------------------------------------- symmetries

def test_middle_symmetry_examples():
    assert middle_symmetry(P(PI1)) == P(PI1)
    assert middle_symmetry(P(PI3)) == P(PI3)


def test_middle_symmetry_is_involution():
    for pi in enumerate_partitions(4, 4, even_only=True):
        assert middle_symmetry(middle_symmetry(pi)) == pi


def test_middle_symmetry_rejects_odd_rows():
    with pytest.raises(ValueError):
        middle_symmetry(P("abc/abc"))


def test_adjoint_examples():
    assert adjoint(P(PI2)) == P(PI2)
    flipped = adjoint(P(PI3))
    assert flipped.upper_labels == (0, 0) and flipped.lower_labels == (1, 1)
    assert as_blocks(flipped) == {frozenset({0, 1}), frozenset({2, 3})}


@given(partitions())
def test_adjoint_is_involution(pi):
    assert adjoint(adjoint(pi)) == pi


# ------------------------------------------------------------ composition

def test_vertical_compose_half_pairing_through_identity():
    mu = P("/aa")
    out, loops = vertical_compose(mu, P(PI1))
    assert out == mu and loops == 0


def test_vertical_compose_identity():
    out, loops = vertical_compose(P(PI1), P(PI1))
    assert out == P(PI1) and loops == 0


def test_vertical_compose_closed_middle_loop():
    out, loops = vertical_compose(P(PI3), P(PI3))
    assert out == P(PI3) and loops == 1


def test_vertical_compose_length_mismatch():
    with pytest.raises(ValueError):
        vertical_compose(P("ab/abc"), P(PI1))


def test_tensor_concatenates():
    assert str(tensor(P(PI1), P(PI3))) == "abcc/abdd"


# -------------------------------------------------------------- signature

def test_signature_examples():
    assert signature(P(PI2)) == -1
    assert signature(P(PI4)) == 1
    assert signature(P(PI1)) == 1


def test_signature_rejects_odd_blocks():
    with pytest.raises(ValueError):
        signature(P("ab/aa"))


def _pairings(n):
    if n == 0:
        yield []
        return
    first = 0
    rest = list(range(1, n))
    for partner in rest:
        remaining = [x for x in rest if x != partner]
        for sub in _pairings(len(remaining)):
            yield [(first, partner)] + [(remaining[a], remaining[b]) for a, b in sub]


def _pairing_partition(k, l, pairs):
    return Partition.from_blocks(k, l, pairs)


def test_signature_of_pairings_is_crossing_parity():
    for n in (2, 4, 6, 8):
        for k in range(n + 1):
            for pairs in _pairings(n):
                pi = _pairing_partition(k, n - k, pairs)
                c = crossing_count(pi.boundary_word())
                assert signature(pi) == (-1) ** c


def test_signature_of_permutation_pairings_is_permutation_sign():
    for k in range(1, 4):
        for perm in all_permutations(k):
            # upper x joined to lower perm(x)
            pi = Partition.from_blocks(k, k, [(x, k + perm(x)) for x in range(k)])
            assert signature(pi) == perm.sign()


def test_merged_noncrossing_has_sign_plus_one():
    for n in range(2, 9, 2):
        for k in range(n + 1):
            for pi in enumerate_partitions(k, n - k, even_only=True):
                if not is_noncrossing(pi):
                    continue
                # every coarsening obtained by merging whole blocks
                for merge in enumerate_partitions(0, pi.n_blocks):
                    merged = Partition.from_labels(
                        k, n - k, [merge.labels[lab] for lab in pi.labels]
                    )
                    assert signature(merged) == 1


def test_signature_matches_switch_search_on_even_partitions():
    for n in range(2, 9, 2):
        for k in range(n + 1):
            for pi in enumerate_partitions(k, n - k, even_only=True):
                assert signature(pi) == signature_by_switch_search(pi), str(pi)


@given(partitions(even=True))
def test_signature_is_plus_minus_one(pi):
    assert signature(pi) in (-1, 1)


# ---------------------------------------------------------- permutations

def test_nc_to_permutation_examples():
    assert nc_to_permutation(P("/aaa")) == Permutation((1, 2, 0))
    assert nc_to_permutation(P("/abc")) == Permutation.identity(3)
    t = nc_to_permutation(P("/aab"))
    assert t == Permutation((1, 0, 2)) and t.cycle_count == 2


def test_nc_to_permutation_rejects_crossing():
    with pytest.raises(ValueError):
        nc_to_permutation(P("/abab"))


def test_permutation_group_operations():
    assert Permutation.standard_cycle(4).cycle_count == 1
    assert Permutation.identity(5).cycle_count == 5
    g = Permutation.standard_cycle(3)
    assert (Permutation.identity(3) * g.inverse()).cycle_count == 1
    with pytest.raises(ValueError):
        Permutation.identity(2) * g
    with pytest.raises(ValueError):
        Permutation((0, 0))


@given(st.permutations(range(5)), st.permutations(range(5)))
def test_permutation_composition_is_right_to_left(a, b):
    s, t = Permutation(tuple(a)), Permutation(tuple(b))
    assert all((s * t)(x) == s(t(x)) for x in range(5))
    assert (s * s.inverse()) == Permutation.identity(5)
    assert (s * t).sign() == s.sign() * t.sign()


def test_kreweras_examples():
    assert kreweras(P("/ab")).n_blocks == 1
    assert kreweras(P("/aaaa")).n_blocks == 4
    assert as_blocks(kreweras(P("/aab"))) == {frozenset({0}), frozenset({1, 2})}


def _kreweras_by_interleaving(sigma):
    # points 2x (original) and 2x+1 (primed, after x); primed blocks are the
    # coarsest partition that stays noncrossing together with sigma
    p = sigma.size
    best = None
    for tau in enumerate_partitions(0, p):
        labels = []
        for x in range(p):
            labels += [("s", sigma.labels[x]), ("t", tau.labels[x])]
        joint = Partition.from_labels(0, 2 * p, labels)
        if is_noncrossing(joint) and (best is None or tau.n_blocks < best.n_blocks):
            best = tau
    return best


@pytest.mark.parametrize("p", range(1, 6))
def test_kreweras_matches_interleaving_construction(p):
    for sigma in noncrossing_partitions(p):
        assert kreweras(sigma) == _kreweras_by_interleaving(sigma)


@pytest.mark.parametrize("p", range(1, 6))
def test_biane_equality_on_noncrossing(p):
    gamma = Permutation.standard_cycle(p)
    for sigma in noncrossing_partitions(p):
        perm = nc_to_permutation(sigma)
        assert perm.cycle_count + (perm * gamma.inverse()).cycle_count == p + 1


@pytest.mark.parametrize("p", range(1, 5))
def test_biane_bound_characterizes_noncrossing(p):
    gamma = Permutation.standard_cycle(p)
    images = {nc_to_permutation(s) for s in noncrossing_partitions(p)}
    for perm in all_permutations(p):
        total = perm.cycle_count + (perm * gamma.inverse()).cycle_count
        assert total <= p + 1
        assert (total == p + 1) == (perm in images)


@pytest.mark.parametrize("p", range(1, 7))
def test_counting_identities(p):
    gamma = Permutation.standard_cycle(p)
    for sigma in noncrossing_partitions(p):
        s = nc_to_permutation(sigma)
        even_blocks = sum(1 for size in sigma.block_sizes() if size % 2 == 0)
        assert (s * gamma).cycle_count - 1 == (s * s).cycle_count - s.cycle_count
        assert (s * s).cycle_count - s.cycle_count == even_blocks
        assert (gamma.inverse() * s).cycle_count - 1 == p - s.cycle_count


def test_orbit_partition_of_cycle():
    assert orbit_partition(Permutation.standard_cycle(4)).n_blocks == 1


def test_pairings_helpers():
    assert str(horizontal_pairing(2)) == "abab/cdcd"
    assert str(half_pairing(2)) == "/abab"
