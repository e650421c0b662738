import pytest
from hypothesis import given
from hypothesis import strategies as st

from conpat.algebra import TPoly
from conpat.errors import CapExceeded, DuplicateEntries, InvalidPermutation, RedundantPatternSet
from conpat.permcore import (
    AlphaSequence,
    Cluster,
    PatternSet,
    brute_alpha,
    brute_C,
    complement,
    enumerate_clusters,
    occurrences,
    parse_perm,
    reduce_seq,
    reverse,
)

W = TPoly((-1, 1))


@pytest.mark.parametrize(
    "seq, expected",
    [((5, 3, 8, 6), (2, 1, 4, 3)), ((1, 2, 3), (1, 2, 3)), ((9, 1), (2, 1))],
)
def test_reduce_examples(seq, expected):
    assert reduce_seq(seq) == expected


def test_reduce_rejects_duplicates():
    with pytest.raises(DuplicateEntries):
        reduce_seq((3, 1, 3))


@given(st.lists(st.integers(-1000, 1000), unique=True, max_size=12))
def test_reduce_is_idempotent_and_order_preserving(xs):
    r = reduce_seq(xs)
    assert reduce_seq(r) == r
    assert sorted(r) == list(range(1, len(xs) + 1))
    for i in range(len(xs)):
        for j in range(len(xs)):
            assert (xs[i] < xs[j]) == (r[i] < r[j])


def test_occurrence_examples():
    assert occurrences((1, 2, 3, 6, 5, 4), (1, 2, 4, 3)) == [2]
    assert occurrences((1, 2, 4, 5, 3), (1, 2, 4, 3)) == []
    assert occurrences((1, 2, 3, 4), (1, 2)) == [1, 2, 3]


def test_parse_perm_forms():
    assert parse_perm("2 1 4 3") == parse_perm("2,1,4,3") == parse_perm("2143") == (2, 1, 4, 3)
    with pytest.raises(InvalidPermutation):
        parse_perm("1,3")


def test_pattern_set_validation():
    assert PatternSet([(3, 2, 1), (1, 2, 3)]).patterns == ((1, 2, 3), (3, 2, 1))
    with pytest.raises(RedundantPatternSet):
        PatternSet([(1, 2), (1, 2, 3)])
    with pytest.raises(ValueError):
        PatternSet([])
    assert PatternSet.parse("[[1,2,3],[3,2,1]]") == PatternSet.parse("{123;321}")
    assert PatternSet.parse("2,1,4,3") == PatternSet([(2, 1, 4, 3)])


def test_symmetries():
    assert reverse((1, 3, 2)) == (2, 3, 1)
    assert complement((1, 3, 2)) == (3, 1, 2)


def test_alpha_examples(pair_123_321):
    seq = brute_alpha(pair_123_321, 6, track_t=True)
    assert seq[6] == TPoly((122, 300, 236, 60, 2))
    assert brute_alpha(PatternSet([(1, 2)]), 3)[3] == 1
    # 1, 2, 5, 16: eight of the 24 length-4 permutations contain 132
    assert brute_alpha(PatternSet([(1, 3, 2)]), 4)[4] == 16


def test_alpha_cap():
    with pytest.raises(CapExceeded):
        brute_alpha(PatternSet([(1, 2, 3)]), 11)
    assert brute_alpha(PatternSet([(1, 2, 3)]), 3, cap=3)[3] == 5


def test_cap_env_override(monkeypatch):
    monkeypatch.setenv("CONPAT_BRUTE_CAP", "4")
    with pytest.raises(CapExceeded):
        brute_alpha(PatternSet([(1, 2, 3)]), 5)


def test_cluster_examples():
    B = PatternSet([(1, 2, 3)])
    assert enumerate_clusters(B, 3) == [Cluster((1, 2, 3), ((1, 3),))]
    five = enumerate_clusters(B, 5)
    assert {c.intervals for c in five} == {((1, 3), (3, 5)), ((1, 3), (2, 4), (3, 5))}
    assert all(c.perm == (1, 2, 3, 4, 5) for c in five)
    assert enumerate_clusters(PatternSet([(2, 1, 4, 3)]), 4) == [Cluster((2, 1, 4, 3), ((1, 4),))]


def test_brute_C_examples():
    assert brute_C(PatternSet([(1, 2, 3)]), 5) == W ** 2 + W ** 3
    assert brute_C(PatternSet([(2, 1, 4, 3)]), 4) == W
    assert brute_C(PatternSet([(1, 2, 3)]), 2) == TPoly()
    assert brute_C(PatternSet([(1, 3, 2)]), 4) == TPoly()


def test_clusters_are_covered_chains():
    B = PatternSet([(1, 3, 2), (2, 1, 3)])
    for cl in enumerate_clusters(B, 7):
        iv = cl.intervals
        assert iv[0][0] == 1 and iv[-1][1] == 7
        for (i1, j1), (i2, _) in zip(iv, iv[1:]):
            assert i1 < i2 <= j1
        for i, j in iv:
            assert reduce_seq(cl.perm[i - 1 : j]) in B


def test_alpha_sequence_json_round_trip(pair_123_321):
    for track in (False, True):
        seq = brute_alpha(pair_123_321, 6, track_t=track)
        assert AlphaSequence.from_json(seq.to_json()) == seq
