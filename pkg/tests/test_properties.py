"""Cross-engine invariants over a battery of pattern sets."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conpat.algebra import TPoly, urat_to_poly
from conpat.analysis import ClassificationReport, wilf_classify
from conpat.overlap import EquivCertificate, OverlapProfile, overlap_maps, symmetry_images, theorem2_certificate
from conpat.permcore import AlphaSequence, PatternSet, brute_alpha
from conpat.scheme import ClusterScheme, SchemeEvaluator, alpha_via_scheme, build_scheme
from conpat.tailfe import TailFE, TailFEEvaluator, alpha_fast, build_tail_fe, eval_F

from conftest import BATTERY, MIXED, ids

perms = st.integers(2, 5).flatmap(lambda n: st.permutations(list(range(1, n + 1)))).map(tuple)


@pytest.mark.parametrize("B", BATTERY + MIXED, ids=ids(BATTERY + MIXED))
def test_total_at_t_equal_one(B):
    seq = alpha_fast(B, 12, track_t=True)
    assert seq.at_t(1) == [math.factorial(n) for n in range(13)]


@pytest.mark.parametrize("B", BATTERY + MIXED, ids=ids(BATTERY + MIXED))
def test_symmetry_invariance(B):
    ref = alpha_fast(B, 7, track_t=True).entries
    for image in symmetry_images(B).values():
        assert alpha_fast(image, 7, track_t=True).entries == ref
    assert brute_alpha(symmetry_images(B)["rc"], 7).entries == alpha_fast(B, 7).entries


@pytest.mark.parametrize("B", BATTERY + MIXED, ids=ids(BATTERY + MIXED))
def test_every_full_evaluation_is_polynomial(B):
    fe = build_tail_fe(B)
    ev = TailFEEvaluator(fe, track_t=True)
    for p in B:
        for k in range(len(p), 10):
            for exps in ((0,) * len(p), tuple(range(1, len(p) + 1))):
                urat_to_poly(eval_F(fe, k, p, exps, evaluator=ev))


@pytest.mark.parametrize("B", BATTERY, ids=ids(BATTERY))
def test_memo_on_off(B):
    sch = build_scheme(B)
    on, off = SchemeEvaluator(sch, memo=True), SchemeEvaluator(sch, memo=False)
    assert [on.C(k) for k in range(1, 8)] == [off.C(k) for k in range(1, 8)]
    # a fresh tail evaluator per length gives the same values as a shared one
    fe = build_tail_fe(B)
    shared = TailFEEvaluator(fe, True)
    assert [shared.C(k) for k in range(1, 10)] == [TailFEEvaluator(fe, True).C(k) for k in range(1, 10)]


@settings(max_examples=40, deadline=None)
@given(perms, perms)
def test_overlap_profile_symmetry_under_reverse_swap(a, b):
    # a tail of a against a head of b mirrors a tail of r(b) against a head of r(a)
    fwd = overlap_maps(a, b)
    back = overlap_maps(b[::-1], a[::-1])
    assert sorted(len(m) for m in fwd.maps) == sorted(len(m) for m in back.maps)


@settings(max_examples=40, deadline=None)
@given(perms)
def test_certificate_with_self_is_identity(p):
    B = PatternSet([p])
    cert = theorem2_certificate(B, B)
    assert cert.pairing == ((p, p),)
    assert EquivCertificate.from_json(cert.to_json()) == cert


@settings(max_examples=25, deadline=None)
@given(perms)
def test_certified_pairs_count_alike(p):
    B = PatternSet([p])
    for image in symmetry_images(B).values():
        if theorem2_certificate(B, image) is not None:
            assert alpha_fast(B, 9, True).entries == alpha_fast(image, 9, True).entries


@pytest.mark.parametrize("B", BATTERY + MIXED, ids=ids(BATTERY + MIXED))
def test_json_round_trips(B):
    seq = alpha_fast(B, 6, True)
    assert AlphaSequence.from_json(seq.to_json()) == seq
    sch = build_scheme(B)
    assert ClusterScheme.from_json(sch.to_json()).transitions == sch.transitions
    fe = build_tail_fe(B)
    assert TailFE.from_json(fe.to_json()) == fe
    for a in B:
        for b in B:
            prof = overlap_maps(a, b)
            assert OverlapProfile.from_json(prof.to_json()) == prof


def test_report_round_trip_with_conjectural_classes():
    reps = [PatternSet([(1, 5, 4, 2, 6, 3)]), PatternSet([(1, 6, 5, 2, 4, 3)])]
    rep = wilf_classify(6, 1, 14, reps=reps)
    assert ClassificationReport.from_json(rep.to_json()) == rep
    assert TPoly.from_json(TPoly((0, -3, 7)).to_json()) == TPoly((0, -3, 7))


@pytest.mark.parametrize("B", MIXED, ids=ids(MIXED))
def test_scheme_and_fast_agree_beyond_brute(B):
    assert alpha_via_scheme(B, 11).entries == alpha_fast(B, 11).entries
