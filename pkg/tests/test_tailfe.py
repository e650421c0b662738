import itertools

import pytest

from conpat.algebra import TPoly, UPoly, URat, urat_to_poly
from conpat.errors import DegenerateBase
from conpat.permcore import PatternSet, brute_alpha, brute_C
from conpat.scheme import C_of_k, SchemeEvaluator, build_scheme
from conpat.tailfe import (
    Affine,
    C_of_k_fast,
    TailFE,
    TailFEEvaluator,
    alpha_fast,
    build_tail_fe,
    eval_F,
    eval_F_rhs,
    geom_sum,
    summation_plan,
)

from conftest import MIXED

W = TPoly((-1, 1))


def P(*ps):
    return PatternSet(ps)


def test_fe_132_matches_worked_example():
    fe = build_tail_fe(P((1, 3, 2)))
    terms = fe.terms[(1, 3, 2)]
    # (sign at t = 0, numerator consts, numerator k-coefficients, denominators, argument)
    expected = [
        (-1, (0, 1, 2), (0, 0, 0), {(0, 0, 1), (0, 1, 1)}, (1, 1, 1)),
        (+1, (0, 0, 1), (0, 1, 1), {(0, 0, 1), (0, 1, 1)}, (1, 0, 0)),
        (+1, (0, 1, 1), (0, 0, 1), {(0, 0, 1), (0, 1, 0)}, (1, 1, 0)),
        (-1, (0, 0, 1), (0, 1, 1), {(0, 0, 1), (0, 1, 0)}, (1, 0, 0)),
    ]
    assert len(terms) == 4
    for term, (sign, consts, kcoefs, dens, mid) in zip(terms, expected):
        assert -term.sign == sign
        assert tuple(c for c, _ in term.numerator) == consts
        assert tuple(k for _, k in term.numerator) == kcoefs
        assert set(term.denominators) == dens
        assert term.k_shift == 2 and term.target == (1, 3, 2)
        assert term.args == ((0, 0, 0), mid, (0, 0, 0))


def test_fe_132_render():
    text = build_tail_fe(P((1, 3, 2))).render(avoid=True)
    assert "- z2*z3^2/((1-z3)*(1-z2*z3)) * F(k-2;[1, z1*z2*z3, 1])" in text
    assert "+ z2*z3^(k+1)/((1-z3)*(1-z2)) * F(k-2;[1, z1*z2, 1])" in text


def test_fe_2143_term_count():
    fe = build_tail_fe(P((2, 1, 4, 3)))
    chopped = [len(pl.chopped) for pl in fe.plans[(2, 1, 4, 3)]]
    assert len(fe.terms[(2, 1, 4, 3)]) == sum(2 ** c for c in chopped) == 12


def test_fe_json_round_trip():
    for B in [P((1, 3, 2)), P((2, 1, 4, 3)), *MIXED]:
        fe = build_tail_fe(B)
        assert TailFE.from_json(fe.to_json()) == fe


def test_geom_sum_pieces():
    lo, hi = Affine(2, 0, 1), Affine(None, 1, 0)
    assert geom_sum((0, 0, 1), lo, hi) == [(1, lo), (-1, Affine(None, 1, 1))]
    assert geom_sum((1,), Affine(None, 0, 1), Affine(None, 0, 1)) == [
        (1, Affine(None, 0, 1)),
        (-1, Affine(None, 0, 2)),
    ]
    with pytest.raises(DegenerateBase):
        geom_sum((0, 0), lo, hi)


def test_geom_sum_closed_form_value():
    # (z - z^2) / (1 - z) = z
    assert URat(UPoly((0, 1, -1)), UPoly((1, -1))) == URat(UPoly((0, 1)))


@pytest.mark.parametrize("B", [P((1, 3, 2)), P((2, 1, 4, 3)), P((1, 2, 3), (3, 2, 1)), *MIXED], ids=str)
def test_plans_respect_summation_order(B):
    for tr in build_scheme(B).all_transitions():
        summation_plan(tr).check_bound_order()


@pytest.mark.parametrize("B", [P((1, 3, 2)), P((2, 1, 4, 3)), *MIXED], ids=str)
def test_arguments_are_k_free(B):
    # arguments are plain monomials in z; only numerators may carry k
    for terms in build_tail_fe(B).terms.values():
        for term in terms:
            assert all(isinstance(e, int) for arg in term.args for e in arg)
            assert len(term.args) == len(term.target)


def test_eval_F_examples():
    B = P((1, 3, 2))
    fe = build_tail_fe(B)
    assert eval_F(fe, 3, (1, 3, 2), (1, 1, 1)) == URat(UPoly.monomial(W, 6))
    c5 = urat_to_poly(eval_F(fe, 5, (1, 3, 2), (0, 0, 0))).eval_u1()
    assert c5(0) == brute_C(B, 5)(0)
    fe = build_tail_fe(P((2, 1, 4, 3)))
    c7 = urat_to_poly(eval_F(fe, 7, (2, 1, 4, 3), (0, 0, 0, 0))).eval_u1()
    assert c7 == C_of_k(build_scheme(P((2, 1, 4, 3))), 7)


def test_C_of_k_fast_examples():
    assert C_of_k_fast(build_tail_fe(P((1, 2, 3))), 5) == W ** 2 + W ** 3
    assert C_of_k_fast(build_tail_fe(P((1, 3, 2))), 4) == TPoly()
    assert C_of_k_fast(build_tail_fe(P((2, 1, 4, 3))), 4) == W
    fe = build_tail_fe(P((1, 2)))
    for k in range(2, 9):
        assert C_of_k_fast(fe, k) == W ** (k - 1)


def test_alpha_fast_examples(pair_123_321):
    assert alpha_fast(pair_123_321, 10).values() == [1, 2, 4, 10, 32, 122, 544, 2770, 15872, 101042]
    assert alpha_fast(pair_123_321, 6, True)[6] == TPoly((122, 300, 236, 60, 2))
    assert alpha_fast(P((2, 1, 4, 3)), 1).values() == [1]


def test_fe_tail_values_match_scheme():
    # explicit tail polynomial of F agrees with the recurrence slot by slot
    for B in [P((2, 1, 4, 3)), P((1, 2, 3), (2, 4, 1, 3))]:
        ev = TailFEEvaluator(build_tail_fe(B), track_t=True)
        sev = SchemeEvaluator(build_scheme(B))
        for p in B:
            for k in range(len(p), 9):
                F = ev.F(k, p)
                for tail in itertools.combinations(range(1, k + 1), len(p)):
                    assert F.get(tail, TPoly()) == sev.C_tail(k, p, tail)


@pytest.mark.parametrize("B", [P((1, 3, 2)), P((2, 1, 4, 3)), P((1, 2, 3), (3, 2, 1)), *MIXED], ids=str)
def test_rhs_sums_to_a_polynomial(B):
    # term-by-term rational evaluation of the right-hand side is exact and polynomial
    fe = build_tail_fe(B)
    ev = TailFEEvaluator(fe, track_t=True)
    for p in B:
        exps = tuple(range(1, len(p) + 1))
        for k in range(len(p) + 1, 8):
            rhs = eval_F_rhs(fe, k, p, exps, evaluator=ev)
            assert urat_to_poly(rhs) == urat_to_poly(eval_F(fe, k, p, exps, evaluator=ev))


def test_evaluator_grows_past_kmax():
    B = P((1, 3, 2))
    ev = TailFEEvaluator(build_tail_fe(B), track_t=False, kmax=4)
    assert [ev.C(k) for k in range(1, 12)] == [TailFEEvaluator(build_tail_fe(B), False, 12).C(k) for k in range(1, 12)]


def test_fast_matches_brute_mixed():
    for B in MIXED:
        assert alpha_fast(B, 8, True).entries == brute_alpha(B, 8, True).entries


def test_u_degree_bound():
    for B in [P((1, 3, 2)), P((2, 1, 4, 3)), *MIXED]:
        fe = build_tail_fe(B)
        ev = TailFEEvaluator(fe, track_t=True)
        for p in B:
            exps = tuple(range(1, len(p) + 1))
            for k in range(len(p), 9):
                val = urat_to_poly(eval_F(fe, k, p, exps, evaluator=ev))
                assert val.degree <= k * sum(exps)


def test_builder_never_meets_a_degenerate_base():
    # every eliminated index carries its own z variable, so no geometric base is 1
    for B in [P((1, 2, 3, 4)), P((1, 2), (3, 2, 1)), *MIXED]:
        for terms in build_tail_fe(B).terms.values():
            assert all(any(D) for term in terms for D in term.denominators)
