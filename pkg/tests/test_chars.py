from collections import Counter

import pytest
from hypothesis import given, strategies as st

from rsverify.chars import (
    V10_0,
    V10_01,
    V10_1,
    V10_10,
    DominantWeight,
    NotACharacter,
    char_context,
    decompose,
    decompose_series,
    derive_gammas,
    double_lhs,
    gamma_brute,
    irr_char,
    is_weyl_invariant,
    oracle_decomposition,
    oracle_multiplicities,
    oracle_sym_weights,
    oracle_tensor,
    oracle_weights,
    recombine,
    sym_series,
    validate_gammas,
    verify_cor_symalg,
    verify_prop_double_sl2,
    verify_prop_sym_VxW,
    verify_prop_triple,
)
from rsverify.exactalg import SparsePoly, make_context, split_by
from rsverify.unram import mutate_nu

C1 = char_context(nsl2=1)
weights = st.builds(DominantWeight, st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))


def at_ones(p):
    return p.evaluate({n: 1 for n in p.ctx.names})


def M(ctx, **kw):
    return SparsePoly.mono(ctx, **kw)


def test_small_characters():
    assert irr_char((0, 0, 0)) == SparsePoly.one(C1)
    assert irr_char((1, 0, 0)) == M(C1, a=1) + M(C1, b=1) + M(C1, b=-1) + M(C1, a=-1)
    assert at_ones(irr_char((0, 1, 0))) == 5
    assert at_ones(irr_char((2, 0, 0))) == 10


@given(weights)
def test_dimension_oracle(w):
    p = irr_char(w)
    assert at_ones(p) == w.dimension()
    assert is_weyl_invariant(p, 1)


def test_dimension_formula_examples():
    for w in [DominantWeight(1, 0, 0), DominantWeight(0, 1, 0), DominantWeight(1, 1, 0), DominantWeight(2, 1, 2)]:
        assert w.dimension() == at_ones(irr_char(w))
    with pytest.raises(ValueError):
        DominantWeight(-1, 0)


def test_decompose_idempotent():
    for w in [DominantWeight(0, 0, 0), DominantWeight(2, 1, 1), DominantWeight(0, 3, 2)]:
        assert decompose(irr_char(w)) == {w: 1}


def test_standard_squared():
    s = irr_char((1, 0, 0))
    got = decompose(s * s)
    assert got == {DominantWeight(2, 0, 0): 1, DominantWeight(0, 1, 0): 1, DominantWeight(0, 0, 0): 1}
    sq = oracle_tensor(Counter(oracle_weights(V10_0)), Counter(oracle_weights(V10_0)))
    assert oracle_multiplicities(sq, 1) == {w.as_tuple(): 1 for w in got}


def test_sym2_standard():
    ctx = char_context(["x"], nsl2=1)
    s = split_by(sym_series(V10_0, "x", 2, ctx), ["x"])[(2,)]
    dec = decompose(_drop(s, C1))
    assert dec == {DominantWeight(2, 0, 0): 1}
    assert oracle_multiplicities(oracle_sym_weights(oracle_weights(V10_0), 2), 1) == {(2, 0, 0): 1}


def _drop(p, ctx):
    """Move a marker-free polynomial into the bare torus context."""
    names = ctx.names
    src = p.ctx.names
    terms = []
    for exps, c in p.terms():
        d = dict(zip(src, exps))
        terms.append(([d.get(n, 0) for n in names], c))
    return SparsePoly.from_exponents(ctx, terms)


def test_not_a_character():
    with pytest.raises(NotACharacter):
        decompose(M(C1, a=1))
    with pytest.raises(NotACharacter):
        decompose(irr_char((1, 0, 0)) - irr_char((0, 1, 0)))


@given(st.lists(st.tuples(weights, st.integers(1, 3)), max_size=4))
def test_recombine_roundtrip(combo):
    dec = {}
    for w, m in combo:
        dec[w] = dec.get(w, 0) + m
    assert decompose(recombine(dec, C1)) == dec


def test_sym_series_low_coefficients():
    ctx = char_context(["x"], nsl2=1)
    parts = split_by(sym_series(V10_1, "x", 2, ctx), ["x"])
    assert _drop(parts[(0,)], C1) == SparsePoly.one(C1)
    assert _drop(parts[(1,)], C1) == irr_char(V10_1)
    assert at_ones(parts[(1,)]) == 8
    # n = 2: [2,0;2] + [0,0;0] + [0,1;0]
    assert decompose(_drop(parts[(2,)], C1)) == {
        DominantWeight(2, 0, 2): 1, DominantWeight(0, 0, 0): 1, DominantWeight(0, 1, 0): 1}


def test_sym_series_newton_identity():
    # n h_n = sum_{k=1..n} p_k h_{n-k} with p_k the Adams operation psi^k on the character
    ctx = char_context(["x"], nsl2=1)
    parts = split_by(sym_series(V10_1, "x", 4, ctx), ["x"])
    h = [_drop(parts[(n,)], C1) for n in range(5)]
    chi = irr_char(V10_1)

    def adams(p, k):
        return SparsePoly.from_exponents(C1, [([k * e for e in exps], c) for exps, c in p.terms()])

    for n in range(1, 5):
        rhs = SparsePoly.zero(C1)
        for k in range(1, n + 1):
            rhs = rhs + adams(chi, k) * h[n - k]
        assert h[n].scale(n) == rhs


@pytest.mark.parametrize("i,j", [(0, 0), (1, 1), (2, 1), (1, 3), (3, 2)])
def test_decompose_series_against_oracle(i, j):
    ctx = char_context(["x", "y"], nsl2=1)
    s = sym_series(V10_1, "x", i + j, ctx) * sym_series(V10_0, "y", i + j, ctx)
    tgt = make_context(["x", "y", "t1", "t2", "t3"])
    dec = decompose_series(s.truncate(i + j), 1, tgt, {"x": "x", "y": "y"}, ("t1", "t2", "t3"))
    got = {exps[2:]: c for exps, c in dec.terms() if exps[:2] == (i, j)}
    assert got == oracle_decomposition([V10_1, V10_0], [i, j])


def test_prop_sym_vxw():
    rep = verify_prop_sym_VxW(10)
    assert rep.status == "pass", rep.details


def test_cor_symalg():
    rep = verify_cor_symalg(8)
    assert rep.status == "pass", rep.details


def test_gamma_brute_smallest():
    # N1 = N2 = 0 leaves only k = 0
    assert gamma_brute(0, 0).evaluate({"u": 2, "v": 3, "w": 5}) == 1
    assert validate_gammas(rng=range(1)).status == "pass"


def test_gammas_validate():
    assert len(derive_gammas()) == 7
    rep = validate_gammas()
    assert rep.status == "pass" and rep.details["cases"] == 25


def test_gammas_detect_a_broken_term():
    g = derive_gammas()
    g[4] = type(g[4])(g[4].numerator.scale(2), g[4].factors)
    assert validate_gammas(g).status == "fail"


def test_prop_triple():
    rep = verify_prop_triple(6)
    assert rep.status == "pass", rep.details


def test_double_series_matches_oracle_low_degree():
    lhs = double_lhs(3)
    for i, j in [(0, 0), (1, 1), (2, 1)]:
        got = {}
        for exps, c in lhs.terms():
            if exps[:2] == (i, j):
                got[exps[2:]] = c
        assert got == oracle_decomposition([V10_10, V10_01], [i, j])


@pytest.mark.parametrize("mode", ["series", "tau-exact"])
def test_prop_double_sl2(mode):
    rep = verify_prop_double_sl2(mode, 5)
    assert rep.status == "pass", rep.details
    assert rep.residual == "0"


def test_tau_exact_detects_nu_mutation():
    assert verify_prop_double_sl2("tau-exact", nu=mutate_nu(5)).status == "fail"
    assert verify_prop_double_sl2("series", 3, nu=mutate_nu(33)).status == "fail"
