import cmath
import math
import random

import pytest
from hypothesis import given, strategies as st

from rsverify.chars import V10_1, DominantWeight, char_context, decompose, sym_series
from rsverify.exactalg import SparsePoly, split_by
from rsverify.lfactors import (
    EulerFactor,
    SatakeClass,
    TwistData,
    char_eval,
    euler_factor,
    euler_series,
    random_twist,
    shell_tail,
    sl2_char,
    sp4_char,
    sym_power_traces,
    tensor_eigenvalues,
    theorem_sides,
    twist_reduce,
    verify_theorem,
    verify_twist_samples,
)
from rsverify.unram import mutate_nu

phases = st.floats(0, 1, allow_nan=False)


def unitary(*ts):
    return SatakeClass(*(cmath.exp(2j * math.pi * t) for t in ts))


def test_trivial_class_gives_dimensions():
    tau = SatakeClass.trivial()
    for w in [(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (2, 1, 1, 3), (3, 2, 0, 1)]:
        assert abs(char_eval(w, tau) - DominantWeight(*w).dimension()) < 1e-9


def test_standard_character():
    a, b = 0.7 + 0.1j, 1.3 - 0.2j
    assert abs(sp4_char(1, 0, a, b) - (a + b + 1 / a + 1 / b)) < 1e-12
    assert sl2_char(2, 2.0) == 4 + 1 + 0.25


@given(phases, phases, phases, phases)
def test_weyl_invariance(t1, t2, t3, t4):
    tau = unitary(t1, t2, t3, t4)
    a, b, g1, g2 = tau.as_list()
    w = (2, 1, 1, 2)
    v = char_eval(w, tau)
    for other in [SatakeClass(b, a, g1, g2), SatakeClass(1 / a, b, g1, g2), SatakeClass(a, b, 1 / g1, 1 / g2)]:
        assert abs(char_eval(w, other) - v) < 1e-8


def test_euler_factor_simple_values():
    tau = SatakeClass.trivial()
    assert euler_factor(0, tau, 1) == 1
    assert abs(euler_factor(0.5, tau, 2) - 256) < 1e-9
    with pytest.raises(ValueError):
        euler_factor(0.1, tau, 3)


@given(phases, phases, phases, phases, st.floats(-0.3, 0.3))
def test_euler_factor_matches_series(t1, t2, t3, t4, u):
    tau = unitary(t1, t2, t3, t4)
    for which in (1, 2):
        assert abs(euler_factor(u, tau, which) - euler_series(u, tau, which, 80)) < 1e-9


def test_sym_power_trace_via_decomposition():
    # Tr sym^k of the 8-dimensional tensor product from its decomposition into irreducibles
    rng = random.Random(3)
    tau = SatakeClass.random_unitary(rng)
    traces = sym_power_traces(tensor_eigenvalues(tau, 1), 3)
    bare = char_context(nsl2=1)
    parts = split_by(sym_series(V10_1, "x", 3, char_context(["x"], nsl2=1)), ["x"])
    for k in range(4):
        src = parts[(k,)].ctx.names
        terms = [([dict(zip(src, e)).get(n, 0) for n in bare.names], c) for e, c in parts[(k,)].terms()]
        dec = decompose(SparsePoly.from_exponents(bare, terms))
        val = sum(m * char_eval(w, tau) for w, m in dec.items())
        assert abs(val - traces[k]) < 1e-9


def test_zeros_on_unit_circle_for_unitary_class():
    tau = SatakeClass.random_unitary(random.Random(1))
    ef = EulerFactor(tensor_eigenvalues(tau, 1))
    for z in ef.zeros():
        assert abs(abs(z) - 1) < 1e-12
        assert abs(ef.det(z)) < 1e-12


def test_zero_parameters_and_poles():
    with pytest.raises(ZeroDivisionError):
        SatakeClass(0, 1)
    with pytest.raises(ZeroDivisionError):
        EulerFactor([1, 1])(1)


def test_theorem_trivial_class():
    rep = verify_theorem(x=1 / 8, y=1 / 8, N=20, tol=1e-8)
    assert rep.status == "pass", rep.details
    assert float(rep.residual) < 1e-12


def test_theorem_unitary_samples():
    rep = verify_theorem(x=1 / 6, y=1 / 6, N=24, tol=1e-6, samples=10, seed=0)
    assert rep.status == "pass", rep.residual
    assert len(rep.details["samples"]) == 10


def test_theorem_nu_route_agrees():
    tau = SatakeClass.random_unitary(random.Random(5))
    a, _, _ = theorem_sides(tau, 1 / 6, 1 / 6, 16, route="ii")
    b, _, _ = theorem_sides(tau, 1 / 6, 1 / 6, 16, route="nu")
    assert abs(a - b) < 1e-12 * abs(a)
    assert verify_theorem(tau, 1 / 6, 1 / 6, 24, 1e-6, route="nu").status == "pass"


def test_theorem_detects_constant_term_mutation():
    # index 33 is the t-free term of nu
    assert verify_theorem(x=1 / 6, y=1 / 6, N=24, tol=1e-6, nu=mutate_nu(33), samples=3).status == "fail"


def test_theorem_detects_higher_mutation_at_larger_radius():
    assert verify_theorem(x=1 / 4, y=1 / 4, N=24, tol=1e-9, samples=3).status == "pass"
    assert verify_theorem(x=1 / 4, y=1 / 4, N=24, tol=1e-9, nu=mutate_nu(31), samples=3).status == "fail"


def test_tail_shrinks_with_degree():
    tau = SatakeClass.random_unitary(random.Random(2))
    tails = [theorem_sides(tau, 1 / 6, 1 / 6, N)[2] for N in (12, 18, 24)]
    assert tails[0] > tails[1] > tails[2]
    errs = [abs(l - r) / abs(r) for l, r, _ in (theorem_sides(tau, 1 / 6, 1 / 6, N) for N in (8, 12))]
    assert errs[0] > errs[1]


def test_shell_tail_geometric():
    shells = [0.5 ** d for d in range(10)]
    assert abs(shell_tail(shells) - sum(0.5 ** d for d in range(10, 200))) < 1e-12
    assert shell_tail([1.0, 2.0, 4.0, 8.0]) == math.inf


def test_theorem_radius_guard():
    with pytest.raises(ValueError):
        verify_theorem(x=0.3, y=0.1)


def test_twist_zero():
    tau = SatakeClass.random_unitary(random.Random(0))
    assert twist_reduce(TwistData(), tau).status == "pass"


def test_twist_equal_central_parts():
    tau = SatakeClass.random_unitary(random.Random(0))
    tw = TwistData.solve_r3(0.3, 0.3, 0.0, 0.0)
    assert tw.r3 == 0
    assert twist_reduce(tw, tau).status == "pass"


def test_twist_random():
    rng = random.Random(7)
    for _ in range(5):
        assert twist_reduce(random_twist(rng), SatakeClass.random_unitary(rng)).status == "pass"
    assert verify_twist_samples(10, 0).status == "pass"


def test_twist_compatibility_violation():
    with pytest.raises(ValueError):
        twist_reduce(TwistData(r3=1), SatakeClass.trivial())
