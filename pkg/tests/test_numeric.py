import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracmix.decide import DomainError, problem_J, problem_T
from fracmix.numeric import (AxisSpec, GridFunction, GridSpec, IncompatibleGrid, PreconditionViolated, ShapeMismatch,
                             box_indicator, dilation_family, eval_J, eval_T, logpower_counterexample, lq_norm,
                             minkowski_swap_check, mixed_norm, ratio_probe, tail_scaling_check,
                             translation_limit_probe, uniform_axes)
from fracmix.numeric.probes import default_epsilon
from fracmix.ratlinalg import BlockMatrix

ALIGNED = uniform_axes(2, 8, 2.0)  # cell width 1/2


# ---- mixed norms ---------------------------------------------------------------

def test_mixed_norm_examples():
    assert mixed_norm(box_indicator(ALIGNED, [0, 0], [1, 2]), (1, 1), ["2", "1"]) == 2.0
    assert mixed_norm(box_indicator(ALIGNED, [0, 0], [1, 1]), (1, 1), ["2", "3"]) == 1.0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([(1, 1, 1), (2, 1), (1, 2), (3,)]))
def test_equal_exponents_collapse_to_plain_norm(seed, groups):
    rng = np.random.default_rng(seed)
    f = GridFunction(uniform_axes(3, 5, 1.0), rng.random((5, 5, 5)))
    got = mixed_norm(f, groups, ["2"] * len(groups))
    assert got == pytest.approx(lq_norm(f, 2), rel=1e-13)


def test_infinite_exponent_is_max():
    f = GridFunction(uniform_axes(2, 4, 1.0), np.arange(16.0).reshape(4, 4))
    assert mixed_norm(f, (1, 1), ["inf", "inf"]) == 15.0


def test_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        mixed_norm(box_indicator(ALIGNED, [0, 0], [1, 1]), (1,), ["2"])


def test_refinement_consistency():
    def gauss(N):
        return GridFunction.sample(uniform_axes(2, N, 4.0), lambda x, y: np.exp(-x * x - 2 * y * y))
    a = mixed_norm(gauss(64), (1, 1), ["3", "3/2"])
    b = mixed_norm(gauss(128), (1, 1), ["3", "3/2"])
    assert abs(a - b) / b < 0.01


# ---- Minkowski swap and tail ---------------------------------------------------------

def test_minkowski_equal_exponents_exact():
    rng = np.random.default_rng(0)
    f = GridFunction(uniform_axes(2, 6, 1.0), rng.random((6, 6)))
    out = minkowski_swap_check(f, (1, 1), ["2", "2"], 1)
    assert out.lhs == pytest.approx(out.rhs, rel=1e-14) and out.holds


def test_minkowski_separable_exact():
    x = np.linspace(0.1, 1, 7)
    f = GridFunction(uniform_axes(2, 7, 1.0), np.outer(x, x ** 2 + 1))
    out = minkowski_swap_check(f, (1, 1), ["3", "2"], 1)
    assert out.lhs == pytest.approx(out.rhs, rel=1e-13)


def test_minkowski_precondition():
    f = box_indicator(ALIGNED, [0, 0], [1, 1])
    with pytest.raises(PreconditionViolated):
        minkowski_swap_check(f, (1, 1), ["2", "3"], 1)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([("3", "2"), ("inf", "2"), ("4", "4/3"), ("2", "1")]))
def test_minkowski_holds(seed, p):
    rng = np.random.default_rng(seed)
    f = GridFunction(uniform_axes(2, 6, 1.0), rng.random((6, 6)) ** 3)
    assert minkowski_swap_check(f, (1, 1), p, 1).holds


def test_tail_closed_form_and_baseline():
    rows = tail_scaling_check([1], ["2"], 1, [2, 4])
    assert rows[0].R == 1
    for r in rows:
        assert r.norm == pytest.approx(math.sqrt(2 / r.R), rel=1e-10)


def test_tail_divergent():
    with pytest.raises(DomainError):
        tail_scaling_check([1], ["2"], "1/2", [1])
    with pytest.raises(DomainError):
        tail_scaling_check([1], ["2"], "1/4", [1])


def test_tail_infinite_exponents():
    # sup of |x|^{-1} over |x| >= R is 1/R
    assert tail_scaling_check([1], ["inf"], 1, [2])[1].norm == pytest.approx(0.5, rel=1e-14)
    # inner L^2, outer sup at x_2 = 0: (2 R^{1 - 2 alpha} / (2 alpha - 1))^{1/2}
    for r in tail_scaling_check([1, 1], ["2", "inf"], 1, [1, 4]):
        assert r.norm == pytest.approx(math.sqrt(2 / float(r.R)), rel=1e-9)


def test_tail_two_dimensional_group():
    # |x|^{-2} on |x| >= R in R^2 with p = 2: ||.||_2^2 = 2 pi / (2 R^2)
    rows = tail_scaling_check([2], ["2"], 2, [1, 3])
    for r in rows:
        assert r.norm == pytest.approx(math.sqrt(math.pi) / float(r.R), rel=1e-9)


# ---- operators ------------------------------------------------------------------------

J1 = BlockMatrix.from_rows(1, 1, "J", [[1]])


def test_eval_J_singular_integral():
    f = box_indicator(uniform_axes(1, 2048, 1.0), [-1], [1])
    g = eval_J(J1, "1/2", f, [AxisSpec(1, 1.0)])
    assert g.values[0] == pytest.approx(4.0, rel=0.01)
    assert g.meta["dropped"] == 0


def test_eval_J_zero():
    g = eval_J(J1, "1/2", GridFunction.zeros(uniform_axes(1, 16, 1.0)), uniform_axes(1, 8, 1.0))
    assert not g.values.any()


def test_eval_J_symmetry_identity_stack():
    D = BlockMatrix.from_rows(2, 1, "J", [[1], [1]])
    f = GridFunction.sample(uniform_axes(2, 32, 2.0), lambda x, y: np.exp(-x * x - y * y))
    g = eval_J(D, "1", f, uniform_axes(1, 16, 2.0))
    assert np.max(np.abs(g.values - g.values[::-1])) <= 1e-12 * np.max(g.values)


def test_eval_J_homogeneity_under_doubling():
    # J f_a = a^{(mn - lambda) + n sum 1/p...}; the ratio is a-independent under the scaling relation
    prob = problem_J([[1], [1]], 2, 1, [2, 2], 4, "5/4")
    rep = ratio_probe(prob, "dilation", ["1", "2"], GridSpec(N=128))
    r = rep.ratios
    assert abs(r[0] / r[1] - 1) < 0.02


def test_eval_T_separable():
    A = BlockMatrix.from_rows(1, 1, "T", [[1, 0], [0, 1]])
    axes = uniform_axes(2, 512, 2.0)
    f = GridFunction.sample(axes, lambda y1, y2: ((np.abs(y1) <= 1) * (np.abs(y2) <= 1 / 2)).astype(float))
    out_axes = uniform_axes(1, 16, 2.0)
    g = eval_T(A, "1/2", f, out_axes, int_axes=[AxisSpec(4096, 2.0)])
    h = (np.abs(out_axes[0].midpoints()) <= 1 / 2).astype(float)
    inner = 4.0  # integral of chi_[-1,1](t) |t|^{-1/2}
    assert np.allclose(g.values, h * inner, rtol=0.01, atol=1e-12)


def test_eval_T_rotation_closed_form():
    A = BlockMatrix.from_rows(1, 1, "T", [[1, -1], [1, 1]])
    f = box_indicator(uniform_axes(2, 1024, 2.0), [-1, -1], [1, 1])
    g = eval_T(A, "1/2", f, [AxisSpec(1, 1.0)], int_axes=[AxisSpec(8192, 2.0)])
    assert g.values[0] == pytest.approx(2 / (1 - 0.5), rel=0.01)


def test_eval_T_zero():
    A = BlockMatrix.from_rows(1, 1, "T", [[1, -1], [1, 1]])
    g = eval_T(A, "1/2", GridFunction.zeros(uniform_axes(2, 16, 1.0)), uniform_axes(1, 4, 1.0))
    assert not g.values.any()


def test_eval_halton_branch_runs_and_is_seeded():
    D = BlockMatrix.from_rows(4, 1, "J", [[1], [1], [1], [1]])
    f = box_indicator(uniform_axes(4, 8, 1.0), [-1] * 4, [1] * 4)
    a = eval_J(D, "2", f, uniform_axes(1, 4, 1.0), samples=4096, seed=3)
    b = eval_J(D, "2", f, uniform_axes(1, 4, 1.0), samples=4096, seed=3)
    assert a.meta["method"] == "halton" and np.array_equal(a.values, b.values)
    assert np.all(a.values > 0)


# ---- families -------------------------------------------------------------------------

def test_dilation_identity():
    f = box_indicator(ALIGNED, [0, 0], [1, 1])
    g = dilation_family(f, ["2", "2"], 1, 1)
    assert np.array_equal(g.values, f.values) and g.axes == f.axes


def test_dilation_box_preserves_norm():
    f = box_indicator(ALIGNED, [-1, -1], [1, 1])
    g = dilation_family(f, ["2", "2"], 1, 2)
    assert np.max(g.values) == 2.0
    assert mixed_norm(g, (1, 1), ["2", "2"]) == mixed_norm(f, (1, 1), ["2", "2"])
    back = dilation_family(g, ["2", "2"], 1, "1/2")
    assert np.array_equal(back.values, f.values) and back.axes == f.axes


def test_dilation_on_target_grid():
    f = box_indicator(uniform_axes(2, 16, 2.0), [-1, -1], [1, 1])  # h = 1/4
    target = uniform_axes(2, 8, 2.0)  # h = 1/2; a = 1/2 maps target midpoints onto f's midpoints
    g = dilation_family(f, ["2", "2"], 1, "1/2", target=target)
    # f(x/2) is the indicator of [-2, 2]^2, prefactor 1/2
    assert np.all(g.values == 0.5)
    with pytest.raises(IncompatibleGrid):
        dilation_family(f, ["2", "2"], 1, "1/3", target=target)


def test_translation_examples():
    f = box_indicator(ALIGNED, [0, 0], [1, 1])
    (_, r2), = translation_limit_probe(f, (1, 1), ["2", "3"], 2, [3])
    (_, r1), = translation_limit_probe(f, (1, 1), ["2", "3"], 1, [3])
    (_, r0), = translation_limit_probe(f, (1, 1), ["2", "3"], 1, [0])
    assert abs(r2 - 2 ** (1 / 3)) < 1e-12
    assert abs(r1 - 2 ** 0.5) < 1e-12
    assert r0 == pytest.approx(2.0, rel=1e-15)


def test_translation_needs_grid_multiple():
    f = box_indicator(ALIGNED, [0, 0], [1, 1])
    with pytest.raises(IncompatibleGrid):
        translation_limit_probe(f, (1, 1), ["2", "3"], 1, ["1/3"])


def test_logpower_values():
    h = logpower_counterexample(1, 2, "1/2")
    assert float(h(0.25)) == pytest.approx(2 * math.log(4) ** -0.75, rel=1e-14)
    assert float(h(0.5)) == 0.0 and float(h(0.7)) == 0.0 and float(h(0.0)) == 0.0


def test_logpower_domain():
    with pytest.raises(DomainError):
        logpower_counterexample(1, 1, "1/2")
    with pytest.raises(DomainError):
        logpower_counterexample(1, 2, 0)


def test_logpower_qprime_norm_oracle():
    h = logpower_counterexample(1, 2, "1/2")
    # independent 1-d oracle: 2 * int_0^{1/2} h(r)^2 dr; with r = exp(-u) the integrand is 2 u^{-3/2}
    val = float(mpmath.quad(lambda u: 2 * u ** -1.5, [mpmath.log(2), 1, 10, 100, mpmath.inf]))
    assert val == pytest.approx(h.qprime_power_integral(), rel=1e-6)
    sums = []
    for N in (2 ** 10, 2 ** 14, 2 ** 18):
        x = -1 + (np.arange(N) + 0.5) * (2 / N)
        sums.append(float(np.sum(h(np.abs(x)) ** 2) * 2 / N))
    errs = [abs(s - val) for s in sums]
    assert errs[0] > errs[1] > errs[2]


def test_default_epsilon_rule():
    # q = 2, p_k0 = 4: q' = 2, p' = 4/3, eps = (3/2 - 1)/2 = 1/4
    assert default_epsilon(2, 4) == Fraction(1, 4)
    with pytest.raises(DomainError):
        default_epsilon(2, 2)


def test_probe_zero_function_skipped():
    prob = problem_J([[1], [1]], 2, 1, [2, 2], 4, "5/4")
    rep = ratio_probe(prob, "boxE", ["1/1000", "1/2"], GridSpec(N=64))
    assert rep.rows[0].skipped and rep.rows[0].ratio is None
    assert not rep.rows[1].skipped and rep.rows[1].ratio > 0


def test_probe_T_dilation_flat():
    prob = problem_T([[1, -1], [1, 1]], 1, 1, ["4", "4/3"], 2, "1/2")
    r = ratio_probe(prob, "dilation", ["1/2", "1", "2"], GridSpec(N=128)).ratios
    assert max(r) / min(r) < 1.05


def test_probe_rejects_incompatible_family():
    prob = problem_T([[1, -1], [1, 1]], 1, 1, ["4", "4/3"], 2, "1/2")
    with pytest.raises(ValueError):
        ratio_probe(prob, "logpower")
