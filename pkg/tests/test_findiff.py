# tests/test_findiff.py

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from besovlab import config
from besovlab.errors import MarginError, PreconditionError
from besovlab.findiff import (ITERATED_L2_SUPREMUM, HQuadrature, LatticeShift, binomial_weights, check_order,
                              diff_lp_norm, difference_profile, evaluate_shifts, far_field_norm, forward_difference,
                              iterated_difference_constant, lattice_shifts, max_iterated_ratio,
                              order_reduction_constant)
from besovlab.gridfn import GridFunction, array_lp_norm, lp_norm, make_grid_function


def test_binomial_weights():
    np.testing.assert_array_equal(binomial_weights(1), [-1.0, 1.0])
    np.testing.assert_array_equal(binomial_weights(2), [1.0, -2.0, 1.0])
    np.testing.assert_array_equal(binomial_weights(3), [-1.0, 3.0, -3.0, 1.0])


@given(st.integers(min_value=1, max_value=config.MAX_ORDER))
def test_weights_annihilate_constants(M):
    weights = binomial_weights(M)
    assert weights.sum() == 0.0
    assert np.abs(weights).sum() == 2.0 ** M


@given(M=st.integers(min_value=1, max_value=4), k=st.integers(min_value=1, max_value=5))
@settings(deadline=None, max_examples=40)
def test_differences_annihilate_low_degree_polynomials(M, k):
    x = np.linspace(0.0, 1.0, 101)
    f = GridFunction((0.0,), 0.01, (x - 0.3) ** (M - 1))
    out = forward_difference(f, LatticeShift((k,), 0.01), M, mode='interior')
    np.testing.assert_allclose(out.values, 0.0, atol=1e-9)


def test_order_range():
    with pytest.raises(PreconditionError):
        check_order(0)
    with pytest.raises(PreconditionError):
        check_order(config.MAX_ORDER + 1)
    with pytest.raises(PreconditionError):
        check_order(1.5)


def test_zero_shift_rejected():
    with pytest.raises(PreconditionError):
        LatticeShift((0,), 0.1)


def test_shift_arithmetic():
    h = LatticeShift((3, 4), 0.5)
    assert h.length == pytest.approx(2.5)
    assert (h + LatticeShift((1, 0), 0.5)).steps == (4, 4)
    assert (-h).steps == (-3, -4)
    assert LatticeShift.along_axis(0.3, 0.1, dim=2, axis=1).steps == (0, 3)


def test_indicator_difference_norm(indicator_fn):
    for k in (1, 7, 50, 100):
        assert diff_lp_norm(indicator_fn, LatticeShift((k,), 0.01), 1, 1) == pytest.approx(2 * k * 0.01)
    disjoint = diff_lp_norm(indicator_fn, LatticeShift((150,), 0.01), 1, 1)
    assert disjoint == pytest.approx(far_field_norm(indicator_fn, 1, 1))
    assert disjoint == pytest.approx(2.02)


def test_far_field_norm_weights(bump_fn):
    assert far_field_norm(bump_fn, 2, 2) == pytest.approx(math.sqrt(6.0) * lp_norm(bump_fn, 2))
    assert far_field_norm(bump_fn, 3, math.inf) == pytest.approx(3.0 * lp_norm(bump_fn, math.inf))


def test_strict_mode_needs_margin():
    f = make_grid_function('indicator(0,1)', (0.0, 1.0), 0.1)
    h = LatticeShift((1,), 0.1)
    with pytest.raises(MarginError):
        forward_difference(f, h, 1)
    extended = forward_difference(f, h, 1, mode='extend')
    assert extended.shape == (12,)
    assert extended.origin[0] == pytest.approx(-0.1)


def test_strict_mode_keeps_box(indicator_fn):
    out = forward_difference(indicator_fn, LatticeShift((5,), 0.01), 1)
    assert out.shape == indicator_fn.shape
    assert lp_norm(out, 1) == pytest.approx(0.1)


def test_shift_spacing_must_match(indicator_fn):
    with pytest.raises(PreconditionError):
        diff_lp_norm(indicator_fn, LatticeShift((1,), 0.02), 1, 1)


def test_lemma_constants():
    assert iterated_difference_constant(2) == 64.0
    assert order_reduction_constant(0.5, 1) == pytest.approx(0.5 / (1.0 - 2.0 ** -0.5))
    with pytest.raises(PreconditionError):
        order_reduction_constant(1.0, 1)


@given(st.lists(st.tuples(st.integers(1, 60), st.integers(1, 60)), min_size=1, max_size=5),
       st.integers(min_value=1, max_value=2))
@settings(deadline=None, max_examples=25)
def test_iterated_differences_obey_the_frozen_constant(pairs, M):
    f = make_grid_function('bump(0,0.5)', (-1.0, 1.0), 0.01)
    shifts = [(LatticeShift((a,), 0.01), LatticeShift((b,), 0.01)) for a, b in pairs]
    assert max_iterated_ratio(f, shifts, M, 2) <= iterated_difference_constant(M)


finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False)
steps = st.integers(min_value=-40, max_value=40).filter(bool)


@given(st.lists(finite, min_size=2, max_size=40), st.integers(-30, 30), st.integers(-30, 30))
@settings(deadline=None, max_examples=60)
def test_difference_along_a_sum_of_shifts(samples, a, b):
    assume(a != 0 and b != 0 and a + b != 0)
    values = np.zeros(len(samples) + 200)
    values[100:100 + len(samples)] = samples
    f = GridFunction((0.0,), 0.01, values)
    h, z = LatticeShift((a,), 0.01), LatticeShift((b,), 0.01)
    # Delta_{h+z} f = Delta_h f(. + z) + Delta_z f
    lhs = forward_difference(f, h + z, 1).values
    rhs = np.roll(forward_difference(f, h, 1).values, -b) + forward_difference(f, z, 1).values
    np.testing.assert_allclose(lhs, rhs, atol=1e-9)


@given(st.lists(finite, min_size=2, max_size=40), st.integers(min_value=1, max_value=4), steps,
       st.sampled_from([1.0, 2.0, 3.0, math.inf]))
@settings(deadline=None, max_examples=60)
def test_differences_obey_the_coarse_bound(samples, M, k, p):
    f = GridFunction((0.0,), 0.1, samples)
    assert diff_lp_norm(f, LatticeShift((k,), 0.1), M, p) <= 2.0 ** M * lp_norm(f, p) * (1.0 + 1e-9) + 1e-12


@given(st.lists(st.floats(min_value=-1.0, max_value=1.0), min_size=2, max_size=16),
       st.sampled_from([0.25, 0.5, 0.75]), st.integers(min_value=1, max_value=2), st.sampled_from([1.0, 2.0, math.inf]))
@settings(deadline=None, max_examples=40)
def test_order_reduction_inequality(samples, s, M, p):
    f = GridFunction((0.0,), 0.1, samples)
    # beyond len(samples) cells the translates are disjoint and the quotients only fall
    shifts = [LatticeShift((k,), 0.1) for k in range(1, len(samples) + 2)]
    low = max(diff_lp_norm(f, h, M, p) / h.length ** s for h in shifts)
    high = max(diff_lp_norm(f, h, 2 * M, p) / h.length ** s for h in shifts)
    assert low <= order_reduction_constant(s, M) * high * (1.0 + 1e-9) + 1e-12


@given(st.lists(finite, min_size=2, max_size=40), steps, steps)
@settings(deadline=None, max_examples=60)
def test_first_order_l2_ratio_stays_below_its_supremum(samples, a, b):
    assume(a + b != 0)
    f = GridFunction((0.0,), 0.1, samples)
    pair = (LatticeShift((a,), 0.1), LatticeShift((b,), 0.1))
    assert max_iterated_ratio(f, [pair], 1, 2) <= ITERATED_L2_SUPREMUM * (1.0 + 1e-9)


def test_alternating_mode_approaches_the_l2_supremum():
    envelope = make_grid_function('bump(0,1)', (-2.0, 2.0), 0.005)
    f = envelope.with_values(envelope.values * (-1.0) ** np.arange(envelope.shape[0]))
    pair = (LatticeShift((2,), 0.005), LatticeShift((1,), 0.005))
    assert 1.9 < max_iterated_ratio(f, [pair], 1, 2) <= ITERATED_L2_SUPREMUM


def test_lattice_shift_enumeration():
    np.testing.assert_array_equal(lattice_shifts(1, 5)[:, 0], [1, 2, 3, 4, 5])
    steps = lattice_shifts(2, 2)
    assert len(steps) == 10
    as_set = {tuple(s) for s in steps}
    assert all((-a, -b) not in as_set for a, b in as_set)


def test_profile_of_indicator(indicator_fn):
    prof = difference_profile(indicator_fn, 1, 1)
    assert prof.reach == 101
    assert prof.far_exact
    np.testing.assert_allclose(prof.norms, 2.0 * prof.lengths, rtol=1e-12)
    assert prof.core_exponent == 1.0
    assert prof.far_field == pytest.approx(2.02)
    assert difference_profile(indicator_fn, 1, 1) is prof


def test_profile_core_exponent_for_jumps_in_l2(indicator_fn):
    prof = difference_profile(indicator_fn, 1, 2)
    assert prof.core_exponent == pytest.approx(0.5)


def test_capped_reach_is_flagged(indicator_fn):
    prof = difference_profile(indicator_fn, 1, 1, HQuadrature(max_reach_cells=20))
    assert prof.reach == 20
    assert not prof.far_exact


def test_two_dimensional_profile_samples_every_shell():
    f = make_grid_function('tent(0,1)', (-1.5, 1.5), 0.05, dim=2)
    prof = difference_profile(f, 1, 2, HQuadrature(samples_per_shell=16))
    shells = prof.shell_index(prof.lengths)
    counts = np.bincount(shells - shells.min())
    assert counts.min() >= 1
    assert prof.far_exact


def test_threaded_evaluation_matches_serial(indicator_fn):
    steps = lattice_shifts(1, 30)
    reducer = lambda out, r: array_lp_norm(out, 2, indicator_fn.cell_volume) / r  # noqa: E731
    serial = evaluate_shifts(indicator_fn, steps, 2, reducer)
    config.set_threads(4)
    threaded = evaluate_shifts(indicator_fn, steps, 2, reducer)
    np.testing.assert_array_equal(serial, threaded)


def test_quadrature_policy_validation():
    with pytest.raises(PreconditionError):
        HQuadrature(inner_cutoff_cells=0)
    with pytest.raises(PreconditionError):
        HQuadrature(shell_ratio=1.0)
