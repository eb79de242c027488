# tests/test_gridfn.py

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from besovlab.errors import ConfigError, MarginError, PreconditionError
from besovlab.gridfn import (GridFunction, LpExponent, auto_box, generator_from_spec, lp_distance, lp_norm,
                             make_grid_function)


def test_rectangle_rule_norms():
    f = make_grid_function('indicator(0,1)', (-1.0, 2.0), 0.25)
    assert f.shape == (13,)
    assert lp_norm(f, 1) == pytest.approx(1.25)
    assert lp_norm(f, 2) == pytest.approx(math.sqrt(1.25))
    assert lp_norm(f, math.inf) == 1.0


def test_two_dimensional_product():
    f = make_grid_function('indicator(0,1)', (-1.0, 2.0), 0.25, dim=2)
    assert f.shape == (13, 13)
    assert lp_norm(f, 1) == pytest.approx(25 * 0.0625)


samples = st.lists(st.floats(min_value=-1e3, max_value=1e3, allow_nan=False), min_size=2, max_size=50)


@given(samples, st.floats(min_value=-100.0, max_value=100.0), st.sampled_from([1.0, 1.5, 2.0, 3.0, math.inf]))
@settings(max_examples=100)
def test_lp_norm_is_homogeneous(values, c, p):
    f = GridFunction((0.0,), 0.1, values)
    assert lp_norm(f.scaled(c), p) == pytest.approx(abs(c) * lp_norm(f, p), rel=1e-9, abs=1e-12)


@given(samples, st.sampled_from([(1.0, 2.0), (1.0, math.inf), (2.0, 3.0), (1.5, 4.0), (2.0, math.inf)]))
@settings(max_examples=100)
def test_lp_norms_on_a_bounded_support_follow_hoelder(values, exponents):
    p, r = exponents
    f = GridFunction((0.0,), 0.05, values)
    measure = len(values) * 0.05
    assert lp_norm(f, p) <= measure ** (1.0 / p - 1.0 / r) * lp_norm(f, r) * (1.0 + 1e-9) + 1e-12


def test_lp_exponent_parsing():
    assert LpExponent.parse('inf').is_infinite
    assert LpExponent.parse(' 2 ').value == 2.0
    with pytest.raises(ConfigError):
        LpExponent.parse('two')
    with pytest.raises(PreconditionError):
        LpExponent(0.5)


def test_values_are_read_only(indicator_fn):
    with pytest.raises(ValueError):
        indicator_fn.values[0] = 1.0


def test_text_export_reads_back(indicator_fn):
    again = GridFunction.from_text(indicator_fn.to_text())
    assert again.origin == indicator_fn.origin
    assert again.spacing == indicator_fn.spacing
    np.testing.assert_array_equal(again.values, indicator_fn.values)


def test_from_text_rejects_missing_header():
    with pytest.raises(ConfigError):
        GridFunction.from_text('dim=1\n0.0\n')


def test_restrict_to_coarser_lattice():
    f = make_grid_function('tent(0,1)', (-1.0, 1.0), 0.25)
    coarse = f.restrict_to_lattice(0.5)
    assert coarse.origin == (-1.0,)
    np.testing.assert_array_equal(coarse.values, f.values[::2])
    with pytest.raises(PreconditionError):
        f.restrict_to_lattice(0.3)


def test_support_diameter_in_cells():
    f = make_grid_function('indicator(0,1)', (-1.0, 2.0), 0.25)
    assert f.support_diameter_cells() == 4


def test_margin_violation():
    with pytest.raises(MarginError):
        make_grid_function('indicator(0,1)', (0.5, 2.0), 0.5)
    with pytest.raises(MarginError):
        make_grid_function('indicator(0,1)', (0.0, 1.0), 0.5, margin=0.5)


def test_spacing_must_divide_box():
    with pytest.raises(PreconditionError):
        make_grid_function('tent(0,1)', (-2.0, 2.0), 0.3)


def test_auto_box_is_lattice_aligned():
    gen = generator_from_spec('bump(0,1)')
    (lo, hi), = auto_box(gen, 0.1, margin=1.0)
    assert lo == pytest.approx(-2.2)
    assert hi == pytest.approx(2.2)
    make_grid_function(gen, (lo, hi), 0.1, margin=1.0)


def test_distance_on_shifted_boxes():
    f = make_grid_function('indicator(0,1)', (-1.0, 2.0), 0.5)
    g = make_grid_function('indicator(0,1)', (-2.0, 3.0), 0.5)
    h = make_grid_function('indicator(0,1,2)', (-1.0, 2.0), 0.5)
    assert lp_distance(f, g, 2) == 0.0
    assert lp_distance(f, h, 1) == pytest.approx(lp_norm(f, 1))
    assert lp_distance(f, h, 1, region=(0.4, 2.0)) == pytest.approx(1.0)


def test_distance_needs_compatible_lattices():
    f = make_grid_function('indicator(0,1)', (-1.0, 2.0), 0.5)
    g = make_grid_function('indicator(0,1)', (-1.0, 2.0), 0.25)
    with pytest.raises(PreconditionError):
        lp_distance(f, g, 2)


@pytest.mark.parametrize('spec', ['nosuch(1)', 'indicator(uniform(),1)', 'tent(1,2,3,4)'])
def test_bad_function_specs(spec):
    with pytest.raises(ConfigError):
        generator_from_spec(spec)


def test_invalid_generator_arguments():
    with pytest.raises(PreconditionError):
        generator_from_spec('indicator(1,0)')
