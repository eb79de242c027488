# tests/test_omega.py

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from besovlab.errors import ConfigError, PreconditionError
from besovlab.omega import (InnerOmega, OmegaFn, inner_damped, inner_omega_from_spec, log1p, omega_from_spec,
                            power, subadditivity_constant)


def test_power_naming_and_constant():
    assert power(1.0).name == 'id'
    assert power(0.5).name == 'pow(0.5)'
    assert power(0.5)(4.0) == pytest.approx(2.0)
    assert power(2.0).A == 2.0
    assert power(0.5).A == 1.0


def test_doubling_bound():
    assert power(0.5).doubling_bound(0.5, 1) == 2.0
    with pytest.raises(PreconditionError):
        power(0.5).doubling_bound(2.0, 1)


@given(st.sampled_from(['id', 'pow(0.5)', 'pow(2)', 'pow(3)', 'log1p', 'arsinh', 'ttanh']),
       st.integers(min_value=1, max_value=3), st.floats(min_value=0.01, max_value=1.0))
@settings(max_examples=100)
def test_doubling_bound_holds_on_a_log_grid(spec, M, fraction):
    omega = omega_from_spec(spec)
    s = fraction * M
    x = np.logspace(-12, 12, 241)
    assert np.all(omega(2.0 ** s * x) <= omega.doubling_bound(s, M) * omega(x) * (1.0 + 1e-9))


def test_subadditivity_estimates():
    assert subadditivity_constant(power(0.5)) <= 1.0 + 1e-12
    assert subadditivity_constant(power(2.0)) == pytest.approx(2.0)
    assert subadditivity_constant(log1p()) <= 1.0 + 1e-12


def test_subadditivity_grid_checks():
    with pytest.raises(PreconditionError):
        subadditivity_constant(power(0.5), np.logspace(0, 3, 50))
    with pytest.raises(PreconditionError):
        subadditivity_constant(lambda t: np.cos(t) - 1.0 + 1e-3 * t)


@given(st.sampled_from(['id', 'pow(0.5)', 'pow(2)', 'pow(3)', 'log1p', 'arsinh']),
       st.floats(min_value=1e-6, max_value=1e6), st.floats(min_value=1e-6, max_value=1e6))
@settings(max_examples=200)
def test_rough_subadditivity_holds(spec, t1, t2):
    omega = omega_from_spec(spec)
    assert omega(t1 + t2) <= omega.A * (omega(t1) + omega(t2)) * (1.0 + 1e-9)


def test_omega_must_vanish_and_increase():
    with pytest.raises(PreconditionError):
        OmegaFn('shifted', lambda t: np.asarray(t) + 1.0)
    with pytest.raises(PreconditionError):
        OmegaFn('capped', lambda t: np.minimum(np.asarray(t), 1.0))


def test_composition():
    assert omega_from_spec('comp(pow(0.5),pow(2))').name == 'id'
    composite = omega_from_spec('comp(log1p,pow(0.5))')
    assert not composite.A_exact
    assert 0.5 < composite.A <= 1.0 + 1e-9
    assert composite(4.0) == pytest.approx(np.log1p(2.0))


@pytest.mark.parametrize('spec', ['nosuch', 'pow(x)', 'log1p(1)', 'comp(id)', 'pow()'])
def test_bad_omega_specs(spec):
    with pytest.raises(ConfigError):
        omega_from_spec(spec)


def test_inner_omega_sandwich():
    damped = inner_damped(2.0)
    assert (damped.m1, damped.m2) == (0.5, 1.0)
    assert inner_omega_from_spec('pow(p=3)').p == 3.0
    with pytest.raises(PreconditionError):
        InnerOmega('loose', lambda t: np.asarray(t) ** 2, 2.0, 2.0, 3.0)
    with pytest.raises(PreconditionError):
        inner_omega_from_spec('pow(0.5)')
    with pytest.raises(ConfigError):
        inner_omega_from_spec('cube(3)')
