# tests/test_functionals.py

import math

import pytest

from besovlab.errors import NumericalError, PreconditionError
from besovlab.functionals import (SemiNormSpec, besov_seminorm, d_omega, d_omega_inner, jensen_check,
                                  lipschitz_constant, nikolskii_seminorm, quark_sequence_norm, shell_report,
                                  smoothing_functional)
from besovlab.gridfn import make_grid_function
from besovlab.kernels import kernel_family_from_spec
from besovlab.omega import identity, inner_power, power


@pytest.fixture
def fine_indicator():
    return make_grid_function('indicator(0,1)', (-1.0, 2.0), 1e-3)


def test_spec_ranges():
    with pytest.raises(PreconditionError):
        SemiNormSpec(1.5, 2, 2, 1)
    with pytest.raises(PreconditionError):
        SemiNormSpec(0.0, 2, 2, 1)
    with pytest.raises(PreconditionError):
        SemiNormSpec(0.5, 0.5, 2, 1)
    assert SemiNormSpec(0.5, 'inf', '2').p.is_infinite


def test_nikolskii_of_indicator_in_l1(indicator_fn):
    result = nikolskii_seminorm(indicator_fn, SemiNormSpec(0.5, 1, 'inf'))
    assert result.value == pytest.approx(2.0 * math.sqrt(1.01), rel=1e-9)
    assert result.argmax_length == pytest.approx(1.01)


def test_nikolskii_ties_go_to_the_smallest_shift(indicator_fn):
    result = nikolskii_seminorm(indicator_fn, SemiNormSpec(0.5, 2, 'inf'))
    assert result.value == pytest.approx(math.sqrt(2.0), rel=1e-12)
    assert result.argmax_length == pytest.approx(0.01)
    assert result.argmax_shell == 6
    assert result.limsup == pytest.approx(math.sqrt(2.0), rel=1e-12)


def test_nikolskii_rejects_unbounded_quotients(indicator_fn):
    with pytest.raises(NumericalError):
        nikolskii_seminorm(indicator_fn, SemiNormSpec(0.9, 2, 'inf'))


def test_besov_of_indicator(fine_indicator):
    result = besov_seminorm(fine_indicator, SemiNormSpec(0.5, 1, 2))
    assert result.value == pytest.approx(4.0, rel=2e-3)
    assert result.tail > 0.0
    assert result.core > 0.0
    assert result.tolerance < 0.02


def test_besov_domain():
    f = make_grid_function('tent(0,1)', (-2.0, 2.0), 0.01)
    with pytest.raises(PreconditionError):
        besov_seminorm(f, SemiNormSpec(0.5, 2, 'inf'))
    with pytest.raises(PreconditionError):
        besov_seminorm(f, SemiNormSpec(1.0, 2, 2))


def test_shell_report_columns(indicator_fn):
    besov = shell_report(indicator_fn, SemiNormSpec(0.5, 1, 2))
    assert list(besov.columns) == ['j', 'r_lo', 'r_hi', 'samples', 'max_quotient', 'mean_quotient',
                                   'contribution']
    assert besov['j'].is_monotonic_decreasing
    assert besov['samples'].sum() == 101
    nikolskii = shell_report(indicator_fn, SemiNormSpec(0.5, 1, 'inf'))
    assert 'contribution' not in nikolskii.columns


def test_d_omega_choice2_with_lipschitz_scaling(indicator_fn):
    result = d_omega(indicator_fn, kernel_family_from_spec('choice2()'), 0.1, identity(),
                     SemiNormSpec(1.0, 1, 'inf'))
    assert result.value == pytest.approx(2.0, rel=1e-9)
    assert result.epsilon == 0.1


def test_d_omega_choice2_closed_form(fine_indicator):
    eps = 0.01
    result = d_omega(fine_indicator, kernel_family_from_spec('choice2()'), eps, identity(),
                     SemiNormSpec(0.5, 1, 'inf'))
    expected = 4.0 / math.log(2.0) * math.sqrt(eps) * (math.sqrt(2.0) - 1.0)
    assert result.value == pytest.approx(expected, rel=5e-3)


def test_d_omega_never_exceeds_omega_of_the_seminorm(bump_fn):
    spec = SemiNormSpec(0.5, 2, 'inf')
    omega = power(0.5)
    bound = omega(nikolskii_seminorm(bump_fn, spec).value)
    for family in ('uniform(r=1)', 'gaussian(sigma=1)', 'choice2()'):
        for eps in (0.05, 0.2, 0.8):
            assert d_omega(bump_fn, kernel_family_from_spec(family), eps, omega, spec).value <= bound * 1.02


def test_kernel_scale_must_span_lattice_cells(indicator_fn):
    with pytest.raises(PreconditionError):
        d_omega(indicator_fn, kernel_family_from_spec('choice2()'), 0.02, identity(), SemiNormSpec(0.5, 1, 'inf'))


def test_inner_functional_with_power_matches_outer(indicator_fn):
    family = kernel_family_from_spec('choice2()')
    inner = d_omega_inner(indicator_fn, family, 0.1, identity(), inner_power(1.0), 1.0, 1)
    outer = d_omega(indicator_fn, family, 0.1, identity(), SemiNormSpec(1.0, 1, 'inf'))
    assert inner.value == pytest.approx(outer.value, rel=1e-9)


def test_smoothing_of_a_step_pair(fine_indicator):
    # the uniform average over radius eps/2 moves each jump by an L^1 mass of eps/4
    result = smoothing_functional(fine_indicator, kernel_family_from_spec('uniform(r=0.5)'), 0.1, 1.0, 1)
    assert result.value == pytest.approx(0.5, rel=3e-2)


def test_jensen_inequality_holds(fine_indicator):
    check = jensen_check(fine_indicator, kernel_family_from_spec('uniform(r=1)'), 0.1, 0.5, 1)
    assert check.holds
    with pytest.raises(PreconditionError):
        jensen_check(fine_indicator, kernel_family_from_spec('onesided(r=1)'), 0.1, 0.5, 1)


def test_lipschitz_constant_of_tent():
    f = make_grid_function('tent(0,1)', (-2.0, 2.0), 0.01)
    assert lipschitz_constant(f) == pytest.approx(1.0, rel=1e-9)


def test_quark_sequence_norm():
    coefficients = {(0, 0, 0): 1.0, (1, 0, 0): 1.0, (1, 1, 0): -1.0}
    assert quark_sequence_norm(coefficients, 0.5, 2, 2) == pytest.approx(2.0)
    assert quark_sequence_norm(coefficients, 0.5, 2, 'inf') == pytest.approx(math.sqrt(2.0))
    assert quark_sequence_norm({((1, 1), 0, 0): 3.0}, 1.0, 1, 1) == pytest.approx(12.0)
    assert quark_sequence_norm({}, 1.0, 1, 1) == 0.0
