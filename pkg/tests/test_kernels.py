# tests/test_kernels.py

import math

import numpy as np
import pytest

from besovlab.errors import ConfigError, NumericalError, PreconditionError
from besovlab.kernels import (ball_volume, choice2_kernel, clip_stack, gaussian_kernel, integrate_log_radial,
                              kernel_family_from_spec, onesided_kernel, powertail_kernel, radialize,
                              sphere_area, uniform_kernel)


def test_sphere_areas():
    assert sphere_area(1) == pytest.approx(2.0)
    assert sphere_area(2) == pytest.approx(2.0 * math.pi)
    assert sphere_area(3) == pytest.approx(4.0 * math.pi)
    assert ball_volume(3) == pytest.approx(4.0 * math.pi / 3.0)


def test_log_radial_rule_on_powers():
    assert integrate_log_radial(lambda r: r ** 2, 0.0, 1.0) == pytest.approx(0.5, rel=1e-8)
    assert integrate_log_radial(lambda r: r ** -1.5, 1.0, math.inf) == pytest.approx(2.0 / 3.0, rel=1e-6)


def test_log_radial_rule_detects_divergence():
    with pytest.raises(NumericalError):
        integrate_log_radial(lambda r: r ** -0.5, 0.0, 1.0)


@pytest.mark.parametrize('dim', [1, 2, 3])
def test_uniform_kernel_masses(dim):
    kernel = uniform_kernel(dim, 1.0)
    assert kernel.mass() == pytest.approx(1.0)
    assert kernel.quadrature_mass() == pytest.approx(1.0, abs=1e-6)
    assert float(kernel.radial_mass(0.0, 0.5)) == pytest.approx(0.5 ** dim)


def test_uniform_kernel_density_and_moment():
    kernel = uniform_kernel(1, 1.0)
    assert float(kernel.evaluate(0.5)) == pytest.approx(0.5)
    assert float(kernel.evaluate(1.5)) == 0.0
    assert kernel.moment(1.0) == pytest.approx(0.5, rel=1e-6)


def test_scaling_rule():
    kernel = uniform_kernel(1, 1.0).scaled(0.5)
    assert kernel.r_outer == 0.5
    assert float(kernel.evaluate(0.25)) == pytest.approx(1.0)
    assert kernel.mass() == pytest.approx(1.0)
    with pytest.raises(PreconditionError):
        uniform_kernel(1, 1.0).scaled(0.0)


@pytest.mark.parametrize('dim', [1, 2, 3])
def test_gaussian_kernel_mass(dim):
    kernel = gaussian_kernel(dim, 0.3)
    assert kernel.mass() == pytest.approx(1.0)
    assert kernel.quadrature_mass() == pytest.approx(1.0, abs=1e-6)


def test_choice2_kernel():
    eps = 0.01
    kernel = choice2_kernel(1, eps)
    assert float(kernel.radial_mass(eps, 2 * eps)) == pytest.approx(1.0)
    assert float(kernel.evaluate(1.5 * eps)) == pytest.approx(1.0 / (2.0 * math.log(2.0) * 1.5 * eps))
    assert float(kernel.evaluate(0.5 * eps)) == 0.0


@pytest.mark.parametrize('eps', [0.01, 0.3])
def test_choice2_first_moment(eps):
    assert choice2_kernel(1, eps).moment(1.0) == pytest.approx(eps / math.log(2.0), rel=1e-6)


def test_powertail_moments_diverge_at_the_tail_exponent():
    kernel = powertail_kernel(1, 1.0)
    assert math.isinf(kernel.moment(1.0))
    assert math.isfinite(kernel.moment(0.5))
    assert kernel.mass() == pytest.approx(1.0)


def test_onesided_kernel_is_not_even():
    kernel = onesided_kernel(1.0)
    assert not kernel.is_radial
    assert float(kernel.evaluate(0.5)) == 1.0
    assert float(kernel.evaluate(-0.5)) == 0.0


def test_radialize_keeps_mass_and_reports_annulus():
    kernel = radialize(uniform_kernel(1, 1.0), 0.5)
    assert kernel.quadrature_mass() == pytest.approx(1.0, abs=1e-6)
    assert kernel.r_outer == pytest.approx(2.0)
    lo, hi = kernel.params['annulus']
    assert lo < hi
    assert kernel.params['annulus_infimum'] > 0.0


def test_radialize_closed_form_on_the_uniform_kernel():
    # 1/(4 ln 2) up to |h| = 1, then (2 - r)/(4 r ln 2) out to 2
    kernel = radialize(uniform_kernel(1, 1.0), 0.5)
    expected = [1.0 / (4.0 * math.log(2.0)), 1.0 / (4.0 * math.log(2.0)), 1.0 / (12.0 * math.log(2.0)), 0.0]
    np.testing.assert_allclose(kernel.evaluate(np.array([0.25, 0.9, 1.5, 2.5])), expected, rtol=1e-9, atol=1e-12)


def test_radialize_rejects_bad_input():
    with pytest.raises(PreconditionError):
        radialize(uniform_kernel(1, 1.0), 1.0)
    with pytest.raises(PreconditionError):
        radialize(onesided_kernel(1.0), 0.5)


@pytest.mark.parametrize('r1', [0.2, 0.5, 0.9])
def test_clip_stack_minorant_stays_below(r1):
    stack = clip_stack(r1, 1.0, 1.0)
    assert stack.kernel.mass() == pytest.approx(1.0)
    t = np.linspace(1e-3, 1.0, 997)
    assert np.all(stack.minorant(t) <= stack.kernel.evaluate(t) + 1e-12)
    assert np.all(np.diff(stack.minorant(t)) >= -1e-15)


def test_clip_stack_level_count():
    stack = clip_stack(0.5, 1.0, 1.0)
    assert stack.levels == 3
    assert not stack.trivial
    assert clip_stack(0.2, 1.0, 1.0).trivial


def test_clip_stack_tiles_the_outer_annulus():
    stack = clip_stack(0.3, 1.0, 1.0)
    assert stack.levels == 2
    assert stack.edges == pytest.approx((1.0, 0.3, 0.09, 0.027))
    assert stack.minorant_slope == pytest.approx(1.25)
    assert stack.minorant_start == pytest.approx(0.2)
    assert stack.kernel.mass() == pytest.approx(1.0)
    assert stack.kernel.r_outer == 1.0
    # every t in [r2/5, r2) lies in exactly one copy, where eta = alpha theta_j^-1 / c
    t = np.linspace(0.2, 0.999, 400)
    edges = np.array(stack.edges)
    inside = (t[:, None] > edges[None, 1:]) & (t[:, None] <= edges[None, :-1])
    assert np.all(inside.sum(axis=1) == 1)
    heights = np.array([stack.alpha / theta for theta in stack.thetas])[inside.argmax(axis=1)]
    np.testing.assert_allclose(stack.kernel.evaluate(t), heights / stack.normalization, rtol=1e-9)


@pytest.mark.parametrize('spec', ['uniform(r=1)', 'gaussian(sigma=1)', 'choice2()', 'mspow()',
                                  'powertail(a=2)', 'onesided(r=1)', 'radialize(uniform(r=1),0.5)',
                                  'clipstack(0.5,1,1)', 'kpp(J=uniform,q=2)', 'kpp(J=gaussian(sigma=1),q=2)',
                                  'imbnikol(r=0.25,q=2)'])
def test_families_instantiate_with_unit_mass(spec):
    family = kernel_family_from_spec(spec)
    kernel = family.instantiate(0.25, s=0.5)
    assert kernel.quadrature_mass() == pytest.approx(1.0, abs=1e-6)

@pytest.mark.parametrize('spec', ['uniform(r=1)', 'gaussian(sigma=1)', 'choice2()', 'powertail(a=2)',
                                  'onesided(r=1)', 'radialize(uniform(r=1),0.5)', 'clipstack(0.5,1,1)',
                                  'kpp(J=uniform,q=2)', 'kpp(J=gaussian(sigma=1),q=2)', 'imbnikol(r=0.25,q=2)'])
@pytest.mark.parametrize('delta', [0.05, 0.3])
def test_mass_outside_a_ball_shrinks_along_dyadic_eps(spec, delta):
    family = kernel_family_from_spec(spec)
    assert family.concentrating
    outside = np.array([family.instantiate(2.0 ** -k, s=0.5).mass_outside(delta) for k in range(12)])
    assert np.all(np.diff(outside) <= 1e-6)
    assert outside[-1] < 1e-2



def test_mspow_does_not_concentrate():
    family = kernel_family_from_spec('mspow()')
    assert not family.concentrating
    kernel = family.instantiate(0.25)
    assert kernel.params['n'] == 4
    assert kernel.r_outer == 1.0


def test_smoothness_dependent_family_needs_s():
    with pytest.raises(PreconditionError):
        kernel_family_from_spec('kpp(J=uniform,q=2)').instantiate(0.5)


@pytest.mark.parametrize('spec, dim', [('nosuch()', 1), ('onesided(r=1)', 2), ('radialize(0.5)', 1),
                                       ('uniform(r=1)', 4), ('kpp(J=cauchy,q=2)', 1)])
def test_bad_kernel_specs(spec, dim):
    with pytest.raises(ConfigError):
        family = kernel_family_from_spec(spec, dim)
        family.instantiate(0.5, s=0.5)


def test_eps_must_be_positive():
    with pytest.raises(PreconditionError):
        kernel_family_from_spec('uniform(r=1)').instantiate(-1.0)
