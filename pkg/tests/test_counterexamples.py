# tests/test_counterexamples.py

import math

import numpy as np
import pytest

from besovlab.counterexamples import (CESARO_BOUND, cesaro_bound_check, cesaro_sequence, compactness_probe,
                                      level_isolation, level_locality, noncompact_besov_sweep, noncompact_sequence,
                                      noncompact_sweep, nonlimit_function, quark_column)
from besovlab.errors import PreconditionError
from besovlab.gridfn import lp_norm


def test_cesaro_sequence_layout():
    u = cesaro_sequence(16)
    assert u.dtype == np.int64
    assert [int(u[j - 1]) for j in (1, 2, 3, 4, 8, 16)] == [0, 1, 0, 2, 3, 4]
    assert int(u.sum()) == 10
    with pytest.raises(PreconditionError):
        cesaro_sequence(1)


def test_cesaro_weighted_mean():
    check = cesaro_bound_check(J=32, eps_grid=[0.5, 4.0])
    assert check.values['value'].tolist() == pytest.approx([0.6016006, 0.0157471], rel=1e-5)
    assert check.bound == pytest.approx(1.061478, rel=1e-6)
    assert check.argmax == 0.5


def test_cesaro_bound_holds_on_the_default_grid():
    check = cesaro_bound_check()
    assert check.sup <= CESARO_BOUND
    assert len(check.values) == 60


def test_quark_column_with_q_one_matches_weighted_means():
    grid = [0.01, 0.1, 1.0]
    column = quark_column(64, 1.0, grid)
    check = cesaro_bound_check(J=64, eps_grid=grid)
    np.testing.assert_allclose(column['value'], check.values['value'], rtol=1e-12)
    assert (quark_column(64, 2.0, grid)['bound'] == CESARO_BOUND / 2.0).all()


@pytest.fixture(scope='module')
def nonlimit():
    return nonlimit_function(s=0.5, p=2.0, q=2.0, M=1, J=8)


def test_nonlimit_shells_grow_like_the_weights(nonlimit):
    levels = nonlimit.levels.set_index('j')
    base = levels.loc[2, 'shell_value']
    assert levels.loc[4, 'shell_value'] == pytest.approx(math.sqrt(2.0) * base, rel=1e-6)
    assert levels.loc[8, 'shell_value'] == pytest.approx(math.sqrt(3.0) * base, rel=1e-6)
    assert levels.loc[3, 'shell_value'] == 0.0
    assert (levels['shell_value'] >= levels['lower_bound']).all()


def test_nonlimit_quark_column_is_bounded(nonlimit):
    assert (nonlimit.quark['value'] <= nonlimit.quark['bound']).all()
    assert nonlimit.lemma_constant > 0.0


def test_nonlimit_levels_are_disjoint_and_local(nonlimit):
    assert nonlimit.function.check_disjoint() > 0.0
    assert level_locality(nonlimit.function, 3) < 1e-3


@pytest.mark.parametrize('j', [1, 4, 8])
def test_nonlimit_level_alone_matches_all_levels(nonlimit, j):
    assert level_isolation(nonlimit.function, j) <= 0.01


def test_nonlimit_rejects_deep_levels():
    with pytest.raises(PreconditionError):
        nonlimit_function(J=15)


def test_noncompact_sequence_has_bounded_functionals():
    frame = noncompact_sweep(M=1, s=0.5, p=2.0, ns=(1, 4, 16))
    np.testing.assert_allclose(frame['norm'], frame['norm'].iloc[0], rtol=1e-4)
    assert frame['functional'].max() / frame['functional'].min() < 2.0


def test_noncompact_sequence_is_bounded_yet_separated():
    ns = (1, 4, 16, 64, 256)
    frame = noncompact_sweep(M=1, s=0.5, p=2.0, ns=ns)
    assert list(frame['n']) == list(ns)
    np.testing.assert_allclose(frame['norm'], frame['norm'].iloc[0], rtol=0.01)
    assert frame['functional'].max() / frame['functional'].min() <= 4.0
    # f_n against f_16n
    sequence = [noncompact_sequence(1, 0.5, 2.0, n) for n in ns[::2]]
    probe = compactness_probe(sequence, (-1.0, 1.0), 2.0)
    assert probe.distances.shape == (3, 3)
    assert probe.min_distance >= 0.5 * lp_norm(sequence[0], 2.0)


def test_noncompact_sequence_domain():
    with pytest.raises(PreconditionError):
        noncompact_sequence(1, 1.0, 2.0, 4)
    with pytest.raises(PreconditionError):
        compactness_probe([noncompact_sequence(1, 0.5, 2.0, 1)], (-1.0, 1.0), 2.0)


def test_noncompact_besov_decay_exponent():
    frame, slope = noncompact_besov_sweep(M=1, s=0.5, p=2.0, q=2.0, gamma=0.0)
    assert list(frame['n']) == [4, 8, 16, 32, 64]
    assert slope == pytest.approx(-1.0, abs=0.15)
    with pytest.raises(PreconditionError):
        noncompact_besov_sweep(gamma=0.9)


def test_noncompact_besov_half_critical_decay():
    frame, slope = noncompact_besov_sweep(M=1, s=0.5, p=2.0, q=2.0, gamma=0.25)
    assert slope == pytest.approx(-0.5, abs=0.15)
    np.testing.assert_allclose(frame['norm'], frame['norm'].iloc[0], rtol=0.01)


def test_noncompact_besov_critical_exponent_stays_bounded():
    frame, slope = noncompact_besov_sweep(M=1, s=0.5, p=2.0, q=2.0, gamma=0.5)
    assert abs(slope) < 0.15
    assert frame['functional'].max() / frame['functional'].min() < 1.5
