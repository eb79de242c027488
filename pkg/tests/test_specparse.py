# tests/test_specparse.py

import math

import pytest

from besovlab.errors import ConfigError
from besovlab.specparse import SpecCall, parse_spec


def test_nested_call_with_keywords():
    call = parse_spec('radialize(uniform(r=1),0.5)')
    assert call.name == 'radialize'
    assert call.args == (SpecCall('uniform', (), (('r', 1.0),)), 0.5)


def test_bare_name_and_whitespace():
    assert parse_spec('log1p') == SpecCall('log1p')
    assert parse_spec(' pow( 0.5 ) ') == SpecCall('pow', (0.5,))


def test_inf_and_exponent_numbers():
    call = parse_spec('f(inf, -1.5e-3)')
    assert math.isinf(call.args[0])
    assert call.args[1] == -1.5e-3


def test_render_uses_float_repr():
    assert parse_spec('indicator(0,1)').render() == 'indicator(0.0,1.0)'
    assert parse_spec('kpp(J=uniform,q=2)').render() == 'kpp(J=uniform(),q=2.0)'


@pytest.mark.parametrize('text', ['', '   ', 'indicator(0,', 'f(a=1,2)', 'a b', '(1)', 'f(1))', 'f(#)'])
def test_malformed_specs_raise(text):
    with pytest.raises(ConfigError):
        parse_spec(text)
