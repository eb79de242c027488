# src/besovlab/omega.py
# Author: besovlab maintainers
# Date: 17 October 2026
# Description: Outer moduli omega (increasing, zero at 0, roughly subadditive) and inner
#              moduli Omega with two-sided power bounds, plus the grid estimate of the
#              rough-subadditivity constant A_omega.

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConfigError, PreconditionError
from .specparse import SpecCall, as_call

log = logging.getLogger(__name__)

# --- Configuration ---
DEFAULT_GRID = np.logspace(-30, 10, 401)
MIN_DECADES = 6.0
SANDWICH_GRID = np.logspace(-6, 6, 241)


@dataclass(frozen=True, eq=False)
class OmegaFn:
    """An omega in C+_inc with its subadditivity constant.

    A is a proven value when `A_exact` is set; otherwise it is the grid estimate,
    which only bounds the true constant from below.
    """

    name: str
    fn: Callable = field(repr=False)
    A: float = 1.0
    A_exact: bool = True
    power: float | None = None

    def __post_init__(self):
        with np.errstate(all='ignore'):
            zero = float(self.fn(np.array([0.0]))[0])
            samples = self.fn(DEFAULT_GRID[::10])
            far = self.fn(np.array([1e4, 1e8]))
        if zero != 0.0:
            raise PreconditionError(f"omega {self.name} does not vanish at 0 (omega(0) = {zero})")
        if not np.all(np.diff(samples) > 0):
            raise PreconditionError(f"omega {self.name} is not strictly increasing on the check grid")
        if not far[1] > far[0]:
            raise PreconditionError(f"omega {self.name} does not grow: omega(1e8) <= omega(1e4)")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        value = self.fn(t)
        return float(value) if value.ndim == 0 else value

    def doubling_bound(self, s: float, M: int) -> float:
        """(2 A)^M, the factor in omega(2^s x) <= (2 A)^M omega(x) for s <= M."""
        if s > M:
            raise PreconditionError(f"the doubling bound needs s <= M, got s={s}, M={M}")
        return (2.0 * self.A) ** M


def power(a: float) -> OmegaFn:
    if not a > 0:
        raise PreconditionError(f"power omega needs a positive exponent, got {a}")
    name = 'id' if a == 1 else f"pow({a:g})"
    return OmegaFn(name, lambda t: np.asarray(t, dtype=float) ** a, A=max(1.0, 2.0 ** (a - 1.0)), power=a)


def identity() -> OmegaFn:
    return power(1.0)


def log1p() -> OmegaFn:
    return OmegaFn('log1p', np.log1p, A=1.0)


def ttanh() -> OmegaFn:
    """t tanh(t): quadratic at 0, linear at infinity."""
    return OmegaFn('ttanh', lambda t: np.asarray(t, dtype=float) * np.tanh(t), A=2.0)


def arsinh() -> OmegaFn:
    return OmegaFn('arsinh', np.arcsinh, A=1.0)


def subadditivity_constant(omega: OmegaFn | Callable, t_grid=None) -> float:
    """max over grid pairs of omega(t1 + t2) / (omega(t1) + omega(t2)).

    A lower bound on the true A_omega. The grid must be positive and span at
    least six decades; omega must be strictly increasing on it.
    """
    grid = DEFAULT_GRID if t_grid is None else np.sort(np.asarray(t_grid, dtype=float))
    if grid.size < 2 or not np.all(grid > 0):
        raise PreconditionError("subadditivity grid must hold at least two positive points")
    if math.log10(grid[-1] / grid[0]) < MIN_DECADES:
        raise PreconditionError(f"subadditivity grid spans fewer than {MIN_DECADES:g} decades")
    fn = omega.fn if isinstance(omega, OmegaFn) else omega
    values = np.asarray(fn(grid), dtype=float)
    if not np.all(np.diff(values) > 0):
        raise PreconditionError("omega is not strictly increasing on the subadditivity grid")
    total = np.asarray(fn(grid[:, None] + grid[None, :]), dtype=float)
    ratio = total / (values[:, None] + values[None, :])
    return float(ratio.max())


def compose(outer: OmegaFn, inner: OmegaFn) -> OmegaFn:
    """outer o inner; power o power collapses to a power, otherwise A is estimated."""
    if outer.power is not None and inner.power is not None:
        return power(outer.power * inner.power)

    def fn(t):
        return outer.fn(inner.fn(t))

    A = subadditivity_constant(fn)
    log.debug("estimated A = %.6g for comp(%s,%s)", A, outer.name, inner.name)
    return OmegaFn(f"comp({outer.name},{inner.name})", fn, A=A, A_exact=False)


_BUILTIN = {'id': identity, 'log1p': log1p, 'ttanh': ttanh, 'arsinh': arsinh}


def omega_from_spec(spec: str | SpecCall) -> OmegaFn:
    """Parses `id`, `pow(a)`, `log1p`, `ttanh`, `arsinh` or `comp(f,g)`."""
    call = as_call(spec)
    if call.name in _BUILTIN:
        if call.args or call.kwargs:
            raise ConfigError(f"omega {call.name} takes no arguments")
        return _BUILTIN[call.name]()
    if call.name == 'pow':
        a = call.kw().get('a', call.args[0] if call.args else None)
        if not isinstance(a, float):
            raise ConfigError(f"pow needs a numeric exponent, got {call.render()}")
        return power(a)
    if call.name == 'comp':
        if len(call.args) != 2 or not all(isinstance(a, SpecCall) for a in call.args):
            raise ConfigError(f"comp needs two omega specs, got {call.render()}")
        return compose(omega_from_spec(call.args[0]), omega_from_spec(call.args[1]))
    raise ConfigError(f"unknown omega {call.name!r}")


# --- Inner moduli ---

@dataclass(frozen=True, eq=False)
class InnerOmega:
    """Omega with m1 t^p <= Omega(t) <= m2 t^p, checked on a log grid at construction."""

    name: str
    fn: Callable = field(repr=False)
    p: float
    m1: float
    m2: float

    def __post_init__(self):
        if self.p < 1:
            raise PreconditionError(f"inner omega needs p >= 1, got {self.p}")
        if not 0 < self.m1 <= self.m2:
            raise PreconditionError(f"inner omega needs 0 < m1 <= m2, got ({self.m1}, {self.m2})")
        quotient = self.fn(SANDWICH_GRID) / SANDWICH_GRID ** self.p
        slack = 1e-12
        if quotient.min() < self.m1 * (1 - slack) or quotient.max() > self.m2 * (1 + slack):
            raise PreconditionError(
                f"inner omega {self.name} leaves its sandwich: Omega/t^p in "
                f"[{quotient.min():.6g}, {quotient.max():.6g}], declared [{self.m1}, {self.m2}]")

    def __call__(self, t):
        return self.fn(np.asarray(t, dtype=float))


def inner_power(p: float) -> InnerOmega:
    return InnerOmega(f"pow({p:g})", lambda t: np.asarray(t) ** p, p, 1.0, 1.0)


def inner_damped(p: float) -> InnerOmega:
    """t^p (1 + e^-t) / 2, between t^p / 2 and t^p."""
    return InnerOmega(f"damped({p:g})", lambda t: np.asarray(t) ** p * (1.0 + np.exp(-np.asarray(t))) / 2.0,
                      p, 0.5, 1.0)


def inner_omega_from_spec(spec: str | SpecCall) -> InnerOmega:
    """Parses `pow(p)` or `damped(p)`."""
    call = as_call(spec)
    builders = {'pow': inner_power, 'damped': inner_damped}
    if call.name not in builders:
        raise ConfigError(f"unknown inner omega {call.name!r}")
    p = call.kw().get('p', call.args[0] if call.args else None)
    if not isinstance(p, float):
        raise ConfigError(f"{call.name} needs a numeric exponent p")
    return builders[call.name](p)
