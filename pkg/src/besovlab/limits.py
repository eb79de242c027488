# src/besovlab/limits.py
# Author: besovlab maintainers
# Date: 17 October 2026
# Description: Parameter sweeps with extrapolation for the limiting embeddings: the
#              r -> 1 gradient limit, the r -> 0 L^p limit, the Lipschitz limit of
#              B^r_{inf,q}, and the eps-sweeps of D_omega against omega of the
#              Nikol'skii, Lipschitz and Sobolev quantities.

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy.special import gammaln

from . import config
from .errors import ConfigError, NumericalError, PreconditionError
from .findiff import DEFAULT_QUADRATURE, HQuadrature, difference_profile
from .functionals import (SemiNormSpec, besov_seminorm, d_omega, d_omega_inner, lipschitz_constant,
                          nikolskii_seminorm)
from .gridfn import GridFunction, LpExponent, array_lp_norm, lp_norm
from .kernels import KernelFamily, sphere_area
from .omega import InnerOmega, OmegaFn

log = logging.getLogger(__name__)

# --- Configuration ---
FIT_NODES = 4
DEFAULT_BBM_GRID = np.linspace(0.80, 0.99, 20)
DEFAULT_MS_GRID = np.geomspace(0.20, 0.01, 20)
DEFAULT_LIP_GRID = np.linspace(0.80, 0.99, 20)
DECAY_LEVELS = (2, 10)


@dataclass(frozen=True, eq=False)
class SweepReport:
    """Values of a scaled quantity along a grid ordered toward the limit.

    `tail_max` and `tail_min` are taken over the last fifth of the grid.
    `extrapolated_limit` is a least-squares line in the small parameter over
    the FIT_NODES nodes nearest the limit; `richardson_limit` uses the two
    nearest only.
    """

    parameter: str
    grid: np.ndarray
    values: np.ndarray
    sup: float
    tail_max: float
    tail_min: float
    extrapolated_limit: float
    method: str
    richardson_limit: float
    fit_residual: float
    target: float | None = None
    relative_error: float | None = None
    ratios: np.ndarray | None = None
    diagnostics: dict = field(default_factory=dict)

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame({'param': self.grid, 'value': self.values})
        frame['target'] = np.nan if self.target is None else self.target
        if self.target:
            frame['relerr'] = np.abs(self.values - self.target) / abs(self.target)
        else:
            frame['relerr'] = np.nan
        if self.ratios is not None:
            frame['ratio'] = self.ratios
        return frame


def _check_grid(grid, name: str, lo: float | None = None, hi: float | None = None) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise PreconditionError(f"{name} grid needs at least two nodes")
    steps = np.diff(grid)
    if not (np.all(steps > 0) or np.all(steps < 0)):
        raise PreconditionError(f"{name} grid must be strictly monotone")
    if lo is not None and not np.all(grid > lo):
        raise PreconditionError(f"{name} grid must lie above {lo}")
    if hi is not None and not np.all(grid < hi):
        raise PreconditionError(f"{name} grid must lie below {hi}")
    return grid


def _extrapolate(small: np.ndarray, values: np.ndarray) -> tuple[float, float, float]:
    """(linear-fit limit, residual relative to it, two-node Richardson limit) at small -> 0."""
    order = np.argsort(small)[:FIT_NODES]
    x, y = small[order], values[order]
    slope, limit = np.polyfit(x, y, 1)
    residual = float(np.max(np.abs(slope * x + limit - y)))
    relative = residual / abs(limit) if limit != 0 else residual
    (x1, x2), (y1, y2) = x[:2], y[:2]
    richardson = float((x2 * y1 - x1 * y2) / (x2 - x1)) if x2 != x1 else float(y1)
    return float(limit), relative, richardson


def _report(parameter: str, grid: np.ndarray, values, small: np.ndarray, method: str,
            target: float | None = None, ratios=None, diagnostics: dict | None = None) -> SweepReport:
    values = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise NumericalError(f"{parameter}-sweep produced non-finite values")
    tail = values[-max(1, math.ceil(values.size / 5)):]
    limit, residual, richardson = _extrapolate(small, values)
    relative_error = None
    if target is not None:
        relative_error = abs(limit - target) / abs(target) if target != 0 else abs(limit)
    return SweepReport(parameter, grid, values, float(values.max()), float(tail.max()), float(tail.min()),
                       limit, method, richardson, residual, target, relative_error,
                       None if ratios is None else np.asarray(ratios, dtype=float), diagnostics or {})


# --- Closed-form comparators ---

def bbm_constant(p: float, N: int, method: str = 'closed') -> float:
    """K_{p,N} = int_{S^(N-1)} |sigma . e|^p dH^(N-1)(sigma).

    method='closed' uses 2 pi^((N-1)/2) Gamma((p+1)/2) / Gamma((N+p)/2);
    method='quadrature' integrates on the sphere (4096-node trapezoid in the
    angle for N = 2, Gauss-Legendre in the polar cosine for N = 3).
    """
    if not 1 <= N <= 3:
        raise PreconditionError(f"bbm_constant supports N in 1..3, got {N}")
    if p < 1:
        raise PreconditionError(f"bbm_constant needs p >= 1, got {p}")
    if N == 1:
        return 2.0
    if method == 'closed':
        return float(2.0 * math.pi ** ((N - 1) / 2.0) * math.exp(gammaln((p + 1) / 2.0) - gammaln((N + p) / 2.0)))
    if method != 'quadrature':
        raise ConfigError(f"unknown bbm_constant method {method!r}")
    if N == 2:
        theta = np.linspace(0.0, 2.0 * math.pi, 4097)[:-1]
        return float(2.0 * math.pi / 4096 * np.sum(np.abs(np.cos(theta)) ** p))
    nodes, weights = np.polynomial.legendre.leggauss(64)
    t = 0.5 * (nodes + 1.0)
    return float(2.0 * math.pi * 2.0 * np.sum(0.5 * weights * t ** p))


def gradient_lp_norm(f: GridFunction, p) -> float:
    """||grad f||_p by centred differences of the zero extension.

    In 1D with p = 1 the exact discrete total variation sum |f_(i+1) - f_i|
    is returned instead.
    """
    p = LpExponent.of(p)
    padded = np.pad(f.values, 1)
    if f.dim == 1 and p.value == 1.0:
        return float(np.sum(np.abs(np.diff(padded))))
    grads = np.gradient(padded, f.spacing)
    grads = [grads] if f.dim == 1 else grads
    magnitude = np.sqrt(sum(g * g for g in grads))
    return array_lp_norm(magnitude, p, f.cell_volume)


def epsilon_grid(f: GridFunction, M: int = 1, p=1.0, levels: int = config.DEFAULT_EPSILON_LEVELS,
                 quad: HQuadrature = DEFAULT_QUADRATURE) -> np.ndarray:
    """eps_k = h_max 2^-k, k = 0..levels, without the nodes below MIN_KERNEL_CELLS spacings."""
    h_max = difference_profile(f, M, LpExponent.of(p), quad).h_max
    grid = h_max * 2.0 ** -np.arange(levels + 1)
    keep = grid >= config.MIN_KERNEL_CELLS * f.spacing * (1.0 - 1e-9)
    if not np.all(keep):
        log.warning("dropped %d eps nodes below %d lattice spacings", int(np.sum(~keep)), config.MIN_KERNEL_CELLS)
    if np.sum(keep) < 2:
        raise PreconditionError(f"grid spacing {f.spacing:g} leaves fewer than two eps nodes")
    return grid[keep]


def parse_rgrid(text: str) -> np.ndarray:
    """'start:stop[:num][:lin|geom]' into a grid from start to stop (20 geometric nodes by default)."""
    parts = [part.strip() for part in text.split(':')]
    if not 2 <= len(parts) <= 4:
        raise ConfigError(f"grid {text!r} must look like start:stop[:num][:lin|geom]")
    num, kind = 20, 'geom'
    for extra in parts[2:]:
        if extra in ('lin', 'geom'):
            kind = extra
        elif extra.isdigit():
            num = int(extra)
        else:
            raise ConfigError(f"grid {text!r}: cannot read {extra!r}")
    try:
        start, stop = float(parts[0]), float(parts[1])
    except ValueError:
        raise ConfigError(f"grid {text!r}: start and stop must be numbers") from None
    if num < 2 or start == stop:
        raise ConfigError(f"grid {text!r} needs two distinct ends and at least two nodes")
    if kind == 'geom':
        if start <= 0 or stop <= 0:
            raise ConfigError(f"geometric grid {text!r} needs positive ends")
        return np.geomspace(start, stop, num)
    return np.linspace(start, stop, num)


# --- r-sweeps ---

def bbm_sweep(f: GridFunction, p: float, r_grid=None, M: int = 1,
              quad: HQuadrature = DEFAULT_QUADRATURE) -> SweepReport:
    """(1 - r) p [f]^p_{W^(r,p)} as r -> 1, against K_{p,N} ||grad f||_p^p."""
    r_grid = _check_grid(DEFAULT_BBM_GRID if r_grid is None else r_grid, 'r', 0.0, 1.0)
    values = [(1.0 - r) * p * besov_seminorm(f, SemiNormSpec(r, p, p, M), quad).value ** p for r in r_grid]
    target = bbm_constant(p, f.dim) * gradient_lp_norm(f, p) ** p
    report = _report('r', r_grid, values, 1.0 - r_grid, 'linear(1-r)', target)
    log.info("bbm sweep p=%g: limit %.6g (target %.6g)", p, report.extrapolated_limit, target)
    return report


def ms_sweep(f: GridFunction, p: float, r_grid=None, quad: HQuadrature = DEFAULT_QUADRATURE) -> SweepReport:
    """r p [f]^p_{W^(r,p)} as r -> 0, against 2 sigma_N ||f||_p^p."""
    r_grid = _check_grid(DEFAULT_MS_GRID if r_grid is None else r_grid, 'r', 0.0, 1.0)
    prof = difference_profile(f, 1, LpExponent.of(p), quad)
    if not prof.far_exact:
        raise PreconditionError(
            f"the r -> 0 limit is carried by |h| > 1; shift reach {prof.h_max:g} is below the support "
            f"diameter {f.support_diameter_cells() * f.spacing:g}, so the far-field tail is not exact")
    values = [r * p * besov_seminorm(f, SemiNormSpec(r, p, p, 1), quad).value ** p for r in r_grid]
    target = 2.0 * sphere_area(f.dim) * lp_norm(f, p) ** p
    report = _report('r', r_grid, values, r_grid, 'linear(r)', target)
    log.info("ms sweep p=%g: limit %.6g (target %.6g)", p, report.extrapolated_limit, target)
    return report


def lip_sweep(f: GridFunction, q: float, r_grid=None, quad: HQuadrature = DEFAULT_QUADRATURE) -> SweepReport:
    """(1 - r)^(1/q) ||f||_{B^r_{inf,q}} as r -> 1, against q^(-1/q) [f]_{C^(0,1)}."""
    r_grid = _check_grid(DEFAULT_LIP_GRID if r_grid is None else r_grid, 'r', 0.0, 1.0)
    sup_norm = lp_norm(f, math.inf)
    values = np.array([(1.0 - r) ** (1.0 / q) * (sup_norm + besov_seminorm(f, SemiNormSpec(r, math.inf, q, 1), quad).value)
                       for r in r_grid])
    comparator = q ** (-1.0 / q) * lipschitz_constant(f)
    ratios = values / comparator if comparator > 0 else np.zeros_like(values)
    report = _report('r', r_grid, values, 1.0 - r_grid, 'linear(1-r)', comparator, ratios,
                     {'calibration': config.LIPSCHITZ_CALIBRATION})
    log.info("lip sweep q=%g: tail max %.6g against comparator %.6g", q, report.tail_max, comparator)
    return report


# --- eps-sweeps ---

def _d_sweep(f: GridFunction, family: KernelFamily, omega: OmegaFn, spec: SemiNormSpec, eps_grid,
             quad: HQuadrature):
    if eps_grid is None:
        eps_grid = epsilon_grid(f, spec.M, spec.p, quad=quad)
    eps_grid = _check_grid(eps_grid, 'eps', 0.0)
    results = [d_omega(f, family, eps, omega, spec, quad) for eps in eps_grid]
    return eps_grid, results


def theo_ratio_sweep(f: GridFunction, family: KernelFamily, omega: OmegaFn, spec: SemiNormSpec,
                     eps_grid=None, quad: HQuadrature = DEFAULT_QUADRATURE) -> SweepReport:
    """D_omega(rho_eps, f) along eps and sup_eps D_omega / omega([f]_{B^s_{p,inf}}).

    The upper bound omega([f]) is asserted: a ratio above 1 + tolerance raises
    NumericalError. Non-radial families only draw a warning.
    """
    if not family.is_radial:
        log.warning("kernel family %s is not radial; the two-sided equivalence is not guaranteed", family.name)
    grid, results = _d_sweep(f, family, omega, spec, eps_grid, quad)
    values = np.array([r.value for r in results])
    tolerance = max(config.QUADRATURE_TOLERANCE, max(r.tolerance for r in results))
    comparator = omega(nikolskii_seminorm(f, spec, quad).value)
    ratios = values / comparator if comparator > 0 else np.zeros_like(values)
    if ratios.max() > 1.0 + tolerance:
        raise NumericalError(
            f"sup_eps D_omega / omega([f]) = {ratios.max():.6f} exceeds 1 + {tolerance:.3g}; "
            f"refine the grid spacing ({f.spacing:g})")
    diagnostics = {'ratio': float(ratios.max()), 'tolerance': tolerance,
                   'c_star': config.c_star(family.name, omega.name)}
    return _report('eps', grid, values, grid, 'linear(eps)', comparator, ratios, diagnostics)


def approx_decay_sweep(f: GridFunction, family: KernelFamily, omega: OmegaFn, spec: SemiNormSpec,
                       levels: int = config.DEFAULT_EPSILON_LEVELS,
                       quad: HQuadrature = DEFAULT_QUADRATURE) -> SweepReport:
    """D_omega along eps_k = h_max 2^-k with the ratio value(k=10) / value(k=2)."""
    h_max = difference_profile(f, spec.M, spec.p, quad).h_max
    full = h_max * 2.0 ** -np.arange(levels + 1)
    grid, results = _d_sweep(f, family, omega, spec, epsilon_grid(f, spec.M, spec.p, levels, quad), quad)
    values = np.array([r.value for r in results])
    diagnostics = {'decay_ratio': None}
    lo, hi = DECAY_LEVELS
    if hi < grid.size and np.isclose(grid[lo], full[lo]) and values[lo] > 0:
        diagnostics['decay_ratio'] = float(values[hi] / values[lo])
    else:
        log.warning("eps level %d is not resolved at spacing %g; no decay ratio", hi, f.spacing)
    return _report('eps', grid, values, grid, 'linear(eps)', diagnostics=diagnostics)


def lipschitz_ratio_sweep(f: GridFunction, family: KernelFamily, omega: OmegaFn, eps_grid=None,
                          quad: HQuadrature = DEFAULT_QUADRATURE) -> SweepReport:
    """D_omega with s = 1, p = inf, M = 1 along eps, against omega([f]_{C^(0,1)})."""
    spec = SemiNormSpec(1.0, math.inf, math.inf, 1)
    grid, results = _d_sweep(f, family, omega, spec, eps_grid, quad)
    values = np.array([r.value for r in results])
    comparator = omega(lipschitz_constant(f))
    ratios = values / comparator if comparator > 0 else np.zeros_like(values)
    return _report('eps', grid, values, grid, 'linear(eps)', comparator, ratios)


def sobolev_ratio_sweep(f: GridFunction, family: KernelFamily, omega: OmegaFn, inner: InnerOmega,
                        eps_grid=None, quad: HQuadrature = DEFAULT_QUADRATURE) -> SweepReport:
    """D_{omega,Omega} with s = 1, M = 1 along eps, against omega(||grad f||_p^p).

    Both tail_max (limsup) and tail_min (liminf) are reported; nothing is
    asserted about their gap.
    """
    if eps_grid is None:
        eps_grid = epsilon_grid(f, 1, inner.p, quad=quad)
    eps_grid = _check_grid(eps_grid, 'eps', 0.0)
    values = np.array([d_omega_inner(f, family, eps, omega, inner, 1.0, 1, quad).value for eps in eps_grid])
    comparator = omega(gradient_lp_norm(f, inner.p) ** inner.p)
    ratios = values / comparator if comparator > 0 else np.zeros_like(values)
    return _report('eps', eps_grid, values, eps_grid, 'linear(eps)', comparator, ratios)
