# src/besovlab/counterexamples.py
# Author: besovlab maintainers
# Date: 17 October 2026
# Description: Explicit counterexamples: the Cesaro-type sequence with bounded weighted
#              means, the dyadic bump function whose Nikol'skii shells grow while its
#              quark-side column stays bounded, the concentrating sequences with bounded
#              functionals, and the L^p_loc compactness probe that separates them.

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import pandas as pd

from . import config
from .errors import NumericalError, PreconditionError
from .findiff import LatticeShift, check_order, diff_lp_norm, forward_difference
from .functionals import SemiNormSpec, d_omega
from .gridfn import GridFunction, array_lp_norm, auto_box, bump, lp_distance, lp_norm, make_grid_function
from .kernels import kernel_family_from_spec
from .omega import power

log = logging.getLogger(__name__)

# --- Configuration ---
CESARO_BOUND = 2.0 / (math.e * math.log(2.0))
DEFAULT_EPS_GRID = np.geomspace(1e-4, 4.0, 60)
LEVEL_CELLS = 64             # local spacing 2^-j / LEVEL_CELLS
BUMP_ETA = 1.0               # support radius of the profile psi
LEMMA_EPS = 0.1
NONCOMPACT_BOX = (-2.0, 2.0)
BESOV_BUMP_RADIUS = 16.0


# --- Cesaro-type sequence ---

def cesaro_sequence(J: int) -> np.ndarray:
    """u_1..u_J with u_j = k when j = 2^k and 0 otherwise (index 0 holds u_1)."""
    if J < 2:
        raise PreconditionError(f"cesaro_sequence needs J >= 2, got {J}")
    u = np.zeros(J, dtype=np.int64)
    k = 1
    while 2 ** k <= J:
        u[2 ** k - 1] = k
        k += 1
    return u


def _weighted_mean(J: int, eps: float) -> float:
    """eps * sum_j 2^(-j eps) u_j, summed over the nonzero terms j = 2^k only."""
    top = int(math.floor(math.log2(J)))
    return eps * math.fsum(k * 2.0 ** (-(2 ** k) * eps) for k in range(1, top + 1))


class CesaroCheck(NamedTuple):
    sup: float
    argmax: float
    bound: float
    values: pd.DataFrame


def cesaro_bound_check(J: int = 2 ** 20, eps_grid=None) -> CesaroCheck:
    """sup over the grid of eps sum_j 2^(-j eps) u_j, asserted below 2/(e ln 2)."""
    if J < 2:
        raise PreconditionError(f"cesaro_bound_check needs J >= 2, got {J}")
    grid = DEFAULT_EPS_GRID if eps_grid is None else np.asarray(eps_grid, dtype=float)
    if not np.all(grid > 0):
        raise PreconditionError("eps grid must be positive")
    values = np.array([_weighted_mean(J, eps) for eps in grid])
    k = int(np.argmax(values))
    if values[k] > CESARO_BOUND:
        raise NumericalError(f"weighted mean {values[k]:.6f} exceeds 2/(e ln 2) = {CESARO_BOUND:.6f}")
    frame = pd.DataFrame({'eps': grid, 'value': values, 'bound': CESARO_BOUND})
    return CesaroCheck(float(values[k]), float(grid[k]), CESARO_BOUND, frame)


def quark_column(J: int, q: float, eps_grid=None) -> pd.DataFrame:
    """eps * sum_j (u_j^(1/q) 2^(-j eps))^q along eps, with the bound 2 q^-1 / (e ln 2)."""
    grid = DEFAULT_EPS_GRID if eps_grid is None else np.asarray(eps_grid, dtype=float)
    u = cesaro_sequence(J)
    j = np.flatnonzero(u) + 1
    values = [eps * math.fsum(float(u[i - 1]) * 2.0 ** (-i * eps * q) for i in j) for eps in grid]
    return pd.DataFrame({'eps': grid, 'value': values, 'bound': CESARO_BOUND / q})


# --- Dyadic bump function ---

@dataclass(frozen=True, eq=False)
class BumpLevel:
    j: int
    u: int
    amplitude: float
    center: float
    radius: float
    grid: GridFunction


@dataclass(frozen=True, eq=False)
class DyadicBumpFunction:
    """f = sum_j u_j^(1/q) 2^(-j(s - 1/p)) psi(2^j (x - m_j)) in 1D, one local grid per level.

    Level j lives on spacing 2^-j / cells over m_j +- 2^-j (eta + M + 1), which
    holds every translate by M|h| for |h| <= 2^-j.
    """

    s: float
    p: float
    q: float
    M: int
    eta: float
    cells: int
    levels: tuple

    def level(self, j: int) -> BumpLevel:
        for level in self.levels:
            if level.j == j:
                return level
        raise PreconditionError(f"level {j} is not part of this function")

    def shell_value(self, j: int) -> float:
        """2^(js) max over lattice h in [2^(-j-1), 2^-j] of ||Delta_h^M f||_p, from level j alone."""
        level = self.level(j)
        grid = level.grid
        half = self.cells // 2
        norms = [diff_lp_norm(grid, LatticeShift((k,), grid.spacing), self.M, self.p)
                 for k in range(half, self.cells + 1)]
        return 2.0 ** (j * self.s) * max(norms)

    def check_disjoint(self) -> float:
        """Smallest gap m_(j+1) - m_j - (R_(j+1) + R_j); raises if any is not positive."""
        gaps = [b.center - a.center - (a.radius + b.radius) for a, b in zip(self.levels[:-1], self.levels[1:])]
        smallest = min(gaps) if gaps else math.inf
        if not smallest > 0:
            raise NumericalError(f"level supports overlap (gap {smallest:g})")
        return smallest


def _level_grid(j: int, center: float, amplitude: float, M: int, eta: float, cells: int) -> GridFunction:
    scale = 2.0 ** -j
    spacing = scale / cells
    half_width = scale * (eta + M + 1)
    box = (center - half_width, center + half_width)
    return make_grid_function(bump(center, eta * scale, amplitude), box, spacing, margin=M * scale)


def lemma_constant(M: int = 1, p: float = 2.0, eps0: float = LEMMA_EPS, cells: int = 1024) -> float:
    """c_eps0 = max over 1/2 <= |h| <= 1 of (int_{-eps0}^{eps0} |Delta_h^M psi|^p)^(1/p)."""
    M = check_order(M)
    spacing = 1.0 / cells
    psi = make_grid_function(bump(0.0, BUMP_ETA), (-(BUMP_ETA + M + 1), BUMP_ETA + M + 1), spacing, margin=M)
    x = psi.axis_coordinates(0)
    window = (x >= -eps0 - 1e-12) & (x <= eps0 + 1e-12)
    best = 0.0
    for k in range(cells // 2, cells + 1):
        out = forward_difference(psi, LatticeShift((k,), spacing), M).values
        best = max(best, array_lp_norm(out[window], p, spacing))
    return best


class NonlimitResult(NamedTuple):
    function: DyadicBumpFunction
    levels: pd.DataFrame
    quark: pd.DataFrame
    lemma_constant: float


def nonlimit_function(s: float = 0.5, p: float = 2.0, q: float = 2.0, M: int = 1, J: int = 10,
                      eps_grid=None, cells: int = LEVEL_CELLS, eta: float = BUMP_ETA) -> NonlimitResult:
    """Builds the dyadic bump function with Cesaro weights and its two diagnostic columns.

    `levels` holds, per level j, the shell value 2^(js) sup_{h in K_j} ||Delta_h^M f||_p
    and the lower bound c u_j^(1/q); `quark` holds the bounded sequence side.
    """
    M = check_order(M)
    if J > config.MAX_DYADIC_LEVEL:
        raise PreconditionError(
            f"J = {J} needs local spacing 2^-{J}/{cells} near x = {2 * (M + eta) * J:g}; "
            f"levels beyond {config.MAX_DYADIC_LEVEL} lose too many digits in double precision")
    if not (s > 0 and p >= 1 and q >= 1):
        raise PreconditionError(f"nonlimit_function needs s > 0 and p, q >= 1, got s={s}, p={p}, q={q}")
    u = cesaro_sequence(J)
    levels = []
    for j in range(1, J + 1):
        amplitude = float(u[j - 1]) ** (1.0 / q) * 2.0 ** (-j * (s - 1.0 / p))
        center = 2.0 * (M + eta) * j
        grid = _level_grid(j, center, amplitude, M, eta, cells)
        levels.append(BumpLevel(j, int(u[j - 1]), amplitude, center, eta * 2.0 ** -j, grid))
    function = DyadicBumpFunction(s, p, q, M, eta, cells, tuple(levels))
    function.check_disjoint()

    c = lemma_constant(M, p)
    rows = []
    for level in levels:
        weight = float(level.u) ** (1.0 / q)
        rows.append({'j': level.j, 'u': level.u, 'amplitude': level.amplitude,
                     'shell_value': function.shell_value(level.j), 'lower_bound': c * weight})
    frame = pd.DataFrame(rows)
    log.info("nonlimit J=%d s=%g p=%g q=%g: shell values up to %.4g", J, s, p, q, frame['shell_value'].max())
    return NonlimitResult(function, frame, quark_column(J, q, eps_grid), c)


def level_locality(function: DyadicBumpFunction, j: int) -> float:
    """Largest relative gap between ||Delta_h^M (f_j + f_(j+1))||_p^p on one shared grid and the
    sum of the level-local values, over lattice h in [2^(-j-1), 2^-j]."""
    a, b = function.level(j), function.level(j + 1)
    spacing = b.grid.spacing
    M, eta, p = function.M, function.eta, function.p
    lo = a.center - 2.0 ** -j * (eta + M + 1)
    hi = b.center + 2.0 ** -(j + 1) * (eta + M + 1)
    shared = make_grid_function(bump(a.center, a.radius, a.amplitude), (lo, hi), spacing)
    shared = shared.with_values(shared.values + make_grid_function(
        bump(b.center, b.radius, b.amplitude), (lo, hi), spacing).values)
    worst = 0.0
    for k in range(function.cells, 2 * function.cells + 1, 4):
        together = diff_lp_norm(shared, LatticeShift((k,), spacing), M, p) ** p
        local = (diff_lp_norm(a.grid, LatticeShift((k // 2,), a.grid.spacing), M, p) ** p
                 + diff_lp_norm(b.grid, LatticeShift((k,), spacing), M, p) ** p)
        if together > 0:
            worst = max(worst, abs(together - local) / together)
    return worst


def level_isolation(function: DyadicBumpFunction, j: int) -> float:
    """Largest relative gap, over lattice h in [2^(-j-1), 2^-j], between ||Delta_h^M f||_p on
    level j's window with every level of f sampled there and the same norm from level j alone."""
    level = function.level(j)
    grid = level.grid
    coords = grid.coordinates()
    values = sum(bump(b.center, b.radius, b.amplitude)(coords) for b in function.levels)
    full = grid.with_values(values)
    worst = 0.0
    for k in range(function.cells // 2, function.cells + 1):
        shift = LatticeShift((k,), grid.spacing)
        alone = diff_lp_norm(grid, shift, function.M, function.p)
        together = diff_lp_norm(full, shift, function.M, function.p)
        if together > 0:
            worst = max(worst, abs(together - alone) / together)
    log.debug("level %d isolation gap %.3g", j, worst)
    return worst


# --- Concentrating sequences ---

def _power_of_two_spacing(target: float) -> float:
    return 2.0 ** math.floor(math.log2(target))


def noncompact_sequence(M: int, s: float, p: float, n: int, box=NONCOMPACT_BOX) -> GridFunction:
    """f_n(x) = lam^(1/p) Phi(lam x) with lam = n^((M-s)/M) and Phi the unit bump.

    The spacing is the power of two at or below 1/(256 lam), so the members of a
    sequence live on nested lattices.
    """
    M = check_order(M)
    if not 0 < s < M:
        raise PreconditionError(f"noncompact_sequence needs 0 < s < M, got s={s}, M={M}")
    if n < 1:
        raise PreconditionError(f"n must be a positive integer, got {n}")
    lam = n ** ((M - s) / M)
    spacing = _power_of_two_spacing(1.0 / (256.0 * lam))
    return make_grid_function(bump(0.0, 1.0 / lam, lam ** (1.0 / p)), box, spacing)


def noncompact_sweep(M: int = 1, s: float = 0.5, p: float = 2.0, ns=(1, 4, 16, 64, 256)) -> pd.DataFrame:
    """Per n: spacing, ||f_n||_p, and int rho_n(h) ||Delta_h^M f_n||_p^p / |h|^(sp) dh with rho_n
    the uniform kernel at eps = 1/n."""
    family = kernel_family_from_spec('uniform(r=1)')
    spec = SemiNormSpec(s, p, p, M)
    rows = []
    for n in ns:
        f = noncompact_sequence(M, s, p, n)
        value = d_omega(f, family, 1.0 / n, power(p), spec).value
        rows.append({'n': n, 'spacing': f.spacing, 'norm': lp_norm(f, p), 'functional': value})
    return pd.DataFrame(rows)


def noncompact_besov_sequence(M: int, s: float, p: float, q: float, gamma: float, n: int):
    """(f_n, rho_n): f_n(x) = lam^(1/p) Phi_R(lam x) with lam = n^(gamma/M), rho_n the mspow kernel.

    Phi_R is the bump of radius 16, so |h| <= 1 stays in the polynomial regime of
    Delta_h^M f_n.
    """
    M = check_order(M)
    if not 0 <= gamma <= 1.0 / q + 1e-12:
        raise PreconditionError(f"gamma must lie in [0, 1/q] = [0, {1.0 / q:g}], got {gamma}")
    if not 0 < s < M:
        raise PreconditionError(f"noncompact_besov_sequence needs 0 < s < M, got s={s}, M={M}")
    lam = n ** (gamma / M)
    radius = BESOV_BUMP_RADIUS / lam
    spacing = _power_of_two_spacing(radius / 1024.0)
    generator = bump(0.0, radius, lam ** (1.0 / p))
    f = make_grid_function(generator, auto_box(generator, spacing, margin=M)[0], spacing, margin=M)
    kernel = kernel_family_from_spec('mspow()').instantiate(1.0 / n)
    return f, kernel


def noncompact_besov_sweep(M: int = 1, s: float = 0.5, p: float = 2.0, q: float = 2.0, gamma: float = 0.0,
                           ns=(4, 8, 16, 32, 64)) -> tuple[pd.DataFrame, float]:
    """Per n: ||f_n||_p and int_{B_1} rho_n(h) ||Delta_h^M f_n||_p^q / |h|^(sq) dh, plus the
    log-log slope of the functional in n."""
    family = kernel_family_from_spec('mspow()')
    spec = SemiNormSpec(s, p, q, M)
    rows = []
    for n in ns:
        f, _ = noncompact_besov_sequence(M, s, p, q, gamma, n)
        value = d_omega(f, family, 1.0 / n, power(q), spec).value
        rows.append({'n': n, 'norm': lp_norm(f, p), 'functional': value})
    frame = pd.DataFrame(rows)
    slope, _ = np.polyfit(np.log(frame['n']), np.log(frame['functional']), 1)
    log.info("noncompact besov gamma=%g: fitted exponent %.3f", gamma, slope)
    return frame, float(slope)


class ProbeResult(NamedTuple):
    distances: pd.DataFrame
    min_distance: float


def compactness_probe(sequence, region, p) -> ProbeResult:
    """Pairwise L^p distances on `region` after exact restriction to the coarsest lattice."""
    sequence = list(sequence)
    if len(sequence) < 2:
        raise PreconditionError("the compactness probe needs at least two functions")
    coarse = max(f.spacing for f in sequence)
    common = [f if f.spacing == coarse else f.restrict_to_lattice(coarse) for f in sequence]
    size = len(common)
    matrix = np.zeros((size, size))
    for a in range(size):
        for b in range(a + 1, size):
            matrix[a, b] = matrix[b, a] = lp_distance(common[a], common[b], p, region=region)
    off = matrix[~np.eye(size, dtype=bool)]
    return ProbeResult(pd.DataFrame(matrix), float(off.min()))
