# src/besovlab/findiff.py
# Author: besovlab maintainers
# Date: 17 October 2026
# Description: M-th order forward differences on the lattice of a grid function, their
#              L^p norms, and the cached per-shift difference profile that every
#              h-integral in besovlab is assembled from.
#
#   Delta_h^M f(x) = sum_{j=0}^{M} (-1)^(M-j) C(M,j) f(x + j h)
#
# Shifts are lattice vectors, so translation is an index shift. The operator is
# evaluated on a zero-padded array large enough to hold every translate, which
# makes the zero extension of f exact for any shift.

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import comb

from . import config
from .errors import MarginError, PreconditionError
from .gridfn import GridFunction, LpExponent, array_lp_norm

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LatticeShift:
    """A shift h = spacing * steps with integer steps (not all zero)."""

    steps: tuple
    spacing: float

    def __post_init__(self):
        steps = tuple(int(k) for k in np.atleast_1d(self.steps))
        if not any(steps):
            raise PreconditionError("a lattice shift needs at least one nonzero step")
        if not self.spacing > 0:
            raise PreconditionError(f"shift spacing must be positive, got {self.spacing}")
        object.__setattr__(self, 'steps', steps)

    @classmethod
    def along_axis(cls, length: float, spacing: float, dim: int = 1, axis: int = 0) -> 'LatticeShift':
        cells = length / spacing
        if abs(cells - round(cells)) > 1e-6:
            raise PreconditionError(f"shift {length} is not a multiple of the spacing {spacing}")
        steps = [0] * dim
        steps[axis] = int(round(cells))
        return cls(tuple(steps), spacing)

    @property
    def dim(self) -> int:
        return len(self.steps)

    @property
    def length(self) -> float:
        return self.spacing * math.sqrt(sum(k * k for k in self.steps))

    def __add__(self, other: 'LatticeShift') -> 'LatticeShift':
        return LatticeShift(tuple(a + b for a, b in zip(self.steps, other.steps)), self.spacing)

    def __sub__(self, other: 'LatticeShift') -> 'LatticeShift':
        return LatticeShift(tuple(a - b for a, b in zip(self.steps, other.steps)), self.spacing)

    def __neg__(self) -> 'LatticeShift':
        return LatticeShift(tuple(-k for k in self.steps), self.spacing)


def check_order(M: int) -> int:
    if int(M) != M or not 1 <= M <= config.MAX_ORDER:
        raise PreconditionError(f"difference order must be an integer in 1..{config.MAX_ORDER}, got {M}")
    return int(M)


def binomial_weights(M: int) -> np.ndarray:
    """Coefficients (-1)^(M-j) C(M,j) of f(x + j h), j = 0..M."""
    M = check_order(M)
    return np.array([(-1) ** (M - j) * comb(M, j, exact=True) for j in range(M + 1)], dtype=float)


def _check_shift(f: GridFunction, h: LatticeShift) -> None:
    if h.dim != f.dim:
        raise PreconditionError(f"{h.dim}-D shift applied to a {f.dim}-D grid function")
    if not math.isclose(h.spacing, f.spacing, rel_tol=1e-12):
        raise PreconditionError(f"shift spacing {h.spacing} is not the lattice spacing {f.spacing}")


def _difference_array(values: np.ndarray, steps, M: int) -> tuple[np.ndarray, tuple]:
    """Delta^M on the zero-padded lattice; returns the array and the leading pad per axis."""
    lo = tuple(M * max(k, 0) for k in steps)
    hi = tuple(M * max(-k, 0) for k in steps)
    out = np.zeros(tuple(n + a + b for n, a, b in zip(values.shape, lo, hi)))
    for j, c in enumerate(binomial_weights(M)):
        idx = tuple(slice(a - j * k, a - j * k + n) for a, k, n in zip(lo, steps, values.shape))
        out[idx] += c * values
    return out, lo


def forward_difference(f: GridFunction, h: LatticeShift, M: int, mode: str = 'strict') -> GridFunction:
    """Delta_h^M f on f's lattice.

    mode='strict' keeps f's box and requires the zero margin to cover M|h|
    (MarginError otherwise). mode='extend' grows the box by M|h| so nothing is
    cut off. mode='interior' keeps only the points x whose translates x + jh all
    lie in the box, without using the zero extension.
    """
    _check_shift(f, h)
    M = check_order(M)
    if mode == 'interior':
        ranges = [(max(0, -M * k), n - 1 - max(0, M * k)) for k, n in zip(h.steps, f.shape)]
        if any(stop - start < 1 for start, stop in ranges):
            raise MarginError(f"no interior points remain for M*|h| = {M * h.length:g}")
        out = np.zeros(tuple(stop - start + 1 for start, stop in ranges))
        for j, c in enumerate(binomial_weights(M)):
            out += c * f.values[tuple(slice(start + j * k, stop + j * k + 1)
                                      for (start, stop), k in zip(ranges, h.steps))]
        origin = tuple(o + start * f.spacing for o, (start, _) in zip(f.origin, ranges))
        return GridFunction(origin, f.spacing, out)

    out, lo = _difference_array(f.values, h.steps, M)
    if mode == 'extend':
        origin = tuple(o - a * f.spacing for o, a in zip(f.origin, lo))
        return GridFunction(origin, f.spacing, out)
    if mode != 'strict':
        raise PreconditionError(f"unknown difference mode {mode!r}")
    inner = tuple(slice(a, a + n) for a, n in zip(lo, f.shape))
    outside = np.ones(out.shape, dtype=bool)
    outside[inner] = False
    if np.any(out[outside] != 0.0):
        raise MarginError(
            f"zero margin of f does not cover {M}*|h| = {M * h.length:g}; "
            f"pad the box by at least {M * h.length:g} on every face or use mode='extend'")
    return GridFunction(f.origin, f.spacing, out[inner])


def diff_lp_norm(f: GridFunction, h: LatticeShift, M: int, p) -> float:
    """||Delta_h^M f||_p of the zero-extended function (exact on the lattice)."""
    _check_shift(f, h)
    out, _ = _difference_array(f.values, h.steps, check_order(M))
    return array_lp_norm(out, p, f.cell_volume)


def far_field_norm(f: GridFunction, M: int, p) -> float:
    """||Delta_h^M f||_p once the M+1 translates of f have disjoint supports."""
    p = LpExponent.of(p)
    weights = np.abs(binomial_weights(M))
    norm = array_lp_norm(f.values, p, f.cell_volume)
    if p.is_infinite:
        return float(weights.max() * norm)
    return float(np.sum(weights ** p.value) ** (1.0 / p.value) * norm)


# --- Lemma constants ---

# sup of ||D_{h1+h2}^2 f||_2 / (||D_{h1} f||_2 + ||D_{h2} f||_2) over lattice f and steps
ITERATED_L2_SUPREMUM = 2.0


def iterated_difference_constant(M: int) -> float:
    """Frozen C(M) with ||D_{h1+h2}^{2M} f|| <= C(M) (||D_{h1}^M f|| + ||D_{h2}^M f||).

    Writing tau_h - I = tau_{h1}(tau_{h2} - I) + (tau_{h1} - I) and expanding the
    2M-th power, every term holds an M-th power of one of the two differences and
    the remaining factors have operator norm at most 2.

    The attainable ratio sits far below: for p = 2 and M = 1 the
    lattice supremum is ITERATED_L2_SUPREMUM = 2, approached by an alternating
    mode with one even and one odd step. For M = 2 a single frequency already
    reaches 128/27, against the frozen 64.
    """
    return 8.0 ** check_order(M)


def order_reduction_constant(s: float, M: int) -> float:
    """Frozen C(s,M) with sup ||D^M f||/|h|^s <= C(s,M) sup ||D^{2M} f||/|h|^s, s < M."""
    M = check_order(M)
    if not 0 < s < M:
        raise PreconditionError(f"order reduction needs 0 < s < M, got s={s}, M={M}")
    return math.prod((m / 2.0) / (1.0 - 2.0 ** (s - m)) for m in range(M, 2 * M))


def max_iterated_ratio(f: GridFunction, pairs, M: int, p) -> float:
    """Largest ||D_{h1+h2}^{2M} f|| / (||D_{h1}^M f|| + ||D_{h2}^M f||) over shift pairs."""
    best = 0.0
    for h1, h2 in pairs:
        denominator = diff_lp_norm(f, h1, M, p) + diff_lp_norm(f, h2, M, p)
        if denominator > 0.0:
            best = max(best, diff_lp_norm(f, h1 + h2, 2 * M, p) / denominator)
    return best


# --- Shift enumeration and the cached difference profile ---

def lattice_shifts(dim: int, reach: int, min_length: float = 1.0) -> np.ndarray:
    """Lattice steps with min_length <= |k| <= reach + 1/2, one per +/- pair.

    The representative is the one whose first nonzero component is positive;
    ||Delta_{-h}^M f||_p = ||Delta_h^M f||_p makes the other redundant.
    """
    if dim == 1:
        return np.arange(max(1, math.ceil(min_length - 0.5)), reach + 1)[:, None]
    axes = np.meshgrid(*[np.arange(-reach, reach + 1)] * dim, indexing='ij')
    steps = np.stack([a.ravel() for a in axes], axis=1)
    lengths = np.sqrt(np.sum(steps * steps, axis=1))
    first = np.zeros(len(steps), dtype=int)
    for axis in reversed(range(dim)):
        first = np.where(steps[:, axis] != 0, steps[:, axis], first)
    keep = (first > 0) & (lengths <= reach + 0.5) & (np.rint(lengths) >= min_length)
    return steps[keep]


@dataclass(frozen=True)
class HQuadrature:
    """Sampling policy of the singular h-integrals.

    Radial bins have width one spacing and are grouped into dyadic shells
    h_max * 2^-j for reporting. In 1D every lattice shift is used. In higher
    dimensions each shell keeps at least `samples_per_shell` directions, spread
    evenly in angle. Below `inner_cutoff_cells` spacings the integrand is
    replaced by the power model fitted at the cutoff.
    """

    samples_per_shell: int = config.SAMPLES_PER_SHELL
    inner_cutoff_cells: int = 1
    shell_ratio: float = config.SHELL_RATIO
    max_reach_cells: int | None = None

    def __post_init__(self):
        if self.inner_cutoff_cells < 1:
            raise PreconditionError("the inner h-cutoff cannot be below one lattice spacing")
        if self.shell_ratio <= 1.0:
            raise PreconditionError(f"shell ratio must exceed 1, got {self.shell_ratio}")
        if self.samples_per_shell < 1:
            raise PreconditionError("each shell needs at least one sampled shift")


DEFAULT_QUADRATURE = HQuadrature()


def evaluate_shifts(f: GridFunction, steps: np.ndarray, M: int,
                    reducer: Callable[[np.ndarray, float], float]) -> np.ndarray:
    """reducer(Delta_h^M f, |h|) for every row of `steps`, in row order.

    Shifts are independent; with more than one configured thread they are spread
    over a thread pool and collected in submission order.
    """
    check_order(M)
    rows = [tuple(int(k) for k in row) for row in steps]
    spacing, values = f.spacing, f.values

    def one(row):
        out, _ = _difference_array(values, row, M)
        return reducer(out, spacing * math.sqrt(sum(k * k for k in row)))

    threads = config.get_threads()
    if threads > 1 and len(rows) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, rows))
    else:
        results = [one(row) for row in rows]
    return np.asarray(results, dtype=float)


def _sample_shifts(dim: int, reach: int, quad: HQuadrature) -> np.ndarray:
    cutoff = quad.inner_cutoff_cells
    steps = lattice_shifts(dim, reach, min_length=cutoff)
    if dim == 1:
        return steps
    lengths = np.sqrt(np.sum(steps * steps, axis=1))
    bins = np.rint(lengths).astype(int)
    shells = np.floor(np.log(reach / lengths) / math.log(quad.shell_ratio) + 1e-9).astype(int)
    chosen = []
    for shell in np.unique(shells):
        shell_bins = np.unique(bins[shells == shell])
        per_bin = max(1, math.ceil(quad.samples_per_shell / len(shell_bins)))
        for m in shell_bins:
            members = np.flatnonzero(bins == m)
            angles = np.arctan2(steps[members, 1], steps[members, 0])
            members = members[np.argsort(angles, kind='stable')]
            if len(members) > per_bin:
                members = members[np.unique(np.rint(np.linspace(0, len(members) - 1, per_bin)).astype(int))]
            chosen.extend(members.tolist())
    return steps[np.sort(np.array(chosen))]


@dataclass(frozen=True, eq=False)
class DifferenceProfile:
    """||Delta_h^M f||_p on the sampled lattice shifts, plus the near/far models.

    `reach` is the largest sampled |k| in lattice units. Beyond the support
    diameter the translates are disjoint and the norm equals `far_field`
    (`far_exact`). Below the inner cutoff the norm follows
    `core_value * (|h| / r_cut)^core_exponent`.
    """

    spacing: float
    dim: int
    M: int
    p: LpExponent
    steps: np.ndarray
    lengths: np.ndarray
    bins: np.ndarray
    norms: np.ndarray
    reach: int
    far_field: float
    far_exact: bool
    core_exponent: float
    core_value: float
    cutoff: int
    shell_ratio: float

    @property
    def h_max(self) -> float:
        return self.reach * self.spacing

    @property
    def outer_radius(self) -> float:
        return (self.reach + 0.5) * self.spacing

    @property
    def core_radius(self) -> float:
        return (self.cutoff - 0.5) * self.spacing

    def shell_index(self, lengths: np.ndarray) -> np.ndarray:
        ratio = np.log(self.h_max / np.asarray(lengths)) / math.log(self.shell_ratio)
        return np.floor(ratio + 1e-9).astype(int)

    def bin_edges(self, bins: np.ndarray, width: int = 1) -> tuple[np.ndarray, np.ndarray]:
        half = 0.5 * width
        return (bins - half) * self.spacing, (bins + half) * self.spacing

    def bin_means(self, values: np.ndarray, mask: np.ndarray | None = None):
        """(bin ids, representative radii, mean values) over the sampled shifts."""
        bins, lengths = self.bins, self.lengths
        if mask is not None:
            bins, lengths, values = bins[mask], lengths[mask], values[mask]
        ids, inverse, counts = np.unique(bins, return_inverse=True, return_counts=True)
        radii = np.bincount(inverse, weights=lengths) / counts
        means = np.bincount(inverse, weights=values) / counts
        return ids, radii, means

    def model_norm(self, r: np.ndarray) -> np.ndarray:
        r_cut = self.cutoff * self.spacing
        return self.core_value * (np.asarray(r) / r_cut) ** self.core_exponent


def _core_model(lengths, bins, norms, cutoff: int, M: int) -> tuple[float, float]:
    first = norms[bins == cutoff]
    second = norms[bins == 2 * cutoff]
    g1 = float(first.mean()) if first.size else 0.0
    if g1 == 0.0 or second.size == 0:
        return float(M), g1
    g2 = float(second.mean())
    r1 = float(lengths[bins == cutoff].mean())
    r2 = float(lengths[bins == 2 * cutoff].mean())
    exponent = math.log(max(g2, 1e-300) / g1) / math.log(r2 / r1)
    if abs(exponent - M) <= 0.05:
        exponent = float(M)
    return min(max(exponent, 0.0), float(M)), g1


@lru_cache(maxsize=32)
def difference_profile(f: GridFunction, M: int, p, quad: HQuadrature = DEFAULT_QUADRATURE) -> DifferenceProfile:
    """Evaluates ||Delta_h^M f||_p over the sampled lattice shifts (cached per f object)."""
    M = check_order(M)
    p = LpExponent.of(p)
    cutoff = quad.inner_cutoff_cells
    diameter = f.support_diameter_cells()
    reach = max(diameter + 1, 2 * cutoff, 2)
    far_exact = True
    if quad.max_reach_cells is not None and reach > quad.max_reach_cells:
        reach = max(quad.max_reach_cells, 2 * cutoff)
        far_exact = False
        log.warning("shift reach capped at %d cells below the support diameter %d; far field is approximate",
                    reach, diameter)
    steps = _sample_shifts(f.dim, reach, quad)
    lengths = f.spacing * np.sqrt(np.sum(steps * steps, axis=1))
    order = np.argsort(lengths, kind='stable')
    steps, lengths = steps[order], lengths[order]
    bins = np.rint(lengths / f.spacing).astype(int)
    cell = f.cell_volume
    norms = evaluate_shifts(f, steps, M, lambda out, _r: array_lp_norm(out, p, cell))
    exponent, g1 = _core_model(lengths, bins, norms, cutoff, M)
    log.info("difference profile: M=%d p=%s, %d shifts up to %d cells, core exponent %.3f",
             M, p, len(steps), reach, exponent)
    return DifferenceProfile(
        spacing=f.spacing, dim=f.dim, M=M, p=p, steps=steps, lengths=lengths, bins=bins,
        norms=norms, reach=reach, far_field=far_field_norm(f, M, p), far_exact=far_exact,
        core_exponent=exponent, core_value=g1, cutoff=cutoff, shell_ratio=quad.shell_ratio,
    )
