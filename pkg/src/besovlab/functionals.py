# src/besovlab/functionals.py
# Author: besovlab maintainers
# Date: 17 October 2026
# Description: Besov and Nikol'skii semi-norms, the kernel-weighted functional
#              D_omega(rho_eps, f) and its inner-Omega variant, the convolution smoothing
#              functional, and the quarkonial sequence norm.
#
# Every h-integral is assembled from one DifferenceProfile (findiff.py): radial bins of
# width one spacing between the inner cutoff and the sampled reach, a power model for
# the core below the cutoff, and the exact far field beyond the reach.

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy.signal import convolve

from . import config
from .errors import NumericalError, PreconditionError
from .findiff import (DEFAULT_QUADRATURE, DifferenceProfile, HQuadrature, binomial_weights,
                      check_order, difference_profile, evaluate_shifts)
from .gridfn import GridFunction, LpExponent, lp_distance
from .kernels import Kernel, KernelFamily, sphere_area
from .omega import InnerOmega, OmegaFn, power

log = logging.getLogger(__name__)

# --- Configuration ---
TIE_TOLERANCE = 1e-12
CORE_SLACK = 0.05       # core exponents this close below s are treated as equal to s


@dataclass(frozen=True)
class SemiNormSpec:
    """Smoothness s, integrability p, summability q and difference order M.

    0 < s <= M; s = M is admitted for the Lipschitz and Sobolev scales, the
    Besov q-integral itself needs s < M.
    """

    s: float
    p: LpExponent
    q: LpExponent
    M: int = 1

    def __post_init__(self):
        object.__setattr__(self, 'p', LpExponent.of(self.p))
        object.__setattr__(self, 'q', LpExponent.of(self.q))
        object.__setattr__(self, 'M', check_order(self.M))
        if not (math.isfinite(self.s) and 0 < self.s <= self.M):
            raise PreconditionError(f"smoothness must satisfy 0 < s <= M, got s={self.s}, M={self.M}")


@dataclass(frozen=True, eq=False)
class FunctionalResult:
    """A computed quantity with its quadrature tolerance and diagnostics."""

    quantity: str
    value: float
    tolerance: float = 0.0
    argmax_length: float | None = None
    argmax_shell: int | None = None
    limsup: float | None = None
    core: float = 0.0
    tail: float = 0.0
    epsilon: float | None = None
    shells: pd.DataFrame | None = field(default=None, repr=False)


def _profile(f: GridFunction, M: int, p, quad: HQuadrature) -> DifferenceProfile:
    return difference_profile(f, M, LpExponent.of(p), quad)


def _pw(beta: float, x, y):
    """Integral of r^(beta - 1) over [x, y]."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if abs(beta) < 1e-12:
        return np.log(y / x)
    return (y ** beta - x ** beta) / beta


def _merge_pairs(ids, radii, means, lo, hi):
    group = (ids - ids[0]) // 2
    counts = np.bincount(group)
    merged_lo = np.full(counts.size, np.inf)
    merged_hi = np.zeros(counts.size)
    np.minimum.at(merged_lo, group, lo)
    np.maximum.at(merged_hi, group, hi)
    return (np.bincount(group, weights=radii) / counts, np.bincount(group, weights=means) / counts,
            merged_lo, merged_hi)


def _relative_change(fine: float, coarse: float) -> float:
    if fine == 0.0:
        return 0.0 if coarse == 0.0 else math.inf
    return abs(coarse - fine) / abs(fine)


def _check_finite(value: float, what: str) -> float:
    if not math.isfinite(value):
        raise NumericalError(f"{what} is not finite ({value})")
    return value


# --- Besov and Nikol'skii semi-norms ---

def _besov_bins(prof: DifferenceProfile, s: float, q: float, coarse: bool = False) -> tuple[np.ndarray, np.ndarray, float]:
    """Per-bin contributions to the q-th power, their radii, and the coarsened total."""
    sigma, a = sphere_area(prof.dim), prof.core_exponent
    ids, radii, means = prof.bin_means(prof.norms ** q)
    lo, hi = prof.bin_edges(ids)
    weights = sigma * means * radii ** (-a * q) * _pw((a - s) * q, lo, hi)
    c_radii, c_means, c_lo, c_hi = _merge_pairs(ids, radii, means, lo, hi)
    coarse_total = float(np.sum(sigma * c_means * c_radii ** (-a * q) * _pw((a - s) * q, c_lo, c_hi)))
    return weights, radii, coarse_total


def besov_seminorm(f: GridFunction, spec: SemiNormSpec, quad: HQuadrature = DEFAULT_QUADRATURE) -> FunctionalResult:
    """[f]_{B^s_{p,q}} = (int ||Delta_h^M f||_p^q |h|^(-N-sq) dh)^(1/q) for finite q."""
    if spec.q.is_infinite:
        raise PreconditionError("besov_seminorm needs finite q; use nikolskii_seminorm for q = inf")
    if spec.s >= spec.M:
        raise PreconditionError(f"the Besov integral needs s < M, got s={spec.s}, M={spec.M}")
    s, q = spec.s, spec.q.value
    prof = _profile(f, spec.M, spec.p, quad)
    sigma, a = sphere_area(prof.dim), prof.core_exponent

    weights, radii, coarse_bins = _besov_bins(prof, s, q)
    if prof.core_value == 0.0:
        core = 0.0
    elif a <= s:
        raise NumericalError(
            f"difference norms decay like |h|^{a:.3f} below the lattice, not faster than |h|^{s}; "
            f"the B^s_(p,q) integral diverges at h = 0")
    else:
        r_cut = prof.cutoff * prof.spacing
        core = sigma * prof.core_value ** q * r_cut ** (-a * q) * prof.core_radius ** ((a - s) * q) / ((a - s) * q)
    tail = sigma * prof.far_field ** q * prof.outer_radius ** (-s * q) / (s * q)
    if not prof.far_exact:
        log.warning("besov tail uses the disjoint-translate far field beyond a capped reach")

    total = float(np.sum(weights)) + core + tail
    value = _check_finite(total ** (1.0 / q), 'Besov semi-norm')
    coarse_value = (coarse_bins + core + tail) ** (1.0 / q)
    shells = _shell_frame(prof, s, contributions=(radii, weights))
    log.info("besov s=%g p=%s q=%s M=%d: %.6g (core %.3g, tail %.3g)", s, spec.p, spec.q, spec.M, value, core, tail)
    return FunctionalResult('besov', value, tolerance=_relative_change(value, coarse_value),
                            core=core, tail=tail, shells=shells)


def _argmax(values: np.ndarray) -> int:
    """First index within a relative TIE_TOLERANCE of the max (samples are sorted by |h|)."""
    top = values.max()
    return int(np.flatnonzero(values >= top * (1.0 - TIE_TOLERANCE))[0])


def nikolskii_seminorm(f: GridFunction, spec: SemiNormSpec, quad: HQuadrature = DEFAULT_QUADRATURE,
                       j0: int | None = None) -> FunctionalResult:
    """sup_h ||Delta_h^M f||_p / |h|^s over the sampled shifts, with the argmax shell.

    `limsup` is the same maximum restricted to shells j >= j0 (the three finest
    shells when j0 is None), the surrogate for the limsup as |h| -> 0.
    """
    s = spec.s
    prof = _profile(f, spec.M, spec.p, quad)
    quotients = prof.norms / prof.lengths ** s
    if prof.core_value > 0.0 and prof.core_exponent < s - CORE_SLACK:
        raise NumericalError(
            f"difference norms decay like |h|^{prof.core_exponent:.3f} below the lattice; "
            f"the quotient by |h|^{s} is unbounded as h -> 0")
    shells = prof.shell_index(prof.lengths)
    k = _argmax(quotients)
    value = float(quotients[k])

    if j0 is None:
        j0 = int(shells.max()) - 2
    fine = shells >= j0
    limsup = float(quotients[fine].max()) if np.any(fine) else 0.0
    even = prof.bins % 2 == 0
    coarse_value = float(quotients[even].max()) if np.any(even) else value
    log.info("nikolskii s=%g p=%s M=%d: %.6g at |h|=%.4g (shell %d), limsup(j>=%d) %.6g",
             s, spec.p, spec.M, value, prof.lengths[k], shells[k], j0, limsup)
    return FunctionalResult('nikolskii', _check_finite(value, "Nikol'skii semi-norm"),
                            tolerance=_relative_change(value, coarse_value),
                            argmax_length=float(prof.lengths[k]), argmax_shell=int(shells[k]),
                            limsup=limsup, shells=_shell_frame(prof, s))


def _shell_frame(prof: DifferenceProfile, s: float, contributions=None) -> pd.DataFrame:
    shells = prof.shell_index(prof.lengths)
    frame = pd.DataFrame({'j': shells, 'quotient': prof.norms / prof.lengths ** s, 'length': prof.lengths})
    table = frame.groupby('j', sort=True).agg(
        r_lo=('length', 'min'), r_hi=('length', 'max'), samples=('length', 'size'),
        max_quotient=('quotient', 'max'), mean_quotient=('quotient', 'mean'))
    if contributions is not None:
        radii, weights = contributions
        by_shell = pd.Series(weights, index=prof.shell_index(radii)).groupby(level=0).sum()
        table['contribution'] = by_shell.reindex(table.index, fill_value=0.0)
    return table.reset_index().sort_values('j', ascending=False, ignore_index=True)


def shell_report(f: GridFunction, spec: SemiNormSpec, quad: HQuadrature = DEFAULT_QUADRATURE) -> pd.DataFrame:
    """One row per dyadic shell: radius range, sample count, max/mean quotient and Besov share."""
    prof = _profile(f, spec.M, spec.p, quad)
    if spec.q.is_infinite or spec.s >= spec.M:
        return _shell_frame(prof, spec.s)
    weights, radii, _ = _besov_bins(prof, spec.s, spec.q.value)
    return _shell_frame(prof, spec.s, contributions=(radii, weights))


# --- Kernel-weighted functionals ---

def _instantiate(f: GridFunction, family: KernelFamily, eps: float, s: float) -> Kernel:
    """rho_eps, whose length scale must span MIN_KERNEL_CELLS lattice spacings."""
    kernel = family.instantiate(eps, s=s)
    if kernel.scale < config.MIN_KERNEL_CELLS * f.spacing * (1.0 - 1e-9):
        raise PreconditionError(
            f"{family.name} at eps = {eps:g} has length scale {kernel.scale:g}, below "
            f"{config.MIN_KERNEL_CELLS} lattice spacings ({f.spacing:g}); refine the grid or raise eps")
    return kernel


def _check_reach(prof: DifferenceProfile, kernel: Kernel) -> None:
    if prof.far_exact:
        return
    outside = kernel.mass_outside(prof.outer_radius)
    if outside > 1e-4:
        raise PreconditionError(
            f"kernel keeps mass {outside:.3g} beyond the sampled reach {prof.outer_radius:g} while the far "
            f"field is not exact; raise the shift reach to at least {kernel.effective_radius():g}")


def d_omega(f: GridFunction, family: KernelFamily, eps: float, omega: OmegaFn, spec: SemiNormSpec,
            quad: HQuadrature = DEFAULT_QUADRATURE) -> FunctionalResult:
    """int rho_eps(h) omega(||Delta_h^M f||_p / |h|^s) dh."""
    s = spec.s
    prof = _profile(f, spec.M, spec.p, quad)
    kernel = _instantiate(f, family, eps, s)
    _check_reach(prof, kernel)

    quotients = prof.norms / prof.lengths ** s
    cap = float(quotients.max()) if quotients.size else 0.0
    ids, radii, means = prof.bin_means(omega(quotients))
    lo, hi = prof.bin_edges(ids)
    weights = kernel.radial_mass(lo, hi) * means
    c_radii, c_means, c_lo, c_hi = _merge_pairs(ids, radii, means, lo, hi)
    coarse_bins = float(np.sum(kernel.radial_mass(c_lo, c_hi) * c_means))

    if prof.core_value > 0.0:
        core = kernel.radial_integral(
            lambda r: omega(np.minimum(prof.model_norm(r) / r ** s, cap)), 0.0, prof.core_radius)
    else:
        core = 0.0
    if prof.far_field > 0.0:
        tail = kernel.radial_integral(lambda r: omega(prof.far_field / r ** s), prof.outer_radius, math.inf)
    else:
        tail = 0.0

    value = _check_finite(float(np.sum(weights)) + core + tail, 'D_omega')
    tolerance = _relative_change(value, coarse_bins + core + tail)
    log.info("D_omega %s eps=%g omega=%s s=%g: %.6g (core %.3g, tail %.3g)",
             family.name, eps, omega.name, s, value, core, tail)
    return FunctionalResult('dfunc', value, tolerance=tolerance, core=core, tail=tail, epsilon=eps,
                            shells=_weight_frame(prof, radii, weights))


def _weight_frame(prof: DifferenceProfile, radii: np.ndarray, weights: np.ndarray) -> pd.DataFrame:
    frame = pd.DataFrame({'j': prof.shell_index(radii), 'contribution': weights})
    table = frame.groupby('j', sort=True)['contribution'].sum().reset_index()
    return table.sort_values('j', ascending=False, ignore_index=True)


def _far_inner_integral(f: GridFunction, inner: InnerOmega, M: int, s: float, r: np.ndarray) -> np.ndarray:
    """sum_j cell * sum_x Omega(|c_j f(x)| / r^s): the x-integral once translates are disjoint."""
    magnitudes = np.abs(f.values[f.values != 0.0])
    coefficients = np.abs(binomial_weights(M))
    r = np.asarray(r, dtype=float)
    flat = r.ravel()
    out = np.empty(flat.size)
    for start in range(0, flat.size, 256):
        scaled = magnitudes[None, :] / flat[start:start + 256, None] ** s
        out[start:start + 256] = sum(np.sum(inner(c * scaled), axis=1) for c in coefficients)
    return f.cell_volume * out.reshape(r.shape)


def d_omega_inner(f: GridFunction, family: KernelFamily, eps: float, omega: OmegaFn, inner: InnerOmega,
                  s: float, M: int, quad: HQuadrature = DEFAULT_QUADRATURE) -> FunctionalResult:
    """int rho_eps(h) omega(int Omega(|Delta_h^M f(x)| / |h|^s) dx) dh."""
    M = check_order(M)
    if not 0 < s <= M:
        raise PreconditionError(f"smoothness must satisfy 0 < s <= M, got s={s}, M={M}")
    prof = _profile(f, M, inner.p, quad)
    kernel = _instantiate(f, family, eps, s)
    _check_reach(prof, kernel)

    cell = f.cell_volume
    integrals = evaluate_shifts(f, prof.steps, M, lambda out, r: cell * float(np.sum(inner(np.abs(out) / r ** s))))
    cap = float(integrals.max()) if integrals.size else 0.0
    ids, radii, means = prof.bin_means(omega(integrals))
    lo, hi = prof.bin_edges(ids)
    weights = kernel.radial_mass(lo, hi) * means
    c_radii, c_means, c_lo, c_hi = _merge_pairs(ids, radii, means, lo, hi)
    coarse_bins = float(np.sum(kernel.radial_mass(c_lo, c_hi) * c_means))

    first = integrals[prof.bins == prof.cutoff]
    i1 = float(first.mean()) if first.size else 0.0
    if i1 > 0.0:
        r_cut, exponent = prof.cutoff * prof.spacing, (prof.core_exponent - s) * inner.p
        core = kernel.radial_integral(
            lambda r: omega(np.minimum(i1 * (r / r_cut) ** exponent, cap)), 0.0, prof.core_radius)
    else:
        core = 0.0
    if prof.far_field > 0.0:
        tail = kernel.radial_integral(lambda r: omega(_far_inner_integral(f, inner, M, s, r)),
                                      prof.outer_radius, math.inf)
    else:
        tail = 0.0

    value = _check_finite(float(np.sum(weights)) + core + tail, 'D_omega,Omega')
    log.info("D_omega,Omega %s eps=%g omega=%s Omega=%s: %.6g", family.name, eps, omega.name, inner.name, value)
    return FunctionalResult('dfunc_inner', value, tolerance=_relative_change(value, coarse_bins + core + tail),
                            core=core, tail=tail, epsilon=eps, shells=_weight_frame(prof, radii, weights))


# --- Smoothing functional ---

def lattice_weights(kernel: Kernel, spacing: float) -> np.ndarray:
    """Cell masses of rho on the lattice, centred array of odd side length, summing to 1."""
    top = kernel.r_outer if math.isfinite(kernel.r_outer) else kernel.effective_radius(1.0 - 1e-12)
    K = max(1, math.ceil(top / spacing + 0.5))
    if kernel.dim == 1:
        k = np.arange(-K, K + 1)
        if kernel.is_radial:
            a = np.abs(k)
            w = np.where(a == 0, kernel.radial_mass(0.0, 0.5 * spacing),
                         0.5 * kernel.radial_mass((a - 0.5) * spacing, (a + 0.5) * spacing))
        else:
            w = kernel.evaluate(k * spacing) * spacing
        return w / w.sum()
    axes = np.meshgrid(*[np.arange(-K, K + 1)] * kernel.dim, indexing='ij')
    r = spacing * np.sqrt(sum(a * a for a in axes))
    w = np.where(r > 0, kernel.radial_density(np.where(r > 0, r, spacing)), 0.0) * spacing ** kernel.dim
    centre = tuple([K] * kernel.dim)
    w0 = float(kernel.radial_mass(0.0, 0.5 * spacing))
    rest = w.sum()
    if rest > 0:
        w = w * (1.0 - w0) / rest
    w[centre] = w0
    return w / w.sum()


def smoothing_functional(f: GridFunction, family: KernelFamily, eps: float, s: float, p,
                         region=None) -> FunctionalResult:
    """||rho_eps * f - f||_p / eps^s for one eps (lattice convolution of the zero extension)."""
    p = LpExponent.of(p)
    if not s > 0:
        raise PreconditionError(f"smoothness must be positive, got {s}")
    kernel = _instantiate(f, family, eps, s)
    w = lattice_weights(kernel, f.spacing)
    K = w.shape[0] // 2
    smoothed = convolve(f.values, w, mode='full', method='auto')
    origin = tuple(o - K * f.spacing for o in f.origin)
    distance = lp_distance(GridFunction(origin, f.spacing, smoothed), f, p, region=region)
    value = _check_finite(distance / eps ** s, 'smoothing functional')
    log.info("smoothing %s eps=%g s=%g p=%s: %.6g", family.name, eps, s, p, value)
    return FunctionalResult('smoothing', value, epsilon=eps)


@dataclass(frozen=True)
class JensenCheck:
    lhs: float
    rhs: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs * (1.0 + config.QUADRATURE_TOLERANCE)


def jensen_check(f: GridFunction, family: KernelFamily, eps: float, s: float, p,
                 quad: HQuadrature = DEFAULT_QUADRATURE) -> JensenCheck:
    """(smoothing value)^p against int rho_eps(h) ||Delta_h f||_p^p / |h|^(sp) dh."""
    p = LpExponent.of(p)
    if p.is_infinite:
        raise PreconditionError("jensen_check needs finite p")
    if not family.is_radial:
        raise PreconditionError("jensen_check needs an even kernel")
    lhs = smoothing_functional(f, family, eps, s, p).value ** p.value
    rhs = d_omega(f, family, eps, power(p.value), SemiNormSpec(s, p, p, 1), quad).value
    return JensenCheck(lhs, rhs)


# --- Lipschitz constant and sequence norms ---

def lipschitz_constant(f: GridFunction) -> float:
    """max over lattice neighbours of |f(x + e_i) - f(x)| / spacing, zero extension included."""
    padded = np.pad(f.values, 1)
    return float(max(np.abs(np.diff(padded, axis=a)).max() for a in range(f.dim)) / f.spacing)


def quark_sequence_norm(coefficients: dict, rho: float, p, q) -> float:
    """sup_beta 2^(rho|beta|) (sum_nu (sum_m |lambda^beta_{nu,m}|^p)^(q/p))^(1/q).

    `coefficients` maps (beta, nu, m) to lambda; beta may be an integer or a
    tuple of nonnegative integers. Max replaces the sums for p or q = inf.
    """
    p, q = LpExponent.of(p), LpExponent.of(q)
    grouped: dict = {}
    for (beta, nu, m), lam in coefficients.items():
        grouped.setdefault(beta, {}).setdefault(nu, []).append(abs(float(lam)))

    def lp(values, e: LpExponent) -> float:
        if not values:
            return 0.0
        if e.is_infinite:
            return max(values)
        return math.fsum(v ** e.value for v in values) ** (1.0 / e.value)

    best = 0.0
    for beta, by_nu in grouped.items():
        order = sum(beta) if isinstance(beta, tuple) else int(beta)
        inner = [lp(values, p) for _, values in sorted(by_nu.items())]
        best = max(best, 2.0 ** (rho * order) * lp(inner, q))
    return best
