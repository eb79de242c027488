# src/besovlab/kernels.py
# Author: besovlab maintainers
# Date: 17 October 2026
# Description: Mollifier kernels and kernel families. A kernel is stored through its
#              radial profile rho(r); masses, moments and the shell weights of the
#              h-integrals come from closed-form cumulative masses where available
#              and otherwise from a log-spaced midpoint rule with one Richardson step.
#              Also holds the radialization and clip-and-stack constructions.

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from scipy.special import beta as beta_fn
from scipy.special import betainc, erf, gamma, gammainc

from . import config
from .errors import ConfigError, NumericalError, PreconditionError
from .specparse import SpecCall, as_call

log = logging.getLogger(__name__)

# --- Configuration ---
MASS_TOLERANCE = 1e-6
LOWER_DECADES = 12       # quadrature starts this many decades below the first feature
ANNULUS_SCAN = 64


def sphere_area(N: int) -> float:
    """Surface measure sigma_N of the unit sphere in R^N (sigma_1 = 2)."""
    return 2.0 * math.pi ** (N / 2.0) / gamma(N / 2.0)


def ball_volume(N: int) -> float:
    return sphere_area(N) / N


# --- Radial quadrature ---

def _log_midpoint(G: Callable, ua: float, ub: float, panels: int) -> float:
    h = (ub - ua) / panels
    mids = ua + h * (np.arange(panels) + 0.5)
    return float(h * np.sum(G(mids)))


def _segment(G: Callable, a: float, b: float) -> float:
    ua, ub = math.log(a), math.log(b)
    panels = max(8, math.ceil(config.NODES_PER_DECADE * (ub - ua) / math.log(10.0)))
    coarse = _log_midpoint(G, ua, ub, panels)
    fine = _log_midpoint(G, ua, ub, 2 * panels)
    return (4.0 * fine - coarse) / 3.0


def _power_end(G: Callable, u_end: float, direction: float) -> float:
    """Integral of G beyond u_end, with G modelled as an exponential in u = ln r."""
    d = math.log(10.0) / config.NODES_PER_DECADE
    u1, u2 = u_end + 0.5 * d * direction, u_end + 1.5 * d * direction
    g1, g2 = float(G(np.array([u1]))[0]), float(G(np.array([u2]))[0])
    if g1 <= 0.0 or g2 <= 0.0:
        return 0.0
    rate = (math.log(g2) - math.log(g1)) / (u2 - u1)
    if direction * rate >= -1e-12:
        where = 'origin' if direction < 0 else 'infinity'
        raise NumericalError(f"radial integrand is not integrable at {where} (local exponent {rate:.4g})")
    return g1 * math.exp(-rate * (u1 - u_end)) / abs(rate)


def integrate_log_radial(F: Callable, lo: float, hi: float, breakpoints=(), ref: float = 1.0,
                         cut: float | None = None) -> float:
    """Integral over [lo, hi] of F(r) dr / r on log-spaced midpoints.

    lo = 0 and hi = inf are allowed; the missing ends are closed with a power
    model fitted at the last two nodes.
    """
    if not hi > lo:
        return 0.0

    def G(u):
        return F(np.exp(u))

    a = lo if lo > 0 else ref * 10.0 ** (-LOWER_DECADES)
    if math.isinf(hi):
        b = max(cut if cut is not None else ref * 1e8, 1e3 * a)
    else:
        b = hi
    if not b > a:
        return 0.0
    points = sorted({a, b, *[bp for bp in breakpoints if a < bp < b]})
    total = sum(_segment(G, x, y) for x, y in zip(points[:-1], points[1:]))
    if lo <= 0:
        total += _power_end(G, math.log(a), -1.0)
    if math.isinf(hi):
        total += _power_end(G, math.log(b), 1.0)
    return total


# --- Kernels ---

@dataclass(frozen=True, eq=False)
class Kernel:
    """A nonnegative unit-mass kernel on R^dim, described by its radial profile.

    `profile(r)` is the density at |h| = r. Non-radial 1D kernels also carry
    `axial`, the density at signed h. Their profile is the even part, which is
    all that the h-integrals of even integrands see.
    """

    name: str
    dim: int
    profile: Callable = field(repr=False)
    r_inner: float = 0.0
    r_outer: float = math.inf
    breakpoints: tuple = ()
    cumulative: Callable | None = field(default=None, repr=False)
    antiderivative: Callable | None = field(default=None, repr=False)
    tail_exponent: float | None = None
    is_radial: bool = True
    axial: Callable | None = field(default=None, repr=False)
    scale: float = 1.0
    cut: float | None = None
    params: dict = field(default_factory=dict)

    @property
    def sigma(self) -> float:
        return sphere_area(self.dim)

    def radial_density(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        inside = (r >= self.r_inner) & (r <= self.r_outer)
        with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
            values = np.where(inside, self.profile(np.where(inside, r, self.scale)), 0.0)
        return values

    def evaluate(self, h) -> np.ndarray:
        """Density at h (scalars or arrays for dim 1, trailing axis of size dim otherwise)."""
        h = np.asarray(h, dtype=float)
        if self.dim == 1:
            if self.axial is not None:
                return self.axial(h)
            return self.radial_density(np.abs(h))
        return self.radial_density(np.sqrt(np.sum(h * h, axis=-1)))

    def radial_integral(self, fn: Callable | None = None, r1: float = 0.0, r2: float = math.inf) -> float:
        """Integral of rho(h) fn(|h|) over r1 < |h| < r2."""
        lo, hi = max(r1, self.r_inner), min(r2, self.r_outer)
        if not hi > lo:
            return 0.0
        N, sigma = self.dim, self.sigma

        def F(r):
            values = sigma * r ** N * self.radial_density(r)
            return values if fn is None else values * fn(r)

        return integrate_log_radial(F, lo, hi, self.breakpoints, ref=self._reference_radius(), cut=self.cut)

    def _reference_radius(self) -> float:
        positive = [b for b in (*self.breakpoints, self.r_inner, self.r_outer) if 0 < b < math.inf]
        return min(positive) if positive else self.scale

    def radial_mass(self, r1, r2) -> np.ndarray:
        """Mass of the shells r1 < |h| < r2 (vectorized)."""
        r1, r2 = np.broadcast_arrays(np.asarray(r1, dtype=float), np.asarray(r2, dtype=float))
        if self.cumulative is not None:
            upper = self.cumulative(np.clip(r2, 0.0, self.r_outer))
            lower = self.cumulative(np.clip(r1, 0.0, self.r_outer))
            return np.maximum(np.asarray(upper - lower, dtype=float), 0.0)
        return np.array([self.radial_integral(None, a, b) for a, b in zip(r1.ravel(), r2.ravel())]).reshape(r1.shape)

    def mass(self) -> float:
        if self.cumulative is not None:
            return float(self.cumulative(np.array(self.r_outer if math.isfinite(self.r_outer) else 1e300)))
        return self.radial_integral()

    def quadrature_mass(self) -> float:
        return self.radial_integral()

    def mass_outside(self, delta: float) -> float:
        if self.cumulative is not None:
            return float(max(0.0, 1.0 - self.cumulative(np.array(min(delta, self.r_outer)))))
        return self.radial_integral(None, delta, math.inf)

    def moment(self, alpha: float) -> float:
        """Integral of rho(z)|z|^alpha; +inf when a power-law tail makes it diverge."""
        if alpha < 0:
            raise PreconditionError(f"moment order must be nonnegative, got {alpha}")
        if self.tail_exponent is not None and alpha >= self.tail_exponent:
            return math.inf
        if alpha == 0:
            return self.quadrature_mass()
        return self.radial_integral(lambda r: r ** alpha)

    def effective_radius(self, fraction: float = 0.9999) -> float:
        """Smallest radius holding `fraction` of the mass (log bisection)."""
        lo = max(self.r_inner, self._reference_radius() * 1e-12)
        hi = self.r_outer if math.isfinite(self.r_outer) else (self.cut or self.scale * 1e8)
        if self.mass_outside(lo) <= 1.0 - fraction:
            return lo
        for _ in range(100):
            mid = math.sqrt(lo * hi)
            if self.mass_outside(mid) > 1.0 - fraction:
                lo = mid
            else:
                hi = mid
        return hi

    def scaled(self, eps: float) -> 'Kernel':
        """rho_eps(h) = eps^-N rho(h / eps)."""
        if not eps > 0:
            raise PreconditionError(f"kernel scale must be positive, got {eps}")
        N, base = self.dim, self
        cumulative = antiderivative = axial = None
        if base.cumulative is not None:
            def cumulative(r):
                return base.cumulative(np.asarray(r) / eps)
        if base.antiderivative is not None:
            def antiderivative(t):
                return eps ** (1 - N) * base.antiderivative(np.asarray(t) / eps)
        if base.axial is not None:
            def axial(h):
                return base.axial(np.asarray(h) / eps) / eps ** N
        return replace(
            self,
            profile=lambda r: base.profile(r / eps) / eps ** N,
            r_inner=base.r_inner * eps, r_outer=base.r_outer * eps,
            breakpoints=tuple(b * eps for b in base.breakpoints),
            cumulative=cumulative, antiderivative=antiderivative, axial=axial,
            scale=base.scale * eps, cut=None if base.cut is None else base.cut * eps,
            params={**base.params, 'eps': eps},
        )


def _check_unit_mass(kernel: Kernel) -> Kernel:
    mass = kernel.quadrature_mass()
    if not abs(mass - 1.0) <= MASS_TOLERANCE:
        raise NumericalError(f"kernel {kernel.name} has mass {mass:.9f}, expected 1 within {MASS_TOLERANCE}")
    return kernel


def normalized(kernel: Kernel) -> Kernel:
    """Divides the profile by the computed mass."""
    mass = kernel.quadrature_mass()
    if not (math.isfinite(mass) and mass > 0):
        raise NumericalError(f"kernel {kernel.name} has non-positive or infinite mass {mass}")
    base = kernel
    cumulative = antiderivative = axial = None
    if base.cumulative is not None:
        def cumulative(r):
            return base.cumulative(r) / mass
    if base.antiderivative is not None:
        def antiderivative(t):
            return base.antiderivative(t) / mass
    if base.axial is not None:
        def axial(h):
            return base.axial(h) / mass
    return replace(kernel, profile=lambda r: base.profile(r) / mass, cumulative=cumulative,
                   antiderivative=antiderivative, axial=axial)


# --- Built-in profiles ---

def piecewise_constant(name: str, dim: int, lows, highs, heights, params: dict | None = None) -> Kernel:
    """Radial kernel equal to heights[j] on (lows[j], highs[j]] (closed at 0), normalized."""
    lows, highs, heights = (np.asarray(v, dtype=float) for v in (lows, highs, heights))
    sigma_over_n = sphere_area(dim) / dim
    total = float(np.sum(heights * sigma_over_n * (highs ** dim - lows ** dim)))
    weights = heights / total

    def profile(r):
        r = np.asarray(r, dtype=float)
        values = np.zeros(r.shape)
        for lo, hi, w in zip(lows, highs, weights):
            values = values + w * (((r > lo) | ((lo == 0.0) & (r >= 0.0))) & (r <= hi))
        return values

    def cumulative(r):
        r = np.asarray(r, dtype=float)
        mass = np.zeros(r.shape)
        for lo, hi, w in zip(lows, highs, weights):
            mass = mass + w * sigma_over_n * (np.clip(r, lo, hi) ** dim - lo ** dim)
        return mass

    def antiderivative(t):
        t = np.asarray(t, dtype=float)
        value = np.zeros(t.shape)
        for lo, hi, w in zip(lows, highs, weights):
            value = value + w * (np.clip(t, lo, hi) - lo)
        return value

    edges = tuple(sorted({float(x) for x in (*lows, *highs) if x > 0}))
    return Kernel(name, dim, profile, r_inner=float(lows.min()), r_outer=float(highs.max()),
                  breakpoints=edges, cumulative=cumulative, antiderivative=antiderivative,
                  scale=float(highs.max()), params=dict(params or {}))


def uniform_kernel(dim: int = 1, r: float = 1.0) -> Kernel:
    if not r > 0:
        raise PreconditionError(f"uniform kernel radius must be positive, got {r}")
    return piecewise_constant('uniform', dim, [0.0], [r], [1.0], {'r': r})


def onesided_kernel(r: float = 1.0) -> Kernel:
    """1/r on (0, r] in 1D; not even, hence not radial."""
    kernel = piecewise_constant('onesided', 1, [0.0], [r], [1.0], {'r': r})
    return replace(kernel, is_radial=False, axial=lambda h: np.where((h > 0) & (h <= r), 1.0 / r, 0.0))


def gaussian_kernel(dim: int = 1, sigma: float = 1.0) -> Kernel:
    if not sigma > 0:
        raise PreconditionError(f"gaussian kernel width must be positive, got {sigma}")
    c = (2.0 * math.pi * sigma ** 2) ** (-dim / 2.0)
    return Kernel(
        'gaussian', dim,
        profile=lambda r: c * np.exp(-np.asarray(r) ** 2 / (2.0 * sigma ** 2)),
        cumulative=lambda r: gammainc(dim / 2.0, np.asarray(r) ** 2 / (2.0 * sigma ** 2)),
        antiderivative=lambda t: c * sigma * math.sqrt(math.pi / 2.0) * erf(np.asarray(t) / (sigma * math.sqrt(2.0))),
        scale=sigma, cut=40.0 * sigma, params={'sigma': sigma},
    )


def power_core_kernel(name: str, dim: int, beta: float, params: dict | None = None) -> Kernel:
    """beta / (sigma_N |z|^(N - beta)) on the unit ball; ball mass min(r, 1)^beta."""
    if not beta > 0:
        raise PreconditionError(f"{name} kernel needs a positive exponent, got {beta}")
    sigma = sphere_area(dim)

    def antiderivative(t):
        t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
        exponent = beta - dim + 1.0
        if exponent == 0.0:
            raise PreconditionError(f"{name} profile has a non-integrable radial antiderivative")
        return beta / sigma * t ** exponent / exponent

    return Kernel(
        name, dim,
        profile=lambda r: beta / (sigma * np.asarray(r) ** (dim - beta)),
        r_outer=1.0, breakpoints=(1.0,),
        cumulative=lambda r: np.clip(np.asarray(r, dtype=float), 0.0, 1.0) ** beta,
        antiderivative=antiderivative if beta - dim + 1.0 > 0 else None,
        params={'beta': beta, **(params or {})},
    )


def choice2_kernel(dim: int, eps: float) -> Kernel:
    """1 / (sigma_N ln 2 |h|^N) on eps < |h| < 2 eps."""
    sigma = sphere_area(dim)
    c = 1.0 / (sigma * math.log(2.0))

    def antiderivative(t):
        t = np.clip(np.asarray(t, dtype=float), eps, 2.0 * eps)
        if dim == 1:
            return c * np.log(t / eps)
        return c * (eps ** (1 - dim) - t ** (1 - dim)) / (dim - 1)

    return Kernel(
        'choice2', dim,
        profile=lambda r: c / np.asarray(r) ** dim,
        r_inner=eps, r_outer=2.0 * eps, breakpoints=(eps, 2.0 * eps),
        cumulative=lambda r: np.log(np.clip(np.asarray(r, dtype=float), eps, 2.0 * eps) / eps) / math.log(2.0),
        antiderivative=antiderivative, scale=eps, params={'eps': eps},
    )


def kpp_kernel(dim: int, s: float, q: float, J: str = 'uniform', sigma: float = 1.0) -> Kernel:
    """|z|^(sq) J(z), normalized, for J the unit uniform kernel or a Gaussian."""
    a = s * q
    area = sphere_area(dim)
    if J == 'uniform':
        c = (dim + a) / area
        return Kernel(
            'kpp', dim, profile=lambda r: c * np.asarray(r) ** a,
            r_outer=1.0, breakpoints=(1.0,),
            cumulative=lambda r: np.clip(np.asarray(r, dtype=float), 0.0, 1.0) ** (dim + a),
            params={'J': 'uniform', 's': s, 'q': q},
        )
    if J == 'gaussian':
        k = (dim + a) / 2.0
        c = 2.0 / (area * gamma(k) * (2.0 * sigma ** 2) ** k)
        return Kernel(
            'kpp', dim,
            profile=lambda r: c * np.asarray(r) ** a * np.exp(-np.asarray(r) ** 2 / (2.0 * sigma ** 2)),
            cumulative=lambda r: gammainc(k, np.asarray(r) ** 2 / (2.0 * sigma ** 2)),
            scale=sigma, cut=40.0 * sigma, params={'J': 'gaussian', 'sigma': sigma, 's': s, 'q': q},
        )
    raise ConfigError(f"kpp kernel supports J=uniform or J=gaussian, got {J!r}")


def powertail_kernel(dim: int = 1, a: float = 1.0) -> Kernel:
    """c / (1 + |z|)^(N + a); moments of order >= a diverge."""
    if not a > 0:
        raise PreconditionError(f"powertail exponent must be positive, got {a}")
    c = 1.0 / (sphere_area(dim) * beta_fn(dim, a))
    return Kernel(
        'powertail', dim,
        profile=lambda r: c / (1.0 + np.asarray(r)) ** (dim + a),
        cumulative=lambda r: betainc(dim, a, np.asarray(r, dtype=float) / (1.0 + np.asarray(r, dtype=float))),
        tail_exponent=a, cut=1e8, params={'a': a},
    )


def _antiderivative_table(kernel: Kernel) -> Callable:
    """Numerical R(t) = int_0^t rho(u) du on a dense log grid, linearly interpolated."""
    ref = kernel._reference_radius()
    top = kernel.r_outer if math.isfinite(kernel.r_outer) else (kernel.cut or ref * 1e8)
    lo = max(kernel.r_inner, ref * 10.0 ** (-LOWER_DECADES))
    points = sorted({lo, top, *[b for b in kernel.breakpoints if lo < b < top]})
    grid = np.unique(np.concatenate([
        np.geomspace(x, y, max(16, math.ceil(2048 * math.log10(y / x))))
        for x, y in zip(points[:-1], points[1:])]))
    dens = kernel.radial_density(grid)
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(grid))])
    if kernel.r_inner == 0.0:
        cum = cum + dens[0] * grid[0]

    def antiderivative(t):
        t = np.asarray(t, dtype=float)
        head = np.where(t < grid[0], kernel.radial_density(np.maximum(t, 0.0)) * t, 0.0) if kernel.r_inner == 0.0 else 0.0
        return np.where(t < grid[0], head, np.interp(t, grid, cum))

    return antiderivative


def radialize(kernel: Kernel, theta0: float) -> Kernel:
    """rho*(z) = C * mean over theta in [theta0, 1] of rho(theta z).

    C = (1 - theta0) / int_{theta0}^1 theta^-N d theta, so rho* keeps unit mass.
    The result carries the annulus on which its infimum is positive in
    params['annulus'] and that infimum in params['annulus_infimum'].
    """
    if not 0.0 < theta0 < 1.0:
        raise PreconditionError(f"theta0 must lie in (0, 1), got {theta0}")
    if not kernel.is_radial:
        raise PreconditionError(f"radialization needs a radial kernel, got {kernel.name}")
    N = kernel.dim
    weight = -math.log(theta0) if N == 1 else (theta0 ** (1 - N) - 1.0) / (N - 1)
    C = (1.0 - theta0) / weight
    R = kernel.antiderivative or _antiderivative_table(kernel)

    def profile(r):
        r = np.asarray(r, dtype=float)
        safe = np.maximum(r, 1e-300)
        values = C / ((1.0 - theta0) * safe) * (R(safe) - R(theta0 * safe))
        return np.maximum(values, 0.0)

    r_outer = kernel.r_outer / theta0 if math.isfinite(kernel.r_outer) else math.inf
    breaks = tuple(sorted({*kernel.breakpoints, *(b / theta0 for b in kernel.breakpoints)}))
    result = Kernel(f"radialize({kernel.name})", N, profile, r_inner=kernel.r_inner, r_outer=r_outer,
                    breakpoints=breaks, scale=kernel.scale,
                    cut=None if kernel.cut is None else kernel.cut / theta0,
                    params={'base': kernel.name, 'theta0': theta0})
    _check_unit_mass(result)

    annulus = _mass_carrying_annulus(kernel, theta0)
    if annulus is None:
        raise PreconditionError(
            f"radialize: no mass-carrying annulus [c1, c2] with c1 > c2*theta0 found in "
            f"{ANNULUS_SCAN} scanned annuli of {kernel.name}")
    c1, c2 = annulus
    lo, hi = c2, c1 / theta0
    infimum = float(result.radial_density(np.linspace(lo, hi, 257)).min())
    if not infimum > 0.0:
        raise PreconditionError(
            f"radialize: infimum of the output on [{lo:.6g}, {hi:.6g}] is {infimum:.3g}; "
            f"base annulus [{c1:.6g}, {c2:.6g}] carries mass {float(kernel.radial_mass(c1, c2)):.3g}")
    log.info("radialized %s with theta0=%g: infimum %.4g on [%.4g, %.4g]", kernel.name, theta0, infimum, lo, hi)
    return replace(result, params={**result.params, 'annulus': (lo, hi), 'annulus_infimum': infimum})


def _mass_carrying_annulus(kernel: Kernel, theta0: float) -> tuple[float, float] | None:
    ratio = min(2.0, 1.0 / math.sqrt(theta0))
    top = kernel.r_outer if math.isfinite(kernel.r_outer) else kernel.effective_radius(1.0 - 1e-9)
    for i in range(ANNULUS_SCAN):
        c2 = top * ratio ** (-i)
        c1 = c2 / ratio
        if float(kernel.radial_mass(c1, c2)) > 1e-12:
            return c1, c2
    return None


@dataclass(frozen=True, eq=False)
class ClipStack:
    """The stacked kernel eta, its level data and the radial minorant Phi."""

    kernel: Kernel
    levels: int
    thetas: tuple
    edges: tuple
    normalization: float
    r2: float
    alpha: float
    minorant_slope: float
    minorant_start: float
    trivial: bool

    def minorant(self, t) -> np.ndarray:
        """Phi(t) = Phi*(t) / c, continuous and nondecreasing, below eta on B_{r2}."""
        t = np.asarray(t, dtype=float)
        if self.trivial:
            rise = self.minorant_slope * np.clip(t - self.minorant_start, 0.0, None)
            return np.minimum(rise, self.alpha) * (t <= self.r2) / self.normalization
        return self.minorant_slope * np.clip(t - self.minorant_start, 0.0, None) * (t <= self.r2) / self.normalization


def clip_stack(r1: float, r2: float, alpha: float, dim: int = 1) -> ClipStack:
    """Clips rescaled copies alpha*theta_j^-N 1_(theta_j r1, theta_j r2] together.

    theta_j = (r1/r2)^j for j = 0..k with k the smallest integer above
    ln(1/5)/ln(r1/r2), so the copies tile (theta_k r1, r2] and cover
    [r2/5, r2). When r1 < r2/4 a single copy already works (k = 0).
    """
    if not (alpha > 0 and 0 < r1 < r2):
        raise PreconditionError(f"clip_stack needs alpha > 0 and 0 < r1 < r2, got r1={r1}, r2={r2}, alpha={alpha}")
    sigma_over_n = sphere_area(dim) / dim
    if r1 < r2 / 4.0:
        kernel = piecewise_constant('clipstack', dim, [r1], [r2], [alpha], {'r1': r1, 'r2': r2, 'alpha': alpha})
        c = alpha * sigma_over_n * (r2 ** dim - r1 ** dim)
        top = 0.5 * (r1 + r2 / 4.0)
        return ClipStack(kernel, 0, (1.0,), (r2, r1), c, r2, alpha,
                         minorant_slope=alpha / (top - r1), minorant_start=r1, trivial=True)

    ratio = r1 / r2
    k = math.floor(math.log(1.0 / 5.0) / math.log(ratio)) + 1
    edges = tuple(r2 * ratio ** j for j in range(k + 2))
    thetas = tuple(ratio ** j for j in range(k + 1))
    heights = [alpha * th ** (-dim) for th in thetas]
    kernel = piecewise_constant('clipstack', dim, edges[1:], edges[:-1], heights,
                                {'r1': r1, 'r2': r2, 'alpha': alpha, 'levels': k})
    c = alpha * sigma_over_n * (k + 1) * (r2 ** dim - r1 ** dim)
    return ClipStack(kernel, k, thetas, edges, c, r2, alpha,
                     minorant_slope=5.0 * alpha / (4.0 * r2), minorant_start=r2 / 5.0, trivial=False)


# --- Families ---

@dataclass(frozen=True, eq=False)
class KernelFamily:
    """rho_eps for eps > 0, by the scaling rule or by an explicit-in-eps rule.

    `factory(context)` builds the base kernel for the scaling rule;
    `factory(eps, context)` builds rho_eps directly for the explicit rule. The
    context carries the smoothness s for the kernels whose shape depends on it.
    """

    name: str
    dim: int
    rule: str
    factory: Callable = field(repr=False)
    is_radial: bool = True
    spec: str = ''
    concentrating: bool = True

    def base(self, **context) -> Kernel:
        if self.rule != 'scaling':
            return self.factory(1.0, context)
        return self.factory(context)

    def instantiate(self, eps: float, **context) -> Kernel:
        if not (math.isfinite(eps) and eps > 0):
            raise PreconditionError(f"eps must be positive, got {eps}")
        if self.rule == 'scaling':
            kernel = self.factory(context).scaled(eps)
        else:
            kernel = self.factory(eps, context)
        return _check_unit_mass(kernel)


def _need_s(context: dict, name: str) -> float:
    s = context.get('s')
    if s is None:
        raise PreconditionError(f"kernel family {name} depends on the smoothness s; pass s=...")
    return float(s)


def _imbnikol_base(dim: int, r: float, q: float):
    def build(context):
        s = _need_s(context, 'imbnikol')
        if not 0 <= r < s:
            raise PreconditionError(f"imbnikol kernel needs 0 <= r < s, got r={r}, s={s}")
        return power_core_kernel('imbnikol', dim, (s - r) * q, {'r': r, 'q': q, 's': s})
    return build


def _mspow(dim: int):
    def build(eps, context):
        n = max(1, int(round(1.0 / eps)))
        return power_core_kernel('mspow', dim, 1.0 / n, {'n': n, 'eps': eps})
    return build


def _family(call: SpecCall, dim: int) -> KernelFamily:
    name, args, kw = call.name, list(call.args), call.kw()

    def arg(i, key, default):
        if key in kw:
            return kw[key]
        return args[i] if i < len(args) else default

    spec = call.render()
    if name == 'uniform':
        r = arg(0, 'r', 1.0)
        return KernelFamily(name, dim, 'scaling', lambda ctx: uniform_kernel(dim, r), spec=spec)
    if name == 'gaussian':
        sigma = arg(0, 'sigma', 1.0)
        return KernelFamily(name, dim, 'scaling', lambda ctx: gaussian_kernel(dim, sigma), spec=spec)
    if name == 'choice2':
        return KernelFamily(name, dim, 'explicit', lambda eps, ctx: choice2_kernel(dim, eps), spec=spec)
    if name == 'imbnikol':
        return KernelFamily(name, dim, 'scaling', _imbnikol_base(dim, arg(0, 'r', 0.25), arg(1, 'q', 2.0)),
                            spec=spec)
    if name == 'kpp':
        J = arg(0, 'J', SpecCall('uniform'))
        J = as_call(J) if not isinstance(J, SpecCall) else J
        q = arg(1, 'q', 2.0)
        sigma = J.kw().get('sigma', J.args[0] if J.args else 1.0)
        return KernelFamily(name, dim, 'scaling',
                            lambda ctx: kpp_kernel(dim, _need_s(ctx, 'kpp'), q, J.name, sigma), spec=spec)
    if name == 'mspow':
        return KernelFamily(name, dim, 'explicit', _mspow(dim), spec=spec, concentrating=False)
    if name == 'powertail':
        a = arg(0, 'a', 1.0)
        return KernelFamily(name, dim, 'scaling', lambda ctx: powertail_kernel(dim, a), spec=spec)
    if name == 'onesided':
        if dim != 1:
            raise ConfigError("onesided kernels exist in 1D only")
        r = arg(0, 'r', 1.0)
        return KernelFamily(name, dim, 'scaling', lambda ctx: onesided_kernel(r), is_radial=False, spec=spec)
    if name == 'radialize':
        base = arg(0, 'base', None)
        if not isinstance(base, SpecCall):
            raise ConfigError("radialize needs a base kernel spec, e.g. radialize(uniform(r=1),0.5)")
        inner = _family(base, dim)
        theta0 = arg(1, 'theta0', 0.5)
        return KernelFamily(name, dim, 'scaling', lambda ctx: radialize(inner.base(**ctx), theta0),
                            is_radial=True, spec=spec, concentrating=inner.concentrating)
    if name == 'clipstack':
        r1, r2, alpha = arg(0, 'r1', 0.3), arg(1, 'r2', 1.0), arg(2, 'alpha', 1.0)
        return KernelFamily(name, dim, 'scaling', lambda ctx: clip_stack(r1, r2, alpha, dim).kernel, spec=spec)
    raise ConfigError(f"unknown kernel {name!r}")


def kernel_family_from_spec(spec: str | SpecCall, dim: int = 1) -> KernelFamily:
    """Parses `uniform(r=1)`, `gaussian(sigma=1)`, `choice2()`, `imbnikol(r=0.25,q=2)`,
    `kpp(J=uniform,q=2)`, `mspow()`, `powertail(a=1)`, `onesided(r=1)`,
    `radialize(base,theta0)` or `clipstack(r1,r2,alpha)`."""
    if not 1 <= dim <= 3:
        raise ConfigError(f"kernels exist in dimensions 1 to 3, got {dim}")
    try:
        return _family(as_call(spec), dim)
    except TypeError as exc:
        raise ConfigError(f"bad kernel arguments in {spec!r}: {exc}") from None
