# src/besovlab/gridfn.py
# Author: besovlab maintainers
# Date: 17 October 2026
# Description: Sampled functions on uniform lattices with zero extension outside the
#              sampled box, the closed-form generators used by every experiment, and
#              the rectangle-rule L^p machinery (norms, distances, text/CSV export).

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import pandas as pd

from .errors import ConfigError, MarginError, PreconditionError
from .specparse import SpecCall, as_call

log = logging.getLogger(__name__)

# --- Configuration ---
TEXT_FORMAT_TAG = 'gridfn v1'
LATTICE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class LpExponent:
    """An integrability exponent 1 <= p <= inf (math.inf encodes infinity)."""

    value: float

    def __post_init__(self):
        value = float(self.value)
        if math.isnan(value) or value < 1.0:
            raise PreconditionError(f"L^p exponent must satisfy 1 <= p <= inf, got {self.value}")
        object.__setattr__(self, 'value', value)

    @classmethod
    def of(cls, p) -> 'LpExponent':
        if isinstance(p, LpExponent):
            return p
        if isinstance(p, str):
            return cls.parse(p)
        return cls(p)

    @classmethod
    def parse(cls, text: str) -> 'LpExponent':
        token = text.strip().lower()
        if token in ('inf', 'infinity', '∞'):
            return cls(math.inf)
        try:
            return cls(float(token))
        except ValueError:
            raise ConfigError(f"cannot parse L^p exponent {text!r}") from None

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.value)

    def __float__(self) -> float:
        return self.value

    def __str__(self) -> str:
        return 'inf' if self.is_infinite else repr(self.value)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """A real function sampled on `origin + spacing * index`, zero outside its box.

    Instances are immutable: `values` is stored as a read-only float64 array in
    row-major axis order.
    """

    origin: tuple
    spacing: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        origin = tuple(float(o) for o in np.atleast_1d(self.origin))
        if not 1 <= values.ndim <= 3:
            raise PreconditionError(f"grid functions have dimension 1 to 3, got {values.ndim}")
        if len(origin) != values.ndim:
            raise PreconditionError(f"origin has {len(origin)} coordinates for a {values.ndim}-D grid")
        if not (math.isfinite(self.spacing) and self.spacing > 0):
            raise PreconditionError(f"spacing must be positive, got {self.spacing}")
        if min(values.shape) < 2:
            raise PreconditionError(f"every axis needs at least 2 samples, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise PreconditionError("grid function values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, 'origin', origin)
        object.__setattr__(self, 'spacing', float(self.spacing))
        object.__setattr__(self, 'values', values)

    @property
    def dim(self) -> int:
        return self.values.ndim

    @property
    def shape(self) -> tuple:
        return self.values.shape

    @property
    def cell_volume(self) -> float:
        return self.spacing ** self.dim

    def axis_coordinates(self, axis: int) -> np.ndarray:
        return self.origin[axis] + self.spacing * np.arange(self.shape[axis])

    def coordinates(self) -> list[np.ndarray]:
        return [self.axis_coordinates(a) for a in range(self.dim)]

    def box(self) -> list[tuple[float, float]]:
        return [(o, o + self.spacing * (n - 1)) for o, n in zip(self.origin, self.shape)]

    def with_values(self, values: np.ndarray) -> 'GridFunction':
        return GridFunction(self.origin, self.spacing, values)

    def scaled(self, c: float) -> 'GridFunction':
        return self.with_values(c * self.values)

    def support_indices(self) -> list[tuple[int, int]] | None:
        """Per-axis (first, last) index of the nonzero samples, None for the zero function."""
        nonzero = np.nonzero(self.values)
        if nonzero[0].size == 0:
            return None
        return [(int(idx.min()), int(idx.max())) for idx in nonzero]

    def support_diameter_cells(self) -> int:
        """Euclidean diameter of the nonzero index box, in lattice units (rounded up)."""
        support = self.support_indices()
        if support is None:
            return 0
        return int(math.ceil(math.sqrt(sum((hi - lo) ** 2 for lo, hi in support))))

    def restrict_to_lattice(self, spacing: float, anchor: float = 0.0) -> 'GridFunction':
        """Exact subsampling onto the coarser lattice `anchor + spacing * Z^dim`."""
        ratio = spacing / self.spacing
        factor = int(round(ratio))
        if factor < 1 or abs(ratio - factor) > LATTICE_TOLERANCE * max(1.0, ratio):
            raise PreconditionError(
                f"lattice with spacing {spacing} is not an exact coarsening of spacing {self.spacing}")
        slices = []
        for axis in range(self.dim):
            offset = (anchor - self.origin[axis]) / self.spacing
            if abs(offset - round(offset)) > 1e-6:
                raise PreconditionError("anchor is not a point of the fine lattice")
            start = int(round(offset)) % factor
            slices.append(slice(start, None, factor))
        values = self.values[tuple(slices)]
        origin = tuple(o + self.spacing * s.start for o, s in zip(self.origin, slices))
        return GridFunction(origin, spacing, values)

    # --- Serialization ---

    def to_text(self) -> str:
        header = (f"{TEXT_FORMAT_TAG} dim={self.dim} "
                  f"origin={','.join(repr(o) for o in self.origin)} "
                  f"spacing={self.spacing!r} shape={','.join(str(n) for n in self.shape)}")
        body = '\n'.join(repr(float(v)) for v in self.values.ravel())
        return f"{header}\n{body}\n"

    @classmethod
    def from_text(cls, text: str) -> 'GridFunction':
        lines = text.strip().splitlines()
        if not lines or not lines[0].startswith(TEXT_FORMAT_TAG):
            raise ConfigError("missing 'gridfn v1' header")
        try:
            fields = dict(item.split('=', 1) for item in lines[0][len(TEXT_FORMAT_TAG):].split())
            dim = int(fields['dim'])
            origin = tuple(float(v) for v in fields['origin'].split(','))
            spacing = float(fields['spacing'])
            shape = tuple(int(v) for v in fields['shape'].split(','))
            values = np.array([float(v) for v in lines[1:]])
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"malformed gridfn header or body: {exc}") from None
        if len(shape) != dim or values.size != math.prod(shape):
            raise ConfigError(f"gridfn body has {values.size} values for shape {shape}")
        return cls(origin, spacing, values.reshape(shape))

    def to_frame(self) -> pd.DataFrame:
        mesh = np.meshgrid(*self.coordinates(), indexing='ij')
        columns = {'x' if self.dim == 1 else f"x{a}": m.ravel() for a, m in enumerate(mesh)}
        columns['value'] = self.values.ravel()
        return pd.DataFrame(columns)

    def to_csv(self, path: str) -> None:
        self.to_frame().to_csv(path, index=False, lineterminator='\n')


# --- Generators ---

@dataclass(frozen=True)
class Generator:
    """A named closed-form 1D profile, extended to higher dimensions as a product."""

    name: str
    profile: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    support: tuple
    params: dict = field(default_factory=dict)

    def __call__(self, coords: Sequence[np.ndarray]) -> np.ndarray:
        mesh = np.meshgrid(*coords, indexing='ij')
        values = np.ones(mesh[0].shape)
        for axis_values in mesh:
            values = values * self.profile(axis_values)
        return self.params.get('amp', 1.0) * values

    def spec(self) -> str:
        args = ','.join(f"{k}={float(v)!r}" for k, v in self.params.items())
        return f"{self.name}({args})"


def _bump_profile(t: np.ndarray) -> np.ndarray:
    inside = np.abs(t) < 1.0
    safe = np.where(inside, t, 0.0)
    return np.where(inside, np.exp(1.0 - 1.0 / (1.0 - safe * safe)), 0.0)


def indicator(a: float = 0.0, b: float = 1.0, amp: float = 1.0) -> Generator:
    if not b > a:
        raise PreconditionError(f"indicator needs a < b, got [{a}, {b}]")
    tol = LATTICE_TOLERANCE * max(1.0, abs(a), abs(b))
    return Generator('indicator', lambda x: ((x >= a - tol) & (x <= b + tol)).astype(float),
                     (a, b), {'a': a, 'b': b, 'amp': amp})


def tent(c: float = 0.0, w: float = 1.0, amp: float = 1.0) -> Generator:
    return Generator('tent', lambda x: np.maximum(0.0, 1.0 - np.abs(x - c) / w),
                     (c - w, c + w), {'c': c, 'w': w, 'amp': amp})


def bump(c: float = 0.0, r: float = 1.0, amp: float = 1.0) -> Generator:
    """exp(1 - 1/(1 - t^2)) with t = (x - c)/r; peak value 1, smooth, not a polynomial."""
    return Generator('bump', lambda x: _bump_profile((x - c) / r),
                     (c - r, c + r), {'c': c, 'r': r, 'amp': amp})


def gaussian(c: float = 0.0, w: float = 1.0, cut: float = 6.0, amp: float = 1.0) -> Generator:
    """exp(-((x - c)/w)^2), truncated at |x - c| = cut*w (below 1e-15 for the default)."""
    return Generator('gaussian',
                     lambda x: np.where(np.abs(x - c) <= cut * w, np.exp(-((x - c) / w) ** 2), 0.0),
                     (c - cut * w, c + cut * w), {'c': c, 'w': w, 'cut': cut, 'amp': amp})


def ramp(w: float = 3.0, amp: float = 1.0) -> Generator:
    """Clipped ramp min(1, max(0, x)) closed back to zero on [w-1, w]; Lipschitz constant 1."""
    if w < 2.0:
        raise PreconditionError(f"ramp needs w >= 2, got {w}")
    return Generator('ramp', lambda x: np.clip(np.minimum(x, w - x), 0.0, 1.0),
                     (0.0, w), {'w': w, 'amp': amp})


def cosbump(c: float = 0.0, r: float = 1.0, amp: float = 1.0) -> Generator:
    return Generator('cosbump',
                     lambda x: np.where(np.abs(x - c) <= r, 0.5 * (1.0 + np.cos(np.pi * (x - c) / r)), 0.0),
                     (c - r, c + r), {'c': c, 'r': r, 'amp': amp})


GENERATORS = {
    'indicator': indicator,
    'tent': tent,
    'bump': bump,
    'gaussian': gaussian,
    'ramp': ramp,
    'cosbump': cosbump,
}


def generator_from_spec(spec: str | SpecCall) -> Generator:
    """Builds a generator from a spec such as `indicator(0,1)` or `bump(r=16)`."""
    call = as_call(spec)
    factory = GENERATORS.get(call.name)
    if factory is None:
        raise ConfigError(f"unknown function {call.name!r}; expected one of {sorted(GENERATORS)}")
    if any(isinstance(a, SpecCall) for a in call.args) or any(isinstance(v, SpecCall) for _, v in call.kwargs):
        raise ConfigError(f"function spec {call.render()!r} takes numeric arguments only")
    try:
        return factory(*call.args, **call.kw())
    except TypeError as exc:
        raise ConfigError(f"bad arguments for {call.name!r}: {exc}") from None


def _normalize_box(box, dim: int | None = None) -> list[tuple[float, float]]:
    if len(box) == 2 and np.isscalar(box[0]):
        box = [tuple(box)] * (dim or 1)
    box = [(float(lo), float(hi)) for lo, hi in box]
    for lo, hi in box:
        if not hi > lo:
            raise PreconditionError(f"box axis [{lo}, {hi}] is empty")
    return box


def auto_box(generator: Generator, spacing: float, margin: float = 0.0, dim: int = 1,
             pad_cells: int = 2) -> list[tuple[float, float]]:
    """Smallest lattice-aligned box (multiples of spacing) holding support plus margin."""
    a, b = generator.support
    lo = math.floor((a - margin) / spacing + LATTICE_TOLERANCE) - pad_cells
    hi = math.ceil((b + margin) / spacing - LATTICE_TOLERANCE) + pad_cells
    return [(lo * spacing, hi * spacing)] * dim


def make_grid_function(generator: Generator | str, box, spacing: float, margin: float = 0.0,
                       dim: int | None = None) -> GridFunction:
    """Samples a generator on `box` at `spacing` and verifies the zero margin."""
    if isinstance(generator, (str, SpecCall)):
        generator = generator_from_spec(generator)
    if not (math.isfinite(spacing) and spacing > 0):
        raise PreconditionError(f"spacing must be positive, got {spacing}")
    box = _normalize_box(box, dim)
    coords = []
    for lo, hi in box:
        cells = (hi - lo) / spacing
        if abs(cells - round(cells)) > LATTICE_TOLERANCE * max(1.0, cells):
            raise PreconditionError(f"spacing {spacing} does not divide the box extent [{lo}, {hi}]")
        coords.append(lo + spacing * np.arange(int(round(cells)) + 1))

    a, b = generator.support
    tol = LATTICE_TOLERANCE * max(1.0, abs(a), abs(b))
    for lo, hi in box:
        if a - margin < lo - tol or b + margin > hi + tol:
            raise MarginError(
                f"support [{a}, {b}] plus margin {margin} overflows box [{lo}, {hi}]; "
                f"need box within [{a - margin}, {b + margin}] at least")

    values = generator(coords)
    for axis, axis_coords in enumerate(coords):
        lo, hi = box[axis]
        face = (axis_coords < lo + margin - tol) | (axis_coords > hi - margin + tol)
        if np.any(np.take(values, np.nonzero(face)[0], axis=axis) != 0.0):
            raise MarginError(f"{generator.name} is nonzero within the margin on axis {axis}")
    log.info("sampled %s on %s at spacing %g (%d points)", generator.name, box, spacing, values.size)
    return GridFunction(tuple(lo for lo, _ in box), spacing, values)


# --- L^p machinery ---

def array_lp_norm(values: np.ndarray, p: LpExponent | float, cell_volume: float) -> float:
    """Rectangle-rule L^p norm of lattice samples with the given cell volume."""
    p = LpExponent.of(p)
    if values.size == 0:
        return 0.0
    magnitude = np.abs(values)
    if p.is_infinite:
        return float(magnitude.max())
    if p.value == 1.0:
        return float(cell_volume * magnitude.sum())
    if p.value == 2.0:
        return float(math.sqrt(cell_volume * np.sum(magnitude * magnitude)))
    return float((cell_volume * np.sum(magnitude ** p.value)) ** (1.0 / p.value))


def lp_norm(f: GridFunction, p: LpExponent | float) -> float:
    return array_lp_norm(f.values, p, f.cell_volume)


def _lattice_offset(f: GridFunction, g: GridFunction) -> tuple[int, ...]:
    if f.dim != g.dim:
        raise PreconditionError(f"grid functions of dimension {f.dim} and {g.dim} cannot be compared")
    if not math.isclose(f.spacing, g.spacing, rel_tol=1e-12):
        raise PreconditionError(f"incompatible lattices: spacing {f.spacing} vs {g.spacing}")
    offsets = []
    for fo, go in zip(f.origin, g.origin):
        steps = (go - fo) / f.spacing
        if abs(steps - round(steps)) > 1e-6:
            raise PreconditionError(
                f"incompatible lattices: origins {f.origin} and {g.origin} differ by a non-lattice vector")
        offsets.append(int(round(steps)))
    return tuple(offsets)


def lp_distance(f: GridFunction, g: GridFunction, p: LpExponent | float, region=None) -> float:
    """L^p distance of two zero-extended grid functions on a box region (no interpolation)."""
    offsets = _lattice_offset(f, g)
    if region is None:
        ranges = [(min(0, o), max(nf - 1, o + ng - 1)) for o, nf, ng in zip(offsets, f.shape, g.shape)]
    else:
        region = _normalize_box(region, f.dim)
        ranges = [(math.ceil((lo - fo) / f.spacing - 1e-9), math.floor((hi - fo) / f.spacing + 1e-9))
                  for (lo, hi), fo in zip(region, f.origin)]
    if any(hi < lo for lo, hi in ranges):
        return 0.0
    shape = tuple(hi - lo + 1 for lo, hi in ranges)
    diff = np.zeros(shape)
    for source, offset, sign in ((f, (0,) * f.dim, 1.0), (g, offsets, -1.0)):
        src, dst = [], []
        for (lo, hi), o, n in zip(ranges, offset, source.shape):
            start, stop = max(lo, o), min(hi, o + n - 1)
            if stop < start:
                break
            src.append(slice(start - o, stop - o + 1))
            dst.append(slice(start - lo, stop - lo + 1))
        else:
            diff[tuple(dst)] += sign * source.values[tuple(src)]
    return array_lp_norm(diff, p, f.cell_volume)
