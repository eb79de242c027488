# src/besovlab/config.py
# Author: besovlab maintainers
# Date: 17 October 2026
# Description: Runtime settings (read from the environment or a .env file) and the
#              frozen numerical constants used by the quadrature and the test oracles.

import os

from dotenv import load_dotenv

from .errors import ConfigError

# --- Configuration ---
load_dotenv()
OUTPUT_DIR = os.getenv('BESOVLAB_OUTPUT_DIR', 'generated_files')
LOG_LEVEL = os.getenv('BESOVLAB_LOG_LEVEL', 'WARNING')
THREADS_ENV = 'BESOVLAB_THREADS'

# --- Numerical defaults ---
MAX_ORDER = 6                   # binomial alternation loses about M digits
NODES_PER_DECADE = 256          # radial log-midpoint rule
SAMPLES_PER_SHELL = 64          # minimum stratified directions per dyadic shell (dim >= 2)
DEFAULT_EPSILON_LEVELS = 12     # eps_k = h_max * 2**-k, k = 0..K
MIN_KERNEL_CELLS = 4            # eps >= 4 * spacing
QUADRATURE_TOLERANCE = 0.02
SHELL_RATIO = 2.0
MAX_DYADIC_LEVEL = 14           # 2**-14 / 64 is still well above double precision

# --- Frozen calibration constants ---
# Lower edge of the two-sided equivalence band, per (kernel family, omega), at
# s = 1/2 and M = 1. Subadditivity of h -> ||Delta_h f||_p gives
# Q(t) >= Q(h*) (t/h*)^(1/2) / (1 + t/h*) below the maximizer h*; averaging that
# bound over the dyadic eps node nearest h* gives 0.37 (uniform), 0.44 (choice2),
# 0.42 (kpp, J uniform) and 0.28 (gaussian) for omega = id. Concave omega with
# omega(0) = 0 never lowers the ratio, and pow(0.5) raises it to about the root.
C_STAR = {
    ('uniform', 'id'): 0.3, ('uniform', 'pow(0.5)'): 0.45, ('uniform', 'log1p'): 0.3,
    ('gaussian', 'id'): 0.15, ('gaussian', 'pow(0.5)'): 0.25, ('gaussian', 'log1p'): 0.15,
    ('choice2', 'id'): 0.35, ('choice2', 'pow(0.5)'): 0.5, ('choice2', 'log1p'): 0.35,
    ('kpp', 'id'): 0.3, ('kpp', 'pow(0.5)'): 0.45, ('kpp', 'log1p'): 0.3,
}
UPPER_BAND = 1.0 + QUADRATURE_TOLERANCE
LIPSCHITZ_CALIBRATION = 4.0     # C_J for the (1-r)^(1/q) scaled B^r_{inf,q} values

_threads_override = None


def set_threads(n: int | None) -> None:
    """Overrides the worker count for shift evaluation (the --threads flag)."""
    global _threads_override
    if n is not None and n < 1:
        raise ConfigError(f"thread count must be a positive integer, got {n}")
    _threads_override = n


def get_threads() -> int:
    """Returns the worker count: explicit override, then BESOVLAB_THREADS, then 1."""
    if _threads_override is not None:
        return _threads_override
    raw = os.getenv(THREADS_ENV, '1').strip()
    try:
        threads = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if threads < 1:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return threads


def c_star(family: str, omega: str) -> float:
    """Frozen lower band for the sup-over-epsilon equivalence ratio."""
    return C_STAR.get((family, omega), 0.0)
