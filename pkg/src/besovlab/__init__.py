# src/besovlab/__init__.py
# Author: besovlab maintainers
# Date: 17 October 2026
# Description: Numerical Besov and Nikol'skii semi-norms, kernel functionals D_omega and
#              their limits in the smoothness and kernel-scale parameters.

from .errors import BesovLabError, ConfigError, MarginError, NumericalError, PreconditionError
from .functionals import SemiNormSpec, besov_seminorm, d_omega, nikolskii_seminorm
from .gridfn import GridFunction, LpExponent, make_grid_function

__version__ = '0.1.0'
