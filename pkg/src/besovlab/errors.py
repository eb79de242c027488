# src/besovlab/errors.py
# Author: besovlab maintainers
# Date: 17 October 2026
# Description: Exception hierarchy shared by every besovlab module. Each error
#              carries the exit code the command-line front end reports for it.


class BesovLabError(Exception):
    """Base class for every error raised by besovlab."""

    exit_code = 1


class ConfigError(BesovLabError):
    """A spec string, flag value or environment setting could not be parsed."""

    exit_code = 2


class PreconditionError(BesovLabError):
    """An operation was called outside its domain (ranges, lattices, margins)."""

    exit_code = 3


class MarginError(PreconditionError):
    """The zero margin of a grid function does not cover the requested shifts."""


class NumericalError(BesovLabError):
    """A computation produced a non-finite value or failed a built-in bound check."""

    exit_code = 4
