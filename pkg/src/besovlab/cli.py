# src/besovlab/cli.py
# Author: besovlab maintainers
# Date: 17 October 2026
# Description: Command-line front end. Each command builds an ExperimentConfig from its
#              flags (and an optional flat key=value file), validates it before any
#              computation, runs the experiment and writes CSV files whose first line
#              echoes the config.

import dataclasses
import logging
import os
import shlex
from pathlib import Path
from typing import Optional

import typer
from rich.console import Console
from rich.logging import RichHandler

from . import config
from .counterexamples import (cesaro_bound_check, compactness_probe, noncompact_besov_sweep, noncompact_sequence,
                              noncompact_sweep, nonlimit_function)
from .errors import BesovLabError, ConfigError, PreconditionError
from .formatter import format_result, frame_rows, write_csv
from .functionals import SemiNormSpec, besov_seminorm, d_omega, nikolskii_seminorm
from .gridfn import GridFunction, LpExponent, auto_box, generator_from_spec, make_grid_function
from .kernels import kernel_family_from_spec
from .limits import SweepReport, approx_decay_sweep, bbm_sweep, lip_sweep, ms_sweep, parse_rgrid, theo_ratio_sweep
from .omega import omega_from_spec

log = logging.getLogger(__name__)

# --- Configuration ---
COMMANDS = ('seminorm', 'dfunc', 'sweep-bbm', 'sweep-ms', 'sweep-lip', 'theo-ratio', 'approx-decay',
            'counterexample')
COUNTEREXAMPLES = ('nonlimit', 'cesaro', 'noncompact', 'noncompact-besov')
DEFAULT_SPACING = 1e-3
ECHO_PREFIX = '# config:'


@dataclasses.dataclass
class ExperimentConfig:
    """Everything one run needs; unset fields stay None."""

    command: str
    sub: Optional[str] = None
    f: Optional[str] = None
    kernel: Optional[str] = None
    omega: Optional[str] = None
    s: Optional[float] = None
    p: Optional[str] = None
    q: Optional[str] = None
    M: Optional[int] = None
    spacing: Optional[float] = None
    box: Optional[str] = None
    dim: Optional[int] = None
    rgrid: Optional[str] = None
    epsilon: Optional[float] = None
    J: Optional[int] = None
    n: Optional[str] = None
    gamma: Optional[float] = None
    out: Optional[str] = None
    threads: Optional[int] = None

    def echo(self) -> str:
        """'# config: key=value ...' with shell quoting; from_echo inverts it."""
        parts = []
        for item in dataclasses.fields(self):
            value = getattr(self, item.name)
            if value is not None:
                text = repr(value) if isinstance(value, float) else str(value)
                parts.append(f"{item.name}={shlex.quote(text)}")
        return f"{ECHO_PREFIX} {' '.join(parts)}"

    @classmethod
    def from_echo(cls, line: str) -> 'ExperimentConfig':
        if not line.startswith(ECHO_PREFIX):
            raise ConfigError(f"config echo must start with {ECHO_PREFIX!r}")
        try:
            tokens = shlex.split(line[len(ECHO_PREFIX):])
        except ValueError as exc:
            raise ConfigError(f"cannot split config echo: {exc}") from None
        return cls.from_pairs(dict(_split_pair(token) for token in tokens))

    @classmethod
    def from_pairs(cls, pairs: dict) -> 'ExperimentConfig':
        if 'command' not in pairs:
            raise ConfigError("config has no command")
        return cls(**{key: _convert(key, value) for key, value in pairs.items()})


_FIELD_TYPES = {'s': float, 'M': int, 'spacing': float, 'dim': int, 'epsilon': float, 'J': int,
                'gamma': float, 'threads': int}


def _split_pair(token: str) -> tuple[str, str]:
    key, sep, value = token.partition('=')
    if not sep:
        raise ConfigError(f"expected key=value, got {token!r}")
    return key.strip(), value.strip()


def _convert(key: str, value):
    names = {item.name for item in dataclasses.fields(ExperimentConfig)}
    if key not in names:
        raise ConfigError(f"unknown config key {key!r}")
    if value is None:
        return None
    kind = _FIELD_TYPES.get(key, str)
    try:
        return kind(value)
    except ValueError:
        raise ConfigError(f"config key {key} expects {kind.__name__}, got {value!r}") from None


def read_config_file(path: str) -> dict:
    """Flat key=value lines; '#' starts a comment."""
    try:
        with open(path) as handle:
            lines = handle.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    pairs = {}
    for line in lines:
        line = line.split('#', 1)[0].strip()
        if line:
            key, value = _split_pair(line)
            pairs[key] = value
    return pairs


# --- Validation ---

_REQUIRED = {
    'seminorm': ('f', 's', 'p', 'q'),
    'dfunc': ('f', 'kernel', 'omega', 's', 'p', 'epsilon'),
    'sweep-bbm': ('f', 'p'),
    'sweep-ms': ('f', 'p'),
    'sweep-lip': ('f', 'q'),
    'theo-ratio': ('f', 'kernel', 'omega', 's', 'p'),
    'approx-decay': ('f', 'kernel', 'omega', 's', 'p'),
    'nonlimit': ('s', 'p', 'q'),
    'cesaro': (),
    'noncompact': ('s', 'p'),
    'noncompact-besov': ('s', 'p', 'q', 'gamma'),
}


def validate(cfg: ExperimentConfig) -> None:
    """Parses every spec and checks every range before anything is computed."""
    if cfg.command not in COMMANDS:
        raise ConfigError(f"unknown command {cfg.command!r}")
    key = cfg.sub if cfg.command == 'counterexample' else cfg.command
    if cfg.command == 'counterexample' and cfg.sub not in COUNTEREXAMPLES:
        raise ConfigError(f"counterexample must be one of {', '.join(COUNTEREXAMPLES)}")
    missing = [name for name in _REQUIRED[key] if getattr(cfg, name) is None]
    if missing:
        raise ConfigError(f"{key} needs {', '.join('--' + m for m in missing)}")
    if cfg.f is not None:
        generator_from_spec(cfg.f)
    if cfg.kernel is not None:
        kernel_family_from_spec(cfg.kernel, cfg.dim or 1)
    if cfg.omega is not None:
        omega_from_spec(cfg.omega)
    for name in ('p', 'q'):
        if getattr(cfg, name) is not None:
            LpExponent.parse(getattr(cfg, name))
    if cfg.rgrid is not None:
        parse_rgrid(cfg.rgrid)
    if cfg.box is not None:
        _parse_box(cfg.box)
    if cfg.n is not None:
        _parse_ns(cfg.n)
    if cfg.spacing is not None and not cfg.spacing > 0:
        raise PreconditionError(f"spacing must be positive, got {cfg.spacing}")
    if cfg.threads is not None and cfg.threads < 1:
        raise ConfigError(f"--threads must be a positive integer, got {cfg.threads}")
    if cfg.s is not None and cfg.p is not None and cfg.command in ('seminorm', 'dfunc', 'theo-ratio', 'approx-decay'):
        SemiNormSpec(cfg.s, cfg.p, cfg.q or 'inf', cfg.M or 1)


def _parse_box(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(':'))
    except ValueError:
        raise ConfigError(f"box {text!r} must look like lo:hi") from None
    if not hi > lo:
        raise ConfigError(f"box {text!r} is empty")
    return lo, hi


def _parse_ns(text: str) -> tuple[int, ...]:
    try:
        ns = tuple(int(v) for v in text.split(','))
    except ValueError:
        raise ConfigError(f"n list {text!r} must be comma-separated integers") from None
    if not ns or min(ns) < 1:
        raise ConfigError(f"n list {text!r} needs positive integers")
    return ns


# --- Runners ---

def _grid(cfg: ExperimentConfig) -> GridFunction:
    generator = generator_from_spec(cfg.f)
    spacing = cfg.spacing or DEFAULT_SPACING
    dim = cfg.dim or 1
    box = [_parse_box(cfg.box)] * dim if cfg.box else auto_box(generator, spacing, 0.0, dim)
    return make_grid_function(generator, box, spacing, dim=dim)


def _out(cfg: ExperimentConfig, suffix: str = '') -> str:
    name = cfg.command if cfg.sub is None else f"{cfg.command}_{cfg.sub}"
    path = cfg.out or os.path.join(config.OUTPUT_DIR, f"{name}.csv")
    if suffix:
        stem, ext = os.path.splitext(path)
        path = f"{stem}_{suffix}{ext or '.csv'}"
    return path


def _finite_p(text: str, name: str) -> float:
    value = LpExponent.parse(text)
    if value.is_infinite:
        raise PreconditionError(f"{name} must be finite for this command")
    return value.value


def _sweep_rows(name: str, report: SweepReport) -> list[dict]:
    rows = [format_result({'type': 'sweep_node', 'sweep': name, 'param': x, 'value': v, 'target': report.target})
            for x, v in zip(report.grid, report.values)]
    rows.append(format_result({'type': 'sweep_summary', 'sweep': name, 'limit': report.extrapolated_limit,
                               'method': report.method, 'target': report.target,
                               'relerr': report.relative_error}))
    return rows


def _run_seminorm(cfg, console):
    f = _grid(cfg)
    spec = SemiNormSpec(cfg.s, cfg.p, cfg.q, cfg.M or 1)
    result = nikolskii_seminorm(f, spec) if spec.q.is_infinite else besov_seminorm(f, spec)
    row = format_result({'type': 'seminorm', 'quantity': result.quantity, 's': spec.s, 'p': spec.p, 'q': spec.q,
                         'M': spec.M, 'value': result.value, 'tolerance': result.tolerance,
                         'shell_argmax': result.argmax_shell})
    write_csv([row], _out(cfg), cfg.echo())
    write_csv(frame_rows(result.shells, 'shell'), _out(cfg, 'shells'), cfg.echo())
    console.print(f"{result.quantity} = {result.value:.6g} (tolerance {result.tolerance:.2g})")


def _run_dfunc(cfg, console):
    f = _grid(cfg)
    spec = SemiNormSpec(cfg.s, cfg.p, cfg.q or 'inf', cfg.M or 1)
    family = kernel_family_from_spec(cfg.kernel, f.dim)
    omega = omega_from_spec(cfg.omega)
    result = d_omega(f, family, cfg.epsilon, omega, spec)
    row = format_result({'type': 'dfunc', 'quantity': f"dfunc[{family.spec},{omega.name}]", 's': spec.s,
                         'p': spec.p, 'q': spec.q, 'M': spec.M, 'epsilon': cfg.epsilon, 'value': result.value,
                         'tolerance': result.tolerance})
    write_csv([row], _out(cfg), cfg.echo())
    console.print(f"D_omega = {result.value:.6g} (tolerance {result.tolerance:.2g})")


def _run_sweep(cfg, console):
    f = _grid(cfg)
    grid = parse_rgrid(cfg.rgrid) if cfg.rgrid else None
    if cfg.command == 'sweep-bbm':
        report = bbm_sweep(f, _finite_p(cfg.p, 'p'), grid, cfg.M or 1)
    elif cfg.command == 'sweep-ms':
        report = ms_sweep(f, _finite_p(cfg.p, 'p'), grid)
    else:
        report = lip_sweep(f, _finite_p(cfg.q, 'q'), grid)
    write_csv(_sweep_rows(cfg.command, report), _out(cfg), cfg.echo())
    console.print(f"{cfg.command}: extrapolated {report.extrapolated_limit:.6g} ({report.method}), "
                  f"target {report.target:.6g}")


def _run_eps_sweep(cfg, console):
    f = _grid(cfg)
    spec = SemiNormSpec(cfg.s, cfg.p, 'inf', cfg.M or 1)
    family = kernel_family_from_spec(cfg.kernel, f.dim)
    omega = omega_from_spec(cfg.omega)
    if cfg.command == 'theo-ratio':
        report = theo_ratio_sweep(f, family, omega, spec)
        message = f"theo-ratio: sup ratio {report.diagnostics['ratio']:.6g}"
    else:
        report = approx_decay_sweep(f, family, omega, spec)
        decay = report.diagnostics['decay_ratio']
        message = "approx-decay: decay ratio " + ('unresolved' if decay is None else f"{decay:.6g}")
    write_csv(_sweep_rows(cfg.command, report), _out(cfg), cfg.echo())
    console.print(message)


def _run_counterexample(cfg, console):
    if cfg.sub == 'nonlimit':
        result = nonlimit_function(cfg.s, _finite_p(cfg.p, 'p'), _finite_p(cfg.q, 'q'), cfg.M or 1, cfg.J or 10)
        write_csv(frame_rows(result.levels, 'level'), _out(cfg), cfg.echo())
        write_csv(frame_rows(result.quark, 'quark_column'), _out(cfg, 'quark'), cfg.echo())
        console.print(f"nonlimit: {len(result.levels)} levels, lemma constant {result.lemma_constant:.6g}")
    elif cfg.sub == 'cesaro':
        check = cesaro_bound_check(cfg.J or 2 ** 20)
        write_csv(frame_rows(check.values, 'quark_column'), _out(cfg), cfg.echo())
        console.print(f"cesaro: sup {check.sup:.6g} at eps {check.argmax:.4g}, bound {check.bound:.6g}")
    elif cfg.sub == 'noncompact':
        ns = _parse_ns(cfg.n) if cfg.n else (1, 4, 16, 64, 256)
        s, p, M = cfg.s, _finite_p(cfg.p, 'p'), cfg.M or 1
        frame = noncompact_sweep(M, s, p, ns)
        probe = compactness_probe([noncompact_sequence(M, s, p, n) for n in ns], (-1.0, 1.0), p)
        write_csv(frame_rows(frame, 'noncompact'), _out(cfg), cfg.echo())
        distances = [format_result({'type': 'distance', 'i': a, 'j': b, 'distance': probe.distances.iat[a, b]})
                     for a in range(len(ns)) for b in range(len(ns))]
        write_csv(distances, _out(cfg, 'distances'), cfg.echo())
        console.print(f"noncompact: functional max/min {frame['functional'].max() / frame['functional'].min():.4g}, "
                      f"min distance {probe.min_distance:.4g}")
    else:
        ns = _parse_ns(cfg.n) if cfg.n else (4, 8, 16, 32, 64)
        frame, slope = noncompact_besov_sweep(cfg.M or 1, cfg.s, _finite_p(cfg.p, 'p'), _finite_p(cfg.q, 'q'),
                                              cfg.gamma, ns)
        write_csv(frame_rows(frame, 'noncompact'), _out(cfg), cfg.echo())
        console.print(f"noncompact-besov: fitted exponent {slope:.4g}")


_RUNNERS = {
    'seminorm': _run_seminorm,
    'dfunc': _run_dfunc,
    'sweep-bbm': _run_sweep,
    'sweep-ms': _run_sweep,
    'sweep-lip': _run_sweep,
    'theo-ratio': _run_eps_sweep,
    'approx-decay': _run_eps_sweep,
    'counterexample': _run_counterexample,
}


def run(cfg: ExperimentConfig, console: Console | None = None) -> int:
    """Validates and runs one experiment; returns the exit status."""
    console = console or Console(highlight=False, soft_wrap=True)
    errors = Console(stderr=True, highlight=False, soft_wrap=True)
    try:
        validate(cfg)
        log.info("running %s", cfg.echo())
        config.set_threads(cfg.threads)
        config.get_threads()
        _RUNNERS[cfg.command](cfg, console)
    except BesovLabError as exc:
        errors.print(f"Error: {exc}", markup=False)
        return exc.exit_code
    finally:
        config.set_threads(None)
    return 0


# --- typer application ---

app = typer.Typer(add_completion=False, help="Besov and Nikol'skii semi-norms, BBM-type functionals and limits.")
counterexample_app = typer.Typer(add_completion=False, help="Explicit counterexample constructions.")
app.add_typer(counterexample_app, name='counterexample')

F_OPT = typer.Option(None, '--f', help="Function spec, e.g. indicator(0,1).")
S_OPT = typer.Option(None, '--s', help="Smoothness s.")
P_OPT = typer.Option(None, '--p', help="Integrability p (number or inf).")
Q_OPT = typer.Option(None, '--q', help="Summability q (number or inf).")
M_OPT = typer.Option(None, '--M', help="Difference order M.")
KERNEL_OPT = typer.Option(None, '--kernel', help="Kernel family spec, e.g. choice2().")
OMEGA_OPT = typer.Option(None, '--omega', help="Omega spec, e.g. pow(0.5).")
EPS_OPT = typer.Option(None, '--epsilon', help="Kernel scale eps.")
SPACING_OPT = typer.Option(None, '--spacing', help="Lattice spacing.")
BOX_OPT = typer.Option(None, '--box', help="Box lo:hi on every axis.")
DIM_OPT = typer.Option(None, '--dim', help="Dimension (1 to 3).")
RGRID_OPT = typer.Option(None, '--rgrid', help="start:stop[:num][:lin|geom].")
J_OPT = typer.Option(None, '--J', help="Number of dyadic levels.")
N_OPT = typer.Option(None, '--n', help="Comma-separated sequence indices.")
GAMMA_OPT = typer.Option(None, '--gamma', help="Concentration exponent gamma in [0, 1/q].")
OUT_OPT = typer.Option(None, '--out', help="Output CSV path.")
THREADS_OPT = typer.Option(None, '--threads', help="Worker threads (default BESOVLAB_THREADS or 1).")
LOG_OPT = typer.Option(None, '--log-level', help="Logging level (default BESOVLAB_LOG_LEVEL).")
CONFIG_OPT = typer.Option(None, '--config', help="Flat key=value config file.")


def _setup_logging(level: Optional[str]) -> None:
    level = (level or config.LOG_LEVEL).upper()
    if not isinstance(logging.getLevelName(level), int):
        raise typer.BadParameter(f"unknown log level {level!r}")
    logging.basicConfig(level=level, format="%(message)s", force=True,
                        handlers=[RichHandler(console=Console(stderr=True), show_path=False)])


def _invoke(command: str, sub: Optional[str], config_file: Optional[Path], log_level: Optional[str], **flags) -> None:
    _setup_logging(log_level)
    try:
        pairs = read_config_file(str(config_file)) if config_file else {}
        pairs.update({key: value for key, value in flags.items() if value is not None})
        pairs.update(command=command, sub=sub)
        cfg = ExperimentConfig.from_pairs(pairs)
    except ConfigError as exc:
        Console(stderr=True).print(f"Error: {exc}", markup=False)
        raise typer.Exit(code=exc.exit_code)
    status = run(cfg)
    if status:
        raise typer.Exit(code=status)


@app.command()
def seminorm(f: Optional[str] = F_OPT, s: Optional[float] = S_OPT, p: Optional[str] = P_OPT,
             q: Optional[str] = Q_OPT, M: Optional[int] = M_OPT, spacing: Optional[float] = SPACING_OPT,
             box: Optional[str] = BOX_OPT, dim: Optional[int] = DIM_OPT, out: Optional[str] = OUT_OPT,
             threads: Optional[int] = THREADS_OPT, log_level: Optional[str] = LOG_OPT,
             config_file: Optional[Path] = CONFIG_OPT):
    """Besov semi-norm (finite q) or Nikol'skii semi-norm (q = inf), with the shell CSV."""
    _invoke('seminorm', None, config_file, log_level, f=f, s=s, p=p, q=q, M=M, spacing=spacing, box=box,
            dim=dim, out=out, threads=threads)


@app.command()
def dfunc(f: Optional[str] = F_OPT, kernel: Optional[str] = KERNEL_OPT, omega: Optional[str] = OMEGA_OPT,
          s: Optional[float] = S_OPT, p: Optional[str] = P_OPT, M: Optional[int] = M_OPT,
          epsilon: Optional[float] = EPS_OPT, spacing: Optional[float] = SPACING_OPT,
          box: Optional[str] = BOX_OPT, dim: Optional[int] = DIM_OPT, out: Optional[str] = OUT_OPT,
          threads: Optional[int] = THREADS_OPT, log_level: Optional[str] = LOG_OPT,
          config_file: Optional[Path] = CONFIG_OPT):
    """D_omega(rho_eps, f) at one eps."""
    _invoke('dfunc', None, config_file, log_level, f=f, kernel=kernel, omega=omega, s=s, p=p, M=M,
            epsilon=epsilon, spacing=spacing, box=box, dim=dim, out=out, threads=threads)


@app.command('sweep-bbm')
def sweep_bbm(f: Optional[str] = F_OPT, p: Optional[str] = P_OPT, M: Optional[int] = M_OPT,
              rgrid: Optional[str] = RGRID_OPT, spacing: Optional[float] = SPACING_OPT,
              box: Optional[str] = BOX_OPT, out: Optional[str] = OUT_OPT, threads: Optional[int] = THREADS_OPT,
              log_level: Optional[str] = LOG_OPT, config_file: Optional[Path] = CONFIG_OPT):
    """(1 - r) p [f]^p_{W^(r,p)} as r -> 1."""
    _invoke('sweep-bbm', None, config_file, log_level, f=f, p=p, M=M, rgrid=rgrid, spacing=spacing, box=box,
            out=out, threads=threads)


@app.command('sweep-ms')
def sweep_ms(f: Optional[str] = F_OPT, p: Optional[str] = P_OPT, rgrid: Optional[str] = RGRID_OPT,
             spacing: Optional[float] = SPACING_OPT, box: Optional[str] = BOX_OPT, out: Optional[str] = OUT_OPT,
             threads: Optional[int] = THREADS_OPT, log_level: Optional[str] = LOG_OPT,
             config_file: Optional[Path] = CONFIG_OPT):
    """r p [f]^p_{W^(r,p)} as r -> 0."""
    _invoke('sweep-ms', None, config_file, log_level, f=f, p=p, rgrid=rgrid, spacing=spacing, box=box,
            out=out, threads=threads)


@app.command('sweep-lip')
def sweep_lip(f: Optional[str] = F_OPT, q: Optional[str] = Q_OPT, rgrid: Optional[str] = RGRID_OPT,
              spacing: Optional[float] = SPACING_OPT, box: Optional[str] = BOX_OPT, out: Optional[str] = OUT_OPT,
              threads: Optional[int] = THREADS_OPT, log_level: Optional[str] = LOG_OPT,
              config_file: Optional[Path] = CONFIG_OPT):
    """(1 - r)^(1/q) ||f||_{B^r_{inf,q}} as r -> 1."""
    _invoke('sweep-lip', None, config_file, log_level, f=f, q=q, rgrid=rgrid, spacing=spacing, box=box,
            out=out, threads=threads)


@app.command('theo-ratio')
def theo_ratio(f: Optional[str] = F_OPT, kernel: Optional[str] = KERNEL_OPT, omega: Optional[str] = OMEGA_OPT,
               s: Optional[float] = S_OPT, p: Optional[str] = P_OPT, M: Optional[int] = M_OPT,
               spacing: Optional[float] = SPACING_OPT, box: Optional[str] = BOX_OPT, dim: Optional[int] = DIM_OPT,
               out: Optional[str] = OUT_OPT, threads: Optional[int] = THREADS_OPT,
               log_level: Optional[str] = LOG_OPT, config_file: Optional[Path] = CONFIG_OPT):
    """D_omega along eps_k = h_max 2^-k against omega of the Nikol'skii semi-norm."""
    _invoke('theo-ratio', None, config_file, log_level, f=f, kernel=kernel, omega=omega, s=s, p=p, M=M,
            spacing=spacing, box=box, dim=dim, out=out, threads=threads)


@app.command('approx-decay')
def approx_decay(f: Optional[str] = F_OPT, kernel: Optional[str] = KERNEL_OPT, omega: Optional[str] = OMEGA_OPT,
                 s: Optional[float] = S_OPT, p: Optional[str] = P_OPT, M: Optional[int] = M_OPT,
                 spacing: Optional[float] = SPACING_OPT, box: Optional[str] = BOX_OPT,
                 dim: Optional[int] = DIM_OPT, out: Optional[str] = OUT_OPT, threads: Optional[int] = THREADS_OPT,
                 log_level: Optional[str] = LOG_OPT, config_file: Optional[Path] = CONFIG_OPT):
    """D_omega along eps_k with the ratio value(k=10) / value(k=2)."""
    _invoke('approx-decay', None, config_file, log_level, f=f, kernel=kernel, omega=omega, s=s, p=p, M=M,
            spacing=spacing, box=box, dim=dim, out=out, threads=threads)


@counterexample_app.command('nonlimit')
def counterexample_nonlimit(s: Optional[float] = S_OPT, p: Optional[str] = P_OPT, q: Optional[str] = Q_OPT,
                            M: Optional[int] = M_OPT, J: Optional[int] = J_OPT, out: Optional[str] = OUT_OPT,
                            threads: Optional[int] = THREADS_OPT, log_level: Optional[str] = LOG_OPT,
                            config_file: Optional[Path] = CONFIG_OPT):
    """Dyadic bump function: growing shell values against the bounded quark column."""
    _invoke('counterexample', 'nonlimit', config_file, log_level, s=s, p=p, q=q, M=M, J=J, out=out,
            threads=threads)


@counterexample_app.command('cesaro')
def counterexample_cesaro(J: Optional[int] = J_OPT, out: Optional[str] = OUT_OPT,
                          log_level: Optional[str] = LOG_OPT, config_file: Optional[Path] = CONFIG_OPT):
    """Weighted means of the Cesaro-type sequence against 2/(e ln 2)."""
    _invoke('counterexample', 'cesaro', config_file, log_level, J=J, out=out)


@counterexample_app.command('noncompact')
def counterexample_noncompact(s: Optional[float] = S_OPT, p: Optional[str] = P_OPT, M: Optional[int] = M_OPT,
                              n: Optional[str] = N_OPT, out: Optional[str] = OUT_OPT,
                              threads: Optional[int] = THREADS_OPT, log_level: Optional[str] = LOG_OPT,
                              config_file: Optional[Path] = CONFIG_OPT):
    """Concentrating sequence: bounded functionals, separated in L^p_loc."""
    _invoke('counterexample', 'noncompact', config_file, log_level, s=s, p=p, M=M, n=n, out=out,
            threads=threads)


@counterexample_app.command('noncompact-besov')
def counterexample_noncompact_besov(s: Optional[float] = S_OPT, p: Optional[str] = P_OPT,
                                    q: Optional[str] = Q_OPT, M: Optional[int] = M_OPT,
                                    gamma: Optional[float] = GAMMA_OPT, n: Optional[str] = N_OPT,
                                    out: Optional[str] = OUT_OPT, threads: Optional[int] = THREADS_OPT,
                                    log_level: Optional[str] = LOG_OPT, config_file: Optional[Path] = CONFIG_OPT):
    """Concentrating sequence against the mspow kernels: decay exponent of the functional."""
    _invoke('counterexample', 'noncompact-besov', config_file, log_level, s=s, p=p, q=q, M=M, gamma=gamma, n=n,
            out=out, threads=threads)


def main() -> None:
    app()
