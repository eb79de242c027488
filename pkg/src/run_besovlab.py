# src/run_besovlab.py
# Author: besovlab maintainers
# Date: 17 October 2026
# Description: Runs the reference experiments end to end: semi-norms of the standard
#              test functions, the r -> 1 and r -> 0 sweeps, one eps-sweep against the
#              Nikol'skii semi-norm and the Cesaro bound, and saves every table as CSV.

import logging
import os

from rich.console import Console

from besovlab import config
from besovlab.counterexamples import cesaro_bound_check
from besovlab.errors import BesovLabError
from besovlab.formatter import format_result, frame_rows, write_csv
from besovlab.functionals import SemiNormSpec, besov_seminorm, nikolskii_seminorm
from besovlab.gridfn import make_grid_function
from besovlab.kernels import kernel_family_from_spec
from besovlab.limits import bbm_sweep, ms_sweep, theo_ratio_sweep
from besovlab.omega import omega_from_spec

log = logging.getLogger(__name__)

# --- Configuration ---
OUTPUT_DIR = config.OUTPUT_DIR
SEMINORM_OUTPUT_FILE = os.path.join(OUTPUT_DIR, 'reference_seminorms.csv')
SWEEP_OUTPUT_FILE = os.path.join(OUTPUT_DIR, 'reference_sweeps.csv')
CESARO_OUTPUT_FILE = os.path.join(OUTPUT_DIR, 'reference_cesaro.csv')
ECHO = '# config: command=reference'

console = Console(highlight=False)

# (function spec, box, spacing)
TEST_FUNCTIONS = [
    ('indicator(0,1)', (-1.0, 2.0), 1e-3),
    ('tent(0,1)', (-2.0, 2.0), 1e-3),
    ('gaussian(0,1,6)', (-7.0, 7.0), 2e-3),
]
SEMINORM_SPECS = [(0.5, 1, 2), (0.5, 2, 'inf'), (0.25, 2, 2)]


def run_seminorms() -> list[dict]:
    rows = []
    for spec_text, box, spacing in TEST_FUNCTIONS:
        f = make_grid_function(spec_text, box, spacing)
        for s, p, q in SEMINORM_SPECS:
            spec = SemiNormSpec(s, p, q, 1)
            result = nikolskii_seminorm(f, spec) if spec.q.is_infinite else besov_seminorm(f, spec)
            rows.append(format_result({'type': 'seminorm', 'quantity': f"{result.quantity}[{spec_text}]",
                                       's': s, 'p': spec.p, 'q': spec.q, 'M': 1, 'value': result.value,
                                       'tolerance': result.tolerance, 'shell_argmax': result.argmax_shell}))
            console.print(f"  {spec_text:>16}  {result.quantity:<10} s={s:g} p={p} q={q}: {result.value:.6g}")
    return rows


def run_sweeps() -> list[dict]:
    rows = []
    tent = make_grid_function('tent(0,1)', (-2.0, 2.0), 1e-3)
    gauss = make_grid_function('gaussian(0,1,6)', (-7.0, 7.0), 2e-3)
    for name, report in (('sweep-bbm', bbm_sweep(tent, 1.0)), ('sweep-ms', ms_sweep(gauss, 2.0))):
        rows.extend(frame_rows(report.to_frame(), 'sweep_node', sweep=name))
        console.print(f"  {name}: extrapolated {report.extrapolated_limit:.6g}, target {report.target:.6g}")
    bump = make_grid_function('bump(0,1)', (-2.0, 2.0), 5e-4)
    report = theo_ratio_sweep(bump, kernel_family_from_spec('choice2()'), omega_from_spec('pow(0.5)'),
                              SemiNormSpec(0.5, 2, 'inf', 1))
    rows.extend(frame_rows(report.to_frame(), 'sweep_node', sweep='theo-ratio'))
    console.print(f"  theo-ratio: sup ratio {report.diagnostics['ratio']:.6g}")
    return rows


def run_reference_experiments():
    """Main function to run the reference experiment pipeline."""
    console.print("\n====== Running besovlab reference experiments ======")

    try:
        console.print("Semi-norms of the standard test functions:")
        seminorm_rows = run_seminorms()
        console.print("Limit sweeps:")
        sweep_rows = run_sweeps()
        cesaro = cesaro_bound_check()
    except BesovLabError as exc:
        console.print(f"Error: {exc}", markup=False)
        return exc.exit_code

    console.print(f"Cesaro means: sup {cesaro.sup:.6g} at eps {cesaro.argmax:.4g} (bound {cesaro.bound:.6g})")

    # --- Save Results ---
    write_csv(seminorm_rows, SEMINORM_OUTPUT_FILE, ECHO)
    write_csv(sweep_rows, SWEEP_OUTPUT_FILE, ECHO)
    write_csv(frame_rows(cesaro.values, 'quark_column'), CESARO_OUTPUT_FILE, ECHO)

    console.print(f"\nOutput files located in: {OUTPUT_DIR}")
    console.print("====== Reference experiments complete ======")
    return 0


if __name__ == '__main__':
    logging.basicConfig(level=config.LOG_LEVEL)
    raise SystemExit(run_reference_experiments())
