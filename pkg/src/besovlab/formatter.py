# src/besovlab/formatter.py
# Author: besovlab maintainers
# Date: 17 October 2026
# Description: Formats raw results into flat CSV rows and writes them with a leading
#              '# config:' comment line that records the run.

import csv
import logging
import os

import pandas as pd

log = logging.getLogger(__name__)


def format_result(raw: dict) -> dict:
    """Formats one raw result, dispatching on raw['type']."""
    if raw['type'] in ('seminorm', 'dfunc'):
        return _format_functional(raw)
    elif raw['type'] == 'sweep_node':
        return _format_sweep_node(raw)
    elif raw['type'] == 'sweep_summary':
        return _format_sweep_summary(raw)
    elif raw['type'] == 'shell':
        return _format_shell(raw)
    elif raw['type'] == 'level':
        return _format_level(raw)
    elif raw['type'] == 'quark_column':
        return _format_quark_column(raw)
    elif raw['type'] == 'noncompact':
        return _format_noncompact(raw)
    elif raw['type'] == 'distance':
        return _format_distance(raw)
    return {}


def _blank(value):
    return '' if value is None else value


# --- Row templates ---

def _format_functional(raw: dict) -> dict:
    """quantity,s,p,q,M,epsilon,value,tolerance,shell_argmax"""
    return {
        'quantity': raw['quantity'],
        's': raw['s'],
        'p': str(raw['p']),
        'q': str(raw['q']),
        'M': int(raw['M']),
        'epsilon': _blank(raw.get('epsilon')),
        'value': float(raw['value']),
        'tolerance': float(raw.get('tolerance', 0.0)),
        'shell_argmax': _blank(raw.get('shell_argmax')),
    }


def _format_sweep_node(raw: dict) -> dict:
    target = raw.get('target')
    relerr = abs(raw['value'] - target) / abs(target) if target else None
    return {'sweep': raw['sweep'], 'param': float(raw['param']), 'value': float(raw['value']),
            'target': _blank(target), 'relerr': _blank(relerr)}


def _format_sweep_summary(raw: dict) -> dict:
    """The extrapolated limit, with the method tag in the param column."""
    return {'sweep': raw['sweep'], 'param': f"limit:{raw['method']}", 'value': float(raw['limit']),
            'target': _blank(raw.get('target')), 'relerr': _blank(raw.get('relerr'))}


def _format_shell(raw: dict) -> dict:
    row = {'j': int(raw['j']), 'r_lo': float(raw['r_lo']), 'r_hi': float(raw['r_hi']),
           'samples': int(raw['samples']), 'max_quotient': float(raw['max_quotient']),
           'mean_quotient': float(raw['mean_quotient'])}
    if 'contribution' in raw:
        row['contribution'] = float(raw['contribution'])
    return row


def _format_level(raw: dict) -> dict:
    return {'j': int(raw['j']), 'u': int(raw['u']), 'amplitude': float(raw['amplitude']),
            'shell_value': float(raw['shell_value']), 'lower_bound': float(raw['lower_bound'])}


def _format_quark_column(raw: dict) -> dict:
    return {'eps': float(raw['eps']), 'value': float(raw['value']), 'bound': float(raw['bound'])}


def _format_noncompact(raw: dict) -> dict:
    return {'n': int(raw['n']), 'norm': float(raw['norm']), 'functional': float(raw['functional'])}


def _format_distance(raw: dict) -> dict:
    return {'i': int(raw['i']), 'j': int(raw['j']), 'distance': float(raw['distance'])}


def frame_rows(frame: pd.DataFrame, kind: str, **extra) -> list[dict]:
    """Formats every record of a result frame as a row of the given type."""
    return [format_result({'type': kind, **extra, **record}) for record in frame.to_dict('records')]


def write_csv(rows: list[dict], path: str, config_echo: str) -> str:
    """Writes the config comment line, a header row and the data rows (RFC 4180 quoting)."""
    if not rows:
        log.warning("no rows to write to %s", path)
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', newline='') as handle:
        handle.write(config_echo.rstrip('\n') + '\n')
        pd.DataFrame(rows).to_csv(handle, index=False, lineterminator='\n', quoting=csv.QUOTE_MINIMAL)
    log.info("wrote %d rows to %s", len(rows), path)
    return path
