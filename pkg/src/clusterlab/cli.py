"""Command-line surface: sweep, merge, report, duality-check, oracle-xcheck.

Exit codes: 0 ok, 2 config error, 3 numerical-contract violation, 4 I/O error.
Progress goes to stderr; stdout carries machine-readable output when piping.
"""

from __future__ import annotations

import json
import sys

import click

from .circuit import CircuitError
from .clifford import GateError
from .dense import DenseError
from .pauli import PauliError
from .sweep import ConfigError, load_config, merge_tables, run_sweep, write_rows
from .tableau import TableauError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CONTRACT = 3
EXIT_IO = 4

_CONFIG_ERRORS = (ConfigError, CircuitError, PauliError, ValueError)
_CONTRACT_ERRORS = (TableauError, GateError, DenseError)


def _run(fn):
    try:
        return fn()
    except _CONTRACT_ERRORS as exc:
        click.echo("contract violation: %s" % exc, err=True)
        sys.exit(EXIT_CONTRACT)
    except _CONFIG_ERRORS as exc:
        click.echo("config error: %s" % exc, err=True)
        sys.exit(EXIT_CONFIG)
    except OSError as exc:
        click.echo("I/O error: %s" % exc, err=True)
        sys.exit(EXIT_IO)


@click.group()
def main():
    """Simulation laboratory for monitored generalized cluster circuits."""


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(), help="JSON sweep config.")
@click.option("--out", default=None, help="Override the output CSV path.")
@click.option("--master-seed", default=None, type=int, help="Override master_seed.")
@click.option("--n-circuits", default=None, type=int, help="Override n_circuits.")
@click.option("--engine", default=None, help="Override engine (fast|tableau|dense).")
def sweep(config_path, out, master_seed, n_circuits, engine):
    """Run a sweep; completed points are skipped on rerun."""
    def go():
        cfg = load_config(config_path)
        if out is not None:
            cfg.output = out
        if master_seed is not None:
            cfg.master_seed = master_seed
        if n_circuits is not None:
            cfg.n_circuits = n_circuits
        if engine is not None:
            cfg.engine = engine
        cfg.validate()
        path = run_sweep(cfg)
        click.echo(path)
    _run(go)


@main.command()
@click.argument("inputs", nargs=-1, required=True, type=click.Path())
@click.option("--out", required=True, help="Combined CSV path.")
def merge(inputs, out):
    """Merge result tables; conflicting duplicate keys are an error."""
    def go():
        rows = merge_tables(list(inputs))
        write_rows(out, rows)
        click.echo(out)
    _run(go)


@main.command()
@click.option("--table", "table_path", required=True, type=click.Path(), help="Input result CSV.")
@click.option("--mode", required=True,
              type=click.Choice(["phase-diagram", "extrapolate", "collapse", "duality"]))
@click.option("--out", default="-", help="Output JSON path ('-' for stdout).")
@click.option("--observable", default=None, help="Restrict to one observable id.")
def report(table_path, mode, out, observable):
    """Fit/classify a result table and emit a JSON report."""
    def go():
        from . import reporting
        doc = reporting.build_report(table_path, mode, observable=observable)
        payload = json.dumps(doc, indent=2, sort_keys=True)
        if out == "-":
            click.echo(payload)
        else:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(payload + "\n")
            click.echo(out)
    _run(go)


@main.command("duality-check")
@click.option("--alpha", default=2, type=int)
@click.option("--n-qubits", default=12, type=int)
@click.option("--seeds", default=10, type=int, help="Number of random realizations.")
@click.option("--steps", default=100, type=int, help="Measurement operations per realization.")
@click.option("--p-s", default=0.5, type=float)
@click.option("--out", default="-", help="Output JSON path ('-' for stdout).")
def duality_check(alpha, n_qubits, seeds, steps, p_s, out):
    """Machine-check the measurement-only duality on random realizations."""
    def go():
        from . import duality
        doc = duality.run_duality_suite(alpha, n_qubits, seeds, steps, p_s)
        payload = json.dumps(doc, indent=2, sort_keys=True)
        if out == "-":
            click.echo(payload)
        else:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(payload + "\n")
            click.echo(out)
        if not doc["passed"]:
            sys.exit(EXIT_CONTRACT)
    _run(go)


@main.command("oracle-xcheck")
@click.option("--alpha", default=2, type=int)
@click.option("--n-qubits", default=10, type=int)
@click.option("--seeds", default=5, type=int)
@click.option("--steps", default=200, type=int, help="Time steps (N operations each) per realization.")
def oracle_xcheck(alpha, n_qubits, seeds, steps):
    """Replay stabilizer trajectories on the dense engine and compare."""
    def go():
        from . import xcheck
        doc = xcheck.run_xcheck(alpha, n_qubits, seeds, steps)
        click.echo(json.dumps(doc, indent=2, sort_keys=True))
        if not doc["passed"]:
            sys.exit(EXIT_CONTRACT)
    _run(go)


if __name__ == "__main__":
    main()
