"""Sweep orchestration: JSON config -> deterministic CSV result table.

The CSV schema is frozen: schema_version, alpha, N, p_s, p_u, engine,
gate_family, observable, mean_abs, std_error, n_circuits, n_time_samples,
master_seed. Rows are canonically sorted before the final write, so identical
configs produce byte-identical files regardless of worker count or resume
history. Completed points (matched by key) are skipped on rerun.
"""

from __future__ import annotations

import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .circuit import CircuitError, CircuitSpec, run_trajectory
from .observables import StandardObserver, combine_circuit_averages

SCHEMA_VERSION = 1

CSV_COLUMNS = [
    "schema_version", "alpha", "N", "p_s", "p_u", "engine", "gate_family",
    "observable", "mean_abs", "std_error", "n_circuits", "n_time_samples",
    "master_seed",
]

_SWEEPABLE = ("p_s", "p_u", "n_qubits", "alpha")


class ConfigError(ValueError):
    pass


@dataclass
class SweepConfig:
    """Validated sweep description (one JSON document)."""

    alpha: int = 2
    n_qubits: int = 32
    p_s: float = 0.5
    p_u: float = 0.0
    p_t: Optional[float] = None  # derived as 1 - p_s - p_u when omitted
    boundary: str = "open"
    gate_family: str = "none"
    engine: str = "fast"
    burn_in_steps: Optional[int] = None
    sample_steps: int = 100
    n_circuits: int = 10
    master_seed: int = 0
    observables: Sequence[str] = ("S_triv", "S_spt")
    entropy_stride: int = 10
    gate_pool_size: int = 256
    sweep: List[dict] = field(default_factory=list)  # [{"axis": ..., "values": [...]}]
    output: str = "sweep.csv"

    @staticmethod
    def from_json(doc: dict) -> "SweepConfig":
        cfg = SweepConfig()
        known = set(cfg.__dataclass_fields__)
        for key, value in doc.items():
            if key not in known:
                raise ConfigError("unknown config key %r" % key)
            setattr(cfg, key, value)
        if isinstance(cfg.sweep, dict):
            cfg.sweep = [cfg.sweep]
        cfg.validate()
        return cfg

    def validate(self) -> None:
        for i, ax in enumerate(self.sweep):
            path = "sweep[%d]" % i
            if not isinstance(ax, dict) or set(ax) != {"axis", "values"}:
                raise ConfigError("%s must have exactly the keys axis, values" % path)
            if ax["axis"] not in _SWEEPABLE:
                raise ConfigError("%s.axis must be one of %s" % (path, ", ".join(_SWEEPABLE)))
            if not ax["values"]:
                raise ConfigError("%s.values must be non-empty" % path)
        for obs in self.observables:
            if obs not in ("S_triv", "S_spt", "C_M", "S_half"):
                raise ConfigError("observables: unknown id %r" % obs)
        if self.engine not in ("fast", "tableau", "dense"):
            raise ConfigError("engine must be fast, tableau or dense")
        # materialization re-validates every point via CircuitSpec
        self.points()

    def points(self) -> List[dict]:
        """Cartesian product of the sweep axes over the base scalars."""
        base = {"alpha": self.alpha, "n_qubits": self.n_qubits,
                "p_s": self.p_s, "p_u": self.p_u}
        grid = [dict(base)]
        for ax in self.sweep:
            grid = [dict(pt, **{ax["axis"]: v}) for v in ax["values"] for pt in grid]
        out = []
        for pt in grid:
            try:
                spec = self.spec_for(pt)
            except CircuitError as exc:
                raise ConfigError("point %r: %s" % (pt, exc)) from None
            out.append({"alpha": spec.alpha, "N": spec.N,
                        "p_s": spec.p_s, "p_u": spec.p_u})
        return out

    def spec_for(self, pt: dict) -> CircuitSpec:
        p_s, p_u = float(pt["p_s"]), float(pt["p_u"])
        p_t = (1.0 - p_s - p_u) if self.p_t is None else float(self.p_t)
        family = self.gate_family
        if p_u == 0:
            family = "none"
        elif family == "none":
            raise ConfigError("p_u > 0 requires gate_family clifford or haar")
        return CircuitSpec(
            alpha=int(pt["alpha"]), N=int(pt["n_qubits"]), p_s=p_s, p_t=p_t,
            p_u=p_u, boundary=self.boundary, gate_family=family,
            burn_in_steps=self.burn_in_steps, sample_steps=int(self.sample_steps),
            master_seed=int(self.master_seed), trajectory_count=int(self.n_circuits),
            gate_pool_size=int(self.gate_pool_size),
        )


def format_float(v: float) -> str:
    return "%.12g" % float(v)


def row_key(row: Dict[str, str]) -> Tuple:
    """Merge/resume identity of a row."""
    return (int(row["alpha"]), int(row["N"]), format_float(row["p_s"]),
            format_float(row["p_u"]), row["engine"], row["observable"],
            int(row["master_seed"]))


def canonical_sort(rows: List[Dict[str, str]]) -> List[Dict[str, str]]:
    return sorted(rows, key=lambda r: (int(r["alpha"]), int(r["N"]),
                                       float(r["p_s"]), float(r["p_u"]),
                                       r["engine"], r["observable"],
                                       int(r["master_seed"])))


def load_rows(path: str) -> List[Dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_COLUMNS:
            raise ConfigError("%s: unexpected CSV header" % path)
        return [dict(r) for r in reader]


def write_rows(path: str, rows: List[Dict[str, str]]) -> None:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in canonical_sort(rows):
        writer.writerow(row)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(buf.getvalue())


def merge_tables(paths: Sequence[str]) -> List[Dict[str, str]]:
    """Union of result tables; conflicting duplicate keys are an error."""
    seen: Dict[Tuple, Dict[str, str]] = {}
    for path in paths:
        for row in load_rows(path):
            if int(row["schema_version"]) != SCHEMA_VERSION:
                raise ConfigError("%s: schema version mismatch" % path)
            key = row_key(row)
            if key in seen and seen[key] != row:
                raise ConfigError("conflicting duplicate row for key %s" % (key,))
            seen[key] = row
    return canonical_sort(list(seen.values()))


def _expected_observables(cfg: SweepConfig, alpha: int) -> List[str]:
    out = [o for o in cfg.observables]
    if "C_M" in out and alpha % 2 == 0:
        out.remove("C_M")
    return out


def run_point(cfg: SweepConfig, pt: dict, progress=None) -> List[Dict[str, str]]:
    """All trajectories of one sweep point -> CSV rows (one per observable)."""
    spec = cfg.spec_for({"alpha": pt["alpha"], "n_qubits": pt["N"],
                         "p_s": pt["p_s"], "p_u": pt["p_u"]})
    want = _expected_observables(cfg, spec.alpha)
    observer = StandardObserver(
        spec.alpha, spec.N,
        with_correlator="C_M" in want,
        entropy_stride=cfg.entropy_stride if "S_half" in want else 0,
    )
    per_obs: Dict[str, List[float]] = {o: [] for o in want}
    for tid in range(spec.trajectory_count):
        result = run_trajectory(spec, tid, engine=cfg.engine, observer=observer)
        for obs in want:
            if obs in result.time_averages:
                per_obs[obs].append(result.time_averages[obs])
        if progress and (tid + 1) % 25 == 0:
            progress("    trajectory %d/%d" % (tid + 1, spec.trajectory_count))
    rows = []
    for obs in want:
        if obs == "S_half":
            n_time = spec.trajectory_count * len(
                range(0, spec.sample_steps, max(cfg.entropy_stride, 1)))
        else:
            n_time = spec.trajectory_count * spec.sample_steps
        est = combine_circuit_averages(obs, per_obs[obs], n_time)
        rows.append({
            "schema_version": str(SCHEMA_VERSION),
            "alpha": str(spec.alpha), "N": str(spec.N),
            "p_s": format_float(spec.p_s), "p_u": format_float(spec.p_u),
            "engine": cfg.engine, "gate_family": spec.gate_family,
            "observable": obs,
            "mean_abs": format_float(est.mean_abs),
            "std_error": format_float(est.std_error),
            "n_circuits": str(est.n_circuits),
            "n_time_samples": str(est.n_time_samples),
            "master_seed": str(spec.master_seed),
        })
    return rows


def run_sweep(cfg: SweepConfig, progress=None) -> str:
    """Execute every point not already present in the output CSV."""
    if progress is None:
        progress = lambda msg: print(msg, file=sys.stderr, flush=True)
    rows: List[Dict[str, str]] = []
    if os.path.exists(cfg.output):
        rows = load_rows(cfg.output)
    done = {row_key(r) for r in rows}
    points = cfg.points()
    for i, pt in enumerate(points):
        want = _expected_observables(cfg, pt["alpha"])
        keys = [(pt["alpha"], pt["N"], format_float(pt["p_s"]),
                 format_float(pt["p_u"]), cfg.engine, obs, cfg.master_seed)
                for obs in want]
        if all(k in done for k in keys):
            progress("point %d/%d already done, skipping" % (i + 1, len(points)))
            continue
        progress("point %d/%d: alpha=%d N=%d p_s=%s p_u=%s" % (
            i + 1, len(points), pt["alpha"], pt["N"],
            format_float(pt["p_s"]), format_float(pt["p_u"])))
        new_rows = run_point(cfg, pt, progress=progress)
        rows = [r for r in rows if row_key(r) not in {row_key(nr) for nr in new_rows}]
        rows.extend(new_rows)
        write_rows(cfg.output, rows)
        done.update(row_key(r) for r in new_rows)
    write_rows(cfg.output, rows)
    return cfg.output


def load_config(path: str) -> SweepConfig:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError("%s: invalid JSON (%s)" % (path, exc)) from None
    cfg = SweepConfig.from_json(doc)
    # relative outputs are taken relative to the config file, not the cwd
    if not os.path.isabs(cfg.output):
        cfg.output = os.path.join(os.path.dirname(os.path.abspath(path)), cfg.output)
    return cfg
