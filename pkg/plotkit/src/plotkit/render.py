"""Deterministic renderers for the five figure kinds.

Inputs are the frozen result-table CSV schema and the report JSON documents of
the simulation package; this package does no science beyond axis transforms
(scaling-collapse parameters and extrapolation exponents arrive via --config).
Rendering is a pure function of inputs: fixed style, pinned SVG hash salt,
no timestamps — the same table yields a byte-identical image.
"""

from __future__ import annotations

import csv
from typing import Dict, List, Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

FIGURE_KINDS = ("orderparams", "extrapolation", "spectrum", "phase-diagram",
                "collapse")

CSV_COLUMNS = [
    "schema_version", "alpha", "N", "p_s", "p_u", "engine", "gate_family",
    "observable", "mean_abs", "std_error", "n_circuits", "n_time_samples",
    "master_seed",
]

# region semantics: SPT purple, trivial orange, volume green, SSB magenta,
# undetermined grey
OBSERVABLE_COLORS = {"S_spt": "#7b2d8b", "S_triv": "#e07b27",
                     "S_half": "#2d8b57", "C_M": "#c02090"}
LABEL_COLORS = {"SPT": "#7b2d8b", "trivial": "#e07b27", "volume": "#2d8b57",
                "SPT+SSB": "#c02090", "undetermined": "#9b9b9b"}

_RC = {
    "figure.figsize": (5.0, 3.4),
    "figure.dpi": 120,
    "savefig.dpi": 120,
    "font.family": "DejaVu Sans",
    "font.size": 9.0,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "svg.hashsalt": "plotkit",
    "legend.fontsize": 7.5,
}


class RenderError(ValueError):
    pass


def load_table(path: str) -> List[Dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_COLUMNS:
            raise RenderError("%s: unexpected CSV header (want the frozen "
                              "result-table schema)" % path)
        rows = [dict(r) for r in reader]
    if not rows:
        raise RenderError("%s: empty table" % path)
    return rows


def _series(rows, keys) -> Dict[Tuple, List[dict]]:
    out: Dict[Tuple, List[dict]] = {}
    for row in rows:
        out.setdefault(tuple(row[k] for k in keys), []).append(row)
    return {k: out[k] for k in sorted(out)}


def _save(fig, out_path: str) -> None:
    # Date metadata would break byte-identical re-rendering of SVGs
    fig.savefig(out_path, metadata={"Date": None}
                if out_path.endswith(".svg") else None)
    plt.close(fig)


def _new_figure():
    fig, ax = plt.subplots()
    return fig, ax


def render_orderparams(rows, out_path: str, config: dict) -> None:
    """Order parameters vs measurement rate, one curve per (observable, N)."""
    fig, ax = _new_figure()
    for (obs, n), grp in _series(rows, ("observable", "N")).items():
        pts = sorted((float(r["p_s"]), float(r["mean_abs"]),
                      float(r["std_error"])) for r in grp)
        xs, ys, es = zip(*pts)
        color = OBSERVABLE_COLORS.get(obs)
        ax.errorbar(xs, ys, yerr=es, marker="o", markersize=3, linewidth=1,
                    color=color, alpha=0.4 + 0.6 * _depth(n, rows),
                    label="%s, N=%s" % (obs, n))
    ax.set_xlabel(r"$p_s$")
    ax.set_ylabel("order parameter")
    ax.set_title(config.get("title", "string order parameters"))
    ax.legend()
    _save(fig, out_path)


def _depth(n: str, rows) -> float:
    """0..1 rank of a system size among those present (darker = larger)."""
    sizes = sorted({int(r["N"]) for r in rows})
    if len(sizes) == 1:
        return 1.0
    return sizes.index(int(n)) / (len(sizes) - 1)


def render_extrapolation(rows, out_path: str, config: dict) -> None:
    """Order parameter vs N^(-eta) per (observable, p_s), with a dashed
    least-squares line through each transformed series."""
    eta = float(config.get("eta", 1.0))
    fig, ax = _new_figure()
    for (obs, p_s), grp in _series(rows, ("observable", "p_s")).items():
        pts = sorted((float(r["N"]) ** (-eta), float(r["mean_abs"]),
                      float(r["std_error"])) for r in grp)
        xs, ys, es = (np.array(v) for v in zip(*pts))
        line = ax.errorbar(xs, ys, yerr=es, marker="s", markersize=4,
                           linestyle="none",
                           color=OBSERVABLE_COLORS.get(obs),
                           label="%s, $p_s$=%s" % (obs, p_s))
        if len(xs) >= 2:
            slope, icept = np.polyfit(xs, ys, 1)
            grid = np.array([0.0, xs.max() * 1.05])
            ax.plot(grid, slope * grid + icept, "--", linewidth=1,
                    color=line.lines[0].get_color(), dashes=(4, 3))
    ax.set_xlabel(r"$N^{-\eta}$  ($\eta$=%g)" % eta)
    ax.set_ylabel("order parameter")
    ax.set_xlim(left=0)
    ax.set_title(config.get("title", "finite-size extrapolation"))
    ax.legend()
    _save(fig, out_path)


def load_spectrum(path: str) -> List[Tuple[int, float]]:
    """Spectrum CSV: columns step,value (squared Schmidt coefficients)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["step", "value"]:
            raise RenderError("%s: spectrum tables need columns step,value" % path)
        out = [(int(r["step"]), float(r["value"])) for r in reader]
    if not out:
        raise RenderError("%s: empty table" % path)
    return out


def render_spectrum(records: Sequence[Tuple[int, float]], out_path: str,
                    config: dict) -> None:
    """Entanglement-spectrum strips: -ln(lambda^2) per selected time step."""
    floor = float(config.get("floor", 1e-12))
    fig, ax = _new_figure()
    steps = sorted({s for s, _ in records})
    for i, step in enumerate(steps):
        values = [v for s, v in records if s == step and v > floor]
        ax.plot([i] * len(values), [-np.log(v) for v in values],
                marker="_", markersize=14, linestyle="none", color="#7b2d8b")
    ax.set_xticks(range(len(steps)), [str(s) for s in steps])
    ax.set_xlabel("time step")
    ax.set_ylabel(r"$-\ln \lambda^2$")
    ax.set_title(config.get("title", "entanglement spectrum"))
    ax.grid(axis="x")
    _save(fig, out_path)


def render_phase_diagram(doc: dict, out_path: str, config: dict) -> None:
    """(p_s, p_u) grid colored by phase label; undetermined cells grey."""
    points = doc.get("points")
    if doc.get("mode") != "phase-diagram" or not points:
        raise RenderError("phase-diagram figures need a phase-diagram report "
                          "JSON with a non-empty points list")
    ps_grid = sorted({pt["p_s"] for pt in points})
    pu_grid = sorted({pt["p_u"] for pt in points})
    fig, ax = _new_figure()
    ds = _cell(ps_grid)
    du = _cell(pu_grid)
    for pt in points:
        if pt["label"] not in LABEL_COLORS:
            raise RenderError("unknown phase label %r" % pt["label"])
        ax.add_patch(plt.Rectangle(
            (pt["p_s"] - ds / 2, pt["p_u"] - du / 2), ds, du,
            facecolor=LABEL_COLORS[pt["label"]], edgecolor="white",
            linewidth=0.4))
    handles = [plt.Rectangle((0, 0), 1, 1, facecolor=c)
               for label, c in LABEL_COLORS.items()
               if any(pt["label"] == label for pt in points)]
    names = [label for label in LABEL_COLORS
             if any(pt["label"] == label for pt in points)]
    ax.set_xlim(ps_grid[0] - ds / 2, ps_grid[-1] + ds / 2)
    ax.set_ylim(pu_grid[0] - du / 2, pu_grid[-1] + du / 2)
    ax.set_xlabel(r"$p_s$")
    ax.set_ylabel(r"$p_u$")
    ax.grid(False)
    ax.set_title(config.get("title", "phase diagram"))
    ax.legend(handles, names, loc="upper right")
    _save(fig, out_path)


def _cell(grid: Sequence[float]) -> float:
    if len(grid) < 2:
        return 0.02
    return min(b - a for a, b in zip(grid, grid[1:]))


def render_collapse(rows, out_path: str, config: dict) -> None:
    """Scaling collapse: y = S * N^eta vs x = (p_s - p_c) * N^(1/nu)."""
    for key in ("p_c", "eta", "nu"):
        if key not in config:
            raise RenderError("collapse figures need %r in --config "
                              "(from the collapse report)" % key)
    p_c, eta, nu = (float(config[k]) for k in ("p_c", "eta", "nu"))
    observable = config.get("observable")
    if observable is not None:
        rows = [r for r in rows if r["observable"] == observable]
        if not rows:
            raise RenderError("no rows with observable %r" % observable)
    fig, ax = _new_figure()
    for (n,), grp in _series(rows, ("N",)).items():
        size = float(n)
        pts = sorted(((float(r["p_s"]) - p_c) * size ** (1.0 / nu),
                      float(r["mean_abs"]) * size ** eta) for r in grp)
        xs, ys = zip(*pts)
        ax.plot(xs, ys, marker="o", markersize=3, linewidth=1,
                alpha=0.4 + 0.6 * _depth(n, rows), color="#7b2d8b",
                label="N=%s" % n)
    ax.set_xlabel(r"$(p_s - p_c)\,N^{1/\nu}$")
    ax.set_ylabel(r"$S\,N^{\eta}$")
    ax.set_title(config.get("title",
                            r"collapse: $p_c$=%g, $\eta$=%g, $\nu$=%g"
                            % (p_c, eta, nu)))
    ax.legend()
    _save(fig, out_path)


def render(kind: str, in_path: str, out_path: str,
           config: Optional[dict] = None) -> str:
    """Render one figure kind from its input file; returns out_path."""
    if kind not in FIGURE_KINDS:
        raise RenderError("unknown figure kind %r (choose from %s)"
                          % (kind, ", ".join(FIGURE_KINDS)))
    if not (out_path.endswith(".svg") or out_path.endswith(".png")):
        raise RenderError("output must be .svg or .png")
    config = dict(config or {})
    with plt.rc_context(_RC):
        if kind == "orderparams":
            render_orderparams(load_table(in_path), out_path, config)
        elif kind == "extrapolation":
            render_extrapolation(load_table(in_path), out_path, config)
        elif kind == "spectrum":
            render_spectrum(load_spectrum(in_path), out_path, config)
        elif kind == "phase-diagram":
            import json
            with open(in_path, encoding="utf-8") as fh:
                render_phase_diagram(json.load(fh), out_path, config)
        else:
            render_collapse(load_table(in_path), out_path, config)
    return out_path
