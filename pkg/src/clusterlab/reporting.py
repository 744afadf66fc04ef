"""Report generation: result CSV -> fit / collapse / phase-label JSON."""

from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from . import duality
from .analysis import (AnalysisError, classify_phase, fit_collapse, fit_power_law,
                       locate_critical)
from .sweep import ConfigError, load_rows


def _series_by(rows, keys):
    """Group rows into {key_tuple: [row, ...]}."""
    out: Dict[Tuple, List[dict]] = {}
    for row in rows:
        key = tuple(row[k] for k in keys)
        out.setdefault(key, []).append(row)
    return out


def _size_series(rows) -> List[Tuple[float, float, float]]:
    return [(float(r["N"]), float(r["mean_abs"]), float(r["std_error"])) for r in rows]


def build_report(table_path: str, mode: str, observable: Optional[str] = None) -> dict:
    if mode == "duality":
        return {"mode": "duality",
                "suites": [duality.run_duality_suite(a, 4 * a if 4 * a >= 2 * a + 2 else 2 * a + 2,
                                                     seeds=5, steps=100, p_s=0.5)
                           for a in (1, 2, 3)]}
    rows = load_rows(table_path)
    if observable is not None:
        rows = [r for r in rows if r["observable"] == observable]
    rows = [r for r in rows if r["observable"] not in ("S_half", "schmidt")
            or mode == "collapse"]
    if not rows:
        raise ConfigError("no rows to analyze (missing observables?)")
    if mode == "extrapolate":
        return _extrapolate_report(rows)
    if mode == "phase-diagram":
        return _phase_report(rows)
    if mode == "collapse":
        return _collapse_report(rows)
    raise ConfigError("unknown report mode %r" % mode)


def _extrapolate_report(rows) -> dict:
    groups = _series_by(rows, ("alpha", "p_u", "observable", "p_s"))
    fits = []
    for (alpha, p_u, obs, p_s), grp in sorted(groups.items()):
        series = _size_series(grp)
        if len({n for n, _, _ in series}) < 4:
            raise ConfigError("need >= 4 sizes for extrapolation "
                              "(alpha=%s p_u=%s %s p_s=%s)" % (alpha, p_u, obs, p_s))
        fit = fit_power_law(series, n_min=0)
        fits.append({"alpha": int(alpha), "p_u": float(p_u), "observable": obs,
                     "p_s": float(p_s), "eta": fit.eta, "c": fit.c, "b": fit.b,
                     "b_err": fit.b_err, "residual": fit.residual,
                     "constrained_b0_residual": fit.constrained_b0_residual})
    return {"mode": "extrapolate", "fits": fits}


def _phase_report(rows) -> dict:
    groups = _series_by(rows, ("alpha", "p_s", "p_u"))
    points = []
    for (alpha, p_s, p_u), grp in sorted(groups.items()):
        by_obs = _series_by(grp, ("observable",))
        fits = {}
        for (obs,), obs_rows in by_obs.items():
            series = _size_series(obs_rows)
            if len(series) < 3:
                continue
            fits[obs] = fit_power_law(series, n_min=0, min_sizes=3)
        if "S_spt" not in fits or "S_triv" not in fits:
            raise ConfigError("phase-diagram mode needs S_spt and S_triv at "
                              "alpha=%s p_s=%s p_u=%s" % (alpha, p_s, p_u))
        cm = fits.get("C_M")
        label = classify_phase(fits["S_spt"].b, fits["S_spt"].b_err,
                               fits["S_triv"].b, fits["S_triv"].b_err,
                               b_cm=cm.b if cm else None,
                               err_cm=cm.b_err if cm else None)
        points.append({"alpha": int(alpha), "p_s": float(p_s), "p_u": float(p_u),
                       "label": label,
                       "b": {obs: fit.b for obs, fit in fits.items()},
                       "b_err": {obs: fit.b_err for obs, fit in fits.items()}})
    return {"mode": "phase-diagram", "points": points}


def _collapse_report(rows) -> dict:
    string_rows = [r for r in rows if r["observable"] in ("S_triv", "S_spt")]
    groups = _series_by(string_rows, ("alpha", "p_u", "observable"))
    results = []
    for (alpha, p_u, obs), grp in sorted(groups.items()):
        sweep: Dict[float, List[Tuple[float, float, float]]] = {}
        for row in grp:
            sweep.setdefault(float(row["p_s"]), []).append(
                (float(row["N"]), float(row["mean_abs"]), float(row["std_error"])))
        try:
            critical = locate_critical(sweep)
        except AnalysisError as exc:
            results.append({"alpha": int(alpha), "p_u": float(p_u),
                            "observable": obs, "error": str(exc)})
            continue
        eta = critical.fits[critical.p_c].constrained_b0_eta
        data = [(float(r["N"]), float(r["p_s"]), float(r["mean_abs"])) for r in grp]
        collapse = fit_collapse(data, critical.p_c, eta)
        results.append({"alpha": int(alpha), "p_u": float(p_u), "observable": obs,
                        "p_c": critical.p_c, "p_c_uncertainty": critical.uncertainty,
                        "eta": eta, "nu": collapse.nu, "quality": collapse.quality})
    return {"mode": "collapse", "results": results}
