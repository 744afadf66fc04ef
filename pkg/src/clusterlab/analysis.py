"""Finite-size analysis: power-law extrapolation, critical-point location,
scaling collapse and phase classification over ObservableEstimate tables.

The extrapolation model is f(N) = c * N**(-eta) + b. For fixed eta the model
is linear in (c, b), so the inner problem is solved in closed form and eta is
found by golden-section search on log(eta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

ETA_RANGE = (0.1, 4.0)
NU_RANGE = (0.5, 3.0)
_ERR_FLOOR = 1e-6


class AnalysisError(ValueError):
    pass


@dataclass(frozen=True)
class FitResult:
    eta: float
    c: float
    b: float
    b_err: float
    residual: float
    constrained_b0_residual: float
    constrained_b0_eta: float
    n_points: int

    def __post_init__(self):
        if self.residual < 0 or self.constrained_b0_residual < 0:
            raise AnalysisError("residuals must be nonnegative")


@dataclass(frozen=True)
class CollapseResult:
    nu: float
    p_c: float
    eta: float
    quality: float
    n_points: int

    def __post_init__(self):
        if self.nu <= 0:
            raise AnalysisError("nu must be positive")


@dataclass(frozen=True)
class CriticalPoint:
    p_c: float
    uncertainty: float
    fits: Dict[float, FitResult]


def _golden_min(fn, lo: float, hi: float, iters: int = 120) -> float:
    """Golden-section minimizer of fn over [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fn(d)
    return (a + b) / 2.0


def _linear_fit(ns, ys, ws, eta: float, with_offset: bool):
    """Closed-form weighted LSQ of y ~ c*N^-eta (+ b). Returns (c, b, var_b, res)."""
    basis = ns ** (-eta)
    if with_offset:
        X = np.stack([basis, np.ones_like(basis)], axis=1)
    else:
        X = basis[:, None]
    W = ws[:, None]
    gram = X.T @ (W * X)
    try:
        cov = np.linalg.inv(gram)
    except np.linalg.LinAlgError:
        return 0.0, 0.0, 0.0, float("inf")
    coef = cov @ (X.T @ (ws * ys))
    model = X @ coef
    res = float(np.sum(ws * (ys - model) ** 2))
    if with_offset:
        return float(coef[0]), float(coef[1]), float(cov[1, 1]), res
    return float(coef[0]), 0.0, 0.0, res


def _prepare(series) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    pts = sorted((float(n), float(y), float(e)) for n, y, e in series)
    ns = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    es = np.maximum(np.array([p[2] for p in pts]), _ERR_FLOOR)
    if len(set(ns.tolist())) != len(ns):
        raise AnalysisError("duplicate system sizes in series")
    return ns, ys, 1.0 / es ** 2


def fit_power_law(series: Sequence[Tuple[float, float, float]],
                  n_min: float = 64, min_sizes: int = 4) -> FitResult:
    """Weighted fit of (N, mean_abs, std_error) points to c*N^-eta + b.

    Sizes below n_min are dropped (small sizes converge nonmonotonically).
    Also reports the best b = 0 constrained fit for critical-point ratios.
    """
    kept = [(n, y, e) for n, y, e in series if float(n) >= n_min]
    ns, ys, ws = _prepare(kept)
    if len(ns) < min_sizes:
        raise AnalysisError("need >= %d sizes (got %d)" % (min_sizes, len(ns)))
    lo, hi = math.log(ETA_RANGE[0]), math.log(ETA_RANGE[1])

    def free_obj(t):
        return _linear_fit(ns, ys, ws, math.exp(t), True)[3]

    def b0_obj(t):
        return _linear_fit(ns, ys, ws, math.exp(t), False)[3]

    eta = math.exp(_golden_min(free_obj, lo, hi))
    c, b, var_b, res = _linear_fit(ns, ys, ws, eta, True)
    eta0 = math.exp(_golden_min(b0_obj, lo, hi))
    _, _, _, res0 = _linear_fit(ns, ys, ws, eta0, False)
    return FitResult(eta=eta, c=c, b=b, b_err=math.sqrt(max(var_b, 0.0)),
                     residual=res, constrained_b0_residual=res0,
                     constrained_b0_eta=eta0, n_points=len(ns))


def locate_critical(sweep: Dict[float, Sequence[Tuple[float, float, float]]],
                    n_min: float = 0, signal_floor: float = 0.02
                    ) -> CriticalPoint:
    """Grid point where the order parameter decays as a pure power law.

    With >= 4 sizes per point: minimize constrained_b0_residual / residual,
    requiring the fitted offset b to be consistent with 0 at 2 sigma. With 3
    sizes the unconstrained fit is exact, so the constrained reduced chi^2 is
    minimized instead. Points without resolvable signal at the smallest size
    (mean < max(signal_floor, 5*err)) are outside the decaying branch and are
    skipped. Uncertainty is half the grid spacing, widened to a full spacing
    when the neighboring point scores within 10%.
    """
    if len(sweep) < 2:
        raise AnalysisError("need at least two grid points")
    grid = sorted(sweep)
    spacing = min(b - a for a, b in zip(grid, grid[1:]))
    scores: Dict[float, float] = {}
    fits: Dict[float, FitResult] = {}
    for p in grid:
        kept = [(n, y, e) for n, y, e in sweep[p] if float(n) >= n_min]
        if len(kept) < 3:
            raise AnalysisError("need >= 3 sizes at p=%g" % p)
        ns, ys, es = zip(*sorted(kept))
        if ys[0] < max(signal_floor, 5.0 * max(es[0], _ERR_FLOOR)):
            continue
        fit = fit_power_law(kept, n_min=n_min, min_sizes=3)
        fits[p] = fit
        if len(kept) >= 4:
            if abs(fit.b) > 2.0 * fit.b_err:
                continue
            scores[p] = fit.constrained_b0_residual / max(fit.residual, 1e-12)
        else:
            scores[p] = fit.constrained_b0_residual  # reduced chi^2, 1 dof
    if not scores:
        raise AnalysisError("no candidate critical point in range")
    p_c = min(scores, key=scores.get)
    unc = spacing / 2.0
    best = scores[p_c]
    for q in scores:
        if q != p_c and abs(q - p_c) <= spacing * 1.5 and scores[q] <= 1.1 * best:
            unc = spacing
            break
    return CriticalPoint(p_c=p_c, uncertainty=unc, fits=fits)


def fit_collapse(data: Sequence[Tuple[float, float, float]], p_c: float,
                 eta: float, nu_range: Tuple[float, float] = NU_RANGE
                 ) -> CollapseResult:
    """Best nu for the ansatz S(p, N) = N^-eta * F((p - p_c) * N^(1/nu)).

    data: (N, p, S) triples. Points are rescaled to (x, y) =
    ((p - p_c) * N^(1/nu), S * N^eta); the objective is the mean squared
    deviation of each size's points from the piecewise-linear master curve
    interpolated through the other sizes' points (cross-size quality
    function). nu is found by golden-section search.
    """
    by_size: Dict[float, List[Tuple[float, float]]] = {}
    for n, p, s in data:
        by_size.setdefault(float(n), []).append((float(p), float(s)))
    if len(by_size) < 3:
        raise AnalysisError("collapse needs >= 3 system sizes")

    sizes = sorted(by_size)

    def objective(nu: float) -> float:
        rescaled = {}
        for n in sizes:
            pts = sorted((((p - p_c) * n ** (1.0 / nu)), s * n ** eta)
                         for p, s in by_size[n])
            rescaled[n] = (np.array([x for x, _ in pts]), np.array([y for _, y in pts]))
        total = 0.0
        count = 0
        for n in sizes:
            ox = np.concatenate([rescaled[m][0] for m in sizes if m != n])
            oy = np.concatenate([rescaled[m][1] for m in sizes if m != n])
            order = np.argsort(ox)
            ox, oy = ox[order], oy[order]
            xs, ys = rescaled[n]
            inside = (xs >= ox[0]) & (xs <= ox[-1])
            if not inside.any():
                continue
            interp = np.interp(xs[inside], ox, oy)
            total += float(np.sum((ys[inside] - interp) ** 2))
            count += int(inside.sum())
        if count == 0:
            return float("inf")
        return total / count

    nu = _golden_min(objective, nu_range[0], nu_range[1])
    quality = objective(nu)
    if not math.isfinite(quality):
        raise AnalysisError("rescaled x-ranges do not overlap")
    return CollapseResult(nu=nu, p_c=p_c, eta=eta, quality=quality,
                          n_points=len(data))


def entropy_collapse_data(table: Dict[float, Dict[float, float]], p_c: float
                          ) -> List[Tuple[float, float, float]]:
    """Transform S(p, N) into S(p, N) - S(p_c, N) for the eta = 0 variant.

    table: {N: {p: S}}; p_c must be on every size's grid.
    """
    out = []
    for n, row in table.items():
        if p_c not in row:
            raise AnalysisError("p_c=%g missing from the N=%g grid" % (p_c, n))
        ref = row[p_c]
        for p, s in row.items():
            out.append((n, p, s - ref))
    return out


def classify_phase(b_spt: float, err_spt: float, b_triv: float, err_triv: float,
                   b_cm: Optional[float] = None, err_cm: Optional[float] = None
                   ) -> str:
    """Label from extrapolated offsets, judged at 2 sigma."""

    def positive(b, e):
        return b > 2.0 * e

    def zero(b, e):
        return abs(b) <= 2.0 * e

    spt_pos, spt_zero = positive(b_spt, err_spt), zero(b_spt, err_spt)
    triv_pos, triv_zero = positive(b_triv, err_triv), zero(b_triv, err_triv)
    if spt_pos and triv_zero:
        if b_cm is not None and positive(b_cm, err_cm):
            return "SPT+SSB"
        return "SPT"
    if triv_pos and spt_zero:
        return "trivial"
    if spt_zero and triv_zero:
        if b_cm is None or zero(b_cm, err_cm):
            return "volume"
    return "undetermined"
