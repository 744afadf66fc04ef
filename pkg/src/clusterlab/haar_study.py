"""Desk-scale Haar-circuit study: order-parameter ordering and entanglement
spectrum multiplets from exact statevector trajectories.

The paper-scale MPS results are replaced by small-N dense runs: string order
parameters locate the SPT and trivial regions, and half-chain Schmidt spectra
probe the fourfold degeneracy expected in the SPT phase. Results are written
as a JSON document so downstream checks can consume a cached run.
"""

from __future__ import annotations

import json
from typing import Dict, List, Optional, Sequence

from .circuit import CircuitSpec, GatePool, draw_step, make_engine, trajectory_streams
from .observables import combine_circuit_averages, sublattice_average

TOP_K = 8
GROUP_SIZE = 4
SPREAD_TOL = 1e-6


def quadruplet_check(values: Sequence[float], top_k: int = TOP_K,
                     group_size: int = GROUP_SIZE,
                     tol: float = SPREAD_TOL) -> bool:
    """True when the top_k values split into consecutive groups of group_size
    with within-group relative spread below tol."""
    top = sorted(values, reverse=True)[:top_k]
    if len(top) < top_k:
        return False
    for start in range(0, top_k, group_size):
        group = top[start:start + group_size]
        if group[0] < 1e-12:
            continue  # a group of numerical zeros is exactly degenerate
        mean = sum(group) / len(group)
        if (group[0] - group[-1]) / mean >= tol:
            return False
    return True


def multiplet_signature(values: Sequence[float], top_k: int = TOP_K,
                        tol: float = SPREAD_TOL) -> List[int]:
    """Sizes of the degenerate multiplets among the top_k values, splitting
    whenever the relative gap between neighbors exceeds tol."""
    top = sorted(values, reverse=True)[:top_k]
    sizes = [1]
    for prev, cur in zip(top, top[1:]):
        if prev > 0 and (prev - cur) / prev < tol:
            sizes[-1] += 1
        else:
            sizes.append(1)
    return sizes


def run_haar_point(alpha: int, N: int, p_s: float, p_u: float,
                   n_trajectories: int, sample_steps: int, master_seed: int,
                   schmidt_cut: Optional[int] = None) -> dict:
    """Trajectory-ensemble estimates of both string orders plus per-snapshot
    Schmidt multiplet statistics at the given cut (default N/2)."""
    spec = CircuitSpec(alpha=alpha, N=N, p_s=p_s, p_t=1.0 - p_s - p_u, p_u=p_u,
                       gate_family="haar", sample_steps=sample_steps,
                       master_seed=master_seed, trajectory_count=n_trajectories)
    cut = N // 2 if schmidt_cut is None else schmidt_cut
    spt_means: List[float] = []
    triv_means: List[float] = []
    snapshots = 0
    quadruplet_pass = 0
    signatures: Dict[str, int] = {}
    for tid in range(n_trajectories):
        circuit_rng, gate_rng, outcome_rng = trajectory_streams(spec, tid)
        eng = make_engine("dense", spec, GatePool(spec, gate_rng), outcome_rng)
        spt_sum = triv_sum = 0.0
        for step in range(spec.burn_in + spec.sample_steps):
            eng.execute_step(*draw_step(spec, circuit_rng))
            if step < spec.burn_in:
                continue
            spt_sum += sublattice_average(eng, "string_spt", alpha, N)
            triv_sum += sublattice_average(eng, "string_trivial", alpha, N)
            spectrum = eng.state.schmidt_spectrum(cut)
            snapshots += 1
            if quadruplet_check(spectrum.values):
                quadruplet_pass += 1
            sig = ",".join(map(str, multiplet_signature(spectrum.values)))
            signatures[sig] = signatures.get(sig, 0) + 1
        spt_means.append(spt_sum / spec.sample_steps)
        triv_means.append(triv_sum / spec.sample_steps)
    spt = combine_circuit_averages("S_spt", spt_means, n_trajectories * sample_steps)
    triv = combine_circuit_averages("S_triv", triv_means, n_trajectories * sample_steps)
    return {
        "alpha": alpha, "N": N, "p_s": p_s, "p_u": p_u,
        "n_trajectories": n_trajectories, "sample_steps": sample_steps,
        "master_seed": master_seed, "schmidt_cut": cut,
        "S_spt": spt.mean_abs, "S_spt_err": spt.std_error,
        "S_triv": triv.mean_abs, "S_triv_err": triv.std_error,
        "schmidt_snapshots": snapshots,
        "schmidt_quadruplet_pass": quadruplet_pass,
        "multiplet_signatures": signatures,
    }


def run_haar_study(path: Optional[str] = None, n_trajectories: int = 200,
                   sample_steps: int = 10, master_seed: int = 606,
                   progress=None) -> dict:
    """Both fingerprint points (deep SPT and deep trivial) of the alpha=2
    Haar circuit at N=16, p_u=0.3; optionally cached to a JSON file."""
    points = []
    # fingerprint pair at p_u = 0.3, plus a measurement-dominated SPT
    # reference point where the spectrum structure is cleanest
    for p_s, p_u in ((0.10, 0.3), (0.50, 0.3), (0.10, 0.1)):
        if progress:
            progress("haar point p_s=%g p_u=%g" % (p_s, p_u))
        points.append(run_haar_point(2, 16, p_s, p_u, n_trajectories,
                                     sample_steps, master_seed))
    doc = {"study": "haar_alpha2_fingerprint", "points": points}
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return doc
