"""Order parameters on trajectory states: string placements, sublattice
averaging, the symmetry-breaking correlator, and |value| accumulation.

Observable ids used everywhere downstream (CSV, analysis): "S_triv", "S_spt",
"C_M", "S_half", "schmidt".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence

import numpy as np

from .pauli import local_order_op, spt_string_op, trivial_string_op

OBSERVABLE_IDS = ("S_triv", "S_spt", "C_M", "S_half", "schmidt")


class ObservableError(ValueError):
    pass


@dataclass(frozen=True)
class StringPlacement:
    """Centered finite-size placement of a string order parameter."""

    alpha: int
    N: int
    j: int
    k: int
    shift: int = 0  # sublattice displacement, 0..alpha-1


@dataclass(frozen=True)
class ObservableEstimate:
    observable_id: str
    mean_abs: float
    std_error: float
    n_circuits: int
    n_time_samples: int

    def __post_init__(self):
        if not 0.0 <= self.mean_abs:
            raise ObservableError("mean_abs must be nonnegative")
        if self.std_error < 0:
            raise ObservableError("std_error must be nonnegative")


def centered_placement(alpha: int, N: int, shift: int = 0) -> StringPlacement:
    """Frozen placement convention: the string occupies the central ~N/2 sites.

    With m = N // (2*alpha) string periods, endpoints are j = N // (4*alpha)
    and k = j + m - 1, so the operator spans alpha*(m-1) + 1 sites starting at
    site alpha*j + shift (exactly N/2 - 1 sites when N is a multiple of 4*alpha
    and alpha = 2). Golden-fixtured in tests; do not change casually.
    """
    if N < 4 * alpha:
        raise ObservableError("N must be at least 4*alpha for a centered string")
    if not 0 <= shift < alpha:
        raise ObservableError("shift must lie in [0, alpha)")
    m = N // (2 * alpha)
    j = N // (4 * alpha)
    k = j + m - 1
    if alpha * k + shift > N:
        raise ObservableError("placement leaves the chain")
    return StringPlacement(alpha, N, j, k, shift)


def _placed(op_builder, placement: StringPlacement):
    op = op_builder(placement.alpha, placement.j, placement.k, placement.N)
    if placement.shift:
        op = op.translate(placement.shift)
    return op


def eval_string_trivial(state, placement: StringPlacement):
    """Engine expectation of the sparse-Z string at the placement."""
    return _value(state, _placed(trivial_string_op, placement))


def eval_string_spt(state, placement: StringPlacement):
    """Engine expectation of the X-endpoint string at the placement."""
    return _value(state, _placed(spt_string_op, placement))


def eval_ssb_correlator(state, alpha: int, positions):
    """Expectation of M_j * M_k for the local order parameter (odd alpha)."""
    j, k = positions
    n = state.n if hasattr(state, "n") else state.spec.N
    a = local_order_op(alpha, j, n)
    b = local_order_op(alpha, k, n)
    prod = a.multiply(b)
    if a.support() & b.support():
        raise ObservableError("correlator supports overlap")
    return _value(state, prod)


def _value(state, op):
    # engine adapters expose string_value (signed) and/or string_abs
    if hasattr(state, "string_value"):
        return state.string_value(op)
    if hasattr(state, "string_abs"):
        return state.string_abs(op)
    return state.expectation(op)


def sublattice_average(state, kind: str, alpha: int, N: int) -> float:
    """Mean of |string value| over the alpha sublattice shifts."""
    if kind == "string_trivial":
        builder = trivial_string_op
    elif kind == "string_spt":
        builder = spt_string_op
    else:
        raise ObservableError("kind must be string_trivial or string_spt")
    total = 0.0
    for s in range(alpha):
        placement = centered_placement(alpha, N, s)
        total += abs(_value(state, _placed(builder, placement)))
    return total / alpha


def correlator_positions(alpha: int, N: int) -> tuple:
    """M endpoints mirroring the centered string: start sites of the two
    length-alpha factors at the ends of the central half chain."""
    placement = centered_placement(alpha, N)
    left = alpha * placement.j
    right = alpha * placement.k - alpha + 1
    return left, right


def accumulate(observable_id: str, per_circuit_values: Sequence[Iterable[float]]
               ) -> ObservableEstimate:
    """Collapse raw per-(circuit, time step) samples into an estimate.

    |value| is taken per sample before any averaging; the per-circuit time
    average is the independent unit for the standard error.
    """
    circuit_means: List[float] = []
    n_time = 0
    for values in per_circuit_values:
        vals = [abs(v) for v in values]
        if not vals:
            continue
        n_time += len(vals)
        circuit_means.append(float(np.mean(vals)))
    if not circuit_means:
        raise ObservableError("empty sample stream")
    n_circ = len(circuit_means)
    mean = float(np.mean(circuit_means))
    if n_circ > 1:
        err = float(np.std(circuit_means, ddof=1) / np.sqrt(n_circ))
    else:
        err = 0.0
    return ObservableEstimate(observable_id, mean, err, n_circ, n_time)


def combine_circuit_averages(observable_id: str, circuit_means: Sequence[float],
                             n_time_samples: int) -> ObservableEstimate:
    """Same estimate when only per-circuit means are available (sweep path);
    the means must already be averages of |value|."""
    if len(circuit_means) == 0:
        raise ObservableError("empty sample stream")
    arr = np.asarray(circuit_means, dtype=float)
    err = float(np.std(arr, ddof=1) / np.sqrt(arr.size)) if arr.size > 1 else 0.0
    return ObservableEstimate(observable_id, float(arr.mean()), err,
                              arr.size, n_time_samples)


class StandardObserver:
    """Per-step observable evaluation for run_trajectory.

    Returns a dict of |values| per sampled step: sublattice-averaged string
    orders, optionally the SSB correlator (odd alpha) and the half-chain
    entropy on a stride.
    """

    def __init__(self, alpha: int, N: int, with_correlator: bool = False,
                 entropy_stride: int = 0):
        self.alpha = alpha
        self.N = N
        self.entropy_stride = entropy_stride
        self.triv_ops = []
        self.spt_ops = []
        for s in range(alpha):
            placement = centered_placement(alpha, N, s)
            self.triv_ops.append(_placed(trivial_string_op, placement))
            self.spt_ops.append(_placed(spt_string_op, placement))
        self.corr_op = None
        if with_correlator:
            if alpha % 2 == 0:
                raise ObservableError("correlator requires odd alpha")
            left, right = correlator_positions(alpha, N)
            a = local_order_op(alpha, left, N)
            b = local_order_op(alpha, right, N)
            if a.support() & b.support():
                raise ObservableError("correlator supports overlap")
            self.corr_op = a.multiply(b)
        self.half_region = range(1, N // 2 + 1)

    def __call__(self, step: int, engine) -> Dict[str, float]:
        out = {
            "S_triv": float(np.mean([abs(_value(engine, op)) for op in self.triv_ops])),
            "S_spt": float(np.mean([abs(_value(engine, op)) for op in self.spt_ops])),
        }
        if self.corr_op is not None:
            out["C_M"] = abs(_value(engine, self.corr_op))
        if self.entropy_stride and step % self.entropy_stride == 0:
            out["S_half"] = float(engine.entanglement_entropy(self.half_region))
        return out
