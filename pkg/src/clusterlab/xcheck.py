"""Cross-engine oracle: replay stabilizer trajectories on the dense engine.

The tableau engine runs a Clifford circuit and records every measurement
outcome; the dense engine replays the identical operation sequence with forced
outcomes. Expectation values must agree to 1e-10 and entanglement entropies to
1e-9 at every probed step — Gottesman-Knill makes any discrepancy a bug.
"""

from __future__ import annotations

from typing import List

from .circuit import (KIND_CLUSTER, KIND_UNITARY, CircuitSpec, GatePool,
                      draw_step, trajectory_streams)
from .dense import DenseState
from .observables import centered_placement, _placed
from .pauli import PauliString, cluster_op, spt_string_op, symmetry_op, trivial_string_op
from .tableau import StabilizerState

EXPECTATION_TOL = 1e-10
ENTROPY_TOL = 1e-9


def probe_operators(alpha: int, n: int) -> List[PauliString]:
    ops = [symmetry_op(alpha, r, n) for r in range(1, alpha + 1)]
    ops += [cluster_op(alpha, i, n) for i in range(1, n - alpha + 1, 2)]
    if n >= 4 * alpha:
        for s in range(alpha):
            placement = centered_placement(alpha, n, s)
            ops.append(_placed(trivial_string_op, placement))
            ops.append(_placed(spt_string_op, placement))
    return ops


def run_xcheck(alpha: int, n_qubits: int, seeds: int, steps: int,
               p_s: float = 0.3, p_u: float = 0.2, master_seed: int = 9000) -> dict:
    """Run the replay comparison; returns a JSON-friendly report."""
    spec = CircuitSpec(alpha=alpha, N=n_qubits, p_s=p_s,
                       p_t=1.0 - p_s - p_u, p_u=p_u,
                       gate_family="clifford" if p_u > 0 else "none",
                       burn_in_steps=0, sample_steps=steps,
                       master_seed=master_seed)
    probes = probe_operators(alpha, n_qubits)
    worst_exp = 0.0
    worst_ent = 0.0
    comparisons = 0
    for tid in range(seeds):
        circuit_rng, gate_rng, outcome_rng = trajectory_streams(spec, tid)
        pool = GatePool(spec, gate_rng)
        matrices = [g.to_matrix() for g in pool.gates]
        tab = StabilizerState.product_state(n_qubits, spec.initial_sign)
        dense = DenseState.product_state(n_qubits, spec.initial_sign)
        for _ in range(steps):
            kinds, positions, gate_idx = draw_step(spec, circuit_rng)
            for t in range(kinds.shape[0]):
                pos = int(positions[t]) + 1
                if kinds[t] == KIND_UNITARY:
                    gate = pool.gates[int(gate_idx[t])]
                    tab.apply_clifford(gate, pos)
                    dense.apply_local_unitary(matrices[int(gate_idx[t])], pos)
                else:
                    if kinds[t] == KIND_CLUSTER:
                        op = cluster_op(alpha, pos, n_qubits)
                    else:
                        op = PauliString.single(n_qubits, pos, "Z")
                    outcome = tab.measure_pauli(op, outcome_rng)
                    dense.measure_pauli(op, forced_outcome=outcome)
            for p in probes:
                diff = abs(tab.expectation(p) - dense.expectation(p))
                worst_exp = max(worst_exp, diff)
                comparisons += 1
            for cut in range(1, n_qubits):
                diff = abs(tab.entanglement_entropy(range(1, cut + 1))
                           - dense.entanglement_entropy(cut))
                worst_ent = max(worst_ent, diff)
                comparisons += 1
    passed = worst_exp <= EXPECTATION_TOL and worst_ent <= ENTROPY_TOL
    return {
        "alpha": alpha, "N": n_qubits, "seeds": seeds, "steps": steps,
        "p_s": p_s, "p_u": p_u, "comparisons": comparisons,
        "max_expectation_diff": worst_exp, "max_entropy_diff": worst_ent,
        "expectation_tolerance": EXPECTATION_TOL, "entropy_tolerance": ENTROPY_TOL,
        "passed": passed,
    }
