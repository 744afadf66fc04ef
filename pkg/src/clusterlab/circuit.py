"""Trajectory sampling and execution for the generalized cluster circuit.

A time step is N operations, each drawn independently: a cluster-operator
measurement with probability p_t, a single-site Z measurement with probability
p_s, or a symmetry-preserving (alpha+1)-site unitary with probability p_u.

Randomness is split into three child streams of SeedSequence(master_seed,
trajectory_id): a circuit stream (operation kinds, positions, gate selectors,
drawn as three arrays of N uniforms per step), a gate stream (the per-trajectory
gate pool) and an outcome stream (measurement branches; only the signed engines
consume it). The circuit an engine executes therefore depends only on
(master_seed, trajectory_id), identically across engines.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np

from .clifford import CliffordGate, sample_symmetric_clifford
from .dense import DenseState, sample_symmetric_haar_gate
from .fast_engine import FastStabilizerSim, pack_gate_pool
from .pauli import PauliString, cluster_op
from .tableau import StabilizerState

KIND_CLUSTER = 0
KIND_Z = 1
KIND_UNITARY = 2

_KIND_NAMES = {KIND_CLUSTER: "cluster_meas", KIND_Z: "z_meas", KIND_UNITARY: "unitary"}

DEFAULT_POOL_SIZE = 256


class CircuitError(ValueError):
    pass


@dataclass(frozen=True)
class CircuitSpec:
    """Full determination of a trajectory ensemble."""

    alpha: int
    N: int
    p_s: float
    p_t: float
    p_u: float
    boundary: str = "open"
    gate_family: str = "none"  # none | clifford | haar
    initial_sign: int = -1
    burn_in_steps: Optional[int] = None
    sample_steps: int = 100
    master_seed: int = 0
    trajectory_count: int = 1
    gate_pool_size: int = DEFAULT_POOL_SIZE

    def __post_init__(self):
        if self.alpha < 1:
            raise CircuitError("alpha must be positive")
        if self.N < 2 * self.alpha + 2:
            raise CircuitError("N must be at least 2*alpha + 2")
        if min(self.p_s, self.p_t, self.p_u) < 0:
            raise CircuitError("probabilities must be nonnegative")
        if abs(self.p_s + self.p_t + self.p_u - 1.0) > 1e-12:
            raise CircuitError("p_s + p_t + p_u must equal 1")
        if self.boundary not in ("open", "periodic"):
            raise CircuitError("boundary must be 'open' or 'periodic'")
        if self.gate_family not in ("none", "clifford", "haar"):
            raise CircuitError("unknown gate family %r" % self.gate_family)
        if (self.gate_family == "none") != (self.p_u == 0):
            raise CircuitError("gate_family is 'none' exactly when p_u == 0")

    @property
    def burn_in(self) -> int:
        return 2 * self.N if self.burn_in_steps is None else self.burn_in_steps

    @property
    def cluster_positions(self) -> int:
        """Number of legal left ends for cluster/unitary supports."""
        return self.N if self.boundary == "periodic" else self.N - self.alpha


@dataclass
class OperationRecord:
    kind: str  # cluster_meas | z_meas | unitary
    position: int  # 1-based left end (site for z_meas)
    outcome: Optional[int] = None
    gate_index: Optional[int] = None


def trajectory_streams(spec: CircuitSpec, trajectory_id: int):
    """(circuit_rng, gate_rng, outcome_rng) for one trajectory."""
    ss = np.random.SeedSequence(entropy=spec.master_seed, spawn_key=(trajectory_id,))
    c, g, o = ss.spawn(3)
    return (np.random.default_rng(c), np.random.default_rng(g), np.random.default_rng(o))


def make_clifford_gate(alpha: int, rng: np.random.Generator) -> CliffordGate:
    """Uniform symmetry-preserving Clifford on alpha+1 sites."""
    return sample_symmetric_clifford(alpha, rng)


def make_haar_gate(alpha: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random symmetry-preserving unitary on alpha+1 sites."""
    return sample_symmetric_haar_gate(alpha, rng)


class GatePool:
    """Per-trajectory pool of pre-sampled symmetric gates."""

    def __init__(self, spec: CircuitSpec, rng: np.random.Generator):
        self.family = spec.gate_family
        self.gates: List = []
        self.pool_x = np.zeros((1, 1), dtype=np.uint16)
        self.pool_z = np.zeros((1, 1), dtype=np.uint16)
        if spec.gate_family == "clifford":
            self.gates = [make_clifford_gate(spec.alpha, rng)
                          for _ in range(spec.gate_pool_size)]
            self.pool_x, self.pool_z = pack_gate_pool(self.gates)
        elif spec.gate_family == "haar":
            self.gates = [make_haar_gate(spec.alpha, rng)
                          for _ in range(spec.gate_pool_size)]


def draw_step(spec: CircuitSpec, rng: np.random.Generator):
    """One time step of operation draws: (kinds, positions0, gate_idx).

    positions0 are 0-based left ends; three arrays of N uniforms are consumed
    in a fixed order so every engine sees the same circuit.
    """
    N = spec.N
    kind_u = rng.random(N)
    pos_u = rng.random(N)
    gate_u = rng.random(N)
    kinds = np.full(N, KIND_CLUSTER, dtype=np.int8)
    kinds[kind_u >= spec.p_t] = KIND_Z
    kinds[kind_u >= spec.p_t + spec.p_s] = KIND_UNITARY
    positions = np.empty(N, dtype=np.int64)
    span = kinds != KIND_Z
    positions[span] = np.minimum(
        (pos_u[span] * spec.cluster_positions).astype(np.int64),
        spec.cluster_positions - 1,
    )
    positions[~span] = np.minimum((pos_u[~span] * N).astype(np.int64), N - 1)
    pool = max(spec.gate_pool_size, 1)
    gate_idx = np.minimum((gate_u * pool).astype(np.int64), pool - 1)
    return kinds, positions, gate_idx


def sample_operation(spec: CircuitSpec, rng: np.random.Generator) -> OperationRecord:
    """Draw a single unexecuted operation (kind + position)."""
    u = rng.random()
    if u < spec.p_t:
        return OperationRecord("cluster_meas", int(rng.integers(1, spec.cluster_positions + 1)))
    if u < spec.p_t + spec.p_s:
        return OperationRecord("z_meas", int(rng.integers(1, spec.N + 1)))
    return OperationRecord("unitary", int(rng.integers(1, spec.cluster_positions + 1)))


# -- engine adapters --------------------------------------------------------


class TableauEngine:
    """Signed reference engine: exact expectations including signs."""

    name = "tableau"

    def __init__(self, spec: CircuitSpec, pool: GatePool,
                 outcome_rng: np.random.Generator,
                 initial: Optional[StabilizerState] = None):
        if spec.gate_family == "haar":
            raise CircuitError("stabilizer engines cannot run haar gates")
        self.spec = spec
        self.pool = pool
        self.rng = outcome_rng
        self.state = initial if initial is not None else StabilizerState.product_state(
            spec.N, spec.initial_sign)

    def execute_step(self, kinds, positions, gate_idx, log=None):
        spec = self.spec
        for t in range(kinds.shape[0]):
            pos = int(positions[t]) + 1
            if kinds[t] == KIND_UNITARY:
                self.state.apply_clifford(self.pool.gates[int(gate_idx[t])], pos)
                if log is not None:
                    log.append(OperationRecord("unitary", pos, gate_index=int(gate_idx[t])))
            else:
                if kinds[t] == KIND_CLUSTER:
                    op = cluster_op(spec.alpha, pos, spec.N, spec.boundary)
                else:
                    op = PauliString.single(spec.N, pos, "Z")
                out = self.state.measure_pauli(op, self.rng)
                if log is not None:
                    log.append(OperationRecord(_KIND_NAMES[int(kinds[t])], pos, outcome=out))

    def string_value(self, p: PauliString) -> int:
        return self.state.expectation(p)

    def string_abs(self, p: PauliString) -> int:
        return abs(self.state.expectation(p))

    def entanglement_entropy(self, region) -> float:
        return self.state.entanglement_entropy(region)


class FastEngine:
    """Sign-free packed engine: magnitudes only, built for large N."""

    name = "fast"

    def __init__(self, spec: CircuitSpec, pool: GatePool,
                 outcome_rng: np.random.Generator,
                 initial: Optional[List[PauliString]] = None):
        if spec.gate_family == "haar":
            raise CircuitError("stabilizer engines cannot run haar gates")
        self.spec = spec
        self.pool = pool
        self.sim = FastStabilizerSim(spec.N, spec.alpha,
                                     periodic=spec.boundary == "periodic")
        if initial is not None:
            self.sim.set_rows(initial)

    def execute_step(self, kinds, positions, gate_idx, log=None):
        if log is not None:
            raise CircuitError("the sign-free engine cannot log outcomes")
        self.sim.run_ops(kinds, positions, gate_idx, self.pool.pool_x, self.pool.pool_z)

    def string_abs(self, p: PauliString) -> int:
        return self.sim.string_abs(p)

    def entanglement_entropy(self, region) -> float:
        return self.sim.entanglement_entropy(region)


class DenseEngine:
    """Exact statevector engine for haar-gate circuits at small N."""

    name = "dense"

    def __init__(self, spec: CircuitSpec, pool: GatePool,
                 outcome_rng: np.random.Generator,
                 initial: Optional[DenseState] = None):
        if spec.gate_family == "clifford":
            raise CircuitError("the dense engine runs haar or measurement-only circuits")
        self.spec = spec
        self.pool = pool
        self.rng = outcome_rng
        self.state = initial if initial is not None else DenseState.product_state(
            spec.N, spec.initial_sign)

    def execute_step(self, kinds, positions, gate_idx, log=None):
        spec = self.spec
        for t in range(kinds.shape[0]):
            pos = int(positions[t]) + 1
            if kinds[t] == KIND_UNITARY:
                self.state.apply_local_unitary(self.pool.gates[int(gate_idx[t])], pos)
                if log is not None:
                    log.append(OperationRecord("unitary", pos, gate_index=int(gate_idx[t])))
            else:
                if kinds[t] == KIND_CLUSTER:
                    op = cluster_op(spec.alpha, pos, spec.N, spec.boundary)
                else:
                    op = PauliString.single(spec.N, pos, "Z")
                out = self.state.measure_pauli(op, self.rng)
                if log is not None:
                    log.append(OperationRecord(_KIND_NAMES[int(kinds[t])], pos, outcome=out))

    def string_value(self, p: PauliString) -> float:
        return self.state.expectation(p)

    def string_abs(self, p: PauliString) -> float:
        return abs(self.state.expectation(p))

    def entanglement_entropy(self, region) -> float:
        # dense entropies are cut-based; region must be a prefix [1, cut]
        sites = sorted(region)
        if sites != list(range(1, len(sites) + 1)):
            raise CircuitError("dense entropy supports prefix regions only")
        return self.state.entanglement_entropy(len(sites))


_ENGINES = {"tableau": TableauEngine, "fast": FastEngine, "dense": DenseEngine}


def make_engine(name: str, spec: CircuitSpec, pool: GatePool,
                outcome_rng: np.random.Generator, initial=None):
    try:
        cls = _ENGINES[name]
    except KeyError:
        raise CircuitError("unknown engine %r" % name) from None
    return cls(spec, pool, outcome_rng, initial=initial)


@dataclass
class TrajectoryResult:
    trajectory_id: int
    time_averages: dict
    n_samples: int
    op_log: Optional[List[OperationRecord]] = None


def run_trajectory(spec: CircuitSpec, trajectory_id: int, engine: str = "fast",
                   observer: Optional[Callable] = None,
                   record_log: bool = False) -> TrajectoryResult:
    """Burn in, then sample: observer(step_index, engine) after each sampled step.

    The observer may return a {name: value} dict; returned values are
    time-averaged into the result. Fully deterministic in
    (spec, trajectory_id, engine).
    """
    circuit_rng, gate_rng, outcome_rng = trajectory_streams(spec, trajectory_id)
    pool = GatePool(spec, gate_rng)
    eng = make_engine(engine, spec, pool, outcome_rng)
    log: Optional[List[OperationRecord]] = [] if record_log else None
    sums: dict = {}
    counts: dict = {}
    n_samples = 0
    for step in range(spec.burn_in + spec.sample_steps):
        kinds, positions, gate_idx = draw_step(spec, circuit_rng)
        eng.execute_step(kinds, positions, gate_idx, log=log)
        if step >= spec.burn_in and observer is not None:
            n_samples += 1
            values = observer(step - spec.burn_in, eng)
            if values:
                for key, val in values.items():
                    sums[key] = sums.get(key, 0.0) + val
                    counts[key] = counts.get(key, 0) + 1
    averages = {k: v / counts[k] for k, v in sums.items()}
    return TrajectoryResult(trajectory_id, averages, n_samples, op_log=log)
