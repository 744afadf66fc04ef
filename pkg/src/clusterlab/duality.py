"""Measurement-only duality: the Z <-> cluster swap on periodic chains.

Labels follow the centered convention: the cluster operator with label c is
X Z^(alpha-1) X centered at c, where c runs over the integers for even alpha
and over the half-integers for odd alpha. All positions are stored as doubled
integers (coordinate = 2 * position), so half-integer dual sites are exact.
For even alpha the dual circuit lives on the same lattice; for odd alpha it
lives on the dual lattice whose qubit k sits at position k - 1/2.

The checks are exact, not statistical: the swap image of every stabilizer
generator must be a member (unsigned) of the dual state's stabilizer group at
every step, and the entropy difference of mapped contiguous regions must
never exceed 2*alpha. Signed membership is tracked and reported separately.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import gf2
from .pauli import PauliString, symmetry_op
from .tableau import StabilizerState, TableauError

Z_MEAS = "z"
G_MEAS = "g"


class DualityError(RuntimeError):
    pass


@dataclass(frozen=True)
class DualLattice:
    """Doubled-coordinate bookkeeping for one (alpha, N) periodic chain."""

    alpha: int
    N: int

    def __post_init__(self):
        if self.N % self.alpha != 0:
            raise DualityError("N must be a multiple of alpha")
        if self.N < 2 * self.alpha + 2:
            raise DualityError("chain too short for the duality map")

    @property
    def dual_offset(self) -> int:
        """Coordinate of dual qubit 1: odd alpha shifts by half a site."""
        return 1 if self.alpha % 2 else 2

    def site_coord(self, qubit: int) -> int:
        return 2 * qubit

    def z_labels(self) -> List[int]:
        """Coordinates of the N single-site Z measurements."""
        return [2 * i for i in range(1, self.N + 1)]

    def g_labels(self) -> List[int]:
        """Coordinates of the N cluster-operator centers."""
        if self.alpha % 2 == 0:
            return [2 * i for i in range(1, self.N + 1)]
        return [2 * i - 1 for i in range(1, self.N + 1)]

    def _qubit_at(self, coord: int, offset: int) -> int:
        delta = coord - offset
        if delta % 2 != 0:
            raise DualityError("coordinate %d is not a site of this register" % coord)
        return (delta // 2) % self.N + 1

    def z_op(self, coord: int, dual: bool = False) -> PauliString:
        offset = self.dual_offset if dual else 2
        return PauliString.single(self.N, self._qubit_at(coord, offset), "Z")

    def g_op(self, coord: int, dual: bool = False) -> PauliString:
        """Cluster operator centered at coord/2 on the chosen register."""
        offset = self.dual_offset if dual else 2
        sites = {}
        for t in range(self.alpha + 1):
            c = coord - self.alpha + 2 * t
            q = self._qubit_at(c, offset)
            sites[q] = "X" if t in (0, self.alpha) else "Z"
        return PauliString.from_sites(self.N, sites)

    def operator(self, kind: str, coord: int, dual: bool = False) -> PauliString:
        if kind == Z_MEAS:
            return self.z_op(coord, dual)
        if kind == G_MEAS:
            return self.g_op(coord, dual)
        raise DualityError("unknown measurement kind %r" % kind)

    def dual_region(self, region: Sequence[int]) -> List[int]:
        """Image of a set of original qubits on the dual register."""
        if self.alpha % 2 == 0:
            return list(region)
        # original qubit i (position i) maps to position i + 1/2 = dual qubit i + 1
        return [i % self.N + 1 for i in region]

    def initial_state(self, dual: bool = False) -> StabilizerState:
        if not dual:
            gens = [PauliString.single(self.N, i, "Z") for i in range(1, self.N - self.alpha + 1)]
        else:
            # the dual circuit's cluster operators are centered on the
            # original integer labels (they act on the dual register)
            gens = [self.g_op(c, dual=True) for c in self.z_labels()[: self.N - self.alpha]]
        gens += [symmetry_op(self.alpha, r, self.N) for r in range(1, self.alpha + 1)]
        return StabilizerState.from_stabilizers(gens)


def sample_realization(lattice: DualLattice, steps: int, p_s: float,
                       rng: np.random.Generator) -> List[Tuple[str, int]]:
    """Random measurement-only realization as (kind, coordinate) records."""
    z_labels = lattice.z_labels()
    g_labels = lattice.g_labels()
    out = []
    for _ in range(steps):
        if rng.random() < p_s:
            out.append((Z_MEAS, z_labels[int(rng.integers(0, lattice.N))]))
        else:
            out.append((G_MEAS, g_labels[int(rng.integers(0, lattice.N))]))
    return out


def dualize(realization: Sequence[Tuple[str, int]], alpha: int, N: int
            ) -> List[Tuple[str, int]]:
    """Swap Z and cluster measurements record by record (labels kept)."""
    out = []
    for kind, coord in realization:
        if kind not in (Z_MEAS, G_MEAS):
            raise DualityError("realization contains a non-measurement record %r" % (kind,))
        out.append((G_MEAS if kind == Z_MEAS else Z_MEAS, coord))
    return out


class _SwapChecker:
    """Decompose stabilizers over {Z} u {g} and swap-check against the dual."""

    def __init__(self, lattice: DualLattice):
        self.lattice = lattice
        self.z_ops = [lattice.z_op(c) for c in lattice.z_labels()]
        self.g_ops = [lattice.g_op(c) for c in lattice.g_labels()]
        # swap keeps the label: Z at an integer label -> cluster at that label
        # (on the dual register), cluster at its label -> Z at that label
        self.dual_g_of_z = [lattice.g_op(c, dual=True) for c in lattice.z_labels()]
        self.dual_z_of_g = [lattice.z_op(c, dual=True) for c in lattice.g_labels()]
        rows = [_xz(p) for p in self.z_ops + self.g_ops]
        self.solver = gf2.Solver(rows)

    def swap_image(self, s: PauliString) -> Optional[PauliString]:
        """Image of s under Z_i -> g_i, g_j -> Z_j; None if not decomposable."""
        combo = self.solver.solve(_xz(s))
        if combo is None:
            return None
        n = self.lattice.N
        img = PauliString.identity(n)
        for i in range(n):
            if combo >> i & 1:
                img = img.multiply(self.dual_g_of_z[i])
        for j in range(n):
            if combo >> (n + j) & 1:
                img = img.multiply(self.dual_z_of_g[j])
        return img


@dataclass
class LemmaReport:
    passed: bool
    checks: int
    signed_matches: int
    sign_mismatches: int
    witness: Optional[dict] = None


def verify_lemma(realization: Sequence[Tuple[str, int]], alpha: int, N: int,
                 seed: int) -> LemmaReport:
    """Run original and dual circuits step-locked; after every measurement,
    the swap image of each stabilizer generator must lie (unsigned) in the
    dual group. Signed membership is tallied but does not gate the result."""
    lattice = DualLattice(alpha, N)
    checker = _SwapChecker(lattice)
    original = lattice.initial_state()
    dual = lattice.initial_state(dual=True)
    dual_records = dualize(realization, alpha, N)
    rng = np.random.default_rng(seed)
    checks = signed = mismatches = 0
    for step, ((kind, coord), (dkind, dcoord)) in enumerate(zip(realization, dual_records)):
        op = lattice.operator(kind, coord)
        dop = lattice.operator(dkind, dcoord, dual=True)
        outcome = original.measure_pauli(op, rng)
        try:
            dual.measure_pauli(dop, forced_outcome=outcome)
        except TableauError:
            mismatches += 1
            dual.measure_pauli(dop, forced_outcome=dual.expectation(dop))
        dual_rows = [_xz(g) for g in dual.stabilizers]
        dual_span = gf2.Solver(dual_rows)
        for gen in original.stabilizers:
            image = checker.swap_image(gen)
            if image is None:
                raise DualityError(
                    "stabilizer not decomposable over {Z} u {g} at step %d" % step)
            checks += 1
            if not dual_span.contains(_xz(image)):
                return LemmaReport(False, checks, signed, mismatches, witness={
                    "step": step, "kind": kind, "coordinate": coord,
                    "generator": str(gen), "image": str(image)})
            if dual.expectation(image) == 1:
                signed += 1
    return LemmaReport(True, checks, signed, mismatches)


def verify_entropy_bound(realization: Sequence[Tuple[str, int]], alpha: int,
                         N: int, seed: int,
                         regions: Optional[Sequence[Sequence[int]]] = None
                         ) -> float:
    """Max over steps and contiguous regions of S_dual(image) - S_original."""
    lattice = DualLattice(alpha, N)
    original = lattice.initial_state()
    dual = lattice.initial_state(dual=True)
    if regions is None:
        regions = [[(start + t) % N + 1 for t in range(length)]
                   for start in range(N) for length in range(1, N)]
    region_pairs = [(list(r), lattice.dual_region(r)) for r in regions]
    # entropies do not depend on measurement outcomes; any branch will do
    rng = np.random.default_rng(seed)
    worst = 0.0
    dual_records = dualize(realization, alpha, N)
    for (kind, coord), (dkind, dcoord) in zip(realization, dual_records):
        original.measure_pauli(lattice.operator(kind, coord), rng)
        dual.measure_pauli(lattice.operator(dkind, dcoord, dual=True), rng)
        for region, image in region_pairs:
            diff = dual.entanglement_entropy(image) - original.entanglement_entropy(region)
            if diff > worst:
                worst = float(diff)
    return worst


def run_duality_suite(alpha: int, N: int, seeds: int, steps: int, p_s: float
                      ) -> dict:
    """Lemma + entropy bound over random realizations; JSON-friendly report."""
    lemma_pass = True
    total_checks = 0
    total_signed = 0
    total_mismatch = 0
    witness = None
    worst_gap = 0.0
    for seed in range(seeds):
        rng = np.random.default_rng(1000 + seed)
        lattice = DualLattice(alpha, N)
        realization = sample_realization(lattice, steps, p_s, rng)
        report = verify_lemma(realization, alpha, N, seed)
        total_checks += report.checks
        total_signed += report.signed_matches
        total_mismatch += report.sign_mismatches
        if not report.passed:
            lemma_pass = False
            witness = report.witness
            break
        gap = verify_entropy_bound(realization, alpha, N, seed)
        worst_gap = max(worst_gap, gap)
    bound_ok = worst_gap <= 2 * alpha
    return {
        "alpha": alpha, "N": N, "seeds": seeds, "steps": steps, "p_s": p_s,
        "lemma_passed": lemma_pass, "membership_checks": total_checks,
        "signed_matches": total_signed, "sign_mismatches": total_mismatch,
        "entropy_bound_max_gap": worst_gap, "entropy_bound_limit": 2 * alpha,
        "entropy_bound_passed": bound_ok,
        "passed": lemma_pass and bound_ok,
        "witness": witness,
    }


def _xz(p: PauliString) -> int:
    return p.x | (p.z << p.n)
