"""Signed N-qubit Pauli strings and the operator families of the cluster circuits.

A Pauli string is stored in symplectic form: x and z bitmasks (bit j-1 = site j,
sites are 1-based in every public interface) plus a phase exponent k with the
operator equal to i**k times the tensor product of single-site Paulis. Each
site factor is the honest Pauli matrix selected by its (x, z) bits, with
(1, 1) = Y. Hermitian strings have k in {0, 2}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet

_PHASE_STR = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_SITE_CHAR = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}


class PauliError(ValueError):
    pass


@dataclass(frozen=True)
class PauliString:
    """Immutable signed Pauli operator on n qubits."""

    n: int
    x: int
    z: int
    phase: int = 0  # power of i, 0..3

    def __post_init__(self):
        mask = (1 << self.n) - 1
        if self.x & ~mask or self.z & ~mask:
            raise PauliError("x/z bits outside the %d-qubit register" % self.n)
        object.__setattr__(self, "phase", self.phase & 3)

    # -- algebra ---------------------------------------------------------

    def multiply(self, other: "PauliString") -> "PauliString":
        """Operator product self * other with exact phase tracking."""
        if self.n != other.n:
            raise PauliError("size mismatch: %d vs %d" % (self.n, other.n))
        x3 = self.x ^ other.x
        z3 = self.z ^ other.z
        g = (
            (self.x & self.z).bit_count()
            + (other.x & other.z).bit_count()
            + 2 * (self.z & other.x).bit_count()
            - (x3 & z3).bit_count()
        )
        return PauliString(self.n, x3, z3, (self.phase + other.phase + g) & 3)

    def __mul__(self, other: "PauliString") -> "PauliString":
        return self.multiply(other)

    def commutes(self, other: "PauliString") -> bool:
        """True iff the symplectic form has even parity."""
        if self.n != other.n:
            raise PauliError("size mismatch: %d vs %d" % (self.n, other.n))
        return ((self.x & other.z).bit_count() + (self.z & other.x).bit_count()) % 2 == 0

    @property
    def is_hermitian(self) -> bool:
        return self.phase in (0, 2)

    @property
    def sign(self) -> int:
        """+1 or -1 for a Hermitian string."""
        if not self.is_hermitian:
            raise PauliError("phase is imaginary; operator is not Hermitian")
        return 1 if self.phase == 0 else -1

    @property
    def phase_value(self) -> complex:
        return 1j ** self.phase

    def negate(self) -> "PauliString":
        return PauliString(self.n, self.x, self.z, self.phase + 2)

    def with_sign(self, sign: int) -> "PauliString":
        return PauliString(self.n, self.x, self.z, 0 if sign > 0 else 2)

    def support(self) -> FrozenSet[int]:
        """Set of sites (1-based) acted on nontrivially."""
        bits = self.x | self.z
        return frozenset(i + 1 for i in range(self.n) if (bits >> i) & 1)

    def translate(self, shift: int, periodic: bool = False) -> "PauliString":
        """Shift all site indices by `shift` (positive = rightwards)."""
        if shift == 0:
            return self
        mask = (1 << self.n) - 1
        if periodic:
            s = shift % self.n
            x = ((self.x << s) | (self.x >> (self.n - s))) & mask
            z = ((self.z << s) | (self.z >> (self.n - s))) & mask
        else:
            x = (self.x << shift) if shift > 0 else (self.x >> -shift)
            z = (self.z << shift) if shift > 0 else (self.z >> -shift)
            if x.bit_count() != self.x.bit_count() or z.bit_count() != self.z.bit_count():
                raise PauliError("translation moves support outside [1, %d]" % self.n)
        return PauliString(self.n, x, z, self.phase)

    def restrict(self, first: int, last: int) -> "PauliString":
        """Restriction to the window [first, last] as a (last-first+1)-qubit string."""
        m = last - first + 1
        mask = (1 << m) - 1
        return PauliString(m, (self.x >> (first - 1)) & mask, (self.z >> (first - 1)) & mask, self.phase)

    # -- construction ----------------------------------------------------

    @staticmethod
    def identity(n: int) -> "PauliString":
        return PauliString(n, 0, 0, 0)

    @staticmethod
    def from_sites(n: int, sites: Dict[int, str], sign: int = 1) -> "PauliString":
        """Build from a {site: 'X'|'Y'|'Z'} map, e.g. {1: 'X', 2: 'Z'}."""
        x = z = 0
        for site, kind in sites.items():
            if not 1 <= site <= n:
                raise PauliError("site %d outside [1, %d]" % (site, n))
            bit = 1 << (site - 1)
            if kind in ("X", "Y"):
                x |= bit
            if kind in ("Z", "Y"):
                z |= bit
            if kind not in ("X", "Y", "Z"):
                raise PauliError("unknown Pauli letter %r" % kind)
        return PauliString(n, x, z, 0 if sign > 0 else 2)

    @staticmethod
    def single(n: int, site: int, kind: str, sign: int = 1) -> "PauliString":
        return PauliString.from_sites(n, {site: kind}, sign)

    # -- text form -------------------------------------------------------

    def __str__(self) -> str:
        terms = []
        for i in range(self.n):
            c = _SITE_CHAR[((self.x >> i) & 1, (self.z >> i) & 1)]
            if c != "I":
                terms.append("%s%d" % (c, i + 1))
        body = " ".join(terms) if terms else "I"
        return _PHASE_STR[self.phase] + body

    @staticmethod
    def parse(text: str, n: int) -> "PauliString":
        """Inverse of str(); accepts e.g. '+X1 Z2 X3', '-i Y2', '+I'."""
        t = text.strip()
        phase = 0
        for prefix, k in (("+i", 1), ("-i", 3), ("+", 0), ("-", 2)):
            if t.startswith(prefix):
                phase = k
                t = t[len(prefix):]
                break
        x = z = 0
        for term in t.split():
            if term == "I":
                continue
            kind, site = term[0], int(term[1:])
            if not 1 <= site <= n:
                raise PauliError("site %d outside [1, %d]" % (site, n))
            bit = 1 << (site - 1)
            if kind in ("X", "Y"):
                x |= bit
            if kind in ("Z", "Y"):
                z |= bit
            if kind not in ("X", "Y", "Z"):
                raise PauliError("bad term %r" % term)
        return PauliString(n, x, z, phase)


# -- operator families -----------------------------------------------------


def cluster_op(alpha: int, i: int, n: int, boundary: str = "open") -> PauliString:
    """Cluster operator X Z^(alpha-1) X starting at site i."""
    sites = _span_sites(i, alpha + 1, n, boundary)
    ops = {sites[0]: "X", sites[-1]: "X"}
    for s in sites[1:-1]:
        ops[s] = "Z"
    return PauliString.from_sites(n, ops)


def symmetry_op(alpha: int, r: int, n: int) -> PauliString:
    """Global symmetry: product of Z over sites congruent to r (mod alpha), r in 1..alpha."""
    if not 1 <= r <= alpha:
        raise PauliError("symmetry index %d outside 1..%d" % (r, alpha))
    z = 0
    for s in range(r, n + 1, alpha):
        z |= 1 << (s - 1)
    return PauliString(n, 0, z, 0)


def trivial_string_op(alpha: int, j: int, k: int, n: int, boundary: str = "open") -> PauliString:
    """Sparse Z string: product of Z at sites alpha*i for i in j+1..k."""
    if k <= j:
        raise PauliError("string needs k > j (got j=%d, k=%d)" % (j, k))
    ops = {}
    for i in range(j + 1, k + 1):
        for s in _span_sites(alpha * i, 1, n, boundary):
            ops[s] = "Z"
    return PauliString.from_sites(n, ops)


def spt_string_op(alpha: int, j: int, k: int, n: int, boundary: str = "open") -> PauliString:
    """X-endpoint string: X at alpha*j and alpha*k, Z blocks of width alpha-1 between."""
    if k <= j:
        raise PauliError("string needs k > j (got j=%d, k=%d)" % (j, k))
    ops = {_span_sites(alpha * j, 1, n, boundary)[0]: "X",
           _span_sites(alpha * k, 1, n, boundary)[0]: "X"}
    for i in range(j + 1, k + 1):
        for s in _span_sites(alpha * i - alpha + 1, alpha - 1, n, boundary):
            ops[s] = "Z"
    return PauliString.from_sites(n, ops)


def local_order_op(alpha: int, i: int, n: int, boundary: str = "open") -> PauliString:
    """Symmetry-breaking local operator X (Y X)^((alpha-1)/2) starting at site i."""
    if alpha % 2 == 0:
        raise PauliError("local order parameter requires odd alpha (got %d)" % alpha)
    sites = _span_sites(i, alpha, n, boundary)
    ops = {}
    for t, s in enumerate(sites):
        ops[s] = "X" if t % 2 == 0 else "Y"
    return PauliString.from_sites(n, ops)


_BUILDERS = {
    "cluster": cluster_op,
    "string_trivial": trivial_string_op,
    "string_spt": spt_string_op,
    "local_M": local_order_op,
}


def build_operator(kind: str, alpha: int, *args, n: int, boundary: str = "open") -> PauliString:
    """Dispatch to the named operator family ('symmetry' takes r, strings take j, k)."""
    if kind == "symmetry":
        return symmetry_op(alpha, *args, n)
    try:
        builder = _BUILDERS[kind]
    except KeyError:
        raise PauliError("unknown operator kind %r" % kind) from None
    return builder(alpha, *args, n, boundary)


def _span_sites(start: int, length: int, n: int, boundary: str) -> list:
    if boundary == "periodic":
        return [(start - 1 + t) % n + 1 for t in range(length)]
    if boundary != "open":
        raise PauliError("boundary must be 'open' or 'periodic', got %r" % boundary)
    if start < 1 or start + length - 1 > n:
        raise PauliError(
            "support [%d, %d] outside the open chain [1, %d]" % (start, start + length - 1, n)
        )
    return list(range(start, start + length))
