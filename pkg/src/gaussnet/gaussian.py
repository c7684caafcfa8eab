"""Gaussian-integer lattice arithmetic and network topology construction.

A network is generated by a modulus ``alpha = a + bi`` with ``a, b >= 1``,
``gcd(a, b) = 1`` and ``norm(alpha) = a**2 + b**2 >= 5``.  Its nodes are the
residue classes of Z[i] modulo alpha (there are exactly ``norm(alpha)`` of
them) and each node is linked to the four residues reached by adding one of
the unit direction vectors ``+i, -i, +1, -1``.  Because ``gcd(a, b) = 1`` the
residue ring is cyclic, so nodes also carry a dense integer index in
``[0, N)`` obtained through the root ``s`` of ``s**2 = -1 (mod N)``; in index
space the graph is the circulant with steps ``{+-1, +-s}``.

Residue classes are represented by their centered representative: the unique
class member ``r`` whose components of ``r * conj(alpha) / N`` lie in
``(-1/2, 1/2)``.  Centered coordinates are what the router distance metric,
the quadrant decomposition and the learning agent's observations operate on.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from collections import deque
from typing import Iterable

import numpy as np

__all__ = [
    "GaussianInt",
    "NetworkModulus",
    "Topology",
    "Quadrant",
    "DIRECTIONS",
    "canonical_residue",
    "node_index",
    "build_topology",
    "quadrant_of",
    "bfs_distance",
    "bfs_distances_from",
    "euclid_dist2",
]


@dataclass(frozen=True)
class GaussianInt:
    """A lattice point x + yi with exact integer components."""

    re: int
    im: int

    def __add__(self, other: GaussianInt) -> GaussianInt:
        return GaussianInt(self.re + other.re, self.im + other.im)

    def __sub__(self, other: GaussianInt) -> GaussianInt:
        return GaussianInt(self.re - other.re, self.im - other.im)

    def __mul__(self, other: GaussianInt) -> GaussianInt:
        return GaussianInt(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __neg__(self) -> GaussianInt:
        return GaussianInt(-self.re, -self.im)

    def conj(self) -> GaussianInt:
        return GaussianInt(self.re, -self.im)

    def norm(self) -> int:
        """Field norm re**2 + im**2; zero only for the zero element."""
        return self.re * self.re + self.im * self.im

    def __str__(self) -> str:
        return f"{self.re}{self.im:+d}i"

    @classmethod
    def parse(cls, text: str) -> GaussianInt:
        """Parse 'a+bi' / 'a-bi' (also bare integers like '3')."""
        s = text.strip().replace(" ", "")
        if not s.endswith("i"):
            return cls(int(s), 0)
        body = s[:-1]
        # split at the sign of the imaginary part (skip a leading sign)
        for pos in range(len(body) - 1, 0, -1):
            if body[pos] in "+-":
                im_part = body[pos:]
                return cls(int(body[:pos]), int(im_part) if im_part not in "+-" else int(im_part + "1"))
        raise ValueError(f"cannot parse Gaussian integer from {text!r}")


ZERO = GaussianInt(0, 0)

#: Unit moves in the fixed direction order +i, -i, +1, -1 (up, down, right, left).
DIRECTIONS: tuple[GaussianInt, ...] = (
    GaussianInt(0, 1),
    GaussianInt(0, -1),
    GaussianInt(1, 0),
    GaussianInt(-1, 0),
)


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended Euclid: returns (g, x, y) with a*x + b*y = g."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    return old_r, old_x, old_y


@dataclass(frozen=True)
class NetworkModulus:
    """A validated network generator alpha together with derived constants.

    ``iso_root`` is the residue s with ``a + b*s = 0 (mod N)``; it satisfies
    ``s**2 = -1 (mod N)`` and realises the ring isomorphism
    ``Z[i]/(alpha) -> Z_N`` via ``x + yi -> x + y*s``.
    """

    alpha: GaussianInt
    n_nodes: int
    iso_root: int

    @classmethod
    def create(cls, alpha: GaussianInt) -> NetworkModulus:
        a, b = alpha.re, alpha.im
        if a < 1 or b < 1:
            raise ValueError(f"modulus {alpha} rejected: need re >= 1 and im >= 1")
        g, _, binv = _egcd(a, b)
        if g != 1:
            raise ValueError(f"modulus {alpha} rejected: gcd({a}, {b}) = {g} != 1")
        n = alpha.norm()
        if n < 5:
            raise ValueError(f"modulus {alpha} rejected: norm {n} < 5")
        # b is invertible mod N because gcd(b, a^2 + b^2) = gcd(b, a^2) = 1
        g, binv, _ = _egcd(b % n, n)
        assert g == 1
        s = (-a * binv) % n
        assert (a + b * s) % n == 0
        assert (s * s + 1) % n == 0
        return cls(alpha=alpha, n_nodes=n, iso_root=s)

    @classmethod
    def from_k(cls, k: int) -> NetworkModulus:
        """The paper's one-parameter family alpha = k + (k+1)i."""
        return cls.create(GaussianInt(k, k + 1))


def _round_nearest_half_down(p: int, n: int) -> int:
    """Nearest integer to p/n (n > 0), exact ties rounded toward -inf.

    Ties cannot actually occur for valid moduli (N is odd), but the rule is
    fixed so the reduction is total over all of Z[i].
    """
    return -((n - 2 * p) // (2 * n))


def canonical_residue(z: GaussianInt, m: NetworkModulus) -> GaussianInt:
    """Centered representative of z modulo alpha.

    Computes ``q = round(z * conj(alpha) / N)`` componentwise in exact integer
    arithmetic and returns ``z - q * alpha``.  Idempotent, and the result's
    components of ``r * conj(alpha) / N`` lie in (-1/2, 1/2).
    """
    n = m.n_nodes
    zc = z * m.alpha.conj()
    q = GaussianInt(
        _round_nearest_half_down(zc.re, n),
        _round_nearest_half_down(zc.im, n),
    )
    return z - q * m.alpha


def node_index(z: GaussianInt, m: NetworkModulus) -> int:
    """Dense index in [0, N) of the residue class of z.

    Well defined on whole classes: alpha and i*alpha both map to 0 under
    ``x + y*s (mod N)``.
    """
    return (z.re + z.im * m.iso_root) % m.n_nodes


class Quadrant(enum.Enum):
    """Sign-based partition of the nonzero centered residues.

    Multiplication by i cycles Q1 -> Q2 -> Q3 -> Q4 -> Q1; the origin is the
    unique fixed point.
    """

    ORIGIN = "origin"
    Q1 = "Q1"  # x >= 0, y > 0
    Q2 = "Q2"  # x < 0,  y >= 0
    Q3 = "Q3"  # x <= 0, y < 0
    Q4 = "Q4"  # x > 0,  y <= 0


def _quadrant_of_coord(x: int, y: int) -> Quadrant:
    if x == 0 and y == 0:
        return Quadrant.ORIGIN
    if x >= 0 and y > 0:
        return Quadrant.Q1
    if x < 0 and y >= 0:
        return Quadrant.Q2
    if x <= 0 and y < 0:
        return Quadrant.Q3
    return Quadrant.Q4


@dataclass(frozen=True)
class Topology:
    """Immutable degree-4 graph over the residues of alpha.

    ``adjacency[c][j]`` is the index of the neighbour of node c in direction
    ``DIRECTIONS[j]``; ``centered_coords[c]`` is the centered representative
    of node c.  Arrays are marked read-only so the instance can be shared
    freely across workers.
    """

    modulus: NetworkModulus
    adjacency: np.ndarray      # (N, 4) int32
    centered_coords: np.ndarray  # (N, 2) int64
    coord_scale: int           # max |component| over all centered coords

    @property
    def n_nodes(self) -> int:
        return self.modulus.n_nodes

    def coord(self, node: int) -> GaussianInt:
        x, y = self.centered_coords[node]
        return GaussianInt(int(x), int(y))

    def neighbors(self, node: int) -> tuple[int, int, int, int]:
        return tuple(int(v) for v in self.adjacency[node])

    def quadrant(self, node: int) -> Quadrant:
        x, y = self.centered_coords[node]
        return _quadrant_of_coord(int(x), int(y))

    def quadrant_nodes(self, q: Quadrant) -> list[int]:
        return [c for c in range(self.n_nodes) if self.quadrant(c) == q]


def build_topology(m: NetworkModulus) -> Topology:
    """Construct the network graph for a validated modulus."""
    n = m.n_nodes
    adjacency = np.empty((n, 4), dtype=np.int32)
    coords = np.empty((n, 2), dtype=np.int64)
    for c in range(n):
        r = canonical_residue(GaussianInt(c, 0), m)
        coords[c] = (r.re, r.im)
        for j, d in enumerate(DIRECTIONS):
            adjacency[c, j] = node_index(r + d, m)
    topo = Topology(
        modulus=m,
        adjacency=adjacency,
        centered_coords=coords,
        coord_scale=int(np.abs(coords).max()),
    )
    adjacency.setflags(write=False)
    coords.setflags(write=False)
    return topo


def quadrant_of(node: int, t: Topology) -> Quadrant:
    """Quadrant label of a node's centered representative."""
    return t.quadrant(node)


def _as_fault_lookup(faults) -> frozenset[int]:
    if faults is None:
        return frozenset()
    nodes = getattr(faults, "nodes", faults)
    return frozenset(int(v) for v in nodes)


def bfs_distance(t: Topology, src: int, dst: int, faults=None) -> int | None:
    """Minimum fault-avoiding hop count from src to dst, or None if cut off.

    Oracle for the routers: every delivered route must use at least this many
    hops.  src and dst must not be faulty.
    """
    blocked = _as_fault_lookup(faults)
    if src in blocked or dst in blocked:
        raise ValueError("bfs_distance endpoints must not be faulty")
    if src == dst:
        return 0
    dist = bfs_distances_from(t, src, blocked)
    d = int(dist[dst])
    return None if d < 0 else d


def bfs_distances_from(t: Topology, src: int, faults: Iterable[int] = ()) -> np.ndarray:
    """Hop distances from src to every node (-1 where unreachable or faulty)."""
    blocked = _as_fault_lookup(faults)
    n = t.n_nodes
    dist = np.full(n, -1, dtype=np.int64)
    if src in blocked:
        return dist
    dist[src] = 0
    queue = deque([src])
    adj = t.adjacency
    while queue:
        u = queue.popleft()
        du = dist[u]
        for v in adj[u]:
            v = int(v)
            if dist[v] < 0 and v not in blocked:
                dist[v] = du + 1
                queue.append(v)
    return dist


def euclid_dist2(a: int, b: int, t: Topology, mode: str = "plain") -> int:
    """Squared Euclidean distance between two nodes' centered coordinates.

    ``plain`` subtracts coordinates with no modular reduction, which is how
    the greedy router scores candidates (it cannot see wrap-around edges).
    ``modular`` reduces the difference first and is the wrap-aware variant.
    """
    ax, ay = t.centered_coords[a]
    bx, by = t.centered_coords[b]
    dx, dy = int(ax - bx), int(ay - by)
    if mode == "plain":
        return dx * dx + dy * dy
    if mode == "modular":
        r = canonical_residue(GaussianInt(dx, dy), t.modulus)
        return r.norm()
    raise ValueError(f"unknown distance mode {mode!r}")
