"""Weighted undirected graphs with self-loops, and exact modularity evaluation.

Self-loop convention, used consistently across the whole package:

* a loop of weight ``l`` at vertex ``i`` is stored once,
* it contributes ``2*l`` to ``deg(i)``,
* it contributes ``l`` (once) to the total weight ``M``,
* the adjacency diagonal is taken as ``A_ii = 2*l``, so the pair-sum and the
  per-community forms of modularity agree bit-for-bit.

This is the only convention under which contracting a community into a
super-vertex (Louvain coarsening) and the loop-augmentation transforms keep
every degree/volume identity exact.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Graph",
    "Clustering",
    "modularity",
    "modularity_pair_sum",
    "modularity_two_community",
    "modularity_matrix",
    "merge_delta",
]


class Graph:
    """Immutable weighted undirected multigraph with self-loops.

    Vertices are ids ``0..n-1``.  Parallel edges are collapsed into a single
    edge carrying the summed weight; off-diagonal weights must be strictly
    positive, loop weights nonnegative.
    """

    def __init__(self, n, edges=(), loops=None):
        """Build a graph from ``(u, v, w)`` triples (``w`` defaults to 1).

        ``u == v`` entries are treated as self-loops of loop-weight ``w``.
        ``loops`` optionally gives per-vertex loop weights added on top.
        """
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        self._n = int(n)
        loop_acc = np.zeros(self._n, dtype=np.float64)
        if loops is not None:
            loops = np.asarray(loops, dtype=np.float64)
            if loops.shape != (self._n,):
                raise ValueError("loops must have length n")
            if np.any(loops < 0):
                raise ValueError("loop weights must be nonnegative")
            loop_acc += loops
        acc: dict[tuple[int, int], float] = {}
        for entry in edges:
            if len(entry) == 2:
                u, v = entry
                w = 1.0
            else:
                u, v, w = entry
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < self._n and 0 <= v < self._n):
                raise ValueError(f"edge ({u},{v}) out of range for n={self._n}")
            if u == v:
                if w < 0:
                    raise ValueError(f"negative loop weight at {u}")
                loop_acc[u] += w
                continue
            if w <= 0:
                raise ValueError(f"edge ({u},{v}) has non-positive weight {w}")
            key = (u, v) if u < v else (v, u)
            acc[key] = acc.get(key, 0.0) + w

        m = len(acc)
        eu = np.empty(m, dtype=np.int64)
        ev = np.empty(m, dtype=np.int64)
        ew = np.empty(m, dtype=np.float64)
        for idx, ((u, v), w) in enumerate(sorted(acc.items())):
            eu[idx], ev[idx], ew[idx] = u, v, w

        self._eu, self._ev, self._ew = eu, ev, ew
        self._loops = loop_acc

        # symmetric CSR over off-diagonal edges, for the enumeration kernels
        deg_count = np.bincount(np.concatenate([eu, ev]), minlength=self._n)
        indptr = np.zeros(self._n + 1, dtype=np.int64)
        np.cumsum(deg_count, out=indptr[1:])
        indices = np.empty(2 * m, dtype=np.int64)
        weights = np.empty(2 * m, dtype=np.float64)
        cursor = indptr[:-1].copy()
        for u, v, w in zip(eu, ev, ew):
            indices[cursor[u]] = v
            weights[cursor[u]] = w
            cursor[u] += 1
            indices[cursor[v]] = u
            weights[cursor[v]] = w
            cursor[v] += 1
        self._indptr, self._indices, self._weights = indptr, indices, weights

        self._degrees = np.zeros(self._n, dtype=np.float64)
        np.add.at(self._degrees, eu, ew)
        np.add.at(self._degrees, ev, ew)
        self._degrees += 2.0 * loop_acc
        self._total_weight = float(ew.sum() + loop_acc.sum())
        for arr in (self._eu, self._ev, self._ew, self._loops, self._indptr,
                    self._indices, self._weights, self._degrees):
            arr.flags.writeable = False

    # -- basic structure ---------------------------------------------------

    @property
    def n(self) -> int:
        return self._n

    @property
    def num_edges(self) -> int:
        """Number of stored off-diagonal edges plus positive self-loops."""
        return int(len(self._ew) + np.count_nonzero(self._loops))

    @property
    def edge_arrays(self):
        """Off-diagonal edges as ``(u, v, w)`` arrays with ``u < v``."""
        return self._eu, self._ev, self._ew

    @property
    def loop_weights(self) -> np.ndarray:
        return self._loops

    @property
    def csr(self):
        """Symmetric off-diagonal adjacency as ``(indptr, indices, weights)``."""
        return self._indptr, self._indices, self._weights

    def edges(self):
        """Iterate ``(u, v, w)`` with ``u < v``, then loops as ``(i, i, l)``."""
        for u, v, w in zip(self._eu, self._ev, self._ew):
            yield int(u), int(v), float(w)
        for i in np.nonzero(self._loops)[0]:
            yield int(i), int(i), float(self._loops[i])

    def weight(self, u, v) -> float:
        """Edge weight between ``u`` and ``v`` (loop weight when ``u == v``)."""
        if not (0 <= u < self._n and 0 <= v < self._n):
            raise IndexError(f"vertex id out of range for n={self._n}")
        if u == v:
            return float(self._loops[u])
        lo, hi = self._indptr[u], self._indptr[u + 1]
        for k in range(lo, hi):
            if self._indices[k] == v:
                return float(self._weights[k])
        return 0.0

    def neighbors(self, u):
        """Neighbor ids and weights of ``u`` (off-diagonal only)."""
        lo, hi = self._indptr[u], self._indptr[u + 1]
        return self._indices[lo:hi], self._weights[lo:hi]

    # -- degree / weight ---------------------------------------------------

    @property
    def degrees(self) -> np.ndarray:
        """Weighted degrees; a loop counts twice."""
        return self._degrees

    def degree(self, i) -> float:
        if not 0 <= i < self._n:
            raise IndexError(f"vertex id {i} out of range for n={self._n}")
        return float(self._degrees[i])

    @property
    def total_weight(self) -> float:
        """Total edge weight M; loops count once, and sum(deg) == 2M."""
        if self._n == 0:
            raise ValueError("total weight undefined on the empty graph")
        return self._total_weight

    # -- convenience constructors -----------------------------------------

    @classmethod
    def from_dense(cls, a):
        """Graph from a symmetric adjacency matrix with ``A_ii = 2 * loop_i``."""
        a = np.asarray(a, dtype=np.float64)
        n = a.shape[0]
        if a.shape != (n, n) or not np.allclose(a, a.T):
            raise ValueError("adjacency matrix must be square and symmetric")
        iu, ju = np.triu_indices(n, k=1)
        mask = a[iu, ju] != 0
        edges = zip(iu[mask], ju[mask], a[iu, ju][mask])
        return cls(n, edges, loops=np.diag(a) / 2.0)

    def dense_adjacency(self) -> np.ndarray:
        """Dense adjacency with ``A_ii = 2 * loop_i``."""
        a = np.zeros((self._n, self._n), dtype=np.float64)
        a[self._eu, self._ev] = self._ew
        a[self._ev, self._eu] = self._ew
        a[np.diag_indices(self._n)] = 2.0 * self._loops
        return a

    def __repr__(self):
        return f"Graph(n={self._n}, edges={len(self._ew)}, loops={int(np.count_nonzero(self._loops))})"


class Clustering:
    """A partition of ``0..n-1`` into communities, stored canonically.

    Community ids are relabeled to ``0..l-1`` in order of first appearance,
    so two clusterings are equal iff they are the same partition.
    """

    __slots__ = ("_assignment", "_num")

    def __init__(self, assignment: Sequence[int] | np.ndarray):
        arr = np.asarray(assignment, dtype=np.int64).copy()
        if arr.ndim != 1:
            raise ValueError("assignment must be one-dimensional")
        _, canon = np.unique(arr, return_inverse=True)
        # np.unique sorts labels; remap to first-appearance order
        order = np.zeros(canon.max() + 1 if arr.size else 0, dtype=np.int64)
        seen = -np.ones_like(order)
        nxt = 0
        for label in canon:
            if seen[label] < 0:
                seen[label] = nxt
                nxt += 1
        self._assignment = seen[canon] if arr.size else arr
        self._assignment.flags.writeable = False
        self._num = nxt

    @classmethod
    def singletons(cls, n: int) -> "Clustering":
        return cls(np.arange(n))

    @classmethod
    def single(cls, n: int) -> "Clustering":
        return cls(np.zeros(n, dtype=np.int64))

    @classmethod
    def from_communities(cls, n: int, communities: Iterable[Iterable[int]]) -> "Clustering":
        arr = -np.ones(n, dtype=np.int64)
        for cid, members in enumerate(communities):
            for v in members:
                if arr[v] >= 0:
                    raise ValueError(f"vertex {v} assigned twice")
                arr[v] = cid
        if np.any(arr < 0):
            raise ValueError("clustering must cover all vertices")
        return cls(arr)

    @property
    def assignment(self) -> np.ndarray:
        return self._assignment

    @property
    def n(self) -> int:
        return int(self._assignment.size)

    @property
    def num_communities(self) -> int:
        return self._num

    def communities(self) -> list[np.ndarray]:
        return [np.nonzero(self._assignment == c)[0] for c in range(self._num)]

    def __eq__(self, other):
        return isinstance(other, Clustering) and np.array_equal(
            self._assignment, other._assignment
        )

    def __hash__(self):
        return hash(self._assignment.tobytes())

    def __repr__(self):
        return f"Clustering(n={self.n}, communities={self._num})"


def _check_evaluable(g: Graph, c: Clustering):
    if g.n == 0 or g.total_weight <= 0:
        raise ValueError("modularity undefined: graph has no edge weight")
    if c.n != g.n:
        raise ValueError(f"clustering covers {c.n} vertices, graph has {g.n}")


def modularity(g: Graph, c: Clustering) -> float:
    """Modularity Q of a clustering: sum_t E(C_t)/M - vol(C_t)^2 / (4 M^2).

    ``E(C_t)`` counts intra-community edge weight with loops once; always in
    [-1/2, 1).  Raises ``ValueError`` on an edgeless graph.
    """
    _check_evaluable(g, c)
    a = c.assignment
    eu, ev, ew = g.edge_arrays
    m2 = g.total_weight
    intra = a[eu] == a[ev]
    e_in = float(ew[intra].sum() + g.loop_weights.sum())
    vol = np.bincount(a, weights=g.degrees, minlength=c.num_communities)
    return e_in / m2 - float(vol @ vol) / (4.0 * m2 * m2)


def modularity_pair_sum(g: Graph, c: Clustering) -> float:
    """Modularity via the double sum over ordered vertex pairs of B.

    Same value as :func:`modularity` (with ``A_ii = 2 * loop_i``); quadratic
    cost, intended for cross-checks.
    """
    _check_evaluable(g, c)
    b = modularity_matrix(g)
    a = c.assignment
    total = 0.0
    for cid in range(c.num_communities):
        idx = np.nonzero(a == cid)[0]
        total += float(b[np.ix_(idx, idx)].sum())
    return total / (2.0 * g.total_weight)


def modularity_two_community(g: Graph, c: Clustering) -> float:
    """Two-community modularity via the closed form.

    Q2 = (2 vol(C1) vol(C2) - 4 M delta(C1)) / (4 M^2), where ``delta`` is the
    crossing weight.  Independent of :func:`modularity` for cross-checks; the
    clustering must have at most two communities.
    """
    _check_evaluable(g, c)
    if c.num_communities > 2:
        raise ValueError("closed form requires at most two communities")
    a = c.assignment
    m2 = g.total_weight
    vol = np.bincount(a, weights=g.degrees, minlength=2)
    eu, ev, ew = g.edge_arrays
    cross = float(ew[a[eu] != a[ev]].sum())
    return (2.0 * vol[0] * vol[1] - 4.0 * m2 * cross) / (4.0 * m2 * m2)


def modularity_matrix(g: Graph) -> np.ndarray:
    """Dense modularity matrix B_ij = A_ij - d_i d_j / (2M), A_ii = 2 loop_i.

    Symmetric with (numerically) zero row sums; returned read-only.
    """
    if g.n == 0 or g.total_weight <= 0:
        raise ValueError("modularity matrix undefined: graph has no edge weight")
    d = g.degrees
    b = g.dense_adjacency() - np.outer(d, d) / (2.0 * g.total_weight)
    b.flags.writeable = False
    return b


def merge_delta(g: Graph, c: Clustering, ca: int, cb: int) -> float:
    """Exact modularity change from merging communities ``ca`` and ``cb``.

    delta = (2 * cross * 2M - 2 * vol_a * vol_b) / (4 M^2).
    """
    _check_evaluable(g, c)
    if ca == cb:
        raise ValueError("cannot merge a community with itself")
    a = c.assignment
    m2 = g.total_weight
    vol = np.bincount(a, weights=g.degrees, minlength=c.num_communities)
    eu, ev, ew = g.edge_arrays
    mask = ((a[eu] == ca) & (a[ev] == cb)) | ((a[eu] == cb) & (a[ev] == ca))
    cross = float(ew[mask].sum())
    return (2.0 * cross * 2.0 * m2 - 2.0 * vol[ca] * vol[cb]) / (4.0 * m2 * m2)
