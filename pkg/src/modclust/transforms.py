"""Graph transformations that rescale every clustering's modularity.

Two primitives and their composition:

* alpha-transform: reweights A'_ij = A_ij + ((1-alpha)/alpha) d_i d_j / 2M,
  scaling every clustering's modularity by exactly alpha.  The diagonal mass
  becomes a loop of weight ((1-alpha)/alpha) d_i^2 / 4M under the package's
  loop convention, so degrees scale to d_i/alpha and M to M/alpha exactly.

* (tau, k)-transform: attaches loops of weight (beta/2) d_i to existing
  vertices plus k isolated looped vertices (beta = 1/sqrt(tau) - 1), mapping
  Q to tau * Q + (1 - tau - eps) with eps = (1 - sqrt(tau))^2 / k for every
  clustering extended by the k singletons.

* engineer_range: alpha followed by (tau, k) with tau = 1 - (2a + b)/3 and
  alpha = 2(b - a)/3 pins every mapped clustering's value inside (a, b).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .graph import Clustering, Graph

__all__ = [
    "TransformSpec",
    "alpha_transform",
    "tau_k_transform",
    "engineer_range",
    "append_singletons",
]

MAX_DENSE_N = 2000  # alpha-transform output is dense: n^2 weights


@dataclass(frozen=True)
class TransformSpec:
    """Parameters of an alpha + (tau, k) composition and derived constants."""

    alpha: float
    tau: float
    k: int

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError("alpha must lie in (0, 1]")
        if not 0.0 < self.tau < 1.0:
            raise ValueError("tau must lie in (0, 1)")
        if self.k < 1:
            raise ValueError("k must be a positive integer")

    @property
    def beta(self) -> float:
        return 1.0 / math.sqrt(self.tau) - 1.0

    @property
    def epsilon(self) -> float:
        return (1.0 - math.sqrt(self.tau)) ** 2 / self.k

    def mapped_value(self, q: float) -> float:
        """Image of a modularity value under the composed transformation."""
        return self.tau * self.alpha * q + (1.0 - self.tau - self.epsilon)


def alpha_transform(g: Graph, alpha: float) -> Graph:
    """Dense reweighting that scales every clustering's modularity by alpha."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    if g.n > MAX_DENSE_N:
        raise ValueError(f"alpha-transform is dense; capped at n <= {MAX_DENSE_N}")
    m2 = g.total_weight
    if alpha == 1.0:
        return g
    d = g.degrees
    factor = (1.0 - alpha) / alpha
    add = factor * np.outer(d, d) / (2.0 * m2)
    a = g.dense_adjacency() + add
    return Graph.from_dense(a)


def append_singletons(c: Clustering, k: int) -> Clustering:
    """Extend a clustering by k fresh singleton communities."""
    n = c.n
    ext = np.concatenate([c.assignment, np.arange(n, n + k)])
    return Clustering(ext)


def tau_k_transform(g: Graph, tau: float, k: int) -> tuple[Graph, Callable[[Clustering], Clustering]]:
    """Loop augmentation mapping Q to tau*Q + (1 - tau - eps).

    Adds k isolated vertices; original vertices get extra loop weight
    (beta/2) d_i and each new vertex a loop of weight beta(beta+1)M/k.  The
    returned mapper appends the k singletons to a clustering of ``g``.
    """
    spec = TransformSpec(alpha=1.0, tau=tau, k=k)
    beta = spec.beta
    m2 = g.total_weight
    n = g.n
    loops = np.zeros(n + k, dtype=np.float64)
    loops[:n] = g.loop_weights + 0.5 * beta * g.degrees
    loops[n:] = beta * (beta + 1.0) * m2 / k
    eu, ev, ew = g.edge_arrays
    out = Graph(n + k, zip(eu, ev, ew), loops=loops)

    def mapper(c: Clustering) -> Clustering:
        if c.n != n:
            raise ValueError("clustering does not fit the source graph")
        return append_singletons(c, k)

    return out, mapper


def engineer_range(
    g: Graph, a: float, b: float, k: int
) -> tuple[Graph, Callable[[Clustering], Clustering], TransformSpec]:
    """Compose the transforms so all mapped clusterings score inside (a, b).

    With tau = 1 - (2a + b)/3 and alpha = 2(b - a)/3, the mapped value is
    tau*alpha*Q + (1 - tau - eps); since -1/2 < Q < 1 the image stays inside
    (a, b) provided eps <= (1 - tau)(b - a)/3, which dictates the minimal k.
    """
    if not 0.0 < a < b < 1.0:
        raise ValueError("need 0 < a < b < 1")
    tau = 1.0 - (2.0 * a / 3.0 + b / 3.0)
    alpha = 2.0 * (b - a) / 3.0
    spec = TransformSpec(alpha=alpha, tau=tau, k=k)
    margin = (1.0 - tau) * (b - a) / 3.0
    if spec.epsilon > margin:
        k_min = math.ceil((1.0 - math.sqrt(tau)) ** 2 / margin)
        raise ValueError(
            f"k={k} leaves eps={spec.epsilon:.3g} > margin {margin:.3g}; "
            f"need k >= {k_min} for the ({a}, {b}) range"
        )
    g1 = alpha_transform(g, alpha)
    g2, mapper = tau_k_transform(g1, tau, k)
    return g2, mapper, spec
