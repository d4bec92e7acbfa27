"""modclust: modularity clustering with provable additive guarantees.

Core pieces:

* :mod:`modclust.graph` -- weighted graphs with self-loops, exact modularity.
* :mod:`modclust.oracle` -- brute-force exact optima (partitions, cuts).
* :mod:`modclust.sdpm` -- SDP relaxation + hyperplane rounding (additive
  guarantee ``Q >= Q_opt - 2(1 - 0.766)``).
* :mod:`modclust.baselines` -- greedy agglomeration, leading-eigenvector
  bisection, Louvain.
* :mod:`modclust.transforms` -- modularity-rescaling graph transformations.
* :mod:`modclust.hardgen` -- provably hard instance generators with
  certificates.
"""

from ._backend import BACKEND, HAVE_COMPILED
from .graph import (
    Clustering,
    Graph,
    merge_delta,
    modularity,
    modularity_matrix,
    modularity_pair_sum,
    modularity_two_community,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "HAVE_COMPILED",
    "Graph",
    "Clustering",
    "modularity",
    "modularity_pair_sum",
    "modularity_two_community",
    "modularity_matrix",
    "merge_delta",
    "__version__",
]
