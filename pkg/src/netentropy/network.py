"""Random site geometry, disordered connectivity and the tight-binding Hamiltonian.

Sites are scattered uniformly in the unit square. Each site may couple only
to sites in its pool of nearest neighbours; a fixed number of passes over
all sites then adds one randomly chosen pool partner per site per pass. The
Hamiltonian has a uniform on-site energy and a coupling of ``-gamma0`` on
every edge.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _random
from .errors import GraphConstructionError, InvalidArgumentError

DEFAULT_PASSES = 9
DEFAULT_POOL_SIZE = 50


@dataclass(frozen=True)
class SiteSet:
    """``n`` fixed site positions in the unit square.

    Attributes
    ----------
    positions : ndarray, shape (n, 2)
        Coordinates ``(x, y)`` of each site.
    seed : int or None
        Seed the positions were drawn with; ``None`` for sites loaded
        from a file that did not record it.
    """

    positions: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        pos = np.array(self.positions, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 2:
            raise InvalidArgumentError(f"positions must have shape (n, 2), got {pos.shape}")
        if np.any(pos < 0.0) or np.any(pos > 1.0):
            raise InvalidArgumentError("site coordinates must lie in [0, 1]")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)

    @property
    def n(self) -> int:
        return self.positions.shape[0]

    @property
    def x(self) -> np.ndarray:
        return self.positions[:, 0]

    @property
    def y(self) -> np.ndarray:
        return self.positions[:, 1]


@dataclass(frozen=True)
class ConnectivityGraph:
    """Undirected simple graph over site indices.

    ``edges`` is an ``(m, 2)`` integer array of pairs ``(k, k')`` with
    ``k < k'``, sorted lexicographically and free of duplicates.
    """

    n: int
    edges: np.ndarray
    seed: int | None = None
    passes: int | None = None
    pool_size: int | None = None
    degrees: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if edges.size and (edges.min() < 0 or edges.max() >= self.n):
            raise InvalidArgumentError("edge index out of range")
        if np.any(edges[:, 0] == edges[:, 1]):
            raise InvalidArgumentError("self-loops are not allowed")
        edges = np.sort(edges, axis=1)
        edges = np.unique(edges, axis=0)
        edges.setflags(write=False)
        degrees = np.bincount(edges.ravel(), minlength=self.n)
        degrees.setflags(write=False)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "degrees", degrees)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def degree_min(self) -> int:
        return int(self.degrees.min())

    @property
    def degree_max(self) -> int:
        return int(self.degrees.max())

    @property
    def degree_mean(self) -> float:
        return float(self.degrees.mean())

    def content_hash(self) -> str:
        """SHA-256 of the site count and edge list; identifies the graph topology."""
        h = hashlib.sha256()
        h.update(np.int64(self.n).tobytes())
        h.update(np.ascontiguousarray(self.edges, dtype="<i8").tobytes())
        return h.hexdigest()


@dataclass(frozen=True)
class Hamiltonian:
    matrix: np.ndarray
    e0: float = 0.0
    gamma0: float = 1.0
    graph_hash: str | None = None

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update(np.ascontiguousarray(self.matrix, dtype="<f8").tobytes())
        return h.hexdigest()


def generate_sites(n: int, seed: int) -> SiteSet:
    """Draw ``n`` i.i.d. uniform positions in ``[0, 1]^2``.

    x and y of site k are consecutive draws of the SITES stream.
    """
    if int(n) < 2:
        raise InvalidArgumentError(f"need at least 2 sites, got n={n}")
    rng = _random.make_rng(seed, _random.SITES)
    return SiteSet(rng.random((int(n), 2)), seed=int(seed))


def k_nearest_pools(sites: SiteSet, pool_size: int) -> np.ndarray:
    """Indices of the ``pool_size`` nearest other sites for every site.

    Returns an ``(n, pool_size)`` integer array; row k is ordered by
    ascending Euclidean distance from site k with ties broken by ascending
    index.
    """
    n = sites.n
    if pool_size < 1 or pool_size >= n:
        raise InvalidArgumentError(f"pool_size must be in [1, n-1], got {pool_size} for n={n}")
    pos = sites.positions
    diff = pos[:, None, :] - pos[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", diff, diff)
    np.fill_diagonal(d2, np.inf)
    # stable sort keeps equal distances in index order
    order = np.argsort(d2, axis=1, kind="stable")
    return order[:, :pool_size]


def build_connectivity(sites: SiteSet, passes: int = DEFAULT_PASSES,
                       pool_size: int = DEFAULT_POOL_SIZE, seed: int = 0) -> ConnectivityGraph:
    """Connect sites by repeated passes of random picks from nearest-neighbour pools.

    In each pass every site k, in index order, picks one partner uniformly
    among the members of its pool it is not yet connected to, and the
    undirected edge is added. A site whose whole pool is already connected
    to it skips that pass. With the default 9 passes every site initiates 9
    distinct edges, so the mean degree is 18.

    Raises
    ------
    InvalidArgumentError
        If ``pool_size >= n`` or ``passes < 1``.
    GraphConstructionError
        If any site ends with no connections.
    """
    if passes < 1:
        raise InvalidArgumentError(f"passes must be positive, got {passes}")
    pools = k_nearest_pools(sites, pool_size)
    rng = _random.make_rng(seed, _random.CONNECTIVITY)
    neighbours = [set() for _ in range(sites.n)]
    for _ in range(passes):
        for k in range(sites.n):
            adj = neighbours[k]
            candidates = [j for j in pools[k].tolist() if j not in adj]
            if not candidates:
                continue
            j = candidates[int(rng.integers(len(candidates)))]
            adj.add(j)
            neighbours[j].add(k)

    edges = [(k, j) for k in range(sites.n) for j in neighbours[k] if k < j]
    graph = ConnectivityGraph(sites.n, np.array(edges, dtype=np.int64).reshape(-1, 2),
                              seed=int(seed), passes=int(passes), pool_size=int(pool_size))
    isolated = np.flatnonzero(graph.degrees == 0)
    if isolated.size:
        raise GraphConstructionError(f"{isolated.size} isolated site(s), first index {isolated[0]}")
    return graph


def assemble_hamiltonian(graph: ConnectivityGraph, e0: float = 0.0,
                         gamma0: float = 1.0) -> Hamiltonian:
    if not gamma0 > 0:
        raise InvalidArgumentError(f"gamma0 must be positive, got {gamma0}")
    h = np.zeros((graph.n, graph.n))
    np.fill_diagonal(h, e0)
    if graph.n_edges:
        i, j = graph.edges[:, 0], graph.edges[:, 1]
        h[i, j] = -gamma0
        h[j, i] = -gamma0
    h.setflags(write=False)
    return Hamiltonian(h, float(e0), float(gamma0), graph.content_hash())


def graph_to_dict(sites: SiteSet, graph: ConnectivityGraph) -> dict:
    doc = {
        "n": graph.n,
        "seed": graph.seed,
        "passes": graph.passes,
        "pool_size": graph.pool_size,
        "positions": sites.positions.tolist(),
        "edges": graph.edges.tolist(),
    }
    if sites.seed is not None:
        doc["sites_seed"] = sites.seed
    return doc


def graph_from_dict(doc: dict) -> tuple[SiteSet, ConnectivityGraph]:
    try:
        sites = SiteSet(np.array(doc["positions"], dtype=float), seed=doc.get("sites_seed"))
        graph = ConnectivityGraph(int(doc["n"]), np.array(doc["edges"], dtype=np.int64),
                                  seed=doc.get("seed"), passes=doc.get("passes"),
                                  pool_size=doc.get("pool_size"))
    except KeyError as exc:
        raise InvalidArgumentError(f"graph document missing field {exc}") from None
    if sites.n != graph.n:
        raise InvalidArgumentError(f"graph has n={graph.n} but {sites.n} positions")
    return sites, graph


def save_graph(path, sites: SiteSet, graph: ConnectivityGraph) -> Path:
    path = Path(path)
    path.write_text(json.dumps(graph_to_dict(sites, graph), separators=(",", ":")))
    return path


def load_graph(path) -> tuple[SiteSet, ConnectivityGraph]:
    return graph_from_dict(json.loads(Path(path).read_text()))
