"""Finite metric spaces with exact distances.

Every space has a fixed total order on its points (their index order) and
an exact distance: integers for graph metrics, ``Fraction`` for matrix
input. Spaces produced by the built-in families remember how they were
made (``kind`` and ``params``) and which points sit on the edge of the
sample (``frontier``), so that coarse probes can tell a finite space from
a truncated ball in an infinite one.
"""

from __future__ import annotations

import csv
import io
import json
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Dict, List

from .errors import ConfigError, InvalidMetric, NotAGraphMetric, SizeExceeded, UnknownPoint

DEFAULT_POINT_CAP = 10_000

INF = float("inf")


class MetricSpace:
    """A finite metric space on points ``0..n-1`` with opaque labels.

    Exactly one of ``matrix`` (full distance table), ``adjacency`` (unit
    or weighted graph) or ``coords`` (integer grid points, Chebyshev
    distance) backs the distance function.
    """

    def __init__(self, labels, *, matrix=None, adjacency=None, weights=None, coords=None,
                 kind="custom", params=None, center=0, frontier=()):
        self.labels = list(labels)
        self.n = len(self.labels)
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._index) != self.n:
            raise InvalidMetric("duplicate point labels")
        self.kind = kind
        self.params = dict(params or {})
        self.center = center
        self.frontier = frozenset(frontier)
        self._matrix = matrix
        self.adjacency = adjacency
        self._weights = weights
        self._coords = coords
        self._rows = {}
        self._balls = {}

    # -- identity -----------------------------------------------------------

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"MetricSpace(kind={self.kind!r}, n={self.n})"

    @property
    def is_graph_metric(self):
        """True when distances are unit-edge shortest paths in ``adjacency``."""
        return self.adjacency is not None and self._weights is None

    def index(self, label) -> int:
        if isinstance(label, list):
            label = tuple(label)
        try:
            return self._index[label]
        except (KeyError, TypeError):
            if isinstance(label, int) and 0 <= label < self.n and label not in self._index:
                return label
            raise UnknownPoint(f"unknown point {label!r}") from None

    def label(self, i):
        return self.labels[i]

    def descriptor(self):
        params = {k: v for k, v in sorted(self.params.items()) if not k.startswith("_")}
        return {"kind": self.kind, **params, "points": self.n}

    # -- distances ----------------------------------------------------------

    def dist(self, a: int, b: int):
        if a == b:
            return 0
        if self._coords is not None:
            ca, cb = self._coords[a], self._coords[b]
            return max(abs(x - y) for x, y in zip(ca, cb))
        if self._matrix is not None:
            return self._matrix[a][b]
        return self.dist_row(a)[b]

    def dist_row(self, a: int) -> list:
        row = self._rows.get(a)
        if row is not None:
            return row
        if self._matrix is not None:
            row = list(self._matrix[a])
        elif self._coords is not None:
            row = [self.dist(a, b) for b in range(self.n)]
        elif self._weights is None:
            row = _bfs(self.adjacency, a, self.n)
        else:
            row = _dijkstra(self.adjacency, self._weights, a, self.n)
        self._rows[a] = row
        return row

    def ball(self, center: int, r) -> List[int]:
        """Sorted indices of the closed ball ``{y : d(center, y) <= r}``."""
        if not 0 <= center < self.n:
            raise UnknownPoint(f"unknown point index {center}")
        key = (center, r)
        hit = self._balls.get(key)
        if hit is not None:
            return hit
        if self._coords is not None and r < INF:
            out = self._grid_ball(center, r)
        elif self.is_graph_metric and center not in self._rows and r < INF:
            out = sorted(_bfs_ball(self.adjacency, center, r))
        else:
            row = self.dist_row(center)
            out = [y for y in range(self.n) if row[y] <= r]
        self._balls[key] = out
        return out

    def _grid_ball(self, center, r):
        c = self._coords[center]
        k = int(r)
        lookup = self.params.get("_coord_index")
        out = []
        for off in product(range(-k, k + 1), repeat=len(c)):
            y = lookup.get(tuple(a + b for a, b in zip(c, off)))
            if y is not None:
                out.append(y)
        return sorted(out)

    def upper_neighbors(self, a: int, r) -> List[int]:
        return [b for b in self.ball(a, r) if b > a]

    def diameter(self):
        return max((max(self.dist_row(a)) for a in range(self.n)), default=0)

    def radius_from(self, center: int):
        return max(self.dist_row(center), default=0)

    def validate(self):
        """Check the metric axioms exactly; O(n^3)."""
        rows = [self.dist_row(a) for a in range(self.n)]
        for a in range(self.n):
            if rows[a][a] != 0:
                raise InvalidMetric(f"d({a},{a}) != 0")
            for b in range(self.n):
                if rows[a][b] != rows[b][a]:
                    raise InvalidMetric(f"asymmetric at ({a},{b})")
                if a != b and not rows[a][b] > 0:
                    raise InvalidMetric(f"d({a},{b}) must be positive")
                if rows[a][b] == INF:
                    raise InvalidMetric("space is disconnected")
        for a in range(self.n):
            ra = rows[a]
            for m in range(self.n):
                ram = ra[m]
                rm = rows[m]
                for b in range(self.n):
                    if ra[b] > ram + rm[b]:
                        raise InvalidMetric(f"triangle inequality fails at ({a},{m},{b})")
        return self

    def require_graph(self):
        if not self.is_graph_metric:
            raise NotAGraphMetric(f"{self.kind} space does not carry a unit graph metric")
        return self


def _bfs(adj, src, n):
    dist = [INF] * n
    dist[src] = 0
    dq = deque([src])
    while dq:
        u = dq.popleft()
        du = dist[u] + 1
        for v in adj[u]:
            if dist[v] == INF:
                dist[v] = du
                dq.append(v)
    return dist


def _bfs_ball(adj, src, r):
    seen = {src: 0}
    dq = deque([src])
    while dq:
        u = dq.popleft()
        du = seen[u] + 1
        if du > r:
            continue
        for v in adj[u]:
            if v not in seen:
                seen[v] = du
                dq.append(v)
    return seen


def _dijkstra(adj, weights, src, n):
    import heapq

    dist = [INF] * n
    dist[src] = 0
    heap = [(0, src)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v in adj[u]:
            nd = d + weights[(min(u, v), max(u, v))]
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


# ---------------------------------------------------------------------------
# neighbourhoods and nets


def neighborhood(space: MetricSpace, center, r) -> List[int]:
    """Closed ball around the point labelled ``center``, as sorted indices."""
    return space.ball(space.index(center), r)


def set_neighborhood(space: MetricSpace, points, r) -> set:
    out = set()
    for p in points:
        out.update(space.ball(p, r))
    return out


def net(space: MetricSpace, separation) -> List[int]:
    """Greedy maximal ``separation``-separated subset, scanning in point order."""
    if not separation > 0:
        raise ValueError("separation must be positive")
    chosen = []
    covered = set()
    for p in range(space.n):
        if p in covered:
            continue
        chosen.append(p)
        # points strictly closer than `separation` can no longer be chosen
        covered.update(y for y in space.ball(p, separation) if space.dist(p, y) < separation)
    return chosen


# ---------------------------------------------------------------------------
# families


@dataclass
class SpaceSpec:
    kind: str
    params: Dict = field(default_factory=dict)

    @classmethod
    def parse(cls, text: str) -> "SpaceSpec":
        """Parse the compact form ``kind:a:b`` or a JSON/TOML document path."""
        text = text.strip()
        p = Path(text)
        if text.endswith((".json", ".toml")) and p.exists():
            return cls.from_document(p)
        kind, _, rest = text.partition(":")
        fam = FAMILIES.get(kind)
        if fam is None:
            raise ConfigError(f"unknown space family {kind!r}; try `corpus list`")
        args = rest.split(":") if rest else []
        names = fam["args"]
        if len(args) > len(names):
            raise ConfigError(f"{kind} takes at most {len(names)} parameters: {':'.join(names)}")
        params = {}
        for name, val in zip(names, args):
            params[name] = val if name in ("path", "seed_str") else _num(val)
        return cls(kind, params)

    @classmethod
    def from_document(cls, path) -> "SpaceSpec":
        path = Path(path)
        raw = path.read_bytes()
        if path.suffix == ".toml":
            try:
                import tomllib
            except ImportError:
                import tomli as tomllib

            doc = tomllib.loads(raw.decode())
        else:
            doc = json.loads(raw)
        doc = dict(doc)
        kind = doc.pop("kind", None)
        if kind not in FAMILIES:
            raise ConfigError(f"unknown space family {kind!r}")
        if "path" in doc:
            doc["path"] = str((path.parent / doc["path"]).resolve())
        return cls(kind, doc)

    def to_dict(self):
        return {"kind": self.kind, **self.params}


def _num(s):
    try:
        return int(s)
    except ValueError:
        try:
            return Fraction(s)
        except ValueError:
            raise ConfigError(f"bad numeric parameter {s!r}") from None


def _check_size(n, cap):
    if n > cap:
        raise SizeExceeded("points", n, cap)


def grid(dim=1, radius=3, cap=DEFAULT_POINT_CAP) -> MetricSpace:
    """Ball of radius ``radius`` in Z^dim with the Chebyshev (sup) metric.

    Chebyshev distance is the graph metric of the king's-move graph, and
    its scale-1 Rips complex fills every unit cube, so windows are
    contractible at scale 1.
    """
    dim, radius = int(dim), int(radius)
    _check_size((2 * radius + 1) ** dim, cap)
    coords = sorted(product(range(-radius, radius + 1), repeat=dim))
    idx = {c: i for i, c in enumerate(coords)}
    adj = []
    for c in coords:
        nb = []
        for off in product((-1, 0, 1), repeat=dim):
            if any(off):
                y = idx.get(tuple(a + b for a, b in zip(c, off)))
                if y is not None:
                    nb.append(y)
        adj.append(nb)
    labels = [c[0] if dim == 1 else c for c in coords]
    frontier = [i for i, c in enumerate(coords) if max(map(abs, c)) == radius]
    return MetricSpace(labels, adjacency=adj, coords=coords, kind="grid",
                       params={"dim": dim, "radius": radius, "_coord_index": idx},
                       center=idx[(0,) * dim], frontier=frontier)


def lattice(rows=15, cols=None, cap=DEFAULT_POINT_CAP) -> MetricSpace:
    """rows x cols 4-neighbour grid graph (L1 metric)."""
    rows = int(rows)
    cols = rows if cols is None else int(cols)
    _check_size(rows * cols, cap)
    labels = [(a, b) for a in range(rows) for b in range(cols)]
    adj = []
    for a, b in labels:
        nb = []
        for da, db in ((-1, 0), (0, -1), (0, 1), (1, 0)):
            if 0 <= a + da < rows and 0 <= b + db < cols:
                nb.append((a + da) * cols + b + db)
        adj.append(nb)
    return MetricSpace(labels, adjacency=adj, kind="lattice", params={"rows": rows, "cols": cols})


def _reduced_words(rank, radius, cap):
    gens = [chr(ord("a") + g) for g in range(rank)]
    letters = gens + [g.upper() for g in gens]
    words = [""]
    frontier = [""]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for x in letters:
                if w and w[-1] == x.swapcase():
                    continue
                nxt.append(w + x)
        words += nxt
        frontier = nxt
        _check_size(len(words), cap)
    return words


def free_group_ball(rank=2, radius=2, cap=DEFAULT_POINT_CAP) -> MetricSpace:
    """Ball in the Cayley graph of F_rank; points are reduced words ("" = e)."""
    rank, radius = int(rank), int(radius)
    words = _reduced_words(rank, radius, cap)
    idx = {w: i for i, w in enumerate(words)}
    adj = [[] for _ in words]
    for w, i in idx.items():
        if w:
            j = idx[w[:-1]]
            adj[i].append(j)
            adj[j].append(i)
    frontier = [i for w, i in idx.items() if len(w) == radius]
    return MetricSpace(words, adjacency=adj, kind="free", params={"rank": rank, "radius": radius},
                       center=0, frontier=frontier)


def regular_tree(degree=3, depth=4, cap=DEFAULT_POINT_CAP) -> MetricSpace:
    """Ball of radius ``depth`` about a vertex of the ``degree``-regular tree."""
    degree, depth = int(degree), int(depth)
    labels = [()]
    level = [()]
    parent = {(): None}
    for d in range(depth):
        nxt = []
        for v in level:
            k = degree if not v else degree - 1
            for c in range(k):
                w = v + (c,)
                parent[w] = v
                nxt.append(w)
        labels += nxt
        level = nxt
        _check_size(len(labels), cap)
    idx = {v: i for i, v in enumerate(labels)}
    adj = [[] for _ in labels]
    for v, p in parent.items():
        if p is not None:
            adj[idx[v]].append(idx[p])
            adj[idx[p]].append(idx[v])
    frontier = [idx[v] for v in labels if len(v) == depth]
    return MetricSpace(labels, adjacency=adj, kind="tree", params={"degree": degree, "depth": depth},
                       center=0, frontier=frontier)


def cyclic(m=5) -> MetricSpace:
    """Cayley graph of Z/m with generator 1 (the m-cycle)."""
    m = int(m)
    adj = [sorted({(i - 1) % m, (i + 1) % m} - {i}) for i in range(m)]
    return MetricSpace(list(range(m)), adjacency=adj, kind="cyclic", params={"m": m})


def path_graph(n=20) -> MetricSpace:
    n = int(n)
    adj = [[j for j in (i - 1, i + 1) if 0 <= j < n] for i in range(n)]
    return MetricSpace(list(range(n)), adjacency=adj, kind="path", params={"n": n})


def simplex(n=3) -> MetricSpace:
    """n points at mutual distance 1."""
    n = int(n)
    adj = [[j for j in range(n) if j != i] for i in range(n)]
    return MetricSpace(list(range(n)), adjacency=adj, kind="simplex", params={"n": n})


def random_graph(n=50, extra=None, seed=0) -> MetricSpace:
    """Connected random graph: a random spanning tree plus ``extra`` edges."""
    n, seed = int(n), int(seed)
    rng = random.Random(seed)
    extra = n // 2 if extra is None else int(extra)
    edges = set()
    for v in range(1, n):
        u = rng.randrange(v)
        edges.add((u, v))
    tries = 0
    while len(edges) < n - 1 + extra and tries < 50 * (extra + 1):
        u, v = rng.randrange(n), rng.randrange(n)
        tries += 1
        if u != v:
            edges.add((min(u, v), max(u, v)))
    adj = [[] for _ in range(n)]
    for u, v in sorted(edges):
        adj[u].append(v)
        adj[v].append(u)
    return MetricSpace(list(range(n)), adjacency=adj, kind="random",
                       params={"n": n, "extra": extra, "seed": seed})


def from_distance_matrix(matrix, labels=None, validate=True) -> MetricSpace:
    mat = [[_exact(x) for x in row] for row in matrix]
    n = len(mat)
    if any(len(r) != n for r in mat):
        raise InvalidMetric("distance matrix is not square")
    labels = list(range(n)) if labels is None else list(labels)
    sp = MetricSpace(labels, matrix=mat, kind="matrix", params={"points": n})
    return sp.validate() if validate else sp


def _exact(x):
    if isinstance(x, (int, Fraction)):
        return x
    if isinstance(x, float):
        raise InvalidMetric("floating-point distances are not accepted; use p/q")
    s = str(x).strip()
    try:
        v = Fraction(s)
    except ValueError:
        raise InvalidMetric(f"bad distance entry {x!r}") from None
    return v.numerator if v.denominator == 1 else v


def read_distance_csv(text: str) -> MetricSpace:
    """Header row of point ids, then the square matrix (integers or ``p/q``)."""
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise InvalidMetric("empty distance matrix")
    labels = [c.strip() for c in rows[0]]
    return from_distance_matrix(rows[1:], labels)


def read_edge_list(text: str) -> MetricSpace:
    """Lines ``u v [weight]``; weight defaults to 1; ``#`` starts a comment."""
    labels, idx, edges = [], {}, {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise InvalidMetric(f"bad edge line {line!r}")
        u, v = parts[0], parts[1]
        w = _exact(parts[2]) if len(parts) == 3 else 1
        if not w > 0:
            raise InvalidMetric(f"edge weight must be positive: {line!r}")
        for x in (u, v):
            if x not in idx:
                idx[x] = len(labels)
                labels.append(x)
        a, b = sorted((idx[u], idx[v]))
        if a == b:
            continue
        edges[(a, b)] = min(w, edges.get((a, b), w))
    adj = [[] for _ in labels]
    for a, b in sorted(edges):
        adj[a].append(b)
        adj[b].append(a)
    weighted = any(w != 1 for w in edges.values())
    sp = MetricSpace(labels, adjacency=adj, weights=edges if weighted else None, kind="edges",
                     params={"points": len(labels)})
    if any(d == INF for d in sp.dist_row(0)) if labels else False:
        raise InvalidMetric("edge-list graph is disconnected")
    return sp


FAMILIES = {
    "grid": {"args": ["dim", "radius"], "make": grid,
             "doc": "Ball of radius R in Z^n with the Chebyshev metric (king-move graph metric); "
                    "scale-1 Rips complexes fill unit cubes, so windows are contractible. "
                    "grid:<n>:<R>, e.g. grid:2:6 has 169 points."},
    "lattice": {"args": ["rows", "cols"], "make": lattice,
                "doc": "rows x cols 4-neighbour grid graph with the L1 metric. lattice:<rows>[:<cols>]."},
    "free": {"args": ["rank", "radius"], "make": free_group_ball,
             "doc": "Word-metric ball in the free group F_k (a ball in the 2k-regular tree); "
                    "points are reduced words. free:<k>:<R>; free:2:2 has 17 points."},
    "tree": {"args": ["degree", "depth"], "make": regular_tree,
             "doc": "Ball of radius <depth> about a vertex of the <degree>-regular tree. tree:<degree>:<depth>."},
    "cyclic": {"args": ["m"], "make": cyclic,
               "doc": "Cayley graph of Z/m (the m-cycle); a bounded space. cyclic:<m>."},
    "path": {"args": ["n"], "make": path_graph, "doc": "Path graph P_n. path:<n>."},
    "simplex": {"args": ["n"], "make": simplex,
                "doc": "n points at mutual distance 1; its Rips complex is the full simplex. simplex:<n>."},
    "random": {"args": ["n", "extra", "seed"], "make": random_graph,
               "doc": "Connected random graph: random spanning tree plus <extra> edges. random:<n>:<extra>:<seed>."},
    "matrix": {"args": ["path"], "make": None,
               "doc": "Distance-matrix CSV: header row of point ids, then a square matrix of integers or p/q. "
                      "matrix:<file.csv>."},
    "edges": {"args": ["path"], "make": None,
              "doc": "Edge list, one 'u v [weight]' per line (weight defaults to 1). edges:<file>."},
    "chaincx": {"args": ["path"], "make": None,
                "doc": "Direct chain-complex input (JSON: per-dimension sizes and integer boundary "
                       "matrices as (row, col, value) triples). Accepted by homology and uct only. chaincx:<file.json>."},
}


def load_space(spec, cap=DEFAULT_POINT_CAP) -> MetricSpace:
    """Build a validated :class:`MetricSpace` from a :class:`SpaceSpec` (or its string form)."""
    if isinstance(spec, str):
        spec = SpaceSpec.parse(spec)
    fam = FAMILIES.get(spec.kind)
    if fam is None:
        raise ConfigError(f"unknown space family {spec.kind!r}")
    params = dict(spec.params)
    if spec.kind == "matrix":
        sp = read_distance_csv(Path(params["path"]).read_text())
    elif spec.kind == "edges":
        sp = read_edge_list(Path(params["path"]).read_text())
    elif spec.kind == "chaincx":
        raise ConfigError("chaincx is a chain-complex input, not a metric space")
    else:
        try:
            if spec.kind in ("grid", "lattice", "free", "tree"):
                sp = fam["make"](**params, cap=cap)
            else:
                sp = fam["make"](**params)
        except TypeError as exc:
            raise ConfigError(f"bad parameters for {spec.kind}: {exc}") from None
    _check_size(sp.n, cap)
    return sp
