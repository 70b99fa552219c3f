"""Windowed ordered standard resolutions (Rips chain complexes).

A k-simplex is a strictly increasing tuple of point indices ``(x_0, ..., x_k)``
and its scale is the largest pairwise distance among its vertices. The
complex at scale ``i`` on a window ``Y`` holds every such tuple with
vertices in ``Y``, scale at most ``i`` and dimension at most ``max_dim``;
in dimensions ``k <= i`` this is the simplicial chain complex of the Rips
complex ``P_i(Y)``.

Chains and cochains are sparse maps from simplex tuples to ring elements.
The boundary is the alternating sum of faces, the augmentation sums the
coefficients of a 0-chain, and the support of a chain is the set of first
vertices of the simplices it uses.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .algebra import ZZ, Ring, SparseMatrix
from .errors import ConeOutOfScale, DimensionMismatch, SizeExceeded

SimplexKey = Tuple[int, ...]

DEFAULT_SIMPLEX_CAP = 2_000_000


def simplex_scale(space, key: SimplexKey):
    """Largest pairwise distance among the vertices (0 for a vertex)."""
    s = 0
    for a in range(len(key)):
        for b in range(a + 1, len(key)):
            d = space.dist(key[a], key[b])
            if d > s:
                s = d
    return s


def faces(key: SimplexKey):
    """Yield ``(sign, face)`` for the codimension-one faces of a simplex."""
    for a in range(len(key)):
        yield (1 if a % 2 == 0 else -1), key[:a] + key[a + 1:]


# ---------------------------------------------------------------------------
# chains and cochains


class _Form:
    __slots__ = ("dim", "coeffs", "ring")

    def __init__(self, dim: int, coeffs=None, ring: Ring = ZZ):
        self.dim = dim
        self.ring = ring
        out = {}
        if coeffs:
            for key, v in dict(coeffs).items():
                key = tuple(key)
                if len(key) != dim + 1:
                    raise DimensionMismatch(f"simplex {key} is not {dim}-dimensional")
                v = ring.coerce(v)
                if v:
                    out[key] = v
        self.coeffs = out

    @classmethod
    def _raw(cls, dim, coeffs, ring):
        obj = cls.__new__(cls)
        obj.dim, obj.coeffs, obj.ring = dim, coeffs, ring
        return obj

    @classmethod
    def basis(cls, key, ring: Ring = ZZ, coeff=1):
        key = tuple(key)
        return cls(len(key) - 1, {key: coeff}, ring)

    @classmethod
    def zero(cls, dim, ring: Ring = ZZ):
        return cls._raw(dim, {}, ring)

    def _check(self, other):
        if type(other) is not type(self) or other.dim != self.dim:
            raise DimensionMismatch(f"cannot combine {self!r} with {other!r}")

    def _combine(self, other, c):
        self._check(other)
        red = self.ring.reduce
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            nv = red(out.get(k, 0) + c * v)
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
        return type(self)._raw(self.dim, out, self.ring)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        red = self.ring.reduce
        out = {k: red(c * v) for k, v in self.coeffs.items()}
        return type(self)._raw(self.dim, {k: v for k, v in out.items() if v}, self.ring)

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.dim == other.dim and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.dim, frozenset(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, key):
        return self.coeffs.get(tuple(key), 0)

    def items(self):
        return sorted(self.coeffs.items())

    def keys(self):
        return sorted(self.coeffs)

    def __repr__(self):
        terms = " + ".join(f"{v}*{list(k)}" for k, v in self.items()) or "0"
        return f"{type(self).__name__}[{self.dim}]({terms})"

    def to_json(self, labels=None):
        conv = self.ring.to_json
        if labels is None:
            return [[list(k), conv(v)] for k, v in self.items()]
        return [[[labels[x] for x in k], conv(v)] for k, v in self.items()]


class Chain(_Form):
    """A finite R-linear combination of ordered simplices of one dimension."""

    __slots__ = ()


class Cochain(_Form):
    """A cochain, stored by its nonzero values on simplices."""

    __slots__ = ()

    def __call__(self, chain: Chain):
        return pair_values(chain, self)


def pair_values(chain: Chain, cochain: Cochain):
    if chain.dim != cochain.dim:
        raise DimensionMismatch(f"cannot pair a {chain.dim}-chain with a {cochain.dim}-cochain")
    ring = chain.ring
    a, b = chain.coeffs, cochain.coeffs
    if len(a) > len(b):
        a, b = b, a
    return ring.reduce(sum(v * b[k] for k, v in a.items() if k in b))


def boundary(c: Chain) -> Chain:
    """Alternating sum of faces; the boundary of a 0-chain is the empty (-1)-chain."""
    if not isinstance(c, Chain):
        raise DimensionMismatch("boundary expects a Chain")
    if c.dim <= 0:
        return Chain.zero(-1, c.ring)
    red = c.ring.reduce
    out = {}
    for key, v in c.coeffs.items():
        for sign, f in faces(key):
            nv = red(out.get(f, 0) + sign * v)
            if nv:
                out[f] = nv
            else:
                out.pop(f, None)
    return Chain._raw(c.dim - 1, out, c.ring)


def augment(c: Chain):
    """Sum of coefficients of a 0-chain."""
    if not isinstance(c, Chain) or c.dim != 0:
        raise DimensionMismatch("augmentation is defined on 0-chains")
    return c.ring.reduce(sum(c.coeffs.values()))


def support(c) -> set:
    """First vertices of the simplices carrying a nonzero coefficient."""
    return {k[0] for k in c.coeffs}


def vertex_support(c) -> set:
    return {x for k in c.coeffs for x in k}


def cone_homotopy(x: int, c: Chain, cx: Optional["WindowComplex"] = None) -> Chain:
    """Cone ``c`` from the point ``x``.

    Each simplex gets ``x`` inserted at its sorted position ``p`` with sign
    ``(-1)^p``; simplices already containing ``x`` go to zero. With this
    sign the homotopy identity ``d h + h d = id`` holds on positive-degree
    chains and on reduced 0-chains. If ``cx`` is given, every coned simplex
    must lie in it.
    """
    red = c.ring.reduce
    out = {}
    for key, v in c.coeffs.items():
        if x in key:
            continue
        p = 0
        while p < len(key) and key[p] < x:
            p += 1
        new = key[:p] + (x,) + key[p:]
        if cx is not None:
            reason = cx.why_not(new)
            if reason:
                raise ConeOutOfScale(new, reason)
        nv = red(out.get(new, 0) + (v if p % 2 == 0 else -v))
        if nv:
            out[new] = nv
        else:
            out.pop(new, None)
    return Chain._raw(c.dim + 1, out, c.ring)


# ---------------------------------------------------------------------------
# window complexes


class WindowComplex:
    """The ordered Rips chain complex at one scale on one window.

    Simplices are listed per dimension in lexicographic order; that order
    fixes the columns of the boundary matrices.
    """

    def __init__(self, space, scale, window, max_dim, simplices, scales, center=None, radius=None):
        self.space = space
        self.scale = scale
        self.window = tuple(window)
        self.window_set = frozenset(window)
        self.max_dim = max_dim
        self.simplices: List[List[SimplexKey]] = simplices
        self.scales: Dict[SimplexKey, object] = scales
        self.index: List[Dict[SimplexKey, int]] = [{s: t for t, s in enumerate(lst)} for lst in simplices]
        self.center = center
        self.radius = radius
        self._bd = {}
        self._cache = {}

    def __repr__(self):
        return f"WindowComplex(scale={self.scale}, points={len(self.window)}, counts={self.counts()})"

    def counts(self):
        return [len(s) for s in self.simplices]

    def size(self, k):
        return len(self.simplices[k]) if 0 <= k <= self.max_dim else 0

    def __contains__(self, key):
        k = len(key) - 1
        return 0 <= k <= self.max_dim and tuple(key) in self.index[k]

    def why_not(self, key) -> Optional[str]:
        """Reason a simplex is absent, or None if present."""
        key = tuple(key)
        if key in self:
            return None
        if len(key) - 1 > self.max_dim:
            return f"dimension {len(key) - 1} > max_dim {self.max_dim}"
        if any(v not in self.window_set for v in key):
            return "vertex outside the window"
        return f"scale {simplex_scale(self.space, key)} > {self.scale}"

    def boundary_matrix(self, k) -> SparseMatrix:
        """Integer matrix of d_k : C_k -> C_{k-1} (0 x n_0 for k = 0)."""
        hit = self._bd.get(k)
        if hit is not None:
            return hit
        if k <= 0 or k > self.max_dim:
            m = SparseMatrix((self.size(k - 1) if k > 0 else 0, self.size(k)))
        else:
            idx = self.index[k - 1]
            m = SparseMatrix((self.size(k - 1), self.size(k)))
            rows = m.rows
            for col, key in enumerate(self.simplices[k]):
                for sign, f in faces(key):
                    rows.setdefault(idx[f], {})[col] = sign
        self._bd[k] = m
        return m

    def augmentation_matrix(self) -> SparseMatrix:
        return SparseMatrix((1, self.size(0)), {0: {j: 1 for j in range(self.size(0))}} if self.size(0) else {})

    def chain_vector(self, c: _Form) -> dict:
        idx = self.index[c.dim]
        try:
            return {idx[k]: v for k, v in c.coeffs.items()}
        except KeyError as exc:
            raise DimensionMismatch(f"simplex {exc.args[0]} is not in the complex") from None

    def vector_chain(self, k, vec, ring: Ring = ZZ, cls=Chain):
        keys = self.simplices[k]
        return cls(k, {keys[t]: v for t, v in vec.items()}, ring)

    def contains_chain(self, c: _Form) -> bool:
        return all(k in self for k in c.coeffs)

    def is_subcomplex_of(self, other: "WindowComplex") -> bool:
        if self.space is not other.space:
            return False
        for k in range(self.max_dim + 1):
            if self.simplices[k] and (k > other.max_dim or not all(s in other.index[k] for s in self.simplices[k])):
                return False
        return True

    def inclusion_matrix(self, other: "WindowComplex", k) -> SparseMatrix:
        """Matrix of the inclusion C_k(self) -> C_k(other)."""
        idx = other.index[k] if k <= other.max_dim else {}
        m = SparseMatrix((other.size(k), self.size(k)))
        for col, key in enumerate(self.simplices[k] if k <= self.max_dim else []):
            row = idx.get(key)
            if row is None:
                raise DimensionMismatch(f"simplex {key} missing from the larger complex")
            m.rows.setdefault(row, {})[col] = 1
        return m

    def summary(self):
        out = {
            "scale": _num_json(self.scale),
            "max_dim": self.max_dim,
            "counts": self.counts(),
            "window_points": len(self.window),
        }
        if self.center is not None:
            out["window"] = {"center": _label_json(self.space.label(self.center)), "radius": _num_json(self.radius)}
        return out


def _num_json(x):
    from fractions import Fraction

    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, float) and x.is_integer():
        return int(x)
    return x


def _label_json(lab):
    if isinstance(lab, tuple):
        return list(lab)
    return lab


def build_window_complex(space, scale, window: Optional[Iterable[int]] = None, max_dim: int = 2,
                         cap: int = DEFAULT_SIMPLEX_CAP, center=None, radius=None) -> WindowComplex:
    """All ordered simplices of scale <= ``scale`` on ``window`` up to ``max_dim``."""
    if max_dim < 0:
        raise ValueError("max_dim must be >= 0")
    win = sorted(set(range(space.n) if window is None else window))
    if win and not (0 <= win[0] and win[-1] < space.n):
        raise DimensionMismatch("window is not a subset of the space")
    wset = set(win)
    simplices = [[] for _ in range(max_dim + 1)]
    scales = {}
    total = 0
    upper = {}
    for v in win:
        upper[v] = [u for u in space.ball(v, scale) if u > v and u in wset]
    upper_sets = {v: set(us) for v, us in upper.items()}
    dist = space.dist

    stack = []
    for v in reversed(win):
        stack.append(((v,), upper[v], 0))
    # depth-first in lexicographic order
    while stack:
        key, cand, sc = stack.pop()
        k = len(key) - 1
        simplices[k].append(key)
        scales[key] = sc
        total += 1
        if total > cap:
            raise SizeExceeded("simplices", total, cap)
        if k == max_dim:
            continue
        children = []
        for a, u in enumerate(cand):
            us = upper_sets[u]
            nc = [w for w in cand[a + 1:] if w in us]
            s2 = sc
            for x in key:
                d = dist(x, u)
                if d > s2:
                    s2 = d
            children.append((key + (u,), nc, s2))
        stack.extend(reversed(children))
    for lst in simplices:
        lst.sort()
    return WindowComplex(space, scale, win, max_dim, simplices, scales, center, radius)


def window_complex(space, scale, center=None, radius=None, max_dim=2, cap=DEFAULT_SIMPLEX_CAP) -> WindowComplex:
    """Complex on the ball ``N_radius(center)`` (whole space when radius is None)."""
    c = space.center if center is None else center
    window = None if radius is None else space.ball(c, radius)
    return build_window_complex(space, scale, window, max_dim, cap, center=c, radius=radius)


def coboundary(alpha: Cochain, cx: WindowComplex) -> Cochain:
    """delta(alpha) = (-1)^(k+1) alpha o d, on the (k+1)-simplices of ``cx``."""
    k = alpha.dim
    ring = alpha.ring
    if k + 1 > cx.max_dim:
        return Cochain.zero(k + 1, ring)
    sgn = -1 if k % 2 == 0 else 1
    vals = alpha.coeffs
    red = ring.reduce
    out = {}
    for key in cx.simplices[k + 1]:
        s = 0
        for sign, f in faces(key):
            v = vals.get(f)
            if v:
                s += sign * v
        s = red(sgn * s)
        if s:
            out[key] = s
    return Cochain._raw(k + 1, out, ring)


# ---------------------------------------------------------------------------
# direct chain-complex input


class DirectComplex:
    """A finite free chain complex given by its boundary matrices."""

    def __init__(self, dims: Sequence[int], boundaries: Dict[int, SparseMatrix]):
        self.dims = list(dims)
        self.max_dim = len(self.dims) - 1
        self._bd = {}
        for k in range(1, len(self.dims)):
            m = boundaries.get(k, SparseMatrix((self.dims[k - 1], self.dims[k])))
            if m.shape != (self.dims[k - 1], self.dims[k]):
                raise DimensionMismatch(f"boundary {k} has shape {m.shape}, expected {(self.dims[k - 1], self.dims[k])}")
            self._bd[k] = m
        for k in range(2, len(self.dims)):
            if not self._bd[k - 1].matmul(self._bd[k]).is_zero():
                raise DimensionMismatch(f"d_{k - 1} d_{k} != 0")
        self._cache = {}

    def size(self, k):
        return self.dims[k] if 0 <= k < len(self.dims) else 0

    def boundary_matrix(self, k):
        if 1 <= k <= self.max_dim:
            return self._bd[k]
        return SparseMatrix((self.size(k - 1) if k > 0 else 0, self.size(k)))

    def augmentation_matrix(self):
        return SparseMatrix((1, self.size(0)), {0: {j: 1 for j in range(self.size(0))}} if self.size(0) else {})

    def counts(self):
        return list(self.dims)

    def to_json(self):
        return {
            "dims": self.dims,
            "boundaries": {str(k): [list(t) for t in m.entries()] for k, m in sorted(self._bd.items())},
        }

    def summary(self):
        return {"counts": self.dims, "max_dim": self.max_dim}


def direct_complex_from_json(doc) -> DirectComplex:
    dims = [int(d) for d in doc["dims"]]
    bds = {}
    for k, triples in doc.get("boundaries", {}).items():
        k = int(k)
        if not 1 <= k < len(dims):
            raise DimensionMismatch(f"boundary index {k} out of range")
        bds[k] = SparseMatrix.from_coo((dims[k - 1], dims[k]), [(int(r), int(c), int(v)) for r, c, v in triples])
    return DirectComplex(dims, bds)


def load_direct_complex(path) -> DirectComplex:
    return direct_complex_from_json(json.loads(Path(path).read_text()))


def check_complex(cx) -> dict:
    """Exact d.d = 0 and eps.d_1 = 0 checks for every dimension."""
    ok_dd = all(cx.boundary_matrix(k - 1).matmul(cx.boundary_matrix(k)).is_zero()
                for k in range(2, cx.max_dim + 1))
    ok_eps = cx.augmentation_matrix().matmul(cx.boundary_matrix(1)).is_zero() if cx.max_dim >= 1 else True
    return {"dd_zero": ok_dd, "eps_d_zero": ok_eps}
