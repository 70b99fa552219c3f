"""Exact sparse linear algebra over Z, Z/p and Q.

Matrices are stored as dictionaries of rows, ``{row: {col: value}}``, with
no explicit zeros. Vectors are plain ``{index: value}`` dictionaries. All
arithmetic is exact: Python integers for Z and Z/p, ``Fraction`` for Q.

The central routine is :func:`smith_normal_form`, a sparse elimination with
Markowitz-style pivoting that can optionally carry the unimodular
transforms ``U, V`` (and their inverses) such that ``U @ A @ V = D``.
Homology and cohomology of any finite free complex reduce to
:func:`subquotient`, which computes ``ker A / im B`` together with cycle
generators and a coordinate map.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import ConfigError, DimensionMismatch, NoSolution, NotASubcomplex

Vector = Dict[int, object]


# ---------------------------------------------------------------------------
# coefficient rings


class Ring:
    """An exact coefficient ring. Elements are ordinary Python numbers."""

    name = "?"
    is_field = False
    characteristic = 0

    def __call__(self, x):
        return self.coerce(x)

    def coerce(self, x):
        raise NotImplementedError

    def reduce(self, x):
        return x

    def quo_rem(self, a, b):
        """Euclidean division ``a = q*b + r`` with ``norm(r) < norm(b)``."""
        raise NotImplementedError

    def div(self, a, b):
        """Exact division; ``b`` must divide ``a``."""
        q, r = self.quo_rem(a, b)
        if r != 0:
            raise ArithmeticError(f"{b} does not divide {a} in {self.name}")
        return q

    def is_unit(self, a):
        raise NotImplementedError

    def norm(self, a):
        return 0

    def to_json(self, a):
        return a

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, Ring) and other.name == self.name

    def __hash__(self):
        return hash(self.name)


class Integers(Ring):
    name = "Z"

    def coerce(self, x):
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"{x} is not an integer")
            return x.numerator
        return int(x)

    def quo_rem(self, a, b):
        q, r = divmod(a, b)
        if abs(2 * r) > abs(b):
            q += 1
            r -= b
        return q, r

    def is_unit(self, a):
        return a == 1 or a == -1

    def norm(self, a):
        return abs(a)

    def gcdex(self, a, b):
        """Return ``(g, s, t)`` with ``s*a + t*b = g = gcd(a, b) >= 0``."""
        old_r, r = a, b
        old_s, s = 1, 0
        old_t, t = 0, 1
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
            old_t, t = t, old_t - q * t
        if old_r < 0:
            old_r, old_s, old_t = -old_r, -old_s, -old_t
        return old_r, old_s, old_t


class Rationals(Ring):
    name = "Q"
    is_field = True

    def coerce(self, x):
        return Fraction(x)

    def quo_rem(self, a, b):
        return Fraction(a) / b, 0

    def is_unit(self, a):
        return a != 0

    def to_json(self, a):
        a = Fraction(a)
        return a.numerator if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


class PrimeField(Ring):
    is_field = True

    def __init__(self, p):
        p = int(p)
        if not _is_prime(p):
            raise ConfigError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"F{p}"

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def reduce(self, x):
        return x % self.p

    def quo_rem(self, a, b):
        return a * pow(b, -1, self.p) % self.p, 0

    def is_unit(self, a):
        return a % self.p != 0


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


ZZ = Integers()
QQ = Rationals()


def GF(p):
    return PrimeField(p)


def parse_ring(tag) -> Ring:
    """Parse ``Z``, ``Q``, ``Fp:<p>``, ``F<p>`` or ``Z/<p>``."""
    if isinstance(tag, Ring):
        return tag
    t = str(tag).strip()
    if t in ("Z", "ZZ"):
        return ZZ
    if t in ("Q", "QQ"):
        return QQ
    for prefix in ("Fp:", "GF:", "Z/", "F"):
        if t.startswith(prefix) and t[len(prefix):].isdigit():
            return PrimeField(int(t[len(prefix):]))
    raise ConfigError(f"unknown ring {tag!r}; use Z, Q or Fp:<prime>")


# ---------------------------------------------------------------------------
# sparse matrices


def _axpy(target, src, c, ring):
    """target += c * src, in place; drops zeros."""
    red = ring.reduce
    for k, v in src.items():
        nv = red(target.get(k, 0) + c * v)
        if nv:
            target[k] = nv
        elif k in target:
            del target[k]


class SparseMatrix:
    """Row-major sparse matrix with exact entries."""

    __slots__ = ("shape", "rows")

    def __init__(self, shape, rows=None):
        self.shape = (int(shape[0]), int(shape[1]))
        self.rows = {} if rows is None else rows

    @classmethod
    def from_coo(cls, shape, triples, ring=None):
        m = cls(shape)
        for i, j, v in triples:
            if not (0 <= i < m.shape[0] and 0 <= j < m.shape[1]):
                raise DimensionMismatch(f"entry ({i},{j}) outside shape {m.shape}")
            row = m.rows.setdefault(i, {})
            nv = row.get(j, 0) + v
            if ring is not None:
                nv = ring.reduce(nv)
            if nv:
                row[j] = nv
            else:
                row.pop(j, None)
                if not row:
                    del m.rows[i]
        return m

    @classmethod
    def from_dense(cls, data, ncols=None):
        data = [list(r) for r in data]
        if ncols is None:
            ncols = len(data[0]) if data else 0
        m = cls((len(data), ncols))
        for i, r in enumerate(data):
            row = {j: v for j, v in enumerate(r) if v}
            if row:
                m.rows[i] = row
        return m

    @classmethod
    def identity(cls, n, one=1):
        return cls((n, n), {i: {i: one} for i in range(n)})

    @classmethod
    def from_columns(cls, nrows, columns: Sequence[Vector]):
        m = cls((nrows, len(columns)))
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    m.rows.setdefault(i, {})[j] = v
        return m

    def to_dense(self):
        out = [[0] * self.shape[1] for _ in range(self.shape[0])]
        for i, row in self.rows.items():
            for j, v in row.items():
                out[i][j] = v
        return out

    def copy(self):
        return SparseMatrix(self.shape, {i: dict(r) for i, r in self.rows.items()})

    def map(self, ring):
        """Coerce every entry into ``ring``."""
        rows = {}
        for i, r in self.rows.items():
            nr = {}
            for j, v in r.items():
                v = ring.coerce(v)
                if v:
                    nr[j] = v
            if nr:
                rows[i] = nr
        return SparseMatrix(self.shape, rows)

    def transpose(self):
        t = SparseMatrix((self.shape[1], self.shape[0]))
        for i, r in self.rows.items():
            for j, v in r.items():
                t.rows.setdefault(j, {})[i] = v
        return t

    T = property(transpose)

    def scale(self, c, ring=ZZ):
        if c == 1:
            return self.copy()
        rows = {}
        for i, r in self.rows.items():
            nr = {j: ring.reduce(c * v) for j, v in r.items()}
            nr = {j: v for j, v in nr.items() if v}
            if nr:
                rows[i] = nr
        return SparseMatrix(self.shape, rows)

    def nnz(self):
        return sum(len(r) for r in self.rows.values())

    def entries(self):
        for i in sorted(self.rows):
            r = self.rows[i]
            for j in sorted(r):
                yield i, j, r[j]

    def is_zero(self):
        return not any(self.rows.values())

    def column(self, j):
        return {i: r[j] for i, r in self.rows.items() if j in r}

    def columns(self):
        cols = [dict() for _ in range(self.shape[1])]
        for i, r in self.rows.items():
            for j, v in r.items():
                cols[j][i] = v
        return cols

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]):
        rpos = {r: a for a, r in enumerate(rows)}
        cpos = {c: b for b, c in enumerate(cols)}
        out = SparseMatrix((len(rows), len(cols)))
        for i, r in self.rows.items():
            a = rpos.get(i)
            if a is None:
                continue
            nr = {cpos[j]: v for j, v in r.items() if j in cpos}
            if nr:
                out.rows[a] = nr
        return out

    def matvec(self, x: Vector, ring=ZZ) -> Vector:
        out = {}
        red = ring.reduce
        for i, r in self.rows.items():
            s = 0
            if len(r) < len(x):
                for j, v in r.items():
                    xv = x.get(j)
                    if xv:
                        s += v * xv
            else:
                for j, xv in x.items():
                    v = r.get(j)
                    if v:
                        s += v * xv
            s = red(s)
            if s:
                out[i] = s
        return out

    def __matmul__(self, other):
        return self.matmul(other)

    def matmul(self, other, ring=ZZ):
        if self.shape[1] != other.shape[0]:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        out = SparseMatrix((self.shape[0], other.shape[1]))
        orows = other.rows
        for i, r in self.rows.items():
            acc = {}
            for k, v in r.items():
                ok = orows.get(k)
                if ok:
                    _axpy(acc, ok, v, ring)
            if acc:
                out.rows[i] = acc
        return out

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix) or self.shape != other.shape:
            return NotImplemented if not isinstance(other, SparseMatrix) else False
        a = {i: r for i, r in self.rows.items() if r}
        b = {i: r for i, r in other.rows.items() if r}
        return a == b

    def __repr__(self):
        return f"SparseMatrix(shape={self.shape}, nnz={self.nnz()})"


def coo_text(m: SparseMatrix) -> str:
    """Coordinate text form, one ``(row col value)`` per line."""
    lines = [f"# shape {m.shape[0]} {m.shape[1]}"]
    lines += [f"({i} {j} {v})" for i, j, v in m.entries()]
    return "\n".join(lines) + "\n"


def parse_coo_text(text: str, ring=None) -> SparseMatrix:
    shape = None
    triples = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if parts and parts[0] == "shape":
                shape = (int(parts[1]), int(parts[2]))
            continue
        i, j, v = line.strip("()").split()
        triples.append((int(i), int(j), Fraction(v) if "/" in v else int(v)))
    if shape is None:
        shape = (max((t[0] for t in triples), default=-1) + 1, max((t[1] for t in triples), default=-1) + 1)
    return SparseMatrix.from_coo(shape, triples, ring)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass
class SNFResult:
    """``U @ A @ V = D`` with ``D[t, t] = diagonal[t]`` for ``t < rank``.

    The diagonal is a divisibility chain over Z (positive entries) and all
    ones over a field. Transforms are present only when requested.
    """

    shape: Tuple[int, int]
    diagonal: List
    ring: Ring = ZZ
    U: Optional[SparseMatrix] = None
    U_inv: Optional[SparseMatrix] = None
    V: Optional[SparseMatrix] = None
    V_inv: Optional[SparseMatrix] = None

    @property
    def rank(self):
        return len(self.diagonal)

    @property
    def invariant_factors(self):
        return list(self.diagonal)

    @property
    def torsion(self):
        return [d for d in self.diagonal if not self.ring.is_unit(d)]

    def D(self):
        return SparseMatrix(self.shape, {t: {t: d} for t, d in enumerate(self.diagonal)})


class _Eliminator:
    """Mutable working state for one SNF computation."""

    def __init__(self, A: SparseMatrix, ring: Ring, transforms: bool):
        self.ring = ring
        self.m, self.n = A.shape
        self.R = {}
        self.C = {}
        for i, r in A.rows.items():
            nr = {}
            for j, v in r.items():
                v = ring.coerce(v)
                if v:
                    nr[j] = v
                    self.C.setdefault(j, set()).add(i)
            if nr:
                self.R[i] = nr
        self.transforms = transforms
        if transforms:
            one = ring.coerce(1)
            self.U = {i: {i: one} for i in range(self.m)}
            self.Uc = {i: {i: one} for i in range(self.m)}  # columns of U^-1
            self.Vc = {j: {j: one} for j in range(self.n)}  # columns of V
            self.Vi = {j: {j: one} for j in range(self.n)}  # rows of V^-1
        self.heap = [(len(s), j) for j, s in self.C.items()]
        heapq.heapify(self.heap)

    # row_k += c * row_i
    def row_op(self, k, i, c):
        ring = self.ring
        red = ring.reduce
        rk = self.R.setdefault(k, {})
        C = self.C
        touched = []
        for j, v in self.R[i].items():
            nv = red(rk.get(j, 0) + c * v)
            if nv:
                if j not in rk:
                    C[j].add(k)
                    touched.append(j)
                rk[j] = nv
            elif j in rk:
                del rk[j]
                C[j].discard(k)
                touched.append(j)
        if not rk:
            del self.R[k]
        for j in touched:
            heapq.heappush(self.heap, (len(C[j]), j))
        if self.transforms:
            _axpy(self.U[k], self.U[i], c, ring)
            _axpy(self.Uc[i], self.Uc[k], red(-c), ring)

    # col_l += c * col_j
    def col_op(self, l, j, c):
        ring = self.ring
        red = ring.reduce
        R = self.R
        cl = self.C.setdefault(l, set())
        for i in list(self.C[j]):
            ri = R[i]
            nv = red(ri.get(l, 0) + c * ri[j])
            if nv:
                ri[l] = nv
                cl.add(i)
            elif l in ri:
                del ri[l]
                cl.discard(i)
        if not cl:
            del self.C[l]
        else:
            heapq.heappush(self.heap, (len(cl), l))
        if self.transforms:
            _axpy(self.Vc[l], self.Vc[j], c, ring)
            _axpy(self.Vi[j], self.Vi[l], red(-c), ring)

    def scale_row(self, i, c, c_inv):
        red = self.ring.reduce
        r = self.R.get(i)
        if r:
            for j in r:
                r[j] = red(r[j] * c)
        if self.transforms:
            self.U[i] = {k: red(v * c) for k, v in self.U[i].items()}
            self.Uc[i] = {k: red(v * c_inv) for k, v in self.Uc[i].items()}

    def pick_pivot(self):
        ring = self.ring
        best = None
        looked = []
        while self.heap and len(looked) < 6:
            cnt, j = heapq.heappop(self.heap)
            s = self.C.get(j)
            if not s or len(s) != cnt:
                if s:
                    heapq.heappush(self.heap, (len(s), j))
                continue
            looked.append((cnt, j))
            for i in s:
                v = self.R[i][j]
                unit = ring.is_unit(v)
                key = (0 if unit else 1, ring.norm(v), (len(self.R[i]) - 1) * (cnt - 1), i, j)
                if best is None or key < best:
                    best = key
            if best is not None and best[0] == 0 and best[2] == 0:
                break
        for item in looked:
            heapq.heappush(self.heap, item)
        if best is None:
            return None
        return best[3], best[4]

    def eliminate(self, i, j):
        """Clear row i and column j around pivot (i, j); return the final pivot."""
        ring = self.ring
        while True:
            p = self.R[i][j]
            smaller = None
            for k in list(self.C[j]):
                if k == i:
                    continue
                q, r = ring.quo_rem(self.R[k][j], p)
                if q:
                    self.row_op(k, i, ring.reduce(-q))
                if r and (smaller is None or ring.norm(r) < smaller[0]):
                    smaller = (ring.norm(r), k)
            if smaller is not None:
                i = smaller[1]
                continue
            for l in list(self.R[i]):
                if l == j:
                    continue
                q, r = ring.quo_rem(self.R[i][l], p)
                if q:
                    self.col_op(l, j, ring.reduce(-q))
                if r and (smaller is None or ring.norm(r) < smaller[0]):
                    smaller = (ring.norm(r), l)
            if smaller is not None:
                j = smaller[1]
                continue
            return i, j, p

    def retire(self, i, j):
        del self.R[i]
        del self.C[j]


def _apply_pair_rows(rows, a, b, L, ring):
    """(row_a, row_b) <- L @ (row_a, row_b) on a dict-of-rows store."""
    ra, rb = rows[a], rows[b]
    na, nb = {}, {}
    _axpy(na, ra, L[0][0], ring)
    _axpy(na, rb, L[0][1], ring)
    _axpy(nb, ra, L[1][0], ring)
    _axpy(nb, rb, L[1][1], ring)
    rows[a], rows[b] = na, nb


def smith_normal_form(A: SparseMatrix, ring: Ring = ZZ, transforms: bool = False) -> SNFResult:
    """Smith normal form of ``A`` over ``ring``.

    >>> smith_normal_form(SparseMatrix.from_dense([[2, 0], [0, 3]])).diagonal
    [1, 6]
    """
    E = _Eliminator(A, ring, transforms)
    pivots = []
    while True:
        pv = E.pick_pivot()
        if pv is None:
            break
        i, j, p = E.eliminate(*pv)
        E.retire(i, j)
        pivots.append([i, j, p])

    # normalise pivot values: positive over Z, one over a field
    for piv in pivots:
        i, j, p = piv
        if ring.is_field:
            if p != 1:
                inv = ring.div(ring.coerce(1), p)
                if transforms:
                    E.scale_row(i, inv, p)
                piv[2] = ring.coerce(1)
        elif p < 0:
            if transforms:
                E.scale_row(i, -1, -1)
            piv[2] = -p

    if not ring.is_field:
        units = [pv for pv in pivots if pv[2] == 1]
        rest = [pv for pv in pivots if pv[2] != 1]
        for a in range(len(rest)):
            for b in range(a + 1, len(rest)):
                da, db = rest[a][2], rest[b][2]
                if db % da == 0:
                    continue
                g, s, t = ring.gcdex(da, db)
                ag, bg = da // g, db // g
                if transforms:
                    ia, ja = rest[a][0], rest[a][1]
                    ib, jb = rest[b][0], rest[b][1]
                    _apply_pair_rows(E.U, ia, ib, [[s, t], [-bg, ag]], ring)
                    _apply_pair_rows(E.Uc, ia, ib, [[ag, bg], [-t, s]], ring)
                    _apply_pair_rows(E.Vc, ja, jb, [[1, 1], [-t * bg, s * ag]], ring)
                    _apply_pair_rows(E.Vi, ja, jb, [[s * ag, t * bg], [-1, 1]], ring)
                rest[a][2], rest[b][2] = g, da * bg
        pivots = units + rest

    diagonal = [pv[2] for pv in pivots]
    res = SNFResult(A.shape, diagonal, ring)
    if transforms:
        m, n = A.shape
        used_r = {pv[0] for pv in pivots}
        used_c = {pv[1] for pv in pivots}
        row_order = [pv[0] for pv in pivots] + [i for i in range(m) if i not in used_r]
        col_order = [pv[1] for pv in pivots] + [j for j in range(n) if j not in used_c]
        res.U = SparseMatrix((m, m), {t: E.U[i] for t, i in enumerate(row_order) if E.U[i]})
        res.U_inv = SparseMatrix.from_columns(m, [E.Uc[i] for i in row_order])
        res.V = SparseMatrix.from_columns(n, [E.Vc[j] for j in col_order])
        res.V_inv = SparseMatrix((n, n), {t: E.Vi[j] for t, j in enumerate(col_order) if E.Vi[j]})
    return res


def invariant_factors(A: SparseMatrix, ring: Ring = ZZ) -> List:
    return smith_normal_form(A, ring).diagonal


def rank(A: SparseMatrix, ring: Ring = ZZ) -> int:
    return smith_normal_form(A, ring).rank


# ---------------------------------------------------------------------------
# subquotients: ker A / im B


@dataclass
class HomologyGroup:
    """A finitely generated module ``R^free_rank + sum R/torsion``.

    Generators (when computed) are vectors over the cell basis of the
    degree, listed torsion summands first then free summands.
    """

    free_rank: int
    torsion: List = field(default_factory=list)
    ring: Ring = ZZ
    generators: Optional[List[Vector]] = None
    _coord: Optional[tuple] = field(default=None, repr=False, compare=False)

    @property
    def is_zero(self):
        return self.free_rank == 0 and not self.torsion

    @property
    def ngens(self):
        return len(self.torsion) + self.free_rank

    def orders(self):
        """Order of each summand in coordinate order (0 = free)."""
        return list(self.torsion) + [0] * self.free_rank

    def coordinates(self, z: Vector) -> List:
        """Coordinates of the class of cycle ``z``, torsion parts reduced."""
        if self._coord is None:
            raise ValueError("group was computed without generators")
        U, Vi, ra, keep = self._coord
        ring = self.ring
        w = Vi.matvec(z, ring)
        if any(w.get(t) for t in range(ra)):
            raise ValueError("vector is not a cycle")
        shifted = {t - ra: v for t, v in w.items()}
        y = U.matvec(shifted, ring)
        out = []
        for t, order in zip(keep, self.orders()):
            v = y.get(t, 0)
            if order:
                v = v % order
            out.append(v)
        return out

    def summary(self):
        return {
            "free_rank": self.free_rank,
            "torsion": [self.ring.to_json(d) for d in self.torsion],
        }

    def same_type(self, other):
        return self.free_rank == other.free_rank and list(self.torsion) == list(other.torsion)

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append(f"{self.ring.name}^{self.free_rank}" if self.free_rank > 1 else self.ring.name)
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def subquotient(A: Optional[SparseMatrix], B: Optional[SparseMatrix], n: int, ring: Ring = ZZ,
                generators: bool = False) -> HomologyGroup:
    """``ker A / im B`` for ``B: R^m -> R^n``, ``A: R^n -> R^p`` with ``AB = 0``.

    Either map may be ``None`` (zero map). Without generators only ranks
    and invariant factors are computed.
    """
    if A is not None and A.shape[1] != n:
        raise DimensionMismatch(f"A has {A.shape[1]} columns, expected {n}")
    if B is not None and B.shape[0] != n:
        raise DimensionMismatch(f"B has {B.shape[0]} rows, expected {n}")
    if not generators:
        ra = smith_normal_form(A, ring).rank if A is not None else 0
        sb = smith_normal_form(B, ring) if B is not None else None
        rb = sb.rank if sb else 0
        tors = sb.torsion if sb else []
        return HomologyGroup(n - ra - rb, tors, ring)

    if A is not None:
        sa = smith_normal_form(A, ring, transforms=True)
        ra, V, Vi = sa.rank, sa.V, sa.V_inv
    else:
        ra = 0
        V = Vi = SparseMatrix.identity(n, ring.coerce(1))
    kdim = n - ra
    if B is not None:
        VB = Vi.matmul(B.map(ring), ring)
        rows = {}
        for t, r in VB.rows.items():
            if t < ra:
                raise ValueError("A @ B is not zero")
            rows[t - ra] = r
        M = SparseMatrix((kdim, B.shape[1]), rows)
    else:
        M = SparseMatrix((kdim, 0))
    sm = smith_normal_form(M, ring, transforms=True)
    diag = sm.diagonal
    keep = [t for t, d in enumerate(diag) if not ring.is_unit(d)] + list(range(sm.rank, kdim))
    torsion = [diag[t] for t in keep if t < sm.rank]
    # generator t = V[:, ra:] @ U_inv[:, t]
    Vcols = V.columns()
    Ucols = sm.U_inv.columns()
    gens = []
    for t in keep:
        g = {}
        for s, c in Ucols[t].items():
            _axpy(g, Vcols[ra + s], c, ring)
        gens.append(g)
    return HomologyGroup(kdim - sm.rank, torsion, ring, gens, (sm.U, Vi, ra, keep))


@dataclass
class InducedMap:
    """A homomorphism between computed groups, in their coordinates."""

    matrix: List[List]  # rows = target coordinates, columns = source generators
    source: HomologyGroup
    target: HomologyGroup

    @property
    def is_zero(self):
        return all(v == 0 for row in self.matrix for v in row)

    def image(self) -> "ImageInfo":
        return image_info(self.matrix, self.source, self.target)


def induced_map(chain_map: Optional[SparseMatrix], source: HomologyGroup, target: HomologyGroup) -> InducedMap:
    """Matrix of the map on homology induced by ``chain_map`` (None = identity on cells)."""
    if source.generators is None or target._coord is None:
        raise ValueError("both groups need generators")
    ring = source.ring
    cols = []
    for g in source.generators:
        img = chain_map.matvec(g, ring) if chain_map is not None else g
        cols.append(target.coordinates(img))
    mat = [[cols[c][r] for c in range(len(cols))] for r in range(target.ngens)]
    return InducedMap(mat, source, target)


@dataclass
class ImageInfo:
    image: HomologyGroup
    cokernel: HomologyGroup
    injective: bool
    surjective: bool

    @property
    def isomorphism(self):
        return self.injective and self.surjective


def image_info(matrix, source: HomologyGroup, target: HomologyGroup) -> ImageInfo:
    """Isomorphism types of image and cokernel of a map between groups."""
    ring = source.ring
    n = target.ngens
    m = source.ngens
    orders = target.orders()
    triples = [(r, c, matrix[r][c]) for r in range(n) for c in range(m) if matrix[r][c]]
    triples += [(r, m + r, d) for r, d in enumerate(orders) if d]
    A = SparseMatrix.from_coo((n, m + n), triples, ring if ring.is_field else None)
    sa = smith_normal_form(A, ring, transforms=not ring.is_field)
    coker = HomologyGroup(n - sa.rank, sa.torsion, ring)
    if ring.is_field:
        img = HomologyGroup(sa.rank, [], ring)
    else:
        # express the relation lattice D in the basis of the column lattice of A
        rel_cols = []
        for r, d in enumerate(orders):
            if d:
                y = sa.U.matvec({r: d}, ring)
                rel_cols.append({t: ring.div(y[t], sa.diagonal[t]) for t in y})
        Y = SparseMatrix.from_columns(sa.rank, rel_cols)
        sy = smith_normal_form(Y, ring)
        img = HomologyGroup(sa.rank - sy.rank, sy.torsion, ring)
    return ImageInfo(img, coker, img.same_type(source), coker.is_zero)


# ---------------------------------------------------------------------------
# linear systems


def solve_linear(A: SparseMatrix, b: Vector, ring: Ring = ZZ, snf: Optional[SNFResult] = None) -> Vector:
    """Exact ``x`` with ``A x = b`` over ``ring``; raises :class:`NoSolution`.

    Over Z the error distinguishes systems that are rationally solvable
    but have no integral solution.
    """
    if any(not (0 <= i < A.shape[0]) for i in b):
        raise DimensionMismatch("right-hand side does not match the matrix")
    if snf is None:
        snf = smith_normal_form(A, ring, transforms=True)
    bb = {i: ring.coerce(v) for i, v in b.items() if v}
    c = snf.U.matvec(bb, ring)
    r = snf.rank
    if any(t >= r for t in c):
        raise NoSolution(rational=False)
    y = {}
    integral = True
    for t, v in c.items():
        q, rem = ring.quo_rem(v, snf.diagonal[t])
        if rem:
            integral = False
            break
        y[t] = q
    if not integral:
        raise NoSolution(rational=True)
    return snf.V.matvec(y, ring)


def vector_to_dense(v: Vector, n: int) -> list:
    out = [0] * n
    for i, x in v.items():
        out[i] = x
    return out


def dense_to_vector(xs: Iterable) -> Vector:
    return {i: x for i, x in enumerate(xs) if x}


# ---------------------------------------------------------------------------
# homology of chain complexes


def homology(cx, ring: Ring = ZZ, k: int = 0, reduced: bool = False, generators: bool = False) -> HomologyGroup:
    """``H_k`` of a complex exposing ``size``, ``boundary_matrix`` and ``max_dim``.

    In the top stored dimension there is no ``d_{k+1}``, so the result is
    the homology of the truncated complex. ``reduced`` uses the
    augmentation in place of ``d_0``.
    """
    if not 0 <= k <= cx.max_dim:
        raise DimensionMismatch(f"degree {k} outside 0..{cx.max_dim}")
    key = ("H", ring, k, reduced, generators)
    cache = getattr(cx, "_cache", None)
    if cache is not None:
        hit = cache.get(key)
        if hit is None and not generators:
            hit = cache.get(("H", ring, k, reduced, True))
        if hit is not None:
            return hit
    n = cx.size(k)
    if k == 0:
        A = cx.augmentation_matrix() if reduced else None
    else:
        A = cx.boundary_matrix(k)
    B = cx.boundary_matrix(k + 1) if k < cx.max_dim else None
    H = subquotient(A, B, n, ring, generators)
    if cache is not None:
        cache[key] = H
    return H


def inclusion_map(small, big, ring: Ring = ZZ, k: int = 0, reduced: bool = False) -> InducedMap:
    """Map ``H_k(small) -> H_k(big)`` induced by inclusion, in generator coordinates."""
    if not small.is_subcomplex_of(big):
        raise NotASubcomplex("source complex is not contained in the target complex")
    if k > big.max_dim:
        raise DimensionMismatch(f"degree {k} outside 0..{big.max_dim}")
    src = homology(small, ring, k, reduced, generators=True)
    tgt = homology(big, ring, k, reduced, generators=True)
    return induced_map(small.inclusion_matrix(big, k), src, tgt)
