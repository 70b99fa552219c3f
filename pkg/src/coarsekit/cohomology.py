"""Cochain windows, compactly supported cohomology and stabilization scans.

Compact support on a finite window ``K = C(i, N_r(x))`` is emulated by
relative cochains: with ``L`` the full subcomplex on the collar points
``{y : d(x, y) > r - c}``, a cochain is admissible when it vanishes on
every simplex of ``L``. This set is closed under the coboundary, and for
``c >= i`` extending by zero into a larger window is a cochain map.

The coboundary carries the sign ``delta_k = (-1)^(k+1) d_(k+1)^T``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .algebra import ZZ, GF, HomologyGroup, Ring, SparseMatrix, image_info, induced_map, subquotient
from .chain_complex import Chain, Cochain, WindowComplex, _num_json, faces, pair_values, window_complex
from .errors import CollarTooWide, DimensionMismatch, PreconditionError, ScheduleExceedsSample, SizeExceeded


class CochainWindow:
    """Relative cochain complex ``C^*(K, L)`` of a window complex."""

    def __init__(self, cx: WindowComplex, ring: Ring = ZZ, collar=0):
        self.cx = cx
        self.ring = ring
        self.collar = collar
        if cx.radius is None or collar is None:
            self.collar_points = frozenset()
        else:
            if collar >= cx.radius:
                raise CollarTooWide(f"collar {collar} must be smaller than the window radius {cx.radius}")
            row = cx.space.dist_row(cx.center)
            cut = cx.radius - collar
            self.collar_points = frozenset(y for y in cx.window if row[y] > cut)
        cp = self.collar_points
        self.basis: List[List] = []
        self.index: List[Dict] = []
        for k in range(cx.max_dim + 1):
            keys = [s for s in cx.simplices[k] if not all(v in cp for v in s)]
            self.basis.append(keys)
            self.index.append({s: t for t, s in enumerate(keys)})
        self._delta = {}
        self._cache = {}

    @property
    def max_dim(self):
        return self.cx.max_dim

    def size(self, k):
        return len(self.basis[k]) if 0 <= k <= self.max_dim else 0

    def delta_matrix(self, k) -> SparseMatrix:
        """Matrix of ``delta_k : C^k -> C^(k+1)`` on the admissible bases."""
        hit = self._delta.get(k)
        if hit is not None:
            return hit
        m = SparseMatrix((self.size(k + 1), self.size(k)))
        if 0 <= k < self.max_dim:
            sgn = -1 if k % 2 == 0 else 1
            src = self.index[k]
            for row, key in enumerate(self.basis[k + 1]):
                r = {}
                for sign, f in faces(key):
                    col = src.get(f)
                    if col is not None:
                        r[col] = sgn * sign
                if r:
                    m.rows[row] = r
        self._delta[k] = m
        return m

    def check(self) -> bool:
        """``delta delta = 0`` in every degree."""
        return all(self.delta_matrix(k + 1).matmul(self.delta_matrix(k)).is_zero() for k in range(self.max_dim - 1))

    def cohomology(self, k, generators=False) -> HomologyGroup:
        if not 0 <= k <= self.max_dim:
            raise DimensionMismatch(f"degree {k} outside 0..{self.max_dim}")
        key = (k, generators)
        hit = self._cache.get(key) or (None if generators else self._cache.get((k, True)))
        if hit is not None:
            return hit
        A = self.delta_matrix(k) if k < self.max_dim else None
        B = self.delta_matrix(k - 1) if k > 0 else None
        H = subquotient(A, B, self.size(k), self.ring, generators)
        self._cache[key] = H
        return H

    def vector(self, alpha: Cochain) -> dict:
        idx = self.index[alpha.dim]
        out = {}
        for s, v in alpha.coeffs.items():
            t = idx.get(s)
            if t is None:
                raise DimensionMismatch(f"cochain is nonzero on {s}, which is not an admissible simplex")
            out[t] = v
        return out

    def cochain(self, k, vec) -> Cochain:
        keys = self.basis[k]
        return Cochain(k, {keys[t]: v for t, v in vec.items()}, self.ring)

    def generator_cochains(self, k) -> List[Cochain]:
        H = self.cohomology(k, generators=True)
        return [self.cochain(k, g) for g in H.generators]

    def summary(self):
        out = self.cx.summary()
        out["collar"] = None if self.collar is None else _num_json(self.collar)
        out["admissible_counts"] = [self.size(k) for k in range(self.max_dim + 1)]
        return out


def build_cochain_window(cx: WindowComplex, ring: Ring = ZZ, collar=0) -> CochainWindow:
    return CochainWindow(cx, ring, collar)


def compact_cohomology(ccx: CochainWindow, k, generators=False) -> HomologyGroup:
    """``H^k`` of the collar-vanishing cochains; needs ``max_dim >= k + 1`` to be untruncated."""
    return ccx.cohomology(k, generators)


def pair(tau: Chain, alpha: Cochain):
    """Kronecker pairing of a chain and a cochain of equal dimension."""
    if tau.ring != alpha.ring:
        raise DimensionMismatch("chain and cochain have different rings")
    return pair_values(tau, alpha)


def extension_matrix(inner: CochainWindow, outer: CochainWindow, k) -> SparseMatrix:
    """Extension by zero ``C^k(inner) -> C^k(outer)``."""
    idx = outer.index[k]
    m = SparseMatrix((outer.size(k), inner.size(k)))
    for col, key in enumerate(inner.basis[k]):
        row = idx.get(key)
        if row is None:
            raise PreconditionError(f"simplex {key} of the inner window is not admissible in the outer one")
        m.rows.setdefault(row, {})[col] = 1
    return m


def restriction_matrix(big: CochainWindow, small: CochainWindow, k) -> SparseMatrix:
    """Restriction ``C^k(big) -> C^k(small)`` from a larger scale to a smaller one."""
    idx = big.index[k]
    m = SparseMatrix((small.size(k), big.size(k)))
    for row, key in enumerate(small.basis[k]):
        col = idx.get(key)
        if col is not None:
            m.rows[row] = {col: 1}
    return m


def is_cochain_map(src: CochainWindow, dst: CochainWindow, maps: Dict[int, SparseMatrix], k) -> bool:
    """``delta f = f delta`` between degrees ``k`` and ``k + 1`` (and ``k - 1``, ``k``)."""
    ok = True
    for a in (k - 1, k):
        if a < 0 or a + 1 > min(src.max_dim, dst.max_dim) or a not in maps or a + 1 not in maps:
            continue
        lhs = dst.delta_matrix(a).matmul(maps[a])
        rhs = maps[a + 1].matmul(src.delta_matrix(a))
        ok = ok and lhs == rhs
    return ok


# ---------------------------------------------------------------------------
# stabilization


@dataclass
class Stage:
    scale: object
    radius: object
    collar: object
    group: Optional[HomologyGroup] = None
    counts: Optional[List[int]] = None
    skipped: Optional[str] = None

    def to_json(self):
        out = {"scale": _num_json(self.scale), "radius": _num_json(self.radius), "collar": _num_json(self.collar)}
        if self.skipped:
            out["skipped"] = self.skipped
        else:
            out["group"] = self.group.summary()
            out["counts"] = self.counts
        return out


@dataclass
class Leg:
    kind: str  # "extension" or "restriction"
    source: str
    target: str
    image: HomologyGroup
    cokernel: HomologyGroup
    injective: bool
    surjective: bool
    cochain_map: bool

    @property
    def isomorphism(self):
        return self.injective and self.surjective

    def to_json(self):
        return {
            "kind": self.kind,
            "source": self.source,
            "target": self.target,
            "image": self.image.summary(),
            "cokernel": self.cokernel.summary(),
            "injective": self.injective,
            "surjective": self.surjective,
            "cochain_map": self.cochain_map,
        }


@dataclass
class StabilizationReport:
    k: int
    ring: Ring
    stages: List[Stage]
    transitions: List[List[Leg]]
    verdict: str
    stable_from: Optional[int] = None
    notes: List[str] = field(default_factory=list)

    @property
    def group(self) -> Optional[HomologyGroup]:
        return self.stages[-1].group if self.verdict == "stable" else None

    @property
    def rank(self):
        return self.group.free_rank if self.group is not None else None

    def to_json(self):
        g = self.group
        return {
            "k": self.k,
            "ring": self.ring.name,
            "stages": [s.to_json() for s in self.stages],
            "transitions": [[leg.to_json() for leg in legs] for legs in self.transitions],
            "verdict": self.verdict,
            "stable_from": self.stable_from,
            "group": g.summary() if g is not None else None,
            "notes": self.notes,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["stage", "scale", "radius", "collar", "k", "rank", "torsion"])
        for n, s in enumerate(self.stages):
            if s.skipped:
                w.writerow([n, s.scale, s.radius, s.collar, self.k, "", "skipped"])
            else:
                w.writerow([n, s.scale, s.radius, s.collar, self.k, s.group.free_rank,
                            " ".join(str(d) for d in s.group.torsion)])
        return buf.getvalue()


def parse_schedule(scales, radii) -> List[tuple]:
    """Pair up scales and radii; a single scale is broadcast."""
    scales = list(scales)
    radii = list(radii)
    if len(scales) == 1:
        scales = scales * len(radii)
    if len(scales) != len(radii):
        raise PreconditionError("scale and radius lists differ in length")
    return list(zip(scales, radii))


def _check_schedule(space, schedule, collars):
    if len(schedule) < 3:
        raise PreconditionError(f"a stabilization scan needs at least 3 stages, got {len(schedule)}")
    for (i0, r0), (i1, r1) in zip(schedule, schedule[1:]):
        if not (r1 > r0 and i1 >= i0):
            raise PreconditionError("stages must have strictly increasing radius and non-decreasing scale")
    for (i, r), c in zip(schedule, collars):
        if c < i:
            raise PreconditionError(f"collar {c} is below the scale {i}; extension by zero would not be a cochain map")
        if c >= r:
            raise CollarTooWide(f"collar {c} must be smaller than the window radius {r}")
    for a, b in zip(collars, collars[1:]):
        if b < a:
            raise PreconditionError("collars must be non-decreasing along the schedule")
    if space.frontier:
        limit = max(space.dist_row(space.center))
        for _, r in schedule:
            if r > limit:
                raise ScheduleExceedsSample(f"radius {r} exceeds the sampled radius {limit}")


class _WindowCache:
    def __init__(self, space, ring, max_dim, cap):
        self.space, self.ring, self.max_dim, self.cap = space, ring, max_dim, cap
        self.cx = {}
        self.cw = {}

    def complex(self, i, r):
        key = (i, r)
        if key not in self.cx:
            self.cx[key] = window_complex(self.space, i, self.space.center, r, self.max_dim, self.cap)
        return self.cx[key]

    def window(self, i, r, c):
        key = (i, r, c)
        if key not in self.cw:
            self.cw[key] = CochainWindow(self.complex(i, r), self.ring, c)
        return self.cw[key]


def _leg(kind, src, dst, mats, k, names):
    Hs = src.cohomology(k, generators=True)
    Ht = dst.cohomology(k, generators=True)
    f = induced_map(mats[k], Hs, Ht)
    info = image_info(f.matrix, Hs, Ht)
    return Leg(kind, names[0], names[1], info.image, info.cokernel, info.injective, info.surjective,
               is_cochain_map(src, dst, mats, k))


def _cochain_maps(builder, src, dst, k):
    return {a: builder(src, dst, a) for a in range(max(k - 1, 0), min(k + 1, src.max_dim, dst.max_dim) + 1)}


def scan_degrees(space, degrees: Sequence[int], ring: Ring = ZZ, schedule=(), collar=None,
                 cap=None, max_dim=None) -> Dict[int, StabilizationReport]:
    """Run stabilization scans for several degrees sharing the window complexes."""
    from .chain_complex import DEFAULT_SIMPLEX_CAP

    schedule = [tuple(s) for s in schedule]
    degrees = sorted(set(degrees))
    if collar is None:
        collars = [2 * i for i, _ in schedule]
    elif isinstance(collar, (list, tuple)):
        collars = list(collar)
    else:
        collars = [collar] * len(schedule)
    _check_schedule(space, schedule, collars)
    top = max(degrees) + 1 if max_dim is None else max_dim
    cache = _WindowCache(space, ring, top, cap or DEFAULT_SIMPLEX_CAP)

    windows = []
    for (i, r), c in zip(schedule, collars):
        try:
            windows.append(cache.window(i, r, c))
        except SizeExceeded as exc:
            windows.append(str(exc))

    reports = {}
    for k in degrees:
        stages = []
        for ((i, r), c), w in zip(zip(schedule, collars), windows):
            if isinstance(w, str):
                stages.append(Stage(i, r, c, skipped=w))
            else:
                stages.append(Stage(i, r, c, w.cohomology(k, generators=True), w.cx.counts()))
        transitions = []
        for n in range(len(schedule) - 1):
            if stages[n].skipped or stages[n + 1].skipped:
                transitions.append([])
                continue
            (i0, r0), c0 = schedule[n], collars[n]
            (i1, r1), c1 = schedule[n + 1], collars[n + 1]
            inner = windows[n]
            legs = []
            mid = cache.window(i0, r1, c0)
            legs.append(_leg("extension", inner, mid, _cochain_maps(extension_matrix, inner, mid, k), k,
                             (f"({i0},{r0})", f"({i0},{r1})")))
            if i1 != i0:
                outer = windows[n + 1]
                legs.append(_leg("restriction", outer, mid, _cochain_maps(restriction_matrix, outer, mid, k), k,
                                 (f"({i1},{r1})", f"({i0},{r1})")))
            transitions.append(legs)
        reports[k] = _verdict(k, ring, stages, transitions)
    return reports


def _verdict(k, ring, stages, transitions) -> StabilizationReport:
    ok = [bool(legs) and all(leg.isomorphism and leg.cochain_map for leg in legs) for legs in transitions]
    notes = []
    if not all(leg.cochain_map for legs in transitions for leg in legs):
        notes.append("a connecting map failed the cochain-map check")
    # trailing run of isomorphisms
    run = 0
    for flag in reversed(ok):
        if not flag:
            break
        run += 1
    if run >= 2:
        return StabilizationReport(k, ring, stages, transitions, "stable", len(ok) - run, notes)
    trailing = [legs for legs in transitions[-2:]]
    if len(trailing) == 2 and all(legs and not all(leg.isomorphism for leg in legs) for legs in trailing):
        return StabilizationReport(k, ring, stages, transitions, "unstable", None, notes)
    return StabilizationReport(k, ring, stages, transitions, "inconclusive", None, notes)


def stabilization_scan(space, k, ring: Ring = ZZ, schedule=(), collar=None, cap=None) -> StabilizationReport:
    """Compact cohomology in degree ``k`` along a schedule of ``(scale, radius)`` stages.

    The verdict is ``stable`` when the connecting maps of at least the last
    three stages are isomorphisms, ``unstable`` when the last two
    transitions both fail to be isomorphisms, and ``inconclusive`` otherwise.
    """
    return scan_degrees(space, [k], ring, schedule, collar, cap)[k]


# ---------------------------------------------------------------------------
# universal coefficients


def _cochain_side(cx, k, ring):
    """``H^k(Hom(C, ring))`` with ``delta_k = d_(k+1)^T``."""
    top = cx.max_dim
    A = cx.boundary_matrix(k + 1).T if k < top else None
    B = cx.boundary_matrix(k).T if k > 0 else None
    return subquotient(A, B, cx.size(k), ring)


def uct_check(cx, k, p) -> dict:
    """Compare ``dim H^k(C; F_p)`` with the count predicted from ``H^*(C; Z)``."""
    if not 0 <= k <= cx.max_dim:
        raise DimensionMismatch(f"degree {k} outside 0..{cx.max_dim}")
    Hk = _cochain_side(cx, k, ZZ)
    Hk1 = _cochain_side(cx, k + 1, ZZ) if k < cx.max_dim else HomologyGroup(0, [], ZZ)
    Hp = _cochain_side(cx, k, GF(p))
    tens = sum(1 for d in Hk.torsion if d % p == 0)
    tor = sum(1 for d in Hk1.torsion if d % p == 0)
    rhs = Hk.free_rank + tens + tor
    return {
        "k": k,
        "p": p,
        "dim_Fp": Hp.free_rank,
        "rank_Z": Hk.free_rank,
        "tensor_torsion": tens,
        "tor_term": tor,
        "predicted": rhs,
        "Hk_Z": Hk.summary(),
        "Hk1_Z": Hk1.summary(),
        "pass": Hp.free_rank == rhs,
    }


def cohomology_groups(cx, ring: Ring = ZZ) -> List[HomologyGroup]:
    """``H^k(Hom(C, ring))`` for every stored degree."""
    return [_cochain_side(cx, k, ring) for k in range(cx.max_dim + 1)]

