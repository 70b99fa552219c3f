"""Coarse invariants read off finite samples.

Ends, uniform acyclicity probes, cycle filling, chain/path conversion,
the bottleneck (quasi-tree) test, a ccd estimate and a probe for coarse
Poincare duality. Every verdict is about the sample at hand; the reports
keep the schedule so a reader can judge how far it reaches.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .algebra import ZZ, Ring, inclusion_map, smith_normal_form, solve_linear, subquotient
from .chain_complex import Chain, WindowComplex, _label_json, _num_json, augment, boundary, support, window_complex
from .cohomology import CochainWindow, scan_degrees
from .errors import (DimensionMismatch, EdgeOutOfScale, NoFundamentalCandidate, NoPathInSupport, NoSolution,
                     NotASubcomplex, NotFillable, PreconditionError, ScheduleExceedsSample)


def _sample_radius(space):
    """Radius of the sample around its centre, or None for a complete finite space."""
    if not space.frontier:
        return None
    return max(space.dist_row(space.center))


def _components(space, points, scale):
    """Connected components of the scale-``scale`` Rips graph on ``points``."""
    pts = set(points)
    comp = {}
    n = 0
    for p in sorted(pts):
        if p in comp:
            continue
        comp[p] = n
        queue = deque([p])
        while queue:
            u = queue.popleft()
            for v in space.ball(u, scale):
                if v in pts and v not in comp:
                    comp[v] = n
                    queue.append(v)
        n += 1
    return comp, n


# ---------------------------------------------------------------------------
# ends


@dataclass
class EndsReport:
    scale: object
    basepoint: object
    radii: List
    counts: List[int]
    classification: str
    stabilized: Optional[int]

    def to_json(self):
        return {
            "scale": _num_json(self.scale),
            "basepoint": _label_json(self.basepoint),
            "radii": [_num_json(r) for r in self.radii],
            "counts": self.counts,
            "stabilized_count": self.stabilized,
            "classification": self.classification,
        }


def classify_counts(counts: Sequence[int]):
    """Trichotomy rule on the last two counts."""
    if len(counts) < 2:
        return "inconclusive", None
    a, b = counts[-2], counts[-1]
    if a >= 3 and b >= 3:
        return "infinity", b
    if a == b:
        return str(b), b
    return "inconclusive", None


def ends(space, basepoint=None, scale=1, radii=(2, 4, 6)) -> EndsReport:
    """Count components of the scale-``scale`` Rips graph on ``X - N_r(x0)``.

    Only components that reach the sample's frontier count, since the
    others are bounded; a complete finite space counts every component.
    """
    space.require_graph()
    x0 = space.center if basepoint is None else space.index(basepoint)
    radii = list(radii)
    R = _sample_radius(space)
    counts = []
    row = space.dist_row(x0)
    for r in radii:
        if R is not None and r + scale > R:
            raise ScheduleExceedsSample(f"radius {r} plus a shell of {scale} exceeds the sampled radius {R}")
        outside = [y for y in range(space.n) if row[y] > r]
        comp, n = _components(space, outside, scale)
        if space.frontier:
            n = len({comp[y] for y in space.frontier if y in comp})
        counts.append(n)
    cls, stab = classify_counts(counts)
    return EndsReport(scale, space.label(x0), radii, counts, cls, stab)


# ---------------------------------------------------------------------------
# uniform acyclicity


def _check_window(space, r):
    R = _sample_radius(space)
    if R is not None and r > R:
        raise ScheduleExceedsSample(f"window radius {r} exceeds the sampled radius {R}")


def acyclicity_map(space, k, i, r, j, s, x=None, ring: Ring = ZZ, cap=None):
    """The map ``H~_k(C(i, N_r(x))) -> H~_k(C(j, N_s(x)))`` induced by inclusion."""
    if not (i <= j and r <= s):
        raise PreconditionError("need i <= j and r <= s")
    _check_window(space, s)
    c = space.center if x is None else space.index(x)
    kw = {} if cap is None else {"cap": cap}
    small = window_complex(space, i, c, r, k + 1, **kw)
    big = window_complex(space, j, c, s, k + 1, **kw)
    return inclusion_map(small, big, ring, k, reduced=True)


def acyclicity_probe(space, k, i, r, j, s, x=None, ring: Ring = ZZ, cap=None) -> bool:
    """True iff the inclusion-induced map on reduced ``H_k`` is zero."""
    return acyclicity_map(space, k, i, r, j, s, x, ring, cap).is_zero


@dataclass
class AcyclicityProfile:
    k: int
    ring: Ring
    cells: List[dict]
    lam: Dict
    mu: Dict

    def to_json(self):
        return {
            "k": self.k,
            "ring": self.ring.name,
            "cells": self.cells,
            "lambda": [[_num_json(i), _num_json(v)] for i, v in sorted(self.lam.items())],
            "mu": [[_num_json(i), _num_json(r), _num_json(v)] for (i, r), v in sorted(self.mu.items())],
        }

    def to_csv(self):
        lines = ["i,r,j,s,zero"]
        for c in self.cells:
            lines.append(f"{c['i']},{c['r']},{c['j'] if c['j'] is not None else ''},"
                         f"{c['s'] if c['s'] is not None else ''},{c['found']}")
        return "\n".join(lines) + "\n"


def acyclicity_profile(space, k, probes, targets, x=None, ring: Ring = ZZ, cap=None) -> AcyclicityProfile:
    """For each probe ``(i, r)`` the first target ``(j, s)`` (in the given order) with zero map."""
    cells = []
    lam, mu = {}, {}
    for i, r in probes:
        found = None
        for j, s in targets:
            if j < i or s < r:
                continue
            if acyclicity_probe(space, k, i, r, j, s, x, ring, cap):
                found = (j, s)
                break
        cells.append({"i": _num_json(i), "r": _num_json(r),
                      "j": None if found is None else _num_json(found[0]),
                      "s": None if found is None else _num_json(found[1]), "found": found is not None})
        if found is not None:
            lam[i] = max(lam.get(i, found[0]), found[0])
            mu[(i, r)] = found[1]
    return AcyclicityProfile(k, ring, cells, lam, mu)


# ---------------------------------------------------------------------------
# filling cycles


@dataclass
class Filling:
    omega: Chain
    support: set
    excess: object

    def to_json(self, labels=None):
        return {"omega": self.omega.to_json(labels), "support_size": len(self.support),
                "excess": _num_json(self.excess)}


def _snf_for(cx, k, ring):
    key = ("snf", k, ring)
    hit = cx._cache.get(key)
    if hit is None:
        hit = smith_normal_form(cx.boundary_matrix(k), ring, transforms=True)
        cx._cache[key] = hit
    return hit


def fill_cycle(cx_small: WindowComplex, sigma: Chain, cx_big: WindowComplex) -> Filling:
    """A chain ``omega`` in ``cx_big`` with ``d omega = sigma`` exactly."""
    if not cx_small.is_subcomplex_of(cx_big):
        raise NotASubcomplex("the small window is not contained in the big one")
    if not cx_small.contains_chain(sigma):
        raise DimensionMismatch("sigma does not live in the small window")
    k = sigma.dim
    ring = sigma.ring
    if boundary(sigma):
        raise PreconditionError("sigma is not a cycle")
    if k == 0 and augment(sigma):
        raise PreconditionError("a 0-cycle needs augmentation zero to be filled")
    if not sigma:
        return Filling(Chain.zero(k + 1, ring), set(), 0)
    if k + 1 > cx_big.max_dim:
        # a truncated window has no (k+1)-chains, so only zero is fillable
        raise NotFillable(False)
    snf = _snf_for(cx_big, k + 1, ring)
    try:
        x = solve_linear(cx_big.boundary_matrix(k + 1), cx_big.chain_vector(sigma), ring, snf)
    except NoSolution as exc:
        raise NotFillable(exc.rational) from None
    omega = cx_big.vector_chain(k + 1, x, ring)
    if boundary(omega) != sigma:
        raise ArithmeticError("filling failed its exact re-check")
    space = cx_big.space
    src = support(sigma)
    sup = support(omega)
    excess = 0
    for y in sup:
        d = min(space.dist(y, z) for z in src)
        if d > excess:
            excess = d
    return Filling(omega, sup, excess)


# ---------------------------------------------------------------------------
# chains and paths


def chain_to_path(sigma: Chain, x: int, y: int, space=None, scale=None) -> List[int]:
    """A point sequence from ``x`` to ``y`` along the edges of ``sigma``.

    Requires ``d sigma = [y] - [x]``. Steps follow edges of ``sigma``, so
    with ``space`` and ``scale`` given every step is checked to be at
    most ``scale``.
    """
    if sigma.dim != 1:
        raise DimensionMismatch("chain_to_path expects a 1-chain")
    target = Chain(0, {(y,): 1, (x,): -1}, sigma.ring) if x != y else Chain.zero(0, sigma.ring)
    if boundary(sigma) != target:
        raise PreconditionError("boundary of sigma is not [y] - [x]")
    if x == y:
        return [x]
    adj = {}
    for a, b in sigma.coeffs:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    prev = {x: None}
    queue = deque([x])
    while queue:
        u = queue.popleft()
        if u == y:
            break
        for v in sorted(adj.get(u, ())):
            if v not in prev:
                prev[v] = u
                queue.append(v)
    if y not in prev:
        raise NoPathInSupport(f"no path from {x} to {y} along the chain")
    path = [y]
    while path[-1] != x:
        path.append(prev[path[-1]])
    path.reverse()
    if space is not None and scale is not None:
        for a, b in zip(path, path[1:]):
            if space.dist(a, b) > scale:
                raise NoPathInSupport(f"step {a}->{b} longer than the scale")
    return path


def path_to_chain(path: Sequence[int], cx: WindowComplex, ring: Ring = ZZ) -> Chain:
    """``sum +-[x_(a-1), x_a]`` with boundary ``[y] - [x]``."""
    out = Chain.zero(1, ring)
    path = list(path)
    for v in path:
        if v not in cx.window_set:
            raise EdgeOutOfScale(f"point {v} is outside the window")
    for a, b in zip(path, path[1:]):
        if a == b:
            continue
        key = (a, b) if a < b else (b, a)
        if key not in cx:
            raise EdgeOutOfScale(f"edge {key} is not in the complex at scale {cx.scale}")
        out = out + Chain(1, {key: 1 if a < b else -1}, ring)
    return out


# ---------------------------------------------------------------------------
# bottleneck property


@dataclass
class BottleneckReport:
    delta_max: int
    pairs_checked: int
    pair_deltas: Dict[tuple, Optional[int]]
    passes_at: Optional[int]
    witness: Optional[dict]
    sampled: bool

    @property
    def passes(self):
        return self.passes_at is not None

    def to_json(self):
        hist = {}
        for v in self.pair_deltas.values():
            key = "none" if v is None else str(v)
            hist[key] = hist.get(key, 0) + 1
        return {
            "delta_max": self.delta_max,
            "pairs_checked": self.pairs_checked,
            "sampled": self.sampled,
            "min_delta_histogram": dict(sorted(hist.items())),
            "verdict": "passes" if self.passes else "fails",
            "passes_at": self.passes_at,
            "witness": self.witness,
        }

    def to_csv(self, labels=None):
        lines = ["x,y,min_delta"]
        for (x, y), d in sorted(self.pair_deltas.items()):
            lx = labels[x] if labels else x
            ly = labels[y] if labels else y
            lines.append(f"{lx},{ly},{'' if d is None else d}")
        return "\n".join(lines) + "\n"


class _Separator:
    """Component labels of ``G - B_delta(m)``, computed on demand."""

    def __init__(self, space):
        self.space = space
        self.cache = {}

    def labels(self, m, delta):
        key = (m, delta)
        hit = self.cache.get(key)
        if hit is None:
            ball = set(self.space.ball(m, delta))
            adj = self.space.adjacency
            comp = {}
            n = 0
            for p in range(self.space.n):
                if p in ball or p in comp:
                    continue
                comp[p] = n
                queue = deque([p])
                while queue:
                    u = queue.popleft()
                    for v in adj[u]:
                        if v not in ball and v not in comp:
                            comp[v] = n
                            queue.append(v)
                n += 1
            hit = (ball, comp)
            self.cache[key] = hit
        return hit

    def separates(self, m, delta, x, y):
        ball, comp = self.labels(m, delta)
        return x in ball or y in ball or comp[x] != comp[y]


def _midpoints(space, levels, x, y):
    d = space.dist(x, y)
    ry = space.dist_row(y)
    out = []
    # |d(x, m) - d/2| <= 1/2 and the same for y
    for t in range(d // 2, (d + 1) // 2 + 1):
        for m in levels[x].get(t, ()):
            if d - 1 <= 2 * ry[m] <= d + 1:
                out.append(m)
    return sorted(out)


def bottleneck_check(space, delta_max=3, pairs="all", seed=0) -> BottleneckReport:
    """Bottleneck test: some near-midpoint ball of radius delta must cut every x-y path.

    Each pair gets its least passing delta (passing is upward closed in
    delta). Pairs are scanned farthest first and the scan stops at the
    first pair failing at ``delta_max``.
    """
    space.require_graph()
    n = space.n
    all_pairs = [(x, y) for x in range(n) for y in range(x + 1, n)]
    sampled = pairs != "all"
    if sampled:
        rng = random.Random(seed)
        all_pairs = sorted(rng.sample(all_pairs, min(int(pairs), len(all_pairs))))
    all_pairs.sort(key=lambda p: (-space.dist(*p), p))
    levels = []
    for x in range(n):
        lv = {}
        for m, dm in enumerate(space.dist_row(x)):
            lv.setdefault(dm, []).append(m)
        levels.append(lv)
    sep = _Separator(space)
    pair_deltas = {}
    witness = None
    for x, y in all_pairs:
        mids = _midpoints(space, levels, x, y)
        best = None
        for delta in range(delta_max + 1):
            if any(sep.separates(m, delta, x, y) for m in mids):
                best = delta
                break
        pair_deltas[(x, y)] = best
        if best is None:
            m0 = mids[0] if mids else None
            comp_path = None
            if m0 is not None:
                comp_path = _avoiding_path(space, sep.labels(m0, delta_max)[0], x, y)
            witness = {
                "x": _label_json(space.label(x)),
                "y": _label_json(space.label(y)),
                "distance": space.dist(x, y),
                "midpoint": None if m0 is None else _label_json(space.label(m0)),
                "midpoints_tried": len(mids),
                "avoiding_path": None if comp_path is None else [_label_json(space.label(p)) for p in comp_path],
            }
            break
    passes_at = None
    if witness is None:
        passes_at = max((d for d in pair_deltas.values()), default=0)
    return BottleneckReport(delta_max, len(pair_deltas), pair_deltas, passes_at, witness, sampled)


def _avoiding_path(space, ball, x, y):
    prev = {x: None}
    queue = deque([x])
    while queue:
        u = queue.popleft()
        if u == y:
            break
        for v in space.adjacency[u]:
            if v not in ball and v not in prev:
                prev[v] = u
                queue.append(v)
    if y not in prev:
        return None
    path = [y]
    while path[-1] != x:
        path.append(prev[path[-1]])
    return path[::-1]


# ---------------------------------------------------------------------------
# cohomological dimension and duality


ASSUMPTIONS = [
    "coarse finite type is assumed, not checked",
    "coarse homogeneity is assumed, not checked",
    "verdicts describe the sampled windows only",
]


def _degree_status(rep):
    if rep.verdict == "stable":
        return "zero" if rep.group.is_zero else "nonzero"
    if rep.verdict == "unstable" and all(s.group is not None and not s.group.is_zero for s in rep.stages):
        return "nonzero"
    return "unknown"


def ccd_estimate(space, ring: Ring = ZZ, schedule=(), k_max=2, collar=None, cap=None) -> dict:
    """Largest degree whose compact cohomology is nonzero along the schedule.

    A degree counts as nonzero when it is stable and nonzero, or when it
    keeps growing (an infinitely generated limit is still nonzero).
    """
    reports = scan_degrees(space, range(k_max + 1), ring, schedule, collar, cap)
    status = {k: _degree_status(r) for k, r in reports.items()}
    nonzero = [k for k, s in status.items() if s == "nonzero"]
    estimate = max(nonzero) if nonzero else None
    conclusive = estimate is not None and all(status[k] == "zero" for k in range(estimate + 1, k_max + 1))
    return {
        "estimate": estimate,
        "conclusive": conclusive,
        "k_max": k_max,
        "lower_bound_only": estimate == k_max,
        "degrees": {str(k): {"status": status[k], "scan": reports[k].to_json()} for k in sorted(reports)},
        "assumptions": ASSUMPTIONS,
    }


def oriented_top_chain(cx: WindowComplex, n: int, ring: Ring = ZZ) -> Optional[Chain]:
    """Consistently oriented sum of the n-simplices, or None if none exists.

    Signs spread over a spanning tree of the codimension-one adjacency;
    a face with more than two cofaces or a sign conflict gives None.
    """
    tops = cx.simplices[n] if n <= cx.max_dim else []
    if not tops:
        return None
    cof = {}
    for t, key in enumerate(tops):
        for a in range(len(key)):
            f = key[:a] + key[a + 1:]
            cof.setdefault(f, []).append((t, 1 if a % 2 == 0 else -1))
    if any(len(v) > 2 for v in cof.values()):
        return None
    nbrs = {}
    for lst in cof.values():
        if len(lst) == 2:
            (t, s), (u, v) = lst
            nbrs.setdefault(t, []).append((u, s, v))
            nbrs.setdefault(u, []).append((t, v, s))
    sign = {0: 1}
    queue = deque([0])
    while queue:
        t = queue.popleft()
        for u, st, su in nbrs.get(t, ()):
            want = -sign[t] * st * su
            if u in sign:
                if sign[u] != want:
                    return None
            else:
                sign[u] = want
                queue.append(u)
    if len(sign) != len(tops):
        return None
    return Chain(n, {tops[t]: s for t, s in sign.items()}, ring)


def _relative_cycle(cw: CochainWindow, tau: Chain) -> Optional[dict]:
    """``tau`` as a cycle of ``C(K, L)``, or None if it is not one."""
    n = tau.dim
    idx = cw.index[n]
    vec = {idx[s]: v for s, v in tau.coeffs.items() if s in idx}
    bd = boundary(tau)
    lower = cw.index[n - 1] if n >= 1 else {}
    if any(s in lower for s in bd.coeffs):
        return None
    return vec


def _relative_homology_generator(cw: CochainWindow, n):
    """A free generator of ``H_n(K, L)``, if its free rank is 1."""
    def rel_boundary(k):
        # d_k restricted to non-collar simplices; d = (+-) delta^T
        return cw.delta_matrix(k - 1).T

    A = rel_boundary(n) if n >= 1 else None
    B = rel_boundary(n + 1) if n + 1 <= cw.max_dim else None
    H = subquotient(A, B, cw.size(n), cw.ring, generators=True)
    if H.free_rank != 1:
        return None, H
    return H.generators[len(H.torsion)], H


@dataclass
class PDReport:
    n: int
    ring: Ring
    degrees: Dict[int, dict]
    conditions: Dict[str, bool]
    candidate: Optional[str]
    pairing: object
    consistent: bool
    reason: Optional[str]
    notes: List[str] = field(default_factory=list)

    def to_json(self):
        return {
            "n": self.n,
            "ring": self.ring.name,
            "degrees": {str(k): v for k, v in sorted(self.degrees.items())},
            "conditions": self.conditions,
            "fundamental_candidate": self.candidate,
            "pairing": None if self.pairing is None else self.ring.to_json(self.pairing),
            "verdict": "consistent" if self.consistent else "not consistent",
            "reason": self.reason,
            "notes": self.notes,
            "assumptions": ASSUMPTIONS,
        }


def pd_probe(space, ring: Ring = ZZ, n=1, schedule=(), collar=None, cap=None) -> PDReport:
    """Check the compact-cohomology signature of coarse PD_n and the fundamental pairing."""
    if n < 1:
        raise PreconditionError("n must be >= 1")
    reports = scan_degrees(space, range(n + 1), ring, schedule, collar, cap)
    degrees = {k: {"verdict": r.verdict, "group": r.group.summary() if r.group else None,
                   "stages": [s.group.summary() if s.group else None for s in r.stages]}
               for k, r in reports.items()}
    below = all(reports[k].verdict == "stable" and reports[k].group.is_zero for k in range(n))
    top = reports[n]
    at_n = top.verdict == "stable" and top.group.free_rank == 1 and not top.group.torsion
    conditions = {"vanishing_below_n": below, "rank_one_at_n": at_n}
    if not (below and at_n):
        failed = [name for name, ok in conditions.items() if not ok]
        return PDReport(n, ring, degrees, conditions, None, None, False, "failed: " + ", ".join(failed))

    (i, r) = tuple(schedule[-1])
    c = collar if collar is not None and not isinstance(collar, (list, tuple)) else (
        collar[-1] if collar else 2 * i)
    cx = window_complex(space, i, space.center, r, n + 1, **({} if cap is None else {"cap": cap}))
    cw = CochainWindow(cx, ring, c)
    alpha = cw.cohomology(n, generators=True)
    gen = alpha.generators[len(alpha.torsion)]
    notes = []
    tau_vec = None
    candidate = None
    tau = oriented_top_chain(cx, n, ring)
    if tau is not None:
        tau_vec = _relative_cycle(cw, tau)
        if tau_vec is not None:
            candidate = "oriented top chain"
        else:
            notes.append("oriented top chain is not a relative cycle")
    else:
        notes.append("top simplices admit no consistent orientation; using relative homology")
    if tau_vec is None:
        tau_vec, Hn = _relative_homology_generator(cw, n)
        if tau_vec is None:
            raise NoFundamentalCandidate(f"relative H_{n} has free rank {Hn.free_rank}, expected 1")
        candidate = "relative homology generator"
    value = ring.reduce(sum(v * gen.get(t, 0) for t, v in tau_vec.items()))
    unit = ring.is_unit(value)
    conditions["unit_pairing"] = unit
    return PDReport(n, ring, degrees, conditions, candidate, value, unit,
                    None if unit else "pairing is not a unit", notes)
