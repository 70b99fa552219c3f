"""Alexander-Whitney cup and cap products on ordered simplices.

The diagonal splits ``[x_0..x_k]`` into front and back faces,
``sum_j [x_0..x_j] (x) [x_j..x_k]``. Products are evaluated inside one
window complex and the tensor complex is never built.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import List, Optional

from .algebra import ZZ, Ring, homology
from .chain_complex import Chain, Cochain, WindowComplex, boundary, coboundary, support
from .errors import DimensionMismatch, DimensionOverflow


@dataclass(frozen=True)
class DiagonalTerm:
    front: tuple
    back: tuple
    sign: int = 1


def diagonal(sigma) -> List[DiagonalTerm]:
    sigma = tuple(sigma)
    return [DiagonalTerm(sigma[:j + 1], sigma[j:]) for j in range(len(sigma))]


def cup(alpha: Cochain, beta: Cochain, cx: Optional[WindowComplex] = None) -> Cochain:
    """``(alpha cup beta)(sigma) = alpha(front_j sigma) * beta(back_k sigma)``."""
    if alpha.ring != beta.ring:
        raise DimensionMismatch("cochains have different rings")
    j, k = alpha.dim, beta.dim
    if cx is not None and j + k > cx.max_dim:
        raise DimensionOverflow(f"cup of degrees {j} and {k} exceeds max_dim {cx.max_dim}")
    ring = alpha.ring
    red = ring.reduce
    by_first = {}
    for b, v in beta.coeffs.items():
        by_first.setdefault(b[0], []).append((b, v))
    out = {}
    for f, u in alpha.coeffs.items():
        for b, v in by_first.get(f[-1], ()):
            s = f + b[1:]
            if cx is not None and s not in cx:
                continue
            nv = red(out.get(s, 0) + u * v)
            if nv:
                out[s] = nv
            else:
                out.pop(s, None)
    return Cochain._raw(j + k, out, ring)


def cap(tau: Chain, alpha: Cochain) -> Chain:
    """``tau cap alpha = sum coeff * alpha(front_j sigma) * back_j sigma``."""
    if tau.ring != alpha.ring:
        raise DimensionMismatch("chain and cochain have different rings")
    j = alpha.dim
    if j > tau.dim:
        raise DimensionMismatch(f"cannot cap a {tau.dim}-chain with a {j}-cochain")
    ring = tau.ring
    red = ring.reduce
    vals = alpha.coeffs
    out = {}
    for s, c in tau.coeffs.items():
        a = vals.get(s[:j + 1])
        if not a:
            continue
        back = s[j:]
        nv = red(out.get(back, 0) + c * a)
        if nv:
            out[back] = nv
        else:
            out.pop(back, None)
    return Chain._raw(tau.dim - j, out, ring)


def unit_cochain(cx: WindowComplex, ring: Ring = ZZ) -> Cochain:
    """The constant 0-cochain with value 1."""
    return Cochain(0, {s: 1 for s in cx.simplices[0]}, ring)


# ---------------------------------------------------------------------------
# randomized identity checks


def _random_value(rng, ring):
    if ring.name == "Z":
        return rng.randint(-3, 3)
    if ring.name == "Q":
        from fractions import Fraction
        return Fraction(rng.randint(-3, 3), rng.randint(1, 3))
    return rng.randrange(ring.p)


def random_chain(cx, k, ring, rng, density=0.4, cls=Chain):
    keys = cx.simplices[k] if 0 <= k <= cx.max_dim else []
    if not keys:
        return cls.zero(k, ring)
    m = max(1, int(len(keys) * density)) if len(keys) < 12 else rng.randint(1, min(len(keys), 12))
    picks = rng.sample(keys, min(m, len(keys)))
    return cls(k, {s: _random_value(rng, ring) for s in picks}, ring)


def random_cochain(cx, k, ring, rng, density=0.4):
    return random_chain(cx, k, ring, rng, density, Cochain)


def random_cycle(cx, n, ring, rng) -> Chain:
    """A random n-cycle: boundary of a random (n+1)-chain plus homology generators."""
    z = Chain.zero(n, ring)
    if n + 1 <= cx.max_dim and cx.size(n + 1):
        z = boundary(random_chain(cx, n + 1, ring, rng))
    if n < cx.max_dim:
        H = homology(cx, ring, n, generators=True)
        for g in H.generators:
            z = z + cx.vector_chain(n, g, ring).scale(_random_value(rng, ring))
    return z


def random_cocycle(cx, n, ring, rng) -> Cochain:
    """A random n-cocycle: coboundary of a random (n-1)-cochain plus cocycle generators."""
    from .cohomology import CochainWindow

    a = Cochain.zero(n, ring)
    if n >= 1:
        a = coboundary(random_cochain(cx, n - 1, ring, rng), cx)
    if n < cx.max_dim:
        cw = CochainWindow(cx, ring, None)
        for g in cw.generator_cochains(n):
            a = a + g.scale(_random_value(rng, ring))
    return a


@dataclass
class IdentityReport:
    trials: int
    passes: dict = field(default_factory=lambda: {"leibniz": 0, "cap_boundary": 0, "cap_augmentation": 0})
    checked: dict = field(default_factory=lambda: {"leibniz": 0, "cap_boundary": 0, "cap_augmentation": 0})
    counterexample: Optional[dict] = None

    @property
    def ok(self):
        return self.counterexample is None

    def to_json(self):
        return {"trials": self.trials, "checked": self.checked, "passes": self.passes,
                "all_hold": self.ok, "counterexample": self.counterexample}


def verify_identities(cx: WindowComplex, ring: Ring = ZZ, trials: int = 100, seed: int = 0) -> IdentityReport:
    """Check the Leibniz rule, the cap boundary formula and ``eps(tau cap alpha) = alpha(tau)``.

    With ``delta = (-1)^(k+1) d^T`` the rules read

        delta(a cup b) = (-1)^k delta a cup b + a cup delta b      (k = deg b)
        d(t cap a) = t cap delta a + (-1)^j d t cap a              (j = deg a)
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    rep = IdentityReport(trials)
    top = cx.max_dim
    dims = [k for k in range(top + 1) if cx.size(k)]

    def fail(name, **data):
        if rep.counterexample is None:
            rep.counterexample = {"identity": name, **{k: v.to_json() if hasattr(v, "to_json") else v
                                                       for k, v in data.items()}}

    for _ in range(trials):
        # Leibniz: needs j + k + 1 <= top
        if top >= 1:
            j = rng.randint(0, top - 1)
            k = rng.randint(0, top - 1 - j)
            a = random_cochain(cx, j, ring, rng)
            b = random_cochain(cx, k, ring, rng)
            lhs = coboundary(cup(a, b, cx), cx)
            da = cup(coboundary(a, cx), b, cx)
            rhs = (da if k % 2 == 0 else -da) + cup(a, coboundary(b, cx), cx)
            rep.checked["leibniz"] += 1
            if lhs == rhs:
                rep.passes["leibniz"] += 1
            else:
                fail("leibniz", alpha=a, beta=b)
        # cap boundary: tau of dim n >= j + 1
        if top >= 1 and dims:
            n = rng.randint(1, max(dims))
            j = rng.randint(0, n - 1)
            t = random_chain(cx, n, ring, rng)
            a = random_cochain(cx, j, ring, rng)
            lhs = boundary(cap(t, a))
            dt = cap(boundary(t), a)
            rhs = cap(t, coboundary(a, cx)) + (dt if j % 2 == 0 else -dt)
            rep.checked["cap_boundary"] += 1
            if lhs == rhs:
                rep.passes["cap_boundary"] += 1
            else:
                fail("cap_boundary", tau=t, alpha=a)
        # augmentation on cycles and cocycles
        if dims:
            n = rng.choice(dims)
            t = random_cycle(cx, n, ring, rng)
            a = random_cocycle(cx, n, ring, rng)
            c = cap(t, a)
            lhs = ring.reduce(sum(c.coeffs.values()))
            rhs = a(t)
            rep.checked["cap_augmentation"] += 1
            if lhs == rhs:
                rep.passes["cap_augmentation"] += 1
            else:
                fail("cap_augmentation", tau=t, alpha=a)
    return rep


def support_bound_audit(cx: WindowComplex, trials: int = 100, seed: int = 0, ring: Ring = ZZ) -> dict:
    """Smallest ``psi`` with ``supp(tau cap alpha)`` inside ``N_psi(supp tau)``.

    Every simplex is also tried on its own against every front-face dual,
    so the measured value is exact for single simplices.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    space = cx.space
    psi = 0
    worst = None

    def excess(tau, out):
        src = support(tau)
        best = 0
        for y in support(out):
            d = min(space.dist(y, x) for x in src)
            if d > best:
                best = d
        return best

    for k in range(cx.max_dim + 1):
        for s in cx.simplices[k]:
            for j in range(k + 1):
                d = space.dist(s[j], s[0])
                if d > psi:
                    psi, worst = d, {"simplex": list(s), "j": j}
    rng = random.Random(seed)
    dims = [k for k in range(cx.max_dim + 1) if cx.size(k)]
    for _ in range(trials if dims else 0):
        n = rng.choice(dims)
        j = rng.randint(0, n)
        t = random_chain(cx, n, ring, rng)
        a = random_cochain(cx, j, ring, rng)
        out = cap(t, a)
        if out:
            d = excess(t, out)
            if d > psi:
                psi, worst = d, {"tau": t.to_json(), "alpha": a.to_json()}
    from .chain_complex import _num_json

    return {"scale": _num_json(cx.scale), "psi": _num_json(psi), "trials": trials, "witness": worst}


# ---------------------------------------------------------------------------
# structural checks of the diagonal


def tensor_boundary(terms):
    """Koszul boundary of ``sum c * (a (x) b)`` given as ``{(a, b): c}``."""
    out = {}
    for (a, b), c in terms.items():
        if len(a) > 1:
            for sign, f in _faces(a):
                out[(f, b)] = out.get((f, b), 0) + sign * c
        if len(b) > 1:
            eps = -1 if (len(a) - 1) % 2 else 1
            for sign, f in _faces(b):
                out[(a, f)] = out.get((a, f), 0) + eps * sign * c
    return {k: v for k, v in out.items() if v}


def _faces(key):
    for a in range(len(key)):
        yield (1 if a % 2 == 0 else -1), key[:a] + key[a + 1:]


def diagonal_of_chain(c: dict):
    out = {}
    for s, v in c.items():
        for t in diagonal(s):
            out[(t.front, t.back)] = out.get((t.front, t.back), 0) + v
    return {k: v for k, v in out.items() if v}


def diagonal_is_chain_map(sigma) -> bool:
    """``d_tensor Delta(sigma) = Delta(d sigma)`` for one simplex."""
    sigma = tuple(sigma)
    lhs = tensor_boundary(diagonal_of_chain({sigma: 1}))
    bd = {}
    if len(sigma) > 1:
        for sign, f in _faces(sigma):
            bd[f] = bd.get(f, 0) + sign
    rhs = diagonal_of_chain(bd)
    return lhs == rhs
