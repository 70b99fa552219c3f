"""Independent reference computations for the tests.

Nothing here imports the package's algebra: dense lists of ints or
Fractions and textbook elimination only.
"""

from fractions import Fraction
from math import gcd


def dense_snf(rows):
    """Invariant factors by textbook dense elimination (smallest pivot first)."""
    a = [list(map(int, r)) for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        a[t], a[i] = a[i], a[t]
        for r in a:
            r[t], r[j] = r[j], r[t]
        while True:
            p = a[t][t]
            done = True
            for i in range(t + 1, m):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = a[t][j] // p
                if q:
                    for r in a:
                        r[j] -= q * r[t]
                if a[t][j]:
                    done = False
            if done:
                # divisibility against the rest of the block
                bad = [(i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p]
                if not bad:
                    break
                i, _ = bad[0]
                a[t] = [x + y for x, y in zip(a[t], a[i])]
                continue
            nz = [(abs(a[i][t]), i, t) for i in range(t, m) if a[i][t]] + \
                 [(abs(a[t][j]), t, j) for j in range(t, n) if a[t][j]]
            _, i, j = min(nz)
            a[t], a[i] = a[i], a[t]
            for r in a:
                r[t], r[j] = r[j], r[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def rank_q(rows):
    """Rank over Q by Fraction Gaussian elimination."""
    a = [[Fraction(x) for x in r] for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return r


def rank_mod(rows, p):
    a = [[x % p for x in r] for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], p - 2, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
    return r


def det(rows):
    """Exact determinant by Fraction elimination."""
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            d = -d
        d *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return d


def matmul(a, b):
    return [[sum(x * y for x, y in zip(r, c)) for c in zip(*b)] for r in a]


def transpose(a, ncols=None):
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(c) for c in zip(*a)]


def rips_simplices(points, dist, scale, max_dim):
    """All increasing tuples of pairwise distance <= scale, brute force."""
    from itertools import combinations

    pts = sorted(points)
    out = []
    for k in range(max_dim + 1):
        lst = [s for s in combinations(pts, k + 1)
               if all(dist(a, b) <= scale for a, b in combinations(s, 2))]
        out.append(lst)
    return out


def boundary_dense(simplices, k):
    """Dense matrix of d_k from lists of simplices."""
    rows = {s: i for i, s in enumerate(simplices[k - 1])}
    mat = [[0] * len(simplices[k]) for _ in simplices[k - 1]]
    for j, s in enumerate(simplices[k]):
        for a in range(len(s)):
            mat[rows[s[:a] + s[a + 1:]]][j] += (-1) ** a
    return mat


def betti_q(simplices, k):
    """Rank of H_k over Q from dense boundary ranks."""
    n = len(simplices[k])
    rk = rank_q(boundary_dense(simplices, k)) if k >= 1 and simplices[k - 1] and n else 0
    rk1 = rank_q(boundary_dense(simplices, k + 1)) if k + 1 < len(simplices) and simplices[k + 1] else 0
    return n - rk - rk1


def gcd_list(xs):
    g = 0
    for x in xs:
        g = gcd(g, x)
    return g


def random_direct_complex(rng, torsion_prime=None):
    """Random chain complex with d d = 0, built as d_k = P_(k-1) D_k Q_k with unimodular factors."""
    dims = [rng.randint(1, 5) for _ in range(rng.randint(2, 4))]
    # choose ranks r_k of d_k with r_k + r_(k+1) <= dims[k]
    ranks = [0] * len(dims)
    for k in range(1, len(dims)):
        room = min(dims[k - 1] - ranks[k - 1], dims[k])
        ranks[k] = rng.randint(0, room)
    bases = [unimodular(rng, n) for n in dims]
    inv = [invert_unimodular(b) for b in bases]
    bds = {}
    for k in range(1, len(dims)):
        # in adapted bases: d_k maps the first r_k basis vectors of C_k onto scaled
        # vectors r_(k-1) .. r_(k-1)+r_k-1 of C_(k-1)
        D = [[0] * dims[k] for _ in range(dims[k - 1])]
        for t in range(ranks[k]):
            f = rng.choice([1, 1, 2, 3, 4, 5, 6]) if torsion_prime is None else rng.choice([1, torsion_prime])
            D[ranks[k - 1] + t][t] = f
        M = matmul(matmul(bases[k - 1], D), inv[k])
        bds[str(k)] = [[r, c, v] for r, row in enumerate(M) for c, v in enumerate(row) if v]
    return dims, bds


def unimodular(rng, n):
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i != j:
            c = rng.randint(-2, 2)
            m = [[m[r][s] + (c * m[j][s] if r == i else 0) for s in range(n)] for r in range(n)]
    return m


def invert_unimodular(m):
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next(i for i in range(c, n) if a[i][c] != 0)
        a[c], a[p] = a[p], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [[int(x) for x in row[n:]] for row in a]
