"""Canonical linear algebra over Z/p^m on plain integer rows.

Howell form is the canonical row-reduced shape over Z/p^m: echelon with
pivots p^v, entries above a pivot reduced mod p^v, and the row span closed
under multiplication by annihilators.  Two row sets span the same submodule
of (Z/p^m)^n iff they have the same Howell form, which is what makes the
eigenspace bases below reproducible byte-for-byte.
"""
from __future__ import annotations


def _vp(x: int, p: int, m: int) -> int:
    if x == 0:
        return m
    v = 0
    while x % p == 0 and v < m:
        x //= p
        v += 1
    return v


def _lead(row) -> int:
    for i, x in enumerate(row):
        if x:
            return i
    return len(row)


def howell_form(rows, ncols: int, p: int, m: int):
    """Howell form of the span of the given rows over Z/p^m."""
    q = p**m
    pool = [[x % q for x in r] for r in rows]
    pool = [r for r in pool if any(r)]
    res = []
    for c in range(ncols):
        active = [r for r in pool if _lead(r) == c]
        pool = [r for r in pool if _lead(r) > c]
        if not active:
            continue
        while len(active) > 1:
            active.sort(key=lambda r: _vp(r[c], p, m))
            r0 = active[0]
            v0 = _vp(r0[c], p, m)
            w_inv = pow(r0[c] // p**v0, -1, q)
            survivors = [r0]
            for r in active[1:]:
                lam = (r[c] // p**v0) * w_inv % q
                rr = [(x - lam * y) % q for x, y in zip(r, r0)]
                if any(rr):
                    pool.append(rr)  # leading column strictly increased
            active = survivors
        r0 = active[0]
        v0 = _vp(r0[c], p, m)
        w_inv = pow(r0[c] // p**v0, -1, q)
        r0 = [x * w_inv % q for x in r0]  # pivot becomes exactly p^v0
        res.append(r0)
        if v0 > 0:
            ann = [x * p ** (m - v0) % q for x in r0]
            if any(ann):
                pool.append(ann)
    # reduce entries above each pivot, left to right; later pivot rows have
    # zeros in all earlier pivot columns, so reduced entries stay reduced
    for k in range(len(res)):
        c = _lead(res[k])
        pv = p ** _vp(res[k][c], p, m)
        for j in range(k):
            lam = res[j][c] // pv
            if lam:
                res[j] = [(x - lam * y) % q for x, y in zip(res[j], res[k])]
    return res


def kernel_basis(rows, p: int, m: int):
    """Howell-form basis of {x : A x = 0} over Z/p^m for square A.

    Two-sided valuation-pivot reduction U A V = diag(p^v); kernel
    generators are V e_i scaled by the annihilator of p^v_i.
    """
    q = p**m
    n = len(rows)
    M = [[x % q for x in r] for r in rows]
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    vals = [m] * n
    for step in range(n):
        bv, bi, bj = m, -1, -1
        for i in range(step, n):
            for j in range(step, n):
                if M[i][j]:
                    v = _vp(M[i][j], p, m)
                    if v < bv:
                        bv, bi, bj = v, i, j
                        if v == 0:
                            break
            if bv == 0:
                break
        if bi < 0:
            break
        if bi != step:
            M[bi], M[step] = M[step], M[bi]
        if bj != step:
            for row in M:
                row[bj], row[step] = row[step], row[bj]
            for row in V:
                row[bj], row[step] = row[step], row[bj]
        piv = M[step][step]
        om_inv = pow(piv // p**bv, -1, q)
        prow = M[step]
        for i in range(step + 1, n):
            x = M[i][step]
            if x:
                lam = (x // p**bv) * om_inv % q
                row = M[i]
                for j in range(step, n):
                    if prow[j]:
                        row[j] = (row[j] - lam * prow[j]) % q
        for j in range(step + 1, n):
            x = prow[j]
            if x:
                mu = (x // p**bv) * om_inv % q
                prow[j] = 0
                for row in V:
                    if row[step]:
                        row[j] = (row[j] - mu * row[step]) % q
        vals[step] = bv
    gens = []
    for i, v in enumerate(vals):
        if v == 0:
            continue
        t = p ** (m - v) if v < m else 1
        g = [t * V[r][i] % q for r in range(n)]
        if any(g):
            gens.append(g)
    return howell_form(gens, n, p, m)
