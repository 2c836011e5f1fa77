"""Pure-Python kernel lane.

Operates on packed matrices over the coefficient rings that admit a flat
integer encoding: Z/p^m, F_{p^a} and W(F_{p^a})/p^m.  An entry is `a`
coefficients (ascending powers of the ring generator), each in [0, q) with
q = p^mprec; a packed matrix is the row-major flat list of its entries'
coefficients.  `fred` holds the `a` non-leading coefficients of the monic
reduction polynomial, so x^a = -(fred[0] + fred[1]x + ...).

The compiled lane (_cylane) implements the same API; this module is both
the fallback and the reference the compiled lane is tested against.
"""
from __future__ import annotations

LANE = "python"
MAX_Q = None  # arbitrary-precision ints: no modulus ceiling


# ---------------------------------------------------------------------------
# packed-element arithmetic


def pe_add(u, v, a, q):
    return tuple((u[i] + v[i]) % q for i in range(a))


def pe_sub(u, v, a, q):
    return tuple((u[i] - v[i]) % q for i in range(a))


def pe_neg(u, a, q):
    return tuple((-u[i]) % q for i in range(a))


def pe_mul(u, v, a, fred, q):
    if a == 1:
        return ((u[0] * v[0]) % q,)
    t = [0] * (2 * a - 1)
    for i in range(a):
        ui = u[i]
        if ui:
            for j in range(a):
                t[i + j] = (t[i + j] + ui * v[j]) % q
    for k in range(2 * a - 2, a - 1, -1):
        c = t[k]
        if c:
            base = k - a
            for i in range(a):
                t[base + i] = (t[base + i] - c * fred[i]) % q
    return tuple(t[:a])


def pe_is_zero(u):
    return not any(u)


def _vp(c, p, cap):
    if c == 0:
        return cap
    v = 0
    while c % p == 0 and v < cap:
        c //= p
        v += 1
    return v


def pe_val(u, p, cap):
    """min p-adic valuation over coefficients; cap means the entry is 0."""
    best = cap
    for c in u:
        if c:
            v = _vp(c, p, cap)
            if v < best:
                best = v
                if best == 0:
                    return 0
    return best


def pe_shift_down(u, v, p):
    """Exact division by p^v; valid only when pe_val(u) >= v."""
    d = p ** v
    return tuple(c // d for c in u)


def pe_inv_unit(u, a, fred, q, p, mprec):
    """Inverse of a unit (residue mod p nonzero)."""
    if a == 1:
        return (pow(u[0], -1, q),)
    # residue-field inverse by exponentiation, then Hensel lift to mod q
    fredp = tuple(c % p for c in fred)
    up = tuple(c % p for c in u)
    y = _pe_pow(up, p ** a - 2, a, fredp, p)
    if mprec == 1:
        return y
    two = (2,) + (0,) * (a - 1)
    k = 1
    while k < mprec:
        y = pe_mul(y, pe_sub(two, pe_mul(u, y, a, fred, q), a, q), a, fred, q)
        k *= 2
    return y


def _pe_pow(u, e, a, fred, q):
    res = (1,) + (0,) * (a - 1)
    base = u
    while e:
        if e & 1:
            res = pe_mul(res, base, a, fred, q)
        base = pe_mul(base, base, a, fred, q)
        e >>= 1
    return res


# ---------------------------------------------------------------------------
# packed-matrix helpers


def _regroup(flat, n_entries, a):
    return [tuple(flat[k * a : (k + 1) * a]) for k in range(n_entries)]


def _flatten(entries):
    out = []
    for e in entries:
        out.extend(e)
    return out


def mat_mul(A, B, n, k, m, a, fred, q):
    """(n x k) @ (k x m), both flat; returns flat n x m."""
    EA = _regroup(A, n * k, a)
    EB = _regroup(B, k * m, a)
    zero = (0,) * a
    out = []
    for i in range(n):
        row = EA[i * k : (i + 1) * k]
        for j in range(m):
            acc = zero
            for l in range(k):
                u = row[l]
                if any(u):
                    acc = pe_add(acc, pe_mul(u, EB[l * m + j], a, fred, q), a, q)
            out.append(acc)
    return _flatten(out)


def berkowitz(A, n, a, fred, q):
    """Coefficients c_0..c_n (ascending, flat) of det(T*I - A), c_n = 1.

    Division-free; the Samuelson-Berkowitz recurrence multiplies the
    charpoly of each trailing principal submatrix by a Toeplitz matrix
    whose column is built from -(R . B^j . C).
    """
    M = _regroup(A, n * n, a)
    zero = (0,) * a
    one = (1,) + (0,) * (a - 1)
    vec = [one, pe_neg(M[(n - 1) * n + (n - 1)], a, q)]
    for k0 in range(n - 2, -1, -1):
        s = n - k0
        t = [one, pe_neg(M[k0 * n + k0], a, q)]
        w = [M[i * n + k0] for i in range(k0 + 1, n)]
        for j in range(s - 1):
            dot = zero
            for idx in range(s - 1):
                u = M[k0 * n + (k0 + 1 + idx)]
                if any(u) and any(w[idx]):
                    dot = pe_add(dot, pe_mul(u, w[idx], a, fred, q), a, q)
            t.append(pe_neg(dot, a, q))
            if j < s - 2:
                nw = []
                for i in range(s - 1):
                    acc = zero
                    for l in range(s - 1):
                        u = M[(k0 + 1 + i) * n + (k0 + 1 + l)]
                        if any(u) and any(w[l]):
                            acc = pe_add(acc, pe_mul(u, w[l], a, fred, q), a, q)
                    nw.append(acc)
                w = nw
        newvec = [zero] * (s + 1)
        for j2 in range(s):
            vj = vec[j2]
            if not any(vj):
                continue
            top = min(j2 + s + 1, s + 1)
            for i2 in range(j2, top):
                ti = t[i2 - j2]
                if any(ti):
                    newvec[i2] = pe_add(newvec[i2], pe_mul(ti, vj, a, fred, q), a, q)
        vec = newvec
    vec.reverse()  # descending -> ascending
    return _flatten(vec)


def _det_cofactor(M, n_stride, rows, cols, a, fred, q):
    if len(rows) == 1:
        return M[rows[0] * n_stride + cols[0]]
    zero = (0,) * a
    acc = zero
    c0 = cols[0]
    rest = cols[1:]
    for idx, r in enumerate(rows):
        e = M[r * n_stride + c0]
        if not any(e):
            continue
        sub = rows[:idx] + rows[idx + 1 :]
        term = pe_mul(e, _det_cofactor(M, n_stride, sub, rest, a, fred, q), a, fred, q)
        acc = pe_add(acc, term, a, q) if idx % 2 == 0 else pe_sub(acc, term, a, q)
    return acc


def _det_bareiss_field(M, rows, cols, n_stride, a, fred, p):
    # fraction-free elimination; all divisions are exact over a field
    n = len(rows)
    W = [[M[r * n_stride + c] for c in cols] for r in rows]
    one = (1,) + (0,) * (a - 1)
    sign = 1
    prev = one
    for k in range(n - 1):
        if not any(W[k][k]):
            piv = next((i for i in range(k + 1, n) if any(W[i][k])), None)
            if piv is None:
                return (0,) * a
            W[k], W[piv] = W[piv], W[k]
            sign = -sign
        inv_prev = pe_inv_unit(prev, a, fred, p, p, 1)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = pe_sub(
                    pe_mul(W[i][j], W[k][k], a, fred, p),
                    pe_mul(W[i][k], W[k][j], a, fred, p),
                    a,
                    p,
                )
                W[i][j] = pe_mul(num, inv_prev, a, fred, p)
        prev = W[k][k]
    d = W[n - 1][n - 1]
    return d if sign == 1 else pe_neg(d, a, p)


def _det_sub(M, n_stride, rows, cols, a, fred, q, p, mprec):
    d = len(rows)
    if d <= 4:
        return _det_cofactor(M, n_stride, rows, cols, a, fred, q)
    if mprec == 1:
        return _det_bareiss_field(M, rows, cols, n_stride, a, fred, q)
    sub = []
    for r in rows:
        for c in cols:
            sub.extend(M[r * n_stride + c])
    coeffs = berkowitz(sub, d, a, fred, q)
    c0 = tuple(coeffs[:a])
    return c0 if d % 2 == 0 else pe_neg(c0, a, q)


def det(A, n, a, fred, q, p, mprec):
    M = _regroup(A, n * n, a)
    idx = tuple(range(n))
    return list(_det_sub(M, n, idx, idx, a, fred, q, p, mprec))


def compound(A, n, d, subsets, a, fred, q, p, mprec):
    """All d-minors of a flat n x n matrix, in the given subset order.

    `subsets` is the frozen lexicographic list of d-subsets of range(n),
    used for both rows and columns; entry (S, T) is det(A[S, T]) with no
    extra sign.
    """
    M = _regroup(A, n * n, a)
    out = []
    for S in subsets:
        for T in subsets:
            out.append(_det_sub(M, n, S, T, a, fred, q, p, mprec))
    return _flatten(out)


def smith_vals(A, nr, nc, a, fred, q, p, mprec):
    """Diagonal valuations of a two-sided reduction to diag(p^v1, ...).

    Pivots on a minimum-valuation entry; elimination multipliers are exact
    because every remaining entry has valuation >= the pivot's.  Returns
    min(nr, nc) values, non-decreasing, with mprec standing for a zero
    diagonal entry.  Row/column operations are unimodular, so the
    determinantal ideals (hence statuses, rank, cokernel shape) of the
    input are those of the diagonal.
    """
    M = [[tuple(A[(i * nc + j) * a : (i * nc + j) * a + a]) for j in range(nc)] for i in range(nr)]
    size = min(nr, nc)
    vals = []
    for step in range(size):
        bv, bi, bj = mprec, -1, -1
        for i in range(step, nr):
            for j in range(step, nc):
                e = M[i][j]
                if any(e):
                    v = pe_val(e, p, mprec)
                    if v < bv:
                        bv, bi, bj = v, i, j
                        if v == 0:
                            break
            if bv == 0:
                break
        if bi < 0:
            vals.extend([mprec] * (size - step))
            break
        if bi != step:
            M[bi], M[step] = M[step], M[bi]
        if bj != step:
            for row in M:
                row[bj], row[step] = row[step], row[bj]
        piv = M[step][step]
        omega = pe_shift_down(piv, bv, p)
        om_inv = pe_inv_unit(omega, a, fred, q, p, mprec)
        prow = M[step]
        for i in range(step + 1, nr):
            x = M[i][step]
            if any(x):
                lam = pe_mul(pe_shift_down(x, bv, p), om_inv, a, fred, q)
                row = M[i]
                for j in range(step, nc):
                    if any(prow[j]):
                        row[j] = pe_sub(row[j], pe_mul(lam, prow[j], a, fred, q), a, q)
        # the implied column operations only touch the pivot row now
        zero = (0,) * a
        for j in range(step + 1, nc):
            prow[j] = zero
        vals.append(bv)
    vals.sort()
    return vals
