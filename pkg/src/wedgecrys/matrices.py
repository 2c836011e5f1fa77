"""Dense matrices over the exact coefficient rings.

Compound matrices, determinantal ideals and the unit-ideal/zero-ideal rank
notion, Fitting-style cokernel ranks, and the split wedge exact sequence.

Two computation routes coexist deliberately:

* a generic route using only the ring protocol (works over every ring,
  including Q and the local test rings), and
* a packed route through the kernel lanes for Z/p^m, F_q and Witt rings.

`minor_ideal_status` enumerates minors directly and is kept as the
independent oracle for the valuation-pivot route used by `rank`.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from . import _kernel
from .errors import (
    ArityMismatch,
    DimensionMismatch,
    RankPrecondition,
    RingMismatch,
    SchemaError,
    UnsupportedHom,
    UnsupportedRing,
    WedgecrysError,
)
from .rings import RingHom, ring_from_descriptor


@lru_cache(maxsize=None)
def index_subsets(n: int, r: int) -> tuple:
    """All r-subsets of range(n) in lexicographic order.

    This order is a frozen public contract: compound-matrix blocks, wedge
    coordinates and the Lambda_r maps all index through it.
    """
    return tuple(itertools.combinations(range(n), r))


class IdealStatus(enum.Enum):
    UNIT = "UNIT"
    ZERO = "ZERO"
    PROPER_NONZERO = "PROPER_NONZERO"
    UNDECIDABLE = "UNDECIDABLE"


class Matrix:
    """Immutable dense matrix over a ring handle; entries row-major."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring, rows: int, cols: int, entries):
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise DimensionMismatch(
                f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}"
            )
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, *_):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def from_rows(cls, ring, rows):
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if rows else 0
        if any(len(r) != m for r in rows):
            raise DimensionMismatch("ragged rows")
        return cls(ring, n, m, [x for r in rows for x in r])

    @classmethod
    def identity(cls, ring, n: int):
        z, o = ring.zero, ring.one
        return cls(ring, n, n, [o if i == j else z for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, ring, rows: int, cols: int):
        return cls(ring, rows, cols, [ring.zero] * (rows * cols))

    @classmethod
    def from_int_rows(cls, ring, rows):
        return cls.from_rows(ring, [[ring.from_int(x) for x in r] for r in rows])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int):
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int):
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self):
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self):
        return Matrix(
            self.ring,
            self.cols,
            self.rows,
            [self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)],
        )

    def map_entries(self, fn, ring=None):
        return Matrix(ring or self.ring, self.rows, self.cols, [fn(x) for x in self.entries])

    def scale(self, c):
        R = self.ring
        return self.map_entries(lambda x: R.mul(c, x))

    def __add__(self, other):
        self._check_same_shape(other)
        R = self.ring
        return Matrix(
            R, self.rows, self.cols, [R.add(x, y) for x, y in zip(self.entries, other.entries)]
        )

    def __sub__(self, other):
        self._check_same_shape(other)
        R = self.ring
        return Matrix(
            R, self.rows, self.cols, [R.sub(x, y) for x, y in zip(self.entries, other.entries)]
        )

    def _check_same_shape(self, other):
        if self.ring != other.ring:
            raise RingMismatch("matrices over different rings")
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch")

    def __matmul__(self, other):
        if self.ring != other.ring:
            raise RingMismatch("matrices over different rings")
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        pk = _packed_params(self.ring)
        if pk is not None:
            impl, q, a, fred, p, mprec = pk
            flat = impl.mat_mul(
                _pack(self), _pack(other), self.rows, self.cols, other.cols, a, fred, q
            )
            return _unpack(self.ring, flat, self.rows, other.cols, a)
        R = self.ring
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                acc = R.zero
                for k in range(self.cols):
                    x = ri[k]
                    if not R.is_zero(x):
                        acc = R.add(acc, R.mul(x, other.entries[k * other.cols + j]))
                out.append(acc)
        return Matrix(R, self.rows, other.cols, out)

    def mul_vector(self, vec):
        if len(vec) != self.cols:
            raise DimensionMismatch("vector length mismatch")
        R = self.ring
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            acc = R.zero
            for k in range(self.cols):
                if not R.is_zero(ri[k]):
                    acc = R.add(acc, R.mul(ri[k], vec[k]))
            out.append(acc)
        return tuple(out)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.ring == other.ring
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.ring, self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(
            " ".join(self.ring.el_to_str(x) for x in self.row(i)) for i in range(self.rows)
        )
        return f"Matrix({self.ring!r}, [{body}])"


def block_diag(*matrices) -> Matrix:
    ring = matrices[0].ring
    if any(M.ring != ring for M in matrices):
        raise RingMismatch("blocks over different rings")
    n = sum(M.rows for M in matrices)
    c = sum(M.cols for M in matrices)
    out = [[ring.zero] * c for _ in range(n)]
    i0 = j0 = 0
    for M in matrices:
        for i in range(M.rows):
            for j in range(M.cols):
                out[i0 + i][j0 + j] = M[i, j]
        i0 += M.rows
        j0 += M.cols
    return Matrix.from_rows(ring, out)


# ---------------------------------------------------------------------------
# kernel packing


def _packed_params(ring):
    pack = getattr(ring, "pack_params", None)
    pk = pack() if pack else None
    if pk is None:
        return None
    q, a, fred = pk
    return _kernel.impl_for(q), q, a, fred, ring.p, ring.m


def _pack(M: Matrix):
    out = []
    pe = M.ring.pack_el
    for e in M.entries:
        out.extend(pe(e))
    return out


def _unpack(ring, flat, rows, cols, a) -> Matrix:
    ue = ring.unpack_el
    ents = [ue(tuple(flat[k * a : (k + 1) * a])) for k in range(rows * cols)]
    return Matrix(ring, rows, cols, ents)


# ---------------------------------------------------------------------------
# determinants and characteristic polynomials (generic route)


def _gen_det_cofactor(A: Matrix, rows, cols):
    R = A.ring
    if len(rows) == 1:
        return A[rows[0], cols[0]]
    acc = R.zero
    c0, rest = cols[0], cols[1:]
    for idx, r in enumerate(rows):
        e = A[r, c0]
        if R.is_zero(e):
            continue
        term = R.mul(e, _gen_det_cofactor(A, rows[:idx] + rows[idx + 1 :], rest))
        acc = R.add(acc, term) if idx % 2 == 0 else R.sub(acc, term)
    return acc


def _gen_det_bareiss(A: Matrix, rows, cols):
    # fraction-free: divisions by the previous pivot are exact over a field
    R = A.ring
    n = len(rows)
    W = [[A[r, c] for c in cols] for r in rows]
    sign = 1
    prev = R.one
    for k in range(n - 1):
        if R.is_zero(W[k][k]):
            piv = next((i for i in range(k + 1, n) if not R.is_zero(W[i][k])), None)
            if piv is None:
                return R.zero
            W[k], W[piv] = W[piv], W[k]
            sign = -sign
        ip = R.inv(prev)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = R.sub(R.mul(W[i][j], W[k][k]), R.mul(W[i][k], W[k][j]))
                W[i][j] = R.mul(num, ip)
        prev = W[k][k]
    d = W[n - 1][n - 1]
    return d if sign == 1 else R.neg(d)


def _gen_berkowitz(A: Matrix, rows, cols):
    """Ascending charpoly coefficients of the (rows x cols) submatrix."""
    R = A.ring
    n = len(rows)
    M = [[A[r, c] for c in cols] for r in rows]
    vec = [R.one, R.neg(M[n - 1][n - 1])]
    for k0 in range(n - 2, -1, -1):
        s = n - k0
        t = [R.one, R.neg(M[k0][k0])]
        w = [M[i][k0] for i in range(k0 + 1, n)]
        for j in range(s - 1):
            dot = R.zero
            for idx in range(s - 1):
                u = M[k0][k0 + 1 + idx]
                if not (R.is_zero(u) or R.is_zero(w[idx])):
                    dot = R.add(dot, R.mul(u, w[idx]))
            t.append(R.neg(dot))
            if j < s - 2:
                nw = []
                for i in range(s - 1):
                    acc = R.zero
                    for l in range(s - 1):
                        u = M[k0 + 1 + i][k0 + 1 + l]
                        if not (R.is_zero(u) or R.is_zero(w[l])):
                            acc = R.add(acc, R.mul(u, w[l]))
                    nw.append(acc)
                w = nw
        newvec = [R.zero] * (s + 1)
        for j2 in range(s):
            vj = vec[j2]
            if R.is_zero(vj):
                continue
            for i2 in range(j2, s + 1):
                ti = t[i2 - j2]
                if not R.is_zero(ti):
                    newvec[i2] = R.add(newvec[i2], R.mul(ti, vj))
        vec = newvec
    vec.reverse()
    return vec


def _gen_det_sub(A: Matrix, rows, cols):
    d = len(rows)
    if d == 0:
        return A.ring.one
    if d <= 4:
        return _gen_det_cofactor(A, rows, cols)
    if getattr(A.ring, "is_field", False):
        return _gen_det_bareiss(A, rows, cols)
    coeffs = _gen_berkowitz(A, rows, cols)
    c0 = coeffs[0]
    return c0 if d % 2 == 0 else A.ring.neg(c0)


def det(A: Matrix):
    """Determinant: cofactor for n <= 4, Bareiss over fields, Berkowitz
    (division-free) over rings with zero divisors."""
    if not A.is_square:
        raise DimensionMismatch("determinant of a non-square matrix")
    if A.rows == 0:
        return A.ring.one
    pk = _packed_params(A.ring)
    if pk is not None:
        impl, q, a, fred, p, mprec = pk
        return A.ring.unpack_el(tuple(impl.det(_pack(A), A.rows, a, fred, q, p, mprec)))
    idx = tuple(range(A.rows))
    return _gen_det_sub(A, idx, idx)


def charpoly(A: Matrix) -> list:
    """Coefficients c_0..c_n (ascending) of det(T*I - A), c_n = 1."""
    if not A.is_square:
        raise DimensionMismatch("charpoly of a non-square matrix")
    pk = _packed_params(A.ring)
    if pk is not None:
        impl, q, a, fred, p, mprec = pk
        flat = impl.berkowitz(_pack(A), A.rows, a, fred, q)
        return [A.ring.unpack_el(tuple(flat[k * a : (k + 1) * a])) for k in range(A.rows + 1)]
    idx = tuple(range(A.rows))
    return _gen_berkowitz(A, idx, idx)


# ---------------------------------------------------------------------------
# compound matrices


def compound(A: Matrix, d: int) -> Matrix:
    """The C(n,d) x C(n,d) matrix of d-minors of a square A.

    Entry at (row-subset S, column-subset T), both running through the
    frozen lexicographic order, is det(A[S, T]) with no extra sign.
    """
    if not A.is_square:
        raise DimensionMismatch("compound of a non-square matrix")
    n = A.rows
    if not 1 <= d <= n:
        raise DimensionMismatch(f"compound order d={d} outside 1..{n}")
    subsets = index_subsets(n, d)
    pk = _packed_params(A.ring)
    if pk is not None:
        impl, q, a, fred, p, mprec = pk
        flat = impl.compound(_pack(A), n, d, subsets, a, fred, q, p, mprec)
        return _unpack(A.ring, flat, len(subsets), len(subsets), a)
    ents = [_gen_det_sub(A, S, T) for S in subsets for T in subsets]
    return Matrix(A.ring, len(subsets), len(subsets), ents)


def stack_minors(A: Matrix, r: int):
    """All r-minors of an h x r column stack, over lex row-subsets.

    These are the coordinates of the wedge of the columns in the basis of
    lexicographic r-subsets (the same order compound uses for its rows).
    """
    if A.cols != r:
        raise DimensionMismatch("stack must have exactly r columns")
    cols = tuple(range(r))
    return tuple(_gen_det_sub(A, S, cols) for S in index_subsets(A.rows, r))


# ---------------------------------------------------------------------------
# determinantal ideals, rank, cokernels


def smith_valuations(A: Matrix) -> list:
    """Valuations of a two-sided unimodular reduction to diag(pi^v_i).

    Available on local rings carrying the pivot protocol; the list has
    min(rows, cols) entries, sorted ascending, with ring.val_cap meaning a
    zero diagonal entry.
    """
    ring = A.ring
    if not hasattr(ring, "pivot_val"):
        raise UnsupportedRing(f"{ring!r} has no valuation-pivot structure")
    pk = _packed_params(ring)
    if pk is not None:
        impl, q, a, fred, p, mprec = pk
        return impl.smith_vals(_pack(A), A.rows, A.cols, a, fred, q, p, mprec)
    cap = ring.val_cap
    M = A.to_rows()
    nr, nc = A.rows, A.cols
    size = min(nr, nc)
    vals = []
    for step in range(size):
        bv, bi, bj = cap, -1, -1
        for i in range(step, nr):
            for j in range(step, nc):
                v = ring.pivot_val(M[i][j])
                if v < bv:
                    bv, bi, bj = v, i, j
                    if v == 0:
                        break
            if bv == 0:
                break
        if bi < 0:
            vals.extend([cap] * (size - step))
            break
        if bi != step:
            M[bi], M[step] = M[step], M[bi]
        if bj != step:
            for row in M:
                row[bj], row[step] = row[step], row[bj]
        om_inv = ring.inv(ring.shift_down(M[step][step], bv))
        prow = M[step]
        for i in range(step + 1, nr):
            x = M[i][step]
            if not ring.is_zero(x):
                lam = ring.mul(ring.shift_down(x, bv), om_inv)
                row = M[i]
                for j in range(step, nc):
                    if not ring.is_zero(prow[j]):
                        row[j] = ring.sub(row[j], ring.mul(lam, prow[j]))
        for j in range(step + 1, nc):
            prow[j] = ring.zero
        vals.append(bv)
    vals.sort()
    return vals


def _statuses_from_valuations(vals, cap: int, n: int):
    witness = [IdealStatus.UNIT]
    for i in range(1, n + 1):
        sigma = sum(vals[:i])
        if sigma >= cap:
            witness.append(IdealStatus.ZERO)
        elif sigma == 0:
            witness.append(IdealStatus.UNIT)
        else:
            witness.append(IdealStatus.PROPER_NONZERO)
    witness.append(IdealStatus.ZERO)
    return tuple(witness)


def minor_ideal_status(A: Matrix, i: int) -> IdealStatus:
    """Status of the ideal of i-minors, by direct minor enumeration.

    The independent oracle for the valuation-pivot route: it never touches
    `smith_valuations`.  UNIT is decided as "some minor is a unit", which
    is valid precisely over local rings; elsewhere only ZERO is decidable.
    """
    ring = A.ring
    if i == 0:
        return IdealStatus.UNIT
    if i > min(A.rows, A.cols):
        return IdealStatus.ZERO
    all_zero = True
    for S in index_subsets(A.rows, i):
        for T in index_subsets(A.cols, i):
            m = _gen_det_sub(A, S, T)
            if ring.is_zero(m):
                continue
            all_zero = False
            if getattr(ring, "is_local", False) and ring.is_unit(m):
                return IdealStatus.UNIT
    if all_zero:
        return IdealStatus.ZERO
    if getattr(ring, "is_local", False):
        return IdealStatus.PROPER_NONZERO
    return IdealStatus.UNDECIDABLE


def determinantal_witness(A: Matrix):
    """Statuses of U_0 .. U_{n+1} for a square matrix."""
    if not A.is_square:
        raise DimensionMismatch("rank theory is defined for square matrices here")
    n = A.rows
    ring = A.ring
    if hasattr(ring, "pivot_val") and getattr(ring, "is_local", False):
        vals = smith_valuations(A)
        return _statuses_from_valuations(vals, ring.val_cap, n)
    return tuple(minor_ideal_status(A, i) for i in range(n + 2))


def determinantal_status(A: Matrix, i: int) -> IdealStatus:
    """Status of the i-th determinantal ideal U_i(A)."""
    if i < 0:
        raise ValueError("i must be >= 0")
    if i == 0:
        return IdealStatus.UNIT
    if i > min(A.rows, A.cols):
        return IdealStatus.ZERO
    if hasattr(A.ring, "pivot_val") and getattr(A.ring, "is_local", False):
        return determinantal_witness(A)[i]
    return minor_ideal_status(A, i)


@dataclass(frozen=True)
class RankResult:
    rank: int | None
    witness: tuple

    @property
    def is_defined(self) -> bool:
        return self.rank is not None

    @property
    def undecidable(self) -> bool:
        return IdealStatus.UNDECIDABLE in self.witness


def rank(A: Matrix) -> RankResult:
    """Rank r iff U_r is the unit ideal and U_{r+1} = 0; None otherwise."""
    witness = determinantal_witness(A)
    r = None
    for i in range(len(witness) - 1):
        if witness[i] is IdealStatus.UNIT and witness[i + 1] is IdealStatus.ZERO:
            r = i
            break
    return RankResult(r, witness)


def cokernel_invariants(A: Matrix) -> list:
    """Valuations v_i with coker(A) = (+) R/(pi^v_i); val_cap marks a free
    R summand."""
    return smith_valuations(A)


@dataclass(frozen=True)
class CokernelRankCheck:
    cokernel_side: bool
    rank_side: bool

    @property
    def agree(self) -> bool:
        return self.cokernel_side == self.rank_side

    def __bool__(self) -> bool:
        return self.cokernel_side and self.rank_side


def cokernel_rank_check(A: Matrix, expected: int) -> CokernelRankCheck:
    """coker(A) free of rank n-expected, and rank(A) = expected.

    The two sides are computed separately; their agreement on every input
    is the content of the Fitting-ideal lemma.
    """
    if not A.is_square:
        raise DimensionMismatch("square matrices only")
    n = A.rows
    cap = A.ring.val_cap
    vals = cokernel_invariants(A)
    free_ok = all(v in (0, cap) for v in vals) and sum(1 for v in vals if v == cap) == n - expected
    rank_ok = rank(A).rank == expected
    return CokernelRankCheck(free_ok, rank_ok)


@dataclass(frozen=True)
class WedgeExactSequence:
    compound_map: Matrix
    cokernel_rank: int


def wedge_exact_sequence(A: Matrix, d: int) -> WedgeExactSequence:
    """For rank(A) = n-1: the compound map wedge^d A, whose cokernel is
    free of rank C(n-1, d-1)."""
    n = A.rows
    if not 1 <= d <= n - 1:
        raise DimensionMismatch(f"d={d} outside 1..{n - 1}")
    rk = rank(A)
    if rk.rank != n - 1:
        raise RankPrecondition(f"rank is {rk.rank}, need {n - 1}")
    C = compound(A, d)
    cap = A.ring.val_cap
    vals = cokernel_invariants(C)
    if any(v not in (0, cap) for v in vals):
        raise WedgecrysError("compound cokernel is not free; split exact sequence violated")
    free_rank = sum(1 for v in vals if v == cap)
    want = _binom(n - 1, d - 1)
    if free_rank != want:
        raise WedgecrysError(
            f"compound cokernel rank {free_rank} != C({n - 1},{d - 1}) = {want}"
        )
    return WedgeExactSequence(C, free_rank)


@dataclass(frozen=True)
class RankLemmaCheck:
    lhs: bool  # rank(A) = n-1
    rhs: bool  # rank(compound(A,d)) = C(n-1, d)

    @property
    def agree(self) -> bool:
        return self.lhs == self.rhs


def rank_lemma_check(A: Matrix, d: int) -> RankLemmaCheck:
    n = A.rows
    if not 1 <= d <= n - 1:
        raise DimensionMismatch(f"d={d} outside 1..{n - 1}")
    lhs = rank(A).rank == n - 1
    rhs = rank(compound(A, d)).rank == _binom(n - 1, d)
    return RankLemmaCheck(lhs, rhs)


def _binom(n: int, k: int) -> int:
    return math.comb(n, k)


# ---------------------------------------------------------------------------
# Lambda_r and base change


def lambda_r_tuple(items, rho, r: int):
    """Values of an r-ary map on all increasing r-subsets of the items,
    in the frozen lexicographic order."""
    h = len(items)
    if not 1 <= r <= h:
        raise ArityMismatch(f"need 1 <= r <= h, got r={r}, h={h}")
    return [rho(*(items[i] for i in c)) for c in index_subsets(h, r)]


def base_change_matrix(A: Matrix, hom: RingHom) -> Matrix:
    """Entrywise image under a supported ring homomorphism."""
    if not isinstance(hom, RingHom):
        raise UnsupportedHom("expected a RingHom")
    if hom.source != A.ring:
        raise UnsupportedHom(f"hom source {hom.source!r} does not match {A.ring!r}")
    return A.map_entries(hom, ring=hom.target)


def invert_unimodular(A: Matrix) -> Matrix:
    """Inverse of a matrix whose determinant is a unit (local rings/fields)."""
    if not A.is_square:
        raise DimensionMismatch("square matrices only")
    R = A.ring
    n = A.rows
    W = [list(A.row(i)) + [R.one if j == i else R.zero for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((i for i in range(col, n) if R.is_unit(W[i][col])), None)
        if piv is None:
            raise ValueError("matrix is not unimodular")
        W[col], W[piv] = W[piv], W[col]
        ip = R.inv(W[col][col])
        W[col] = [R.mul(ip, x) for x in W[col]]
        for i in range(n):
            if i != col and not R.is_zero(W[i][col]):
                lam = W[i][col]
                W[i] = [R.sub(x, R.mul(lam, y)) for x, y in zip(W[i], W[col])]
    return Matrix.from_rows(R, [row[n:] for row in W])


# ---------------------------------------------------------------------------
# wire format


def matrix_to_json(A: Matrix) -> dict:
    return {
        "schema": "v1",
        "ring": A.ring.descriptor(),
        "rows": A.rows,
        "cols": A.cols,
        "entries": [A.ring.el_to_str(x) for x in A.entries],
    }


def matrix_from_json(obj) -> Matrix:
    if not isinstance(obj, dict):
        raise SchemaError("matrix payload must be an object")
    if obj.get("schema") != "v1":
        raise SchemaError("missing or unsupported schema version (want 'v1')")
    for field in ("ring", "rows", "cols", "entries"):
        if field not in obj:
            raise SchemaError(f"matrix payload missing '{field}'")
    ring = ring_from_descriptor(obj["ring"])
    rows, cols = obj["rows"], obj["cols"]
    if not (isinstance(rows, int) and isinstance(cols, int) and rows >= 0 and cols >= 0):
        raise SchemaError("rows/cols must be non-negative integers")
    raw = obj["entries"]
    if not isinstance(raw, list) or len(raw) != rows * cols:
        raise SchemaError(f"expected {rows * cols} entries, got {len(raw) if isinstance(raw, list) else 'non-list'}")
    ents = []
    for k, s in enumerate(raw):
        try:
            ents.append(ring.el_from_str(s))
        except Exception as exc:
            raise SchemaError(f"malformed entry at index {k}: {s!r} ({exc})") from exc
    return Matrix(ring, rows, cols, ents)
