"""Dieudonne modules and isocrystals over F_q at finite Witt precision.

A Dieudonne module is a free rank-h module over W(F_q)/p^m with integral
matrices MF, MV acting semilinearly: F(v) = MF.phi(v), V(v) = MV.phi^{-1}(v),
subject to MF.phi(MV) = p = MV.phi^{-1}(MF).  An isocrystal carries only a
Frobenius, stored as an integral matrix together with an integer p-shift e,
meaning F = p^{-e} (M o phi); entries are never divided by p, the shift is
bookkeeping.

Slope convention: mu_{p-infinity} has F = phi (slope 0), Q_p/Z_p has
F = p.phi (slope 1), and dim = h - v_p(det MF).  The convention is pinned by
two machine checks living in the wedge layer: the multilinear compatibility
of the shifted wedge Frobenius and the recovery of the slope-0 unit-root
object at r = h.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BadDescriptor,
    DimensionMismatch,
    PrecisionExhausted,
    RingMismatch,
    SchemaError,
)
from .matrices import (
    Matrix,
    block_diag,
    charpoly,
    det,
    invert_unimodular,
    matrix_from_json,
    matrix_to_json,
)
from .modsolve import _lead, _vp, howell_form, kernel_basis
from .rings import BOTTOM, WittRing, make_witt_ring


# ---------------------------------------------------------------------------
# descriptors


@dataclass(frozen=True)
class GroupDescriptor:
    """Height/dimension of a p-divisible group, with optional standard name."""

    h: int
    dim: int
    name: str | None = None

    def __post_init__(self):
        if self.h < 1 or not 0 <= self.dim <= self.h:
            raise BadDescriptor(f"need h >= 1 and 0 <= dim <= h, got ({self.h}, {self.dim})")
        if self.name is not None:
            expected = {"mu": (1, 1), "QpZp": (1, 0)}
            if self.name in expected:
                if (self.h, self.dim) != expected[self.name]:
                    raise BadDescriptor(f"{self.name} must have (h, dim) = {expected[self.name]}")
            elif re.fullmatch(r"LT_\d+", self.name):
                if self.dim != 1 or self.h != int(self.name[3:]):
                    raise BadDescriptor(f"{self.name} must have (h, dim) = ({self.name[3:]}, 1)")
            else:
                raise BadDescriptor(f"unknown descriptor name {self.name!r}")


def descriptor(name_or_h, dim: int | None = None) -> GroupDescriptor:
    """descriptor('mu'), descriptor('LT_3'), or descriptor(h, dim)."""
    if isinstance(name_or_h, str):
        name = name_or_h
        if name == "mu":
            return GroupDescriptor(1, 1, "mu")
        if name == "QpZp":
            return GroupDescriptor(1, 0, "QpZp")
        m = re.fullmatch(r"LT_(\d+)", name)
        if m:
            return GroupDescriptor(int(m.group(1)), 1, name)
        raise BadDescriptor(f"unknown descriptor name {name!r}")
    if dim is None:
        raise BadDescriptor("descriptor(h, dim) needs both numbers")
    return GroupDescriptor(name_or_h, dim)


# ---------------------------------------------------------------------------
# the objects


@dataclass(frozen=True)
class DieudonneModule:
    ring: WittRing
    h: int
    MF: Matrix
    MV: Matrix

    def __post_init__(self):
        if self.MF.rows != self.h or not self.MF.is_square or self.MV.rows != self.h:
            raise DimensionMismatch("MF, MV must be h x h")

    def to_isocrystal(self) -> "Isocrystal":
        """Forget V: the isocrystal with the same Frobenius and shift 0."""
        return Isocrystal(self.ring, self.h, self.MF, 0, self.ring.m)


@dataclass(frozen=True)
class Isocrystal:
    ring: WittRing
    rank: int
    matrix: Matrix  # integral; the Frobenius is p^{-shift} . matrix o phi
    shift: int
    eff_precision: int

    def __post_init__(self):
        if self.matrix.rows != self.rank or not self.matrix.is_square:
            raise DimensionMismatch("matrix must be rank x rank")


def _as_crystal(X) -> Isocrystal:
    return X.to_isocrystal() if isinstance(X, DieudonneModule) else X


# ---------------------------------------------------------------------------
# standard modules


def _standard_block(ring: WittRing, t: int, s: int) -> tuple[Matrix, Matrix]:
    """Cyclic block of slope s/t: F e_i = p^{eps_i} e_{i+1 mod t} with the
    s powers of p on the last s steps, and V = p F^{-1}, both integral."""
    p = ring.from_int(ring.p)
    one = ring.one
    MF = [[ring.zero] * t for _ in range(t)]
    MV = [[ring.zero] * t for _ in range(t)]
    for i in range(t):
        eps = 1 if i >= t - s else 0
        MF[(i + 1) % t][i] = p if eps else one
        MV[i][(i + 1) % t] = one if eps else p
    return Matrix.from_rows(ring, MF), Matrix.from_rows(ring, MV)


def make_standard(desc: GroupDescriptor, ring: WittRing) -> DieudonneModule:
    """The standard module of a descriptor: the isoclinic decomposition of
    slope (h-dim)/h into gcd-many cyclic blocks, so v_p(det MF) = h - dim."""
    if not isinstance(desc, GroupDescriptor):
        raise BadDescriptor(f"expected a GroupDescriptor, got {type(desc).__name__}")
    h, dim = desc.h, desc.dim
    g = math.gcd(h - dim, h)
    t, s = h // g, (h - dim) // g
    bf, bv = _standard_block(ring, t, s)
    MF = block_diag(*([bf] * g))
    MV = block_diag(*([bv] * g))
    return DieudonneModule(ring, h, MF, MV)


# ---------------------------------------------------------------------------
# semilinear application and axioms


def matrix_phi(M: Matrix, k: int = 1) -> Matrix:
    """Entrywise Frobenius power of a matrix over a Witt ring."""
    R = M.ring
    return M.map_entries(lambda x: R.frobenius_pow(x, k))


def vector_phi(ring: WittRing, v, k: int = 1):
    return tuple(ring.frobenius_pow(x, k) for x in v)


def apply_F(X, v):
    """F(v).  On an isocrystal with shift e the integral image is divided
    by p^e exactly; PrecisionExhausted if some coordinate is not divisible."""
    C = _as_crystal(X)
    R = C.ring
    w = C.matrix.mul_vector(vector_phi(R, v))
    e = C.shift
    if e == 0:
        return w
    if e < 0:
        pe = R.from_int(R.p ** (-e))
        return tuple(R.mul(pe, x) for x in w)
    out = []
    for x in w:
        val = R.pivot_val(x)
        if val < e and not R.is_zero(x):
            raise PrecisionExhausted(
                f"division by p^{e} leaves the working lattice (coordinate valuation {val})"
            )
        out.append(R.shift_down(x, min(e, R.m)) if not R.is_zero(x) else x)
    return tuple(out)


def apply_F_integral(X, v):
    """(matrix o phi)(v) together with the shift: F(v) = p^{-shift} times it."""
    C = _as_crystal(X)
    return C.matrix.mul_vector(vector_phi(C.ring, v)), C.shift


def apply_V(D: DieudonneModule, v):
    return D.MV.mul_vector(vector_phi(D.ring, v, D.ring.a - 1 if D.ring.a > 1 else 0))


@dataclass(frozen=True)
class AxiomReport:
    ok: bool
    failures: tuple

    def __bool__(self) -> bool:
        return self.ok


def verify_axioms(D: DieudonneModule) -> AxiomReport:
    """FV = p = VF, checked exactly at working precision."""
    R = D.ring
    pI = Matrix.identity(R, D.h).scale(R.from_int(R.p))
    failures = []
    if D.MF @ matrix_phi(D.MV) != pI:
        failures.append("MF . phi(MV) != p I")
    if D.MV @ matrix_phi(D.MF, R.a - 1 if R.a > 1 else 0) != pI:
        failures.append("MV . phi^{-1}(MF) != p I")
    return AxiomReport(not failures, tuple(failures))


def semilinear_conjugate(D: DieudonneModule, U: Matrix) -> DieudonneModule:
    """Base change by a unimodular U: MF -> U MF phi(U)^{-1}."""
    R = D.ring
    k_inv = R.a - 1 if R.a > 1 else 0
    MF = U @ D.MF @ invert_unimodular(matrix_phi(U))
    MV = U @ D.MV @ invert_unimodular(matrix_phi(U, k_inv))
    return DieudonneModule(R, D.h, MF, MV)


def conjugate_isocrystal(C: Isocrystal, U: Matrix) -> Isocrystal:
    M = U @ C.matrix @ invert_unimodular(matrix_phi(U))
    return Isocrystal(C.ring, C.rank, M, C.shift, C.eff_precision)


# ---------------------------------------------------------------------------
# height, dimension, direct sums


def height(D: DieudonneModule) -> int:
    return D.h


def dimension(D: DieudonneModule) -> int:
    """h - v_p(det MF) under the fixed slope convention."""
    v = D.ring.valuation(det(D.MF))
    if v is BOTTOM:
        raise PrecisionExhausted(
            "v_p(det MF) is below working precision", required_m=D.ring.m + 1
        )
    return D.h - v


def direct_sum(D1: DieudonneModule, D2: DieudonneModule) -> DieudonneModule:
    if D1.ring != D2.ring:
        raise RingMismatch("summands over different rings")
    return DieudonneModule(
        D1.ring, D1.h + D2.h, block_diag(D1.MF, D2.MF), block_diag(D1.MV, D2.MV)
    )


# ---------------------------------------------------------------------------
# Newton polygons and slopes


@dataclass(frozen=True)
class NewtonPolygon:
    """Slope multiset as (slope, multiplicity) pairs, ascending in slope."""

    segments: tuple

    @classmethod
    def from_multiset(cls, slopes) -> "NewtonPolygon":
        agg: dict = {}
        for s in slopes:
            s = Fraction(s)
            agg[s] = agg.get(s, 0) + 1
        return cls(tuple(sorted(agg.items())))

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.segments)

    @property
    def weighted_sum(self) -> Fraction:
        return sum((s * m for s, m in self.segments), Fraction(0))

    def expanded(self) -> list:
        out = []
        for s, m in self.segments:
            out.extend([s] * m)
        return out

    def merge(self, other: "NewtonPolygon") -> "NewtonPolygon":
        return NewtonPolygon.from_multiset(self.expanded() + other.expanded())

    def to_json(self) -> list:
        return [{"slope": format_fraction(s), "mult": m} for s, m in self.segments]


def format_fraction(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_fraction(s: str) -> Fraction:
    return Fraction(s)


def _lower_hull(points):
    """Lower convex hull of exact (int, int) points sorted by x."""
    hull = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (pt[1] - y1) - (y2 - y1) * (pt[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def twisted_power_matrix(C: Isocrystal) -> Matrix:
    """L = M . phi(M) ... phi^{a-1}(M): the matrix of the a-th power of the
    semilinear M o phi, which is an honest linear map since phi^a = 1."""
    R = C.ring
    L = C.matrix
    for k in range(1, R.a):
        L = L @ matrix_phi(C.matrix, k)
    return L


def slopes(X) -> NewtonPolygon:
    """Newton slopes, as exact rationals with multiplicities.

    Computed from the characteristic polynomial of the a-fold twisted power:
    polygon slopes of det(T I - L), divided by a, shifted by -e.  Raises
    PrecisionExhausted when det L vanishes at working precision (then the
    polygon's left vertex is unknowable).
    """
    C = _as_crystal(X)
    R = C.ring
    n, a, eff = C.rank, R.a, C.eff_precision
    if eff <= n * a:
        raise PrecisionExhausted(
            f"slopes need eff_precision > rank*a = {n * a}", required_m=n * a + 1
        )
    L = twisted_power_matrix(C)
    coeffs = charpoly(L)
    vals = []
    for c in coeffs:
        v = R.valuation(c)
        vals.append(BOTTOM if (v is BOTTOM or v >= eff) else v)
    if vals[0] is BOTTOM:
        raise PrecisionExhausted(
            "det of the twisted power vanishes at working precision",
            required_m=eff + 1,
        )
    points = [(i, v) for i, v in enumerate(vals) if v is not BOTTOM]
    # all true polygon vertices have valuation <= vals[0] < eff, so points
    # reported BOTTOM (true valuation >= eff) lie strictly above the hull
    hull = _lower_hull(points)
    out = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        root_val = Fraction(y1 - y2, x2 - x1)
        iso_slope = root_val / a - C.shift
        out.extend([iso_slope] * (x2 - x1))
    return NewtonPolygon.from_multiset(out)


# ---------------------------------------------------------------------------
# eigenspaces: F = p^c at finite precision


@dataclass(frozen=True)
class EigenBasis:
    """Howell-canonical basis of {x : F(x) = p^c x} over Z/p^precision.

    `vectors` are coordinate tuples over the Witt ring (entries reduced mod
    p^precision); `pivot_valuations` the p-valuations of the Howell pivots,
    so `rank` counts all generators and `free_rank` the unit-pivot ones.
    """

    vectors: tuple
    precision: int
    pivot_valuations: tuple

    @property
    def rank(self) -> int:
        return len(self.vectors)

    @property
    def free_rank(self) -> int:
        return sum(1 for v in self.pivot_valuations if v == 0)


def frobenius_linearization(C: Isocrystal, exponent: int, precision: int):
    """Integer matrix of x -> M.phi(x) - p^exponent x on (Z/p^precision)^(a h),
    in the basis e_k (x-gen)^j ordered by (k, j)."""
    R = C.ring
    a, h = R.a, C.rank
    q = R.p**precision
    N = a * h
    phi_cols = R.frobenius_matrix()
    cols = []
    for k in range(h):
        for j in range(a):
            w = phi_cols[j]  # phi((x-gen)^j) as a Witt element
            col = [0] * N
            for i in range(h):
                entry = R.mul(C.matrix[i, k], w)
                for jj in range(a):
                    col[i * a + jj] = entry[jj] % q
            cols.append(col)
    pe = R.p**exponent if exponent < precision else 0
    rows = [[cols[j][i] % q for j in range(N)] for i in range(N)]
    if pe:
        for i in range(N):
            rows[i][i] = (rows[i][i] - pe) % q
    return rows


def eigenspace(X, c: int) -> EigenBasis:
    """Basis of {x : F(x) = p^c x} as a Z/p^{m'}-module, m' = eff - c - shift.

    The integral system (M o phi - p^{c+e}) x = 0 is solved at the crystal's
    effective precision; the kernel is then reduced to precision m' (which
    kills the torsion that only existed because p^{c+e} annihilates it) and
    re-canonicalized in Howell form.
    """
    if c < 0:
        raise ValueError("c must be >= 0")
    C = _as_crystal(X)
    R = C.ring
    exponent = c + C.shift
    m_eff = C.eff_precision
    m_out = m_eff - exponent
    if m_out < 1:
        raise PrecisionExhausted(
            f"eigenspace needs eff_precision > c + shift = {exponent}",
            required_m=exponent + 1,
        )
    rows = frobenius_linearization(C, exponent, m_eff)
    gens = kernel_basis(rows, R.p, m_eff)
    q_out = R.p**m_out
    reduced = [[x % q_out for x in g] for g in gens]
    basis = howell_form(reduced, R.a * C.rank, R.p, m_out)
    vectors = []
    pivots = []
    for row in basis:
        vec = tuple(tuple(row[k * R.a : (k + 1) * R.a]) for k in range(C.rank))
        vectors.append(vec)
        lead = _lead(row)
        pivots.append(_vp(row[lead], R.p, m_out))
    return EigenBasis(tuple(vectors), m_out, tuple(pivots))


# ---------------------------------------------------------------------------
# wire formats


def isocrystal_to_json(C: Isocrystal) -> dict:
    R = C.ring
    return {
        "schema": "v1",
        "p": R.p,
        "a": R.a,
        "m": R.m,
        "rank": C.rank,
        "shift": C.shift,
        "matrix": matrix_to_json(C.matrix),
    }


def isocrystal_from_json(obj) -> Isocrystal:
    if not isinstance(obj, dict):
        raise SchemaError("isocrystal payload must be an object")
    if obj.get("schema") != "v1":
        raise SchemaError("missing or unsupported schema version (want 'v1')")
    for field in ("p", "a", "m", "rank", "shift", "matrix"):
        if field not in obj:
            raise SchemaError(f"isocrystal payload missing '{field}'")
    M = matrix_from_json(obj["matrix"])
    ring = make_witt_ring(int(obj["p"]), int(obj["a"]), int(obj["m"]))
    if M.ring != ring:
        raise SchemaError("matrix ring does not match the isocrystal's p, a, m")
    if M.rows != obj["rank"]:
        raise SchemaError("matrix size does not match 'rank'")
    return Isocrystal(ring, int(obj["rank"]), M, int(obj["shift"]), ring.m)


def polygon_to_json(np: NewtonPolygon) -> dict:
    return {"schema": "v1", "segments": np.to_json()}
