"""Coefficient rings: Z/p^m, F_q, truncated unramified Witt rings, local
test rings, and Q.

All rings here share one informal protocol used by the matrix layer:

    zero, one, from_int, add, sub, neg, mul, is_zero, is_unit, inv,
    random_element(rng), el_to_str / el_from_str, descriptor(),
    is_field, is_local

Local rings additionally expose the pivot protocol driving the
valuation-pivot eliminations (`val_cap`, `pivot_val`, `shift_down`), and
the packable rings (Z/p^m, F_q, Witt) expose `pack_params` /
`pack_el` / `unpack_el` for the kernel lanes.

Elements are plain data: ints for Z/p^m, tuples of ints (ascending
coefficients) for F_q and Witt rings, Fractions for Q.  Everything is
immutable and safe to share across threads.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from ._kernel.pylane import (
    _pe_pow,
    pe_add,
    pe_inv_unit,
    pe_mul,
    pe_neg,
    pe_shift_down,
    pe_sub,
    pe_val,
)
from .errors import NonPrime, SchemaError, UnsupportedHom


class _BottomType:
    """Valuation >= precision: indistinguishable from 0 at this precision."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "BOTTOM"


BOTTOM = _BottomType()


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# Conway polynomials (non-leading coefficients, ascending), hard-coded for
# reproducible cross-run constants; derived once from the defining search
# and frozen here.  Outside this table the lexicographically smallest monic
# irreducible (ordered by descending-coefficient tuples) is used.
CONWAY = {
    (2, 1): (1,),
    (2, 2): (1, 1),
    (2, 3): (1, 1, 0),
    (2, 4): (1, 1, 0, 0),
    (3, 1): (1,),
    (3, 2): (2, 2),
    (3, 3): (1, 2, 0),
    (3, 4): (2, 0, 0, 2),
    (5, 1): (3,),
    (5, 2): (2, 4),
    (5, 3): (3, 3, 0),
    (5, 4): (2, 4, 4, 0),
    (7, 1): (4,),
    (7, 2): (3, 6),
    (7, 3): (4, 0, 6),
    (7, 4): (3, 4, 5, 0),
}


def _prime_factors(n: int):
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


def _poly_is_irreducible(fred: tuple, a: int, p: int) -> bool:
    if a == 1:
        return True
    x = (0, 1) + (0,) * (a - 2)
    xq = _pe_pow(x, p**a, a, fred, p)
    if xq != x:
        return False
    for l in _prime_factors(a):
        if _pe_pow(x, p ** (a // l), a, fred, p) == x:
            return False
    return True


@lru_cache(maxsize=None)
def defining_polynomial(p: int, a: int) -> tuple:
    """Non-leading coefficients of the degree-a defining polynomial over F_p."""
    if (p, a) in CONWAY:
        return CONWAY[(p, a)]
    for desc in itertools.product(range(p), repeat=a):
        fred = tuple(reversed(desc))
        if _poly_is_irreducible(fred, a, p):
            return fred
    raise AssertionError("irreducible search is exhaustive; unreachable")


# ---------------------------------------------------------------------------


class ModulusRing:
    """Z/p^m with exact arithmetic; elements are ints in [0, p^m)."""

    kind = "Zpm"
    is_local = True

    def __init__(self, p: int, m: int):
        if p == 2 or not _is_prime(p):
            raise NonPrime(f"p must be an odd prime, got {p}")
        if m < 1:
            raise ValueError("precision m must be >= 1")
        self.p = p
        self.m = m
        self.q = p**m
        self.zero = 0
        self.one = 1
        self.is_field = m == 1
        self.val_cap = m

    def __repr__(self):
        return f"Z/{self.p}^{self.m}"

    def __eq__(self, other):
        return type(other) is ModulusRing and (self.p, self.m) == (other.p, other.m)

    def __hash__(self):
        return hash(("Zpm", self.p, self.m))

    def from_int(self, k: int) -> int:
        return k % self.q

    def add(self, x, y):
        return (x + y) % self.q

    def sub(self, x, y):
        return (x - y) % self.q

    def neg(self, x):
        return (-x) % self.q

    def mul(self, x, y):
        return (x * y) % self.q

    def is_zero(self, x):
        return x == 0

    def is_unit(self, x):
        return x % self.p != 0

    def inv(self, x):
        return pow(x, -1, self.q)

    def valuation(self, x):
        if x == 0:
            return BOTTOM
        v = 0
        while x % self.p == 0:
            x //= self.p
            v += 1
        return v

    def pivot_val(self, x) -> int:
        v = self.valuation(x)
        return self.m if v is BOTTOM else v

    def shift_down(self, x, v: int):
        return x // self.p**v

    def random_element(self, rng):
        return rng.randrange(self.q)

    def el_to_str(self, x) -> str:
        return str(x)

    def el_from_str(self, s: str):
        return int(s, 10) % self.q

    def descriptor(self):
        return {"kind": "Zpm", "p": self.p, "m": self.m}

    def pack_params(self):
        return (self.q, 1, (0,))

    def pack_el(self, x):
        return (x,)

    def unpack_el(self, coords):
        return coords[0]


class FiniteField:
    """F_{p^a} = F_p[x]/(f), f the table polynomial; elements are coefficient
    tuples of length a (ascending powers)."""

    kind = "Fq"
    is_local = True
    is_field = True
    val_cap = 1

    def __init__(self, p: int, a: int):
        if not _is_prime(p):
            raise NonPrime(f"p must be prime, got {p}")
        if a < 1:
            raise ValueError("extension degree must be >= 1")
        self.p = p
        self.a = a
        self.q = p**a
        self.fred = defining_polynomial(p, a)
        self.zero = (0,) * a
        self.one = (1,) + (0,) * (a - 1)
        self.m = 1

    def __repr__(self):
        return f"F_{self.q}" if self.a > 1 else f"F_{self.p}"

    def __eq__(self, other):
        return type(other) is FiniteField and (self.p, self.a) == (other.p, other.a)

    def __hash__(self):
        return hash(("Fq", self.p, self.a))

    def from_int(self, k: int):
        return (k % self.p,) + (0,) * (self.a - 1)

    def gen(self):
        if self.a == 1:
            raise ValueError("prime field has no extension generator")
        return (0, 1) + (0,) * (self.a - 2)

    def add(self, x, y):
        return pe_add(x, y, self.a, self.p)

    def sub(self, x, y):
        return pe_sub(x, y, self.a, self.p)

    def neg(self, x):
        return pe_neg(x, self.a, self.p)

    def mul(self, x, y):
        return pe_mul(x, y, self.a, self.fred, self.p)

    def pow(self, x, e: int):
        return _pe_pow(x, e, self.a, self.fred, self.p)

    def is_zero(self, x):
        return not any(x)

    def is_unit(self, x):
        return any(x)

    def inv(self, x):
        if not any(x):
            raise ZeroDivisionError("inverse of 0")
        return pe_inv_unit(x, self.a, self.fred, self.p, self.p, 1)

    def frobenius(self, x):
        return self.pow(x, self.p)

    def valuation(self, x):
        return BOTTOM if not any(x) else 0

    def pivot_val(self, x) -> int:
        return 0 if any(x) else 1

    def shift_down(self, x, v: int):
        return x

    def elements(self):
        for coords in itertools.product(range(self.p), repeat=self.a):
            yield coords

    def random_element(self, rng):
        return tuple(rng.randrange(self.p) for _ in range(self.a))

    def el_to_str(self, x) -> str:
        return ",".join(str(c) for c in x)

    def el_from_str(self, s: str):
        coords = tuple(int(c, 10) % self.p for c in s.split(","))
        if len(coords) != self.a:
            raise ValueError(f"expected {self.a} coefficients, got {len(coords)}")
        return coords

    def descriptor(self):
        return {"kind": "Fq", "p": self.p, "a": self.a}

    def pack_params(self):
        return (self.p, self.a, self.fred)

    def pack_el(self, x):
        return x

    def unpack_el(self, coords):
        return coords


class WittRing:
    """W(F_{p^a})/p^m as (Z/p^m)[x]/(f_hat), f_hat the integer lift of the
    defining polynomial of F_{p^a}.

    The lifted Frobenius fixes f_hat's distinguished root: phi(xbar) is the
    Hensel lift of xbar^p, computed once at construction, so phi is a ring
    endomorphism with phi^a = id and phi = (p-power map) mod p.
    """

    kind = "witt"
    is_local = True

    def __init__(self, p: int, a: int, m: int):
        if p == 2 or not _is_prime(p):
            raise NonPrime(f"p must be an odd prime, got {p}")
        if a < 1 or m < 1:
            raise ValueError("need a >= 1 and m >= 1")
        self.p = p
        self.a = a
        self.m = m
        self.q = p**m
        self.fred = defining_polynomial(p, a)  # coefficients already in [0, p)
        self.zero = (0,) * a
        self.one = (1,) + (0,) * (a - 1)
        self.is_field = m == 1
        self.val_cap = m
        self.residue_field = FiniteField(p, a)
        self.frobenius_root = self._hensel_frobenius_root()
        # all Frobenius powers cached up front: the ring stays immutable
        self._phi_mats = {}
        if a > 1:
            root = self.frobenius_root
            first = self._phi_matrix(root)
            for k in range(1, a):
                self._phi_mats[k] = self._phi_matrix(root)
                root = self._apply_mat(first, root)

    # -- construction helpers ------------------------------------------------

    def _eval_fhat(self, t):
        # f_hat(t) and f_hat'(t), by Horner
        a, q, fred = self.a, self.q, self.fred
        val = self.one
        dval = self.zero
        # f = x^a + fred[a-1]x^{a-1} + ... + fred[0]; walk coefficients from the top
        coeffs = [self.from_int(c) for c in fred]
        for k in range(a - 1, -1, -1):
            dval = pe_add(pe_mul(dval, t, a, fred, q), val, a, q)
            val = pe_add(pe_mul(val, t, a, fred, q), coeffs[k], a, q)
        return val, dval

    def _hensel_frobenius_root(self):
        if self.a == 1:
            return self.one  # phi = identity on Z/p^m
        r = _pe_pow(self.gen(), self.p, self.a, self.fred, self.q)
        prec = 1
        while prec < self.m:
            fr, dfr = self._eval_fhat(r)
            r = pe_sub(r, self.mul(fr, self.inv(dfr)), self.a, self.q)
            prec *= 2
        fr, _ = self._eval_fhat(r)
        if any(fr):
            raise AssertionError("Hensel lift of the Frobenius root failed to converge")
        return r

    def _phi_matrix(self, root):
        # columns are the coordinates of root^j; phi is Z/p^m-linear
        a, q = self.a, self.q
        cols = []
        acc = self.one
        for _ in range(a):
            cols.append(acc)
            acc = pe_mul(acc, root, a, self.fred, q)
        return tuple(cols)

    # -- ring protocol ---------------------------------------------------

    def __repr__(self):
        return f"W(F_{self.p**self.a})/{self.p}^{self.m}"

    def __eq__(self, other):
        return type(other) is WittRing and (self.p, self.a, self.m) == (
            other.p,
            other.a,
            other.m,
        )

    def __hash__(self):
        return hash(("witt", self.p, self.a, self.m))

    def gen(self):
        if self.a == 1:
            raise ValueError("rank-1 Witt ring has no extension generator")
        return (0, 1) + (0,) * (self.a - 2)

    def from_int(self, k: int):
        return (k % self.q,) + (0,) * (self.a - 1)

    def from_coeffs(self, coeffs):
        coeffs = tuple(c % self.q for c in coeffs)
        if len(coeffs) != self.a:
            raise ValueError("coefficient count mismatch")
        return coeffs

    def add(self, x, y):
        return pe_add(x, y, self.a, self.q)

    def sub(self, x, y):
        return pe_sub(x, y, self.a, self.q)

    def neg(self, x):
        return pe_neg(x, self.a, self.q)

    def mul(self, x, y):
        return pe_mul(x, y, self.a, self.fred, self.q)

    def pow(self, x, e: int):
        return _pe_pow(x, e, self.a, self.fred, self.q)

    def is_zero(self, x):
        return not any(x)

    def is_unit(self, x):
        return any(c % self.p for c in x)

    def inv(self, x):
        if not self.is_unit(x):
            raise ZeroDivisionError("not a unit")
        return pe_inv_unit(x, self.a, self.fred, self.q, self.p, self.m)

    def valuation(self, x):
        v = pe_val(x, self.p, self.m)
        return BOTTOM if v >= self.m else v

    def pivot_val(self, x) -> int:
        return pe_val(x, self.p, self.m)

    def shift_down(self, x, v: int):
        return pe_shift_down(x, v, self.p)

    # -- semilinear structure ---------------------------------------------

    def _apply_mat(self, cols, x):
        acc = self.zero
        for j in range(self.a):
            cj = x[j]
            if cj:
                col = cols[j]
                acc = tuple((acc[i] + cj * col[i]) % self.q for i in range(self.a))
        return acc

    def frobenius(self, x):
        if self.a == 1:
            return x
        return self._apply_mat(self._phi_mats[1], x)

    def frobenius_pow(self, x, k: int):
        if self.a == 1:
            return x
        k %= self.a
        if k == 0:
            return x
        return self._apply_mat(self._phi_mats[k], x)

    def frobenius_inv(self, x):
        return self.frobenius_pow(x, self.a - 1)

    def frobenius_matrix(self):
        """Columns of phi as a Z/p^m-linear map on coefficient vectors."""
        if self.a == 1:
            return ((1,),)
        return self._phi_mats[1]

    def reduce_mod_p(self, x):
        return tuple(c % self.p for c in x)

    def from_residue(self, u):
        return tuple(c % self.q for c in u)

    def teichmuller(self, u):
        """The (q-1)-st root of unity (or 0) lifting the residue element u."""
        w = self.from_residue(u)
        qf = self.p**self.a
        for _ in range(self.m + 2):
            nxt = self.pow(w, qf)
            if nxt == w:
                return w
            w = nxt
        raise AssertionError("Teichmueller iteration did not stabilize")

    def random_element(self, rng):
        return tuple(rng.randrange(self.q) for _ in range(self.a))

    def el_to_str(self, x) -> str:
        return ",".join(str(c) for c in x)

    def el_from_str(self, s: str):
        coords = tuple(int(c, 10) % self.q for c in s.split(","))
        if len(coords) != self.a:
            raise ValueError(f"expected {self.a} coefficients, got {len(coords)}")
        return coords

    def descriptor(self):
        return {"kind": "witt", "p": self.p, "a": self.a, "m": self.m}

    def pack_params(self):
        return (self.q, self.a, tuple(c % self.q for c in self.fred))

    def pack_el(self, x):
        return x

    def unpack_el(self, coords):
        return coords


class RationalField:
    """Q with Fraction elements; the 'generic fibre' test ring."""

    kind = "Q"
    is_local = True  # a field: the unit-ideal decision is trivial
    is_field = True
    val_cap = 1

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def __repr__(self):
        return "Q"

    def __eq__(self, other):
        return type(other) is RationalField

    def __hash__(self):
        return hash("Q")

    def from_int(self, k: int):
        return Fraction(k)

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def neg(self, x):
        return -x

    def mul(self, x, y):
        return x * y

    def is_zero(self, x):
        return x == 0

    def is_unit(self, x):
        return x != 0

    def inv(self, x):
        return 1 / x

    def pivot_val(self, x) -> int:
        return 0 if x != 0 else 1

    def shift_down(self, x, v: int):
        return x

    def random_element(self, rng):
        return Fraction(rng.randint(-9, 9), rng.randint(1, 9))

    def el_to_str(self, x) -> str:
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def el_from_str(self, s: str):
        return Fraction(s)

    def descriptor(self):
        return {"kind": "Q"}

    def pack_params(self):
        return None


class TruncatedPolynomialRing:
    """F_q[t]/(t^e): the polynomial-flavoured local test ring.

    An element is a length-e tuple of F_q elements (coefficients of t^i);
    it is a unit iff its residue (the t^0 coefficient) is nonzero, which is
    the defining decision procedure of the local test rings.
    """

    kind = "tpoly"
    is_local = True

    def __init__(self, base: FiniteField, e: int):
        if e < 1:
            raise ValueError("nilpotency order must be >= 1")
        self.base = base
        self.e = e
        self.zero = (base.zero,) * e
        self.one = (base.one,) + (base.zero,) * (e - 1)
        self.is_field = e == 1
        self.val_cap = e

    def __repr__(self):
        return f"{self.base!r}[t]/(t^{self.e})"

    def __eq__(self, other):
        return (
            type(other) is TruncatedPolynomialRing
            and self.base == other.base
            and self.e == other.e
        )

    def __hash__(self):
        return hash(("tpoly", self.base, self.e))

    def from_int(self, k: int):
        return (self.base.from_int(k),) + (self.base.zero,) * (self.e - 1)

    def t_gen(self):
        if self.e == 1:
            raise ValueError("t is 0 at nilpotency order 1")
        return (self.base.zero, self.base.one) + (self.base.zero,) * (self.e - 2)

    def add(self, x, y):
        return tuple(self.base.add(x[i], y[i]) for i in range(self.e))

    def sub(self, x, y):
        return tuple(self.base.sub(x[i], y[i]) for i in range(self.e))

    def neg(self, x):
        return tuple(self.base.neg(c) for c in x)

    def mul(self, x, y):
        F = self.base
        out = [F.zero] * self.e
        for i in range(self.e):
            if F.is_zero(x[i]):
                continue
            for j in range(self.e - i):
                out[i + j] = F.add(out[i + j], F.mul(x[i], y[j]))
        return tuple(out)

    def is_zero(self, x):
        return all(self.base.is_zero(c) for c in x)

    def is_unit(self, x):
        return not self.base.is_zero(x[0])

    def inv(self, x):
        if not self.is_unit(x):
            raise ZeroDivisionError("not a unit")
        y = (self.base.inv(x[0]),) + (self.base.zero,) * (self.e - 1)
        two = self.from_int(2)
        k = 1
        while k < self.e:
            y = self.mul(y, self.sub(two, self.mul(x, y)))
            k *= 2
        return y

    def pivot_val(self, x) -> int:
        for i, c in enumerate(x):
            if not self.base.is_zero(c):
                return i
        return self.e

    def shift_down(self, x, v: int):
        return x[v:] + (self.base.zero,) * v

    def in_maximal_ideal(self, x) -> bool:
        return self.base.is_zero(x[0])

    def elements(self):
        for coords in itertools.product(self.base.elements(), repeat=self.e):
            yield coords

    def random_element(self, rng):
        return tuple(self.base.random_element(rng) for _ in range(self.e))

    def el_to_str(self, x) -> str:
        return ";".join(self.base.el_to_str(c) for c in x)

    def el_from_str(self, s: str):
        coords = tuple(self.base.el_from_str(c) for c in s.split(";"))
        if len(coords) != self.e:
            raise ValueError(f"expected {self.e} t-coefficients, got {len(coords)}")
        return coords

    def descriptor(self):
        return {"kind": "tpoly", "p": self.base.p, "a": self.base.a, "e": self.e}

    def pack_params(self):
        return None


# ---------------------------------------------------------------------------
# cached constructors and the module-level operations


@lru_cache(maxsize=None)
def modulus_ring(p: int, m: int) -> ModulusRing:
    return ModulusRing(p, m)


@lru_cache(maxsize=None)
def finite_field(p: int, a: int = 1) -> FiniteField:
    return FiniteField(p, a)


@lru_cache(maxsize=None)
def make_witt_ring(p: int, a: int, m: int) -> WittRing:
    """Truncated unramified Witt ring W(F_{p^a})/p^m with cached Frobenius."""
    return WittRing(p, a, m)


@lru_cache(maxsize=None)
def local_test_ring(p: int, a: int, e: int) -> TruncatedPolynomialRing:
    return TruncatedPolynomialRing(finite_field(p, a), e)


QQ = RationalField()


def frobenius(R, x):
    """The canonical Frobenius of R applied to x."""
    return R.frobenius(x)


def teichmuller(R: WittRing, u):
    """Teichmueller lift of a residue-field element into the Witt ring."""
    return R.teichmuller(u)


def valuation(R, x):
    """Largest v with x in p^v R, or BOTTOM when x = 0 at this precision."""
    return R.valuation(x)


# ---------------------------------------------------------------------------
# supported ring homomorphisms (the base-change vocabulary)


class RingHom:
    def __init__(self, source, target, fn, name: str):
        self.source = source
        self.target = target
        self._fn = fn
        self.name = name

    def __call__(self, x):
        return self._fn(x)

    def __repr__(self):
        return f"{self.name}: {self.source!r} -> {self.target!r}"


def precision_reduction(R, new_m: int) -> RingHom:
    """Z/p^m -> Z/p^j or W(F_q)/p^m -> W(F_q)/p^j for j <= m."""
    if isinstance(R, ModulusRing):
        if not 1 <= new_m <= R.m:
            raise UnsupportedHom("target precision out of range")
        S = modulus_ring(R.p, new_m)
        return RingHom(R, S, lambda x: x % S.q, f"mod {R.p}^{new_m}")
    if isinstance(R, WittRing):
        if not 1 <= new_m <= R.m:
            raise UnsupportedHom("target precision out of range")
        S = make_witt_ring(R.p, R.a, new_m)
        return RingHom(R, S, lambda x: tuple(c % S.q for c in x), f"mod {R.p}^{new_m}")
    raise UnsupportedHom(f"no precision reduction on {R!r}")


def residue_reduction(R) -> RingHom:
    """Reduction onto the residue field."""
    if isinstance(R, ModulusRing):
        S = finite_field(R.p, 1)
        return RingHom(R, S, lambda x: (x % R.p,), "residue")
    if isinstance(R, WittRing):
        S = R.residue_field
        return RingHom(R, S, R.reduce_mod_p, "residue")
    if isinstance(R, TruncatedPolynomialRing):
        S = R.base
        return RingHom(R, S, lambda x: x[0], "residue")
    if isinstance(R, FiniteField):
        return RingHom(R, R, lambda x: x, "identity")
    raise UnsupportedHom(f"no residue reduction on {R!r}")


def prime_field_embedding(F: FiniteField, E: FiniteField) -> RingHom:
    """F_p -> F_{p^a} sending c to the constant c."""
    if F.a != 1 or F.p != E.p:
        raise UnsupportedHom("only prime-field embeddings are supported")
    pad = (0,) * (E.a - 1)
    return RingHom(F, E, lambda x: (x[0],) + pad, "embed")


# ---------------------------------------------------------------------------
# wire-format descriptors


def ring_from_descriptor(desc) -> object:
    if not isinstance(desc, dict) or "kind" not in desc:
        raise SchemaError("ring descriptor must be an object with a 'kind' field")
    kind = desc["kind"]
    try:
        if kind == "Zpm":
            return modulus_ring(int(desc["p"]), int(desc["m"]))
        if kind == "Fq":
            return finite_field(int(desc["p"]), int(desc.get("a", 1)))
        if kind == "witt":
            return make_witt_ring(int(desc["p"]), int(desc["a"]), int(desc["m"]))
        if kind == "Q":
            return QQ
        if kind == "tpoly":
            return local_test_ring(int(desc["p"]), int(desc.get("a", 1)), int(desc["e"]))
    except KeyError as exc:
        raise SchemaError(f"ring descriptor missing field {exc}") from exc
    except (NonPrime, ValueError) as exc:
        raise SchemaError(f"bad ring descriptor: {exc}") from exc
    raise SchemaError(f"unknown ring kind {kind!r}")
