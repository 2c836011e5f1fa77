import itertools
import random

import pytest

from wedgecrys.errors import ArityMismatch, DimensionMismatch, RankPrecondition, SchemaError
from wedgecrys.matrices import (
    IdealStatus,
    Matrix,
    base_change_matrix,
    charpoly,
    cokernel_rank_check,
    compound,
    det,
    determinantal_status,
    determinantal_witness,
    index_subsets,
    invert_unimodular,
    lambda_r_tuple,
    matrix_from_json,
    matrix_to_json,
    minor_ideal_status,
    rank,
    rank_lemma_check,
    wedge_exact_sequence,
)
from wedgecrys.rings import (
    QQ,
    finite_field,
    local_test_ring,
    make_witt_ring,
    modulus_ring,
    precision_reduction,
    residue_reduction,
)


# -- independent oracles ------------------------------------------------------


def det_by_permutations(A):
    """Leibniz expansion; shares no code with the library determinants."""
    R = A.ring
    n = A.rows
    total = R.zero
    for perm in itertools.permutations(range(n)):
        inversions = sum(
            1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j]
        )
        term = R.one
        for i in range(n):
            term = R.mul(term, A[i, perm[i]])
        total = R.add(total, term) if inversions % 2 == 0 else R.sub(total, term)
    return total


def submatrix(A, rows, cols):
    return Matrix(A.ring, len(rows), len(cols), [A[i, j] for i in rows for j in cols])


def _random_matrix(ring, n, rng):
    return Matrix(ring, n, n, [ring.random_element(rng) for _ in range(n * n)])


# -- compound -----------------------------------------------------------------


def test_compound_identity():
    F5 = finite_field(5)
    assert compound(Matrix.identity(F5, 4), 2) == Matrix.identity(F5, 6)


def test_compound_diag_over_q():
    A = Matrix.from_int_rows(QQ, [[1, 0, 0], [0, 2, 0], [0, 0, 3]])
    C = compound(A, 2)
    # subset order {0,1},{0,2},{1,2} gives diag(2, 3, 6)
    assert C == Matrix.from_int_rows(QQ, [[2, 0, 0], [0, 3, 0], [0, 0, 6]])


def test_compound_entries_are_plain_minors_no_signs():
    Z27 = modulus_ring(3, 3)
    rng = random.Random(123)
    for _ in range(10):
        A = _random_matrix(Z27, 4, rng)
        C = compound(A, 2)
        subs = index_subsets(4, 2)
        for si, S in enumerate(subs):
            for ti, T in enumerate(subs):
                assert C[si, ti] == det_by_permutations(submatrix(A, S, T))


def test_compound_edge_orders():
    Z9 = modulus_ring(3, 2)
    rng = random.Random(5)
    A = _random_matrix(Z9, 3, rng)
    assert compound(A, 1) == A
    assert compound(A, 3) == Matrix(Z9, 1, 1, [det_by_permutations(A)])


def test_cauchy_binet_over_zp_and_fq():
    rng = random.Random(77)
    for ring in (modulus_ring(3, 3), finite_field(3, 2)):
        for _ in range(15):
            A = _random_matrix(ring, 4, rng)
            B = _random_matrix(ring, 4, rng)
            for d in (2, 3):
                assert compound(A @ B, d) == compound(A, d) @ compound(B, d)


def test_compound_transpose():
    Z27 = modulus_ring(3, 3)
    rng = random.Random(8)
    A = _random_matrix(Z27, 4, rng)
    for d in (2, 3):
        assert compound(A.transpose(), d) == compound(A, d).transpose()


def test_compound_dimension_errors():
    F5 = finite_field(5)
    A = Matrix.identity(F5, 3)
    with pytest.raises(DimensionMismatch):
        compound(A, 0)
    with pytest.raises(DimensionMismatch):
        compound(A, 4)
    with pytest.raises(DimensionMismatch):
        compound(Matrix.zeros(F5, 2, 3), 1)


# -- determinants and charpoly -------------------------------------------------


@pytest.mark.parametrize(
    "ring", [modulus_ring(3, 3), finite_field(5), finite_field(3, 2), make_witt_ring(3, 2, 3)]
)
def test_det_matches_permutation_expansion(ring):
    rng = random.Random(31)
    for n in (1, 2, 3, 4, 5):
        for _ in range(6):
            A = _random_matrix(ring, n, rng)
            assert det(A) == det_by_permutations(A)


def test_charpoly_against_symbolic_oracle():
    # det(T I - A) over Z/27 expanded with hand-rolled polynomial arithmetic
    Z27 = modulus_ring(3, 3)
    rng = random.Random(13)

    def poly_mul(f, g):
        out = [0] * (len(f) + len(g) - 1)
        for i, a in enumerate(f):
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % 27
        return out

    def poly_det(M, rows, cols):
        if len(rows) == 1:
            return M[rows[0]][cols[0]]
        acc = [0]
        for idx, r in enumerate(rows):
            sub = poly_det(M, rows[:idx] + rows[idx + 1 :], cols[1:])
            term = poly_mul(M[r][cols[0]], sub)
            sign = 1 if idx % 2 == 0 else -1
            out = [0] * max(len(acc), len(term))
            for k, c in enumerate(acc):
                out[k] = c
            for k, c in enumerate(term):
                out[k] = (out[k] + sign * c) % 27
            acc = out
        return acc

    for n in (2, 3, 4, 5):
        A = _random_matrix(Z27, n, rng)
        M = [[[(-A[i, j]) % 27] if i != j else [(-A[i, j]) % 27, 1] for j in range(n)] for i in range(n)]
        expect = poly_det(M, tuple(range(n)), tuple(range(n)))
        expect = expect + [0] * (n + 1 - len(expect))
        assert charpoly(A) == expect


# -- determinantal ideals and rank ---------------------------------------------


def test_status_examples():
    Z9 = modulus_ring(3, 2)
    A = Matrix.from_int_rows(Z9, [[3, 0], [0, 3]])
    assert determinantal_status(A, 1) is IdealStatus.PROPER_NONZERO
    assert determinantal_status(A, 0) is IdealStatus.UNIT
    assert determinantal_status(A, 3) is IdealStatus.ZERO
    I4 = Matrix.identity(finite_field(7), 4)
    for i in range(5):
        assert determinantal_status(I4, i) is IdealStatus.UNIT


def test_witness_matches_brute_force_minor_enumeration():
    rings = [modulus_ring(3, 2), modulus_ring(3, 3), finite_field(3, 2),
             local_test_ring(3, 1, 2), QQ]
    rng = random.Random(99)
    for ring in rings:
        for n in (2, 3):
            for _ in range(8):
                A = _random_matrix(ring, n, rng)
                fast = determinantal_witness(A)
                slow = tuple(minor_ideal_status(A, i) for i in range(n + 2))
                assert fast == slow, (ring, A)


def test_witness_monotone():
    rng = random.Random(17)
    for ring in (modulus_ring(3, 3), finite_field(5)):
        for _ in range(20):
            A = _random_matrix(ring, 4, rng)
            w = determinantal_witness(A)
            seen_zero = False
            for s in w:
                if seen_zero:
                    assert s is IdealStatus.ZERO
                if s is IdealStatus.ZERO:
                    seen_zero = True


def test_rank_examples():
    F5 = finite_field(5)
    assert rank(Matrix.identity(F5, 3)).rank == 3
    assert rank(Matrix.from_int_rows(F5, [[1, 0], [0, 0]])).rank == 1
    Z9 = modulus_ring(3, 2)
    r = rank(Matrix.from_int_rows(Z9, [[1, 0], [0, 3]]))
    assert r.rank is None
    assert r.witness[1] is IdealStatus.UNIT
    assert r.witness[2] is IdealStatus.PROPER_NONZERO


def test_rank_over_undecidable_ring_reports_undecidable():
    from wedgecrys.graded import GradedRing

    S = GradedRing(finite_field(5), ("x", "y"), (1, 1))
    x = S.monomial((1, 0))
    A = Matrix(S, 2, 2, [x, S.zero, S.zero, x])
    w = determinantal_witness(A)
    assert IdealStatus.UNDECIDABLE in w
    assert w[3] is IdealStatus.ZERO


def test_rank_stable_under_base_change_when_defined():
    Z27 = modulus_ring(3, 3)
    rng = random.Random(3)
    hom_res = residue_reduction(Z27)
    hom_prec = precision_reduction(Z27, 2)
    checked = 0
    for _ in range(60):
        A = _random_matrix(Z27, 3, rng)
        r = rank(A)
        if r.rank is None:
            continue
        assert rank(base_change_matrix(A, hom_res)).rank == r.rank
        assert rank(base_change_matrix(A, hom_prec)).rank == r.rank
        checked += 1
    assert checked > 10


def test_statuses_push_forward_along_residue_reduction():
    Z27 = modulus_ring(3, 3)
    rng = random.Random(21)
    red = residue_reduction(Z27)
    for _ in range(20):
        A = _random_matrix(Z27, 3, rng)
        B = base_change_matrix(A, red)
        for i in range(5):
            sa, sb = determinantal_status(A, i), determinantal_status(B, i)
            # U_i(phi(A)) = U_i(A) S: units stay units, zero can only grow
            if sa is IdealStatus.UNIT:
                assert sb is IdealStatus.UNIT
            if sa is IdealStatus.ZERO:
                assert sb is IdealStatus.ZERO


def test_compound_commutes_with_base_change():
    Z27 = modulus_ring(3, 3)
    red = residue_reduction(Z27)
    rng = random.Random(55)
    for _ in range(20):
        A = _random_matrix(Z27, 4, rng)
        for d in (2, 3):
            assert compound(base_change_matrix(A, red), d) == base_change_matrix(
                compound(A, d), red
            )


# -- cokernels and the wedge exact sequence -------------------------------------


def test_cokernel_examples():
    F7 = finite_field(7)
    assert bool(cokernel_rank_check(Matrix.identity(F7, 3), 3))
    assert bool(cokernel_rank_check(Matrix.from_int_rows(F7, [[1, 0, 0], [0, 1, 0], [0, 0, 0]]), 2))
    T = local_test_ring(3, 1, 2)
    A = Matrix.from_rows(T, [[T.one, T.zero], [T.zero, T.t_gen()]])
    chk = cokernel_rank_check(A, 1)
    assert not bool(chk)
    assert chk.agree  # both sides false: the lemma survives


def test_cokernel_sides_always_agree():
    rng = random.Random(10)
    for ring in (finite_field(5), local_test_ring(3, 1, 2), modulus_ring(3, 2)):
        for _ in range(40):
            n = rng.randint(1, 3)
            A = _random_matrix(ring, n, rng)
            for expected in range(n + 1):
                assert cokernel_rank_check(A, expected).agree


def test_wedge_exact_sequence_examples():
    F5 = finite_field(5)
    A = Matrix.from_int_rows(F5, [[1, 0, 0], [0, 1, 0], [0, 0, 0]])
    res = wedge_exact_sequence(A, 2)
    assert res.compound_map == Matrix.from_int_rows(F5, [[1, 0, 0], [0, 0, 0], [0, 0, 0]])
    assert res.cokernel_rank == 2
    B = Matrix.from_int_rows(F5, [[1, 0], [0, 0]])
    assert wedge_exact_sequence(B, 1).cokernel_rank == 1
    with pytest.raises(RankPrecondition):
        wedge_exact_sequence(Matrix.identity(F5, 3), 2)


def test_wedge_exact_sequence_random_rank_deficient():
    rng = random.Random(2)
    import math

    for ring in (finite_field(5), finite_field(7)):
        done = 0
        while done < 50:
            n = rng.randint(2, 4)
            A = _random_matrix(ring, n, rng)
            if rank(A).rank != n - 1:
                continue
            d = rng.randint(1, n - 1)
            res = wedge_exact_sequence(A, d)
            assert res.cokernel_rank == math.comb(n - 1, d - 1)
            done += 1


# -- rank lemma -----------------------------------------------------------------


def test_rank_lemma_examples():
    F5 = finite_field(5)
    A = Matrix.from_int_rows(F5, [[1, 0, 0], [0, 1, 0], [0, 0, 0]])
    chk = rank_lemma_check(A, 2)
    assert chk.lhs and chk.rhs
    chk = rank_lemma_check(Matrix.identity(F5, 3), 2)
    assert not chk.lhs and not chk.rhs
    Zp3 = modulus_ring(3, 3)
    D = Matrix.from_int_rows(Zp3, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 3]])
    chk = rank_lemma_check(D, 2)
    assert not chk.lhs and not chk.rhs


def test_rank_lemma_exhaustive_f2():
    F2 = finite_field(2)
    zero, one = F2.zero, F2.one
    cases = 0
    for bits in itertools.product((zero, one), repeat=9):
        A = Matrix(F2, 3, 3, bits)
        chk = rank_lemma_check(A, 2)
        assert chk.lhs == chk.rhs
        cases += 1
    assert cases == 512


# -- Lambda_r and misc -----------------------------------------------------------


def test_lambda_r_tuple_order_contract():
    assert lambda_r_tuple(["a", "b", "c"], lambda x, y: (x, y), 2) == [
        ("a", "b"),
        ("a", "c"),
        ("b", "c"),
    ]
    assert lambda_r_tuple([1, 2, 3], lambda x, y, z: x + y + z, 3) == [6]
    with pytest.raises(ArityMismatch):
        lambda_r_tuple([1, 2], lambda x: x, 3)


def test_lambda_r_tuple_reproduces_compound_column_blocks():
    from wedgecrys.matrices import stack_minors

    Z9 = modulus_ring(3, 2)
    rng = random.Random(44)
    A = _random_matrix(Z9, 4, rng)
    d = 2
    cols = [A.col(j) for j in range(4)]

    def rho(*vs):
        return stack_minors(Matrix(Z9, 4, d, [v[i] for i in range(4) for v in vs]), d)

    blocks = lambda_r_tuple(cols, rho, d)
    C = compound(A, d)
    for ti, block in enumerate(blocks):
        assert tuple(C.col(ti)) == tuple(block)


def test_invert_unimodular():
    W = make_witt_ring(3, 2, 3)
    rng = random.Random(6)
    found = 0
    while found < 10:
        U = _random_matrix(W, 3, rng)
        if not W.is_unit(det(U)):
            continue
        assert U @ invert_unimodular(U) == Matrix.identity(W, 3)
        found += 1


def test_matrix_json_round_trip_and_errors():
    Z27 = modulus_ring(3, 3)
    rng = random.Random(12)
    A = _random_matrix(Z27, 3, rng)
    assert matrix_from_json(matrix_to_json(A)) == A
    bad = matrix_to_json(A)
    bad["entries"][4] = "zzz"
    with pytest.raises(SchemaError) as exc:
        matrix_from_json(bad)
    assert "index 4" in str(exc.value)
    with pytest.raises(SchemaError):
        matrix_from_json({"schema": "v0"})
