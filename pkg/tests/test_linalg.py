"""Exact sparse rank, image bases, serialization."""

import random
from fractions import Fraction

import pytest

from gcohom.linalg import (
    SparseMatrix,
    image_basis,
    matrix_from_json,
    matrix_to_json,
    rank,
    rank_context,
    rank_exact,
    rank_modp,
    read_matrix,
    write_matrix,
)


def dense(rows):
    entries = {}
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            if v:
                entries[(i, j)] = Fraction(v)
    return SparseMatrix(len(rows), len(rows[0]) if rows else 0, entries)


def test_rank_basics():
    assert rank(SparseMatrix.zero(4, 7)) == 0
    assert rank(SparseMatrix.identity(5)) == 5
    m = dense([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert rank(m) == 2
    assert rank_exact(m) == 2


def test_rank_rational_entries():
    m = dense([[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), 1]])
    assert rank(m) == 1
    m2 = dense([[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), 2]])
    assert rank(m2) == 2


def test_rank_invariance_under_permutation_and_transpose():
    rng = random.Random(3)
    for _ in range(10):
        rows, cols = rng.randint(2, 8), rng.randint(2, 8)
        entries = {}
        for _k in range(rng.randint(1, rows * cols)):
            entries[(rng.randrange(rows), rng.randrange(cols))] = Fraction(
                rng.randint(-4, 4) or 1, rng.randint(1, 5))
        m = SparseMatrix(rows, cols, entries)
        r = rank(m)
        assert rank(m.transpose()) == r
        rp = list(range(rows))
        cp = list(range(cols))
        rng.shuffle(rp)
        rng.shuffle(cp)
        assert rank(m.permuted(rp, cp)) == r
        assert rank_exact(m) == r


def test_two_prime_agreement_and_bad_prime_escalation():
    # 2147483659 is prime; a matrix whose single entry is that prime has
    # modular rank 0 there but true rank 1
    p = 2147483659
    q = 2147483629
    m = SparseMatrix(1, 1, {(0, 0): Fraction(p)})
    assert rank_modp(m, p) == 0
    assert rank_modp(m, q) == 1
    with rank_context((p, q)):
        # disagreement forces the exact fallback
        assert rank(m) == 1
    with rank_context((q, p)):
        assert rank(m) == 1


def test_prime_dividing_denominator_is_skipped():
    p = 2147483659
    q = 2147483629
    m = SparseMatrix(1, 1, {(0, 0): Fraction(1, p)})
    assert rank_modp(m, p) is None
    with rank_context((p, q)):
        assert rank(m) == 1


def test_image_basis_spans_column_space():
    m = dense([[1, 2, 0], [0, 0, 1], [1, 2, 1]])
    vecs = image_basis(m)
    assert len(vecs) == rank(m) == 2


def test_image_basis_zero_matrix():
    assert image_basis(SparseMatrix.zero(3, 3)) == []


def test_matmul_and_add():
    a = dense([[1, 0], [0, 2]])
    b = dense([[0, 1], [1, 0]])
    assert (a @ b) == dense([[0, 1], [2, 0]])
    assert (a + a) == a.scaled(2)
    assert (a - a).is_zero()


def test_binary_roundtrip(tmp_path):
    m = dense([[Fraction(1, 2), 0, -3], [0, Fraction(7, 5), 0]])
    path = tmp_path / "m.gcmx"
    write_matrix(path, m, header={"kind": "test"})
    back, meta = read_matrix(path)
    assert back == m
    assert meta["kind"] == "test"
    assert meta["rows"] == 2 and meta["cols"] == 3


def test_json_roundtrip():
    m = dense([[Fraction(-1, 3), 2], [0, 0]])
    meta = matrix_to_json(m, header={"x": 1})
    back = matrix_from_json(meta)
    assert back == m


def test_shape_validation():
    with pytest.raises(ValueError):
        SparseMatrix(2, 2, {(2, 0): Fraction(1)})
