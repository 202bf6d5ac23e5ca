import numpy as np
import pytest
import sympy
from sympy import GF
from sympy.polys.matrices import DomainMatrix
from hypothesis import given, settings
from hypothesis import strategies as st

from almostsplit import exactfield as ef

PRIMES = [2, 3, 7, 101, 32003]


def matrices(max_rows=6, max_cols=6):
    return st.tuples(st.sampled_from(PRIMES), st.integers(1, max_rows), st.integers(1, max_cols),
                     st.integers(0, 2**32 - 1))


def _random(p, r, c, seed):
    rng = np.random.default_rng(seed)
    m = rng.integers(0, p, size=(r, c), dtype=np.int64)
    # sprinkle dependent rows so low ranks show up
    if r > 1 and seed % 3 == 0:
        m[-1] = (m[0] * 2 + m[1 % r]) % p
    return m


def _gf_rank(m, p):
    dm = DomainMatrix.from_list_sympy(*m.shape, [[sympy.Integer(int(x)) for x in row] for row in m]).convert_to(GF(p))
    return dm.rank()


def test_check_prime():
    assert ef.check_prime(32003) == 32003
    for bad in (0, 1, 4, 32001, 2**61 - 1):
        with pytest.raises(ef.FieldError):
            ef.check_prime(bad)


def test_inv_and_zero():
    for p in PRIMES:
        for a in range(1, min(p, 50)):
            assert a * ef.inv(a, p) % p == 1
    with pytest.raises(ZeroDivisionError):
        ef.inv(0, 7)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_matches_sympy(args):
    p, r, c, seed = args
    m = _random(p, r, c, seed)
    assert ef.rank(m, p) == _gf_rank(m, p)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rref_kernel(args):
    p, r, c, seed = args
    m = _random(p, r, c, seed)
    red, piv, rk = ef.rref(m, p)
    assert rk == len(piv) == ef.rank(m, p)
    for i, j in enumerate(piv):
        assert red[i, j] == 1 and not red[:i, j].any() and not red[i + 1:, j].any()
    k = ef.kernel_basis(m, p)
    assert k.shape == (c, c - rk)
    assert not ef.mul(m, k, p).any()
    assert ef.rank(k, p) == c - rk


@settings(max_examples=60, deadline=None)
@given(matrices(), st.integers(1, 3))
def test_solve(args, nrhs):
    p, r, c, seed = args
    a = _random(p, r, c, seed)
    x = np.random.default_rng(seed + 1).integers(0, p, size=(c, nrhs))
    b = ef.mul(a, x, p)
    sol = ef.solve(a, b, p)
    assert sol is not None and np.array_equal(ef.mul(a, sol, p), b)


def test_solve_inconsistent():
    a = ef.mat([[1, 0], [0, 0]], 7)
    assert ef.solve(a, ef.mat([[0], [1]], 7), 7) is None


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(PRIMES), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_inverse(p, n, seed):
    g = ef.random_invertible(n, p, np.random.default_rng(seed))
    assert np.array_equal(ef.mul(g, ef.inverse(g, p), p), ef.eye(n))


def test_inverse_singular():
    with pytest.raises(ef.FieldError):
        ef.inverse(ef.mat([[1, 2], [2, 4]], 7), 7)


@settings(max_examples=40, deadline=None)
@given(matrices())
def test_quotient(args):
    p, r, c, seed = args
    sub = _random(p, c, r, seed)  # columns span the subspace of F_p^c
    q = ef.quotient(sub, p)
    assert q.dim == c - ef.rank(sub, p)
    assert np.array_equal(ef.mul(q.proj, q.section, p), ef.eye(q.dim))
    assert not ef.mul(q.proj, sub, p).any()


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([3, 7, 101]), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_min_poly(p, n, seed):
    m = _random(p, n, n, seed)
    f = ef.min_poly(m, p)
    assert f[-1] == 1
    assert not ef.peval_matrix(f, m, p).any()
    x = sympy.symbols("x")
    cp = sympy.Poly(sympy.Matrix(m.tolist()).charpoly(x).as_expr(), x, modulus=p)
    mp = sympy.Poly(list(reversed(f)), x, modulus=p)
    assert cp.rem(mp).is_zero


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 7, 101, 32003]), st.lists(st.integers(0, 100), min_size=2, max_size=7),
       st.integers(0, 1000))
def test_factorization_matches_sympy(p, coeffs, seed):
    f = ef.poly(coeffs + [1], p)
    mine = ef.factor_squarefree_distinct(f, p, seed)
    x = sympy.symbols("x")
    _, fl = sympy.Poly(list(reversed(f)), x, modulus=p).factor_list()
    theirs = sorted(((tuple(int(c) % p for c in reversed(g.all_coeffs())), e) for g, e in fl),
                    key=lambda t: (len(t[0]), tuple(reversed(t[0]))))
    assert [(tuple(g), e) for g, e in mine] == [(ef.monic(g, p), e) for g, e in theirs]
    assert ef.factor_squarefree_distinct(f, p, seed + 17) == mine


def test_worked_examples():
    red, piv, rk = ef.rref(ef.mat([[1, 2], [2, 4]], 7), 7)
    assert rk == 1 and piv == [0] and red[0].tolist() == [1, 2]
    red, piv, rk = ef.rref(ef.zeros(0, 0), 7)
    assert rk == 0 and piv == []
    red, piv, rk = ef.rref(ef.eye(3), 7)
    assert rk == 3 and np.array_equal(red, ef.eye(3))
    assert ef.kernel_basis(ef.mat([[1, 1]], 7), 7).tolist() == [[6], [1]]
    assert ef.kernel_basis(ef.eye(2), 7).shape == (2, 0)
    assert np.array_equal(ef.kernel_basis(ef.zeros(2, 3), 7), ef.eye(3))
    assert ef.solve(ef.mat([[2]], 7), ef.mat([[1]], 7), 7).tolist() == [[4]]
    assert ef.solve(ef.mat([[0]], 7), ef.mat([[1]], 7), 7) is None
    b = ef.mat([[3, 1], [5, 0]], 7)
    assert np.array_equal(ef.solve(ef.eye(2), b, 7), b)


def test_min_poly_examples():
    assert ef.min_poly(ef.zeros(2, 2), 7) == (0, 1)
    assert ef.min_poly(ef.eye(2), 7) == (6, 1)
    assert ef.min_poly(ef.mat([[0, 1], [0, 0]], 7), 7) == (0, 0, 1)


def test_factor_examples():
    assert ef.factor_squarefree_distinct((6, 0, 1), 7) == [((1, 1), 1), ((6, 1), 1)]
    assert ef.factor_squarefree_distinct((1, 0, 1), 7) == [((1, 0, 1), 1)]
    assert ef.factor_squarefree_distinct((0, 0, 1), 7) == [((0, 1), 2)]
