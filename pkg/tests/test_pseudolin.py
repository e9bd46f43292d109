import numpy as np
import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from conftest import block_configs, exact_maps, invertible, jordan_block_matrix, signatures, to_sympy
from curvlab.pseudolin import (
    JordanSignature,
    LinearMap,
    Signature,
    adams_number,
    charpoly,
    exact_array,
    inner,
    is_diagonalizable,
    is_jordan_simple,
    is_self_adjoint,
    is_skew_adjoint,
    jordan_equivalent,
    jordan_signature,
    rank,
    rank_sequence,
    spectrum,
    stabilize,
)

# Radon-Hurwitz rho(q) for q = 1..32, tabulated independently (OEIS A053381).
RHO = [1, 2, 1, 4, 1, 2, 1, 8, 1, 2, 1, 4, 1, 2, 1, 9,
       1, 2, 1, 4, 1, 2, 1, 8, 1, 2, 1, 4, 1, 2, 1, 10]


def lm(rows, p=0, q=None):
    rows = np.array(rows)
    q = rows.shape[0] - p if q is None else q
    return LinearMap(exact_array(rows), Signature(p, q))


def blocks_of(sig: JordanSignature):
    return sorted((str(c), part) for c, part in sig.blocks)


# ------------------------------------------------------------------ inner


def test_inner_examples():
    s11, s03, s22 = Signature(1, 1), Signature(0, 3), Signature(2, 2)
    e = lambda sig, i: sig.basis(i)
    assert inner(e(s11, 0), e(s11, 0), s11) == -1
    assert inner(e(s03, 0), e(s03, 1), s03) == 0
    x = e(s22, 0) + e(s22, 2)
    assert inner(x, x, s22) == 0


def test_inner_dimension_mismatch():
    with pytest.raises(ValueError):
        inner(exact_array([1, 0]), exact_array([1, 0, 0]), Signature(0, 3))


@given(signatures(), st.data())
def test_inner_symmetric_bilinear(sig, data):
    from conftest import rational_vectors

    x, y, z = (data.draw(rational_vectors(sig.m)) for _ in range(3))
    c = mpq(data.draw(st.integers(-3, 3)))
    assert inner(x, y, sig) == inner(y, x, sig)
    assert inner(x * c + z, y, sig) == c * inner(x, y, sig) + inner(z, y, sig)


# --------------------------------------------------------------- adjoints


def test_adjointness_examples():
    assert is_self_adjoint(LinearMap.identity(Signature(2, 1)))
    assert not is_self_adjoint(lm([[0, 1], [1, 0]], p=1))
    assert is_skew_adjoint(lm([[0, -1], [1, 0]]))


# --------------------------------------------------------------- spectrum


def test_spectrum_examples():
    assert sorted(spectrum(lm(np.diag([1, 1, 0]))).eigenvalues()) == [0, 1, 1]
    assert spectrum(lm([[0, 1], [0, 0]])).eigenvalues() == [0, 0]
    rot = spectrum(lm([[0, -1], [1, 0]]))
    assert rot.charpoly == (1, 0, 1)
    assert sorted(rot.eigenvalues(), key=lambda z: z.imag) == pytest.approx([-1j, 1j])


@settings(max_examples=60, deadline=None)
@given(signatures(max_m=5), st.data())
def test_charpoly_matches_sympy(sig, data):
    T = data.draw(exact_maps(sig))
    expected = to_sympy(T.entries).charpoly().all_coeffs()
    assert [sympy.Rational(int(c.numerator), int(c.denominator)) for c in charpoly(T)] == expected


@settings(max_examples=60, deadline=None)
@given(signatures(max_m=5), st.data())
def test_spectrum_multiplicities_and_conjugates(sig, data):
    T = data.draw(exact_maps(sig))
    spec = spectrum(T)
    assert spec.dimension == sig.m
    vals = [complex(v) for v in spec.eigenvalues()]
    assert len(vals) == sig.m
    conj = sorted((v.conjugate() for v in vals), key=lambda z: (round(z.real, 6), round(z.imag, 6)))
    assert np.allclose(sorted(vals, key=lambda z: (round(z.real, 6), round(z.imag, 6))), conj)


# ----------------------------------------------------------------- Jordan


def test_jordan_examples():
    assert blocks_of(jordan_signature(lm([[0, 1], [0, 0]]))) == [("0", (2,))]
    assert blocks_of(jordan_signature(lm(np.diag([2, 2, 3])))) == [("2", (1, 1)), ("3", (1,))]
    n2 = np.array([[0, 1], [0, 0]])
    A = lm(np.block([[n2, np.zeros((2, 2), int)], [np.zeros((2, 2), int), n2]]))
    assert rank_sequence(A.entries, 4)[:3] == [4, 2, 0]
    assert blocks_of(jordan_signature(A)) == [("0", (2, 2))]


def test_jordan_equivalent_examples():
    nil = jordan_signature(lm([[0, 1], [0, 0]]))
    assert jordan_equivalent(nil, jordan_signature(lm([[0, 1], [0, 0]])))
    assert not jordan_equivalent(nil, jordan_signature(lm([[0, 0], [0, 0]])))
    a = jordan_signature(lm([[1, 0], [0, -1]]))
    b = jordan_signature(lm([[-1, 0], [0, 1]]))
    assert jordan_equivalent(a, b)


def test_jordan_simple_examples():
    assert is_jordan_simple(LinearMap.identity(Signature(0, 3)))
    assert not is_jordan_simple(lm([[0, 1], [0, 0]]))
    rot = lm([[0, -1], [1, 0]])
    assert is_jordan_simple(rot)
    assert is_diagonalizable(rot, over="complex")
    assert not is_diagonalizable(rot, over="real")


def test_irrational_class_is_exact():
    # eigenvalues +-sqrt(2), each in a 2x2 Jordan block
    C = np.array([[0, 2], [1, 0]])
    A = lm(np.block([[C, np.eye(2, dtype=int)], [np.zeros((2, 2), int), C]]))
    sig = jordan_signature(A)
    assert sig.exact
    assert blocks_of(sig) == [("t^2 - 2", (2,))]


def test_float_mode_agrees():
    A = lm(np.block([[np.array([[3, 1], [0, 3]]), np.zeros((2, 1), int)], [np.zeros((1, 2), int), np.array([[1]])]]))
    fsig = jordan_signature(A.to_float())
    assert not fsig.exact
    assert fsig.equals(jordan_signature(A))


@settings(max_examples=80, deadline=None)
@given(block_configs(), st.data())
def test_partition_recovery(config, data):
    m, blocks = config
    S, Si = data.draw(invertible(m))
    A = S.dot(jordan_block_matrix(blocks, m)).dot(Si)
    expected = {}
    for lam, size in blocks:
        expected.setdefault(str(lam), []).append(size)
    got = dict(blocks_of(jordan_signature(lm(A))))
    assert got == {k: tuple(sorted(v, reverse=True)) for k, v in expected.items()}


@settings(max_examples=40, deadline=None)
@given(signatures(max_m=5), st.data())
def test_jordan_conjugation_invariant(sig, data):
    T = data.draw(exact_maps(sig))
    S, Si = data.draw(invertible(sig.m))
    assert jordan_signature(T) == jordan_signature(LinearMap(S.dot(T.entries).dot(Si), sig))


@settings(max_examples=30, deadline=None)
@given(block_configs(max_m=5), st.data())
def test_jordan_matches_sympy(config, data):
    m, blocks = config
    S, Si = data.draw(invertible(m))
    A = S.dot(jordan_block_matrix(blocks, m)).dot(Si)
    _, J = to_sympy(A).jordan_form()
    sizes = {}
    i = 0
    while i < J.rows:
        j = i
        while j + 1 < J.rows and J[j, j + 1] == 1:
            j += 1
        sizes.setdefault(str(J[i, i]), []).append(j - i + 1)
        i = j + 1
    expected = sorted((k, tuple(sorted(v, reverse=True))) for k, v in sizes.items())
    assert blocks_of(jordan_signature(lm(A))) == expected


@settings(max_examples=40, deadline=None)
@given(signatures(max_m=5), st.data())
def test_rank_sequence_monotone(sig, data):
    T = data.draw(exact_maps(sig))
    ranks = rank_sequence(T.entries, sig.m)
    assert all(a >= b for a, b in zip(ranks, ranks[1:]))
    assert rank(T ** sig.m) == rank(T ** (sig.m + 1))


# ------------------------------------------------------------------- misc


def test_adams_examples():
    assert adams_number(1) == 0
    assert adams_number(8) == 7
    assert adams_number(16) == 8


@pytest.mark.parametrize("q", range(1, 33))
def test_adams_table(q):
    assert adams_number(q) == RHO[q - 1] - 1


@given(st.integers(1, 10**6))
def test_adams_bounds(q):
    assert adams_number(q) < q
    if q % 2:
        assert adams_number(q) == 0


def test_stabilize_examples():
    T = lm([[1]])
    S = stabilize(T, 1)
    assert S.entries.tolist() == [[1, 0], [0, 0]]
    assert stabilize(T, 0) is T


@given(signatures(max_m=4), st.integers(0, 3), st.data())
def test_stabilize_extends_zero_class(sig, extra, data):
    T = data.draw(exact_maps(sig))
    before = dict(blocks_of(jordan_signature(T)))
    after = dict(blocks_of(jordan_signature(stabilize(T, extra))))
    if extra:
        before["0"] = tuple(sorted(before.get("0", ()) + (1,) * extra, reverse=True))
    assert after == before
