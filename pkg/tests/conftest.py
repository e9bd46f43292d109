"""Shared strategies and helpers for the test suite."""

import numpy as np
import sympy
from gmpy2 import mpq
from hypothesis import strategies as st

from curvlab.pseudolin import LinearMap, Signature, exact_array


def to_sympy(arr) -> sympy.Matrix:
    return sympy.Matrix(
        [[sympy.Rational(int(v.numerator), int(v.denominator)) for v in row] for row in arr]
    )


def from_sympy(M: sympy.Matrix) -> np.ndarray:
    return exact_array([[mpq(int(v.p), int(v.q)) for v in M.row(i)] for i in range(M.rows)])


def jordan_block_matrix(blocks, m):
    """Block-diagonal matrix from ``[(eigenvalue, size), ...]`` padded to ``m``."""
    A = np.zeros((m, m), dtype=int)
    at = 0
    for lam, size in blocks:
        for i in range(size):
            A[at + i, at + i] = lam
            if i + 1 < size:
                A[at + i, at + i + 1] = 1
        at += size
    assert at == m
    return exact_array(A)


@st.composite
def block_configs(draw, max_m=8):
    """Random Jordan block lists with integer eigenvalues, total size <= max_m."""
    m = draw(st.integers(1, max_m))
    blocks, left = [], m
    while left:
        size = draw(st.integers(1, left))
        lam = draw(st.integers(-2, 2))
        blocks.append((lam, size))
        left -= size
    return m, blocks


@st.composite
def invertible(draw, m):
    """Random unimodular integer matrix ``L U P`` and its exact inverse."""
    low = draw(st.lists(st.integers(-2, 2), min_size=m * m, max_size=m * m))
    up = draw(st.lists(st.integers(-2, 2), min_size=m * m, max_size=m * m))
    perm = draw(st.permutations(range(m)))
    L = sympy.Matrix(m, m, lambda i, j: 1 if i == j else (low[i * m + j] if i > j else 0))
    U = sympy.Matrix(m, m, lambda i, j: 1 if i == j else (up[i * m + j] if i < j else 0))
    P = sympy.Matrix(m, m, lambda i, j: 1 if perm[i] == j else 0)
    S = L * U * P
    return from_sympy(S), from_sympy(S.inv())


@st.composite
def signatures(draw, max_m=5, min_m=1):
    m = draw(st.integers(min_m, max_m))
    p = draw(st.integers(0, m))
    return Signature(p, m - p)


@st.composite
def exact_maps(draw, sig, bound=3):
    m = sig.m
    entries = draw(st.lists(st.integers(-bound, bound), min_size=m * m, max_size=m * m))
    return LinearMap(exact_array(np.array(entries).reshape(m, m)), sig)


@st.composite
def rational_vectors(draw, m, bound=3, nonzero=False):
    while True:
        nums = draw(st.lists(st.integers(-bound, bound), min_size=m, max_size=m))
        den = draw(st.integers(1, 3))
        if not nonzero or any(nums):
            return exact_array([mpq(n, den) for n in nums])
