"""Natural operators of curvature tensors.

Scaling laws (used when a vector or frame is not normalized):
``J(c x) = c^2 J(x)``, ``S(c x) = c^3 S(x)`` and ``R(c e1, d e2) = c d R(e1, e2)``.
"""

from __future__ import annotations

import numpy as np
from gmpy2 import mpq

from .curvature import CovDerivTensor, CurvatureTensor
from .frames import FrameSample
from .pseudolin import LinearMap, exact_sqrt, is_square


def _raise_last(C: np.ndarray, R) -> LinearMap:
    # C[i, j] = form(e_i, e_j); image of e_i has j-th coordinate eps_j C[i, j]
    eps = R.sig.eps_array(R.exact)
    return LinearMap(eps[:, None] * C.T, R.sig)


def _blank(R) -> np.ndarray:
    C = np.empty((R.m, R.m), dtype=object)
    C[:] = mpq(0)
    return C


def jacobi(R: CurvatureTensor, x) -> LinearMap:
    """``J(x): y -> R(y, x) x``."""
    if not R.exact:
        C = np.tensordot(np.tensordot(R.components, x, axes=([1], [0])), x, axes=([1], [0]))
        return _raise_last(C, R)
    C = _blank(R)
    for (i, j, k, l), v in R.nonzeros():
        if x[j] and x[k]:
            C[i, l] += v * x[j] * x[k]
    return _raise_last(C, R)


def _frame_projector(f: FrameSample) -> np.ndarray:
    # sum_i v_i v_i^T / (v_i, v_i): exact even for deferred normalisation
    m = f.sig_ambient.m
    if all(isinstance(n, float) for n in f.norm_sq):
        Q = np.zeros((m, m))
    else:
        Q = np.zeros((m, m), dtype=object)
        Q[:] = mpq(0)
    for v, n in zip(f.vectors, f.norm_sq):
        Q = Q + np.outer(v, v) / n
    return Q


def higher_jacobi(R: CurvatureTensor, f: FrameSample) -> LinearMap:
    """``J(pi) = sum_i (e_i, e_i) J(e_i)`` over an orthonormal basis of ``pi``.

    With an orthogonal but unnormalized frame this equals
    ``sum_i J(v_i) / (v_i, v_i)``, which is what is computed.
    """
    Q = _frame_projector(f)
    if not R.exact:
        return _raise_last(np.tensordot(R.components, Q, axes=([1, 2], [0, 1])), R)
    C = _blank(R)
    for (i, j, k, l), v in R.nonzeros():
        if Q[j, k]:
            C[i, l] += v * Q[j, k]
    return _raise_last(C, R)


def skew_curvature(R: CurvatureTensor, f: FrameSample) -> LinearMap:
    """``R(pi) = R(e1, e2)`` for an oriented orthonormal 2-frame."""
    if f.k != 2:
        raise ValueError("skew-symmetric curvature operator needs a 2-frame")
    e1, e2 = f.vectors
    if R.exact:
        C = _blank(R)
        for (i, j, k, l), v in R.nonzeros():
            if e1[i] and e2[j]:
                C[k, l] += v * e1[i] * e2[j]
        T = _raise_last(C, R)
    else:
        T = R.endomorphism(e1, e2)
    scale = abs(f.norm_sq[0] * f.norm_sq[1])
    if scale != 1:
        if not is_square(scale):
            raise ValueError("frame norms are not rational squares; normalize the frame first")
        T = T.scale(1 / exact_sqrt(scale))
    return T


def szabo(D: CovDerivTensor, x) -> LinearMap:
    """``S(x): y -> R_x(y, x) x``, i.e. ``(S(x) y, z) = D(y, x, x, z; x)``."""
    if not D.exact:
        C = np.tensordot(D.components, x, axes=([4], [0]))
        C = np.tensordot(np.tensordot(C, x, axes=([1], [0])), x, axes=([1], [0]))
        return _raise_last(C, D)
    C = _blank(D)
    for (i, j, k, l, n), v in D.nonzeros():
        if x[j] and x[k] and x[n]:
            C[i, l] += v * x[j] * x[k] * x[n]
    return _raise_last(C, D)
