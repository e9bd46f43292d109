"""Algebraic curvature tensors, covariant-derivative tensors and constructions.

Components are fully lowered in the canonical orthonormal basis:
``R[i, j, k, l] = R(e_i, e_j, e_k, e_l)`` and
``D[i, j, k, l, n] = nabla R(e_i, e_j, e_k, e_l; e_n)``.  The endomorphism
``R(x, y)`` is recovered by raising the last slot: ``(R(x,y)z, w) = R(x,y,z,w)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from gmpy2 import mpq

from .pseudolin import (
    DEFAULT_TOL,
    LinearMap,
    Signature,
    exact_array,
    is_exact_array,
    is_self_adjoint,
    is_skew_adjoint,
    scalar_str,
    zeros_exact,
)


@dataclass(frozen=True)
class Violation:
    identity: str
    indices: tuple
    residual: object

    def __str__(self):
        return f"{self.identity} at {self.indices}: residual {scalar_str(self.residual)}"


class _Tensor:
    rank = 0

    def __init__(self, components, sig: Signature):
        arr = np.asarray(components)
        if arr.dtype != object and not np.issubdtype(arr.dtype, np.floating):
            arr = exact_array(arr)
        if arr.shape != (sig.m,) * self.rank:
            raise ValueError(f"expected shape {(sig.m,) * self.rank}, got {arr.shape}")
        arr.setflags(write=False)
        self.components = arr
        self.sig = sig
        self._nonzeros = None

    def nonzeros(self) -> list:
        """``[(index, value)]`` of the nonzero components (cached; exact tensors are mostly sparse)."""
        if self._nonzeros is None:
            self._nonzeros = [(idx, v) for idx, v in np.ndenumerate(self.components) if v != 0]
        return self._nonzeros

    @property
    def exact(self) -> bool:
        return is_exact_array(self.components)

    @property
    def m(self) -> int:
        return self.sig.m

    def is_zero(self, tol: float = DEFAULT_TOL) -> bool:
        if self.exact:
            return all(v == 0 for v in self.components.reshape(-1))
        return bool(np.all(np.abs(self.components) <= tol))

    def __eq__(self, other):
        if type(other) is not type(self) or other.sig != self.sig:
            return NotImplemented
        return bool(np.all(self.components == other.components))

    __hash__ = None

    def __add__(self, other):
        return type(self)(self.components + other.components, self.sig)

    def __sub__(self, other):
        return type(self)(self.components - other.components, self.sig)

    def __neg__(self):
        return type(self)(-self.components, self.sig)

    def scale(self, c):
        c = mpq(c) if self.exact and not isinstance(c, float) else c
        return type(self)(self.components * c, self.sig)

    def to_float(self):
        return type(self)(self.components.astype(float), self.sig)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "p": self.sig.p,
            "q": self.sig.q,
            "components": [scalar_str(v) for v in self.components.reshape(-1)],
        }

    @classmethod
    def from_json(cls, data: dict, scalar: str = "exact"):
        sig = Signature(int(data["p"]), int(data["q"]))
        arr = exact_array(data["components"]).reshape((sig.m,) * cls.rank)
        if scalar == "float":
            arr = arr.astype(float)
        return cls(arr, sig)

    @classmethod
    def zero(cls, sig: Signature):
        return cls(zeros_exact((sig.m,) * cls.rank), sig)


class CurvatureTensor(_Tensor):
    rank = 4
    kind = "curvature"

    def endomorphism(self, x, y) -> LinearMap:
        """``R(x, y)`` as a linear map."""
        C = np.tensordot(np.tensordot(self.components, x, axes=([0], [0])), y, axes=([0], [0]))
        # C[k, l] = R(x, y, e_k, e_l); image of e_k has l-th coordinate eps_l C[k, l]
        eps = self.sig.eps_array(self.exact)
        return LinearMap(eps[:, None] * C.T, self.sig)

    def pullback(self, A: np.ndarray) -> "CurvatureTensor":
        """``(A^* R)(x,y,z,w) = R(Ax, Ay, Az, Aw)`` for a matrix ``A``."""
        out = np.einsum("abcd,ai,bj,ck,dl->ijkl", self.components, A, A, A, A, optimize=True)
        return CurvatureTensor(out, self.sig)


class CovDerivTensor(_Tensor):
    rank = 5
    kind = "covariant-derivative"

    def endomorphism(self, x1, x2, x3) -> LinearMap:
        """``R_{x1}(x2, x3)`` with ``(R_{x1}(x2,x3) x4, x5) = D(x2,x3,x4,x5; x1)``."""
        C = np.tensordot(self.components, x1, axes=([4], [0]))
        C = np.tensordot(np.tensordot(C, x2, axes=([0], [0])), x3, axes=([0], [0]))
        eps = self.sig.eps_array(self.exact)
        return LinearMap(eps[:, None] * C.T, self.sig)


def load_tensor(data: dict, scalar: str = "exact"):
    kind = data.get("kind")
    if kind is None:
        n = len(data["components"])
        m = int(data["p"]) + int(data["q"])
        kind = "curvature" if n == m**4 else "covariant-derivative"
    if kind == "curvature":
        return CurvatureTensor.from_json(data, scalar)
    if kind == "covariant-derivative":
        return CovDerivTensor.from_json(data, scalar)
    raise ValueError(f"unknown tensor kind {kind!r}")


# ------------------------------------------------------------- validation


def _collect(name: str, residual: np.ndarray, tol: float, limit: int | None) -> list[Violation]:
    out = []
    exact = is_exact_array(residual)
    for idx in np.ndindex(residual.shape):
        r = residual[idx]
        if (r != 0) if exact else (abs(r) > tol):
            out.append(Violation(name, idx, r))
            if limit is not None and len(out) >= limit:
                break
    return out


def _four_slot_residuals(T: np.ndarray, prefix: str) -> list[tuple[str, np.ndarray]]:
    # T has 4 leading slots and optional trailing ones
    tail = "n" if T.ndim == 5 else ""
    s = "ijkl" + tail
    return [
        (f"{prefix}pair symmetry R(x,y,z,w)=R(z,w,x,y)", T - np.einsum(f"klij{tail}->{s}", T)),
        (f"{prefix}antisymmetry R(x,y,z,w)=-R(y,x,z,w)", T + np.einsum(f"jikl{tail}->{s}", T)),
        (
            f"{prefix}first Bianchi",
            T + np.einsum(f"jkil{tail}->{s}", T) + np.einsum(f"kijl{tail}->{s}", T),
        ),
    ]


def validate_acst(
    R: CurvatureTensor, tol: float = DEFAULT_TOL, limit: int | None = None
) -> list[Violation]:
    """Violations of the curvature symmetries; empty iff ``R`` is an algebraic curvature tensor."""
    out = []
    for name, res in _four_slot_residuals(R.components, ""):
        out.extend(_collect(name, res, tol, limit))
    return out


def validate_acdt(
    D: CovDerivTensor, tol: float = DEFAULT_TOL, limit: int | None = None
) -> list[Violation]:
    out = []
    T = D.components
    for name, res in _four_slot_residuals(T, "") :
        out.extend(_collect(name, res, tol, limit))
    second = (
        T
        + np.einsum("ijlnk->ijkln", T)
        + np.einsum("ijnkl->ijkln", T)
    )
    out.extend(_collect("second Bianchi (cyclic in last three slots)", second, tol, limit))
    return out


# ----------------------------------------------------------- constructions


def _form_matrix(phi: LinearMap) -> np.ndarray:
    # F[i, l] = (phi e_i, e_l)
    eps = phi.sig.eps_array(phi.exact)
    return (eps[:, None] * phi.entries).T


def build_R_phi(phi: LinearMap) -> CurvatureTensor:
    """``R_phi(x,y,z,w) = (phi x, w)(phi y, z) - (phi x, z)(phi y, w)``."""
    if not is_self_adjoint(phi):
        raise ValueError("phi must be self-adjoint")
    F = _form_matrix(phi)
    comps = np.einsum("il,jk->ijkl", F, F) - np.einsum("ik,jl->ijkl", F, F)
    return CurvatureTensor(comps, phi.sig)


def build_constant_curvature(kappa, sig: Signature) -> CurvatureTensor:
    return build_R_phi(LinearMap.identity(sig)).scale(kappa)


def build_Phi_a(p: int, q: int, a: int) -> LinearMap:
    """Skew-adjoint ``Phi_a`` on the basis ``e_1^-..e_p^-, e_1^+..e_q^+``."""
    if a < 1 or 2 * a > p:
        raise ValueError(f"need 1 <= a and 2a <= p, got a={a}, p={p}")
    if p > q:
        raise ValueError(f"need p <= q, got p={p}, q={q}")
    sig = Signature(p, q)
    M = zeros_exact((sig.m, sig.m))

    def minus(k):  # e_k^-, 1-based
        return k - 1

    def plus(k):
        return p + k - 1

    for k in range(1, 2 * a + 1):
        for sign, col in ((-1, minus(k)), (1, plus(k))):
            if k % 2 == 1:
                i = (k + 1) // 2
                target, s = 2 * i, sign
            else:
                i = k // 2
                target, s = 2 * i - 1, -sign
            M[minus(target), col] += s
            M[plus(target), col] += s
    return LinearMap(M, sig)


def build_R_a(p: int, q: int, a: int) -> CurvatureTensor:
    """``R_a(x,y)z = (y,Phi z)Phi x - (x,Phi z)Phi y - 2(x,Phi y)Phi z``, lowered."""
    Phi = build_Phi_a(p, q, a)
    eps = Phi.sig.eps_array()
    S = eps[:, None] * Phi.entries  # S[i, j] = (e_i, Phi e_j)
    comps = (
        np.einsum("jk,li->ijkl", S, S)
        - np.einsum("ik,lj->ijkl", S, S)
        - 2 * np.einsum("ij,lk->ijkl", S, S)
    )
    return CurvatureTensor(comps, Phi.sig)


def random_self_adjoint(sig: Signature, rng: np.random.Generator, bound: int = 3) -> LinearMap:
    """``eta S`` for a random symmetric integer matrix ``S``."""
    m = sig.m
    S = rng.integers(-bound, bound + 1, size=(m, m))
    S = np.triu(S) + np.triu(S, 1).T
    eps = np.array(sig.eps)
    return LinearMap(exact_array(eps[:, None] * S), sig)


# ------------------------------------------------------------- nilpotency


def _endomorphism_stack(R: CurvatureTensor) -> np.ndarray:
    # E[i, j, a, b]: matrix of R(e_i, e_j), entry (a, b)
    eps = R.sig.eps_array(R.exact)
    return np.einsum("ijba,a->ijab", R.components, eps)


def two_nilpotent_acst(R: CurvatureTensor, tol: float = DEFAULT_TOL) -> bool:
    """``R(x1,x2) R(x3,x4) = 0`` checked on all basis tuples (enough by multilinearity)."""
    E = _endomorphism_stack(R)
    prod = np.einsum("ijab,klbc->ijklac", E, E, optimize=True)
    if R.exact:
        return all(v == 0 for v in prod.reshape(-1))
    return bool(np.all(np.abs(prod) <= tol))


def two_nilpotent_acdt(D: CovDerivTensor, tol: float = DEFAULT_TOL) -> bool:
    """All products ``R_{x1}(x2,x3) R_{x4}(x5,x6)`` vanish on basis tuples."""
    eps = D.sig.eps_array(D.exact)
    m = D.m
    # E[n, i, j, a, b] = matrix of R_{e_n}(e_i, e_j)
    E = np.einsum("ijban,a->nijab", D.components, eps).reshape(m**3, m, m)
    flat = E.reshape(m**3 * m, m)  # rows (t, a), cols b
    for t in range(m**3):
        # product E[s] @ E[t] for all s at once
        prod = flat.dot(E[t])
        if D.exact:
            if any(v != 0 for v in prod.reshape(-1)):
                return False
        elif np.any(np.abs(prod.astype(float)) > tol):
            return False
    return True


# ---------------------------------------------------------- complex setting


class HermitianStructure:
    """Skew-adjoint isometry ``J`` with ``J^2 = -Id``."""

    def __init__(self, J: LinearMap, tol: float = DEFAULT_TOL):
        sig = J.sig
        if sig.m % 2:
            raise ValueError("a Hermitian almost complex structure needs even dimension")
        if not is_skew_adjoint(J, tol=tol):
            raise ValueError("J must be skew-adjoint")
        if not (J @ J).equals(-LinearMap.identity(sig, J.exact), tol):
            raise ValueError("J must satisfy J^2 = -Id")
        # skew-adjoint with J^2 = -Id already forces (Jx, Jy) = (x, y)
        self.J = J
        self.sig = sig

    @classmethod
    def standard(cls, sig: Signature) -> "HermitianStructure":
        """``e_{2i-1} -> e_{2i}``, ``e_{2i} -> -e_{2i-1}`` within each sign block."""
        if sig.p % 2 or sig.q % 2:
            raise ValueError("standard J needs p and q even")
        M = zeros_exact((sig.m, sig.m))
        for i in range(0, sig.m, 2):
            M[i + 1, i] = mpq(1)
            M[i, i + 1] = mpq(-1)
        return cls(LinearMap(M, sig))


def pullback_by_J(R: CurvatureTensor, H: HermitianStructure) -> CurvatureTensor:
    return R.pullback(H.J.entries)


def almost_complex_identity(R: CurvatureTensor, H: HermitianStructure, tol: float = DEFAULT_TOL) -> bool:
    """``J^* R = R`` componentwise."""
    diff = pullback_by_J(R, H) - R
    return diff.is_zero(tol)


def commutes_on_complex_lines(R: CurvatureTensor, H: HermitianStructure, cfg=None, samples: int = 25) -> bool:
    """Spot check ``J R(pi) = R(pi) J`` on sampled non-degenerate complex lines."""
    from .frames import Sampler, SamplerConfig

    sampler = Sampler(cfg or SamplerConfig(), "complex-line-commutation")
    for _ in range(samples):
        f = sampler.complex_line(H)
        T = R.endomorphism(f.vectors[0], f.vectors[1])
        if not (H.J @ T).equals(T @ H.J):
            return False
    return True


def almost_complex_check(
    R: CurvatureTensor, H: HermitianStructure, cfg=None, samples: int = 25, tol: float = DEFAULT_TOL
) -> bool:
    """Decide ``J^* R = R``; also spot-verify commutation on complex lines.

    The two characterisations are expected to agree; a disagreement means a
    bug somewhere and raises rather than picking one.
    """
    if R.sig != H.sig:
        raise ValueError("signature mismatch between R and J")
    identity = almost_complex_identity(R, H, tol)
    if samples:
        commutes = commutes_on_complex_lines(R, H, cfg, samples)
        if identity and not commutes:
            raise RuntimeError("J*R = R holds but R(pi) fails to commute with J on a complex line")
    return identity
