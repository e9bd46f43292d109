"""Metric families and exact curvature at rational points.

Every metric component is expanded to third order around the evaluation
point; Christoffel symbols, ``R`` and ``nabla R`` then come from the
coordinate formulas with exact rationals.  Conventions:

* ``R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z`` and
  ``R(x,y,z,w) = g(R(x,y)z, w)``, so the unit sphere has ``R = R_Id``.
* ``dx^i o dy^i`` is the symmetrized product, i.e. ``g(d_xi, d_yi) = 1/2``.

The returned tensors are expressed in an orthonormal frame at the point,
timelike vectors first.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np
from gmpy2 import mpq

from .curvature import CovDerivTensor, CurvatureTensor
from .frames import DegenerateSubspace, gram_signature, indefinite_gram_schmidt
from .pseudolin import (
    LinearMap,
    Signature,
    exact_sqrt,
    is_square,
    to_exact,
    zeros_exact,
)
from .polynomial import Poly

JET_ORDER = 3


class DegenerateMetric(ValueError):
    pass


def _embed(p: Poly, nvars: int, offset: int = 0) -> Poly:
    """Regard a polynomial in ``p.nvars`` variables as one in ``nvars`` (shifted by ``offset``)."""
    terms = {}
    for e, c in p.terms.items():
        full = [0] * nvars
        full[offset : offset + len(e)] = e
        terms[tuple(full)] = c
    return Poly(nvars, terms)


class MetricFamily:
    """A metric on coordinates ``self.names`` given by polynomial/rational entries."""

    tag = "metric"
    names: list[str]

    @property
    def dim(self) -> int:
        return len(self.names)

    def signature(self) -> Signature:
        raise NotImplementedError

    def jets(self, point, order: int = JET_ORDER) -> list[list[Poly]]:
        """Taylor expansions of ``g_{mu nu}`` in the displacement from ``point``."""
        raise NotImplementedError

    def explicit_frame(self, point, G) -> np.ndarray | None:
        return None

    def describe(self) -> dict:
        return {"family": self.tag}


class NeutralMetric(MetricFamily):
    """``g_psi + g_{a,b}`` on ``R^{2u} x R^{(a,b)}``.

    Coordinates ``x1..xu, y1..yu, w1..w_{a+b}`` (``w1..wa`` timelike).  The
    entries ``psi`` may depend on every coordinate, which also covers the
    affine family where ``psi_ij = -2 sum_k y_k Gamma_ij^k(x)``.
    """

    tag = "PsiAB"

    def __init__(self, psi, u: int, a: int = 0, b: int = 0, tag: str | None = None, source=None):
        if u < 1 or a < 0 or b < 0:
            raise ValueError("need u >= 1, a >= 0, b >= 0")
        self.u, self.a, self.b = u, a, b
        self.names = (
            [f"x{i + 1}" for i in range(u)]
            + [f"y{i + 1}" for i in range(u)]
            + [f"w{i + 1}" for i in range(a + b)]
        )
        n = self.dim
        self.psi = [[_embed(psi[i][j], n) if psi[i][j].nvars != n else psi[i][j] for j in range(u)] for i in range(u)]
        for i in range(u):
            for j in range(u):
                if self.psi[i][j] != self.psi[j][i]:
                    raise ValueError("psi must be symmetric")
        if tag:
            self.tag = tag
        self.source = source or {}

    def signature(self) -> Signature:
        return Signature(self.u + self.a, self.u + self.b)

    def jets(self, point, order: int = JET_ORDER):
        n, u = self.dim, self.u
        half = Poly.const(mpq(1, 2), n)
        g = [[Poly(n) for _ in range(n)] for _ in range(n)]
        for i in range(u):
            for j in range(u):
                g[i][j] = self.psi[i][j].taylor(point, order)
            g[i][u + i] = g[u + i][i] = half
        for k in range(self.a + self.b):
            g[2 * u + k][2 * u + k] = Poly.const(-1 if k < self.a else 1, n)
        return g

    def explicit_frame(self, point, G) -> np.ndarray:
        """``e_i^-+ = X_i -+ d_yi`` with ``X_i = d_xi - sum_j psi_ij(P) d_yj``, plus the flat basis."""
        u, n = self.u, self.dim
        psiP = [[self.psi[i][j](point) for j in range(u)] for i in range(u)]
        cols_minus, cols_plus = [], []
        for i in range(u):
            X = zeros_exact(n)
            X[i] = mpq(1)
            for j in range(u):
                X[u + j] -= psiP[i][j]
            Y = zeros_exact(n)
            Y[u + i] = mpq(1)
            cols_minus.append(X - Y)
            cols_plus.append(X + Y)
        flat = []
        for k in range(self.a + self.b):
            v = zeros_exact(n)
            v[2 * u + k] = mpq(1)
            flat.append(v)
        cols = cols_minus + flat[: self.a] + cols_plus + flat[self.a :]
        return np.array(cols, dtype=object).T

    def describe(self) -> dict:
        return dict(self.source, family=self.tag, u=self.u, a=self.a, b=self.b)


def psi_ab(psi, u: int, a: int = 0, b: int = 0) -> NeutralMetric:
    return NeutralMetric(psi, u, a, b, "PsiAB", {"psi": [[p.to_str() for p in row] for row in psi]})


def fab(f: Poly, a: int = 0, b: int = 0) -> NeutralMetric:
    """``g_{f,a,b}`` with ``psi = df o df`` for ``f`` a polynomial in ``x1..xu``."""
    u = f.nvars
    if u < 1:
        raise ValueError("f needs at least one variable")
    df = [f.diff(i) for i in range(u)]
    psi = [[df[i] * df[j] for j in range(u)] for i in range(u)]
    return NeutralMetric(psi, u, a, b, "FAB", {"f": f.to_str()})


def affine_nabla(gamma: dict, u: int) -> NeutralMetric:
    """``ds^2 = sum dx^i o dy^i - 2 sum y_k Gamma_ij^k(x) dx^i o dx^j`` (torsion free).

    ``gamma`` maps 0-based ``(i, j, k)`` to a polynomial in ``x1..xu``;
    entries given only for ``(i, j)`` are mirrored to ``(j, i)``.
    """
    n = 2 * u
    full = dict(gamma)
    for (i, j, k), p in gamma.items():
        if (j, i, k) in gamma and gamma[(j, i, k)] != p:
            raise ValueError("connection must be torsion free (Gamma_ij^k = Gamma_ji^k)")
        full[(j, i, k)] = p
    psi = [[Poly(n) for _ in range(u)] for _ in range(u)]
    for (i, j, k), p in full.items():
        psi[i][j] = psi[i][j] + Poly.const(-2, n) * Poly.var(u + k, n) * _embed(p, n)
    src = {"gamma": {f"{i + 1},{j + 1},{k + 1}": p.to_str() for (i, j, k), p in gamma.items()}}
    return NeutralMetric(psi, u, 0, 0, "AffineNabla", src)


class Warped(MetricFamily):
    """``eps dt^2 + f(t) ds_kappa^2`` with ``f = eps kappa t^2 + A t + B``.

    The fibre metric is ``4|dz|^2 / (1 + kappa |z|^2)^2`` on coordinates
    ``z1..zn`` (constant curvature ``kappa``).  An exact orthonormal frame
    needs ``f(t)`` to be the square of a rational at the evaluation point.
    """

    tag = "Warped"

    def __init__(self, eps: int, kappa, A, B, fiber_dim: int):
        if eps not in (1, -1):
            raise ValueError("eps must be +1 or -1")
        if fiber_dim < 1:
            raise ValueError("fiber_dim must be >= 1")
        self.eps = eps
        self.kappa, self.A, self.B = to_exact(kappa), to_exact(A), to_exact(B)
        if self.A**2 - 4 * eps * self.kappa * self.B == 0:
            raise ValueError("A^2 - 4 eps kappa B must be nonzero")
        self.fiber_dim = fiber_dim
        self.names = ["t"] + [f"z{i + 1}" for i in range(fiber_dim)]
        n = self.dim
        t = Poly.var(0, n)
        self.f = self.eps * self.kappa * t * t + self.A * t + Poly.const(self.B, n)
        self.conformal_den = Poly.const(1, n)
        for i in range(fiber_dim):
            z = Poly.var(1 + i, n)
            self.conformal_den = self.conformal_den + self.kappa * z * z

    def signature(self) -> Signature:
        return Signature(1, self.fiber_dim) if self.eps < 0 else Signature(0, self.fiber_dim + 1)

    def jets(self, point, order: int = JET_ORDER):
        n = self.dim
        fP = self.f(point)
        if fP <= 0:
            raise DegenerateMetric(f"f(t) = {fP} must be positive at the evaluation point")
        inv = self.conformal_den.taylor(point, order).series_inverse(order)
        fiber = (self.f.taylor(point, order) * Poly.const(4, n) * inv * inv).truncate(order)
        g = [[Poly(n) for _ in range(n)] for _ in range(n)]
        g[0][0] = Poly.const(self.eps, n)
        for i in range(1, n):
            g[i][i] = fiber
        return g

    def describe(self) -> dict:
        return {
            "family": self.tag,
            "eps": self.eps,
            "kappa": str(self.kappa),
            "A": str(self.A),
            "B": str(self.B),
            "fiber": self.fiber_dim,
        }


class GeneralMetric(MetricFamily):
    """Arbitrary symmetric matrix of polynomials or ``(numerator, denominator)`` pairs."""

    tag = "General"

    def __init__(self, entries, names: list[str]):
        self.names = list(names)
        self.entries = entries

    def signature(self) -> Signature:
        raise NotImplementedError("signature of a general metric depends on the point")

    def jets(self, point, order: int = JET_ORDER):
        out = []
        for row in self.entries:
            jr = []
            for e in row:
                if isinstance(e, tuple):
                    num, den = e
                    jr.append((num.taylor(point, order) * den.taylor(point, order).series_inverse(order)).truncate(order))
                else:
                    jr.append(e.taylor(point, order))
            out.append(jr)
        return out


# ------------------------------------------------------------ computation


def _inverse_exact(G: np.ndarray) -> np.ndarray:
    n = G.shape[0]
    A = [[mpq(v) for v in row] + [mpq(1 if i == j else 0) for j in range(n)] for i, row in enumerate(G)]
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            raise DegenerateMetric("metric is degenerate at the evaluation point")
        A[c], A[piv] = A[piv], A[c]
        pv = A[c][c]
        A[c] = [v / pv for v in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [vr - f * vc for vr, vc in zip(A[r], A[c])]
    return np.array([row[n:] for row in A], dtype=object)


def _derivative_arrays(jets, n: int):
    """Partial derivatives of ``g`` at the point: ``G, dG[a], ddG[a,b], dddG[a,b,c]``."""
    G = zeros_exact((n, n))
    dG = zeros_exact((n, n, n))
    ddG = zeros_exact((n, n, n, n))
    dddG = zeros_exact((n, n, n, n, n))
    for mu in range(n):
        for nu in range(n):
            T = jets[mu][nu]
            for e, c in T.terms.items():
                deg = sum(e)
                idx = [i for i, k in enumerate(e) for _ in range(k)]
                weight = c
                for k in e:
                    weight *= factorial(k)
                if deg == 0:
                    G[mu, nu] = c
                elif deg == 1:
                    dG[idx[0], mu, nu] = weight
                elif deg == 2:
                    for a, b in {(idx[0], idx[1]), (idx[1], idx[0])}:
                        ddG[a, b, mu, nu] = weight
                elif deg == 3:
                    from itertools import permutations

                    for a, b, cc in set(permutations(idx)):
                        dddG[a, b, cc, mu, nu] = weight
    return G, dG, ddG, dddG


def _einsum(spec, *ops):
    return np.einsum(spec, *ops, optimize=True)


@dataclass
class PointEval:
    point: tuple
    signature: Signature
    g: np.ndarray
    g_inv: np.ndarray
    christoffel: np.ndarray  # [rho, mu, nu] = Gamma_{mu nu}^rho
    frame: np.ndarray  # columns: orthonormal frame in coordinates
    R_coord: np.ndarray
    nabla_R_coord: np.ndarray | None
    R: CurvatureTensor
    nabla_R: CovDerivTensor | None


def _coordinate_curvature(jets, n: int, with_nabla: bool = True):
    G, dG, ddG, dddG = _derivative_arrays(jets, n)
    Gi = _inverse_exact(G)
    half = mpq(1, 2)
    # lowered Christoffel L[mu, nu, s] = 1/2 (d_mu g_{nu s} + d_nu g_{mu s} - d_s g_{mu nu})
    L = half * (dG + _einsum("nms->mns", dG) - _einsum("smn->mns", dG))
    dL = half * (ddG + _einsum("anms->amns", ddG) - _einsum("asmn->amns", ddG))
    dGi = -_einsum("rs,ast,tu->aru", Gi, dG, Gi)
    Gam = _einsum("rs,mns->rmn", Gi, L)
    dGam = _einsum("ars,mns->armn", dGi, L) + _einsum("rs,amns->armn", Gi, dL)
    # R^r_{s m n} = d_m Gam^r_{n s} - d_n Gam^r_{m s} + Gam^r_{m l} Gam^l_{n s} - Gam^r_{n l} Gam^l_{m s}
    Rup = (
        _einsum("mrns->rsmn", dGam)
        - _einsum("nrms->rsmn", dGam)
        + _einsum("rml,lns->rsmn", Gam, Gam)
        - _einsum("rnl,lms->rsmn", Gam, Gam)
    )
    # R(d_m, d_n, d_s, d_r) = g_{r t} R^t_{s m n}
    Rlow = _einsum("rt,tsmn->mnsr", G, Rup)
    if not with_nabla:
        return G, Gi, Gam, Rlow, None
    ddL = half * (dddG + _einsum("abnms->abmns", dddG) - _einsum("absmn->abmns", dddG))
    ddGi = (
        -_einsum("rs,abst,tu->abru", Gi, ddG, Gi)
        + _einsum("rs,ast,tv,bvw,wu->abru", Gi, dG, Gi, dG, Gi)
        + _einsum("rs,bst,tv,avw,wu->abru", Gi, dG, Gi, dG, Gi)
    )
    ddGam = (
        _einsum("abrs,mns->abrmn", ddGi, L)
        + _einsum("ars,bmns->abrmn", dGi, dL)
        + _einsum("brs,amns->abrmn", dGi, dL)
        + _einsum("rs,abmns->abrmn", Gi, ddL)
    )
    dRup = (
        _einsum("amrns->arsmn", ddGam)
        - _einsum("anrms->arsmn", ddGam)
        + _einsum("arml,lns->arsmn", dGam, Gam)
        + _einsum("rml,alns->arsmn", Gam, dGam)
        - _einsum("arnl,lms->arsmn", dGam, Gam)
        - _einsum("rnl,alms->arsmn", Gam, dGam)
    )
    dRlow = _einsum("art,tsmn->amnsr", dG, Rup) + _einsum("rt,atsmn->amnsr", G, dRup)
    # (nabla_a R)_{m n s r} = d_a R_{mnsr} - Gam^l_{a m} R_{l n s r} - ... (four slots)
    nab = (
        dRlow
        - _einsum("lam,lnsr->amnsr", Gam, Rlow)
        - _einsum("lan,mlsr->amnsr", Gam, Rlow)
        - _einsum("las,mnlr->amnsr", Gam, Rlow)
        - _einsum("lar,mnsl->amnsr", Gam, Rlow)
    )
    D = _einsum("amnsr->mnsra", nab)
    return G, Gi, Gam, Rlow, D


def _gram_schmidt_frame(G: np.ndarray, pivot_order=None) -> np.ndarray:
    n = G.shape[0]
    basis = []
    for i in range(n):
        v = zeros_exact(n)
        v[i] = mpq(1)
        basis.append(v)
    try:
        vecs, norms = indefinite_gram_schmidt(basis, Signature(0, n), pivot_order, form=G)
    except DegenerateSubspace as exc:
        raise DegenerateMetric(str(exc)) from None
    cols = []
    for v, nrm in zip(vecs, norms):
        if not is_square(abs(nrm)):
            raise DegenerateMetric(
                f"no rational orthonormal frame: pivot norm {nrm} is not +-(rational square);"
                " choose another point or pivot order"
            )
        cols.append((nrm < 0, v / exact_sqrt(abs(nrm))))
    timelike = [v for neg, v in cols if neg]
    spacelike = [v for neg, v in cols if not neg]
    return np.array(timelike + spacelike, dtype=object).T


def evaluate(mf: MetricFamily, point, pivot_order=None, with_nabla: bool = True) -> PointEval:
    """All exact curvature data of ``mf`` at ``point``.

    ``pivot_order`` forces the Gram-Schmidt frame (with that pivot order)
    instead of a family's explicit frame.
    """
    pt = tuple(to_exact(v) for v in point)
    n = mf.dim
    if len(pt) != n:
        raise ValueError(f"point has {len(pt)} coordinates, metric has {n} ({', '.join(mf.names)})")
    jets = mf.jets(pt, JET_ORDER)
    G, Gi, Gam, Rlow, D = _coordinate_curvature(jets, n, with_nabla)
    E = None if pivot_order is not None else mf.explicit_frame(pt, G)
    if E is None:
        E = _gram_schmidt_frame(G, pivot_order)
    neg, pos, zero = gram_signature(G)
    sig = Signature(neg, pos)
    eta = _einsum("mi,mn,nj->ij", E, G, E)
    if not np.all(eta == sig.metric()):
        raise ArithmeticError("frame is not orthonormal in canonical order")
    R = CurvatureTensor(_einsum("abcd,ai,bj,ck,dl->ijkl", Rlow, E, E, E, E), sig)
    nR = None
    if D is not None:
        nR = CovDerivTensor(_einsum("abcde,ai,bj,ck,dl,en->ijkln", D, E, E, E, E, E), sig)
    return PointEval(pt, sig, G, Gi, Gam, E, Rlow, D, R, nR)


def christoffel(mf: MetricFamily, point) -> np.ndarray:
    """``Gamma[rho, mu, nu] = Gamma_{mu nu}^rho`` (Levi-Civita) at ``point``."""
    pt = tuple(to_exact(v) for v in point)
    _, _, Gam, _, _ = _coordinate_curvature(mf.jets(pt, 2), mf.dim, with_nabla=False)
    return Gam


def curvature_at(mf: MetricFamily, point, pivot_order=None) -> CurvatureTensor:
    return evaluate(mf, point, pivot_order, with_nabla=False).R


def nabla_r_at(mf: MetricFamily, point, pivot_order=None) -> CovDerivTensor:
    return evaluate(mf, point, pivot_order).nabla_R


# ------------------------------------------------------------ Ricci etc.


def ricci(R: CurvatureTensor) -> LinearMap:
    """Ricci operator ``rho`` with ``(rho x, y) = sum_i eps_i R(e_i, x, y, e_i)``."""
    eps = R.sig.eps_array(R.exact)
    Ric = np.einsum("ixyi,i->xy", R.components, eps)
    return LinearMap(eps[:, None] * Ric.T, R.sig)


def einstein_check(R: CurvatureTensor, tol: float = 1e-8):
    """``("ricci-flat", 0)``, ``("einstein", c)`` or ``("neither", None)``."""
    rho = ricci(R)
    if rho.is_zero(tol):
        return "ricci-flat", mpq(0) if R.exact else 0.0
    c = rho.entries[0, 0]
    if rho.equals(LinearMap.identity(R.sig, R.exact).scale(c), tol):
        return "einstein", c
    return "neither", None


def psi_membership(psi, u: int, cfg=None, points: int = 5, vectors: int = 10) -> bool:
    """Monte-Carlo test that ``J_psi(v)`` on the x-block is PSD of rank ``u - 1``.

    ``J_psi(v)`` is evaluated as the form ``(i, j) -> R(d_xi, v, v, d_xj)``
    for ``v`` in ``span{d_x}``, at sampled rational points.  A single
    counterexample decides ``False``.
    """
    from .frames import Sampler, SamplerConfig

    mf = NeutralMetric(psi, u)
    sampler = Sampler(cfg or SamplerConfig(), "psi-membership")
    n = mf.dim
    for _ in range(points):
        rng = sampler.rng()
        N = sampler.cfg.grid
        pt = [mpq(int(rng.integers(-N, N + 1)), N) for _ in range(n)]
        jets = mf.jets(pt, 2)
        _, _, _, Rlow, _ = _coordinate_curvature(jets, n, with_nabla=False)
        block = Rlow[:u, :u, :u, :u]
        for _ in range(vectors):
            v = sampler._grid_vector(rng, u)
            M = np.einsum("iabj,a,b->ij", block, v, v)
            if gram_signature(M) != (0, u - 1, 1):
                return False
    return True


def random_cov_deriv(sig: Signature, rng: np.random.Generator, bound: int = 3, terms: int = 3) -> CovDerivTensor:
    """``nabla R`` at the origin of ``eta + h`` with ``h`` a random symmetric cubic perturbation.

    Since ``h`` has no terms below degree three, ``g(0) = eta`` and the
    coordinate frame is already orthonormal; ``nabla R(0)`` is then a
    generic-looking algebraic covariant derivative curvature tensor.
    """
    n = sig.m
    names = [f"u{i + 1}" for i in range(n)]
    entries = [[Poly(n) for _ in range(n)] for _ in range(n)]
    for mu in range(n):
        entries[mu][mu] = Poly.const(sig.eps[mu], n)
    for mu in range(n):
        for nu in range(mu, n):
            h = Poly(n)
            for _ in range(terms):
                e = [0] * n
                for i in rng.choice(n, size=3, replace=True):
                    e[int(i)] += 1
                c = int(rng.integers(-bound, bound + 1))
                h = h + Poly(n, {tuple(e): mpq(c)})
            entries[mu][nu] = entries[mu][nu] + h
            entries[nu][mu] = entries[mu][nu]
    return evaluate(GeneralMetric(entries, names), [0] * n).nabla_R
