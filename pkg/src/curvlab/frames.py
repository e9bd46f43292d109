"""Seeded sampling of pseudo-sphere points and non-degenerate frames.

All samples are exact rationals.  Unit vectors are produced exactly: a grid
vector ``w`` with a square norm is scaled directly, otherwise a canonical
unit vector ``e`` is reflected in ``w``-perpendicular, ``e - 2(e,w)/(w,w) w``,
which stays on the same pseudo-sphere.  Frames come from canonical frames
moved by random products of such reflections, so they are orthonormal
without square roots.  Grid vectors are often sparse on purpose: special
(lower-dimensional) strata such as kernels of curvature maps then get
positive sampling probability.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field

import numpy as np
from gmpy2 import mpq

from .pseudolin import (
    Signature,
    exact_sqrt,
    gram,
    inner,
    is_square,
    nullspace_exact,
    scalar_str,
    zeros_exact,
)


class DegenerateSubspace(ValueError):
    pass


class SamplingExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 0
    degenerate_floor: mpq = field(default_factory=lambda: mpq(1, 2**20))
    max_rejects: int = 10_000
    grid: int = 4
    sparse_prob: float = 0.5
    coordinate_prob: float = 0.25

    def __post_init__(self):
        if self.degenerate_floor <= 0:
            raise ValueError("degenerate_floor must be positive")
        if self.grid < 1:
            raise ValueError("grid must be >= 1")

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "degenerate_floor": scalar_str(self.degenerate_floor),
            "max_rejects": self.max_rejects,
            "grid": self.grid,
            "sparse_prob": self.sparse_prob,
            "coordinate_prob": self.coordinate_prob,
        }


@dataclass(frozen=True)
class FrameSample:
    """Ordered orthogonal frame of a non-degenerate subspace.

    ``norm_sq[i] = (v_i, v_i)``; an exactly orthonormal frame has all
    ``norm_sq`` equal to +-1.  Otherwise normalisation is deferred and
    operators use the documented scaling laws.
    """

    sig_ambient: Signature
    vectors: tuple
    norm_sq: tuple
    sig_sub: tuple
    oriented: bool = True

    @property
    def k(self) -> int:
        return len(self.vectors)

    @property
    def orthonormal(self) -> bool:
        return all(abs(n) == 1 for n in self.norm_sq)

    def gram(self) -> np.ndarray:
        return gram(list(self.vectors), self.sig_ambient)

    def reversed(self) -> "FrameSample":
        """Same subspace, first two vectors swapped (opposite orientation)."""
        vecs = list(self.vectors)
        norms = list(self.norm_sq)
        vecs[0], vecs[1] = vecs[1], vecs[0]
        norms[0], norms[1] = norms[1], norms[0]
        return FrameSample(self.sig_ambient, tuple(vecs), tuple(norms), self.sig_sub, self.oriented)

    def to_json(self) -> dict:
        return {
            "signature": list(self.sig_sub),
            "vectors": [[scalar_str(c) for c in v] for v in self.vectors],
            "norm_sq": [scalar_str(n) for n in self.norm_sq],
            "oriented": self.oriented,
        }


def admissible(r: int, s: int, sig: Signature) -> bool:
    return 0 <= r <= sig.p and 0 <= s <= sig.q and 1 <= r + s <= sig.m - 1


def admissible_types(sig: Signature) -> list[tuple[int, int]]:
    return [(r, s) for r in range(sig.p + 1) for s in range(sig.q + 1) if admissible(r, s, sig)]


# ---------------------------------------------------------- exact helpers


def gram_signature(G: np.ndarray) -> tuple[int, int, int]:
    """``(negative, positive, zero)`` inertia of a symmetric matrix by exact congruence."""
    A = [[mpq(v) for v in row] for row in G]
    n = len(A)
    active = list(range(n))
    neg = pos = 0
    while active:
        piv = next((i for i in active if A[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i < j and A[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # row/col i += row/col j, giving A[i][i] = 2 A[i][j] != 0
            for c in range(n):
                A[i][c] += A[j][c]
            for r in range(n):
                A[r][i] += A[r][j]
            piv = i
        d = A[piv][piv]
        if d < 0:
            neg += 1
        else:
            pos += 1
        active.remove(piv)
        for r in active:
            f = A[r][piv] / d
            if f:
                for c in range(n):
                    A[r][c] -= f * A[piv][c]
        for r in active:
            A[r][piv] = A[piv][r] = mpq(0)
    return neg, pos, n - neg - pos


def indefinite_gram_schmidt(vectors, sig: Signature, pivot_order=None, form=None):
    """Orthogonalize a spanning set of a non-degenerate subspace.

    Picks, in ``pivot_order``, the first remaining vector of nonzero norm;
    when all remaining ones are null but two pair nontrivially, their sum is
    used instead.  Zero vectors (dependencies) are dropped.  Returns
    ``(orthogonal_vectors, norm_squares)``; raises ``DegenerateSubspace``.
    ``form`` replaces the canonical inner product by ``x^T form y``.
    """
    if form is None:
        def ip(x, y):
            return inner(x, y, sig)
    else:
        def ip(x, y):
            return x.dot(form.dot(y))
    order = list(pivot_order) if pivot_order is not None else list(range(len(vectors)))
    work = [np.array(vectors[i], dtype=object) for i in order]
    out, norms = [], []
    while True:
        work = [w for w in work if any(c != 0 for c in w)]
        if not work:
            break
        idx = next((i for i, w in enumerate(work) if ip(w, w) != 0), None)
        if idx is None:
            pair = next(
                (
                    (i, j)
                    for i in range(len(work))
                    for j in range(i + 1, len(work))
                    if ip(work[i], work[j]) != 0
                ),
                None,
            )
            if pair is None:
                raise DegenerateSubspace("remaining vectors span a null subspace")
            i, j = pair
            work[i] = work[i] + work[j]
            idx = i
        u = work.pop(idx)
        n = ip(u, u)
        out.append(u)
        norms.append(n)
        work = [w - (ip(w, u) / n) * u for w in work]
    return out, norms


def normalize_exact(vectors, norms):
    """Scale to unit length wherever the norm is a rational square."""
    vs, ns = [], []
    for v, n in zip(vectors, norms):
        if is_square(abs(n)):
            c = exact_sqrt(abs(n))
            vs.append(v / c)
            ns.append(mpq(1) if n > 0 else mpq(-1))
        else:
            vs.append(v)
            ns.append(n)
    return vs, ns


def reflect(x: np.ndarray, w: np.ndarray, sig: Signature, ww=None) -> np.ndarray:
    """Reflection in the hyperplane ``w^perp`` (``ww = (w, w)`` if already known)."""
    c = inner(x, w, sig)
    if not c:
        return x
    return x - (2 * c / (inner(w, w, sig) if ww is None else ww)) * w


# ---------------------------------------------------------------- sampler


class Sampler:
    """Deterministic sample stream.

    Draw number ``k`` of stream ``name`` uses its own generator seeded by
    ``(seed, crc32(name), k)``, so draws are independent of evaluation
    order and a longer budget extends a shorter one.
    """

    def __init__(self, cfg: SamplerConfig | None = None, stream: str = "default"):
        self.cfg = cfg or SamplerConfig()
        self.stream = stream
        self._key = zlib.crc32(stream.encode())
        self.count = 0

    def rng(self, index: int | None = None) -> np.random.Generator:
        if index is None:
            index = self.count
            self.count += 1
        ss = np.random.SeedSequence(entropy=self.cfg.seed % 2**64, spawn_key=(self._key, index))
        return np.random.default_rng(ss)

    # -- primitive draws

    def _grid_vector(self, rng, m: int) -> np.ndarray:
        N = self.cfg.grid
        while True:
            v = zeros_exact(m)
            if rng.random() < self.cfg.sparse_prob:
                size = int(rng.integers(1, m + 1))
                support = rng.choice(m, size=size, replace=False)
                for i in support:
                    k = int(rng.integers(1, N + 1)) * (1 if rng.random() < 0.5 else -1)
                    v[int(i)] = mpq(k, N)
            else:
                for i in range(m):
                    v[i] = mpq(int(rng.integers(-N, N + 1)), N)
            if any(c != 0 for c in v):
                return v

    def _nonnull_vector(self, rng, sig: Signature) -> tuple[np.ndarray, mpq]:
        for _ in range(self.cfg.max_rejects):
            w = self._grid_vector(rng, sig.m)
            n = inner(w, w, sig)
            if abs(n) >= self.cfg.degenerate_floor:
                return w, n
        raise SamplingExhausted(f"no non-null vector after {self.cfg.max_rejects} draws")

    def _unit(self, rng, sig: Signature, sign: int) -> np.ndarray:
        w, n = self._nonnull_vector(rng, sig)
        if (n > 0) == (sign > 0) and is_square(abs(n)):
            return w / exact_sqrt(abs(n))
        same = [i for i in range(sig.m) if sig.eps[i] == sign]
        in_support = [i for i in same if w[i] != 0]
        pool = in_support or same
        e = sig.basis(int(pool[int(rng.integers(len(pool)))]))
        return reflect(e, w, sig)

    def _isometry_images(self, rng, sig: Signature, vectors: list) -> list:
        count = int(rng.integers(1, sig.m + 2))
        for _ in range(count):
            w, ww = self._nonnull_vector(rng, sig)
            vectors = [reflect(v, w, sig, ww) for v in vectors]
        return vectors

    # -- public draws

    def unit(self, sig: Signature, sign: int, index: int | None = None) -> np.ndarray:
        if sign > 0 and sig.q < 1:
            raise ValueError("spacelike unit vectors need q >= 1")
        if sign < 0 and sig.p < 1:
            raise ValueError("timelike unit vectors need p >= 1")
        return self._unit(self.rng(index), sig, 1 if sign > 0 else -1)

    def frame(
        self,
        sig: Signature,
        r: int,
        s: int,
        oriented: bool = True,
        index: int | None = None,
        method: str = "mixed",
    ) -> FrameSample:
        # the whole space (r+s = m) is allowed here; only properties need admissibility
        if not (0 <= r <= sig.p and 0 <= s <= sig.q and r + s >= 1):
            raise ValueError(f"no ({r},{s}) subspace in signature {sig}")
        rng = self.rng(index)
        if method == "gram_schmidt":
            return self._frame_gram_schmidt(rng, sig, r, s, oriented)
        if method not in ("mixed", "isometry", "coordinate"):
            raise ValueError(f"unknown frame method {method!r}")
        neg = [int(i) for i in rng.choice(sig.p, size=r, replace=False)] if r else []
        pos = [sig.p + int(i) for i in rng.choice(sig.q, size=s, replace=False)] if s else []
        idx = neg + pos
        rng.shuffle(idx)
        vecs = [sig.basis(i) * (1 if rng.random() < 0.5 else -1) for i in idx]
        coordinate = method == "coordinate" or (
            method == "mixed" and rng.random() < self.cfg.coordinate_prob
        )
        if not coordinate:
            vecs = self._isometry_images(rng, sig, vecs)
        norms = tuple(mpq(sig.eps[i]) for i in idx)
        return FrameSample(sig, tuple(vecs), norms, (r, s), oriented)

    def _frame_gram_schmidt(self, rng, sig, r, s, oriented) -> FrameSample:
        k = r + s
        for _ in range(self.cfg.max_rejects):
            vecs = [self._grid_vector(rng, sig.m) for _ in range(k)]
            if gram_signature(gram(vecs, sig)) != (r, s, 0):
                continue
            ortho, norms = indefinite_gram_schmidt(vecs, sig)
            ortho, norms = normalize_exact(ortho, norms)
            return FrameSample(sig, tuple(ortho), tuple(norms), (r, s), oriented)
        raise SamplingExhausted(f"no ({r},{s}) frame after {self.cfg.max_rejects} draws")

    def complex_line(self, H, index: int | None = None) -> FrameSample:
        sig = H.sig
        rng = self.rng(index)
        signs = ([-1] if sig.p else []) + ([1] if sig.q else [])
        sign = signs[int(rng.integers(len(signs)))]
        x = self._unit(rng, sig, sign)
        Jx = H.J @ x
        n = mpq(sign)
        sub = (2, 0) if sign < 0 else (0, 2)
        return FrameSample(sig, (x, Jx), (n, n), sub, True)


def sample_unit(sig: Signature, sign: int, cfg: SamplerConfig | None = None, index: int = 0) -> np.ndarray:
    return Sampler(cfg, "unit").unit(sig, sign, index)


def sample_frame(
    sig: Signature,
    r: int,
    s: int,
    oriented: bool = True,
    cfg: SamplerConfig | None = None,
    index: int = 0,
    method: str = "mixed",
) -> FrameSample:
    return Sampler(cfg, "frame").frame(sig, r, s, oriented, index, method)


def sample_complex_line(H, cfg: SamplerConfig | None = None, index: int = 0) -> FrameSample:
    return Sampler(cfg, "complex-line").complex_line(H, index)


def complement(f: FrameSample) -> FrameSample:
    """Orthogonal frame of the perpendicular subspace."""
    sig = f.sig_ambient
    eps = np.array([mpq(e) for e in sig.eps], dtype=object)
    C = np.array([eps * v for v in f.vectors], dtype=object)
    basis = nullspace_exact(C)
    if not basis:
        return FrameSample(sig, (), (), (0, 0), False)
    ortho, norms = indefinite_gram_schmidt(basis, sig)
    ortho, norms = normalize_exact(ortho, norms)
    r = sum(1 for n in norms if n < 0)
    return FrameSample(sig, tuple(ortho), tuple(norms), (r, len(norms) - r), False)


def full_frame(sig: Signature) -> FrameSample:
    vecs = tuple(sig.basis(i) for i in range(sig.m))
    return FrameSample(sig, vecs, tuple(mpq(e) for e in sig.eps), (sig.p, sig.q), False)
