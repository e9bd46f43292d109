"""Linear algebra over a vector space with an indefinite inner product.

Exact mode stores entries as ``gmpy2.mpq`` in numpy object arrays; float mode
uses ``float64`` arrays and decides equality/rank against a tolerance.

Index convention: a ``LinearMap`` acts on column vectors, so column ``i`` of
``entries`` is the image of the canonical basis vector ``e_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Sequence

import numpy as np
from gmpy2 import mpq

DEFAULT_TOL = 1e-8


class IllConditionedSpectrum(ValueError):
    """Float-mode eigenvalue clusters are too close to be separated."""


# ---------------------------------------------------------------- scalars


def to_exact(value) -> mpq:
    """Coerce ints, Fractions, mpq and strings like ``"3/4"`` or ``"0.25"``."""
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            return mpq(int(num), int(den))
        return mpq(Fraction(text))
    if isinstance(value, float):
        return mpq(Fraction(value))
    return mpq(value)


def scalar_str(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    value = mpq(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def is_square(value) -> bool:
    value = mpq(value)
    if value < 0:
        return False
    from gmpy2 import is_square as _sq

    return bool(_sq(value.numerator)) and bool(_sq(value.denominator))


def exact_sqrt(value) -> mpq:
    from gmpy2 import isqrt

    value = mpq(value)
    if not is_square(value):
        raise ValueError(f"{scalar_str(value)} is not the square of a rational")
    return mpq(isqrt(value.numerator), isqrt(value.denominator))


def exact_array(data, shape=None) -> np.ndarray:
    arr = np.array(data, dtype=object)
    flat = [to_exact(v) for v in arr.reshape(-1)]
    out = np.empty(len(flat), dtype=object)
    out[:] = flat
    return out.reshape(arr.shape if shape is None else shape)


def zeros_exact(shape) -> np.ndarray:
    out = np.empty(int(np.prod(shape)), dtype=object)
    out[:] = [mpq(0)] * out.size
    return out.reshape(shape)


def is_exact_array(arr: np.ndarray) -> bool:
    return arr.dtype == object


def _is_zero(arr: np.ndarray, tol: float) -> bool:
    if is_exact_array(arr):
        return all(v == 0 for v in arr.reshape(-1))
    return bool(np.all(np.abs(arr) <= tol))


# -------------------------------------------------------------- signature


@dataclass(frozen=True)
class Signature:
    """Signature ``(p, q)``: ``p`` timelike directions first, then ``q`` spacelike."""

    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0 or self.p + self.q < 1:
            raise ValueError(f"invalid signature ({self.p},{self.q})")

    @property
    def m(self) -> int:
        return self.p + self.q

    @property
    def eps(self) -> tuple[int, ...]:
        return (-1,) * self.p + (1,) * self.q

    def eps_array(self, exact: bool = True) -> np.ndarray:
        if exact:
            return exact_array(self.eps)
        return np.array(self.eps, dtype=float)

    def metric(self, exact: bool = True) -> np.ndarray:
        eta = zeros_exact((self.m, self.m)) if exact else np.zeros((self.m, self.m))
        for i, e in enumerate(self.eps):
            eta[i, i] = mpq(e) if exact else float(e)
        return eta

    def basis(self, i: int, exact: bool = True) -> np.ndarray:
        v = zeros_exact(self.m) if exact else np.zeros(self.m)
        v[i] = mpq(1) if exact else 1.0
        return v

    def __str__(self):
        return f"({self.p},{self.q})"


def inner(x: np.ndarray, y: np.ndarray, sig: Signature):
    """Indefinite inner product ``sum_i eps_i x_i y_i``."""
    if len(x) != sig.m or len(y) != sig.m:
        raise ValueError(f"dimension mismatch: {len(x)}, {len(y)} vs m={sig.m}")
    total = 0
    for e, a, b in zip(sig.eps, x, y):
        if a and b:
            total += e * a * b
    return total if not isinstance(total, int) else mpq(total)


def gram(vectors: Sequence[np.ndarray], sig: Signature) -> np.ndarray:
    k = len(vectors)
    exact = all(is_exact_array(np.asarray(v)) for v in vectors)
    G = zeros_exact((k, k)) if exact else np.zeros((k, k))
    for i in range(k):
        for j in range(i, k):
            G[i, j] = G[j, i] = inner(vectors[i], vectors[j], sig)
    return G


# ------------------------------------------------------------- linear map


class LinearMap:
    """Endomorphism of a signature-``(p,q)`` space, given by its matrix."""

    __slots__ = ("entries", "sig")

    def __init__(self, entries, sig: Signature):
        arr = np.asarray(entries)
        if arr.dtype != object and not np.issubdtype(arr.dtype, np.floating):
            arr = exact_array(arr)
        if arr.shape != (sig.m, sig.m):
            raise ValueError(f"matrix shape {arr.shape} does not match m={sig.m}")
        arr.setflags(write=False)
        self.entries = arr
        self.sig = sig

    @classmethod
    def identity(cls, sig: Signature, exact: bool = True) -> "LinearMap":
        return cls(_eye(sig.m, exact), sig)

    @classmethod
    def zero(cls, sig: Signature, exact: bool = True) -> "LinearMap":
        return cls(zeros_exact((sig.m, sig.m)) if exact else np.zeros((sig.m, sig.m)), sig)

    @property
    def exact(self) -> bool:
        return is_exact_array(self.entries)

    @property
    def m(self) -> int:
        return self.sig.m

    def _check(self, other: "LinearMap"):
        if self.sig != other.sig:
            raise ValueError(f"signature mismatch: {self.sig} vs {other.sig}")

    def __matmul__(self, other):
        if isinstance(other, LinearMap):
            self._check(other)
            return LinearMap(self.entries.dot(other.entries), self.sig)
        return self.entries.dot(other)

    def __add__(self, other: "LinearMap") -> "LinearMap":
        self._check(other)
        return LinearMap(self.entries + other.entries, self.sig)

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        self._check(other)
        return LinearMap(self.entries - other.entries, self.sig)

    def __neg__(self) -> "LinearMap":
        return LinearMap(-self.entries, self.sig)

    def scale(self, c) -> "LinearMap":
        c = mpq(c) if self.exact and not isinstance(c, float) else c
        return LinearMap(self.entries * c, self.sig)

    def __pow__(self, k: int) -> "LinearMap":
        out = LinearMap.identity(self.sig, self.exact)
        for _ in range(k):
            out = out @ self
        return out

    def to_float(self) -> "LinearMap":
        return LinearMap(self.entries.astype(float), self.sig)

    def is_zero(self, tol: float = DEFAULT_TOL) -> bool:
        return _is_zero(self.entries, tol)

    def equals(self, other: "LinearMap", tol: float = DEFAULT_TOL) -> bool:
        self._check(other)
        return _is_zero(self.entries - other.entries, tol)

    def __eq__(self, other):
        if not isinstance(other, LinearMap) or self.sig != other.sig:
            return NotImplemented
        return bool(np.all(self.entries == other.entries))

    __hash__ = None

    def __repr__(self):
        rows = ["[" + ", ".join(scalar_str(v) for v in row) + "]" for row in self.entries]
        return f"LinearMap(sig={self.sig}, [{', '.join(rows)}])"

    def to_json(self) -> dict:
        return {
            "p": self.sig.p,
            "q": self.sig.q,
            "entries": [[scalar_str(v) for v in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, data: dict, scalar: str = "exact") -> "LinearMap":
        sig = Signature(int(data["p"]), int(data["q"]))
        arr = exact_array(data["entries"])
        if scalar == "float":
            arr = arr.astype(float)
        return cls(arr, sig)


def _eye(m: int, exact: bool) -> np.ndarray:
    if not exact:
        return np.eye(m)
    out = zeros_exact((m, m))
    for i in range(m):
        out[i, i] = mpq(1)
    return out


def _adjoint_form(T: LinearMap) -> np.ndarray:
    # M[i, j] = (T e_j, e_i); T is self-adjoint iff M is symmetric.
    eps = T.sig.eps_array(T.exact)
    return eps[:, None] * T.entries


def is_self_adjoint(T: LinearMap, sig: Signature | None = None, tol: float = DEFAULT_TOL) -> bool:
    if sig is not None and sig != T.sig:
        raise ValueError("dimension/signature mismatch")
    M = _adjoint_form(T)
    return _is_zero(M - M.T, tol)


def is_skew_adjoint(T: LinearMap, sig: Signature | None = None, tol: float = DEFAULT_TOL) -> bool:
    if sig is not None and sig != T.sig:
        raise ValueError("dimension/signature mismatch")
    M = _adjoint_form(T)
    return _is_zero(M + M.T, tol)


def adjoint(T: LinearMap) -> LinearMap:
    """Adjoint with respect to the indefinite form: ``eta^-1 T^t eta``."""
    eps = T.sig.eps_array(T.exact)
    return LinearMap(eps[:, None] * T.entries.T * eps[None, :], T.sig)


def stabilize(T: LinearMap, extra: int) -> LinearMap:
    """``T (+) 0`` on ``V (+) W`` with ``dim W = extra`` (``W`` taken spacelike)."""
    if extra < 0:
        raise ValueError("extra must be non-negative")
    if extra == 0:
        return T
    m = T.m + extra
    out = zeros_exact((m, m)) if T.exact else np.zeros((m, m))
    out[: T.m, : T.m] = T.entries
    return LinearMap(out, Signature(T.sig.p, T.sig.q + extra))


# ------------------------------------------------------------------ rank


def _integer_rows(arr: np.ndarray) -> list[list[int]]:
    rows = []
    for row in arr:
        vals = [mpq(v) for v in row]
        d = lcm(*(int(v.denominator) for v in vals)) if vals else 1
        rows.append([int(v * d) for v in vals])
    return rows


def rank_exact(arr: np.ndarray) -> int:
    """Rank by fraction-free (Bareiss) elimination on an integer-scaled copy."""
    a = _integer_rows(arr)
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    rank, prev = 0, 1
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        pv = a[rank][col]
        for r in range(rank + 1, nrows):
            arc = a[r][col]
            row_r, row_p = a[r], a[rank]
            for c in range(col + 1, ncols):
                row_r[c] = (row_r[c] * pv - arc * row_p[c]) // prev
            row_r[col] = 0
        prev = pv
        rank += 1
        if rank == nrows:
            break
    return rank


def rank_float(arr: np.ndarray, tol: float = DEFAULT_TOL, scale: float | None = None) -> int:
    if arr.size == 0:
        return 0
    sv = np.linalg.svd(np.asarray(arr, dtype=float), compute_uv=False)
    ref = max(1.0, float(sv[0]) if scale is None else scale)
    return int(np.sum(sv > tol * ref))


def rank(T, tol: float = DEFAULT_TOL, scale: float | None = None) -> int:
    arr = T.entries if isinstance(T, LinearMap) else np.asarray(T)
    if is_exact_array(arr):
        return rank_exact(arr)
    return rank_float(arr, tol, scale)


def nullspace_exact(arr: np.ndarray) -> list[np.ndarray]:
    """Basis of ``{x : arr @ x = 0}`` by reduced row echelon form over Q."""
    a = [[mpq(v) for v in row] for row in arr]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][c]
        a[r] = [v / pv for v in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = zeros_exact(ncols)
        v[fc] = mpq(1)
        for row, pc in enumerate(pivots):
            v[pc] = -a[row][fc]
        basis.append(v)
    return basis


# -------------------------------------------------- characteristic polynomial


def charpoly(T) -> tuple:
    """Coefficients of ``det(t I - T)``, highest degree first (Berkowitz).

    Division-free: only ring operations on the entries, so exact inputs give
    exact output without intermediate fractions beyond the entries' own.
    """
    A = T.entries if isinstance(T, LinearMap) else np.asarray(T)
    n = A.shape[0]
    exact = is_exact_array(A)
    one = mpq(1) if exact else 1.0
    zero = mpq(0) if exact else 0.0
    poly = [one]
    for k in range(n):
        # leading (k+1)x(k+1) block: new row/col index k
        a_kk = A[k, k]
        R = A[k, :k]
        C = A[:k, k]
        Ak = A[:k, :k]
        col = [one, -a_kk]
        v = C
        for _ in range(k):
            col.append(-(R.dot(v) if k else zero))
            v = Ak.dot(v)
        # lower-triangular Toeplitz (k+2)x(k+1) times previous poly
        new = []
        for i in range(k + 2):
            s = zero
            for j in range(min(i, k) + 1):
                if i - j < len(col):
                    s = s + col[i - j] * poly[j]
            new.append(s)
        poly = new
    return tuple(poly)


@lru_cache(maxsize=4096)
def _factor_rational(coeffs: tuple) -> tuple:
    """Irreducible monic factors over Q of a monic polynomial (cached)."""
    import sympy

    t = sympy.Symbol("t")
    lead = coeffs[0]
    rat = [sympy.Rational(int(c.numerator), int(c.denominator)) for c in coeffs]
    if all(c == 0 for c in coeffs[1:]):
        return (((mpq(1), mpq(0)), len(coeffs) - 1),) if len(coeffs) > 1 else ()
    _, factors = sympy.Poly(rat, t, domain="QQ").factor_list()
    out = []
    for fac, mult in factors:
        fc = fac.all_coeffs()
        lc = fc[0]
        out.append((tuple(mpq(int((c / lc).p), int((c / lc).q)) for c in fc), int(mult)))
    assert lead == 1
    out.sort(key=lambda fm: (len(fm[0]), [float(c) for c in fm[0]], fm[1]))
    return tuple(out)


def _poly_str(coeffs: Sequence) -> str:
    deg = len(coeffs) - 1
    terms = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        power = deg - i
        mono = "" if power == 0 else ("t" if power == 1 else f"t^{power}")
        cs = scalar_str(c)
        if mono and cs == "1":
            terms.append(mono)
        elif mono and cs == "-1":
            terms.append("-" + mono)
        else:
            terms.append(cs + ("*" + mono if mono else ""))
    return " + ".join(terms).replace("+ -", "- ") or "0"


def _approx_roots(coeffs: Sequence) -> list[complex]:
    if len(coeffs) == 1:
        return []
    return [complex(r) for r in np.roots([float(c) for c in coeffs])]


# -------------------------------------------------------------- spectrum


@dataclass(frozen=True)
class EigenClass:
    """An eigenvalue class.

    Exact mode: ``factor`` is a monic irreducible polynomial over Q and the
    class stands for all of its (Galois-conjugate) roots, which share one
    Jordan structure.  Float mode: ``value`` is a cluster representative; a
    non-real value stands for the conjugate pair ``{value, conj(value)}``.
    """

    factor: tuple | None = None
    value: complex | None = None

    @property
    def degree(self) -> int:
        if self.factor is not None:
            return len(self.factor) - 1
        return 2 if abs(self.value.imag) > 0 else 1

    real_dim = degree

    @property
    def is_real(self) -> bool:
        if self.factor is not None:
            return all(abs(r.imag) < 1e-12 for r in self.roots())
        return self.value.imag == 0

    def roots(self) -> list[complex]:
        if self.factor is not None:
            if len(self.factor) == 2:
                return [complex(float(-self.factor[1]), 0.0)]
            return _approx_roots(self.factor)
        if self.value.imag == 0:
            return [self.value]
        return [self.value, self.value.conjugate()]

    def rational_value(self) -> mpq | None:
        if self.factor is not None and len(self.factor) == 2:
            return -self.factor[1]
        return None

    def __str__(self):
        if self.factor is not None:
            rv = self.rational_value()
            return scalar_str(rv) if rv is not None else _poly_str(self.factor)
        v = self.value
        if v.imag == 0:
            return f"{v.real:.10g}"
        return f"{v.real:.10g}±{abs(v.imag):.10g}i"

    def to_json(self):
        if self.factor is not None:
            return {"factor": [scalar_str(c) for c in self.factor], "label": str(self)}
        return {"value": [self.value.real, self.value.imag], "label": str(self)}


@dataclass(frozen=True)
class SpectrumSummary:
    """Eigenvalue multiset. Each class has a per-root multiplicity."""

    classes: tuple  # tuple[(EigenClass, multiplicity)]
    charpoly: tuple | None = None
    tol: float | None = None

    @property
    def exact(self) -> bool:
        return self.charpoly is not None

    @property
    def dimension(self) -> int:
        return sum(c.degree * mult for c, mult in self.classes)

    def eigenvalues(self) -> list:
        """Flat multiset: rationals as mpq, the rest as complex approximations."""
        out = []
        for cls, mult in self.classes:
            rv = cls.rational_value()
            vals = [rv] if rv is not None else cls.roots()
            for v in vals:
                out.extend([v] * mult)
        return out

    def is_zero(self) -> bool:
        return all(
            (c.rational_value() == 0) if c.factor is not None else (abs(c.value) == 0)
            for c, _ in self.classes
        )

    def equals(self, other: "SpectrumSummary") -> bool:
        if self.exact and other.exact:
            return self.charpoly == other.charpoly
        tol = self.tol or other.tol or DEFAULT_TOL
        a = sorted(_flat_complex(self), key=lambda z: (z.real, z.imag))
        b = sorted(_flat_complex(other), key=lambda z: (z.real, z.imag))
        return len(a) == len(b) and all(abs(x - y) <= tol * max(1.0, abs(x)) for x, y in zip(a, b))

    def __eq__(self, other):
        if not isinstance(other, SpectrumSummary):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def negated_equals_self(self) -> bool:
        vals = _flat_complex(self)
        tol = self.tol or 1e-9
        return _multiset_close(vals, [-v for v in vals], tol)

    def in_real_or_imaginary(self) -> bool:
        return all(abs(v.real) < 1e-9 or abs(v.imag) < 1e-9 for v in _flat_complex(self))

    def is_real(self) -> bool:
        return all(abs(v.imag) < 1e-9 for v in _flat_complex(self))

    def is_imaginary(self) -> bool:
        return all(abs(v.real) < 1e-9 for v in _flat_complex(self))

    def to_json(self):
        return {
            "classes": [dict(c.to_json(), multiplicity=mult) for c, mult in self.classes],
            "charpoly": None if self.charpoly is None else [scalar_str(c) for c in self.charpoly],
        }

    def __str__(self):
        parts = []
        for c, mult in self.classes:
            parts.append(f"{c}" + (f"^{mult}" if mult > 1 else ""))
        return "{" + ", ".join(parts) + "}"


def _flat_complex(spec: SpectrumSummary) -> list[complex]:
    out = []
    for cls, mult in spec.classes:
        for r in cls.roots():
            out.extend([complex(r)] * mult)
    return out


def _multiset_close(a: list[complex], b: list[complex], tol: float) -> bool:
    b = list(b)
    for x in a:
        j = next((k for k, y in enumerate(b) if abs(x - y) <= tol * max(1.0, abs(x))), None)
        if j is None:
            return False
        b.pop(j)
    return not b


def _cluster(values: Iterable[complex], tol: float) -> list[tuple[complex, int]]:
    """Single-linkage clustering; raises when clusters are not well separated."""
    vals = list(values)
    n = len(vals)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def thresh(a, b):
        return tol * max(1.0, abs(a), abs(b))

    for i in range(n):
        for j in range(i + 1, n):
            if abs(vals[i] - vals[j]) <= thresh(vals[i], vals[j]):
                parent[find(i)] = find(j)
    groups: dict[int, list[complex]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(vals[i])
    reps = []
    for members in groups.values():
        c = sum(members) / len(members)
        if abs(c.imag) <= tol * max(1.0, abs(c)):
            c = complex(c.real, 0.0)
        reps.append((c, members))
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            a, b = reps[i][0], reps[j][0]
            if abs(a - b) <= 100 * thresh(a, b):
                raise IllConditionedSpectrum(
                    f"eigenvalue clusters {a} and {b} are within 100*tol; refusing to guess"
                )
    return [(c, len(m)) for c, m in reps]


def spectrum(T: LinearMap, tol: float = DEFAULT_TOL) -> SpectrumSummary:
    if T.exact:
        cp = charpoly(T)
        classes = tuple((EigenClass(factor=f), mult) for f, mult in _factor_rational(cp))
        return SpectrumSummary(classes=classes, charpoly=cp)
    vals = np.linalg.eigvals(np.asarray(T.entries, dtype=float))
    clusters = _cluster(vals, tol)
    classes = []
    for c, mult in clusters:
        if c.imag < 0:
            continue
        classes.append((EigenClass(value=complex(c)), mult))
    classes.sort(key=lambda cm: (cm[0].value.real, cm[0].value.imag))
    return SpectrumSummary(classes=tuple(classes), tol=tol)


# ---------------------------------------------------------------- Jordan


@dataclass(frozen=True)
class JordanSignature:
    """Multiset of (eigenvalue class, block-size partition) pairs.

    For a class of degree ``d`` the partition lists the Jordan block sizes of
    each of its ``d`` roots; real dimension contributed is ``d * sum(partition)``.
    """

    blocks: tuple  # tuple[(EigenClass, tuple[int, ...])]
    tol: float | None = None

    @property
    def exact(self) -> bool:
        return self.tol is None

    @property
    def dimension(self) -> int:
        return sum(c.degree * sum(part) for c, part in self.blocks)

    def partitions(self) -> dict:
        return {str(c): part for c, part in self.blocks}

    def is_simple(self) -> bool:
        return all(all(b == 1 for b in part) for _, part in self.blocks)

    def equals(self, other: "JordanSignature", tol: float | None = None) -> bool:
        if self.exact and other.exact:
            return sorted(self._key()) == sorted(other._key())
        tol = tol or self.tol or other.tol or DEFAULT_TOL
        rest = list(other.blocks)
        for cls, part in self.blocks:
            roots = cls.roots()
            j = next(
                (
                    k
                    for k, (c2, p2) in enumerate(rest)
                    if p2 == part and _multiset_close(roots, c2.roots(), tol)
                ),
                None,
            )
            if j is None:
                return False
            rest.pop(j)
        return not rest

    def _key(self):
        return [(tuple(c.factor), part) for c, part in self.blocks]

    def __eq__(self, other):
        if not isinstance(other, JordanSignature):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def to_json(self):
        return [dict(c.to_json(), partition=list(part)) for c, part in self.blocks]

    def __str__(self):
        return "{" + ", ".join(f"({c}, {list(p)})" for c, p in self.blocks) + "}"


def _partition_from_ranks(ranks: Sequence[int], degree: int) -> tuple[int, ...]:
    """Block sizes from the rank sequence ``r_0 = m, r_1, r_2, ...`` of ``A_lambda^k``.

    ``(r_{k-1} - r_k) / degree`` counts blocks of size >= k; conjugating that
    sequence gives the partition.
    """
    at_least = []
    for k in range(1, len(ranks)):
        drop = ranks[k - 1] - ranks[k]
        if drop % degree:
            raise ArithmeticError(f"rank drop {drop} not divisible by class degree {degree}")
        if drop == 0:
            break
        at_least.append(drop // degree)
    sizes = []
    for k, n_k in enumerate(at_least, start=1):
        n_next = at_least[k] if k < len(at_least) else 0
        sizes.extend([k] * (n_k - n_next))
    return tuple(sorted(sizes, reverse=True))


def _poly_at_matrix(coeffs: Sequence, A: np.ndarray) -> np.ndarray:
    m = A.shape[0]
    exact = is_exact_array(A)
    out = zeros_exact((m, m)) if exact else np.zeros((m, m), dtype=A.dtype)
    eye = _eye(m, exact)
    for c in coeffs:
        out = out.dot(A) + eye * c
    return out


def rank_sequence(A_lam: np.ndarray, upto: int, tol: float = DEFAULT_TOL, scale=None) -> list[int]:
    """``[m, rank(A), rank(A^2), ...]`` stopping once the sequence stabilizes."""
    m = A_lam.shape[0]
    ranks = [m]
    P = A_lam
    for _ in range(upto):
        r = rank_exact(P) if is_exact_array(P) else rank_float(P, tol, scale)
        ranks.append(r)
        if r == ranks[-2]:
            break
        P = P.dot(A_lam)
    return ranks


def jordan_signature(T: LinearMap, tol: float = DEFAULT_TOL) -> JordanSignature:
    A = T.entries
    m = T.m
    spec = spectrum(T, tol)
    blocks = []
    if T.exact:
        for cls, mult in spec.classes:
            A_lam = _poly_at_matrix(cls.factor, A)
            ranks = rank_sequence(A_lam, mult, tol)
            part = _partition_from_ranks(ranks, cls.degree)
            blocks.append((cls, part))
        sig = JordanSignature(tuple(blocks))
    else:
        Af = np.asarray(A, dtype=float)
        norm = max(1.0, float(np.linalg.norm(Af, 2)))
        for cls, mult in spec.classes:
            lam = cls.value
            if lam.imag == 0:
                A_lam = Af - lam.real * np.eye(m)
                scale = norm
            else:
                A_lam = Af @ Af - 2 * lam.real * Af + abs(lam) ** 2 * np.eye(m)
                scale = norm**2
            ranks = rank_sequence(A_lam, mult, tol, scale)
            part = _partition_from_ranks(ranks, cls.degree)
            if sum(part) != mult:
                raise IllConditionedSpectrum(
                    f"rank sequence {ranks} inconsistent with multiplicity {mult} at {lam}"
                )
            blocks.append((cls, part))
        sig = JordanSignature(tuple(blocks), tol=tol)
    if sig.dimension != m:
        raise ArithmeticError(f"Jordan data covers {sig.dimension} of {m} dimensions")
    return sig


def jordan_equivalent(a: JordanSignature, b: JordanSignature, tol: float | None = None) -> bool:
    return a.equals(b, tol)


def is_jordan_simple(T: LinearMap, tol: float = DEFAULT_TOL) -> bool:
    return jordan_signature(T, tol).is_simple()


def is_diagonalizable(T: LinearMap, over: str = "complex", tol: float = DEFAULT_TOL) -> bool:
    """Diagonalizable over C is Jordan simplicity; over R it also needs a real spectrum."""
    sig = jordan_signature(T, tol)
    if not sig.is_simple():
        return False
    if over == "real":
        return all(cls.is_real for cls, _ in sig.blocks)
    return True


# ------------------------------------------------------------------ misc


def adams_number(q: int) -> int:
    """Radon-Hurwitz number minus one: independent vector fields on ``S^(q-1)``."""
    if q < 1:
        raise ValueError("q must be >= 1")
    b = 0
    while q % 2 == 0:
        q //= 2
        b += 1
    c, d = b % 4, b // 4
    return 2**c + 8 * d - 1
