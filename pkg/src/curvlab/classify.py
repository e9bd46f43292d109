"""Monte-Carlo property checks for curvature tensors.

A check samples its domain (pseudo-sphere, Grassmannian of frames, oriented
2-planes or complex lines), builds the associated operator for every draw
and compares an invariant (spectrum, Jordan signature or rank) with the
first draw.  Agreement on every draw is reported as ``holds-on-samples``;
sampling never proves constancy.  A mismatch ends the run (unless
``full_budget`` is set) and the two draws are recorded as a witness that
can be re-evaluated with :func:`recheck_witness`.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from gmpy2 import mpq

from .curvature import CovDerivTensor, CurvatureTensor, HermitianStructure, _endomorphism_stack
from .frames import FrameSample, Sampler, SamplerConfig, admissible, admissible_types, complement, full_frame
from .operators import higher_jacobi, jacobi, skew_curvature, szabo
from .pseudolin import (
    DEFAULT_TOL,
    LinearMap,
    Signature,
    SpectrumSummary,
    _flat_complex,
    _multiset_close,
    adams_number,
    is_diagonalizable,
    jordan_signature,
    rank,
    scalar_str,
    spectrum,
    to_exact,
)

HOLDS = "holds-on-samples"
FAILS = "fails"

_PLANE = {"spacelike": (0, 2), "mixed": (1, 1), "timelike": (2, 0)}
_SIGN = {"spacelike": 1, "timelike": -1}


class QueryError(ValueError):
    """Property not applicable to the tensor (kind or signature)."""


# ------------------------------------------------------------ properties


@dataclass(frozen=True)
class Property:
    """What to sample, which operator to build and which invariant to compare.

    ``operator`` is one of ``jacobi``, ``higher``, ``skew``, ``szabo``,
    ``complex`` or ``nilpotent``; ``domain`` is a sign (+-1) for vectors or
    an ``(r, s)`` pair for frames; ``invariant`` is ``spectrum``, ``jordan``
    or ``rank``.
    """

    label: str
    operator: str
    domain: Any
    invariant: str | None

    @property
    def stream(self) -> str:
        return self.label


def osserman(sign: int) -> Property:
    return Property(("Spacelike" if sign > 0 else "Timelike") + "Osserman", "jacobi", sign, "spectrum")


def jordan_osserman(sign: int) -> Property:
    return Property(f"JordanOsserman({'+' if sign > 0 else '-'})", "jacobi", sign, "jordan")


def osserman_type(r: int, s: int) -> Property:
    return Property(f"OssermanType({r},{s})", "higher", (r, s), "spectrum")


def jordan_osserman_type(r: int, s: int) -> Property:
    return Property(f"JordanOssermanType({r},{s})", "higher", (r, s), "jordan")


def ip(kind: str) -> Property:
    return Property(kind.capitalize() + "IP", "skew", _PLANE[kind], "spectrum")


def jordan_ip(kind: str) -> Property:
    return Property(f"JordanIP({kind})", "skew", _PLANE[kind], "jordan")


def szabo_property(sign: int) -> Property:
    return Property(f"Szabo({'+' if sign > 0 else '-'})", "szabo", sign, "spectrum")


def jordan_szabo(sign: int) -> Property:
    return Property(f"JordanSzabo({'+' if sign > 0 else '-'})", "szabo", sign, "jordan")


def rank_constant(base: Property) -> Property:
    return Property(f"RankConstant({base.label})", base.operator, base.domain, "rank")


ALMOST_COMPLEX_JORDAN_IP = Property("AlmostComplexJordanIP", "complex", None, "jordan")
TWO_NILPOTENT = Property("TwoNilpotent", "nilpotent", None, None)


def parse_property(text: str) -> Property:
    """Parse CLI names such as ``timelike-jordan-osserman``, ``jordan-osserman-type:1,0``,
    ``mixed-jordan-ip``, ``spacelike-szabo`` or ``rank-constant:spacelike-ip``."""
    t = text.strip().lower()
    if t.startswith("rank-constant:"):
        return rank_constant(parse_property(t.split(":", 1)[1]))
    if ":" in t:
        head, args = t.split(":", 1)
        try:
            r, s = (int(v) for v in args.split(","))
        except ValueError:
            raise ValueError(f"expected '{head}:r,s', got {text!r}") from None
        if head == "osserman-type":
            return osserman_type(r, s)
        if head == "jordan-osserman-type":
            return jordan_osserman_type(r, s)
        raise ValueError(f"unknown property {text!r}")
    simple = {
        "almost-complex-jordan-ip": ALMOST_COMPLEX_JORDAN_IP,
        "two-nilpotent": TWO_NILPOTENT,
    }
    if t in simple:
        return simple[t]
    parts = t.split("-")
    if len(parts) >= 2 and parts[0] in ("spacelike", "timelike", "mixed"):
        kind, rest = parts[0], "-".join(parts[1:])
        table = {
            "osserman": lambda: osserman(_SIGN[kind]),
            "jordan-osserman": lambda: jordan_osserman(_SIGN[kind]),
            "ip": lambda: ip(kind),
            "jordan-ip": lambda: jordan_ip(kind),
            "szabo": lambda: szabo_property(_SIGN[kind]),
            "jordan-szabo": lambda: jordan_szabo(_SIGN[kind]),
        }
        if rest in table and (kind != "mixed" or rest.endswith("ip")):
            return table[rest]()
    raise ValueError(f"unknown property {text!r}")


# ---------------------------------------------------------------- query


@dataclass
class PropertyQuery:
    property: Property
    samples: int = 200
    cfg: SamplerConfig = field(default_factory=SamplerConfig)
    tol: float = DEFAULT_TOL
    full_budget: bool = False
    threads: int = 1
    frame_method: str = "mixed"
    hermitian: HermitianStructure | None = None


@dataclass
class PropertyReport:
    property: str
    verdict: str
    samples: int
    reference: dict | None
    witness: dict | None
    seed: int
    notes: list = field(default_factory=list)
    mismatches: int = 0

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def to_json(self) -> dict:
        out = {
            "property": self.property,
            "verdict": self.verdict,
            "samples": self.samples,
            "reference": self.reference,
            "witness": self.witness,
            "seed": self.seed,
            "notes": list(self.notes),
        }
        if self.mismatches:
            out["mismatches"] = self.mismatches
        return out


def _check_applicable(T, prop: Property):
    sig = T.sig
    if prop.operator == "szabo":
        if not isinstance(T, CovDerivTensor):
            raise QueryError(f"{prop.label} needs a covariant derivative tensor")
    elif isinstance(T, CovDerivTensor) and prop.operator != "nilpotent":
        raise QueryError(f"{prop.label} needs a curvature tensor")
    if prop.operator in ("jacobi", "szabo"):
        if prop.domain > 0 and sig.q < 1:
            raise QueryError(f"{prop.label} needs q >= 1 (signature {sig})")
        if prop.domain < 0 and sig.p < 1:
            raise QueryError(f"{prop.label} needs p >= 1 (signature {sig})")
    elif prop.operator == "higher":
        r, s = prop.domain
        if not admissible(r, s, sig):
            raise QueryError(f"type ({r},{s}) is not admissible for signature {sig}")
    elif prop.operator == "skew":
        r, s = prop.domain
        if r > sig.p or s > sig.q:
            need = {(2, 0): "p >= 2", (1, 1): "p >= 1 and q >= 1", (0, 2): "q >= 2"}[(r, s)]
            raise QueryError(f"{prop.label} needs {need} (signature {sig})")
    elif prop.operator == "complex" and (sig.p % 2 or sig.q % 2):
        raise QueryError(f"{prop.label} needs a Hermitian structure (p and q even)")


# ------------------------------------------------------------- sampling


def _as_scalar(v, exact: bool):
    return v if exact else np.array([float(c) for c in v], dtype=float)


def _float_frame(f: FrameSample) -> FrameSample:
    return FrameSample(
        f.sig_ambient,
        tuple(_as_scalar(v, False) for v in f.vectors),
        tuple(float(n) for n in f.norm_sq),
        f.sig_sub,
        f.oriented,
    )


@dataclass
class _Draw:
    sample: Any  # vector or FrameSample (exact)
    operator: LinearMap
    invariant: Any


def _draw_domain(sampler: Sampler, T, prop: Property, q: PropertyQuery, index: int):
    sig = T.sig
    if prop.operator in ("jacobi", "szabo"):
        return sampler.unit(sig, prop.domain, index)
    if prop.operator in ("higher", "skew"):
        r, s = prop.domain
        return sampler.frame(sig, r, s, prop.operator == "skew", index, q.frame_method)
    if prop.operator == "complex":
        return sampler.complex_line(q.hermitian or HermitianStructure.standard(sig), index)
    raise AssertionError(prop.operator)


def _operator(T, prop: Property, sample) -> LinearMap:
    exact = T.exact
    if prop.operator == "jacobi":
        return jacobi(T, _as_scalar(sample, exact))
    if prop.operator == "szabo":
        return szabo(T, _as_scalar(sample, exact))
    f = sample if exact else _float_frame(sample)
    if prop.operator == "higher":
        return higher_jacobi(T, f)
    return skew_curvature(T, f)


def _invariant(op: LinearMap, kind: str, tol: float):
    if kind == "spectrum":
        return spectrum(op, tol)
    if kind == "jordan":
        return jordan_signature(op, tol)
    return rank(op, tol)


def _same(a, b, kind: str, tol: float) -> bool:
    if kind == "rank":
        return a == b
    if kind == "jordan":
        return a.equals(b, tol)
    return a.equals(b)


def _invariant_json(inv, kind: str):
    return {kind: inv if kind == "rank" else inv.to_json()}


def _sample_json(sample) -> dict:
    if isinstance(sample, FrameSample):
        return {"frame": sample.to_json()}
    return {"vector": [scalar_str(c) for c in sample]}


def _evaluate(T, prop, q, sampler, index) -> _Draw:
    sample = _draw_domain(sampler, T, prop, q, index)
    op = _operator(T, prop, sample)
    return _Draw(sample, op, _invariant(op, prop.invariant, q.tol))


def _draws(T, prop, q, sampler):
    """Draws in index order; with threads, evaluated in parallel batches."""
    if q.threads <= 1:
        for i in range(q.samples):
            yield _evaluate(T, prop, q, sampler, i)
        return
    batch = 4 * q.threads
    with ThreadPoolExecutor(max_workers=q.threads) as pool:
        for start in range(0, q.samples, batch):
            idx = range(start, min(start + batch, q.samples))
            yield from pool.map(lambda i: _evaluate(T, prop, q, sampler, i), idx)


def _nilpotent_report(T, q: PropertyQuery) -> PropertyReport:
    """Basis enumeration; the witness names the first non-vanishing product."""
    tol = q.tol
    exact = T.exact
    if isinstance(T, CurvatureTensor):
        E = _endomorphism_stack(T).reshape(T.m**2, T.m, T.m)
        labels = [(i, j) for i in range(T.m) for j in range(T.m)]
    else:
        eps = T.sig.eps_array(exact)
        E = np.einsum("ijban,a->nijab", T.components, eps).reshape(T.m**3, T.m, T.m)
        labels = [(n, i, j) for n in range(T.m) for i in range(T.m) for j in range(T.m)]
    for s, A in enumerate(E):
        prod = np.tensordot(E, A, axes=([2], [0]))  # E[t] @ A for every t
        bad = [t for t in range(len(E)) if _nonzero(prod[t], exact, tol)]
        if bad:
            t = bad[0]
            witness = {
                "first": list(labels[t]),
                "second": list(labels[s]),
                "product": LinearMap(prod[t], T.sig).to_json(),
            }
            return PropertyReport(TWO_NILPOTENT.label, FAILS, 0, None, witness, q.cfg.seed,
                                  ["decided by enumeration of basis products"])
    return PropertyReport(TWO_NILPOTENT.label, HOLDS, 0, None, None, q.cfg.seed,
                          ["decided by enumeration of basis products"])


def _nonzero(arr, exact, tol) -> bool:
    if exact:
        return any(v != 0 for v in arr.reshape(-1))
    return bool(np.any(np.abs(arr.astype(float)) > tol))


def check(T, query: PropertyQuery) -> PropertyReport:
    """Run the property check described by ``query`` on ``T`` (R or nabla R)."""
    prop = query.property
    _check_applicable(T, prop)
    if prop.operator == "nilpotent":
        return _nilpotent_report(T, query)
    if query.samples < 1:
        raise ValueError("need at least one sample")
    sampler = Sampler(query.cfg, prop.stream)
    notes = []
    ref = None
    witness = None
    used = 0
    mismatches = 0
    for i, d in enumerate(_draws(T, prop, query, sampler)):
        used = i + 1
        if ref is None:
            ref = d
            if prop.operator in ("skew", "complex") and prop.invariant == "jordan":
                same = jordan_signature(-d.operator, query.tol).equals(d.invariant, query.tol)
                notes.append(
                    "orientation classes: "
                    + ("T and -T have the same Jordan signature" if same else "T and -T differ")
                )
            continue
        if not _same(ref.invariant, d.invariant, prop.invariant, query.tol):
            mismatches += 1
            if witness is None:
                witness = {
                    "indices": [0, i],
                    "samples": [_sample_json(ref.sample), _sample_json(d.sample)],
                    "operators": [ref.operator.to_json(), d.operator.to_json()],
                    "invariants": [
                        _invariant_json(ref.invariant, prop.invariant),
                        _invariant_json(d.invariant, prop.invariant),
                    ],
                }
            if not query.full_budget:
                break
    if query.full_budget and used > 1:
        notes.append(f"constancy rate {used - 1 - mismatches}/{used - 1}")
    if prop.operator == "complex":
        from .curvature import almost_complex_identity

        H = query.hermitian or HermitianStructure.standard(T.sig)
        if not almost_complex_identity(T, H, query.tol):
            notes.append("tensor does not satisfy J*R = R; it is not almost complex")
    return PropertyReport(
        prop.label,
        FAILS if witness else HOLDS,
        used,
        _invariant_json(ref.invariant, prop.invariant),
        witness,
        query.cfg.seed,
        notes,
        mismatches if query.full_budget else 0,
    )


# ------------------------------------------------------------- witnesses


def _load_sample(data: dict, sig: Signature):
    if "vector" in data:
        return np.array([to_exact(c) for c in data["vector"]], dtype=object)
    f = data["frame"]
    return FrameSample(
        sig,
        tuple(np.array([to_exact(c) for c in v], dtype=object) for v in f["vectors"]),
        tuple(to_exact(n) for n in f["norm_sq"]),
        tuple(f["signature"]),
        f["oriented"],
    )


def recheck_witness(T, report: PropertyReport | dict, prop: Property | None = None, tol: float = DEFAULT_TOL) -> bool:
    """Rebuild both witness operators from the recorded samples and confirm
    they reproduce the recorded, differing invariants."""
    data = report.to_json() if isinstance(report, PropertyReport) else report
    w = data.get("witness")
    if not w or "samples" not in w:
        return False
    prop = prop or parse_label(data["property"])
    invs = []
    for sj, recorded in zip(w["samples"], w["invariants"]):
        op = _operator(T, prop, _load_sample(sj, T.sig))
        inv = _invariant(op, prop.invariant, tol)
        if _invariant_json(inv, prop.invariant) != recorded:
            return False
        invs.append(inv)
    return not _same(invs[0], invs[1], prop.invariant, tol)


def parse_label(label: str) -> Property:
    """Inverse of ``Property.label``."""
    import re

    m = re.fullmatch(r"(\w+)\((.*)\)", label)
    if m:
        head, arg = m.groups()
        sign = 1 if arg == "+" else -1
        table = {
            "JordanOsserman": lambda: jordan_osserman(sign),
            "OssermanType": lambda: osserman_type(*map(int, arg.split(","))),
            "JordanOssermanType": lambda: jordan_osserman_type(*map(int, arg.split(","))),
            "JordanIP": lambda: jordan_ip(arg),
            "Szabo": lambda: szabo_property(sign),
            "JordanSzabo": lambda: jordan_szabo(sign),
            "RankConstant": lambda: rank_constant(parse_label(arg)),
        }
        return table[head]()
    table = {
        "SpacelikeOsserman": osserman(1),
        "TimelikeOsserman": osserman(-1),
        "SpacelikeIP": ip("spacelike"),
        "MixedIP": ip("mixed"),
        "TimelikeIP": ip("timelike"),
        "AlmostComplexJordanIP": ALMOST_COMPLEX_JORDAN_IP,
        "TwoNilpotent": TWO_NILPOTENT,
    }
    return table[label]


# ---------------------------------------------------------------- suites


@dataclass
class SuiteReport:
    name: str
    items: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(it["ok"] for it in self.items)

    def add(self, what: str, ok: bool, **detail):
        self.items.append(dict({"check": what, "ok": bool(ok)}, **detail))
        return ok

    def to_json(self) -> dict:
        return {"suite": self.name, "passed": self.passed, "items": self.items, "notes": self.notes}


def _query(prop, cfg, samples, tol=DEFAULT_TOL, threads=1) -> PropertyQuery:
    return PropertyQuery(prop, samples, cfg, tol, threads=threads)


def k_osserman(R: CurvatureTensor, k: int, cfg: SamplerConfig, samples: int = 100) -> dict:
    """Osserman of every admissible type ``(r, s)`` with ``r + s = k``."""
    verdicts = {}
    for r, s in admissible_types(R.sig):
        if r + s == k:
            verdicts[f"{r},{s}"] = check(R, _query(osserman_type(r, s), cfg, samples)).verdict
    return verdicts


def duality_suite(R: CurvatureTensor, cfg: SamplerConfig | None = None, samples: int = 50,
                  check_samples: int | None = None) -> SuiteReport:
    """``J(pi) + J(pi^perp) = J(V)``; k versus m-k Osserman; Jordan type (r,s) versus (p-r,q-s)."""
    cfg = cfg or SamplerConfig()
    sig = R.sig
    rep = SuiteReport("duality")
    JV = higher_jacobi(R, full_frame(sig))
    sampler = Sampler(cfg, "duality")
    types = admissible_types(sig)
    bad = None
    for i in range(samples):
        r, s = types[i % len(types)]
        f = sampler.frame(sig, r, s, False, i)
        total = higher_jacobi(R, f) + higher_jacobi(R, complement(f))
        if not total.equals(JV):
            bad = {"index": i, "frame": f.to_json()}
            break
    rep.add("J(pi) + J(pi^perp) = J(V)", bad is None, samples=samples, witness=bad)
    samples = check_samples or samples
    m = sig.m
    ks = {}
    for k in range(1, m):
        v = k_osserman(R, k, cfg, samples)
        ks[k] = all(x == HOLDS for x in v.values())
    for k in range(1, m):
        rep.add(f"{k}-Osserman <=> {m - k}-Osserman", ks[k] == ks[m - k], k=ks[k], dual=ks[m - k])
    jv = {}
    for r, s in types:
        jv[(r, s)] = check(R, _query(jordan_osserman_type(r, s), cfg, samples)).verdict
    for (r, s), v in jv.items():
        d = (sig.p - r, sig.q - s)
        if (r, s) <= d:
            rep.add(f"Jordan type ({r},{s}) <=> ({d[0]},{d[1]})", v == jv[d], verdict=v, dual=jv[d])
    return rep


def equivalence_suite(R: CurvatureTensor, cfg: SamplerConfig | None = None, samples: int = 100,
                      D: CovDerivTensor | None = None) -> SuiteReport:
    """Verdicts that must agree: timelike/spacelike Osserman, all types of one
    dimension, the three IP kinds, timelike/spacelike Szabo (when ``D`` is given)."""
    cfg = cfg or SamplerConfig()
    sig = R.sig
    rep = SuiteReport("equivalences")

    def agree(what, props, T):
        verdicts = {}
        for pr in props:
            try:
                verdicts[pr.label] = check(T, _query(pr, cfg, samples)).verdict
            except QueryError:
                continue
        ok = len(set(verdicts.values())) <= 1
        if not ok:
            rep.notes.append(f"falsification candidate: {what} verdicts disagree {verdicts}")
        rep.add(what, ok, verdicts=verdicts)

    agree("Osserman", [osserman(-1), osserman(1)], R)
    for k in range(1, sig.m):
        agree(f"{k}-Osserman", [osserman_type(r, s) for r, s in admissible_types(sig) if r + s == k], R)
    agree("IP", [ip("timelike"), ip("mixed"), ip("spacelike")], R)
    if D is not None:
        agree("Szabo", [szabo_property(-1), szabo_property(1)], D)
    return rep


def szabo_structure_suite(D: CovDerivTensor, cfg: SamplerConfig | None = None, samples: int = 100) -> SuiteReport:
    """Spectral consequences of the Szabo property and of spacelike Jordan Szabo for p < q."""
    cfg = cfg or SamplerConfig()
    sig = D.sig
    p, q = sig.p, sig.q
    rep = SuiteReport("szabo-structure")
    specs = {}
    for sign in (1, -1):
        if (q if sign > 0 else p) < 1:
            continue
        r = check(D, _query(szabo_property(sign), cfg, samples))
        rep.add(f"Szabo({'+' if sign > 0 else '-'}) verdict recorded", True, verdict=r.verdict,
                witness=r.witness is not None)
        if r.holds:
            sampler = Sampler(cfg, szabo_property(sign).stream)
            specs[sign] = spectrum(szabo(D, sampler.unit(sig, sign, 0)))
    if not specs:
        rep.notes.append("not Szabo on samples; structural checks skipped")
        return rep
    for sign, sp in specs.items():
        tag = "+" if sign > 0 else "-"
        rep.add(f"spec{tag} = -spec{tag}", sp.negated_equals_self(), spectrum=str(sp))
        rep.add(f"spec{tag} in R u iR", sp.in_real_or_imaginary())
    if 1 in specs and -1 in specs:
        a = _flat_complex(specs[1])
        b = [1j * z for z in _flat_complex(specs[-1])]
        rep.add("spec+ = i spec-", _multiset_close(a, b, 1e-9))
    if p < q:
        if 1 in specs:
            rep.add("p<q: spec+ in iR", specs[1].is_imaginary())
        if -1 in specs:
            rep.add("p<q: spec- in R", specs[-1].is_real())
        jr = check(D, _query(jordan_szabo(1), cfg, samples))
        rep.add("spacelike Jordan Szabo verdict recorded", True, verdict=jr.verdict)
        if jr.holds:
            sampler = Sampler(cfg, jordan_szabo(1).stream)
            S = szabo(D, sampler.unit(sig, 1, 0))
            rep.add("S(v) Jordan simple", jordan_signature(S).is_simple())
            nu = adams_number(q)
            if p < q - nu:
                rk = rank(S)
                rep.add(f"rank S(v) <= 2 nu(q) = {2 * nu}", rk <= 2 * nu, rank=rk)
            if q % 2 == 1:
                ok = D.is_zero()
                rep.add("q odd: D = 0", ok)
                if not ok:
                    rep.notes.append("FALSIFICATION CANDIDATE: nonzero D passes spacelike Jordan Szabo with q odd")
    return rep


def diagonalizability_check(R: CurvatureTensor, cfg: SamplerConfig | None = None, samples: int = 50) -> SuiteReport:
    """For p < q and spacelike Jordan Osserman R, each sampled J(x) should be diagonalizable."""
    cfg = cfg or SamplerConfig()
    rep = SuiteReport("diagonalizability")
    if not R.sig.p < R.sig.q:
        rep.notes.append("only meaningful for p < q")
        return rep
    jo = check(R, _query(jordan_osserman(1), cfg, samples))
    rep.add("spacelike Jordan Osserman verdict recorded", True, verdict=jo.verdict)
    if not jo.holds:
        return rep
    sampler = Sampler(cfg, "diagonalizability")
    nilpotent = True
    ok = True
    for i in range(samples):
        J = jacobi(R, sampler.unit(R.sig, 1, i))
        nilpotent = nilpotent and spectrum(J).is_zero()
        ok = ok and is_diagonalizable(J)
    rep.add("J(x) diagonalizable on S+", ok)
    if nilpotent:
        rep.notes.append("spectrum is {0}: diagonalizable here means J(x) = 0")
    return rep


def almost_complex_spectrum_check(R: CurvatureTensor, H: HermitianStructure | None = None,
                                  cfg: SamplerConfig | None = None, samples: int = 20) -> SuiteReport:
    """Eigenvalue structure of ``J R(pi)`` for an almost complex Jordan IP tensor in signature (0, q).

    Multiplicities are complex dimensions (real multiplicity / 2), sorted
    decreasingly; ``l + 1`` is the number of distinct eigenvalues.
    """
    cfg = cfg or SamplerConfig()
    sig = R.sig
    rep = SuiteReport("almost-complex-spectrum")
    if sig.p != 0:
        raise QueryError("the eigenvalue structure check applies to signature (0, q)")
    H = H or HermitianStructure.standard(sig)
    q_ = PropertyQuery(ALMOST_COMPLEX_JORDAN_IP, samples, cfg, hermitian=H)
    jr = check(R, q_)
    rep.add("almost complex Jordan IP verdict recorded", True, verdict=jr.verdict)
    if not jr.holds:
        return rep
    f = Sampler(cfg, ALMOST_COMPLEX_JORDAN_IP.stream).complex_line(H, 0)
    sp = spectrum(H.J @ skew_curvature(R, f))
    mults = sorted((c.degree * m / 2 for c, m in sp.classes), reverse=True)
    ell = len(mults) - 1
    qm = sig.q % 4
    if ell < 1:
        ok = True
    elif qm == 2:
        ok = ell == 1 and mults[1] == 1
    elif qm == 0:
        ok = (ell == 1 and mults[1] <= 2) or (ell == 2 and mults[1] == mults[2] == 1)
    else:
        ok = True
    rep.add("eigenvalue multiplicities of J R(pi)", ok, multiplicities=mults, ell=ell, q_mod_4=qm)
    return rep
