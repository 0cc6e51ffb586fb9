"""Per-prime census of a genus-2 Jacobian and the fixed-field counting functions.

Only good, ordinary, simple primes enter Pi(A, F), Pi(A, K) and the field
sets.  Records are computed independently per prime, so a thread pool is
safe (the numba kernels release the GIL); results are merged in p order.
"""

from __future__ import annotations

import csv
import io
import json
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .curves import CurveModel, Reduction, frobenius_coeffs, reduction_type
from .errors import CapacityError, ConsistencyError, InvalidInputError
from .frobenius import (
    CmFieldKey,
    ReductionClass,
    classify,
    cm_field_key,
    gamma_g2,
    psi_bound,
    real_subfield,
    same_cm_field,
)
from .numth import DEFAULT_TRIAL_BOUND, QuadElem, is_perfect_square, primes_up_to, squarefree_part

DEFAULT_X_CAP = 10**4
EXTENDED_X_CAP = 10**5


@dataclass(frozen=True)
class FrobeniusRecord:
    p: int
    cls: ReductionClass
    N1: Optional[int] = None
    N2: Optional[int] = None
    t1: Optional[int] = None
    a2: Optional[int] = None
    delta: Optional[int] = None
    d0: Optional[int] = None
    gamma: Optional[int] = None
    sf_gamma: Optional[int] = None
    cm_key: Optional[CmFieldKey] = None

    def to_json(self) -> dict:
        r = None
        if self.cm_key is not None:
            x = self.cm_key.r
            r = [x.a.numerator, x.a.denominator, x.b.numerator, x.b.denominator]
        return {
            "p": self.p,
            "class": self.cls.value,
            "N1": self.N1,
            "N2": self.N2,
            "t1": self.t1,
            "a2": self.a2,
            "delta": self.delta,
            "d0": self.d0,
            "gamma": self.gamma,
            "sf_gamma": self.sf_gamma,
            "r": r,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FrobeniusRecord":
        key = None
        if obj.get("r") is not None:
            an, ad, bn, bd = obj["r"]
            key = CmFieldKey(obj["d0"], QuadElem(obj["d0"], Fraction(an, ad), Fraction(bn, bd)))
        return cls(
            p=obj["p"],
            cls=ReductionClass(obj["class"]),
            N1=obj.get("N1"),
            N2=obj.get("N2"),
            t1=obj.get("t1"),
            a2=obj.get("a2"),
            delta=obj.get("delta"),
            d0=obj.get("d0"),
            gamma=obj.get("gamma"),
            sf_gamma=obj.get("sf_gamma"),
            cm_key=key,
        )


def frobenius_record(curve: CurveModel, p: int, factor_bound: int = DEFAULT_TRIAL_BOUND) -> FrobeniusRecord:
    """Everything the census stores about one prime."""
    if reduction_type(curve, p) is Reduction.BAD:
        return FrobeniusRecord(p, ReductionClass.BAD)
    t1, a2, n1, n2 = frobenius_coeffs(curve, p)
    cls = classify(t1, a2, p)
    if cls is not ReductionClass.ORDINARY_SIMPLE:
        return FrobeniusRecord(p, cls, n1, n2, t1, a2)
    delta, d0 = real_subfield(t1, a2, p)
    if delta > 48 * p:
        raise ConsistencyError(f"Delta = {delta} exceeds 48p at p = {p}")
    key = cm_field_key(t1, a2, p)
    gam = gamma_g2(t1, a2, p)
    # two independent routes to gamma: power-sum doubling vs quadratic-field norm
    if Fraction(gam) != key.r.norm():
        raise ConsistencyError(f"gamma mismatch at p = {p}: {gam} vs N(r) = {key.r.norm()}")
    if gam <= 0:
        raise ConsistencyError(f"gamma = {gam} should be positive for g = 2")
    sf, _ = squarefree_part(gam, factor_bound)
    return FrobeniusRecord(p, cls, n1, n2, t1, a2, delta, d0, gam, sf, key)


@dataclass
class CensusReport:
    curve: CurveModel
    X: int
    records: List[FrobeniusRecord]
    counts: Dict[str, int] = field(default_factory=dict)
    field_multiplicities: Dict[CmFieldKey, int] = field(default_factory=dict)
    d0_multiplicities: Dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        ps = [r.p for r in self.records]
        if ps != sorted(set(ps)):
            raise ConsistencyError("census records must be strictly increasing in p")
        by_class = Counter(r.cls for r in self.records)
        good = len(self.records) - by_class[ReductionClass.BAD]
        self.counts = {
            "primes": len(self.records),
            "bad": by_class[ReductionClass.BAD],
            "good": good,
            "nonordinary": by_class[ReductionClass.NON_ORDINARY],
            "notsimple": by_class[ReductionClass.NOT_SIMPLE],
            "ordinarysimple": by_class[ReductionClass.ORDINARY_SIMPLE],
        }
        self.field_multiplicities = _group_fields(self.ordinary_simple)
        self.d0_multiplicities = dict(sorted(Counter(r.d0 for r in self.ordinary_simple).items()))
        if sum(self.field_multiplicities.values()) != self.counts["ordinarysimple"]:
            raise ConsistencyError("field multiplicities do not partition the ordinary simple primes")

    @property
    def ordinary_simple(self) -> List[FrobeniusRecord]:
        return [r for r in self.records if r.cls is ReductionClass.ORDINARY_SIMPLE]

    def ordinary_density(self) -> float:
        good = self.counts["good"]
        return (good - self.counts["nonordinary"]) / good if good else 0.0


def _group_fields(records: List[FrobeniusRecord]) -> Dict[CmFieldKey, int]:
    """Isomorphism classes of K under same_cm_field, keyed by the first occurrence."""
    classes: List[Tuple[CmFieldKey, int]] = []
    by_d0: Dict[int, List[int]] = {}
    for rec in records:
        key = rec.cm_key
        for idx in by_d0.get(key.d0, []):
            rep, n = classes[idx]
            if same_cm_field(rep, key):
                classes[idx] = (rep, n + 1)
                break
        else:
            by_d0.setdefault(key.d0, []).append(len(classes))
            classes.append((key, 1))
    return dict(classes)


def resolve_threads(threads: Optional[int] = None) -> int:
    env = os.environ.get("FROBCENSUS_THREADS")
    if env:
        try:
            threads = int(env)
        except ValueError as exc:
            raise InvalidInputError(f"FROBCENSUS_THREADS={env!r} is not an integer") from exc
    threads = 1 if threads is None else threads
    if threads < 1:
        raise InvalidInputError("thread count must be >= 1")
    return threads


def run_census(
    curve: CurveModel,
    X: int,
    threads: Optional[int] = None,
    x_cap: int = DEFAULT_X_CAP,
    factor_bound: int = DEFAULT_TRIAL_BOUND,
) -> CensusReport:
    if X < 2:
        raise InvalidInputError("X must be at least 2")
    if X > x_cap:
        raise CapacityError(f"X = {X} exceeds the configured cap {x_cap}")
    primes = [int(p) for p in primes_up_to(X)]
    n = resolve_threads(threads)
    work = lambda p: frobenius_record(curve, p, factor_bound)  # noqa: E731
    if n == 1:
        records = [work(p) for p in primes]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            # map preserves input order, so the merge is already sorted by p
            records = list(pool.map(work, primes))
    return CensusReport(curve, X, records)


# -- counting functions ------------------------------------------------------------


def pi_F(report: CensusReport, d: int) -> int:
    """#{ordinary simple p <= X : Q(sqrt d) embeds in Q(pi_p)}."""
    sf, m = squarefree_part(d)
    if m != 1 or d <= 1:
        raise InvalidInputError("pi_F needs a squarefree d > 1")
    return sum(1 for r in report.ordinary_simple if is_perfect_square(d * r.delta))


def pi_K(report: CensusReport, key: CmFieldKey) -> int:
    return sum(1 for r in report.ordinary_simple if same_cm_field(r.cm_key, key))


def max_pi_K(report: CensusReport) -> int:
    return max(report.field_multiplicities.values(), default=0)


@dataclass(frozen=True)
class FieldCensus:
    D0: Tuple[int, ...]
    D: Tuple[Tuple[CmFieldKey, int], ...]  # (representative key, sf(gamma))


def field_census(report: CensusReport) -> FieldCensus:
    X = report.X
    psi = psi_bound(2, X)
    d0s = sorted(report.d0_multiplicities)
    if any(d > 48 * X for d in d0s):
        raise ConsistencyError("a real subfield label exceeds 48X")
    first_sf = {}
    for rec in report.ordinary_simple:
        for key in report.field_multiplicities:
            if same_cm_field(key, rec.cm_key):
                first_sf.setdefault(key, rec.sf_gamma)
                break
    D = tuple((k, first_sf[k]) for k in report.field_multiplicities)
    if any(abs(sf) > psi for _, sf in D):
        raise ConsistencyError("sf(gamma) exceeds psi_2(sqrt X)")
    if len(D) < len(d0s):
        raise ConsistencyError("fewer CM fields than real subfields")
    return FieldCensus(tuple(d0s), D)


def pigeonhole_bound(report: CensusReport) -> Fraction:
    """count(ordinary simple) / max multiplicity; asserted <= #D."""
    n = report.counts["ordinarysimple"]
    if n == 0:
        raise InvalidInputError("pigeonhole bound needs at least one ordinary simple prime")
    bound = Fraction(n, max_pi_K(report))
    if len(report.field_multiplicities) < bound:
        raise ConsistencyError("pigeonhole inequality violated")
    return bound


# -- persistence -----------------------------------------------------------------------


def dumps_jsonl(report: CensusReport) -> str:
    return "".join(json.dumps(r.to_json(), separators=(",", ":")) + "\n" for r in report.records)


def dumps_csv(report: CensusReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "class", "t1", "a2", "d0", "sf_gamma"])
    for r in report.records:
        w.writerow([r.p, r.cls.value] + ["" if v is None else v for v in (r.t1, r.a2, r.d0, r.sf_gamma)])
    return buf.getvalue()


def summary(report: CensusReport) -> dict:
    out = {
        "schema": 1,
        "curve": list(report.curve.f),
        "label": report.curve.label,
        "X": report.X,
        "counts": report.counts,
        "max_pi_K": max_pi_K(report),
        "max_pi_F": max(report.d0_multiplicities.values(), default=0),
        "num_D0": len(report.d0_multiplicities),
        "num_D": len(report.field_multiplicities),
        "pigeonhole_bound": None,
    }
    if report.counts["ordinarysimple"]:
        b = pigeonhole_bound(report)
        out["pigeonhole_bound"] = str(b)
    return out


def write_report(report: CensusReport, out_dir: Path, stem: str = "census") -> Dict[str, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "jsonl": out_dir / f"{stem}.jsonl",
        "csv": out_dir / f"{stem}.csv",
        "summary": out_dir / f"{stem}_summary.json",
    }
    paths["jsonl"].write_text(dumps_jsonl(report), encoding="utf-8")
    paths["csv"].write_text(dumps_csv(report), encoding="utf-8")
    paths["summary"].write_text(json.dumps(summary(report), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return paths


def load_jsonl(text: str) -> List[FrobeniusRecord]:
    return [FrobeniusRecord.from_json(json.loads(line)) for line in text.splitlines() if line.strip()]
