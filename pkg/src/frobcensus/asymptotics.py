"""Explicit Chebotarev error terms and sieve-exponent balancing.

The sieve bound has the shape

    S(A) << X log z / z + z^{2g+2} R(z, X),   R ~ z^E X^{1/2} log X,

where the z-exponent E of the Chebotarev error is 4g^2 (GRH), 2g^2
(GRH + AHC) or g^2 (GRH + AHC + PCC).  Balancing z = X^theta gives
1 - theta = 1/2 + theta (E + 2g + 2).  All of this is exact rational
arithmetic; only the formula evaluators use floats, in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

from scipy import integrate

from .errors import InvalidInputError
from .numth import is_prime


class Regime(Enum):
    GRH = "GRH"
    GRH_AHC = "GRH_AHC"
    GRH_AHC_PCC = "GRH_AHC_PCC"
    UNCONDITIONAL = "UNCONDITIONAL"


DEFAULT_CONSTANTS = {"A": 1.0, "B": 1.0, "B_prime": 1.0, "c_prime": 1.0}


def li(X: float) -> float:
    """Integral of dt / log t from 2 to X (substituting t = e^u)."""
    if X < 2:
        raise InvalidInputError("li needs X >= 2")
    if X == 2:
        return 0.0
    val, err = integrate.quad(
        lambda u: math.exp(u) / u, math.log(2.0), math.log(X), epsabs=0.0, epsrel=1e-13, limit=400
    )
    return val


def log_li(log_x: float) -> float:
    """log li(X) from log X, via li(X) ~ X / log X (1 + 1/log X + 2/log^2 X) for huge X."""
    if log_x < math.log(2.0):
        raise InvalidInputError("li needs X >= 2")
    if log_x < 600:
        v = li(math.exp(log_x))
        return math.log(v) if v > 0 else -math.inf
    return log_x - math.log(log_x) + math.log1p(1 / log_x + 2 / log_x**2)


# -- explicit Chebotarev ----------------------------------------------------------------


@dataclass(frozen=True)
class ChebotarevProfile:
    """Data of a Galois extension L/Q entering the error terms.

    ``G_size`` defaults to n_L; ``G_tilde`` and ``C_tilde`` are the sizes used
    by the PCC and unconditional items.
    """

    n_L: int
    ramified: Tuple[int, ...] = ()
    C_size: int = 1
    class_count: Optional[int] = None
    G_size: Optional[int] = None
    G_tilde: Optional[int] = None
    C_tilde: Optional[int] = None

    def __post_init__(self):
        if self.n_L < 1:
            raise InvalidInputError("n_L must be >= 1")
        if any(not is_prime(p) for p in self.ramified):
            raise InvalidInputError("ramified entries must be prime")
        object.__setattr__(self, "ramified", tuple(sorted(set(self.ramified))))

    @property
    def order(self) -> int:
        return self.G_size if self.G_size is not None else self.n_L


def disc_bounds(profile: ChebotarevProfile) -> Tuple[float, float]:
    """(lo, hi) with lo <= log|d_L| <= hi from the ramified primes."""
    s = sum(math.log(p) for p in profile.ramified)
    n = profile.n_L
    lo = n / 2 * s
    hi = (n - 1) * s + n * math.log(n)
    return lo, hi


@dataclass(frozen=True)
class ErrorEstimate:
    regime: Regime
    log_value: float
    gate: Optional[bool] = None

    @property
    def value(self) -> float:
        return math.exp(self.log_value) if self.log_value < 700 else math.inf


def chebotarev_error(
    regime: Regime,
    profile: ChebotarevProfile,
    X: Optional[float] = None,
    *,
    log_x: Optional[float] = None,
    constants: Optional[Dict[str, float]] = None,
    log_dL: Optional[float] = None,
) -> ErrorEstimate:
    """R_C(X) bound with implied constants 1 (or ``constants``).

    Give either X or log_x; everything is evaluated through logs so that
    X = 10^(10^3) is fine.  log|d_L| defaults to the upper bound of disc_bounds.
    """
    regime = Regime(regime)
    k = dict(DEFAULT_CONSTANTS, **(constants or {}))
    if log_x is None:
        if X is None or X < 2:
            raise InvalidInputError("need X >= 2")
        log_x = math.log(X)
    elif log_x < math.log(2.0):
        raise InvalidInputError("need X >= 2")
    if log_dL is None:
        log_dL = disc_bounds(profile)[1]
    n = profile.n_L
    log_M = math.log(profile.order) + sum(math.log(p) for p in profile.ramified)
    half = 0.5 * log_x
    if regime is Regime.GRH:
        val = math.log(profile.C_size) + half + math.log(log_dL / n + log_x)
        return ErrorEstimate(regime, val)
    if regime is Regime.GRH_AHC:
        val = 0.5 * math.log(profile.C_size) + half + math.log(log_M + log_x)
        return ErrorEstimate(regime, val)
    if regime is Regime.GRH_AHC_PCC:
        if profile.G_tilde is None:
            raise InvalidInputError("the PCC bound needs G_tilde")
        ratio = math.log(profile.G_tilde) - math.log(profile.order)
        val = 0.5 * math.log(profile.C_size) + half + 0.25 * ratio + math.log(log_M + log_x)
        return ErrorEstimate(regime, val)
    # unconditional: gate  log X >= B' #G (log|d_L|)^2
    gate_rhs = math.log(k["B_prime"]) + math.log(profile.order) + (2 * math.log(log_dL) if log_dL > 0 else -math.inf)
    gate = math.log(log_x) >= gate_rhs
    # log of max(|d_L|^{1/n_L}, log|d_L|)
    log_max = max(log_dL / n, math.log(log_dL) if log_dL > 0 else -math.inf)
    shrunk = log_x - k["B"] * log_x * math.exp(-log_max)
    t1 = math.log(profile.C_size) - math.log(profile.order) + (
        log_li(shrunk) if shrunk > math.log(2.0) else -math.inf
    )
    c_tilde = profile.C_tilde if profile.C_tilde is not None else profile.C_size
    t2 = math.log(c_tilde) + log_x - k["A"] * math.sqrt(log_x / n)
    hi, lo = max(t1, t2), min(t1, t2)
    val = hi + (math.log1p(math.exp(lo - hi)) if lo > -math.inf else 0.0)
    return ErrorEstimate(regime, val, gate)


# -- exponent balancing -----------------------------------------------------------------


def gsp_size_exponent(g: int) -> int:
    """#GSp_{2g}(Z/lq) ~ z^{4g^2 + 2g + 2} for l, q ~ z."""
    return 4 * g * g + 2 * g + 2


def r_exponent(regime: Regime, g: int, G_exponent: Optional[int] = None) -> Fraction:
    """z-exponent E of max R_lq (up to X^{1/2} log X) from the Chebotarev items.

    #C << z^{4g^2}; AHC takes a square root; PCC multiplies by
    (#G~/#G)^{1/4} with #G~ ~ z^{2g+2} and #G ~ z^{G_exponent}.
    """
    regime = Regime(regime)
    if regime is Regime.GRH:
        return Fraction(4 * g * g)
    if regime is Regime.GRH_AHC:
        return Fraction(2 * g * g)
    if regime is Regime.GRH_AHC_PCC:
        G = gsp_size_exponent(g) if G_exponent is None else G_exponent
        return Fraction(2 * g * g) + Fraction((2 * g + 2) - G, 4)
    raise InvalidInputError("no power-of-z balancing in the unconditional regime")


def printed_theta(regime: Regime, g: int) -> Dict[str, Fraction]:
    """The exponents as printed: general-g closed forms and the g = 2 specializations."""
    regime = Regime(regime)
    general = {
        Regime.GRH: Fraction(1, 8 * g * g + 4 * g + 6),
        Regime.GRH_AHC: Fraction(1, 4 * g * g + 4 * g + 6),
        Regime.GRH_AHC_PCC: Fraction(1, 2 * g * g + 4 * g + 6),
    }[regime]
    out = {"general": general}
    if g == 2:
        out["g2"] = {Regime.GRH: Fraction(1, 46), Regime.GRH_AHC: Fraction(1, 30),
                     Regime.GRH_AHC_PCC: Fraction(1, 23)}[regime]
    return out


@dataclass
class ExponentProfile:
    g: int
    regime: Regime
    theta: Optional[Fraction]
    final_exponent: Optional[Fraction]
    r_exponent: Optional[Fraction] = None
    printed: Dict[str, object] = field(default_factory=dict)
    constants: Dict[str, float] = field(default_factory=lambda: dict(DEFAULT_CONSTANTS))
    notes: Tuple[str, ...] = ()
    # unconditional regime only
    z_log_power: Optional[Fraction] = None
    z_loglog_power: Optional[Fraction] = None
    loglog_exponent: Optional[Fraction] = None
    log_exponent: Optional[Fraction] = None
    gate_exponent: Optional[int] = None

    @property
    def matches_printed(self) -> bool:
        if self.theta is not None:
            return all(v == self.theta for v in self.printed.values())
        return (
            self.printed.get("z_log_power") == self.z_log_power
            and self.printed.get("loglog_exponent") == self.loglog_exponent
            and self.printed.get("log_exponent") == self.log_exponent
        )

    def to_json(self) -> dict:
        s = lambda v: None if v is None else str(v)  # noqa: E731
        out = {
            "g": self.g,
            "regime": self.regime.value,
            "theta": s(self.theta),
            "final_exponent": s(self.final_exponent),
            "r_exponent": s(self.r_exponent),
            "printed_value": {k: s(v) for k, v in self.printed.items()},
            "status": "match" if self.matches_printed else "discrepancy",
            "notes": list(self.notes),
        }
        if self.regime is Regime.UNCONDITIONAL:
            out.update(
                z_log_power=s(self.z_log_power),
                z_loglog_power=s(self.z_loglog_power),
                loglog_exponent=s(self.loglog_exponent),
                log_exponent=s(self.log_exponent),
                gate_exponent=self.gate_exponent,
            )
        return out


def balance(E: Fraction, g: int) -> Fraction:
    """theta solving 1 - theta = 1/2 + theta (E + 2g + 2)."""
    return Fraction(1, 2) / (E + 2 * g + 3)


def optimal_theta(regime: Regime, g: int, G_exponent: Optional[int] = None) -> ExponentProfile:
    if g < 1:
        raise InvalidInputError("g must be >= 1")
    regime = Regime(regime)
    if regime is Regime.UNCONDITIONAL:
        raise InvalidInputError("use unconditional_profile for the unconditional regime")
    E = r_exponent(regime, g, G_exponent)
    theta = balance(E, g)
    if not 0 < theta < Fraction(1, 2):
        raise InvalidInputError(f"balanced theta {theta} out of range")
    printed = printed_theta(regime, g)
    notes = []
    if regime is Regime.GRH_AHC_PCC and g == 2 and G_exponent is None:
        alt = balance(r_exponent(regime, g, 4 * g * g + 2 * g), g)
        notes.append(
            f"printed g=2 value 1/23 corresponds to #G ~ z^{4 * g * g + 2 * g} "
            f"(n(lq) ~ (lq)^10), giving theta = {alt}; the group order is (lq)^11 ~ z^22"
        )
    return ExponentProfile(g, regime, theta, 1 - theta, E, printed, notes=tuple(notes))


def unconditional_exponents(g: int) -> Dict[str, Fraction]:
    """Exponents from the gate log X >= #G (log|d_L|)^2 with #G ~ z^N, log|d_L| ~ z^N log z.

    The gate reads z^{3N} (log z)^2 <= log X, so z = (log X)^{1/3N} / (log log X)^{2/3N};
    then X log z / (z log X) gives (log log X)^{1 + 2/3N} / (log X)^{1 + 1/3N}.
    """
    N = gsp_size_exponent(g)
    E = 3 * N
    return {
        "gate_exponent": E,
        "z_log_power": Fraction(1, E),
        "z_loglog_power": Fraction(2, E),
        "loglog_exponent": 1 + Fraction(2, E),
        "log_exponent": 1 + Fraction(1, E),
    }


def printed_unconditional(g: int) -> Dict[str, Fraction]:
    general = {
        "gate_exponent": 8 * g * g + 6 * g + 4,
        "z_log_power": Fraction(1, 8 * g * g + 6 * g + 4),
        "z_loglog_power": Fraction(1, 4 * g * g + 3 * g + 2),
        "loglog_exponent": 1 + Fraction(1, 4 * g * g + 3 * g + 2),
        "log_exponent": 1 + Fraction(1, 8 * g * g + 6 * g + 4),
    }
    if g == 2:
        return {
            "general": general,
            "g2": {
                "gate_exponent": 66,
                "z_log_power": Fraction(1, 66),
                "z_loglog_power": Fraction(1, 33),
                "loglog_exponent": Fraction(23, 22),
                "log_exponent": Fraction(67, 66),
            },
        }
    return {"general": general}


@dataclass(frozen=True)
class UnconditionalPoint:
    log_x: float
    z: float
    gate_lhs: float  # log log X
    gate_rhs: float  # log(B' z^{3N} (log z)^2)
    gate_ok: bool
    log_bound: float  # log of X (loglog X)^a / (log X)^b


def unconditional_z(g: int, log_x: float, constants: Optional[Dict[str, float]] = None) -> float:
    k = dict(DEFAULT_CONSTANTS, **(constants or {}))
    ex = unconditional_exponents(g)
    llx = math.log(log_x)
    return k["c_prime"] * math.exp(float(ex["z_log_power"]) * llx - float(ex["z_loglog_power"]) * math.log(llx))


def unconditional_point(g: int, log_x: float, constants: Optional[Dict[str, float]] = None) -> UnconditionalPoint:
    if log_x <= math.e:
        raise InvalidInputError("need log log X > 1")
    k = dict(DEFAULT_CONSTANTS, **(constants or {}))
    ex = unconditional_exponents(g)
    z = unconditional_z(g, log_x, k)
    lz = math.log(z)
    rhs = math.log(k["B_prime"]) + ex["gate_exponent"] * lz + (2 * math.log(abs(lz)) if lz != 0 else -math.inf)
    lhs = math.log(log_x)
    llx = math.log(log_x)
    bound = log_x + float(ex["loglog_exponent"]) * math.log(llx) - float(ex["log_exponent"]) * llx
    return UnconditionalPoint(log_x, z, lhs, rhs, lhs >= rhs, bound)


def unconditional_profile(g: int, X: Optional[float] = None, *, log_x: Optional[float] = None,
                          constants: Optional[Dict[str, float]] = None,
                          sweep: Sequence[float] = (1e3, 1e4, 1e6, 1e9)) -> Tuple[ExponentProfile, list]:
    """Exponent data plus gate checks at log X = ``log_x`` (or log X) and over ``sweep``."""
    if log_x is None and X is not None:
        log_x = math.log(X)
    points = [unconditional_point(g, lx, constants) for lx in ([log_x] if log_x else []) + list(sweep)]
    ex = unconditional_exponents(g)
    printed = printed_unconditional(g)
    ref = printed.get("g2", printed["general"])
    notes = []
    for key in ("gate_exponent", "z_log_power", "z_loglog_power", "loglog_exponent", "log_exponent"):
        if ex[key] != ref[key]:
            notes.append(f"{key}: derived {ex[key]}, printed {ref[key]}")
    if g == 2:
        for key, v in printed["general"].items():
            if v != printed["g2"][key]:
                notes.append(f"{key}: general-g formula at g=2 gives {v}, g=2 specialization prints {printed['g2'][key]}")
    prof = ExponentProfile(
        g,
        Regime.UNCONDITIONAL,
        theta=None,
        final_exponent=None,
        printed={k: v for k, v in ref.items() if k != "gate_exponent"},
        constants=dict(DEFAULT_CONSTANTS, **(constants or {})),
        notes=tuple(notes),
        z_log_power=ex["z_log_power"],
        z_loglog_power=ex["z_loglog_power"],
        loglog_exponent=ex["loglog_exponent"],
        log_exponent=ex["log_exponent"],
        gate_exponent=ex["gate_exponent"],
    )
    return prof, points


def exponent_table(g: int) -> list:
    rows = [optimal_theta(r, g).to_json() for r in (Regime.GRH, Regime.GRH_AHC, Regime.GRH_AHC_PCC)]
    prof, _ = unconditional_profile(g)
    rows.append(prof.to_json())
    return rows
