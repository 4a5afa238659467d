"""Integer index identities: the curve Euler characteristic and the
resolution index ledger.

The ledger decomposes chi(O_X) into a Todd integral minus skyscraper
corrections.  Two sign conventions for the higher corrections circulate;
this module takes the one where the degree-i term enters with (-1)^(i-1)
as authoritative, evaluates the alternative alongside it for n >= 2, and
never silently picks between them in reports.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvariantViolation, StabilizationError, ValidationError
from .singularities import (
    CurveSingularity,
    DeltaResult,
    delta_stabilized,
    DEFAULT_TRUNCATION,
    MAX_TRUNCATION,
)


@dataclass(frozen=True)
class IndexLedger:
    """Todd integral plus skyscraper dimensions for an n-dimensional space.

    ``higher`` holds a_1..a_n; the top entry a_n must vanish.
    """

    n: int
    todd_integral: int
    a0: int
    higher: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("ledger dimension n must be >= 1")
        if self.a0 < 0:
            raise ValidationError("a0 must be >= 0")
        if len(self.higher) != self.n:
            raise ValidationError(
                f"higher must list a_1..a_{self.n} ({self.n} entries), "
                f"got {len(self.higher)}"
            )
        if any(a < 0 for a in self.higher):
            raise ValidationError("skyscraper dimensions must be >= 0")
        if self.higher[-1] != 0:
            raise ValidationError(
                f"a_{self.n} must be 0: the top skyscraper vanishes on a resolution"
            )


def chi_via_ledger(ledger: IndexLedger) -> int:
    """todd - a0 + sum_{i=1}^n (-1)^(i-1) a_i."""
    chi = ledger.todd_integral - ledger.a0
    for i, a in enumerate(ledger.higher, start=1):
        chi += (-1) ** (i - 1) * a
    return chi


def chi_via_ledger_alternative(ledger: IndexLedger) -> int:
    """Same ledger with the higher terms entering as (-1)^i instead.

    Agrees with :func:`chi_via_ledger` whenever all higher entries vanish
    (in particular for n = 1).
    """
    chi = ledger.todd_integral - ledger.a0
    for i, a in enumerate(ledger.higher, start=1):
        chi += (-1) ** i * a
    return chi


def curve_chi(g: int, deltas) -> int:
    """1 - g - sum(deltas): the curve index in terms of the geometric
    genus and the local delta invariants."""
    return 1 - g - sum(deltas)


@dataclass(frozen=True)
class PlaneCurveData:
    degree: int
    singularities: tuple[CurveSingularity, ...]

    def __post_init__(self):
        if self.degree < 1:
            raise ValidationError("curve degree must be >= 1")


@dataclass(frozen=True)
class CurveReport:
    degree: int
    p_a: int
    g: int
    sum_delta: int
    chi: int
    deltas: tuple[DeltaResult, ...]
    ledger: IndexLedger

    def to_json_dict(self) -> dict:
        return {
            "degree": self.degree,
            "p_a": self.p_a,
            "g": self.g,
            "sum_delta": self.sum_delta,
            "chi": self.chi,
            "deltas": [d.to_json_dict() for d in self.deltas],
            "ledger": {
                "n": self.ledger.n,
                "todd_integral": self.ledger.todd_integral,
                "a0": self.ledger.a0,
                "higher": list(self.ledger.higher),
            },
        }


def plane_curve_report(
    data: PlaneCurveData,
    truncation: int = DEFAULT_TRUNCATION,
    max_truncation: int = MAX_TRUNCATION,
) -> CurveReport:
    """Full integer bookkeeping for a plane curve of given degree.

    Arithmetic genus p_a = (d-1)(d-2)/2 from the genus-degree formula,
    geometric genus g = p_a - sum(delta), chi = 1 - g - sum(delta); the
    identity chi = 1 - p_a and the agreement with the equivalent ledger
    are asserted, not assumed.
    """
    d = data.degree
    p_a = (d - 1) * (d - 2) // 2
    deltas = tuple(
        delta_stabilized(s, truncation, max_truncation) for s in data.singularities
    )
    sum_delta = sum(r.delta for r in deltas)
    if sum_delta > p_a:
        raise ValidationError(
            f"sum of deltas {sum_delta} exceeds arithmetic genus {p_a}: "
            f"these singularities cannot lie on a degree-{d} curve"
        )
    g = p_a - sum_delta
    chi = curve_chi(g, [r.delta for r in deltas])
    if chi != 1 - p_a:
        raise InvariantViolation(f"chi {chi} != 1 - p_a = {1 - p_a}")
    ledger = IndexLedger(n=1, todd_integral=1 - g, a0=sum_delta, higher=(0,))
    if chi_via_ledger(ledger) != chi:
        raise InvariantViolation("ledger evaluation disagrees with curve chi")
    return CurveReport(d, p_a, g, sum_delta, chi, deltas, ledger)
