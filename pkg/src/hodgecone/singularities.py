"""Delta invariants of plane-curve germs from branch parametrizations.

A singularity is given as a list of Puiseux branches t -> (x(t), y(t))
with integer exponents and rational coefficients.  The delta invariant is
the codimension of the monomial algebra inside the product of truncated
power-series rings on the branches; past the conductor that codimension
stops moving when the truncation order grows, which is the stabilization
test used throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import InvariantViolation, StabilizationError, ValidationError
from .linalg import parse_rational

_INF = None  # valuation of the zero series

DEFAULT_TRUNCATION = 16
MAX_TRUNCATION = 256


@dataclass(frozen=True)
class PuiseuxBranch:
    """One branch t -> (x(t), y(t)), each series a tuple of
    (exponent, coefficient) pairs with strictly increasing exponents."""

    x_terms: tuple[tuple[int, Q], ...]
    y_terms: tuple[tuple[int, Q], ...]

    def __post_init__(self):
        if not self.x_terms and not self.y_terms:
            raise ValidationError("branch has no terms at all")
        exponents = []
        for name, terms in (("x", self.x_terms), ("y", self.y_terms)):
            prev = 0
            for e, c in terms:
                if e < 1:
                    raise ValidationError(
                        f"{name}-series exponent {e} < 1: branch must pass through the origin"
                    )
                if e <= prev:
                    raise ValidationError(
                        f"{name}-series exponents not strictly increasing at {e}"
                    )
                if c == 0:
                    raise ValidationError(f"{name}-series has a zero coefficient at t^{e}")
                prev = e
                exponents.append(e)
        g = 0
        for e in exponents:
            g = gcd(g, e)
        if g != 1:
            raise ValidationError(
                f"branch is not primitive: all exponents share the factor {g}"
            )

    @classmethod
    def from_pairs(cls, x_pairs, y_pairs) -> "PuiseuxBranch":
        def conv(pairs):
            return tuple((int(e), parse_rational(c)) for e, c in pairs)
        return cls(conv(x_pairs), conv(y_pairs))

    def series(self, which: str, order: int) -> list[Q]:
        """Coefficient list of x or y modulo t^order."""
        terms = self.x_terms if which == "x" else self.y_terms
        coeffs = [Q(0)] * order
        for e, c in terms:
            if e < order:
                coeffs[e] = c
        return coeffs

    def valuation(self, which: str):
        """Smallest exponent, or None for the zero series."""
        terms = self.x_terms if which == "x" else self.y_terms
        return terms[0][0] if terms else None

    def is_smooth(self) -> bool:
        vx, vy = self.valuation("x"), self.valuation("y")
        return vx == 1 or vy == 1


@dataclass(frozen=True)
class CurveSingularity:
    branches: tuple[PuiseuxBranch, ...]

    def __post_init__(self):
        if not self.branches:
            raise ValidationError("a singularity needs at least one branch")
        seen = set()
        for b in self.branches:
            key = (b.x_terms, b.y_terms)
            if key in seen:
                raise ValidationError("two branches have identical parametrizations")
            seen.add(key)
        # Reparametrized duplicates are not caught here; they surface as
        # non-stabilization of the delta computation.


@dataclass(frozen=True)
class DeltaResult:
    delta: int
    stabilized: bool
    truncation: int

    def to_json_dict(self) -> dict:
        return {
            "delta": self.delta,
            "stabilized": self.stabilized,
            "truncation": self.truncation,
        }


def _series_mul(a: list[Q], b: list[Q], order: int) -> list[Q]:
    out = [Q(0)] * order
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        top = order - i
        for j in range(min(len(b), top)):
            if b[j] != 0:
                out[i + j] += ai * b[j]
    return out


def _monomial_valuation(branch_vals, a: int, b: int):
    """Valuation of x^a y^b on one branch, None meaning infinity."""
    vx, vy = branch_vals
    v = 0
    if a:
        if vx is None:
            return None
        v += a * vx
    if b:
        if vy is None:
            return None
        v += b * vy
    return v


class _RowBasis:
    """Incremental row-echelon basis for computing the span dimension of
    a growing family of rational vectors."""

    def __init__(self):
        self.rows: dict[int, list[Q]] = {}  # pivot index -> normalized row

    def add(self, vec: list[Q]) -> bool:
        v = vec
        for pivot in sorted(self.rows):
            if pivot < len(v) and v[pivot] != 0:
                f = v[pivot]
                row = self.rows[pivot]
                v = [x - f * y for x, y in zip(v, row)]
        for i, x in enumerate(v):
            if x != 0:
                inv = 1 / x
                self.rows[i] = [c * inv for c in v]
                return True
        return False

    @property
    def dim(self) -> int:
        return len(self.rows)


def _delta_at(s: CurveSingularity, order: int) -> int:
    """r*order - dim(span of monomial images) in the truncated product ring."""
    r = len(s.branches)
    xs = [b.series("x", order) for b in s.branches]
    ys = [b.series("y", order) for b in s.branches]
    vals = [(b.valuation("x"), b.valuation("y")) for b in s.branches]

    # Cache powers of x and y per branch, built on demand.
    xpow = [[[Q(1)] + [Q(0)] * (order - 1)] for _ in range(r)]
    ypow = [[[Q(1)] + [Q(0)] * (order - 1)] for _ in range(r)]

    def power(cache, base, bi, k):
        series_list = cache[bi]
        while len(series_list) <= k:
            series_list.append(_series_mul(series_list[-1], base[bi], order))
        return series_list[k]

    basis = _RowBasis()
    target = r * order
    a = 0
    while True:
        # Stop once x^a alone is beyond the truncation on every branch.
        a_vals = [_monomial_valuation(v, a, 0) for v in vals]
        if all(v is None or v >= order for v in a_vals) and a > 0:
            break
        b = 0
        while True:
            mono_vals = [_monomial_valuation(v, a, b) for v in vals]
            if all(v is None or v >= order for v in mono_vals):
                break
            vec: list[Q] = []
            for bi in range(r):
                if mono_vals[bi] is None or mono_vals[bi] >= order:
                    vec.extend([Q(0)] * order)
                else:
                    prod = _series_mul(
                        power(xpow, xs, bi, a), power(ypow, ys, bi, b), order
                    )
                    vec.extend(prod)
            basis.add(vec)
            if basis.dim == target:
                return 0
            b += 1
        a += 1
    return target - basis.dim


def delta_bruteforce(s: CurveSingularity, truncation: int = DEFAULT_TRUNCATION) -> DeltaResult:
    """Delta at the given truncation, with a stabilization verdict.

    The codimension is computed at both ``truncation`` and
    ``truncation + 1``; equality certifies that the truncation is past the
    conductor and the value is the true delta invariant.
    """
    if truncation < 2:
        raise ValidationError("truncation must be at least 2")
    d_n = _delta_at(s, truncation)
    d_n1 = _delta_at(s, truncation + 1)
    return DeltaResult(d_n, d_n == d_n1, truncation)


def delta_stabilized(
    s: CurveSingularity,
    start: int = DEFAULT_TRUNCATION,
    cap: int = MAX_TRUNCATION,
) -> DeltaResult:
    """Delta with truncation doubling until stabilization, up to the cap."""
    n = start
    while True:
        result = delta_bruteforce(s, n)
        if result.stabilized:
            return result
        if n >= cap:
            raise StabilizationError(
                f"delta did not stabilize up to truncation {cap}; "
                "branches may coincide after reparametrization"
            )
        n = min(2 * n, cap)


def delta_semigroup(branch: PuiseuxBranch):
    """Gap count of the value semigroup for a two-monomial branch
    x = t^a, y = c t^b with gcd(a, b) = 1; None for any other shape.

    The count equals (a-1)(b-1)/2.
    """
    if len(branch.x_terms) != 1 or len(branch.y_terms) != 1:
        return None
    a = branch.x_terms[0][0]
    b = branch.y_terms[0][0]
    if gcd(a, b) != 1:
        return None
    return (a - 1) * (b - 1) // 2


def intersection_multiplicity(
    s: CurveSingularity,
    i: int,
    j: int,
    start: int = DEFAULT_TRUNCATION,
    cap: int = MAX_TRUNCATION,
) -> int:
    """delta({i,j}) - delta({i}) - delta({j}); at least 1 for distinct
    branches through the origin."""
    if i == j:
        raise ValidationError("branch indices must differ")
    for idx in (i, j):
        if not 0 <= idx < len(s.branches):
            raise ValidationError(f"branch index {idx} out of range")
    pair = CurveSingularity((s.branches[i], s.branches[j]))
    d_pair = delta_stabilized(pair, start, cap).delta
    d_i = delta_stabilized(CurveSingularity((s.branches[i],)), start, cap).delta
    d_j = delta_stabilized(CurveSingularity((s.branches[j],)), start, cap).delta
    mult = d_pair - d_i - d_j
    if mult < 1:
        raise InvariantViolation(
            f"intersection multiplicity {mult} < 1 for branches {i}, {j}"
        )
    return mult


def reparametrized(branch: PuiseuxBranch, unit_terms, order: int) -> PuiseuxBranch:
    """Substitute t -> t * u(t) with u a unit series given as
    (exponent >= 0, coefficient) pairs with u(0) != 0, truncating the
    composed series at ``order``.  Delta is invariant under this."""
    unit = [Q(0)] * order
    for e, c in unit_terms:
        e = int(e)
        if 0 <= e < order:
            unit[e] = parse_rational(c)
    if unit[0] == 0:
        raise ValidationError("substitution must be a unit: constant term is zero")
    # s(t) = t*u(t); precompute its powers.
    subst = [Q(0)] * order
    for e in range(1, order):
        subst[e] = unit[e - 1]
    powers = [[Q(1)] + [Q(0)] * (order - 1)]

    def spow(k):
        while len(powers) <= k:
            powers.append(_series_mul(powers[-1], subst, order))
        return powers[k]

    def compose(terms):
        out = [Q(0)] * order
        for e, c in terms:
            if e < order:
                p = spow(e)
                for idx in range(order):
                    if p[idx] != 0:
                        out[idx] += c * p[idx]
        return tuple((e, c) for e, c in enumerate(out) if c != 0)

    return PuiseuxBranch(compose(branch.x_terms), compose(branch.y_terms))
