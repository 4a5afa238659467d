"""Augmented complexes, the deformed differential, and the chain maps.

Starting from a base complex (V, d) and augmentation data (skyscraper
spaces A^k with maps gamma_k : V^k -> A^k satisfying gamma_k d_{k-1} = 0),
two total complexes are built on T^k = V^k (+) A^{k-1}:

* the *tilde* flavor, whose differential sends (w, a) to (d w, gamma(w));
* the *deformed* flavor, which first projects w onto harmonics.

The unipotent map m that corrects the A-component by gamma(I^-1(w_1)),
where I is the restriction of d to the image of d*, intertwines the two
differentials; both that identity and the equality of cohomology in every
degree are checked exactly and reported.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import (
    CochainComplex,
    cohomology_dims,
    euler_characteristic,
    harmonic_projector,
    hodge_decompose,
)
from .errors import ValidationError
from .linalg import (
    GramForm,
    Matrix,
    matrix_inverse,
    orthogonal_projector,
)


@dataclass(frozen=True)
class AugmentationData:
    """Skyscraper spaces A^0..A^{n-1}, their Gram forms, and the maps
    gamma_k : V^k -> A^k."""

    a_dims: tuple[int, ...]
    a_grams: tuple[GramForm, ...]
    gammas: tuple[Matrix, ...]

    def __post_init__(self):
        if not (len(self.a_dims) == len(self.a_grams) == len(self.gammas)):
            raise ValidationError("a_dims, a_grams and gammas must have equal length")
        for k, (a, g, gm) in enumerate(zip(self.a_dims, self.a_grams, self.gammas)):
            if a < 0:
                raise ValidationError(f"a_dims[{k}] is negative")
            if g.dim != a:
                raise ValidationError(f"a_grams[{k}] has dim {g.dim}, expected {a}")
            if gm.rows != a:
                raise ValidationError(f"gammas[{k}] has {gm.rows} rows, expected {a}")
        # Cache of assembled total complexes, keyed by (flavor, flag); the
        # base object is stored alongside and compared by identity.
        object.__setattr__(self, "_built", {})

    @classmethod
    def trivial(cls, n: int, base_dims) -> "AugmentationData":
        return cls(
            tuple(0 for _ in range(n)),
            tuple(GramForm.standard(0) for _ in range(n)),
            tuple(Matrix.zeros(0, base_dims[k]) for k in range(n)),
        )

    def validate_against(self, base: CochainComplex) -> None:
        n = base.max_degree
        if len(self.a_dims) != n:
            raise ValidationError(
                f"augmentation has {len(self.a_dims)} levels, base needs {n}"
            )
        for k, gm in enumerate(self.gammas):
            if gm.cols != base.dims[k]:
                raise ValidationError(
                    f"gammas[{k}] has {gm.cols} cols, base degree {k} has dim {base.dims[k]}"
                )
            if k >= 1 and not (gm @ base.differential(k - 1)).is_zero():
                raise ValidationError(f"gamma_{k} d_{k - 1} != 0")


@dataclass(frozen=True)
class AugmentedComplex:
    """Total complex with degree-k space V^k (+) A^{k-1} and orthogonal
    direct-sum Gram forms."""

    base: CochainComplex
    aug: AugmentationData
    total: CochainComplex
    flavor: str  # "tilde" or "deformed"


def _total_dims(base: CochainComplex, aug: AugmentationData) -> tuple[int, ...]:
    n = base.max_degree
    return tuple(
        base.dims[k] + (aug.a_dims[k - 1] if k >= 1 else 0) for k in range(n + 1)
    )


def _total_grams(base: CochainComplex, aug: AugmentationData) -> tuple[GramForm, ...]:
    n = base.max_degree
    grams = [base.grams[0]]
    for k in range(1, n + 1):
        grams.append(GramForm.direct_sum(base.grams[k], aug.a_grams[k - 1]))
    return tuple(grams)


def _assemble(base, aug, effective_gammas, flavor) -> AugmentedComplex:
    n = base.max_degree
    dims = _total_dims(base, aug)
    diffs = []
    for k in range(n):
        a_prev = aug.a_dims[k - 1] if k >= 1 else 0
        d_block = Matrix.block([
            [base.differential(k), Matrix.zeros(base.dims[k + 1], a_prev)],
            [effective_gammas[k], Matrix.zeros(aug.a_dims[k], a_prev)],
        ])
        diffs.append(d_block)
    total = CochainComplex(dims, tuple(diffs), _total_grams(base, aug))
    return AugmentedComplex(base, aug, total, flavor)


def _cached_build(base, aug, key, builder) -> AugmentedComplex:
    cache = aug._built  # type: ignore[attr-defined]
    hit = cache.get(key)
    if hit is not None and hit[0] is base:
        return hit[1]
    built = builder()
    cache[key] = (base, built)
    return built


def build_tilde_complex(base: CochainComplex, aug: AugmentationData) -> AugmentedComplex:
    """Total complex whose differential is (w, a) -> (d w, gamma(w)).

    Squares to zero exactly because gamma_k d_{k-1} = 0.
    """
    aug.validate_against(base)
    return _cached_build(
        base, aug, ("tilde",),
        lambda: _assemble(base, aug, list(aug.gammas), "tilde"),
    )


def build_deformed_complex(
    base: CochainComplex,
    aug: AugmentationData,
    project_degree_zero: bool = True,
) -> AugmentedComplex:
    """Total complex whose differential is (w, a) -> (d w, gamma(P w)),
    with P the harmonic projector of the base degree.

    ``project_degree_zero=False`` leaves gamma_0 unprojected; the square
    of the differential is still zero because harmonics are orthogonal to
    the image of d.
    """
    aug.validate_against(base)

    def builder():
        eff = []
        for k in range(base.max_degree):
            if k == 0 and not project_degree_zero:
                eff.append(aug.gammas[0])
            else:
                eff.append(aug.gammas[k] @ harmonic_projector(base, k))
        return _assemble(base, aug, eff, "deformed")

    return _cached_build(base, aug, ("deformed", project_degree_zero), builder)


@dataclass(frozen=True)
class RestrictedIso:
    """d_k restricted to the image of d_k^*, in the Hodge bases.

    ``matrix`` maps coordinates in ``domain_basis`` (columns spanning
    Im(d_k^*) in degree k) to coordinates in ``codomain_basis`` (columns
    spanning Im(d_k) in degree k+1); ``inverse`` is its exact inverse.
    """

    degree: int
    matrix: Matrix
    inverse: Matrix
    domain_basis: Matrix
    codomain_basis: Matrix


def iso_restricted_d(base: CochainComplex, k: int) -> RestrictedIso:
    """The invertible restriction of d_k to the Im(d_k^*) summand."""
    if not 0 <= k < base.max_degree:
        raise ValidationError(
            f"degree {k} out of range 0..{base.max_degree - 1}"
        )
    return base._memoized(("restricted_iso", k), lambda: _iso_restricted_d(base, k))


def _iso_restricted_d(base: CochainComplex, k: int) -> RestrictedIso:
    dom = hodge_decompose(base, k).image_dstar.basis
    cod = hodge_decompose(base, k + 1).image_d.basis
    mapped = base.differential(k) @ dom
    # Express each mapped column in the codomain basis.
    from .linalg import solve

    cols = []
    for j in range(mapped.cols):
        coords = solve(cod, mapped.column(j))
        if coords is None:
            raise ValidationError(
                f"d({k}) does not carry Im(d*) into Im(d) in degree {k}"
            )
        cols.append(coords)
    mat = Matrix.from_columns(cols, rows=cod.cols)
    inv = matrix_inverse(mat) if mat.rows else Matrix.zeros(0, 0)
    return RestrictedIso(k, mat, inv, dom, cod)


def _component_coords(base: CochainComplex, k: int) -> tuple[Matrix, Matrix, Matrix]:
    """Row blocks extracting Hodge coordinates (harmonic, im d, im d*)
    of a degree-k vector."""
    return base._memoized(("component_coords", k), lambda: _component_coords_raw(base, k))


def _component_coords_raw(base: CochainComplex, k: int) -> tuple[Matrix, Matrix, Matrix]:
    split = hodge_decompose(base, k)
    full = split.harmonic.basis.hstack(split.image_d.basis).hstack(split.image_dstar.basis)
    inv = matrix_inverse(full)
    h, i, s = split.harmonic.dim, split.image_d.dim, split.image_dstar.dim
    rows = inv.data
    return (
        Matrix(h, base.dims[k], rows[:h]),
        Matrix(i, base.dims[k], rows[h:h + i]),
        Matrix(s, base.dims[k], rows[h + i:]),
    )


def chain_map_m(base: CochainComplex, aug: AugmentationData) -> list[Matrix]:
    """The unipotent comparison map per total degree.

    In total degree k >= 1 it adds gamma_{k-1}(I^{-1}(w_1)) to the
    A-component, where w_1 is the Im(d_{k-1}) component of the V-part.
    """
    return _chain_maps(base, aug, +1)


def chain_map_m_inverse(base: CochainComplex, aug: AugmentationData) -> list[Matrix]:
    """Exact inverse of :func:`chain_map_m` (same correction, negated)."""
    return _chain_maps(base, aug, -1)


def _chain_maps(base, aug, sign: int) -> list[Matrix]:
    aug.validate_against(base)
    n = base.max_degree
    maps = [Matrix.identity(base.dims[0])]
    for k in range(1, n + 1):
        v, a = base.dims[k], aug.a_dims[k - 1]
        iso = iso_restricted_d(base, k - 1)
        _, im_coords, _ = _component_coords(base, k)
        # V^k -> A^{k-1}: extract the Im(d) component, pull back through
        # the restricted iso, apply gamma in degree k-1.
        correction = aug.gammas[k - 1] @ iso.domain_basis @ iso.inverse @ im_coords
        if sign < 0:
            correction = -correction
        maps.append(Matrix.block([
            [Matrix.identity(v), Matrix.zeros(v, a)],
            [correction, Matrix.identity(a)],
        ]))
    return maps


# -- verification reports --------------------------------------------------

@dataclass(frozen=True)
class IdentityCheck:
    degree: int
    identity: str
    ok: bool
    mismatch: tuple | None = None  # (row, col, lhs, rhs) of first bad entry

    def to_json_dict(self) -> dict:
        out = {"degree": self.degree, "identity": self.identity, "ok": self.ok}
        if self.mismatch is not None:
            r, c, lhs, rhs = self.mismatch
            out["first_mismatch"] = {
                "row": r, "col": c, "lhs": str(lhs), "rhs": str(rhs),
            }
        return out


@dataclass(frozen=True)
class ChainMapReport:
    checks: tuple[IdentityCheck, ...]
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [c.to_json_dict() for c in self.checks],
        }


def _compare(lhs: Matrix, rhs: Matrix, degree: int, name: str) -> IdentityCheck:
    if lhs == rhs:
        return IdentityCheck(degree, name, True)
    for i in range(lhs.rows):
        for j in range(lhs.cols):
            if lhs.entry(i, j) != rhs.entry(i, j):
                return IdentityCheck(degree, name, False, (i, j, lhs.entry(i, j), rhs.entry(i, j)))
    return IdentityCheck(degree, name, False)


def verify_chain_maps(
    base: CochainComplex,
    aug: AugmentationData,
) -> ChainMapReport:
    """Check that m intertwines the deformed and tilde differentials.

    Per total degree: m d = d~ m and m^-1 d~ = d m^-1, plus m m^-1 = id
    and (m - id)^2 = 0, all as exact matrix equalities.
    """
    tilde = build_tilde_complex(base, aug)
    deformed = build_deformed_complex(base, aug)
    m = chain_map_m(base, aug)
    minv = chain_map_m_inverse(base, aug)
    n = base.max_degree
    checks: list[IdentityCheck] = []
    for k in range(n):
        d_def = deformed.total.differential(k)
        d_til = tilde.total.differential(k)
        checks.append(_compare(m[k + 1] @ d_def, d_til @ m[k], k, "m∘d = d~∘m"))
        checks.append(_compare(minv[k + 1] @ d_til, d_def @ minv[k], k, "m⁻¹∘d~ = d∘m⁻¹"))
    for k in range(n + 1):
        ident = Matrix.identity(m[k].rows)
        checks.append(_compare(m[k] @ minv[k], ident, k, "m∘m⁻¹ = id"))
        nil = m[k] - ident
        checks.append(_compare(nil @ nil, Matrix.zeros(m[k].rows, m[k].cols), k, "(m − id)² = 0"))
    return ChainMapReport(tuple(checks), all(c.ok for c in checks))


@dataclass(frozen=True)
class CohomologyReport:
    tilde_dims: tuple[int, ...]
    deformed_dims: tuple[int, ...]
    dims_match: bool
    chi_total: int
    chi_base: int
    signed_aug_sum: int
    euler_ok: bool
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "passed": self.passed,
            "tilde_cohomology": list(self.tilde_dims),
            "deformed_cohomology": list(self.deformed_dims),
            "dims_match": self.dims_match,
            "chi_total": self.chi_total,
            "chi_base": self.chi_base,
            "signed_aug_sum": self.signed_aug_sum,
            "euler_ok": self.euler_ok,
        }


def verify_cohomology_match(
    base: CochainComplex,
    aug: AugmentationData,
    project_degree_zero: bool = True,
) -> CohomologyReport:
    """Compare cohomology of the two flavors degree by degree, and check
    the Euler ledger chi(total) = chi(base) - sum_k (-1)^k a_k."""
    tilde = build_tilde_complex(base, aug)
    deformed = build_deformed_complex(base, aug, project_degree_zero)
    t_dims = cohomology_dims(tilde.total)
    d_dims = cohomology_dims(deformed.total)
    dims_match = t_dims == d_dims
    chi_total = euler_characteristic(deformed.total)
    chi_base = euler_characteristic(base)
    signed = sum((-1) ** k * a for k, a in enumerate(aug.a_dims))
    euler_ok = chi_total == chi_base - signed
    return CohomologyReport(
        t_dims, d_dims, dims_match, chi_total, chi_base, signed, euler_ok,
        dims_match and euler_ok,
    )
