"""Finite-dimensional cochain complexes with inner products.

A :class:`CochainComplex` carries graded spaces, differentials that square
to zero (validated at construction), and a positive-definite Gram form per
degree.  On top of that the module computes Laplacians, the orthogonal
Hodge splitting of each degree, harmonic projectors, cohomology dimensions
by rank arithmetic, and the Euler characteristic.  Everything is exact.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvariantViolation, ValidationError
from .linalg import (
    GramForm,
    Matrix,
    Subspace,
    gram_adjoint,
    image_basis,
    kernel_basis,
    rank,
)


@dataclass(frozen=True)
class CochainComplex:
    """Graded spaces dims[0..n], differentials d_k: degree k -> k+1,
    and a Gram form per degree."""

    dims: tuple[int, ...]
    differentials: tuple[Matrix, ...]
    grams: tuple[GramForm, ...]

    def __post_init__(self):
        n = len(self.dims) - 1
        if n < 0:
            raise ValidationError("a complex needs at least one degree")
        if any(v < 0 for v in self.dims):
            raise ValidationError("negative dimension in dims")
        if len(self.differentials) != n:
            raise ValidationError(
                f"expected {n} differentials for {n + 1} degrees, "
                f"got {len(self.differentials)}"
            )
        if len(self.grams) != n + 1:
            raise ValidationError("need one Gram form per degree")
        for k, d in enumerate(self.differentials):
            if d.shape != (self.dims[k + 1], self.dims[k]):
                raise ValidationError(
                    f"differentials[{k}] has shape {d.shape}, "
                    f"expected {(self.dims[k + 1], self.dims[k])}"
                )
        for k, g in enumerate(self.grams):
            if g.dim != self.dims[k]:
                raise ValidationError(
                    f"grams[{k}] has dim {g.dim}, expected {self.dims[k]}"
                )
        for k in range(n - 1):
            if not (self.differentials[k + 1] @ self.differentials[k]).is_zero():
                raise ValidationError(f"d_{k + 1} d_{k} != 0")
        # Memo for derived per-degree data (adjoints, Laplacians, Hodge
        # splits); purely a cache, never part of equality.
        object.__setattr__(self, "_memo", {})

    @property
    def max_degree(self) -> int:
        return len(self.dims) - 1

    def check_degree(self, k: int) -> None:
        if not 0 <= k <= self.max_degree:
            raise ValidationError(
                f"degree {k} out of range 0..{self.max_degree}"
            )

    def differential(self, k: int) -> Matrix:
        """d_k for 0 <= k < n."""
        return self.differentials[k]

    def adjoint_differential(self, k: int) -> Matrix:
        """d_k^* : degree k+1 -> degree k, for the chosen Gram forms."""
        return self._memoized(
            ("adjoint", k),
            lambda: gram_adjoint(self.differentials[k], self.grams[k], self.grams[k + 1]),
        )

    def _memoized(self, key, compute):
        memo = self._memo  # type: ignore[attr-defined]
        if key not in memo:
            memo[key] = compute()
        return memo[key]

    @classmethod
    def with_standard_grams(cls, dims, differentials) -> "CochainComplex":
        return cls(
            tuple(dims),
            tuple(differentials),
            tuple(GramForm.standard(v) for v in dims),
        )


@dataclass(frozen=True)
class HodgeSplit:
    """The orthogonal three-way splitting of one degree."""

    degree: int
    harmonic: Subspace
    image_d: Subspace
    image_dstar: Subspace


def laplacian(c: CochainComplex, k: int) -> Matrix:
    """d_k^* d_k + d_{k-1} d_{k-1}^*, omitting absent boundary terms."""
    c.check_degree(k)

    def compute():
        n = c.max_degree
        out = Matrix.zeros(c.dims[k], c.dims[k])
        if k < n:
            out = out + c.adjoint_differential(k) @ c.differential(k)
        if k > 0:
            out = out + c.differential(k - 1) @ c.adjoint_differential(k - 1)
        return out

    return c._memoized(("laplacian", k), compute)


def hodge_decompose(c: CochainComplex, k: int) -> HodgeSplit:
    """Split degree k into harmonic, image of d, and image of d*.

    The three pieces are pairwise orthogonal for the degree-k Gram form
    and their dimensions add up to dims[k]; this is re-checked and a
    failure raises InvariantViolation.
    """
    c.check_degree(k)

    def compute():
        n = c.max_degree
        harmonic = kernel_basis(laplacian(c, k))
        if k > 0:
            img = image_basis(c.differential(k - 1))
        else:
            img = Subspace(c.dims[k], Matrix.zeros(c.dims[k], 0))
        if k < n:
            img_star = image_basis(c.adjoint_differential(k))
        else:
            img_star = Subspace(c.dims[k], Matrix.zeros(c.dims[k], 0))
        if harmonic.dim + img.dim + img_star.dim != c.dims[k]:
            raise InvariantViolation(
                f"Hodge splitting dims {harmonic.dim}+{img.dim}+{img_star.dim} "
                f"!= {c.dims[k]} in degree {k}"
            )
        return HodgeSplit(k, harmonic, img, img_star)

    return c._memoized(("hodge", k), compute)


def harmonic_projector(c: CochainComplex, k: int) -> Matrix:
    """Orthogonal projector onto the kernel of the degree-k Laplacian."""
    from .linalg import orthogonal_projector

    def compute():
        split = hodge_decompose(c, k)
        return orthogonal_projector(split.harmonic, c.grams[k])

    c.check_degree(k)
    return c._memoized(("harmonic_projector", k), compute)


def cohomology_dim(c: CochainComplex, k: int) -> int:
    """dim ker d_k - rank d_{k-1}, by exact rank arithmetic."""
    c.check_degree(k)

    def compute():
        n = c.max_degree
        ker = c.dims[k] - rank(c.differential(k)) if k < n else c.dims[k]
        im = rank(c.differential(k - 1)) if k > 0 else 0
        return ker - im

    return c._memoized(("cohomology", k), compute)


def cohomology_dims(c: CochainComplex) -> tuple[int, ...]:
    return tuple(cohomology_dim(c, k) for k in range(c.max_degree + 1))


def euler_characteristic(c: CochainComplex) -> int:
    """Alternating sum of cohomology dims; equals the alternating sum of
    the space dims by rank bookkeeping."""
    chi = sum((-1) ** k * d for k, d in enumerate(cohomology_dims(c)))
    chi_dims = sum((-1) ** k * v for k, v in enumerate(c.dims))
    if chi != chi_dims:
        raise InvariantViolation(
            f"Euler characteristic mismatch: cohomology gives {chi}, dims give {chi_dims}"
        )
    return chi
