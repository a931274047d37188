"""Almost product structures F and golden structures P on a flat ambient space.

The two are interchangeable: ``P = (I + sqrt5 F) / 2`` and ``F = (2P - I) / sqrt5``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .bilinear import (
    Subspace,
    SymmetricForm,
    identity,
    mat_mul,
    mat_vec,
    rank,
    transpose,
)
from .scalar import ONE, PHI, R5, ZERO, ExtScalar, is_zero

__all__ = [
    "InvalidProductStructure",
    "InvalidGoldenStructure",
    "NotInvariant",
    "ProductStructure",
    "GoldenStructure",
    "GoldenReport",
    "block_product",
    "golden_candidate",
    "golden_from_product",
    "product_from_golden",
    "verify_golden",
    "eigen_split",
    "is_invariant",
    "phi_projector",
    "psi_projector",
]


class InvalidProductStructure(ValueError):
    pass


class InvalidGoldenStructure(ValueError):
    pass


class NotInvariant(ValueError):
    pass


def _ext_matrix(m):
    return tuple(tuple(ExtScalar.coerce(x) for x in row) for row in m)


def _lin(a, m1, b, m2):
    """``a*m1 + b*m2`` entrywise."""
    return tuple(
        tuple(a * x + b * y for x, y in zip(r1, r2)) for r1, r2 in zip(m1, m2)
    )


def _is_zero_matrix(m) -> bool:
    return all(is_zero(x) for row in m for x in row)


@dataclass(frozen=True)
class ProductStructure:
    """``F`` with ``F^2 = I``."""

    F: tuple

    def __post_init__(self):
        F = _ext_matrix(self.F)
        object.__setattr__(self, "F", F)
        if any(len(row) != len(F) for row in F):
            raise InvalidProductStructure("F must be square")
        eye = identity(len(F), ONE, ZERO)
        if not _is_zero_matrix(_lin(ONE, mat_mul(F, F), -ONE, eye)):
            raise InvalidProductStructure("F^2 != I")

    @property
    def dim(self) -> int:
        return len(self.F)

    def apply(self, v):
        return mat_vec(self.F, v)

    def is_compatible(self, g: SymmetricForm) -> bool:
        # g(FW, U) = g(W, FU)  <=>  F^T G is symmetric
        gf = mat_mul(transpose(self.F), g.entries)
        return _is_zero_matrix(_lin(ONE, gf, -ONE, transpose(gf)))


@dataclass(frozen=True)
class GoldenStructure:
    """``P`` with ``P^2 = P + I``."""

    P: tuple
    _checked: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        P = _ext_matrix(self.P)
        object.__setattr__(self, "P", P)
        if self._checked and not _is_zero_matrix(golden_residual(P)):
            raise InvalidGoldenStructure("P^2 != P + I")

    @property
    def dim(self) -> int:
        return len(self.P)

    def apply(self, v):
        return mat_vec(self.P, v)


def block_product(p: int, q: int) -> ProductStructure:
    """``F = diag(I_p, -I_q)``: the structure ``pi_* - sigma_*`` of a product."""
    n = p + q
    rows = tuple(
        tuple((ONE if i < p else -ONE) if i == j else ZERO for j in range(n))
        for i in range(n)
    )
    return ProductStructure(rows)


def golden_residual(P):
    """``P^2 - P - I``."""
    n = len(P)
    sq = mat_mul(P, P)
    return tuple(
        tuple(sq[i][j] - P[i][j] - (ONE if i == j else ZERO) for j in range(n))
        for i in range(n)
    )


def golden_candidate(F, coefficient) -> tuple:
    """``coefficient * (I + sqrt5 F)`` as a raw matrix, not validated."""
    if isinstance(F, ProductStructure):
        F = F.F
    F = _ext_matrix(F)
    c = ExtScalar.coerce(coefficient)
    n = len(F)
    eye = identity(n, ONE, ZERO)
    return _lin(c, eye, c * R5, F)


def golden_from_product(F) -> GoldenStructure:
    if not isinstance(F, ProductStructure):
        F = ProductStructure(F)
    return GoldenStructure(golden_candidate(F, Fraction(1, 2)))


def product_from_golden(P) -> ProductStructure:
    if isinstance(P, GoldenStructure):
        P = P.P
    P = _ext_matrix(P)
    if not _is_zero_matrix(golden_residual(P)):
        raise InvalidGoldenStructure("P^2 != P + I")
    n = len(P)
    inv_r5 = R5 / 5
    return ProductStructure(_lin(2 * inv_r5, P, -inv_r5, identity(n, ONE, ZERO)))


@dataclass(frozen=True)
class GoldenReport:
    residuals: dict  # name -> residual matrix
    verdicts: dict  # name -> bool

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())


def verify_golden(P, g: SymmetricForm) -> GoldenReport:
    """Exact residuals of ``P^2 = P + I``, ``g(PW,U) = g(W,PU)`` and
    ``g(PW,PU) = g(PW,U) + g(W,U)``.  Accepts an unvalidated matrix."""
    if isinstance(P, GoldenStructure):
        P = P.P
    P = _ext_matrix(P)
    G = g.entries
    if len(P) != len(G):
        raise ValueError("dimension mismatch between P and g")
    Pt = transpose(P)
    ptg = mat_mul(Pt, G)
    gp = mat_mul(G, P)
    res = {
        "square": golden_residual(P),
        "symmetric": _lin(ONE, ptg, -ONE, gp),
        "pythagorean": _lin(ONE, mat_mul(ptg, P), -ONE, _lin(ONE, ptg, ONE, G)),
    }
    return GoldenReport(res, {k: _is_zero_matrix(v) for k, v in res.items()})


def phi_projector(P) -> tuple:
    """``(P - (1-phi) I) / sqrt5``: projector onto the phi-eigenspace."""
    if isinstance(P, GoldenStructure):
        P = P.P
    n = len(P)
    inv_r5 = R5 / 5
    return _lin(inv_r5, P, -(ONE - PHI) * inv_r5, identity(n, ONE, ZERO))


def psi_projector(P) -> tuple:
    """``(phi I - P) / sqrt5``: projector onto the (1-phi)-eigenspace."""
    if isinstance(P, GoldenStructure):
        P = P.P
    n = len(P)
    inv_r5 = R5 / 5
    return _lin(PHI * inv_r5, identity(n, ONE, ZERO), -inv_r5, P)


def is_invariant(M, space: Subspace) -> bool:
    """rank [B | MB] == rank B."""
    if isinstance(M, (GoldenStructure, ProductStructure)):
        M = M.P if isinstance(M, GoldenStructure) else M.F
    if not space.basis:
        return True
    images = [mat_vec(M, v) for v in space.basis]
    return rank(list(space.basis) + images) == rank(space.basis)


def _span_basis(vectors) -> Subspace:
    chosen: list = []
    for v in vectors:
        if rank(chosen + [v]) > len(chosen):
            chosen.append(v)
    return Subspace(tuple(chosen))


def eigen_split(P, space: Subspace) -> tuple[Subspace, Subspace]:
    """Split a P-invariant subspace into its phi and (1 - phi) parts."""
    if isinstance(P, GoldenStructure):
        P = P.P
    if not is_invariant(P, space):
        raise NotInvariant("subspace is not invariant under P")
    pp, pq = phi_projector(P), psi_projector(P)
    phi = _span_basis([mat_vec(pp, v) for v in space.basis])
    psi = _span_basis([mat_vec(pq, v) for v in space.basis])
    return phi, psi
