from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from goldlight.bilinear import Subspace, SymmetricForm, identity, inverse, mat_mul, rank
from goldlight.golden import (
    GoldenStructure,
    InvalidGoldenStructure,
    InvalidProductStructure,
    NotInvariant,
    ProductStructure,
    block_product,
    eigen_split,
    golden_candidate,
    golden_from_product,
    phi_projector,
    product_from_golden,
    psi_projector,
    verify_golden,
)
from goldlight.scalar import ONE, PHI, R2, ZERO, ExtScalar

from conftest import SIGNS


def metric8():
    return SymmetricForm.diagonal([ExtScalar(s) for s in SIGNS], ZERO)


def unit(i, n=8):
    return tuple(ONE if j == i else ZERO for j in range(n))


def test_half_coefficient_is_golden_and_compatible():
    rep = verify_golden(golden_candidate(block_product(4, 4), Fraction(1, 2)), metric8())
    assert rep.ok
    assert all(x.is_zero() for m in rep.residuals.values() for row in m for x in row)


def test_inverse_root_two_coefficient_fails():
    rep = verify_golden(golden_candidate(block_product(4, 4), R2 / 2), metric8())
    assert rep.verdicts == {"square": False, "symmetric": True, "pythagorean": False}
    assert not rep.ok


def test_round_trip():
    F = block_product(4, 4)
    P = golden_from_product(F)
    assert product_from_golden(P).F == F.F
    assert P.P[0][0] == PHI and P.P[7][7] == ONE - PHI


def test_validation():
    with pytest.raises(InvalidProductStructure):
        ProductStructure(((ONE, ONE), (ZERO, ONE)))
    with pytest.raises(InvalidGoldenStructure):
        GoldenStructure(((ONE, ZERO), (ZERO, ONE)))
    assert not block_product(1, 1).is_compatible(SymmetricForm(((ZERO, ONE), (ONE, ZERO))))


def test_eigen_split():
    P = golden_from_product(block_product(4, 4))
    whole = Subspace(tuple(unit(i) for i in range(8)))
    phi, psi = eigen_split(P, whole)
    assert (phi.dim, psi.dim) == (4, 4)
    d0 = Subspace(((ZERO, ZERO, ZERO, ONE, ZERO, ONE, ZERO, ZERO), (ZERO, ZERO, ZERO, ONE, ZERO, -ONE, ZERO, ZERO)))
    phi, psi = eigen_split(P, d0)
    assert phi.equals(Subspace((unit(3),))) and psi.equals(Subspace((unit(5),)))
    with pytest.raises(NotInvariant):
        eigen_split(P, Subspace(((ONE, ONE, ZERO, ZERO, ZERO, ZERO, ZERO, ONE),)))


@st.composite
def product_structures(draw):
    n = draw(st.integers(1, 6))
    p = draw(st.integers(0, n))
    S = tuple(tuple(ExtScalar(draw(st.integers(-3, 3))) for _ in range(n)) for _ in range(n))
    if rank(S) < n:
        S = identity(n, ONE, ZERO)
    D = tuple(tuple((ONE if i < p else -ONE) if i == j else ZERO for j in range(n)) for i in range(n))
    return ProductStructure(mat_mul(mat_mul(S, D), inverse(S))), p


def check_projectors(F, p):
    n = F.dim
    P = golden_from_product(F)
    A, B = phi_projector(P), psi_projector(P)
    eye = identity(n, ONE, ZERO)
    zero = tuple(tuple(ZERO for _ in range(n)) for _ in range(n))
    assert mat_mul(A, A) == A
    assert mat_mul(B, B) == B
    assert mat_mul(A, B) == zero
    assert tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(A, B)) == eye
    phi, psi = eigen_split(P, Subspace(tuple(eye)))
    assert (phi.dim, psi.dim) == (p, n - p)


@given(product_structures())
def test_projectors_on_random_product_structures(data):
    check_projectors(*data)
