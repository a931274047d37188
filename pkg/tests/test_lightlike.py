from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from goldlight.bilinear import SymmetricForm, rank
from goldlight.golden import block_product
from goldlight.lightlike import (
    AmbientSpace,
    DecompositionError,
    Immersion,
    InvalidAmbient,
    NoScreenExists,
    NotLightlike,
    RankDeficientImmersion,
    Submanifold,
    classify_case,
    decompose,
    tangent_frame,
)
from goldlight.poly import parse_polynomial
from goldlight.scalar import ONE, ZERO, ExtScalar
from goldlight.stclass import golden_form_screen_transversal, st_classify

from conftest import SIGNS, ambient8

Q = Fraction


def E(*xs):
    return tuple(ExtScalar(x) for x in xs)


Z1 = E(1, 0, 1, 0, -1, 0, 0, -1)
Z2 = E(0, 1, 0, 0, 0, 0, 1, 0)
Z3 = E(0, 1, 0, 0, 0, 0, -1, 0)


def test_example1_blocks():
    amb = ambient8()
    dec = decompose(amb, [Z1, Z2, Z3])
    assert (dec.r, dec.screen.dim, dec.ltr.dim, dec.stn.dim) == (1, 2, 1, 4)
    assert dec.rad.basis[0] == Z1
    assert dec.ltr.basis[0] == E(Q(-1, 4), 0, Q(1, 4), 0, Q(1, 4), 0, 0, Q(-1, 4))
    assert dec.stn_labels == ("F.rad", "F.ltr", "D0", "D0")
    assert dec.is_valid()
    assert classify_case(dec) == "r_lightlike"


def test_example1_gram_and_listed_witness():
    amb = ambient8()
    dec = decompose(amb, [Z1, Z2, Z3])
    assert dec.certificates["tangent"] == (E(0, 0, 0), E(0, 0, -2), E(0, -2, 0))
    N = E(Q(-1, 2), 0, 0, 0, Q(1, 2), 0, 0, 0)
    assert amb.g(Z1, N) == ONE
    assert amb.g(N, N) == ExtScalar(Q(-1, 2))


def test_example2_blocks():
    amb = ambient8()
    W1 = E(-1, 0, 1, 0, 1, 0, 1, 0)
    W2 = (ZERO, -ONE, ZERO, -ExtScalar(0, 1), ZERO, ZERO, ZERO, -ONE)
    dec = decompose(amb, [W1, W2])
    assert dec.ltr.basis[0] == E(Q(1, 4), 0, Q(1, 4), 0, Q(-1, 4), 0, Q(1, 4), 0)
    assert dec.stn_labels == ("F.rad", "F.ltr", "F.screen", "D0", "D0")
    assert amb.g(W2, W2) == ExtScalar(2)
    assert dec.is_valid()


def test_both_ltr_constructions_are_valid():
    amb = ambient8()
    for method in ("product-adapted", "minimum-norm"):
        dec = decompose(amb, [Z1, Z2, Z3], method=method)
        assert dec.ltr_method == method
        assert dec.is_valid()


def test_components_sum_back():
    amb = ambient8()
    dec = decompose(amb, [Z1, Z2, Z3])
    v = E(3, -1, 2, 5, Q(1, 2), 0, 7, -2)
    parts = dec.components(v)
    total = [sum((parts[b][i] for b in parts), ZERO) for i in range(8)]
    assert tuple(total) == v


def lorentz(n_pos, n_neg):
    diag = [ExtScalar(1)] * n_pos + [ExtScalar(-1)] * n_neg
    n = n_pos + n_neg
    return AmbientSpace.build(SymmetricForm.diagonal(diag, ZERO), block_product(n, 0))


@pytest.mark.parametrize(
    "amb, frame, case",
    [
        (lorentz(1, 1), [E(1, 1)], "totally_lightlike"),
        (lorentz(2, 2), [E(1, 0, 1, 0)], "isotropic"),
        (lorentz(2, 1), [E(1, 0, 1), E(0, 1, 0)], "coisotropic"),
        (lorentz(2, 2), [E(1, 0, 1, 0), E(0, 1, 0, 0)], "r_lightlike"),
    ],
)
def test_cases(amb, frame, case):
    assert classify_case(decompose(amb, frame)) == case


def test_errors():
    amb = lorentz(2, 2)
    with pytest.raises(NotLightlike):
        decompose(amb, [E(1, 0, 0, 0)])
    with pytest.raises(RankDeficientImmersion):
        decompose(amb, [E(1, 0, 1, 0), E(2, 0, 2, 0)])
    with pytest.raises(NoScreenExists):
        # the "screen" repeats the radical direction
        decompose(amb, [E(1, 0, 1, 0), E(0, 1, 0, 0)], screen=[(ONE, ZERO)])
    with pytest.raises(InvalidAmbient):
        AmbientSpace.build(SymmetricForm.diagonal(E(1, 0), ZERO), block_product(1, 1))
    with pytest.raises(InvalidAmbient):
        # F swaps a positive and a negative direction: not symmetric for g
        AmbientSpace.build(SymmetricForm.diagonal(E(1, -1), ZERO), ((ZERO, ONE), (ONE, ZERO)))


def test_immersion_frame_and_rank():
    imm = Immersion(tuple(parse_polynomial(c, 2) for c in ("x1", "x1^2", "x2", "x1 x2")))
    assert imm.frame(E(1, 2)) == [E(1, 2, 0, 2), E(0, 0, 1, 1)]
    flat = Immersion(tuple(parse_polynomial(c, 2) for c in ("x1", "x1", "x1", "x1")))
    with pytest.raises(RankDeficientImmersion):
        tangent_frame(Submanifold(flat, (E(0, 0),)))


def test_listed_curved_variant_is_not_lightlike_at_one():
    # Example 1's immersion with x1^2 added to the 4th and x1 x2 to the 6th coordinate
    comps = ["x1", "x2 + x3", "x1", "x1^2", "x1", "x1 x2", "x2 - x3", "x1"]
    imm = Immersion(tuple(parse_polynomial(c, 3) for c in comps))
    frame = tangent_frame(imm, ambient8(), E(1, 1, 1))
    with pytest.raises(NotLightlike):
        decompose(ambient8(), frame)
    assert decompose(ambient8(), tangent_frame(imm, ambient8(), E(0, 0, 0))).r == 1


# ------------------------------------------------------------------ randomized


@st.composite
def lightlike_frames(draw):
    """A null vector of R^4_2 x R^4_2 plus random vectors orthogonal to it."""
    x1, x2, x5, x6 = (draw(st.integers(-3, 3)) for _ in range(4))
    s = [draw(st.sampled_from((-1, 1))) for _ in range(4)]
    xi = E(x1, x2, s[0] * x1, s[1] * x2, x5, x6, s[2] * x5, s[3] * x6)
    assume(any(not c.is_zero() for c in xi))
    j = next(i for i, c in enumerate(xi) if not c.is_zero())
    frame = [xi]
    for _ in range(draw(st.integers(0, 4))):
        v = [ExtScalar(draw(st.integers(-2, 2))) for _ in range(8)]
        rest = sum((SIGNS[i] * v[i] * xi[i] for i in range(8) if i != j), ZERO)
        v[j] = -rest / (SIGNS[j] * xi[j])
        frame.append(tuple(v))
    assume(rank(frame) == len(frame))
    return frame


def check_random_decomposition(frame):
    amb = ambient8()
    dec = decompose(amb, frame)
    inv = dec.invariants()
    assert all(inv.values()), inv
    cls = st_classify(amb, dec)
    # the F-criterion implies the golden one and matches its strict form
    F_ok = cls.evidence["F_rad_in_stn"]
    if F_ok:
        assert golden_form_screen_transversal(amb, dec)
    assert F_ok == golden_form_screen_transversal(amb, dec, strict=True)
    if dec.ltr_method == "product-adapted":
        assert cls.evidence["ltr_lemma_holds"]


@settings(deadline=None)
@given(lightlike_frames())
def test_random_lightlike_frames(frame):
    check_random_decomposition(frame)


def test_golden_criterion_alone_is_weaker():
    # F xi = a xi + Z with Z in S(TM^perp): only the non-strict golden form holds
    frame = [E(1, 1, 1, 1, -2, -1, -2, -1), E(-1, -2, -2, -1, 1, -2, 0, 0)]
    amb = ambient8()
    dec = decompose(amb, frame)
    assert not st_classify(amb, dec).evidence["F_rad_in_stn"]
    assert golden_form_screen_transversal(amb, dec)
    assert not golden_form_screen_transversal(amb, dec, strict=True)


def test_transversal_lemma_depends_on_screen():
    # with the default screen no null transversal bundle has F(ltr) in S(TM^perp)
    frame = [E(0, 1, 0, -1, 0, -1, 0, -1), E(0, -1, 1, 1, 0, 1, 0, 1)]
    amb = ambient8()
    dec = decompose(amb, frame)
    ev = st_classify(amb, dec).evidence
    assert dec.ltr_method == "minimum-norm"
    assert ev["F_rad_in_stn"] and not ev["F_ltr_in_stn"]
    # shifting the screen vector by xi repairs it
    dec = decompose(amb, frame, screen=[(ONE, ONE)])
    ev = st_classify(amb, dec).evidence
    assert dec.ltr_method == "product-adapted"
    assert ev["F_rad_in_stn"] and ev["F_ltr_in_stn"]


def test_decomposition_error_is_value_error():
    assert issubclass(DecompositionError, ValueError)
