import pytest
from hypothesis import given, settings

from goldlight.bilinear import Subspace
from goldlight.lightlike import decompose
from goldlight.scalar import R5, ZERO, ExtScalar, is_zero
from goldlight.stclass import (
    NotScreenTransversalVector,
    NotTangent,
    WrongClassKind,
    d0_invariance,
    golden_tangent_parts,
    split_tangent,
    split_transversal,
    st_classify,
)

from conftest import ambient8, geometry
from test_lightlike import lightlike_frames


def E(*xs):
    return tuple(ExtScalar(x) for x in xs)


W3 = E(0, 0, 0, 1, 0, 1, 0, 0)
W4 = E(0, 0, 0, 1, 0, -1, 0, 0)


def test_example1_radical_class_and_d0():
    cls = geometry("example1").cls
    assert cls.kind == "radical_screen_transversal"
    assert cls.D0.equals(Subspace((W3, W4)))
    amb = ambient8()
    FD0 = Subspace(tuple(amb.apply_F(u) for u in cls.D0.basis))
    assert FD0.equals(cls.D0)
    assert d0_invariance(amb, cls).ok


def test_example2_anti_invariant():
    geom = geometry("example2")
    cls = geom.cls
    assert cls.kind == "screen_transversal_anti_invariant"
    assert set(cls.blocks) == {"F.rad", "F.ltr", "F.screen"}
    assert cls.D0.dim == 2 and d0_invariance(ambient8(), cls).ok


@pytest.mark.parametrize("name, kind", [
    ("curved1", "radical_screen_transversal"),
    ("curved2", "screen_transversal_anti_invariant"),
])
@pytest.mark.parametrize("index", [0, 1])
def test_curved_classes(name, kind, index):
    cls = geometry(name, index).cls
    assert cls.kind == kind
    assert cls.evidence["blocks_fill_stn"] and cls.evidence["D0_nondegenerate"]


def test_blocks_are_mutually_orthogonal():
    amb = ambient8()
    for name in ("example1", "example2", "curved2"):
        cls = geometry(name).cls
        pair = list(cls.blocks["F.rad"]) + list(cls.blocks["F.ltr"])
        scr = list(cls.blocks.get("F.screen", []))
        d0 = list(cls.D0.basis)
        for group, others in ((pair, scr + d0), (scr, d0)):
            assert all(amb.g(a, b).is_zero() for a in group for b in others)


def test_not_screen_transversal_has_no_d0():
    # xi = e1 + e3 is F-invariant, so F xi is tangent
    amb = ambient8()
    dec = decompose(amb, [E(1, 0, 1, 0, 0, 0, 0, 0)])
    cls = st_classify(amb, dec)
    assert cls.kind == "not_screen_transversal"
    with pytest.raises(WrongClassKind):
        d0_invariance(amb, cls)


def test_split_tangent():
    dec = geometry("example1").dec
    Z1, Z2 = dec.rad.basis[0], E(0, 1, 0, 0, 0, 0, 1, 0)
    W = tuple(a * 3 + b for a, b in zip(Z1, Z2))
    sp = split_tangent(dec, W)
    assert sp.RW == tuple(a * 3 for a in Z1)
    assert sp.SW == Z2
    with pytest.raises(NotTangent):
        split_tangent(dec, E(1, 0, 0, 0, 0, 0, 0, 0))


def test_split_transversal_pattern():
    geom = geometry("example2")
    dec, cls = geom.dec, geom.cls
    U = tuple(sum((v[i] for v in dec.stn.basis), ZERO) for i in range(8))
    sp = split_transversal(ambient8(), dec, cls, U)
    assert sp.pattern_ok
    total = tuple(sum((p[i] for p in sp.parts.values()), ZERO) for i in range(8))
    assert total == U
    with pytest.raises(NotScreenTransversalVector):
        split_transversal(ambient8(), dec, cls, dec.rad.basis[0])
    with pytest.raises(WrongClassKind):
        g1 = geometry("example1")
        split_transversal(ambient8(), g1.dec, g1.cls, g1.dec.stn.basis[0])


def test_classification_does_not_depend_on_frame_order():
    geom = geometry("example1")
    frame = list(reversed(geom.tangent_basis))
    assert st_classify(ambient8(), decompose(ambient8(), frame)).kind == geom.cls.kind


@settings(deadline=None, max_examples=60)
@given(lightlike_frames())
def test_d0_certificate_on_random_frames(frame):
    amb = ambient8()
    dec = decompose(amb, frame)
    cls = st_classify(amb, dec)
    if cls.kind == "not_screen_transversal":
        return
    if cls.evidence["blocks_fill_stn"] and cls.evidence["D0_nondegenerate"]:
        assert d0_invariance(amb, cls).ok
        assert all(amb.g(u, v).is_zero() for u in cls.D0.basis for vs in cls.blocks.values() for v in vs)


def test_split_transversal_listed_vectors():
    geom = geometry("example2")
    dec, cls, amb = geom.dec, geom.cls, ambient8()
    Z1, Z2 = dec.rad.basis[0], geom.tangent_basis[1]
    W1 = amb.apply_F(Z1)
    sp = split_transversal(amb, dec, cls, W1)
    assert sp.parts["F.rad"] == W1
    assert sp.images["B1U"] == tuple((w + R5 * z) / 2 for w, z in zip(W1, Z1))
    assert sp.patterns["B1U"] == ("rad", "stn")
    FZ2 = amb.apply_F(Z2)
    sp = split_transversal(amb, dec, cls, FZ2)
    assert sp.patterns["C1U"] == ("screen", "stn") and sp.pattern_ok
    for u in cls.D0.basis:
        sp = split_transversal(amb, dec, cls, u)
        assert [k for k, v in sp.parts.items() if any(not is_zero(x) for x in v)] == ["D0"]
        assert cls.D0.contains(sp.images["C2U"])


def test_golden_tangent_parts_keep_tangent_components():
    for name, s1_blocks in (("example1", ("screen",)), ("example2", ("stn",))):
        dec = geometry(name).dec
        W = tuple(a + b for a, b in zip(dec.rad.basis[0], dec.screen.basis[0]))
        parts = golden_tangent_parts(ambient8(), dec, W)
        assert parts["S1W_blocks"] == s1_blocks
        assert parts["S2W_blocks"] == ("rad", "stn")
