"""Screen-transversal classes, the invariant distribution D0 and the
projection splittings of tangent and screen-transversal vectors.

Conditions are tested with the product structure F.  The golden structure
``P = I/2 + (sqrt5/2) F`` always keeps a component along the vector it acts on,
so an inclusion such as ``P(Rad) in S(TM^perp)`` can only hold in its F form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .bilinear import Subspace, gram, lincomb, null_space, rank, solve, transpose
from .lightlike import AmbientSpace, Decomposition
from .scalar import is_zero

__all__ = [
    "KINDS",
    "WrongClassKind",
    "InvarianceFailed",
    "NotTangent",
    "NotScreenTransversalVector",
    "STClassification",
    "TangentSplit",
    "TransversalSplit",
    "st_classify",
    "d0_invariance",
    "split_tangent",
    "golden_tangent_parts",
    "split_transversal",
    "golden_form_screen_transversal",
]

KINDS = (
    "not_screen_transversal",
    "screen_transversal",
    "radical_screen_transversal",
    "screen_transversal_anti_invariant",
)


class WrongClassKind(ValueError):
    pass


class InvarianceFailed(ArithmeticError):
    pass


class NotTangent(ValueError):
    pass


class NotScreenTransversalVector(ValueError):
    pass


def _inside(space: Subspace, vectors) -> bool:
    vectors = list(vectors)
    if not vectors:
        return True
    if not space.basis:
        return all(all(is_zero(x) for x in v) for v in vectors)
    return rank(list(space.basis) + vectors) == rank(space.basis)


@dataclass
class STClassification:
    kind: str
    dec: Decomposition
    D0: Subspace
    blocks: dict  # label -> list of vectors spanning the F-image blocks inside S(TM^perp)
    evidence: dict = field(default_factory=dict)
    checked_via: str = "F"

    @property
    def is_screen_transversal(self) -> bool:
        return self.kind != "not_screen_transversal"


def st_classify(ambient: AmbientSpace, dec: Decomposition) -> STClassification:
    F = ambient.apply_F
    Frad = [F(x) for x in dec.rad.basis]
    Fltr = [F(N) for N in dec.ltr.basis]
    Fscr = [F(s) for s in dec.screen.basis]
    ev = {
        "F_rad_in_stn": _inside(dec.stn, Frad),
        "F_ltr_in_stn": _inside(dec.stn, Fltr),
        "F_screen_eq_screen": bool(dec.screen.basis) and _inside(dec.screen, Fscr),
        "F_screen_in_stn": bool(dec.screen.basis) and _inside(dec.stn, Fscr),
        "screen_empty": not dec.screen.basis,
    }
    if not ev["F_rad_in_stn"]:
        kind = "not_screen_transversal"
    elif ev["F_screen_eq_screen"]:
        kind = "radical_screen_transversal"
    elif ev["F_screen_in_stn"]:
        kind = "screen_transversal_anti_invariant"
    else:
        kind = "screen_transversal"
    # the transversal counterpart of the radical is forced into S(TM^perp) too
    ev["ltr_lemma_holds"] = (not ev["F_rad_in_stn"]) or ev["F_ltr_in_stn"]

    blocks: dict = {}
    if kind != "not_screen_transversal":
        blocks["F.rad"] = Frad
        if ev["F_ltr_in_stn"]:
            blocks["F.ltr"] = Fltr
        if kind == "screen_transversal_anti_invariant":
            blocks["F.screen"] = Fscr
    images = [v for vs in blocks.values() for v in vs]
    D0 = _complement_in(ambient, images, dec.stn)
    ev["images_independent"] = rank(images) == len(images) if images else True
    ev["D0_nondegenerate"] = (
        rank(gram(ambient.metric, D0.basis)) == D0.dim if D0.basis else True
    )
    ev["blocks_fill_stn"] = len(images) + D0.dim == dec.stn.dim and rank(
        images + list(D0.basis)
    ) == dec.stn.dim
    return STClassification(kind, dec, D0, blocks, ev)


def _complement_in(ambient, vectors, within: Subspace) -> Subspace:
    if not within.basis:
        return Subspace(())
    if not vectors:
        return within
    pairing = [tuple(ambient.g(v, w) for w in within.basis) for v in vectors]
    coeffs = null_space(pairing)
    return Subspace(tuple(lincomb(c, within.basis, ambient.dim) for c in coeffs))


def golden_form_screen_transversal(ambient: AmbientSpace, dec: Decomposition, strict: bool = False) -> bool:
    """``P(Rad) in Rad (+) S(TM^perp)`` with a nonzero S(TM^perp) part for every
    nonzero radical vector.

    This follows from ``F(Rad) in S(TM^perp)`` but not conversely: when
    ``F xi = a xi + Z`` the golden form still holds.  With ``strict`` the
    radical part of ``P xi`` must also be exactly ``xi / 2``, which makes the
    two criteria equivalent.
    """
    if not dec.rad.basis:
        return False
    images = [ambient.apply_P(x) for x in dec.rad.basis]
    target = Subspace(tuple(list(dec.rad.basis) + list(dec.stn.basis)))
    if not _inside(target, images):
        return False
    comps = [dec.components(v) for v in images]
    if strict:
        for x, c in zip(dec.rad.basis, comps):
            if any(not is_zero(a - b * Fraction(1, 2)) for a, b in zip(c["rad"], x)):
                return False
    stn_parts = [c["stn"] for c in comps]
    # nonzero stn-part for every nonzero combination: the parts are independent
    return rank(stn_parts) == len(stn_parts)


@dataclass(frozen=True)
class D0Certificate:
    invariant_F: bool
    invariant_P: bool
    pairings: dict  # name -> tuple of scalars (all should vanish)

    @property
    def ok(self) -> bool:
        return self.invariant_F and self.invariant_P and all(
            all(is_zero(x) for x in vals) for vals in self.pairings.values()
        )


def d0_invariance(ambient: AmbientSpace, cls: STClassification) -> D0Certificate:
    if cls.kind == "not_screen_transversal":
        raise WrongClassKind("D0 is only defined for screen transversal submanifolds")
    dec = cls.dec
    D0 = cls.D0
    F, P, g = ambient.apply_F, ambient.apply_P, ambient.g
    inv_F = _inside(D0, [F(u) for u in D0.basis])
    inv_P = _inside(D0, [P(u) for u in D0.basis])
    PU = [P(u) for u in D0.basis]
    rad, ltr, scr = dec.rad.basis, dec.ltr.basis, dec.screen.basis
    pairings = {
        "PU.xi": tuple(g(a, b) for a in PU for b in rad),
        "PU.N": tuple(g(a, b) for a in PU for b in ltr),
        "PU.Pxi": tuple(g(a, P(b)) for a in PU for b in rad),
        "PU.PN": tuple(g(a, P(b)) for a in PU for b in ltr),
        "PU.W": tuple(g(a, b) for a in PU for b in scr),
        "PU.PW": tuple(g(a, P(b)) for a in PU for b in scr),
    }
    cert = D0Certificate(inv_F, inv_P, pairings)
    if not cert.ok:
        raise InvarianceFailed("D0 is not invariant under the golden structure")
    return cert


@dataclass(frozen=True)
class TangentSplit:
    SW: tuple
    RW: tuple


def split_tangent(dec: Decomposition, W) -> TangentSplit:
    W = tuple(W)
    if not _inside(dec.tangent, [W]):
        raise NotTangent("vector is not tangent")
    c = dec.components(W)
    return TangentSplit(c["screen"], c["rad"])


def _pattern(dec: Decomposition, v) -> tuple:
    comps = dec.components(v)
    return tuple(b for b in ("screen", "rad", "ltr", "stn") if any(not is_zero(x) for x in comps[b]))


def golden_tangent_parts(ambient: AmbientSpace, dec: Decomposition, W) -> dict:
    """``S1 W``, the F-part of ``P(SW)``, and ``S2 W = P(RW)`` with the blocks
    each one touches.

    Neither is assumed to lie in S(TM^perp): ``P(RW)`` keeps ``RW / 2`` and on a
    radical screen transversal submanifold ``F(SW)`` is tangent.
    """
    sp = split_tangent(dec, W)
    S1 = tuple(p - x / 2 for p, x in zip(ambient.apply_P(sp.SW), sp.SW))
    S2 = ambient.apply_P(sp.RW)
    return {"S1W": S1, "S2W": S2, "S1W_blocks": _pattern(dec, S1), "S2W_blocks": _pattern(dec, S2)}


@dataclass(frozen=True)
class TransversalSplit:
    parts: dict  # P1U..P4U keyed by block label
    images: dict  # B1U, B2U, C1U, C2U
    patterns: dict  # image name -> tuple of blocks with a nonzero component
    expected: dict  # image name -> blocks the component is allowed to touch

    @property
    def pattern_ok(self) -> bool:
        return all(set(self.patterns[k]) <= set(self.expected[k]) for k in self.patterns)


_IMAGE_NAMES = (("F.rad", "B1U"), ("F.ltr", "B2U"), ("F.screen", "C1U"), ("D0", "C2U"))
_EXPECTED = {
    "B1U": ("rad", "stn"),
    "B2U": ("ltr", "stn"),
    "C1U": ("screen", "stn"),
    "C2U": ("stn",),
}


def split_transversal(ambient: AmbientSpace, dec: Decomposition, cls: STClassification, U) -> TransversalSplit:
    """Split ``U`` in S(TM^perp) over F(Rad), F(ltr), F(S), D0 and apply P."""
    if cls.kind != "screen_transversal_anti_invariant":
        raise WrongClassKind("the four-block splitting needs the anti-invariant class")
    U = tuple(U)
    if not _inside(dec.stn, [U]):
        raise NotScreenTransversalVector("vector is not in the screen transversal bundle")
    labels, basis = [], []
    for label, _ in _IMAGE_NAMES:
        vecs = cls.blocks.get(label, []) if label != "D0" else list(cls.D0.basis)
        labels += [label] * len(vecs)
        basis += vecs
    coeffs = solve(transpose(basis), U)
    n = ambient.dim
    parts, images, patterns = {}, {}, {}
    for label, name in _IMAGE_NAMES:
        idx = [i for i, l in enumerate(labels) if l == label]
        part = lincomb([coeffs[i] for i in idx], [basis[i] for i in idx], n) if idx else ambient.zero_vector()
        parts[label] = part
        img = ambient.apply_P(part)
        images[name] = img
        patterns[name] = _pattern(dec, img)
    return TransversalSplit(parts, images, patterns, dict(_EXPECTED))
