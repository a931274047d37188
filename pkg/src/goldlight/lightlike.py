"""Pointwise decomposition of the ambient tangent space along a lightlike submanifold.

    T N|_M = S(TM)  _|_  [Rad TM (+) ltr TM]  _|_  S(TM^perp)

All routines are generic in the scalar type, so the same code computes the
decomposition exactly, in floating point, or together with its first
derivative (dual numbers) along a parameter direction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .bilinear import (
    DimensionMismatch,
    RankJump,
    SingularMatrix,
    Subspace,
    SymmetricForm,
    dot,
    gram,
    independent_subset,
    inverse,
    lincomb,
    mat_vec,
    null_space,
    rank,
    solve,
)
from .golden import (
    GoldenStructure,
    ProductStructure,
    golden_from_product,
)
from .poly import Polynomial
from .scalar import ZERO, ExtScalar, embed_float, is_exact_zero, is_zero

__all__ = [
    "DecompositionError",
    "NotLightlike",
    "NoScreenExists",
    "RankDeficientImmersion",
    "InvalidAmbient",
    "DimensionMismatch",
    "AmbientSpace",
    "Immersion",
    "Submanifold",
    "Decomposition",
    "tangent_frame",
    "decompose",
    "classify_case",
    "CASES",
]


class DecompositionError(ValueError):
    pass


class NotLightlike(DecompositionError):
    pass


class NoScreenExists(DecompositionError):
    pass


class RankDeficientImmersion(DecompositionError):
    pass


class InvalidAmbient(ValueError):
    pass


CASES = ("r_lightlike", "coisotropic", "isotropic", "totally_lightlike")


# ------------------------------------------------------------------ ambient


@dataclass(frozen=True)
class AmbientSpace:
    """Flat space with a constant metric ``G`` and product structure ``F``.

    ``G``, ``F`` and ``P`` hold scalars of the working type (ExtScalar for
    exact work, float after :meth:`as_float`).
    """

    G: tuple
    F: tuple
    P: tuple
    exact: bool = True

    @classmethod
    def build(cls, metric, F) -> "AmbientSpace":
        form = metric if isinstance(metric, SymmetricForm) else SymmetricForm(
            tuple(tuple(ExtScalar.coerce(x) for x in row) for row in metric)
        )
        prod = F if isinstance(F, ProductStructure) else ProductStructure(F)
        if prod.dim != form.dim:
            raise DimensionMismatch("metric and F have different dimensions")
        if rank(form.entries) != form.dim:
            raise InvalidAmbient("ambient metric is degenerate")
        if not prod.is_compatible(form):
            raise InvalidAmbient("F is not symmetric with respect to the metric")
        golden = golden_from_product(prod)
        return cls(form.entries, prod.F, golden.P)

    def as_float(self) -> "AmbientSpace":
        conv = lambda m: tuple(tuple(embed_float(x) for x in row) for row in m)
        return AmbientSpace(conv(self.G), conv(self.F), conv(self.P), exact=False)

    @property
    def dim(self) -> int:
        return len(self.G)

    @property
    def metric(self) -> SymmetricForm:
        return SymmetricForm(self.G)

    @property
    def product(self) -> ProductStructure:
        return ProductStructure(self.F)

    @property
    def golden(self) -> GoldenStructure:
        return GoldenStructure(self.P)

    def g(self, u, v):
        if len(u) != self.dim or len(v) != self.dim:
            raise DimensionMismatch(f"vectors must have length {self.dim}")
        return dot(u, mat_vec(self.G, v))

    def lower(self, v):
        return mat_vec(self.G, v)

    def apply_F(self, v):
        return mat_vec(self.F, v)

    def apply_P(self, v):
        return mat_vec(self.P, v)

    def zero_vector(self):
        z = ZERO if self.exact else 0.0
        return tuple(z for _ in range(self.dim))


# ---------------------------------------------------------------- immersion


@dataclass(frozen=True)
class Immersion:
    """Polynomial map ``x in R^m -> R^n``."""

    components: tuple  # of Polynomial

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise DimensionMismatch("immersion needs at least one component")
        arity = {p.nvars for p in comps}
        if len(arity) != 1:
            raise DimensionMismatch("components use different numbers of variables")
        partials = tuple(tuple(p.derivative(j) for p in comps) for j in range(self.arity))
        object.__setattr__(self, "_partials", partials)

    @property
    def arity(self) -> int:
        return self.components[0].nvars

    @property
    def target_dim(self) -> int:
        return len(self.components)

    @classmethod
    def linear(cls, frame) -> "Immersion":
        """The linear map ``x -> sum x_j frame_j`` (an explicit frame)."""
        frame = [tuple(ExtScalar.coerce(c) for c in v) for v in frame]
        m = len(frame)
        n = len(frame[0])
        comps = []
        for i in range(n):
            terms = {}
            for j, v in enumerate(frame):
                if not v[i].is_zero():
                    e = [0] * m
                    e[j] = 1
                    terms[tuple(e)] = v[i]
            comps.append(Polynomial.from_dict(m, terms))
        return cls(tuple(comps))

    def partial(self, j: int) -> tuple:
        """Component polynomials of ``d f / d x_j``."""
        return self._partials[j]

    def __call__(self, point, convert=None):
        return tuple(p(point, convert) for p in self.components)

    def frame(self, point, convert=None) -> list:
        """Pushforward of the coordinate fields at ``point``."""
        if len(point) != self.arity:
            raise DimensionMismatch(f"expected {self.arity} coordinates")
        return [tuple(p(point, convert) for p in self._partials[j]) for j in range(self.arity)]


@dataclass(frozen=True)
class Submanifold:
    immersion: Immersion
    points: tuple
    explicit_frame: bool = False

    @classmethod
    def from_frame(cls, frame) -> "Submanifold":
        imm = Immersion.linear(frame)
        return cls(imm, ((ZERO,) * imm.arity,), explicit_frame=True)

    @property
    def m(self) -> int:
        return self.immersion.arity


def tangent_frame(sub, ambient: AmbientSpace | None = None, point=None, convert=None) -> list:
    """Frame of the tangent space: Jacobian columns, or the explicit frame."""
    imm = sub.immersion if isinstance(sub, Submanifold) else sub
    if ambient is not None and imm.target_dim != ambient.dim:
        raise DimensionMismatch(
            f"immersion has {imm.target_dim} components for a {ambient.dim}-dimensional space"
        )
    if point is None:
        point = sub.points[0]
    frame = imm.frame(point, convert)
    if rank(frame) != len(frame):
        raise RankDeficientImmersion("Jacobian does not have full rank at the point")
    return frame


# ------------------------------------------------------------ decomposition


def _min_norm(rows, rhs):
    """Euclidean minimum-norm solution of ``rows x = rhs`` (consistent system)."""
    keep = independent_subset(rows)
    a = [rows[i] for i in keep]
    b = [rhs[i] for i in keep]
    aat = [[dot(r, s) for s in a] for r in a]
    y = solve(aat, b)
    x = lincomb(y, a, len(rows[0]))
    for r, c in zip(rows, rhs):
        if not is_exact_zero(dot(r, x) - c):
            raise SingularMatrix("constraints are inconsistent near the point")
    return x


def _sub_vec(u, v):
    return tuple(a - b for a, b in zip(u, v))


def _add_vec(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _scale_vec(c, v):
    return tuple(c * a for a in v)


def _half(x):
    return x * Fraction(1, 2)


@dataclass
class Decomposition:
    """Bases of the four blocks at one point, with pairing certificates."""

    ambient: AmbientSpace
    frame: tuple
    rad: Subspace
    rad_coeffs: tuple
    screen: Subspace
    screen_coeffs: tuple
    ltr: Subspace
    stn: Subspace
    stn_labels: tuple
    ltr_method: str
    certificates: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.ambient.dim

    @property
    def m(self) -> int:
        return len(self.frame)

    @property
    def r(self) -> int:
        return self.rad.dim

    @property
    def k(self) -> int:
        return self.n - self.m

    @property
    def tangent(self) -> Subspace:
        return Subspace(tuple(self.frame))

    # -- projections -------------------------------------------------------

    def _gram_inverse(self, name):
        cache = self.__dict__.setdefault("_inv", {})
        if name not in cache:
            block = getattr(self, name)
            cache[name] = inverse(gram(self.ambient.metric, block.basis)) if block.dim else ()
        return cache[name]

    def _block_coeffs(self, name, v):
        block = getattr(self, name)
        if not block.dim:
            return ()
        pairings = [self.ambient.g(v, b) for b in block.basis]
        return mat_vec(self._gram_inverse(name), pairings)

    def coefficients(self, v) -> dict:
        """Coefficients of ``v`` over each block basis (exact, via pairings)."""
        g = self.ambient.g
        return {
            "screen": self._block_coeffs("screen", v),
            "rad": tuple(g(v, N) for N in self.ltr.basis),
            "ltr": tuple(g(v, xi) for xi in self.rad.basis),
            "stn": self._block_coeffs("stn", v),
        }

    def components(self, v) -> dict:
        """Block components of ``v``; they sum to ``v``."""
        c = self.coefficients(v)
        out = {}
        for name, coeffs in c.items():
            block = getattr(self, name)
            out[name] = lincomb(coeffs, block.basis, self.n) if block.dim else self.ambient.zero_vector()
        return out

    def tangent_part(self, v):
        c = self.components(v)
        return _add_vec(c["screen"], c["rad"])

    def transversal_part(self, v):
        c = self.components(v)
        return _add_vec(c["ltr"], c["stn"])

    def full_basis(self) -> list:
        return list(self.screen.basis) + list(self.rad.basis) + list(self.ltr.basis) + list(self.stn.basis)

    # -- certificates ------------------------------------------------------

    def invariants(self) -> dict:
        """Exact truth values of every structural invariant."""
        g = self.ambient.g
        form = self.ambient.metric
        zero = lambda vals: all(is_zero(x) for x in vals)
        rad, scr, ltr, stn = self.rad.basis, self.screen.basis, self.ltr.basis, self.stn.basis
        out = {
            "rad_is_radical": zero(g(x, w) for x in rad for w in self.frame),
            "screen_nondegenerate": rank(gram(form, scr)) == len(scr) if scr else True,
            "ltr_dual_to_rad": all(
                is_zero(g(N, xi) - (1 if i == j else 0))
                for i, N in enumerate(ltr)
                for j, xi in enumerate(rad)
            ),
            "ltr_null": zero(g(a, b) for a in ltr for b in ltr),
            "ltr_perp_screen": zero(g(a, b) for a in ltr for b in scr),
            "ltr_perp_stn": zero(g(a, b) for a in ltr for b in stn),
            "stn_perp_tangent": zero(g(a, w) for a in stn for w in self.frame),
            "stn_nondegenerate": rank(gram(form, stn)) == len(stn) if stn else True,
            "dimensions": (
                len(scr) == self.m - self.r
                and len(ltr) == self.r
                and len(stn) == self.n - self.m - self.r
            ),
            "spans_ambient": rank(self.full_basis()) == self.n,
        }
        return out

    def is_valid(self) -> bool:
        return all(self.invariants().values())

    def residuals(self) -> list:
        """Scalars that vanish identically for a valid decomposition field."""
        g = self.ambient.g
        rad, scr, ltr, stn = self.rad.basis, self.screen.basis, self.ltr.basis, self.stn.basis
        out = [g(x, w) for x in rad for w in self.frame]
        out += [g(N, xi) - (1 if i == j else 0) for i, N in enumerate(ltr) for j, xi in enumerate(rad)]
        out += [g(a, b) for a in ltr for b in list(ltr) + list(scr) + list(stn)]
        out += [g(a, w) for a in stn for w in self.frame]
        return out


def _radical(ambient, frame):
    G = gram(ambient.metric, frame)
    coeffs = null_space(G)
    vecs = tuple(lincomb(c, frame, ambient.dim) for c in coeffs)
    return coeffs, vecs, G


def _default_screen(frame, rad_vecs):
    picked = independent_subset(list(frame), start=list(rad_vecs))
    m = len(frame)
    coeffs = []
    for i in picked:
        c = [0] * m
        c[i] = 1
        coeffs.append(tuple(c))
    return coeffs


def _generic_ltr(ambient, rad, screen):
    """Minimum-norm seed per radical vector, then null correction."""
    r = len(rad)
    rows = [ambient.lower(x) for x in rad] + [ambient.lower(s) for s in screen]
    seeds = []
    for i in range(r):
        rhs = [1 if j == i else 0 for j in range(r)] + [0] * len(screen)
        seeds.append(_min_norm(rows, rhs))
    return _null_correct(ambient, seeds, rad, weight=_half)


def _null_correct(ambient, seeds, rad, weight):
    out = []
    for Vi in seeds:
        N = Vi
        for Vj, xj in zip(seeds, rad):
            N = _sub_vec(N, _scale_vec(weight(ambient.g(Vi, Vj)), xj))
        out.append(N)
    return out


def _full_rank(vectors) -> bool:
    """Rank test for optional constructions: a drop at the base value counts
    as failure even when dual parts would hide it."""
    vectors = list(vectors)
    try:
        return rank(vectors) == len(vectors)
    except RankJump:
        return False


def _product_adapted_ltr(ambient, rad, screen):
    """ltr chosen orthogonal to F(screen) and F(rad) so that F maps ltr into
    the screen transversal bundle.  Returns None when not applicable."""
    n = ambient.dim
    Frad = [ambient.apply_F(x) for x in rad]
    Fscr = [ambient.apply_F(s) for s in screen]
    frame = list(rad) + list(screen)
    if any(not is_zero(ambient.g(fx, w)) for fx in Frad for w in frame):
        return None
    if not _full_rank(list(rad) + Frad):
        return None
    try:
        span = [(list(screen) + Fscr)[i] for i in independent_subset(list(screen) + Fscr)]
    except RankJump:
        return None
    if span and not _full_rank(gram(ambient.metric, span)):
        return None
    perp_rows = [ambient.lower(s) for s in span]
    halves = []
    for sgn in (1, -1):
        # rows of (F - sgn I)
        eig_rows = [
            tuple(ambient.F[i][j] - (sgn if i == j else 0) for j in range(n)) for i in range(n)
        ]
        xis = [
            _scale_vec(Fraction(1, 2), _add_vec(x, _scale_vec(sgn, fx)))
            for x, fx in zip(rad, Frad)
        ]
        pair_rows = [ambient.lower(x) for x in xis]
        rows = pair_rows + perp_rows + eig_rows
        seeds = []
        try:
            for i in range(len(rad)):
                rhs = (
                    [Fraction(1, 2) if i == j else 0 for j in range(len(rad))]
                    + [0] * (len(perp_rows) + n)
                )
                seeds.append(_min_norm(rows, rhs))
        except SingularMatrix:
            return None
        halves.append(_null_correct(ambient, seeds, xis, weight=lambda x: x))
    return [_add_vec(a, b) for a, b in zip(*halves)]


def _screen_transversal(ambient, screen, rad, ltr):
    n = ambient.dim
    rows = [ambient.lower(v) for v in list(screen) + list(rad) + list(ltr)]
    raw = null_space(rows, n) if rows else null_space([], n)
    raw = list(raw)
    if not raw:
        return [], []
    target = len(raw)

    def inside(vs):
        return all(
            is_zero(ambient.g(v, w)) for v in vs for w in list(screen) + list(rad) + list(ltr)
        )

    images, labels = [], []
    for label, block in (("F.rad", rad), ("F.ltr", ltr), ("F.screen", screen)):
        fv = [ambient.apply_F(v) for v in block]
        if fv and inside(fv) and _full_rank(images + fv):
            images += fv
            labels += [label] * len(fv)
    if images:
        form = ambient.metric
        pairing = [tuple(form(im, w) for w in raw) for im in images]
        try:
            d0 = [lincomb(c, raw, n) for c in null_space(pairing)]
        except RankJump:
            d0 = []
        basis = images + d0
        if len(basis) == target and _full_rank(basis):
            return basis, labels + ["D0"] * len(d0)
    return raw, ["complement"] * len(raw)


def decompose(ambient: AmbientSpace, frame, screen=None, method: str = "auto") -> Decomposition:
    """Decompose the ambient space along the tangent space spanned by ``frame``.

    ``screen`` optionally gives the screen as coefficient vectors over the
    frame; by default frame vectors are chosen greedily in input order.
    ``method`` picks the ltr construction: ``"product-adapted"`` makes ltr
    orthogonal to the F-images of the radical and the screen when possible,
    ``"minimum-norm"`` always uses the plain seed; ``"auto"`` tries the first.
    """
    if method not in ("auto", "product-adapted", "minimum-norm"):
        raise ValueError(f"unknown ltr method {method!r}")
    frame = [tuple(v) for v in frame]
    if not frame:
        raise DimensionMismatch("empty frame")
    for v in frame:
        if len(v) != ambient.dim:
            raise DimensionMismatch(f"frame vector of length {len(v)} in dimension {ambient.dim}")
    if rank(frame) != len(frame):
        raise RankDeficientImmersion("frame vectors are dependent")
    rad_coeffs, rad, G = _radical(ambient, frame)
    if not rad:
        raise NotLightlike("induced metric is non-degenerate")
    if screen is None:
        screen_coeffs = _default_screen(frame, rad)
    else:
        screen_coeffs = [tuple(c) for c in screen]
        if any(len(c) != len(frame) for c in screen_coeffs):
            raise DimensionMismatch("screen coefficients must match the frame size")
    scr = [lincomb(c, frame, ambient.dim) for c in screen_coeffs]
    if len(scr) != len(frame) - len(rad) or rank(list(rad) + scr) != len(frame):
        raise NoScreenExists("screen is not a complement of the radical")
    if scr and rank(gram(ambient.metric, scr)) != len(scr):
        raise NoScreenExists("screen is degenerate")
    ltr = None
    if method != "minimum-norm":
        ltr = _product_adapted_ltr(ambient, rad, scr)
        if ltr is None and method == "product-adapted":
            raise DecompositionError("product-adapted ltr is not available here")
        method = "product-adapted"
    if ltr is None:
        ltr = _generic_ltr(ambient, rad, scr)
        method = "minimum-norm"
    stn, labels = _screen_transversal(ambient, scr, rad, ltr)
    dec = Decomposition(
        ambient=ambient,
        frame=tuple(frame),
        rad=Subspace(tuple(rad)),
        rad_coeffs=tuple(tuple(c) for c in rad_coeffs),
        screen=Subspace(tuple(scr)),
        screen_coeffs=tuple(screen_coeffs),
        ltr=Subspace(tuple(ltr)),
        stn=Subspace(tuple(stn)),
        stn_labels=tuple(labels),
        ltr_method=method,
    )
    form = ambient.metric
    dec.certificates = {
        "tangent": G,
        "rad": gram(form, rad),
        "screen": gram(form, scr),
        "ltr": gram(form, ltr),
        "ltr_rad": tuple(tuple(ambient.g(N, x) for x in rad) for N in ltr),
        "stn": gram(form, stn),
    }
    return dec


def classify_case(dec: Decomposition, m: int | None = None, k: int | None = None) -> str:
    """Case label from ``r``, ``m`` and the codimension ``k``."""
    m = dec.m if m is None else m
    k = dec.k if k is None else k
    r = dec.r
    if r < min(m, k):
        return "r_lightlike"
    if r == k < m:
        return "coisotropic"
    if r == m < k:
        return "isotropic"
    if r == m == k:
        return "totally_lightlike"
    raise ValueError(f"inconsistent dimensions r={r}, m={m}, k={k}")
