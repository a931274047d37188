"""Linear algebra of symmetric bilinear forms over an exact scalar field.

Vectors are tuples of scalars and matrices are tuples of row tuples.  Every
routine works for any scalar type understood by :func:`goldlight.scalar.is_zero`
(ExtScalar, Dual, float), so the same code runs in exact, float and
differentiated mode.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .scalar import is_exact_zero, is_zero, sign, value_of

__all__ = [
    "DimensionMismatch",
    "SubspaceNotContained",
    "SingularMatrix",
    "RankJump",
    "SymmetricForm",
    "Subspace",
    "dot",
    "add",
    "sub",
    "scale",
    "lincomb",
    "mat_vec",
    "mat_mul",
    "transpose",
    "identity",
    "rref",
    "rank",
    "null_space",
    "solve",
    "inverse",
    "determinant",
    "independent_subset",
    "gram",
    "radical_basis",
    "ortho_complement",
    "classify_form",
]

Vector = tuple
Matrix = tuple


class DimensionMismatch(ValueError):
    pass


class SubspaceNotContained(ValueError):
    pass


class SingularMatrix(ValueError):
    pass


class RankJump(ArithmeticError):
    """Raised when a differentiated elimination leaves a residue that vanishes
    only to zeroth order, i.e. the rank is not locally constant."""


# ---------------------------------------------------------------- vector ops


def dot(u, v):
    total = 0
    for a, b in zip(u, v):
        total = a * b + total
    return total


def add(u, v) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u, v) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v) -> Vector:
    return tuple(c * a for a in v)


def lincomb(coeffs, vectors, n: int | None = None) -> Vector:
    if n is None:
        n = len(vectors[0])
    out = [0] * n
    for c, v in zip(coeffs, vectors):
        if is_exact_zero(c):
            continue
        for i, a in enumerate(v):
            out[i] = c * a + out[i]
    return tuple(out)


def mat_vec(m, v) -> Vector:
    return tuple(dot(row, v) for row in m)


def transpose(m) -> Matrix:
    return tuple(zip(*m)) if m else ()


def mat_mul(a, b) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def identity(n: int, one=1, zero=0) -> Matrix:
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


# ------------------------------------------------------------- elimination


def _exact_int(p):
    # int / int would give a float; keep plain integers rational
    return Fraction(p) if type(p) is int else p


def rref(m, *, ncols: int | None = None):
    """Reduced row echelon form.

    Pivot = first entry in the column (top to bottom) that is nonzero.  Returns
    ``(rows, pivot_columns)``.  Rows without a pivot must vanish identically,
    otherwise :class:`RankJump` is raised (only possible for dual scalars).
    ``ncols`` restricts pivot search to the leading columns (for augmented
    systems).
    """
    rows = [list(r) for r in m]
    if not rows:
        return [], []
    width = len(rows[0])
    limit = width if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(limit):
        piv = next((i for i in range(r, len(rows)) if not is_zero(rows[i][c])), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = _exact_int(rows[r][c])
        rows[r] = [x / p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not is_exact_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    for i in range(r, len(rows)):
        for x in rows[i][:limit]:
            if is_zero(x) and not is_exact_zero(x):
                raise RankJump("rank is not locally constant at this point")
    return rows, pivots


def rank(vectors) -> int:
    vectors = list(vectors)
    if not vectors:
        return 0
    return len(rref(vectors)[1])


def null_space(m, n: int | None = None) -> list[Vector]:
    """Basis of ``{x : m x = 0}``; one vector per free column, in column order."""
    m = list(m)
    if not m:
        if n is None:
            raise ValueError("width needed for an empty matrix")
        return [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
    width = len(m[0])
    rows, pivots = rref(m)
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for f in free:
        x = [0] * width
        x[f] = 1
        for row, pc in zip(rows, pivots):
            x[pc] = -row[f]
        basis.append(tuple(x))
    return basis


def solve(a, b):
    """Solve ``a x = b`` (b a vector or a list of column vectors).

    Raises :class:`SingularMatrix` if inconsistent.  For underdetermined
    systems free variables are set to zero.
    """
    multi = bool(b) and isinstance(b[0], (tuple, list))
    cols = list(b) if multi else [b]
    n = len(a[0])
    aug = [list(row) + [c[i] for c in cols] for i, row in enumerate(a)]
    rows, pivots = rref(aug, ncols=n)
    for i in range(len(pivots), len(rows)):
        if any(not is_zero(x) for x in rows[i][n:]):
            raise SingularMatrix("inconsistent linear system")
    sols = []
    for k in range(len(cols)):
        x = [0] * n
        for row, pc in zip(rows, pivots):
            x[pc] = row[n + k]
        sols.append(tuple(x))
    return sols if multi else sols[0]


def inverse(a) -> Matrix:
    n = len(a)
    eye = [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
    rows, pivots = rref([list(r) + list(e) for r, e in zip(a, eye)], ncols=n)
    if len(pivots) != n:
        raise SingularMatrix("matrix is singular")
    return tuple(tuple(row[n:]) for row in rows)


def determinant(a):
    rows = [list(r) for r in a]
    n = len(rows)
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if not is_zero(rows[i][c])), None)
        if piv is None:
            return rows[0][0] * 0 if n else 1
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        p = _exact_int(rows[c][c])
        det = det * p
        for i in range(c + 1, n):
            f = rows[i][c] / p
            rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return det


def independent_subset(vectors, start=()) -> list[int]:
    """Greedy: indices of ``vectors`` that extend ``start`` independently.

    Decided on value parts only: for dual scalars a partial selection may
    lose rank at the point without the whole family doing so.
    """
    vectors = [tuple(value_of(x) for x in v) for v in vectors]
    chosen: list = [tuple(value_of(x) for x in v) for v in start]
    picked = []
    base = rank(chosen) if chosen else 0
    for i, v in enumerate(vectors):
        if rank(chosen + [v]) > base:
            chosen.append(v)
            picked.append(i)
            base += 1
    return picked


# ------------------------------------------------------------ forms & spaces


@dataclass(frozen=True)
class SymmetricForm:
    entries: Matrix

    def __post_init__(self):
        n = len(self.entries)
        if any(len(r) != n for r in self.entries):
            raise DimensionMismatch("form matrix must be square")
        for i in range(n):
            for j in range(i + 1, n):
                if not is_exact_zero(self.entries[i][j] - self.entries[j][i]):
                    raise ValueError("form matrix is not symmetric")

    @classmethod
    def diagonal(cls, diag, zero=0) -> "SymmetricForm":
        n = len(diag)
        return cls(tuple(tuple(diag[i] if i == j else zero for j in range(n)) for i in range(n)))

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __call__(self, u, v):
        if len(u) != self.dim or len(v) != self.dim:
            raise DimensionMismatch(f"vectors must have length {self.dim}")
        return dot(u, mat_vec(self.entries, v))

    def lower(self, v) -> Vector:
        """Covector ``g(v, .)`` as a row."""
        return mat_vec(self.entries, v)


@dataclass(frozen=True)
class Subspace:
    basis: tuple

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(tuple(v) for v in self.basis))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def __getitem__(self, i):
        return self.basis[i]

    def contains(self, v) -> bool:
        if not self.basis:
            return all(is_zero(x) for x in v)
        return rank(list(self.basis) + [tuple(v)]) == rank(self.basis)

    def includes(self, other: "Subspace") -> bool:
        if not other.basis:
            return True
        return rank(list(self.basis) + list(other.basis)) == rank(self.basis)

    def equals(self, other: "Subspace") -> bool:
        return self.includes(other) and other.includes(self) if (self.basis or other.basis) else True

    def is_independent(self) -> bool:
        return rank(self.basis) == len(self.basis)


def gram(form: SymmetricForm, vectors) -> Matrix:
    vectors = list(vectors)
    for v in vectors:
        if len(v) != form.dim:
            raise DimensionMismatch(f"vector of length {len(v)} in dimension {form.dim}")
    lowered = [form.lower(v) for v in vectors]
    return tuple(tuple(dot(lv, w) for w in vectors) for lv in lowered)


def radical_coefficients(form: SymmetricForm, space: Subspace) -> list[Vector]:
    """Null space of the Gram matrix: radical vectors as coefficients over ``space``."""
    if not space.basis:
        return []
    return null_space(gram(form, space.basis))


def radical_basis(form: SymmetricForm, space: Subspace) -> Subspace:
    coeffs = radical_coefficients(form, space)
    n = form.dim
    return Subspace(tuple(lincomb(c, space.basis, n) for c in coeffs))


def ortho_complement(form: SymmetricForm, sub_: Subspace, within: Subspace) -> Subspace:
    """``{w in within : form(w, s) = 0 for s in sub}``."""
    if sub_.basis and not within.includes(sub_):
        raise SubspaceNotContained("subspace is not contained in the ambient subspace")
    if not within.basis:
        return Subspace(())
    if not sub_.basis:
        return within
    pairing = [tuple(form(s, w) for w in within.basis) for s in sub_.basis]
    coeffs = null_space(pairing)
    return Subspace(tuple(lincomb(c, within.basis, form.dim) for c in coeffs))


def classify_form(form: SymmetricForm, space: Subspace) -> tuple[int, int, int]:
    """Signature ``(p, q, r)`` of the form restricted to ``space``.

    Symmetric Gaussian elimination: pivot on the first nonzero diagonal entry,
    otherwise on the first nonzero off-diagonal entry as a hyperbolic pair
    (contributing one positive and one negative direction).
    """
    g = [list(r) for r in gram(form, space.basis)]
    p = q = 0
    while g:
        k = len(g)
        i = next((i for i in range(k) if not is_zero(g[i][i])), None)
        if i is not None:
            d = g[i][i]
            if sign(d) > 0:
                p += 1
            else:
                q += 1
            rest = [j for j in range(k) if j != i]
            d = _exact_int(d)
            g = [[g[a][b] - g[a][i] * g[i][b] / d for b in rest] for a in rest]
            continue
        pair = next(
            ((i, j) for i in range(k) for j in range(i + 1, k) if not is_zero(g[i][j])),
            None,
        )
        if pair is None:
            break
        i, j = pair
        bij = _exact_int(g[i][j])
        p += 1
        q += 1
        rest = [t for t in range(k) if t not in (i, j)]
        # Schur complement of [[0, b], [b, 0]]: subtract (c_i c_j' + c_j c_i') / b
        g = [
            [g[a][c] - (g[a][i] * g[j][c] + g[a][j] * g[i][c]) / bij for c in rest]
            for a in rest
        ]
    r = space.dim - p - q
    return p, q, r
