"""Exterior algebra on a fixed 6- or 7-dimensional space over Q(sqrt2, sqrt3).

Forms are sparse: a mapping from strictly increasing index tuples (1-based)
to nonzero scalars.  Beyond wedge/contraction this module provides the
Hodge star for diagonal Gram matrices, the pullback action of GL(n) on
forms, and its derivative theta, which is the workhorse of the torsion and
soliton computations.

Textual syntax for forms: ``-e135+1/2*r2*e267`` (indices as digit runs,
which is unambiguous because dimensions never exceed 9 here).
"""

from __future__ import annotations

import re
from itertools import combinations

from .errors import (
    DimensionMismatch,
    MetricNotRepresentable,
    NonDiagonalMetric,
    ParseError,
    SingularMap,
)
from .linalg import Matrix, Vector
from .scalars import ONE, ZERO, QuadScalar, _ScalarParser, render_scalar

LinearMap = Matrix

_ALLOWED_DIMS = (6, 7)


def _check_dim(dim: int):
    if dim not in _ALLOWED_DIMS:
        raise DimensionMismatch(f"dimension must be 6 or 7, got {dim}")


def _merge_sign(left: tuple[int, ...], right: tuple[int, ...]):
    """Sign of sorting the concatenation of two increasing tuples.

    Returns (sign, merged_tuple); sign is 0 when an index repeats.
    """
    sign = 1
    merged = []
    i = j = 0
    while i < len(left) and j < len(right):
        if left[i] == right[j]:
            return 0, ()
        if left[i] < right[j]:
            merged.append(left[i])
            i += 1
        else:
            # right[j] jumps over the remaining len(left) - i entries
            if (len(left) - i) % 2:
                sign = -sign
            merged.append(right[j])
            j += 1
    merged.extend(left[i:])
    merged.extend(right[j:])
    return sign, tuple(merged)


def _sort_sign(indices) -> tuple[int, tuple[int, ...]]:
    """Sign of the permutation sorting `indices`; 0 on repeats."""
    idx = list(indices)
    sign = 1
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(idx, idx[1:]):
        if a == b:
            return 0, ()
    return sign, tuple(idx)


class KForm:
    """Exterior k-form with sparse canonical coefficients."""

    __slots__ = ("dim", "degree", "coeffs")

    def __init__(self, dim: int, degree: int, coeffs=None):
        _check_dim(dim)
        if not 0 <= degree <= dim:
            raise DimensionMismatch(f"degree {degree} out of range for dim {dim}")
        clean: dict[tuple[int, ...], QuadScalar] = {}
        for key, value in (coeffs or {}).items():
            key = tuple(key)
            if len(key) != degree:
                raise DimensionMismatch(f"key {key} has wrong length for degree {degree}")
            if any(not 1 <= i <= dim for i in key):
                raise DimensionMismatch(f"index out of range in {key}")
            if any(a >= b for a, b in zip(key, key[1:])):
                raise DimensionMismatch(f"key {key} is not strictly increasing")
            value = QuadScalar.coerce(value)
            if not value.is_zero():
                clean[key] = value
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("KForm is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, dim: int, degree: int) -> "KForm":
        return cls(dim, degree, {})

    @classmethod
    def basis(cls, dim: int, indices, coeff=1) -> "KForm":
        """c * e^{i1...ik}; indices need not be sorted (sign adjusted)."""
        sign, key = _sort_sign(tuple(indices))
        if sign == 0:
            return cls.zero(dim, len(tuple(indices)))
        return cls(dim, len(key), {key: QuadScalar.coerce(coeff) * sign})

    @classmethod
    def scalar(cls, dim: int, value) -> "KForm":
        return cls(dim, 0, {(): QuadScalar.coerce(value)})

    # -- structure --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, indices) -> QuadScalar:
        sign, key = _sort_sign(tuple(indices))
        if sign == 0:
            return ZERO
        return sign * self.coeffs.get(key, ZERO)

    def terms(self):
        return sorted(self.coeffs.items())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, KForm)
            and self.dim == other.dim
            and self.degree == other.degree
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.dim, self.degree, tuple(sorted(self.coeffs.items()))))

    def __repr__(self) -> str:
        return f"KForm({self.dim}, {self.degree}, {render_form(self)!r})"

    def __str__(self) -> str:
        return render_form(self)

    # -- linear operations --------------------------------------------------

    def _check_compatible(self, other: "KForm"):
        if self.dim != other.dim:
            raise DimensionMismatch("forms live on different spaces")
        if self.degree != other.degree:
            raise DimensionMismatch("forms have different degrees")

    def __add__(self, other: "KForm") -> "KForm":
        self._check_compatible(other)
        coeffs = dict(self.coeffs)
        for key, value in other.coeffs.items():
            coeffs[key] = coeffs.get(key, ZERO) + value
        return KForm(self.dim, self.degree, coeffs)

    def __sub__(self, other: "KForm") -> "KForm":
        return self + (-other)

    def __neg__(self) -> "KForm":
        return KForm(self.dim, self.degree, {k: -v for k, v in self.coeffs.items()})

    def scale(self, c) -> "KForm":
        c = QuadScalar.coerce(c)
        return KForm(self.dim, self.degree, {k: c * v for k, v in self.coeffs.items()})

    def __mul__(self, c) -> "KForm":
        return self.scale(c)

    __rmul__ = __mul__


# ---------------------------------------------------------------------------
# core operations
# ---------------------------------------------------------------------------


def wedge(a: KForm, b: KForm) -> KForm:
    """Graded-commutative wedge product."""
    if a.dim != b.dim:
        raise DimensionMismatch("wedge of forms on different spaces")
    degree = a.degree + b.degree
    if degree > a.dim:
        return KForm.zero(a.dim, a.dim)
    coeffs: dict[tuple[int, ...], QuadScalar] = {}
    for ka, va in a.coeffs.items():
        for kb, vb in b.coeffs.items():
            sign, key = _merge_sign(ka, kb)
            if sign == 0:
                continue
            term = va * vb * sign
            coeffs[key] = coeffs.get(key, ZERO) + term
    return KForm(a.dim, degree, coeffs)


def wedge_all(*forms: KForm) -> KForm:
    result = forms[0]
    for f in forms[1:]:
        result = wedge(result, f)
    return result


def contract(x: Vector, a: KForm) -> KForm:
    """Interior product iota_x a (degree k-1); zero for 0-forms."""
    if len(x) != a.dim:
        raise DimensionMismatch("vector length does not match form dimension")
    if a.degree == 0:
        return KForm.zero(a.dim, 0)
    coeffs: dict[tuple[int, ...], QuadScalar] = {}
    for key, value in a.coeffs.items():
        for m, idx in enumerate(key):
            comp = x[idx - 1]
            if comp.is_zero():
                continue
            rest = key[:m] + key[m + 1 :]
            term = comp * value * (1 if m % 2 == 0 else -1)
            coeffs[rest] = coeffs.get(rest, ZERO) + term
    return KForm(a.dim, a.degree - 1, coeffs)


def _complement_sign(key: tuple[int, ...], dim: int) -> tuple[int, tuple[int, ...]]:
    complement = tuple(i for i in range(1, dim + 1) if i not in key)
    sign, _ = _sort_sign(key + complement)
    return sign, complement


def _diagonal_sqrt(gram: Matrix):
    roots = []
    for i in range(gram.nrows):
        g = gram[i, i]
        if g.sign() <= 0:
            raise MetricNotRepresentable(f"gram entry {i + 1} is not positive")
        root = g.sqrt_if_exact()
        if root is None:
            raise MetricNotRepresentable(
                f"gram entry {i + 1} = {g} has no square root in the field"
            )
        roots.append(root)
    return roots


def hodge_star(a: KForm, gram: Matrix | None = None, orientation: int = 1) -> KForm:
    """Hodge star for a diagonal Gram matrix (identity by default).

    Orientation is the sign of e^{1...n}; the star is computed in the
    orthonormalised frame, so each diagonal entry must have an exact square
    root in the field.
    """
    n = a.dim
    if gram is None:
        gram = Matrix.identity(n)
    if gram.nrows != n or gram.ncols != n:
        raise DimensionMismatch("gram matrix has wrong shape")
    if not gram.is_diagonal():
        raise NonDiagonalMetric("hodge star supports diagonal Gram matrices only")
    roots = _diagonal_sqrt(gram)
    sqrt_det = ONE
    for r in roots:
        sqrt_det = sqrt_det * r
    coeffs: dict[tuple[int, ...], QuadScalar] = {}
    for key, value in a.coeffs.items():
        sign, complement = _complement_sign(key, n)
        factor = sqrt_det
        for i in key:
            factor = factor / gram[i - 1, i - 1]
        term = value * factor * (sign * orientation)
        coeffs[complement] = coeffs.get(complement, ZERO) + term
    return KForm(n, n - a.degree, coeffs)


def pullback(m: Matrix, a: KForm) -> KForm:
    """Pullback m^* a, i.e. (m^* a)(v1, ..., vk) = a(m v1, ..., m vk)."""
    if m.nrows != a.dim or m.ncols != a.dim:
        raise DimensionMismatch("map dimension does not match form")
    if a.degree == 0:
        return a
    # m^* e^i = sum_j m[i][j] e^j; wedge the transformed covectors per term
    transformed = [
        KForm(a.dim, 1, {(j + 1,): m[i, j] for j in range(a.dim)})
        for i in range(a.dim)
    ]
    result = KForm.zero(a.dim, a.degree)
    for key, value in a.coeffs.items():
        term = wedge_all(*(transformed[i - 1] for i in key)).scale(value)
        result = result + term
    return result


def pullback_action(h: Matrix, a: KForm) -> KForm:
    """Left GL(n)-action h . a = a(h^{-1} ., ..., h^{-1} .)."""
    try:
        h_inv = h.inverse()
    except SingularMap:
        raise SingularMap("pullback action needs an invertible map") from None
    return pullback(h_inv, a)


def theta_action(a_map: Matrix, form: KForm) -> KForm:
    """Derivative of the pullback action: inserts -A into each slot.

    theta(A) is a derivation of the exterior algebra with
    theta(A) e^i = -sum_j A[i][j] e^j.
    """
    if a_map.nrows != form.dim or a_map.ncols != form.dim:
        raise DimensionMismatch("map dimension does not match form")
    result = KForm.zero(form.dim, form.degree)
    rows = a_map.rows
    for key, value in form.coeffs.items():
        for m, idx in enumerate(key):
            replaced = KForm(
                form.dim,
                1,
                {(j + 1,): -rows[idx - 1][j] for j in range(form.dim)},
            )
            prefix = key[:m]
            suffix = key[m + 1 :]
            # e^{prefix} ^ (theta(A) e^{idx}) ^ e^{suffix}; the merge signs
            # already account for the slot position
            partial: dict[tuple[int, ...], QuadScalar] = {}
            for (j,), coeff in replaced.coeffs.items():
                s1, merged1 = _merge_sign(prefix, (j,))
                if s1 == 0:
                    continue
                s2, merged = _merge_sign(merged1, suffix)
                if s2 == 0:
                    continue
                total = value * coeff * (s1 * s2)
                partial[merged] = partial.get(merged, ZERO) + total
            result = result + KForm(form.dim, form.degree, partial)
    return result


def form_inner_product(a: KForm, b: KForm, gram: Matrix | None = None) -> QuadScalar:
    """<a, b> from a ^ *b = <a, b> e^{1...n}."""
    a._check_compatible(b)
    top = wedge(a, hodge_star(b, gram))
    return top.coeffs.get(tuple(range(1, a.dim + 1)), ZERO)


def two_form_matrix(a: KForm) -> Matrix:
    """Antisymmetric matrix M with M[i][j] = a(e_i, e_j)."""
    if a.degree != 2:
        raise DimensionMismatch("matrix form of a non-2-form")
    n = a.dim
    rows = [[ZERO] * n for _ in range(n)]
    for (i, j), value in a.coeffs.items():
        rows[i - 1][j - 1] = value
        rows[j - 1][i - 1] = -value
    return Matrix(rows)


def matrix_two_form(m: Matrix, dim: int) -> KForm:
    """Inverse of two_form_matrix for an antisymmetric matrix."""
    coeffs = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            coeffs[(i + 1, j + 1)] = m[i, j]
    return KForm(dim, 2, coeffs)


def all_index_tuples(dim: int, degree: int):
    return list(combinations(range(1, dim + 1), degree))


# ---------------------------------------------------------------------------
# text syntax
# ---------------------------------------------------------------------------

_INDEX_RE = re.compile(r"e(\d+)")


def render_form(a: KForm) -> str:
    """Canonical text; terms ordered by index tuple, e.g. '-e135+1/2*r2*e267'."""
    if a.is_zero():
        return "0"
    if a.degree == 0:
        return render_scalar(a.coeffs[()])
    out = []
    for i, (key, value) in enumerate(a.terms()):
        name = "e" + "".join(str(j) for j in key)
        nonzero = [c for c in value.components if c]
        if len(nonzero) > 1:
            piece = f"({render_scalar(value)})*{name}"
            out.append(("+" if i else "") + piece)
            continue
        sign = "-" if value.sign() < 0 else ("+" if i else "")
        mag = value.abs()
        if mag == ONE:
            out.append(f"{sign}{name}")
        else:
            out.append(f"{sign}{render_scalar(mag)}*{name}")
    return "".join(out)


def parse_form(text: str, dim: int, degree: int | None = None) -> KForm:
    """Parse the form grammar; degree is inferred when not supplied."""
    stripped = text.strip()
    if not stripped:
        raise ParseError("empty form", 0)
    if stripped == "0":
        return KForm.zero(dim, degree if degree is not None else 0)
    pos = 0
    terms: list[tuple[QuadScalar, tuple[int, ...]]] = []
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        sign = 1
        if text[pos] in "+-":
            sign = -1 if text[pos] == "-" else 1
            pos += 1
            if not terms and sign == 1 and text[pos - 1] == "+":
                raise ParseError("unexpected leading '+'", pos - 1)
        while pos < n and text[pos].isspace():
            pos += 1
        coeff = ONE
        if pos < n and text[pos] == "(":
            close = text.find(")", pos)
            if close < 0:
                raise ParseError("unbalanced '('", pos)
            parser = _ScalarParser(text[pos + 1 : close], offset=pos + 1)
            coeff = parser.parse()
            pos = close + 1
            while pos < n and text[pos].isspace():
                pos += 1
            if pos >= n or text[pos] != "*":
                raise ParseError("expected '*' after coefficient", pos)
            pos += 1
        elif pos < n and text[pos] != "e":
            star = _find_coeff_end(text, pos)
            parser = _ScalarParser(text[pos:star], offset=pos)
            coeff = parser.parse()
            pos = star + 1
        m = _INDEX_RE.match(text, pos)
        if not m:
            raise ParseError("expected basis term like e135", pos)
        pos = m.end()
        indices = tuple(int(c) for c in m.group(1))
        if any(i < 1 or i > dim for i in indices):
            raise ParseError(f"index out of range for dim {dim}", m.start(1))
        terms.append((coeff * sign, indices))
    if not terms:
        raise ParseError("no terms in form", 0)
    degrees = {len(ix) for _, ix in terms}
    if len(degrees) != 1:
        raise ParseError("mixed degrees in form", 0)
    k = degrees.pop()
    if degree is not None and degree != k:
        raise ParseError(f"expected degree {degree}, found {k}", 0)
    result = KForm.zero(dim, k)
    for coeff, indices in terms:
        result = result + KForm.basis(dim, indices, coeff)
    return result


def _find_coeff_end(text: str, start: int) -> int:
    """Position of the '*' separating a plain coefficient from its e-term."""
    depth = 0
    last_star = -1
    for i in range(start, len(text)):
        c = text[i]
        if c == "(":
            depth += 1
        elif c == ")":
            depth -= 1
        elif c == "*" and depth == 0:
            last_star = i
        elif c == "e" and depth == 0:
            if last_star < 0:
                raise ParseError("expected '*' before basis term", i)
            return last_star
        elif c in "+-" and depth == 0 and i > start:
            raise ParseError("expected basis term like e135", i)
    raise ParseError("missing basis term", len(text))
