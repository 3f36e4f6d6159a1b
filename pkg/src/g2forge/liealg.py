"""Lie algebra data: structure constants, predicates, the Chevalley-Eilenberg
differential, and the structure-equation ("Salamon") notation parser.

An algebra is a table of brackets [e_i, e_j] over Q(sqrt2, sqrt3) together
with a diagonal Gram matrix (identity unless stated).  The differential on
1-forms is de^i = -c_jk^i e^{jk}, extended to higher degree by the Leibniz
rule; d^2 = 0 is equivalent to the Jacobi identity, and both views are kept
because the tests cross-check them.

Salamon grammar: ``"(" dexpr ("," dexpr)* ")"`` with
``dexpr := "0" | term (("+"|"-") term)*`` and ``term := [coeff "*"] "e" digit digit``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionMismatch, JacobiViolation, ParseError
from .exterior import KForm, wedge_all
from .linalg import Matrix, Vector, basis_vec, vec_add, vec_is_zero, vec_scale, zero_vec
from .scalars import ONE, ZERO, QuadScalar, _ScalarParser, parse_scalar, render_scalar

BracketTable = dict[tuple[int, int], Vector]


@dataclass(frozen=True)
class AlgebraPredicates:
    is_nilpotent: bool
    is_unimodular: bool
    is_nice_basis: bool
    is_orthogonally_nice: bool


class LieAlgebraData:
    """Immutable bracket table [e_i, e_j] = sum_k c_ij^k e_k with a gram."""

    __slots__ = ("dim", "brackets", "gram", "name", "_hash")

    def __init__(self, dim: int, brackets: BracketTable, gram: Matrix | None = None,
                 name: str | None = None, check: bool = True):
        clean: BracketTable = {}
        for (i, j), v in brackets.items():
            if not (1 <= i <= dim and 1 <= j <= dim):
                raise DimensionMismatch(f"bracket index ({i},{j}) out of range")
            if i == j:
                if not vec_is_zero(v):
                    raise DimensionMismatch(f"[e{i},e{i}] must vanish")
                continue
            if i > j:
                i, j, v = j, i, vec_scale(-1, v)
            if len(v) != dim:
                raise DimensionMismatch(f"bracket value for ({i},{j}) has wrong length")
            v = tuple(QuadScalar.coerce(c) for c in v)
            if not vec_is_zero(v):
                clean[(i, j)] = v
        if gram is None:
            gram = Matrix.identity(dim)
        if not gram.is_diagonal():
            raise DimensionMismatch("gram matrix must be diagonal")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "brackets", clean)
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "_hash", None)
        if check:
            witness = jacobi_witness(self)
            if witness is not None:
                raise JacobiViolation(witness)

    def __setattr__(self, name, value):
        raise AttributeError("LieAlgebraData is immutable")

    @classmethod
    def abelian(cls, dim: int, name: str | None = None) -> "LieAlgebraData":
        return cls(dim, {}, name=name)

    # -- bracket access ---------------------------------------------------

    def bracket_basis(self, i: int, j: int) -> Vector:
        """[e_i, e_j], 1-based indices."""
        if i == j:
            return zero_vec(self.dim)
        if i < j:
            return self.brackets.get((i, j), zero_vec(self.dim))
        return vec_scale(-1, self.brackets.get((j, i), zero_vec(self.dim)))

    def bracket(self, x: Vector, y: Vector) -> Vector:
        """Bilinear extension of the bracket table."""
        result = zero_vec(self.dim)
        for (i, j), v in self.brackets.items():
            coeff = x[i - 1] * y[j - 1] - x[j - 1] * y[i - 1]
            if not coeff.is_zero():
                result = vec_add(result, vec_scale(coeff, v))
        return result

    def ad(self, x: Vector) -> Matrix:
        """Matrix of ad_x = [x, .]."""
        cols = [self.bracket(x, basis_vec(self.dim, j)) for j in range(self.dim)]
        return Matrix.from_columns(cols)

    def is_abelian(self) -> bool:
        return not self.brackets

    def with_name(self, name: str) -> "LieAlgebraData":
        return LieAlgebraData(self.dim, dict(self.brackets), self.gram, name, check=False)

    # -- equality (name excluded: it is a label, not data) -----------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LieAlgebraData)
            and self.dim == other.dim
            and self.brackets == other.brackets
            and self.gram == other.gram
        )

    def __hash__(self):
        if self._hash is None:
            h = hash((self.dim, tuple(sorted(self.brackets.items())), self.gram))
            object.__setattr__(self, "_hash", h)
        return self._hash

    def __repr__(self) -> str:
        label = self.name or f"dim{self.dim}"
        return f"LieAlgebraData({label}: {render_salamon(self)})"


def jacobi_witness(alg: LieAlgebraData):
    """First triple (i, j, k) violating Jacobi, or None when the identity holds."""
    n = alg.dim
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for k in range(j + 1, n + 1):
                ei, ej, ek = (basis_vec(n, m - 1) for m in (i, j, k))
                total = alg.bracket(alg.bracket_basis(i, j), ek)
                total = vec_add(total, alg.bracket(alg.bracket_basis(j, k), ei))
                total = vec_add(total, alg.bracket(alg.bracket_basis(k, i), ej))
                if not vec_is_zero(total):
                    return (i, j, k)
    return None


def validate(alg: LieAlgebraData):
    """Jacobi check returning the violating triple instead of raising."""
    return jacobi_witness(alg)


# ---------------------------------------------------------------------------
# Chevalley-Eilenberg differential
# ---------------------------------------------------------------------------


def d_basis_one_form(alg: LieAlgebraData, i: int) -> KForm:
    """de^i = -c_jk^i e^{jk}."""
    coeffs = {}
    for (j, k), v in alg.brackets.items():
        c = v[i - 1]
        if not c.is_zero():
            coeffs[(j, k)] = -c
    return KForm(alg.dim, 2, coeffs)


def ce_differential(alg: LieAlgebraData, a: KForm) -> KForm:
    """Exterior derivative of a left-invariant form, by the Leibniz rule."""
    if a.dim != alg.dim:
        raise DimensionMismatch("form dimension does not match algebra")
    if a.degree >= alg.dim:
        return KForm.zero(alg.dim, min(a.degree + 1, alg.dim))
    result = KForm.zero(alg.dim, a.degree + 1)
    if a.degree == 0:
        return result
    d_ones = {i: d_basis_one_form(alg, i) for i in range(1, alg.dim + 1)}
    for key, value in a.coeffs.items():
        for m, idx in enumerate(key):
            if d_ones[idx].is_zero():
                continue
            prefix = KForm.basis(alg.dim, key[:m]) if m else KForm.scalar(alg.dim, 1)
            suffix = (
                KForm.basis(alg.dim, key[m + 1 :])
                if m + 1 < len(key)
                else KForm.scalar(alg.dim, 1)
            )
            sign = value if m % 2 == 0 else -value
            result = result + wedge_all(prefix, d_ones[idx], suffix).scale(sign)
    return result


# ---------------------------------------------------------------------------
# predicates
# ---------------------------------------------------------------------------


def _row_space(vectors: list[Vector], dim: int) -> list[Vector]:
    if not vectors:
        return []
    reduced, pivots = Matrix(vectors).rref()
    return [reduced.rows[r] for r in range(len(pivots))]


def is_nilpotent(alg: LieAlgebraData) -> bool:
    """Lower central series g_{k+1} = [g, g_k] reaches zero."""
    n = alg.dim
    current = _row_space(
        [v for v in alg.brackets.values()], n
    )
    while current:
        next_vectors = []
        for i in range(n):
            ei = basis_vec(n, i)
            for w in current:
                b = alg.bracket(ei, w)
                if not vec_is_zero(b):
                    next_vectors.append(b)
        nxt = _row_space(next_vectors, n)
        if len(nxt) >= len(current):
            return False
        current = nxt
    return True


def is_unimodular(alg: LieAlgebraData) -> bool:
    return all(
        alg.ad(basis_vec(alg.dim, j)).trace().is_zero() for j in range(alg.dim)
    )


def _single_target(v: Vector):
    """Index (1-based) of the single nonzero slot of v, or None."""
    nonzero = [k + 1 for k, c in enumerate(v) if not c.is_zero()]
    return nonzero[0] if len(nonzero) == 1 else None


def is_nice_basis(alg: LieAlgebraData) -> bool:
    """Every bracket is a multiple of one basis vector, and two bracket pairs
    hitting the same target never share an index."""
    targets: dict[int, list[tuple[int, int]]] = {}
    for (i, j), v in alg.brackets.items():
        t = _single_target(v)
        if t is None:
            return False
        targets.setdefault(t, []).append((i, j))
    for pairs in targets.values():
        for a in range(len(pairs)):
            for b in range(a + 1, len(pairs)):
                if set(pairs[a]) & set(pairs[b]):
                    return False
    return True


def is_orthogonally_nice(alg: LieAlgebraData) -> bool:
    """[e_i, e_j] is always a multiple of a basis vector orthogonal to both."""
    for (i, j), v in alg.brackets.items():
        t = _single_target(v)
        if t is None or t in (i, j):
            return False
    return True


def predicates(alg: LieAlgebraData) -> AlgebraPredicates:
    return AlgebraPredicates(
        is_nilpotent=is_nilpotent(alg),
        is_unimodular=is_unimodular(alg),
        is_nice_basis=is_nice_basis(alg),
        is_orthogonally_nice=is_orthogonally_nice(alg),
    )


# ---------------------------------------------------------------------------
# Salamon notation
# ---------------------------------------------------------------------------


def render_salamon(alg: LieAlgebraData) -> str:
    """Structure-equation tuple (de^1, ..., de^n)."""
    parts = []
    for i in range(1, alg.dim + 1):
        da = d_basis_one_form(alg, i)
        if da.is_zero():
            parts.append("0")
            continue
        out = []
        for t, (key, value) in enumerate(da.terms()):
            name = "e" + "".join(str(j) for j in key)
            sign = "-" if value.sign() < 0 else ("+" if t else "")
            mag = value.abs()
            body = name if mag == ONE else f"{render_scalar(mag)}*{name}"
            out.append(sign + body)
        parts.append("".join(out))
    return "(" + ",".join(parts) + ")"


def parse_salamon(text: str, name: str | None = None) -> LieAlgebraData:
    """Parse a structure-equation tuple into an algebra (Jacobi validated)."""
    s = text.strip()
    base = text.find(s[0]) if s else 0
    if not s.startswith("(") or not s.endswith(")"):
        raise ParseError("expected parenthesised tuple", base)
    inner = s[1:-1]
    entries = _split_top_level(inner)
    dim = len(entries)
    if dim not in (6, 7):
        raise ParseError(f"expected 6 or 7 entries, found {dim}", base)
    d_forms: list[KForm] = []
    for offset, chunk in entries:
        d_forms.append(_parse_dexpr(chunk, dim, base + 1 + offset))
    brackets: BracketTable = {}
    for i, da in enumerate(d_forms, start=1):
        for (j, k), coeff in da.coeffs.items():
            # de^i = -c_jk^i e^{jk}
            key = (j, k)
            v = list(brackets.get(key, zero_vec(dim)))
            v[i - 1] = v[i - 1] - coeff
            brackets[key] = tuple(v)
    return LieAlgebraData(dim, brackets, name=name)


def _split_top_level(inner: str) -> list[tuple[int, str]]:
    entries = []
    depth = 0
    start = 0
    for pos, ch in enumerate(inner):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            entries.append((start, inner[start:pos]))
            start = pos + 1
    entries.append((start, inner[start:]))
    return entries


def _parse_dexpr(chunk: str, dim: int, offset: int) -> KForm:
    s = chunk.strip()
    if not s:
        raise ParseError("empty structure-equation entry", offset)
    if s == "0":
        return KForm.zero(dim, 2)
    result = KForm.zero(dim, 2)
    pos = 0
    text = chunk
    n = len(text)
    first = True
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        sign = 1
        if text[pos] in "+-":
            if first and text[pos] == "+":
                raise ParseError("unexpected leading '+'", offset + pos)
            sign = -1 if text[pos] == "-" else 1
            pos += 1
        elif not first:
            raise ParseError("expected '+' or '-' between terms", offset + pos)
        coeff, pos = _parse_term(text, pos, dim, offset)
        result = result + coeff.scale(sign)
        first = False
    return result


def _parse_term(text: str, pos: int, dim: int, offset: int) -> tuple[KForm, int]:
    n = len(text)
    while pos < n and text[pos].isspace():
        pos += 1
    # locate the trailing e<digit><digit>
    coeff = ONE
    if pos < n and not _at_pair(text, pos):
        star = _find_term_star(text, pos, offset)
        coeff = _ScalarParser(text[pos:star], offset=offset + pos).parse()
        pos = star + 1
        while pos < n and text[pos].isspace():
            pos += 1
    if not _at_pair(text, pos):
        raise ParseError("expected term like e12", offset + pos)
    j, k = int(text[pos + 1]), int(text[pos + 2])
    if not (1 <= j <= dim and 1 <= k <= dim) or j == k:
        raise ParseError(f"bad index pair e{j}{k}", offset + pos)
    form = KForm.basis(dim, (j, k), coeff)
    return form, pos + 3


def _at_pair(text: str, pos: int) -> bool:
    """True when text[pos:] starts with e<digit><digit> (and not a longer run)."""
    return (
        pos + 3 <= len(text)
        and text[pos] == "e"
        and text[pos + 1 : pos + 3].isdigit()
        and (pos + 3 >= len(text) or not text[pos + 3].isdigit())
    )


def _find_term_star(text: str, start: int, offset: int) -> int:
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
        elif c == "e" and depth == 0 and _at_pair(text, i):
            if last_star < 0:
                raise ParseError("expected '*' before e-term", offset + i)
            return last_star
    raise ParseError("missing e-term in structure equation", offset + start)


# ---------------------------------------------------------------------------
# JSON schema: {dim, name, brackets: [{i, j, k, c}], gram?: [...]}
# ---------------------------------------------------------------------------


def algebra_to_json(alg: LieAlgebraData) -> dict:
    entries = []
    for (i, j), v in sorted(alg.brackets.items()):
        for k, c in enumerate(v, start=1):
            if not c.is_zero():
                entries.append({"i": i, "j": j, "k": k, "c": render_scalar(c)})
    data = {"dim": alg.dim, "name": alg.name, "brackets": entries}
    if alg.gram != Matrix.identity(alg.dim):
        data["gram"] = [render_scalar(alg.gram[i, i]) for i in range(alg.dim)]
    return data


def algebra_from_json(data: dict) -> LieAlgebraData:
    dim = int(data["dim"])
    brackets: BracketTable = {}
    for entry in data.get("brackets", []):
        i, j, k = int(entry["i"]), int(entry["j"]), int(entry["k"])
        c = parse_scalar(str(entry["c"]))
        key = (i, j) if i < j else (j, i)
        if i > j:
            c = -c
        v = list(brackets.get(key, zero_vec(dim)))
        v[k - 1] = v[k - 1] + c
        brackets[key] = tuple(v)
    gram = None
    if "gram" in data and data["gram"] is not None:
        gram = Matrix.diagonal([parse_scalar(str(g)) for g in data["gram"]])
    return LieAlgebraData(dim, brackets, gram=gram, name=data.get("name"))
