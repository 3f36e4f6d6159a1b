"""Left-invariant Riemannian data from a Lie algebra with orthonormal frame.

The Levi-Civita connection comes from the Koszul formula specialised to an
orthonormal left-invariant frame,

    g(nabla_{e_i} e_j, e_k) = (1/2) [ g([e_i,e_j], e_k)
                                     - g([e_i,e_k], e_j)
                                     - g([e_j,e_k], e_i) ],

curvature from R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z -
nabla_{[X,Y]} Z, and the Ricci tensor by the frame contraction
Ric(X, Y) = sum_k <R(e_k, X) Y, e_k>.  The contraction sign is pinned by
the nilpotent test algebras: sources of brackets curve negatively, targets
positively.

Divergence of a symmetric 2-tensor T = g(A., .) is the covector

    (Div T)(U) = sum_i g(nabla_{e_i}(A e_i) - A(nabla_{e_i} e_i), U).
"""

from __future__ import annotations

from functools import lru_cache

from .errors import DimensionMismatch, NonOrthonormalFrame
from .linalg import (
    Matrix,
    SymTensor,
    Vector,
    basis_vec,
    dot,
    vec_add,
    vec_scale,
    vec_sub,
    zero_vec,
)
from .liealg import LieAlgebraData
from .scalars import HALF, ZERO, QuadScalar

ConnectionRow = tuple[Vector, ...]


class ConnectionTable:
    """Table gamma[i][j] = nabla_{e_i} e_j in the orthonormal frame."""

    __slots__ = ("dim", "gamma")

    def __init__(self, dim: int, gamma: tuple[ConnectionRow, ...]):
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "gamma", gamma)

    def __setattr__(self, name, value):
        raise AttributeError("ConnectionTable is immutable")

    def nabla(self, i: int, j: int) -> Vector:
        """nabla_{e_i} e_j, 1-based indices."""
        return self.gamma[i - 1][j - 1]

    def nabla_vector(self, i: int, w: Vector) -> Vector:
        """nabla_{e_i} w for a constant-coefficient (left-invariant) field."""
        result = zero_vec(self.dim)
        for j, c in enumerate(w):
            if not c.is_zero():
                result = vec_add(result, vec_scale(c, self.gamma[i - 1][j]))
        return result

    def nabla_direction(self, x: Vector, w: Vector) -> Vector:
        """nabla_x w, linear in the direction x."""
        result = zero_vec(self.dim)
        for i, c in enumerate(x):
            if not c.is_zero():
                result = vec_add(result, vec_scale(c, self.nabla_vector(i + 1, w)))
        return result

    def is_metric_compatible(self) -> bool:
        n = self.dim
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                for k in range(1, n + 1):
                    lhs = self.nabla(i, j)[k - 1] + self.nabla(i, k)[j - 1]
                    if not lhs.is_zero():
                        return False
        return True

    def is_torsion_free(self, alg: LieAlgebraData) -> bool:
        n = self.dim
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                lhs = vec_sub(self.nabla(i, j), self.nabla(j, i))
                if lhs != alg.bracket_basis(i, j):
                    return False
        return True


def _require_orthonormal(alg: LieAlgebraData):
    if alg.gram != Matrix.identity(alg.dim):
        raise NonOrthonormalFrame(
            "curvature routines require the identity Gram matrix"
        )


@lru_cache(maxsize=None)
def levi_civita(alg: LieAlgebraData) -> ConnectionTable:
    """Koszul connection table; cached per algebra (idempotent, read-safe)."""
    _require_orthonormal(alg)
    n = alg.dim
    gamma = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            bij = alg.bracket_basis(i, j)
            entry = []
            for k in range(1, n + 1):
                bik = alg.bracket_basis(i, k)
                bjk = alg.bracket_basis(j, k)
                entry.append(HALF * (bij[k - 1] - bik[j - 1] - bjk[i - 1]))
            row.append(tuple(entry))
        gamma.append(tuple(row))
    return ConnectionTable(n, tuple(gamma))


def curvature(alg: LieAlgebraData, x: Vector, y: Vector, z: Vector) -> Vector:
    """R(x, y)z on left-invariant fields."""
    conn = levi_civita(alg)
    term1 = conn.nabla_direction(x, conn.nabla_direction(y, z))
    term2 = conn.nabla_direction(y, conn.nabla_direction(x, z))
    term3 = conn.nabla_direction(alg.bracket(x, y), z)
    return vec_sub(vec_sub(term1, term2), term3)


@lru_cache(maxsize=None)
def ricci(alg: LieAlgebraData) -> SymTensor:
    """Ricci tensor Ric(e_i, e_j) = sum_k <R(e_k, e_i) e_j, e_k>."""
    _require_orthonormal(alg)
    n = alg.dim
    frame = [basis_vec(n, i) for i in range(n)]
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            total = ZERO
            for k in range(n):
                total = total + curvature(alg, frame[k], frame[i], frame[j])[k]
            row.append(total)
        rows.append(row)
    return SymTensor(rows)


def scal(alg: LieAlgebraData) -> QuadScalar:
    return ricci(alg).trace()


def divergence(alg: LieAlgebraData, tensor: Matrix) -> Vector:
    """(Div T)(U) for T = g(A., .); returns the covector in the frame basis."""
    if tensor.nrows != alg.dim or tensor.ncols != alg.dim:
        raise DimensionMismatch("tensor dimension does not match algebra")
    conn = levi_civita(alg)
    n = alg.dim
    result = zero_vec(n)
    for i in range(1, n + 1):
        a_ei = tensor.column(i - 1)
        term = conn.nabla_vector(i, a_ei)
        correction = tensor.apply(conn.nabla(i, i))
        result = vec_add(result, vec_sub(term, correction))
    return result


def divergence_direct(alg: LieAlgebraData, tensor: Matrix) -> Vector:
    """Independent divergence: (Div T)(U) = sum_i (nabla_{e_i} T)(e_i, U).

    (nabla_X T)(Y, Z) = X(T(Y,Z)) - T(nabla_X Y, Z) - T(Y, nabla_X Z); the
    first term dies on left-invariant data.  Used to cross-check the main
    formula on arbitrary symmetric tensors.
    """
    conn = levi_civita(alg)
    n = alg.dim
    out = []
    for u in range(1, n + 1):
        eu = basis_vec(n, u - 1)
        total = ZERO
        for i in range(1, n + 1):
            ei = basis_vec(n, i - 1)
            t1 = dot(tensor.apply(conn.nabla(i, i)), eu)
            t2 = dot(tensor.apply(ei), conn.nabla_vector(i, eu))
            total = total - t1 - t2
        out.append(total)
    return tuple(out)
