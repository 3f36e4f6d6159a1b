"""Exact linear algebra over Q(sqrt2, sqrt3).

Plain Gaussian elimination is exact here because the scalars form a field;
nothing in this module ever touches floating point.  Matrices are stored
densely (dimensions in this project are at most ~50 on the long side of a
constraint system).
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

from .errors import DimensionMismatch, SingularMap
from .scalars import ONE, ZERO, QuadScalar

Vector = tuple[QuadScalar, ...]


def vec(entries: Iterable) -> Vector:
    return tuple(QuadScalar.coerce(e) for e in entries)


def zero_vec(n: int) -> Vector:
    return (ZERO,) * n


def basis_vec(n: int, i: int) -> Vector:
    """Standard basis vector e_i (0-based index)."""
    return tuple(ONE if j == i else ZERO for j in range(n))


def vec_add(a: Vector, b: Vector) -> Vector:
    return tuple(x + y for x, y in zip(a, b, strict=True))

def vec_sub(a: Vector, b: Vector) -> Vector:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vec_scale(c, a: Vector) -> Vector:
    c = QuadScalar.coerce(c)
    return tuple(c * x for x in a)


def dot(a: Vector, b: Vector) -> QuadScalar:
    total = ZERO
    for x, y in zip(a, b, strict=True):
        total = total + x * y
    return total


def vec_is_zero(a: Vector) -> bool:
    return all(x.is_zero() for x in a)


class Matrix:
    """Dense matrix of QuadScalar entries; column j holds the image of e_j."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Sequence[Sequence]):
        self.rows = tuple(tuple(QuadScalar.coerce(e) for e in row) for row in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise DimensionMismatch("ragged matrix rows")

    # -- constructors ---------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, nrows: int, ncols: int | None = None) -> "Matrix":
        ncols = nrows if ncols is None else ncols
        return cls([[ZERO] * ncols for _ in range(nrows)])

    @classmethod
    def diagonal(cls, entries: Iterable) -> "Matrix":
        entries = [QuadScalar.coerce(e) for e in entries]
        n = len(entries)
        return cls([[entries[i] if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[Vector]) -> "Matrix":
        n = len(cols[0])
        return cls([[cols[j][i] for j in range(len(cols))] for i in range(n)])

    # -- basic queries ----------------------------------------------------

    def __getitem__(self, ij) -> QuadScalar:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(e) for e in row) for row in self.rows)
        return f"Matrix[{body}]"

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.rows for e in row)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self.rows[i][j] == self.rows[j][i]
            for i in range(self.nrows)
            for j in range(i + 1, self.ncols)
        )

    def is_skew(self) -> bool:
        return self.is_square() and all(
            self.rows[i][j] == -self.rows[j][i]
            for i in range(self.nrows)
            for j in range(i, self.ncols)
        )

    def is_diagonal(self) -> bool:
        return self.is_square() and all(
            self.rows[i][j].is_zero()
            for i in range(self.nrows)
            for j in range(self.ncols)
            if i != j
        )

    def diagonal_entries(self) -> Vector:
        return tuple(self.rows[i][i] for i in range(min(self.nrows, self.ncols)))

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.rows)

    # -- algebra -----------------------------------------------------------

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(
            [
                [a + b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.rows, other.rows)
            ]
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(
            [
                [a - b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.rows, other.rows)
            ]
        )

    def __neg__(self) -> "Matrix":
        return Matrix([[-a for a in row] for row in self.rows])

    def scale(self, c) -> "Matrix":
        c = QuadScalar.coerce(c)
        return Matrix([[c * a for a in row] for row in self.rows])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise DimensionMismatch("matrix product shape mismatch")
        cols = list(zip(*other.rows))
        return Matrix(
            [[dot(row, col) for col in cols] for row in self.rows]
        )

    def apply(self, v: Vector) -> Vector:
        """Matrix action on a column vector."""
        if len(v) != self.ncols:
            raise DimensionMismatch("vector length mismatch")
        return tuple(dot(row, v) for row in self.rows)

    def transpose(self) -> "Matrix":
        return Matrix(list(zip(*self.rows)))

    def trace(self) -> QuadScalar:
        total = ZERO
        for i in range(min(self.nrows, self.ncols)):
            total = total + self.rows[i][i]
        return total

    def _check_same_shape(self, other: "Matrix"):
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise DimensionMismatch("matrix shape mismatch")

    # -- elimination ---------------------------------------------------------

    def rref(self) -> tuple["Matrix", list[int]]:
        """Reduced row echelon form and the list of pivot columns."""
        rows = [list(r) for r in self.rows]
        pivots: list[int] = []
        r = 0
        for c in range(self.ncols):
            pivot_row = next(
                (i for i in range(r, self.nrows) if not rows[i][c].is_zero()), None
            )
            if pivot_row is None:
                continue
            rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
            inv = rows[r][c].inverse()
            rows[r] = [inv * e for e in rows[r]]
            for i in range(self.nrows):
                if i != r and not rows[i][c].is_zero():
                    f = rows[i][c]
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
            if r == self.nrows:
                break
        return Matrix(rows), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def det(self) -> QuadScalar:
        if not self.is_square():
            raise DimensionMismatch("determinant of a non-square matrix")
        rows = [list(r) for r in self.rows]
        n = self.nrows
        det = ONE
        for c in range(n):
            pivot_row = next((i for i in range(c, n) if not rows[i][c].is_zero()), None)
            if pivot_row is None:
                return ZERO
            if pivot_row != c:
                rows[c], rows[pivot_row] = rows[pivot_row], rows[c]
                det = -det
            det = det * rows[c][c]
            inv = rows[c][c].inverse()
            for i in range(c + 1, n):
                if not rows[i][c].is_zero():
                    f = rows[i][c] * inv
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
        return det

    def leading_principal_minors(self) -> list[QuadScalar]:
        if not self.is_square():
            raise DimensionMismatch("minors of a non-square matrix")
        return [
            Matrix([row[: k + 1] for row in self.rows[: k + 1]]).det()
            for k in range(self.nrows)
        ]

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise DimensionMismatch("inverse of a non-square matrix")
        n = self.nrows
        augmented = Matrix(
            [list(self.rows[i]) + list(Matrix.identity(n).rows[i]) for i in range(n)]
        )
        reduced, pivots = augmented.rref()
        if pivots != list(range(n)):
            raise SingularMap("matrix is singular")
        return Matrix([row[n:] for row in reduced.rows])

    def kernel_basis(self) -> list[Vector]:
        """Basis of the right null space."""
        reduced, pivots = self.rref()
        free = [c for c in range(self.ncols) if c not in pivots]
        basis = []
        for f in free:
            v = [ZERO] * self.ncols
            v[f] = ONE
            for r, p in enumerate(pivots):
                v[p] = -reduced.rows[r][f]
            basis.append(tuple(v))
        return basis

    def solve(self, b: Vector):
        """One exact solution of A x = b, or None when inconsistent."""
        if len(b) != self.nrows:
            raise DimensionMismatch("rhs length mismatch")
        augmented = Matrix([list(r) + [b[i]] for i, r in enumerate(self.rows)])
        reduced, pivots = augmented.rref()
        if self.ncols in pivots:
            return None
        x = [ZERO] * self.ncols
        for r, p in enumerate(pivots):
            x[p] = reduced.rows[r][self.ncols]
        return tuple(x)


def solve_affine(a: Matrix, b: Vector):
    """Full solution set of A x = b: (particular, kernel basis) or None."""
    particular = a.solve(b)
    if particular is None:
        return None
    return particular, a.kernel_basis()


class SymTensor(Matrix):
    """Symmetric matrix; symmetry is enforced on construction."""

    __slots__ = ()

    def __init__(self, rows):
        super().__init__(rows)
        if not self.is_symmetric():
            raise DimensionMismatch("matrix is not symmetric")


class SkewTensor(Matrix):
    """Antisymmetric matrix; antisymmetry is enforced on construction."""

    __slots__ = ()

    def __init__(self, rows):
        super().__init__(rows)
        if not self.is_skew():
            raise DimensionMismatch("matrix is not antisymmetric")


def as_sym(m: Matrix) -> SymTensor:
    return SymTensor(m.rows)


def as_skew(m: Matrix) -> SkewTensor:
    return SkewTensor(m.rows)
