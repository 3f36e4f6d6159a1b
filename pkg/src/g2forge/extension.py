"""One-dimensional extensions g = h (+)_D R e7 with SU(3) data on h.

The SU(3)-structure is kept in the model gauge

    omega = e12 + e34 + e56,
    rho+  = e135 - e146 - e236 - e245,
    rho-  = -e246 + e235 + e145 + e136,

with J the standard complex structure (e1 -> e2, e3 -> e4, e5 -> e6).  The
extension has ad_{e7} = D on h and carries phi = omega ^ e7 + rho+, which
is closed exactly when d_h omega = 0, d_h rho+ = 0 and theta(D) rho+ = 0;
the last condition says D is the real representation of a traceless
complex matrix.

For closed extensions the torsion and curvature collapse to block
formulas in S = (D + D^t)/2, A = (D - D^t)/2 and B = *_h d_h rho-; the
module computes those blocks directly so tests can pin them against the
generic 7-dimensional pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionMismatch, NotADerivation, NotClosed
from .exterior import (
    KForm,
    LinearMap,
    hodge_star,
    theta_action,
    two_form_matrix,
)
from .g2core import G2Structure, build, is_derivation
from .liealg import LieAlgebraData, ce_differential
from .linalg import Matrix, SymTensor, Vector, as_sym, zero_vec
from .riemann import divergence, ricci, scal
from .scalars import ONE, ZERO, QuadScalar, rat


def model_omega() -> KForm:
    return KForm(6, 2, {(1, 2): 1, (3, 4): 1, (5, 6): 1})


def model_rho_plus() -> KForm:
    return KForm(6, 3, {(1, 3, 5): 1, (1, 4, 6): -1, (2, 3, 6): -1, (2, 4, 5): -1})


def model_rho_minus() -> KForm:
    return KForm(6, 3, {(2, 4, 6): -1, (2, 3, 5): 1, (1, 4, 5): 1, (1, 3, 6): 1})


def model_j() -> Matrix:
    j = [[0] * 6 for _ in range(6)]
    for a in (0, 2, 4):
        j[a + 1][a] = 1
        j[a][a + 1] = -1
    return Matrix(j)


def form_operator(a: KForm) -> Matrix:
    """Operator T of a 2-form via a(X, Y) = <T X, Y>."""
    return two_form_matrix(a).transpose()


@dataclass(frozen=True)
class SU3Data:
    """SU(3)-structure data on a 6-dimensional algebra, model gauge."""

    h: LieAlgebraData
    omega: KForm
    rho_plus: KForm
    rho_minus: KForm
    J: Matrix

    @classmethod
    def model(cls, h: LieAlgebraData) -> "SU3Data":
        if h.dim != 6:
            raise DimensionMismatch("SU(3) data lives on a 6-dimensional algebra")
        return cls(
            h=h,
            omega=model_omega(),
            rho_plus=model_rho_plus(),
            rho_minus=model_rho_minus(),
            J=model_j(),
        )

    def check_gauge(self) -> bool:
        """J^2 = -Id and omega = <J ., .>."""
        j = self.J
        if j @ j != Matrix.identity(6).scale(rat(-1)):
            return False
        return form_operator(self.omega) == j


@dataclass(frozen=True)
class ExtensionSpec:
    """An SU(3) base together with the acting derivation D = ad_{e7}."""

    su3: SU3Data
    D: Matrix

    @property
    def S(self) -> Matrix:
        return (self.D + self.D.transpose()).scale(rat(1, 2))

    @property
    def A(self) -> Matrix:
        return (self.D - self.D.transpose()).scale(rat(1, 2))

    @property
    def B(self) -> Matrix:
        """Operator matrix of *_h d_h rho- (a 2-form on h)."""
        d_rho_minus = ce_differential(self.su3.h, self.rho_minus_form())
        return form_operator(hodge_star(d_rho_minus))

    def rho_minus_form(self) -> KForm:
        return self.su3.rho_minus


@dataclass(frozen=True)
class ClosednessConditions:
    d_omega_zero: bool
    d_rho_plus_zero: bool
    theta_D_rho_plus_zero: bool

    @property
    def all_closed(self) -> bool:
        return self.d_omega_zero and self.d_rho_plus_zero and self.theta_D_rho_plus_zero


def closedness_conditions(spec: ExtensionSpec) -> ClosednessConditions:
    """The three conditions equivalent to d(phi) = 0 on the extension."""
    h = spec.su3.h
    return ClosednessConditions(
        d_omega_zero=ce_differential(h, spec.su3.omega).is_zero(),
        d_rho_plus_zero=ce_differential(h, spec.su3.rho_plus).is_zero(),
        theta_D_rho_plus_zero=theta_action(spec.D, spec.su3.rho_plus).is_zero(),
    )


def lift_form(a: KForm) -> KForm:
    """Embed a form on h = span(e1..e6) into the 7-dimensional extension."""
    return KForm(7, a.degree, dict(a.coeffs))


def wedge_e7(a: KForm) -> KForm:
    """a ^ e7 for a 6-dimensional form a."""
    lifted = lift_form(a)
    coeffs = {}
    for key, value in lifted.coeffs.items():
        coeffs[key + (7,)] = value
    return KForm(7, a.degree + 1, coeffs)


def extension_phi(spec: ExtensionSpec) -> KForm:
    """phi = omega ^ e7 + rho+."""
    return wedge_e7(spec.su3.omega) + lift_form(spec.su3.rho_plus)


def build_extension(spec: ExtensionSpec) -> tuple[LieAlgebraData, G2Structure]:
    """7-dimensional algebra with [e7, X] = D X plus its G2-structure."""
    h = spec.su3.h
    witness = is_derivation(h, spec.D)
    if witness is not None:
        raise NotADerivation(witness)
    brackets = {}
    for (i, j), v in h.brackets.items():
        brackets[(i, j)] = tuple(v) + (ZERO,)
    for i in range(1, 7):
        column = spec.D.column(i - 1)
        v = tuple(column) + (ZERO,)
        # [e_i, e7] = -D e_i
        brackets[(i, 7)] = tuple(-c for c in v)
    name = (h.name or "h") + "+Re7"
    alg = LieAlgebraData(7, brackets, name=name)
    return alg, build(alg, extension_phi(spec))


# ---------------------------------------------------------------------------
# block formulas for closed extensions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtensionBlocks:
    tau_sq: SymTensor
    ric: SymTensor
    scal: QuadScalar
    Q: SymTensor
    div_s: Vector


def _embed_block(block: Matrix, corner: QuadScalar, border: Vector | None = None) -> Matrix:
    rows = [[ZERO] * 7 for _ in range(7)]
    for i in range(6):
        for j in range(6):
            rows[i][j] = block[i, j]
    rows[6][6] = corner
    if border is not None:
        for i in range(6):
            rows[i][6] = border[i]
            rows[6][i] = border[i]
    return Matrix(rows)


def extension_block_formulas(spec: ExtensionSpec) -> ExtensionBlocks:
    """Closed-form torsion/Ricci/Q blocks of a closed extension.

    Requires the closedness conditions; the central property is exact
    agreement with the generic pipeline on the built 7-dimensional algebra.
    """
    if not closedness_conditions(spec).all_closed:
        raise NotClosed("block formulas hold for closed extensions only")
    h = spec.su3.h
    d, j = spec.D, spec.su3.J
    s2 = d + d.transpose()  # D + D^t = 2S
    s = spec.S
    b = spec.B
    ric_h = ricci(h)
    scal_h = scal(h)
    div_s = divergence(h, s)

    tau_block = (
        -(s2 @ s2) + (j @ s2 @ b) + (b @ j @ s2) + (b @ b)
    )
    tr_s_sq = (s @ s).trace()
    tau_sq = _embed_block(tau_block, ZERO)

    commutator = (d @ d.transpose()) - (d.transpose() @ d)
    ric_corner = rat(-1, 4) * (s2 @ s2).trace()
    ric_block = ric_h + commutator.scale(rat(1, 2))
    ric = _embed_block(ric_block, ric_corner, border=tuple(-x for x in div_s))

    scal_total = scal_h - tr_s_sq

    tr_s = s.trace()
    q_block = (
        ric_h
        + commutator.scale(rat(1, 2))
        - s2.scale(rat(1, 4) * s2.trace())
        + tau_block.scale(rat(1, 2))
        - Matrix.identity(6).scale(
            (scal_h - tr_s * tr_s - tr_s_sq) * rat(1, 3)
        )
    )
    q_corner = (
        rat(-1, 3) * scal_h + rat(1, 3) * (tr_s * tr_s) - rat(2, 3) * tr_s_sq
    )
    q = _embed_block(q_block, q_corner, border=tuple(-x for x in div_s))

    return ExtensionBlocks(
        tau_sq=as_sym(tau_sq),
        ric=as_sym(ric),
        scal=scal_total,
        Q=as_sym(q),
        div_s=div_s,
    )


def extension_ricci_identities(spec: ExtensionSpec) -> bool:
    """Exact check of the extension Ricci identities against the generic
    pipeline: ric(xi, xi) = -tr(S^2); ric(X, xi) = -Div(S)(X); and on h,
    ric = ric_h - tr(S) S - [S, A]."""
    alg, _ = build_extension(spec)
    generic = ricci(alg)
    s, a = spec.S, spec.A
    h = spec.su3.h
    tr_s_sq = (s @ s).trace()
    if generic[6, 6] != -tr_s_sq:
        return False
    div_s = divergence(h, s)
    for i in range(6):
        if generic[i, 6] != -div_s[i]:
            return False
    ric_h = ricci(h)
    bracket_sa = (s @ a) - (a @ s)
    expected = ric_h - s.scale(s.trace()) - bracket_sa
    for i in range(6):
        for j in range(6):
            if generic[i, j] != expected[i, j]:
                return False
    return True


# ---------------------------------------------------------------------------
# almost abelian classifier
# ---------------------------------------------------------------------------

NOT_CLOSED = "NotClosed"
TORSION_FREE_FLAT = "TorsionFreeFlat"
GRADIENT_ONLY_AS_PRODUCT = "GradientOnlyAsProduct"


@dataclass(frozen=True)
class AlmostAbelianReport:
    """Gradient-soliton verdict for h abelian, phi = omega ^ e7 + rho+.

    For closed non-flat cases both one-dimensional-extension shapes are
    ruled out, so a gradient soliton could only be a product with constant
    potential on the non-flat factor; the report carries the scale
    candidates and the Div(S) border targets that any such soliton must
    meet.
    """

    decision: str
    scal_d: QuadScalar | None = None
    tr_s_sq: QuadScalar | None = None
    lambda_candidates: tuple[QuadScalar, ...] = ()
    div_s_on_h: Vector = ()
    div_s_xi_target: QuadScalar | None = None


def classify_almost_abelian(d_map: Matrix) -> AlmostAbelianReport:
    """Decision for the abelian-base extension defined by D."""
    if d_map.nrows != 6 or d_map.ncols != 6:
        raise DimensionMismatch("derivation must be a 6x6 matrix")
    h = LieAlgebraData.abelian(6, name="R6")
    spec = ExtensionSpec(su3=SU3Data.model(h), D=d_map)
    if not closedness_conditions(spec).all_closed:
        return AlmostAbelianReport(decision=NOT_CLOSED)
    s = spec.S
    tr_s_sq = (s @ s).trace()
    scal_d = -tr_s_sq  # scal_h = 0 on an abelian base
    if s.is_zero():
        return AlmostAbelianReport(
            decision=TORSION_FREE_FLAT,
            scal_d=scal_d,
            tr_s_sq=tr_s_sq,
        )
    lambda_candidates = (
        rat(-2) * scal_d,
        rat(2) * tr_s_sq,  # scal_h + 2 tr(S^2) with scal_h = 0
    )
    return AlmostAbelianReport(
        decision=GRADIENT_ONLY_AS_PRODUCT,
        scal_d=scal_d,
        tr_s_sq=tr_s_sq,
        lambda_candidates=lambda_candidates,
        div_s_on_h=zero_vec(6),
        div_s_xi_target=tr_s_sq,
    )


# ---------------------------------------------------------------------------
# helpers for building derivations
# ---------------------------------------------------------------------------


def complex_real_representation(entries) -> Matrix:
    """Real 6x6 representation of a complex 3x3 matrix.

    ``entries[k][l]`` is a pair (re, im); the complex coordinate z_k acts on
    span(e_{2k-1}, e_{2k}) with J as multiplication by i.
    """
    rows = [[ZERO] * 6 for _ in range(6)]
    for k in range(3):
        for l in range(3):
            re, im = entries[k][l]
            re = QuadScalar.coerce(re)
            im = QuadScalar.coerce(im)
            rows[2 * k][2 * l] = re
            rows[2 * k][2 * l + 1] = -im
            rows[2 * k + 1][2 * l] = im
            rows[2 * k + 1][2 * l + 1] = re
    return Matrix(rows)


def sl3c_representation_space() -> list[Matrix]:
    """Basis of the real representations of traceless complex 3x3 matrices."""
    basis = []
    for k in range(3):
        for l in range(3):
            for part in (0, 1):
                if k == l == 2:
                    continue  # trace conditions eliminate the last diagonal
                entries = [[(0, 0)] * 3 for _ in range(3)]
                if k == l:
                    # traceless: pair the diagonal entry against the last one
                    entries[k][k] = (1, 0) if part == 0 else (0, 1)
                    entries[2][2] = (-1, 0) if part == 0 else (0, -1)
                else:
                    entries[k][l] = (1, 0) if part == 0 else (0, 1)
                basis.append(complex_real_representation(entries))
    return basis
