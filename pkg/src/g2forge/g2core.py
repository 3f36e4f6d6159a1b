"""G2-structures on 7-dimensional Lie algebras: positivity and the induced
metric, torsion data, the Q-operator, soliton search, scaling and
equivalence.

A 3-form phi is accepted when its pairing matrix

    B_ij e^{1...7} = (1/6) iota_i(phi) ^ iota_j(phi) ^ phi

is positive definite and scalar (B = lam * Id with lam an exact ninth
power).  Structures with lam != 1 are normalised internally to an
identity-metric frame, so every downstream computation sees an orthonormal
basis; the scale is kept on the structure for reporting.

For closed phi the torsion 2-form is tau = -*d*phi and the unique symmetric
operator with theta(Q) phi = d tau is

    Q = ric - (1/12) tr(tau^2) Id + (1/2) tau^2.

The soliton search solves d tau = lam phi + theta(D) phi exactly, with D
constrained to the derivation algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    DimensionMismatch,
    MetricNotRepresentable,
    NotAnIsomorphism,
    NotClosed,
    NotPositive,
    ScaleNotRepresentable,
)
from .exterior import (
    KForm,
    LinearMap,
    contract,
    hodge_star,
    pullback_action,
    theta_action,
    two_form_matrix,
    wedge,
)
from .liealg import LieAlgebraData, ce_differential
from .linalg import Matrix, SymTensor, Vector, as_sym, basis_vec, dot, vec
from .riemann import ricci
from .scalars import ONE, ZERO, QuadScalar, rat

TOP_KEY = (1, 2, 3, 4, 5, 6, 7)


def model_phi() -> KForm:
    """The reference positive 3-form in the standard frame."""
    terms = {
        (1, 2, 7): 1,
        (3, 4, 7): 1,
        (5, 6, 7): 1,
        (1, 3, 5): 1,
        (1, 4, 6): -1,
        (2, 3, 6): -1,
        (2, 4, 5): -1,
    }
    return KForm(7, 3, terms)


def pairing_matrix(phi: KForm) -> Matrix:
    """B with (1/6) iota_i(phi) ^ iota_j(phi) ^ phi = B_ij e^{1...7}."""
    if phi.dim != 7 or phi.degree != 3:
        raise DimensionMismatch("pairing needs a 3-form in dimension 7")
    n = 7
    contractions = [contract(basis_vec(n, i), phi) for i in range(n)]
    sixth = rat(1, 6)
    rows = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            top = wedge(wedge(contractions[i], contractions[j]), phi)
            value = sixth * top.coeffs.get(TOP_KEY, ZERO)
            rows[i][j] = value
            rows[j][i] = value
    return Matrix(rows)


def _scale_brackets(alg: LieAlgebraData, factor: QuadScalar) -> LieAlgebraData:
    brackets = {
        key: tuple(factor * c for c in v) for key, v in alg.brackets.items()
    }
    return LieAlgebraData(alg.dim, brackets, name=alg.name, check=False)


class G2Structure:
    """A positive 3-form on a 7-dimensional algebra, in identity-metric gauge."""

    __slots__ = (
        "alg",
        "phi",
        "pairing",
        "vol",
        "metric",
        "closed",
        "orientation",
        "frame_scale",
        "input_alg",
        "input_phi",
        "_torsion",
        "_soliton_solve",
    )

    def __init__(self, alg, phi, pairing, vol, metric, closed, orientation,
                 frame_scale, input_alg, input_phi):
        object.__setattr__(self, "alg", alg)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "pairing", pairing)
        object.__setattr__(self, "vol", vol)
        object.__setattr__(self, "metric", metric)
        object.__setattr__(self, "closed", closed)
        object.__setattr__(self, "orientation", orientation)
        object.__setattr__(self, "frame_scale", frame_scale)
        object.__setattr__(self, "input_alg", input_alg)
        object.__setattr__(self, "input_phi", input_phi)
        object.__setattr__(self, "_torsion", None)
        object.__setattr__(self, "_soliton_solve", (False, None))

    def __setattr__(self, name, value):
        raise AttributeError("G2Structure is immutable")

    def torsion(self) -> "TorsionData":
        if self._torsion is None:
            object.__setattr__(self, "_torsion", _compute_torsion(self))
        return self._torsion

    def __repr__(self) -> str:
        label = self.alg.name or "g2"
        return f"G2Structure({label}, closed={self.closed})"


def build(alg: LieAlgebraData, phi: KForm, orientation: int = 1) -> G2Structure:
    """Validate positivity and the metric gauge; normalise the frame scale.

    The pairing matrix (extracted against the oriented volume
    ``orientation * e^{1...7}``) must be positive definite, witnessed by
    leading principal minors, and equal to lam * Id with lam an exact ninth
    power; the usual gauge is lam = 1.  Structures presented in a
    negatively-oriented frame declare ``orientation = -1``.
    """
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")
    if alg.dim != 7:
        raise DimensionMismatch("G2 structures need a 7-dimensional algebra")
    if phi.dim != 7 or phi.degree != 3:
        raise DimensionMismatch("phi must be a 3-form in dimension 7")
    b = pairing_matrix(phi)
    if orientation < 0:
        b = -b
    for order, minor in enumerate(b.leading_principal_minors(), start=1):
        if minor.sign() <= 0:
            raise NotPositive(order)
    lam = b[0, 0]
    if b != Matrix.identity(7).scale(lam):
        raise MetricNotRepresentable(
            "pairing matrix is positive definite but not scalar; "
            "re-express the structure in a frame where it is"
        )
    if lam == ONE:
        dphi = ce_differential(alg, phi)
        return G2Structure(
            alg=alg,
            phi=phi,
            pairing=b,
            vol=KForm(7, 7, {TOP_KEY: rat(orientation)}),
            metric=Matrix.identity(7),
            closed=dphi.is_zero(),
            orientation=orientation,
            frame_scale=ONE,
            input_alg=alg,
            input_phi=phi,
        )
    mu = lam.nth_root_if_exact(9)
    if mu is None:
        raise MetricNotRepresentable(
            f"pairing scale {lam} is not an exact ninth power in the field"
        )
    # orthonormalise: e_hat = e / mu rescales brackets by 1/mu and phi by mu^-3
    normalized_alg = _scale_brackets(alg, mu.inverse())
    normalized_phi = phi.scale((mu * mu * mu).inverse())
    inner = build(normalized_alg, normalized_phi, orientation)
    return G2Structure(
        alg=inner.alg,
        phi=inner.phi,
        pairing=b,
        vol=KForm(7, 7, {TOP_KEY: rat(orientation) * mu**7}),
        metric=Matrix.identity(7).scale(mu * mu),
        closed=inner.closed,
        orientation=orientation,
        frame_scale=mu,
        input_alg=alg,
        input_phi=phi,
    )


# ---------------------------------------------------------------------------
# torsion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TorsionData:
    tau: KForm
    tau_matrix: Matrix
    tau_sq: SymTensor
    norm_sq: QuadScalar
    laplacian: KForm
    Q: SymTensor
    ric: SymTensor
    scal: QuadScalar


def _compute_torsion(g2: G2Structure) -> TorsionData:
    if not g2.closed:
        raise NotClosed("torsion data is defined for closed structures only")
    alg, phi = g2.alg, g2.phi
    star_phi = hodge_star(phi)
    tau = hodge_star(ce_differential(alg, star_phi)).scale(-1)
    form_matrix = two_form_matrix(tau)
    tau_matrix = form_matrix.transpose()  # tau(X, Y) = <tau_matrix X, Y>
    tau_sq = as_sym(tau_matrix @ tau_matrix)
    norm_sq = rat(-1, 2) * tau_sq.trace()
    laplacian = ce_differential(alg, tau)
    ric = ricci(alg)
    scal = ric.trace()
    q = as_sym(
        ric
        - Matrix.identity(7).scale(rat(1, 12) * tau_sq.trace())
        + tau_sq.scale(rat(1, 2))
    )
    return TorsionData(
        tau=tau,
        tau_matrix=tau_matrix,
        tau_sq=tau_sq,
        norm_sq=norm_sq,
        laplacian=laplacian,
        Q=q,
        ric=ric,
        scal=scal,
    )


def check_theta_identity(g2: G2Structure) -> bool:
    """Exact test of theta(Q) phi = d tau."""
    data = g2.torsion()
    return theta_action(data.Q, g2.phi) == data.laplacian


# ---------------------------------------------------------------------------
# derivations and the soliton solve
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def derivation_space(alg: LieAlgebraData) -> tuple[Matrix, ...]:
    """Basis of Der(alg) = {D : D[x,y] = [Dx,y] + [x,Dy]} as matrices."""
    n = alg.dim
    unknowns = n * n  # D[r][s], flattened r * n + s
    equations = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            b_ij = alg.bracket_basis(i, j)
            for m in range(1, n + 1):
                row = [ZERO] * unknowns
                # + (D [e_i, e_j])_m = sum_s D[m][s] (b_ij)_s
                for s in range(n):
                    c = b_ij[s]
                    if not c.is_zero():
                        row[(m - 1) * n + s] = row[(m - 1) * n + s] + c
                # - [D e_i, e_j]_m = - sum_r D[r][i-1] [e_r, e_j]_m
                for r in range(1, n + 1):
                    c = alg.bracket_basis(r, j)[m - 1]
                    if not c.is_zero():
                        col = (r - 1) * n + (i - 1)
                        row[col] = row[col] - c
                # - [e_i, D e_j]_m = - sum_r D[r][j-1] [e_i, e_r]_m
                for r in range(1, n + 1):
                    c = alg.bracket_basis(i, r)[m - 1]
                    if not c.is_zero():
                        col = (r - 1) * n + (j - 1)
                        row[col] = row[col] - c
                if any(not e.is_zero() for e in row):
                    equations.append(row)
    if not equations:
        return tuple(
            Matrix([[ONE if (r, s) == (a, b) else ZERO for s in range(n)] for r in range(n)])
            for a in range(n)
            for b in range(n)
        )
    kernel = Matrix(equations).kernel_basis()
    basis = []
    for v in kernel:
        rows = [[v[r * n + s] for s in range(n)] for r in range(n)]
        basis.append(Matrix(rows))
    return tuple(basis)


def is_derivation(alg: LieAlgebraData, d: Matrix):
    """Witness pair (i, j) where the Leibniz rule fails, or None."""
    n = alg.dim
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            lhs = d.apply(alg.bracket_basis(i, j))
            rhs_l = alg.bracket(d.apply(basis_vec(n, i - 1)), basis_vec(n, j - 1))
            rhs_r = alg.bracket(basis_vec(n, i - 1), d.apply(basis_vec(n, j - 1)))
            if lhs != vec(
                [a + b for a, b in zip(rhs_l, rhs_r)]
            ):
                return (i, j)
    return None


@dataclass(frozen=True)
class SolitonSolve:
    """Solution of d tau = lambda phi + theta(D) phi with D a derivation."""

    lambda_: QuadScalar
    derivation: Matrix
    solution_dim: int
    lambda_unique: bool


def find_semialgebraic_soliton(g2: G2Structure):
    """Exact affine solve; None when no (lambda, D) exists.

    When the solution set is positive dimensional, the representative
    orthogonal to every homogeneous direction (trace pairing on (lambda, D))
    is returned; for unique lambda the flag says so.  The result is cached
    on the structure (recomputation is idempotent).
    """
    if not g2.closed:
        raise NotClosed("soliton equation applies to closed structures")
    cached, result = g2._soliton_solve
    if cached:
        return result
    alg, phi = g2.alg, g2.phi
    rhs_form = g2.torsion().laplacian
    der_basis = derivation_space(alg)
    keys = sorted(
        set(phi.coeffs) | set(rhs_form.coeffs) | {k for d in der_basis for k in theta_action(d, phi).coeffs}
    )
    theta_forms = [theta_action(d, phi) for d in der_basis]
    columns = 1 + len(der_basis)
    rows = []
    rhs = []
    for key in keys:
        row = [phi.coeffs.get(key, ZERO)]
        row.extend(t.coeffs.get(key, ZERO) for t in theta_forms)
        rows.append(row)
        rhs.append(rhs_form.coeffs.get(key, ZERO))
    system = Matrix(rows) if rows else Matrix.zero(1, columns)
    if not rows:
        rhs = [ZERO]
    particular = system.solve(tuple(rhs))
    if particular is None:
        object.__setattr__(g2, "_soliton_solve", (True, None))
        return None
    kernel = system.kernel_basis()

    def pair(u, v):
        # lambda weight plus the trace pairing of the derivation parts
        d_u = _combine(der_basis, u[1:], alg.dim)
        d_v = _combine(der_basis, v[1:], alg.dim)
        return u[0] * v[0] + (d_u.transpose() @ d_v).trace()

    rep = list(particular)
    if kernel:
        gram = Matrix([[pair(ka, kb) for kb in kernel] for ka in kernel])
        target = vec([-pair(tuple(rep), k) for k in kernel])
        alpha = gram.solve(target)
        if alpha is not None:
            for coeff, k in zip(alpha, kernel):
                rep = [r + coeff * kv for r, kv in zip(rep, k)]
    lambda_unique = all(k[0].is_zero() for k in kernel)
    derivation = _combine(der_basis, rep[1:], alg.dim)
    result = SolitonSolve(
        lambda_=rep[0],
        derivation=derivation,
        solution_dim=len(kernel),
        lambda_unique=lambda_unique,
    )
    object.__setattr__(g2, "_soliton_solve", (True, result))
    return result


def _combine(basis, coeffs, dim: int) -> Matrix:
    total = Matrix.zero(dim, dim)
    for c, b in zip(coeffs, basis):
        if not c.is_zero():
            total = total + b.scale(c)
    return total


def verify_soliton(g2: G2Structure, lambda_: QuadScalar, derivation: Matrix) -> bool:
    """Substitute back: d tau = lambda phi + theta(D) phi, exactly."""
    lhs = g2.torsion().laplacian
    rhs = g2.phi.scale(lambda_) + theta_action(derivation, g2.phi)
    return lhs == rhs


# ---------------------------------------------------------------------------
# scaling and equivalence
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransportedStructure:
    """Result of rescaling phi -> c phi.

    When c^(1/3) lies in the field the transported structure is fully
    realised and the scaling laws are recorded; otherwise only the symbolic
    tag is kept and scale-dependent queries raise ScaleNotRepresentable.
    """

    base: G2Structure
    factor: QuadScalar
    structure: G2Structure | None
    metric_scale: QuadScalar | None
    laplacian_scale: QuadScalar | None
    tau_scaled: KForm | None
    symbolic: bool

    def require_scales(self):
        if self.symbolic:
            raise ScaleNotRepresentable(
                f"scale {self.factor} has no cube root in the field; "
                "only scale-invariant queries are allowed"
            )

    def classification_invariant_outcome(self, classify_fn, lambda_=None):
        """Scale-invariant query: the classification outcome variant."""
        report = classify_fn(self.base, lambda_)
        return type(report.outcome).__name__ if not isinstance(report.outcome, str) else report.outcome


def scaling_transport(g2: G2Structure, c: QuadScalar) -> TransportedStructure:
    """Transport along phi -> c phi (c != 0) with the homothety laws:
    metric scale c^(2/3), Laplacian/torsion scale c^(1/3)."""
    c = QuadScalar.coerce(c)
    if c.is_zero():
        raise ValueError("scale factor must be nonzero")
    cbrt = c.nth_root_if_exact(3)
    scaled_phi = g2.input_phi.scale(c)
    if cbrt is None:
        return TransportedStructure(
            base=g2,
            factor=c,
            structure=None,
            metric_scale=None,
            laplacian_scale=None,
            tau_scaled=None,
            symbolic=True,
        )
    structure = build(g2.input_alg, scaled_phi, g2.orientation)
    tau_scaled = None
    if structure.closed:
        tau_scaled = g2.torsion().tau.scale(cbrt)
    return TransportedStructure(
        base=g2,
        factor=c,
        structure=structure,
        metric_scale=cbrt * cbrt,
        laplacian_scale=cbrt,
        tau_scaled=tau_scaled,
        symbolic=False,
    )


def equivalence_check(h: LinearMap, g2a: G2Structure, g2b: G2Structure) -> bool:
    """h must be a bracket isomorphism (else NotAnIsomorphism); returns
    whether it also carries phi_a to phi_b."""
    alg_a, alg_b = g2a.alg, g2b.alg
    if alg_a.dim != alg_b.dim or h.nrows != alg_a.dim or h.ncols != alg_a.dim:
        raise NotAnIsomorphism("map has the wrong shape")
    if h.det().is_zero():
        raise NotAnIsomorphism("map is singular")
    n = alg_a.dim
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            lhs = h.apply(alg_a.bracket_basis(i, j))
            rhs = alg_b.bracket(h.apply(basis_vec(n, i - 1)), h.apply(basis_vec(n, j - 1)))
            if lhs != rhs:
                raise NotAnIsomorphism(f"bracket condition fails on pair ({i},{j})")
    return pullback_action(h, g2a.phi) == g2b.phi


def transport_structure(h: LinearMap, g2: G2Structure, name: str | None = None) -> G2Structure:
    """Push the whole structure through an invertible map h: new brackets
    h[h^-1 x, h^-1 y] and new form h . phi; h is then an equivalence.
    An orientation-reversing h flips the orientation declaration."""
    det = h.det()
    if det.is_zero():
        raise NotAnIsomorphism("map is singular")
    n = g2.alg.dim
    h_inv = h.inverse()
    brackets = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            v = h.apply(
                g2.alg.bracket(h_inv.apply(basis_vec(n, i - 1)), h_inv.apply(basis_vec(n, j - 1)))
            )
            brackets[(i, j)] = v
    alg = LieAlgebraData(n, brackets, name=name, check=False)
    phi = pullback_action(h, g2.phi)
    return build(alg, phi, g2.orientation * det.sign())
