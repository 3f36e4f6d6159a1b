"""Gradient-soliton elimination engine.

For a closed structure the decision splits on whether tau^2 is
divergence-free:

* divergence-free, trivial Ricci kernel: the gradient must vanish, so the
  soliton is eliminated outright;
* divergence-free, nontrivial kernel: the space would split as a product
  with the potential living on the flat factor, forcing Q to be scalar on
  the orthogonal complement of ker(ric); a non-scalar restriction (or a
  nonzero cross block) is an exact obstruction witness;
* non-divergence-free, trivial kernel: the candidate gradient v solves
  ric(v) = -(1/2) (div tau^2)#; the one-dimensional-extension shape then
  forces 0 = -ric(v) - (1/2) tau^2(v) + (1/3)(scal - lambda) v, whose exact
  failure is the elimination witness;
* non-divergence-free, nontrivial kernel: inconclusive here (the two
  remaining shapes cannot be separated at this level).

Every eliminated outcome carries data that can be rechecked exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionMismatch, NotClosed
from .g2core import G2Structure, find_semialgebraic_soliton
from .linalg import (
    Matrix,
    SymTensor,
    Vector,
    basis_vec,
    dot,
    vec,
    vec_add,
    vec_is_zero,
    vec_scale,
    zero_vec,
)
from .riemann import divergence
from .scalars import ONE, ZERO, QuadScalar, rat

DIVERGENCE_FREE = "DivergenceFree"
NON_DIVERGENCE_FREE = "NonDivergenceFree"


@dataclass(frozen=True)
class EliminatedTrivialKernel:
    """div tau^2 = 0 and ker(ric) = 0: the potential gradient must vanish."""

    note: str = "ric has trivial kernel, so the gradient vanishes"


@dataclass(frozen=True)
class EliminatedProductObstruction:
    """Q restricted to (ker ric)-perp is not scalar (or leaks into the kernel).

    ``witness`` is a pair of frame indices (1-based); ``entries`` the two
    distinct Q-values (diagonal case) or the offending cross entry.
    """

    witness: tuple[int, int]
    entries: tuple[QuadScalar, QuadScalar]
    cross_block: bool = False


@dataclass(frozen=True)
class EliminatedExtensionContradiction:
    """The unique gradient candidate fails the extension-shape condition.

    ``v`` is the candidate gradient; when ric(v) is parallel to v the pair
    ``ric_eigenvalue``/``required_value`` reproduces the contradiction in
    eigenvalue form; ``required_lambda`` is the lone scale that would avoid
    it (None when no lambda works at all); ``non_parallel`` flags the
    lambda-free contradiction.
    """

    v: Vector
    residual: Vector
    ric_eigenvalue: QuadScalar | None
    required_value: QuadScalar | None
    required_lambda: QuadScalar | None
    lambda_used: QuadScalar | None
    non_parallel: bool


@dataclass(frozen=True)
class GaussianOnly:
    """Flat torsion-free case: any gradient soliton is a Gaussian."""

    quadratic_coefficient: QuadScalar


@dataclass(frozen=True)
class Inconclusive:
    notes: str


Outcome = (
    EliminatedTrivialKernel
    | EliminatedProductObstruction
    | EliminatedExtensionContradiction
    | GaussianOnly
    | Inconclusive
)


@dataclass(frozen=True)
class SolitonReport:
    case: str
    ker_ric: tuple[Vector, ...]
    outcome: Outcome
    lambda_used: QuadScalar | None
    div_tau_sq: Vector

    @property
    def eliminated(self) -> bool:
        return isinstance(
            self.outcome,
            (
                EliminatedTrivialKernel,
                EliminatedProductObstruction,
                EliminatedExtensionContradiction,
            ),
        )

    @property
    def inconclusive(self) -> bool:
        return isinstance(self.outcome, Inconclusive)

    @property
    def outcome_name(self) -> str:
        return type(self.outcome).__name__


def _orthogonal_complement(ker: tuple[Vector, ...], dim: int) -> list[Vector]:
    if not ker:
        return [basis_vec(dim, i) for i in range(dim)]
    return Matrix(list(ker)).kernel_basis()


def classify(g2: G2Structure, lambda_=None) -> SolitonReport:
    """Run the divergence-based case split and the elimination arguments."""
    if not g2.closed:
        raise NotClosed("classification applies to closed structures")
    data = g2.torsion()
    alg = g2.alg
    div = divergence(alg, data.tau_sq)
    ker = tuple(data.ric.kernel_basis())
    if lambda_ is not None:
        lambda_ = QuadScalar.coerce(lambda_)
    else:
        solve = find_semialgebraic_soliton(g2)
        if solve is not None and solve.lambda_unique:
            lambda_ = solve.lambda_

    if vec_is_zero(div):
        case = DIVERGENCE_FREE
        if not ker:
            outcome = EliminatedTrivialKernel()
        else:
            outcome = _product_case(data, ker, lambda_)
    else:
        case = NON_DIVERGENCE_FREE
        if ker:
            outcome = Inconclusive(
                "tau^2 is not divergence-free and ric is degenerate: the "
                "extension and extension-times-Euclidean shapes cannot be "
                "separated at this level"
            )
        else:
            outcome = _extension_case(data, div, lambda_)
    return SolitonReport(
        case=case,
        ker_ric=ker,
        outcome=outcome,
        lambda_used=lambda_,
        div_tau_sq=div,
    )


def _product_case(data, ker, lambda_):
    """Divergence-free with nontrivial ker(ric): the product obstruction.

    Tested basis-independently: Q must preserve (ker ric)-perp and restrict
    to a single eigenvalue there.
    """
    n = data.ric.nrows
    q = data.Q
    complement = _orthogonal_complement(ker, n)
    if not complement:
        # ric = 0 everywhere: flat; only the Gaussian remains
        coeff = ZERO if lambda_ is None else -(lambda_ / rat(6))
        if data.ric.is_zero() and data.tau.is_zero():
            return GaussianOnly(quadratic_coefficient=coeff)
        return Inconclusive("ker(ric) is everything but the torsion is nonzero")

    # cross block: Q must map the complement into itself, i.e. Q w must be
    # orthogonal to ker(ric) directions
    for w in complement:
        qw = q.apply(w)
        for kv in ker:
            cross = dot(qw, kv)
            if not cross.is_zero():
                wi = _leading_index(w)
                ki = _leading_index(kv)
                return EliminatedProductObstruction(
                    witness=(wi + 1, ki + 1),
                    entries=(cross, ZERO),
                    cross_block=True,
                )

    # single eigenvalue on the complement: Q w = sigma w for every w
    sigma = None
    sigma_witness = None
    for w in complement:
        qw = q.apply(w)
        lead = _leading_index(w)
        candidate = qw[lead] / w[lead]
        if vec_is_zero(vec_add(qw, vec_scale(-candidate, w))):
            if sigma is None:
                sigma = candidate
                sigma_witness = lead
            elif candidate != sigma:
                return EliminatedProductObstruction(
                    witness=(sigma_witness + 1, lead + 1),
                    entries=(sigma, candidate),
                )
        else:
            # not even an eigenvector: exhibit two distinct diagonal values
            other = _leading_index(vec_add(qw, vec_scale(-candidate, w)))
            return EliminatedProductObstruction(
                witness=(lead + 1, other + 1),
                entries=(candidate, qw[other] / w[lead]),
            )
    # scalar on the complement
    if data.ric.is_zero() and data.tau.is_zero():
        coeff = ZERO if lambda_ is None else -(lambda_ / rat(6))
        return GaussianOnly(quadratic_coefficient=coeff)
    return Inconclusive(
        "Q is scalar on (ker ric)-perp; the product shape is not obstructed here"
    )


def _extension_case(data, div, lambda_):
    """Non-divergence-free with invertible ric: extension-shape contradiction."""
    # candidate gradient: ric(v) = -(1/2) (div tau^2)#
    rhs = vec_scale(rat(-1, 2), div)
    v = data.ric.solve(rhs)
    assert v is not None  # ric invertible here
    ric_v = data.ric.apply(v)
    w = vec_add(vec_scale(-1, ric_v), vec_scale(rat(-1, 2), data.tau_sq.apply(v)))
    # w + (1/3)(scal - lambda) v must vanish for the extension shape
    parallel_coeff = _parallel_coefficient(w, v)
    ric_eigen = _parallel_coefficient(ric_v, v)
    required_lambda = None
    if parallel_coeff is not None:
        # (1/3)(scal - lam) = -mu  =>  lam = scal + 3 mu
        required_lambda = data.scal + rat(3) * parallel_coeff
    if lambda_ is None:
        if parallel_coeff is None:
            return EliminatedExtensionContradiction(
                v=v,
                residual=w,
                ric_eigenvalue=ric_eigen,
                required_value=None,
                required_lambda=None,
                lambda_used=None,
                non_parallel=True,
            )
        return EliminatedExtensionContradiction(
            v=v,
            residual=w,
            ric_eigenvalue=ric_eigen,
            required_value=None,
            required_lambda=required_lambda,
            lambda_used=None,
            non_parallel=False,
        )
    factor = (data.scal - lambda_) / rat(3)
    residual = vec_add(w, vec_scale(factor, v))
    if vec_is_zero(residual):
        return Inconclusive(
            "the extension-shape necessary condition is satisfied; "
            "no contradiction at this level"
        )
    required_value = factor if ric_eigen is not None else None
    return EliminatedExtensionContradiction(
        v=v,
        residual=residual,
        ric_eigenvalue=ric_eigen,
        required_value=required_value,
        required_lambda=required_lambda,
        lambda_used=lambda_,
        non_parallel=parallel_coeff is None,
    )


def _parallel_coefficient(w: Vector, v: Vector):
    """mu with w = mu v, or None when w is not parallel to v (v != 0)."""
    lead = _leading_index(v)
    if lead is None:
        return None
    mu = w[lead] / v[lead]
    if vec_is_zero(vec_add(w, vec_scale(-mu, v))):
        return mu
    return None


def _leading_index(v: Vector):
    for i, c in enumerate(v):
        if not c.is_zero():
            return i
    return None


def gradient_ricci_residual(g2: G2Structure, v: Vector) -> Vector:
    """Covector <ric(v), .> + (1/2) div tau^2; zero iff v works as the
    potential gradient in the homogeneous gradient identity."""
    if not g2.closed:
        raise NotClosed("residual is defined for closed structures")
    if len(v) != g2.alg.dim:
        raise DimensionMismatch("vector length mismatch")
    data = g2.torsion()
    div = divergence(g2.alg, data.tau_sq)
    return vec_add(data.ric.apply(vec(v)), vec_scale(rat(1, 2), div))


def gaussian_product_lambda(k: int, scal: QuadScalar) -> QuadScalar:
    """lambda = -((2 + k)/(7 - k)) scal for the Gaussian product shape."""
    if not 0 <= k <= 6:
        raise ValueError("Euclidean factor dimension must be between 0 and 6")
    scal = QuadScalar.coerce(scal)
    return -(rat(2 + k, 7 - k) * scal)


def product_gaussian_tau_block(ric_n: Matrix, c: QuadScalar) -> SymTensor:
    """Predicted tau^2 = [-2 ric_N + 2c I | 0] block matrix (7x7)."""
    c = QuadScalar.coerce(c)
    m = ric_n.nrows
    if m > 7:
        raise DimensionMismatch("block larger than the ambient dimension")
    rows = [[ZERO] * 7 for _ in range(7)]
    for i in range(m):
        for j in range(m):
            value = rat(-2) * ric_n[i, j]
            if i == j:
                value = value + rat(2) * c
            rows[i][j] = value
    return SymTensor(rows)
