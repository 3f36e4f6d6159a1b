"""Assemble JSON-ready report dictionaries for structures and extensions.

Forms render in the ``-e135+1/2*r2*e267`` syntax, matrices as arrays of
canonical scalar strings, so reports round-trip through the parsers.
"""

from __future__ import annotations

from .catalog import matrix_to_strings, vector_to_strings
from .exterior import render_form
from .g2core import G2Structure, check_theta_identity, find_semialgebraic_soliton
from .liealg import predicates
from .riemann import levi_civita
from .scalars import QuadScalar, render_scalar
from .soliton import (
    EliminatedExtensionContradiction,
    EliminatedProductObstruction,
    EliminatedTrivialKernel,
    GaussianOnly,
    Inconclusive,
    SolitonReport,
    classify,
)


def predicates_dict(alg) -> dict:
    p = predicates(alg)
    return {
        "is_nilpotent": p.is_nilpotent,
        "is_unimodular": p.is_unimodular,
        "is_nice_basis": p.is_nice_basis,
        "is_orthogonally_nice": p.is_orthogonally_nice,
    }


def connection_dict(alg) -> dict:
    """Nonzero covariant derivative entries keyed by (i, j)."""
    conn = levi_civita(alg)
    out = {}
    for i in range(1, alg.dim + 1):
        for j in range(1, alg.dim + 1):
            v = conn.nabla(i, j)
            if any(not c.is_zero() for c in v):
                out[(i, j)] = vector_to_strings(v)
    return out


def classification_dict(report: SolitonReport) -> dict:
    out = {
        "case": report.case,
        "outcome": report.outcome_name,
        "ker_ric": [vector_to_strings(v) for v in report.ker_ric],
        "div_tau_sq": vector_to_strings(report.div_tau_sq),
    }
    if report.lambda_used is not None:
        out["lambda_used"] = render_scalar(report.lambda_used)
    outcome = report.outcome
    if isinstance(outcome, EliminatedProductObstruction):
        out["witness"] = list(outcome.witness)
        out["entries"] = [render_scalar(e) for e in outcome.entries]
        out["cross_block"] = outcome.cross_block
    elif isinstance(outcome, EliminatedExtensionContradiction):
        out["v"] = vector_to_strings(outcome.v)
        out["residual"] = vector_to_strings(outcome.residual)
        if outcome.ric_eigenvalue is not None:
            out["ric_eigenvalue"] = render_scalar(outcome.ric_eigenvalue)
        if outcome.required_value is not None:
            out["required_value"] = render_scalar(outcome.required_value)
        if outcome.required_lambda is not None:
            out["required_lambda"] = render_scalar(outcome.required_lambda)
        out["non_parallel"] = outcome.non_parallel
    elif isinstance(outcome, GaussianOnly):
        out["quadratic_coefficient"] = render_scalar(outcome.quadratic_coefficient)
    elif isinstance(outcome, (EliminatedTrivialKernel, Inconclusive)):
        note = getattr(outcome, "note", None) or getattr(outcome, "notes", None)
        if note:
            out["note"] = note
    return out


def structure_report(g2: G2Structure, name: str | None = None,
                     lambda_: QuadScalar | None = None,
                     include_connection: bool = False) -> dict:
    """Full report: torsion record, theta identity, soliton solve, and the
    gradient classification."""
    data = g2.torsion()
    solve = find_semialgebraic_soliton(g2)
    report = classify(g2, lambda_)
    out = {
        "name": name or (g2.alg.name or "structure"),
        "closed": g2.closed,
        "orientation": g2.orientation,
        "phi": render_form(g2.phi),
        "star_phi": render_form(_star_phi(g2)),
        "tau": render_form(data.tau),
        "tau_sq": matrix_to_strings(data.tau_sq),
        "ric": matrix_to_strings(data.ric),
        "Q": matrix_to_strings(data.Q),
        "scal": render_scalar(data.scal),
        "norm_sq": render_scalar(data.norm_sq),
        "laplacian": render_form(data.laplacian),
        "theta_identity": check_theta_identity(g2),
        "div_tau_sq": vector_to_strings(report.div_tau_sq),
        "predicates": predicates_dict(g2.alg),
        "classification": classification_dict(report),
    }
    if solve is not None:
        out["lambda"] = render_scalar(solve.lambda_)
        out["lambda_unique"] = solve.lambda_unique
        out["soliton_derivation"] = matrix_to_strings(solve.derivation)
        out["soliton_solution_dim"] = solve.solution_dim
    if include_connection:
        out["connection"] = connection_dict(g2.alg)
    return out


def _star_phi(g2: G2Structure):
    from .exterior import hodge_star

    return hodge_star(g2.phi, orientation=g2.orientation)


def check_report(g2: G2Structure, name: str | None = None) -> dict:
    """Validation-level report: predicates plus closedness/positivity facts."""
    return {
        "name": name or (g2.alg.name or "structure"),
        "jacobi": "ok",
        "positive": True,
        "closed": g2.closed,
        "orientation": g2.orientation,
        "metric": matrix_to_strings(g2.metric),
        "predicates": predicates_dict(g2.alg),
    }
