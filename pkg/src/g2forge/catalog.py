"""Catalog of the reference algebras and their golden-value records.

Entries ship as JSON data files (auditable, with per-field provenance
tags), not code.  Each file carries the structure equations, the adapted
3-form, the expected exact values transcribed from the published tables
(plus the handful of entries forced by the defining identities where the
printed cells are inconsistent; see the per-entry ``errata``), and the
expected classification outcome.

``G2FORGE_CATALOG_DIR`` overrides the data directory.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import G2ForgeError
from .exterior import KForm, parse_form, render_form
from .g2core import G2Structure, build
from .liealg import LieAlgebraData, algebra_from_json
from .linalg import Matrix, Vector
from .scalars import QuadScalar, parse_scalar, render_scalar


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    aliases: tuple[str, ...]
    algebra: LieAlgebraData
    phi: KForm
    orientation: int
    expected: dict
    provenance: dict
    errata: tuple[str, ...]
    notes: str
    iso_from: dict | None

    def build(self) -> G2Structure:
        return build(self.algebra, self.phi, self.orientation)

    def all_names(self) -> tuple[str, ...]:
        return (self.name, *self.aliases)


def catalog_dir() -> Path:
    override = os.environ.get("G2FORGE_CATALOG_DIR")
    if override:
        return Path(override)
    return Path(str(resources.files("g2forge").joinpath("data/catalog")))


def _entry_from_json(data: dict) -> CatalogEntry:
    algebra = algebra_from_json(data)
    phi = parse_form(data["phi"], algebra.dim, degree=3)
    return CatalogEntry(
        name=data["name"],
        aliases=tuple(data.get("aliases", ())),
        algebra=algebra,
        phi=phi,
        orientation=int(data.get("orientation", 1)),
        expected=data.get("expected", {}),
        provenance=data.get("provenance", {}),
        errata=tuple(data.get("errata", ())),
        notes=data.get("notes", ""),
        iso_from=data.get("iso_from"),
    )


def load_catalog(directory: Path | None = None) -> dict[str, CatalogEntry]:
    directory = directory or catalog_dir()
    entries: dict[str, CatalogEntry] = {}
    for path in sorted(directory.glob("*.json")):
        with open(path, encoding="utf-8") as fh:
            entry = _entry_from_json(json.load(fh))
        entries[entry.name] = entry
    return entries


def lookup(name: str, directory: Path | None = None) -> CatalogEntry:
    entries = load_catalog(directory)
    if name in entries:
        return entries[name]
    for entry in entries.values():
        if name in entry.aliases:
            return entry
    raise G2ForgeError(f"no catalog entry named {name!r}")


def entry_names(directory: Path | None = None) -> list[str]:
    return sorted(load_catalog(directory))


# ---------------------------------------------------------------------------
# golden comparison
# ---------------------------------------------------------------------------


def matrix_to_strings(m: Matrix) -> list[list[str]]:
    return [[render_scalar(e) for e in row] for row in m.rows]


def vector_to_strings(v: Vector) -> list[str]:
    return [render_scalar(e) for e in v]


def _canon_scalar(text: str) -> str:
    return render_scalar(parse_scalar(str(text)))


def _canon_matrix(rows) -> list[list[str]]:
    return [[_canon_scalar(e) for e in row] for row in rows]


def _canon_vector(entries) -> list[str]:
    return [_canon_scalar(e) for e in entries]


def compare_golden(entry: CatalogEntry, computed: dict) -> list[tuple[str, object, object]]:
    """Field-by-field diff of computed values against the expected record.

    ``computed`` uses the same keys as the expected record with values
    already rendered to canonical text.  Returns a list of
    (field, expected, got) triples; empty means the golden gate passes.
    """
    diffs = []
    expected = entry.expected

    def check(field, want, got):
        if want != got:
            diffs.append((field, want, got))

    for key in ("tau", "star_phi"):
        if key in expected:
            want = render_form(parse_form(expected[key], entry.algebra.dim))
            check(key, want, computed.get(key))
    for key in ("tau_sq", "ric", "Q"):
        if key in expected:
            check(key, _canon_matrix(expected[key]), computed.get(key))
    for key in ("scal", "norm_sq", "lambda"):
        if key in expected:
            check(key, _canon_scalar(expected[key]), computed.get(key))
    if "div_tau_sq" in expected:
        check("div_tau_sq", _canon_vector(expected["div_tau_sq"]), computed.get("div_tau_sq"))
    if "classification" in expected:
        want = expected["classification"]
        got = computed.get("classification", {})
        for key, value in want.items():
            if key in ("entries",):
                check(
                    f"classification.{key}",
                    _canon_vector(value),
                    got.get(key),
                )
            elif key in ("v",):
                check(f"classification.{key}", _canon_vector(value), got.get(key))
            elif key in ("ric_eigenvalue", "required_value", "required_lambda"):
                check(f"classification.{key}", _canon_scalar(value), got.get(key))
            else:
                check(f"classification.{key}", value, got.get(key))
    if "connection" in expected:
        want = {
            (item["i"], item["j"]): _canon_vector(item["v"])
            for item in expected["connection"]
        }
        got = computed.get("connection", {})
        if want != got:
            # report the first differing cell for a readable diff
            for key in sorted(set(want) | set(got)):
                if want.get(key) != got.get(key):
                    diffs.append(
                        (f"connection[{key}]", want.get(key), got.get(key))
                    )
    if "predicates" in expected:
        for key, value in expected["predicates"].items():
            check(f"predicates.{key}", value, computed.get("predicates", {}).get(key))
    return diffs
