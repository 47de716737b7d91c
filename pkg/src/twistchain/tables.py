"""Reproduction harness for the bundled golden solution tables.

Each fixture records, for one (family, case, n, N) chain at eta = -i/10,
the complete list of Bethe root sets organized by cardinality, together
with the degeneracy of the matched eigenvalue, Dynkin labels where the
case has quantum-group symmetry, and markers for boundary-pinned roots on
the special manifold.  `reproduce` re-derives everything from scratch and
compares at the printed precision.
"""

import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .bethe import (SolveConfig, BetheRootSet, canonicalize, completeness,
                    is_special_manifold, level_periods, root_distance,
                    solution_distance, special_root_values)
from .chain import ChainSpec
from .kmatrix import BoundaryCase
from .rmatrix import ModelSpec

ETA_TABLES = -0.1j       # anisotropy used by every golden table
ROOT_TOL = 1e-5          # printed precision of the table roots


def load_tables() -> dict:
    text = resources.files("twistchain.data").joinpath("paper_tables.json").read_text()
    return json.loads(text)


def table_names() -> list:
    return sorted(load_tables().keys(), key=lambda s: int(s.removeprefix("table")))


def chain_for_table(tbl: dict) -> ChainSpec:
    model = ModelSpec(tbl["family"], tbl["n"], ETA_TABLES)
    kwargs = {}
    if tbl["case"] == "block-pair":
        kwargs = {"mu_minus": tbl["mu_minus"], "mu_plus": tbl["mu_plus"]}
    case = BoundaryCase(tbl["family"], tbl["case"], **kwargs)
    return ChainSpec(model, case, tbl["N"])


def _fixture_rootset(spec: ChainSpec, entry: dict) -> BetheRootSet:
    levels = tuple(tuple(complex(re, im) for re, im in lvl) for lvl in entry["roots"])
    return canonicalize(spec, BetheRootSet(levels))


def _has_pinned_root(spec: ChainSpec, roots: BetheRootSet) -> bool:
    if not is_special_manifold(spec):
        return False
    periods = level_periods(spec, roots.cardinalities)
    specials = special_root_values(spec, periods[0])
    return any(root_distance(z, s, periods[0]) < 1e-4
               for z in roots.levels[0] for s in specials)


@dataclass
class TableReport:
    name: str
    problems: list = field(default_factory=list)
    row_results: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.problems

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed,
                "problems": list(self.problems), "rows": list(self.row_results)}


def reproduce(name: str, cfg: SolveConfig | None = None) -> TableReport:
    """Re-derive one golden table and compare rows at printed precision."""
    tables = load_tables()
    if name not in tables:
        raise KeyError(f"unknown table {name!r}; choose from {table_names()}")
    tbl = tables[name]
    spec = chain_for_table(tbl)
    cfg = cfg or SolveConfig()
    rep = TableReport(name)

    caps = [0] * tbl["n"]
    for row in tbl["rows"]:
        caps = [max(c, m) for c, m in zip(caps, row["m"])]
    match = completeness(spec, caps, cfg)
    if match.unmatched_eigenvalues:
        rep.problems.append(
            f"{len(match.unmatched_eigenvalues)} eigenvalue clusters not matched by any root set")

    periods_cache = {}
    matched = list(match.pairs)
    used = [False] * len(matched)
    for row in tbl["rows"]:
        m = tuple(row["m"])
        if m not in periods_cache:
            periods_cache[m] = level_periods(spec, m)
        periods = periods_cache[m]
        if "label" in row:
            from .qsymm import label_from_cardinalities
            predicted = label_from_cardinalities(spec.case, spec.model.n, spec.n_sites, m)
            if list(predicted) != list(row["label"]):
                rep.problems.append(f"m={m}: cardinality label {predicted} != table {row['label']}")
        for entry in row["solutions"]:
            want = _fixture_rootset(spec, entry)
            hit = None
            for i, pair in enumerate(matched):
                if used[i] or pair.roots.cardinalities != m:
                    continue
                if solution_distance(spec, pair.roots, want) <= ROOT_TOL:
                    hit = i
                    break
            if hit is None:
                rep.problems.append(f"m={m}: table root set {entry['roots']} not reproduced")
                continue
            used[hit] = True
            pair = matched[hit]
            ok_deg = pair.degeneracy == entry["deg"]
            if not ok_deg:
                rep.problems.append(
                    f"m={m}: degeneracy {pair.degeneracy} != table {entry['deg']}")
            if entry.get("dagger", False) != _has_pinned_root(spec, pair.roots):
                rep.problems.append(f"m={m}: boundary-pinned-root marker mismatch")
            rep.row_results.append({
                "m": list(m),
                "deg": pair.degeneracy,
                "roots": [[[z.real, z.imag] for z in lvl] for lvl in pair.roots.levels],
                "lambda_error": pair.lambda_error,
                "energy_error": pair.energy_error,
            })
    for i, pair in enumerate(matched):
        if not used[i]:
            rep.problems.append(
                f"matched root set with m={pair.roots.cardinalities} has no table row")
    # multiplicity columns: count solutions per cardinality
    for row in tbl["rows"]:
        m = tuple(row["m"])
        got = sum(1 for i, p in enumerate(matched) if used[i] and p.roots.cardinalities == m)
        if got != len(row["solutions"]):
            rep.problems.append(
                f"m={m}: multiplicity {got} != table {len(row['solutions'])}")
    return rep
