"""The published vertex tables, transcribed as CSV, and helpers to read them.

Cell syntax: "dim,delta" for a nonempty X_U, "E" for an empty one, and "X"
for a subspace that belongs to a different component.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources

from .subspaces import SubspaceParams

GOLDEN_FILES = {
    "E7a4": {1: "table1_e7a4_component1.csv", 2: "table2_e7a4_component2.csv"},
    "E7a5": {
        1: "table3_e7a5_component1.csv",
        2: "table4_e7a5_component2.csv",
        3: "table5_e7a5_component3.csv",
    },
}
DELTA_TABLE = "table6_e7a5_delta_ge3.csv"

# number of connected components of X_U for U in each component of Gamma*
COMPONENT_SIZES = {"E7a4": {1: 1, 2: 2}, "E7a5": {1: 1, 2: 3, 3: 6}}


@dataclass(frozen=True)
class GoldenEntry:
    params: SubspaceParams
    component: int
    status: str  # "nonempty", "empty" or "elsewhere"
    dim: int | None = None
    delta: int | None = None


def _read(name: str, directory=None) -> list[list[str]]:
    if directory is not None:
        from pathlib import Path

        text = (Path(directory) / name).read_text(encoding="utf-8")
    else:
        text = resources.files("e7paving.golden").joinpath(name).read_text(encoding="utf-8")
    return list(csv.reader(text.splitlines()))


def _cell(params, component, text) -> GoldenEntry:
    text = text.strip()
    if text == "E":
        return GoldenEntry(params, component, "empty")
    if text == "X":
        return GoldenEntry(params, component, "elsewhere")
    d, delta = (int(x) for x in text.split(","))
    return GoldenEntry(params, component, "nonempty", d, delta)


def component_table(case: str, component: int, directory=None) -> list[GoldenEntry]:
    rows = _read(GOLDEN_FILES[case][component], directory)
    header, body = rows[0], rows[1:]
    out = []
    for row in body:
        k, h = row[0].split("|")
        if case == "E7a4":
            ell = int(row[1])
            for col, cell in zip(header[2:], row[2:]):
                m = int(col.split("=")[1])
                p = SubspaceParams.parse(case, f"{k}|{h}|{ell}|{m}")
                out.append(_cell(p, component, cell))
        else:
            for col, cell in zip(header[1:], row[1:]):
                ell = int(col.split("=")[1])
                p = SubspaceParams.parse(case, f"{k}|{h}|{ell}")
                out.append(_cell(p, component, cell))
    return out


def all_entries(case: str, directory=None) -> list[GoldenEntry]:
    out = []
    for comp in GOLDEN_FILES[case]:
        out.extend(component_table(case, comp, directory))
    return out


def delta_table(directory=None) -> dict[SubspaceParams, int]:
    rows = _read(DELTA_TABLE, directory)[1:]
    return {SubspaceParams.parse("E7a5", r[0]): int(r[1]) for r in rows}
