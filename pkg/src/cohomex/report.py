"""Versioned reports and their renderings (JSON, markdown, CSV).

Schema (``schema_version`` 1), all keys always present::

    {
      "schema": "cohomex.report",
      "schema_version": 1,
      "algorithm_version": "...",
      "kind": "cohomology" | "verify" | "census",
      "group": {"descriptor": str, "order": int} | null,
      "coefficients": "int" | "mod:m" | null,
      "degrees": [{"degree": n, "free_rank": r, "torsion": [d1, ...],
                   "exponent": e, "has_free_part": bool, "text": "Z/2 + Z/4"}],
      "matrices": {name: {"rows": r, "cols": c, "entries": [[i, j, v], ...]}},
      "verdicts": [{"claim": id, "status": s, "reason": str, "evidence": {...}}],
      "census": [ExponentSummary rows],
      "timing": {"seconds": float, "cache_hits": int, "cache_misses": int}
    }

``timing`` is the only field allowed to differ between two runs of the
same job; :func:`canonical_json` drops it.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from .cohomology import CoefficientSpec
from .errors import ParseError
from .intlinalg import DEFAULT_BIT_BOUND, AbelianGroupInvariants, exponent_of

SCHEMA = "cohomex.report"
SCHEMA_VERSION = 1
# bump on any change to differential conventions, matching or SNF canonicalization
ALGORITHM_VERSION = "morse-snf-1"
FORMATS = ("json", "md", "csv")


@dataclass
class JobSpec:
    descriptor: str
    coeffs: CoefficientSpec
    degrees: range
    checks: tuple[str, ...] = ()
    budget_generators: int = 20_000_000
    max_bits: int = DEFAULT_BIT_BOUND
    time_limit: float = 1800.0
    output_format: str = "json"

    def __post_init__(self):
        if len(self.degrees) == 0:
            raise ParseError("empty degree range")
        if self.degrees.start < 0:
            raise ParseError("degrees must be non-negative")
        if min(self.budget_generators, self.max_bits, self.time_limit) <= 0:
            raise ParseError("budgets must be positive")
        if self.output_format not in FORMATS:
            raise ParseError(f"unknown format {self.output_format!r}")


def parse_degrees(text: str) -> range:
    """``"A..B"`` (inclusive) or a single degree."""
    a, sep, b = text.partition("..")
    try:
        lo = int(a)
        hi = int(b) if sep else lo
    except ValueError:
        raise ParseError(f"bad degree range {text!r} (use A..B)") from None
    if lo < 0 or hi < lo:
        raise ParseError(f"bad degree range {text!r}")
    return range(lo, hi + 1)


def degree_entry(n: int, inv: AbelianGroupInvariants) -> dict:
    e, free = exponent_of(inv)
    return {"degree": n, "free_rank": inv.free_rank, "torsion": list(inv.torsion),
            "exponent": e, "has_free_part": free, "text": str(inv)}


def matrix_entry(rows: int, cols: int, matrix) -> dict:
    entries = [[i, j, v] for i, row in enumerate(matrix) for j, v in enumerate(row) if v]
    return {"rows": rows, "cols": cols, "entries": entries}


@dataclass
class CohomologyReport:
    kind: str = "cohomology"
    descriptor: str | None = None
    order: int | None = None
    coeffs: str | None = None
    degrees: list[dict] = field(default_factory=list)
    matrices: dict[str, dict] = field(default_factory=dict)
    verdicts: list[dict] = field(default_factory=list)
    census: list[dict] = field(default_factory=list)
    timing: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "schema_version": SCHEMA_VERSION,
            "algorithm_version": ALGORITHM_VERSION,
            "kind": self.kind,
            "group": None if self.descriptor is None else {"descriptor": self.descriptor,
                                                           "order": self.order},
            "coefficients": self.coeffs,
            "degrees": self.degrees,
            "matrices": self.matrices,
            "verdicts": self.verdicts,
            "census": self.census,
            "timing": self.timing,
        }

    @classmethod
    def from_json(cls, data: dict) -> "CohomologyReport":
        if data.get("schema") != SCHEMA or data.get("schema_version") != SCHEMA_VERSION:
            raise ParseError("not a cohomex report of a supported schema version")
        grp = data["group"] or {}
        return cls(data["kind"], grp.get("descriptor"), grp.get("order"), data["coefficients"],
                   data["degrees"], data["matrices"], data["verdicts"], data["census"],
                   data["timing"])

    @property
    def failed(self) -> bool:
        return any(v["status"] == "fail" for v in self.verdicts)


def canonical_json(report: CohomologyReport) -> str:
    data = report.to_json()
    data.pop("timing")
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def render(report: CohomologyReport, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.to_json(), sort_keys=True, indent=2)
    if fmt == "md":
        return _render_md(report)
    if fmt == "csv":
        return _render_csv(report)
    raise ParseError(f"unknown format {fmt!r}")


def _render_md(report: CohomologyReport) -> str:
    out = []
    if report.descriptor:
        out.append(f"## {report.descriptor} (order {report.order})")
        out.append("")
    if report.degrees:
        out.append(f"| degree | H^n ({report.coeffs}) | exponent |")
        out.append("|---|---|---|")
        for d in report.degrees:
            exp = "inf" if d["has_free_part"] else d["exponent"]
            out.append(f"| {d['degree']} | {d['text']} | {exp} |")
        out.append("")
    if report.verdicts:
        out.append("| claim | status | reason |")
        out.append("|---|---|---|")
        for v in report.verdicts:
            out.append(f"| {v['claim']} | {v['status']} | {v['reason']} |")
        out.append("")
    if report.census:
        degs = sorted({int(k) for row in report.census for k in row["exponents"]})
        head = ["params", "eps", "m", "n", "lemma1_n", "first_eps"] + [f"e{d}" for d in degs]
        out.append("| " + " | ".join(head) + " |")
        out.append("|" + "---|" * len(head))
        for row in report.census:
            out.append("| " + " | ".join(str(v) for v in _census_cells(row, degs)) + " |")
        out.append("")
    return "\n".join(out)


def _census_cells(row: dict, degs: list[int]) -> list:
    p = row["params"]
    label = f"({p['p']},{p['alpha']},{p['beta']},{p['gamma']},{p['delta']})"
    cells = [label, row["epsilon"], row["m"], row["n"], row["lemma1_n"], row["first_epsilon_degree"]]
    cells += [row["exponents"].get(str(d), "") for d in degs]
    return ["" if c is None else c for c in cells]


def _render_csv(report: CohomologyReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if report.census:
        degs = sorted({int(k) for row in report.census for k in row["exponents"]})
        w.writerow(["params", "epsilon", "m", "n", "lemma1_n", "first_epsilon_degree"]
                   + [f"exp_{d}" for d in degs])
        for row in report.census:
            w.writerow(_census_cells(row, degs))
    elif report.degrees:
        w.writerow(["descriptor", "coefficients", "degree", "free_rank", "torsion", "exponent"])
        for d in report.degrees:
            w.writerow([report.descriptor, report.coeffs, d["degree"], d["free_rank"],
                        " ".join(map(str, d["torsion"])), d["exponent"]])
    else:
        w.writerow(["claim", "status", "reason"])
        for v in report.verdicts:
            w.writerow([v["claim"], v["status"], v["reason"]])
    return buf.getvalue()
