"""Stage-by-stage reduction reports and the bundled reference rows."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from typing import Dict, List, Mapping, Optional, Tuple

from .pbf import DegreeProfile, Polynomial, degree_profile

REPORT_DEGREES = (4, 3, 2, 1)


@dataclass(frozen=True)
class ReferenceRow:
    stage: str
    qubits: int
    deductions: Optional[int]
    counts: Dict[int, int]


@dataclass(frozen=True)
class Reference:
    product: int
    p_bits: int
    q_bits: int
    factors: Tuple[int, int]
    rows: Tuple[ReferenceRow, ...]

    def row(self, stage: str) -> Optional[ReferenceRow]:
        for r in self.rows:
            if r.stage == stage:
                return r
        return None


def _parse_reference(text: str) -> List[Reference]:
    blocks: List[Reference] = []
    current: Dict[str, object] = {}
    rows: List[ReferenceRow] = []

    def flush():
        if current:
            blocks.append(Reference(current["product"], current["p_bits"], current["q_bits"],
                                    current["factors"], tuple(rows)))

    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *rest = line.split()
        if key == "product":
            flush()
            current, rows = {"product": int(rest[0])}, []
        elif key in ("p_bits", "q_bits"):
            current[key] = int(rest[0])
        elif key == "factors":
            current["factors"] = (int(rest[0]), int(rest[1]))
        elif key == "stage":
            fields = dict(zip(rest[1::2], rest[2::2]))
            counts = {int(k[3:]): int(v) for k, v in fields.items() if k.startswith("deg")}
            ded = fields["deductions"]
            rows.append(ReferenceRow(rest[0], int(fields["qubits"]),
                                     None if ded == "-" else int(ded), counts))
    flush()
    return blocks


def load_references() -> List[Reference]:
    text = resources.files("deducreduc").joinpath("data/reference.txt").read_text(encoding="utf-8")
    return _parse_reference(text)


def reference_for(product: int, p_bits: Optional[int] = None,
                  q_bits: Optional[int] = None) -> Optional[Reference]:
    for ref in load_references():
        if ref.product == product and p_bits in (None, ref.p_bits) and q_bits in (None, ref.q_bits):
            return ref
    return None


@dataclass(frozen=True)
class StageRow:
    stage: str
    qubits: int
    deductions: Optional[int]
    profile: DegreeProfile

    @classmethod
    def of(cls, stage: str, h: Polynomial, deductions: Optional[int]) -> "StageRow":
        p = degree_profile(h)
        return cls(stage, p.variable_count, deductions, p)


@dataclass
class ReductionReport:
    rows: List[StageRow]
    config: Dict[str, str] = field(default_factory=dict)
    timings: List[Tuple[str, float]] = field(default_factory=list)
    reference: Optional[Reference] = None

    @classmethod
    def from_stages(cls, stages, config: Optional[Mapping[str, object]] = None,
                    reference: Optional[Reference] = None) -> "ReductionReport":
        # profiles are recomputed from the stage polynomials every time
        rows = [StageRow.of(s.name, s.hamiltonian, s.deductions) for s in stages]
        timings = [(s.name, s.seconds) for s in stages]
        echo = {k: str(v) for k, v in (config or {}).items()}
        return cls(rows, echo, timings, reference)

    def degrees(self) -> List[int]:
        top = max([max(r.profile.counts, default=0) for r in self.rows] + [max(REPORT_DEGREES)])
        return list(range(top, 0, -1))

    def deltas(self, row: StageRow) -> Optional[Dict[str, int]]:
        ref = self.reference.row(row.stage) if self.reference else None
        if ref is None:
            return None
        out = {"qubits": row.qubits - ref.qubits}
        for d in REPORT_DEGREES:
            out[f"deg{d}"] = row.profile[d] - ref.counts.get(d, 0)
        return out

    def table(self) -> str:
        degrees = self.degrees()
        header = ["stage", "qubits", "deductions"] + [f"deg{d}" for d in degrees] + ["const"]
        body = []
        for row in self.rows:
            ded = "-" if row.deductions is None else str(row.deductions)
            cells = [row.stage, str(row.qubits), ded] + [str(row.profile[d]) for d in degrees]
            body.append(cells + [str(row.profile[0])])
            ref = self.reference.row(row.stage) if self.reference else None
            if ref is not None:
                rded = "-" if ref.deductions is None else str(ref.deductions)
                cells = ["  reference", str(ref.qubits), rded]
                cells += [str(ref.counts[d]) if d in ref.counts else "" for d in degrees]
                body.append(cells + [""])
                delta = self.deltas(row)
                cells = ["  delta", f"{delta['qubits']:+d}", ""]
                cells += [f"{delta[f'deg{d}']:+d}" if f"deg{d}" in delta else "" for d in degrees]
                body.append(cells + [""])
        widths = [max(len(r[i]) for r in [header] + body) for i in range(len(header))]

        def fmt(cells):
            first = cells[0].ljust(widths[0])
            rest = [c.rjust(w) for c, w in zip(cells[1:], widths[1:])]
            return "  ".join([first] + rest).rstrip()

        lines = [fmt(header), fmt(["-" * w for w in widths])]
        lines += [fmt(cells) for cells in body]
        return "\n".join(lines) + "\n"

    def keyvalue(self, include_timings: bool = False) -> str:
        lines = []
        for key, value in self.config.items():
            lines.append(f"config.{key} = {value}")
        if self.reference is not None:
            lines.append(f"reference.product = {self.reference.product}")
        for row in self.rows:
            lines.append("")
            lines.append(f"[stage {row.stage}]")
            lines.append(f"qubits = {row.qubits}")
            lines.append(f"deductions = {'-' if row.deductions is None else row.deductions}")
            top = max(max(row.profile.counts, default=0), max(REPORT_DEGREES))
            for d in range(top, -1, -1):
                lines.append(f"deg{d} = {row.profile[d]}")
            lines.append(f"terms = {row.profile.term_count}")
            deltas = self.deltas(row)
            if deltas is not None:
                for key, value in deltas.items():
                    lines.append(f"delta.{key} = {value:+d}")
        if include_timings:
            lines.append("")
            lines.append("[timings]")
            for name, seconds in self.timings:
                lines.append(f"{name} = {seconds:.3f}")
        return "\n".join(lines).lstrip("\n") + "\n"
