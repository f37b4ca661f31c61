"""CSV/JSON serialization of inequality reports and pair distributions.

Floats are written with 12 significant digits, so the canonical form of a
report is the one whose floats have been passed through :func:`canonical`.
Reading a serialized file gives back exactly that canonical form.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import asdict, fields
from pathlib import Path

import numpy as np

from .experiment import InequalityReport, PairDistribution

SIG_DIGITS = 12

REPORT_COLUMNS = [
    "n", "L", "policy", "rhs_sum", "information_target", "violated", "margin",
    "paper_bound", "success_probability",
    "kind", "method", "classical_rhs_sum", "joint_entropy", "oracle_calls",
]
PAIR_COLUMNS = ["k", "source", "p00", "p01", "p10", "p11", "conditional_entropy",
                "stderr", "samples"]
RECORD_COLUMNS = ["k", "a_k", "a_k1"]

_FLOAT_FIELDS = {"information_target", "rhs_sum", "margin", "paper_bound",
                 "success_probability", "classical_rhs_sum", "joint_entropy"}


def canonical(x: float | None) -> float | None:
    if x is None:
        return None
    return float(f"{float(x):.{SIG_DIGITS}g}")


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.{SIG_DIGITS}g}"
    return str(x)


def canonical_report(report: InequalityReport) -> InequalityReport:
    data = asdict(report)
    for name in _FLOAT_FIELDS:
        data[name] = canonical(data[name])
    data["per_step"] = [canonical(x) for x in data["per_step"]]
    return InequalityReport(**data)


def report_to_dict(report: InequalityReport) -> dict:
    return asdict(canonical_report(report))


def report_from_dict(data: dict) -> InequalityReport:
    known = {f.name for f in fields(InequalityReport)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown report fields: {sorted(unknown)}")
    return canonical_report(InequalityReport(**data))


def pair_to_dict(pair: PairDistribution) -> dict:
    return {
        "k": pair.k,
        "source": pair.source,
        "joint": [[canonical(v) for v in row] for row in np.asarray(pair.joint).tolist()],
        "conditional_entropy": canonical(pair.conditional_entropy),
        "stderr": canonical(pair.stderr),
        "samples": pair.samples,
    }


def pair_from_dict(data: dict) -> PairDistribution:
    return PairDistribution(
        k=int(data["k"]),
        joint=np.array(data["joint"], dtype=float),
        source=data["source"],
        stderr=canonical(data.get("stderr")),
        samples=data.get("samples"),
    )


# --- text encodings ---------------------------------------------------------

def reports_to_json(reports) -> str:
    return json.dumps([report_to_dict(r) for r in reports], indent=2) + "\n"


def reports_from_json(text: str) -> list[InequalityReport]:
    data = json.loads(text)
    if isinstance(data, dict):
        data = [data]
    return [report_from_dict(d) for d in data]


def reports_to_csv(reports) -> str:
    reports = [canonical_report(r) for r in reports]
    width = max((len(r.per_step) for r in reports), default=0)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS + [f"per_step_{i}" for i in range(width)])
    for r in reports:
        row = [_fmt(getattr(r, c)) for c in REPORT_COLUMNS]
        steps = [_fmt(x) for x in r.per_step]
        writer.writerow(row + steps + [""] * (width - len(steps)))
    return buf.getvalue()


def _parse_cell(column: str, cell: str):
    if cell == "":
        return None
    if column in ("n", "L", "oracle_calls"):
        return int(cell)
    if column == "violated":
        if cell not in ("true", "false"):
            raise ValueError(f"bad boolean {cell!r}")
        return cell == "true"
    if column in _FLOAT_FIELDS:
        return float(cell)
    return cell


def reports_from_csv(text: str) -> list[InequalityReport]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    fixed = header[: len(REPORT_COLUMNS)]
    if fixed != REPORT_COLUMNS:
        raise ValueError(f"unexpected CSV header {header[:len(REPORT_COLUMNS)]}")
    reports = []
    for row in reader:
        data = {c: _parse_cell(c, cell) for c, cell in zip(REPORT_COLUMNS, row)}
        data["per_step"] = [float(x) for x in row[len(REPORT_COLUMNS):] if x != ""]
        reports.append(report_from_dict(data))
    return reports


def pairs_to_json(pairs) -> str:
    return json.dumps([pair_to_dict(p) for p in pairs], indent=2) + "\n"


def pairs_from_json(text: str) -> list[PairDistribution]:
    return [pair_from_dict(d) for d in json.loads(text)]


def pairs_to_csv(pairs) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(PAIR_COLUMNS)
    for p in pairs:
        d = pair_to_dict(p)
        flat = [v for row in d["joint"] for v in row]
        writer.writerow([d["k"], d["source"], *map(_fmt, flat),
                         _fmt(d["conditional_entropy"]), _fmt(d["stderr"]), _fmt(d["samples"])])
    return buf.getvalue()


def pairs_from_csv(text: str) -> list[PairDistribution]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != PAIR_COLUMNS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    out = []
    for row in reader:
        joint = [[float(row["p00"]), float(row["p01"])], [float(row["p10"]), float(row["p11"])]]
        out.append(PairDistribution(
            k=int(row["k"]), joint=np.array(joint), source=row["source"],
            stderr=float(row["stderr"]) if row["stderr"] else None,
            samples=int(row["samples"]) if row["samples"] else None,
        ))
    return out


def records_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RECORD_COLUMNS)
    writer.writerows(np.asarray(rows, dtype=np.int64).tolist())
    return buf.getvalue()


def records_from_csv(text: str) -> np.ndarray:
    """Parse ``k,a_k,a_k1`` rows; errors name the offending line."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != RECORD_COLUMNS:
        raise ValueError(f"line 1: expected header {','.join(RECORD_COLUMNS)}")
    rows = []
    for lineno, row in enumerate(reader, start=2):
        try:
            rows.append([int(x) for x in row])
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer field in {row!r}") from None
        if len(row) != 3:
            raise ValueError(f"line {lineno}: expected 3 fields, got {len(row)}")
    if not rows:
        raise ValueError("no records")
    return np.array(rows, dtype=np.int64)


def atomic_write(path, text: str) -> None:
    """Write to a sibling temp file, then rename; no partial file on failure."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
