import csv
import json
from dataclasses import dataclass, asdict

from eigenbound.utils.path_utils import ensure_dir

REPORT_COLUMNS = ["id", "family", "k", "lhs", "rhs", "margin", "satisfied"]


@dataclass(frozen=True)
class BoundReport:
    id: str
    family: str
    k: int
    lhs: float
    rhs: float
    margin: float
    satisfied: bool

    def to_dict(self) -> dict:
        return asdict(self)


def make_report(id: str, family: str, k: int, lhs: float, rhs: float, slack: float) -> BoundReport:
    """lhs <= rhs is checked with relative slack on |rhs|."""
    lhs = float(lhs)
    rhs = float(rhs)
    return BoundReport(
        id=id,
        family=family,
        k=int(k),
        lhs=lhs,
        rhs=rhs,
        margin=rhs - lhs,
        satisfied=bool(lhs <= rhs + slack * abs(rhs)),
    )


def format_float(value: float) -> str:
    return f"{value:.17g}"


def write_reports_csv(reports: list[BoundReport], path: str) -> str:
    ensure_dir(path)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for r in reports:
            writer.writerow(
                [
                    r.id,
                    r.family,
                    r.k,
                    format_float(r.lhs),
                    format_float(r.rhs),
                    format_float(r.margin),
                    "true" if r.satisfied else "false",
                ]
            )
    return path


def write_reports_json(reports: list[BoundReport], path: str) -> str:
    ensure_dir(path)
    with open(path, "w") as f:
        json.dump([r.to_dict() for r in reports], f, indent=4)
    return path


def read_reports_csv(path: str) -> list[BoundReport]:
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    return [
        BoundReport(
            id=row["id"],
            family=row["family"],
            k=int(row["k"]),
            lhs=float(row["lhs"]),
            rhs=float(row["rhs"]),
            margin=float(row["margin"]),
            satisfied=row["satisfied"] == "true",
        )
        for row in rows
    ]
