"""Scan records, their CSV/JSONL encodings and the append-only result cache."""

from __future__ import annotations

import csv
import io
import json
import os
import time
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from .logclass import DEFAULT_PRECISION
from .invariants import DEFAULT_M_MAX
from .quadfield.field import is_totally_ell_adic
from .verdicts import ConsistencyError, Reports, all_verdicts, verdict_C_infty, verdict_C_prime_infty

CSV_COLUMNS = (
    "delta", "ell", "split", "h_ell", "wcl", "rank", "torsion", "rational",
    "v_C_infty", "v_Cprime", "v_C_Z", "stabilized", "ms",
)

INCONSISTENT = "Inconsistent"


class CacheConflict(RuntimeError):
    pass


def _group_text(factors: tuple[int, ...]) -> str:
    return "x".join(map(str, factors)) if factors else "1"


def _group_parse(text: str) -> tuple[int, ...]:
    return () if text == "1" else tuple(int(x) for x in text.split("x"))


@dataclass(frozen=True)
class ResultRecord:
    delta: int
    ell: int
    split: bool
    h_ell: int
    wcl: tuple[int, ...]
    rank: int
    torsion: tuple[int, ...]
    rational: bool | None
    v_C_infty: str
    v_Cprime: str
    v_C_Z: str
    stabilized: bool
    ms: int
    m: int = DEFAULT_PRECISION
    m_max: int = DEFAULT_M_MAX

    @property
    def key(self) -> tuple[int, int, int, int]:
        return (self.delta, self.ell, self.m, self.m_max)

    def content(self) -> dict:
        """Everything but the timing, which legitimately varies between runs."""
        d = self.to_json()
        d.pop("ms")
        return d

    def to_json(self) -> dict:
        d = asdict(self)
        d["wcl"] = list(self.wcl)
        d["torsion"] = list(self.torsion)
        return d

    @classmethod
    def from_json(cls, d: dict) -> ResultRecord:
        d = dict(d)
        d["wcl"] = tuple(d["wcl"])
        d["torsion"] = tuple(d["torsion"])
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ValueError(f"unknown record fields {sorted(unknown)}")
        return cls(**d)

    def to_csv_row(self) -> list[str]:
        def b(x):
            return "" if x is None else ("true" if x else "false")

        return [
            str(self.delta), str(self.ell), b(self.split), str(self.h_ell), _group_text(self.wcl),
            str(self.rank), _group_text(self.torsion), b(self.rational), self.v_C_infty,
            self.v_Cprime, self.v_C_Z, b(self.stabilized), str(self.ms),
        ]

    @classmethod
    def from_csv_row(cls, row: dict, m: int = DEFAULT_PRECISION, m_max: int = DEFAULT_M_MAX) -> ResultRecord:
        def b(x):
            return None if x == "" else x == "true"

        return cls(
            int(row["delta"]), int(row["ell"]), b(row["split"]), int(row["h_ell"]), _group_parse(row["wcl"]),
            int(row["rank"]), _group_parse(row["torsion"]), b(row["rational"]), row["v_C_infty"],
            row["v_Cprime"], row["v_C_Z"], b(row["stabilized"]), int(row["ms"]), m, m_max,
        )


def compute_record(task: tuple[int, int, int, int]) -> ResultRecord:
    disc, ell, m, m_max = task
    t0 = time.perf_counter()
    reports = Reports.compute(disc, ell, m, m_max)
    try:
        v = {k: x.status.value for k, x in all_verdicts(disc, ell, reports).items()}
    except ConsistencyError:
        # recorded explicitly so scans finish; cmd_field and verify fail on it
        v = {
            "C_infty": verdict_C_infty(disc, ell, reports).status.value,
            "C_prime_infty": verdict_C_prime_infty(disc, ell, reports.wcl).status.value,
            "C_Z": INCONSISTENT,
        }
    r = reports.rationality
    return ResultRecord(
        delta=disc,
        ell=ell,
        split=True,
        h_ell=reports.cl_ell.order,
        wcl=reports.wcl.group.invariant_factors,
        rank=r.rank,
        torsion=r.torsion.invariant_factors,
        rational=r.is_rational if r.stabilized else None,
        v_C_infty=v["C_infty"],
        v_Cprime=v["C_prime_infty"],
        v_C_Z=v["C_Z"],
        stabilized=r.stabilized and reports.wcl.stabilized,
        ms=round((time.perf_counter() - t0) * 1000),
        m=m,
        m_max=m_max,
    )


class ResultCache:
    """Append-only JSONL store keyed by ``(delta, ell, m, m_max)``.

    Loading rejects malformed lines and keys recorded twice with different
    content; ``add`` rejects overwriting a key with different content.
    """

    def __init__(self, path: str | os.PathLike | None):
        self.path = Path(path) if path else None
        self.records: dict[tuple, ResultRecord] = {}
        if self.path and self.path.exists():
            with self.path.open(encoding="utf-8") as fh:
                for lineno, line in enumerate(fh, 1):
                    if not line.strip():
                        continue
                    try:
                        rec = ResultRecord.from_json(json.loads(line))
                    except (ValueError, TypeError, KeyError) as exc:
                        raise CacheConflict(f"{self.path}:{lineno}: malformed record ({exc})") from exc
                    self._check(rec, f"{self.path}:{lineno}")
                    self.records[rec.key] = rec

    def _check(self, rec: ResultRecord, where: str) -> None:
        old = self.records.get(rec.key)
        if old is not None and old.content() != rec.content():
            raise CacheConflict(f"{where}: conflicting values for key {rec.key}")

    def get(self, key) -> ResultRecord | None:
        return self.records.get(key)

    def add(self, rec: ResultRecord) -> None:
        self._check(rec, "new record")
        if rec.key in self.records:
            return
        self.records[rec.key] = rec
        if self.path:
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(rec.to_json(), sort_keys=True) + "\n")


def split_tasks(discs, ells, m: int, m_max: int) -> list[tuple[int, int, int, int]]:
    return [(d, ell, m, m_max) for d in discs for ell in ells if is_totally_ell_adic(d, ell)]


def write_records(records, fmt: str, out) -> None:
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in records:
            w.writerow(r.to_csv_row())
    elif fmt == "jsonl":
        for r in records:
            out.write(json.dumps(r.to_json(), sort_keys=True) + "\n")
    else:
        raise ValueError(f"unknown format {fmt}")


def read_records(text: str, m: int = DEFAULT_PRECISION, m_max: int = DEFAULT_M_MAX) -> list[ResultRecord]:
    """Parse CSV (detected by its header) or JSONL.

    CSV rows do not carry the precision settings; they are taken from ``m``
    and ``m_max``.
    """
    stripped = text.lstrip()
    if not stripped:
        return []
    if stripped.startswith("{"):
        return [ResultRecord.from_json(json.loads(line)) for line in text.splitlines() if line.strip()]
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    return [ResultRecord.from_csv_row(row, m, m_max) for row in reader]
