"""CSV ingestion and an append-only, line-delimited referral store.

Records are one JSON object per line (`student_id`, `date`, `counts`) so
the file stays human-inspectable. Writes take an advisory lock and append
the whole batch in a single write: readers never observe a partial batch.
"""
from __future__ import annotations

import csv
import datetime as dt
import fcntl
import json
import os
from dataclasses import dataclass, field
from typing import Iterable, Optional, TextIO


@dataclass(frozen=True)
class ReferralRecord:
    student_id: str
    date: dt.date
    counts: tuple[tuple[str, float], ...]  # sorted by variable name

    @classmethod
    def make(cls, student_id: str, date: dt.date, counts: dict[str, float]):
        if not student_id:
            raise ValueError("student_id must be non-empty")
        for name, value in counts.items():
            if value < 0:
                raise ValueError(f"count '{name}' is negative: {value}")
        return cls(student_id, date, tuple(sorted(counts.items())))

    def count_map(self) -> dict[str, float]:
        return dict(self.counts)

    def to_json(self) -> str:
        return json.dumps(
            {
                "student_id": self.student_id,
                "date": self.date.isoformat(),
                "counts": self.count_map(),
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "ReferralRecord":
        obj = json.loads(text)
        if not isinstance(obj, dict):
            raise ValueError("record line is not a JSON object")
        counts = obj["counts"]
        if not isinstance(counts, dict):
            raise ValueError("'counts' is not an object")
        return cls.make(
            student_id=str(obj["student_id"]),
            date=dt.date.fromisoformat(obj["date"]),
            counts={str(k): float(v) for k, v in counts.items()},
        )


@dataclass(frozen=True)
class RowError:
    row: int  # 1-based, counting the header as row 1
    message: str


def parse_referral_csv(stream: TextIO) -> tuple[list[ReferralRecord], list[RowError]]:
    """Parse `student_id,date,<var1>,<var2>,...` rows.

    Valid rows survive invalid neighbors; every bad row yields a RowError
    with its row number. A malformed header aborts with a single error.
    """
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        return [], [RowError(1, "empty input: missing header row")]
    header = [h.strip() for h in header]
    if len(header) < 3 or header[0] != "student_id" or header[1] != "date":
        return [], [
            RowError(1, "malformed header: expected student_id,date,<variables...>")
        ]
    variables = header[2:]
    if len(variables) != len(set(variables)):
        return [], [RowError(1, "malformed header: duplicate variable columns")]

    records: list[ReferralRecord] = []
    errors: list[RowError] = []
    for row_no, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            errors.append(
                RowError(row_no, f"expected {len(header)} fields, got {len(row)}")
            )
            continue
        student_id = row[0].strip()
        if not student_id:
            errors.append(RowError(row_no, "empty student_id"))
            continue
        try:
            date = dt.date.fromisoformat(row[1].strip())
        except ValueError:
            errors.append(RowError(row_no, f"bad date '{row[1].strip()}' (expected YYYY-MM-DD)"))
            continue
        counts = {}
        row_ok = True
        for name, cell in zip(variables, row[2:]):
            try:
                value = float(cell)
            except ValueError:
                errors.append(RowError(row_no, f"non-numeric count for '{name}': '{cell}'"))
                row_ok = False
                break
            if value < 0:
                errors.append(RowError(row_no, f"negative count for '{name}': {cell}"))
                row_ok = False
                break
            counts[name] = value
        if row_ok:
            records.append(ReferralRecord.make(student_id, date, counts))
    return records, errors


class StoreLockedError(RuntimeError):
    """Another writer holds the store's advisory lock."""


@dataclass
class ReferralStore:
    path: str

    @property
    def record_count(self) -> int:
        if not os.path.exists(self.path):
            return 0
        with open(self.path, "r", encoding="utf-8") as fh:
            return sum(1 for line in fh if line.strip())

    def append(self, records: Iterable[ReferralRecord]) -> int:
        """Append a batch atomically; returns the new record count."""
        blob = "".join(r.to_json() + "\n" for r in records)
        fd = os.open(self.path, os.O_WRONLY | os.O_CREAT | os.O_APPEND, 0o644)
        try:
            try:
                fcntl.flock(fd, fcntl.LOCK_EX | fcntl.LOCK_NB)
            except BlockingIOError:
                raise StoreLockedError(f"store '{self.path}' is locked by another writer")
            if blob:
                os.write(fd, blob.encode("utf-8"))
        finally:
            os.close(fd)
        return self.record_count

    def load(
        self,
        student_id: Optional[str] = None,
        date_from: Optional[dt.date] = None,
        date_to: Optional[dt.date] = None,
    ) -> tuple[list[ReferralRecord], list[RowError]]:
        """Records in append order matching the filter, plus per-line errors
        for corrupt lines (valid records are still returned)."""
        records: list[ReferralRecord] = []
        errors: list[RowError] = []
        if not os.path.exists(self.path):
            return records, errors
        with open(self.path, "r", encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    rec = ReferralRecord.from_json(line)
                except (ValueError, KeyError) as e:
                    errors.append(RowError(line_no, f"corrupt store line: {e}"))
                    continue
                if student_id is not None and rec.student_id != student_id:
                    continue
                if date_from is not None and rec.date < date_from:
                    continue
                if date_to is not None and rec.date > date_to:
                    continue
                records.append(rec)
        return records, errors
