"""Deterministic report writers.

JSON is written with sorted keys and a trailing newline; CSV through the
csv module with a header row and minimal RFC-4180 quoting. Nothing time-
or host-dependent ends up in either.
"""

import csv
import json
import logging
from pathlib import Path
from typing import Any

from toeplab.schemas.reports import RunReport, Table

logger = logging.getLogger(__name__)


def canonical_json(payload: Any) -> str:
    return json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True, allow_nan=True)


def write_json(path: Path, payload: Any) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(canonical_json(payload) + "\n", encoding="utf-8")


def write_csv(path: Path, table: Table) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\r\n", quoting=csv.QUOTE_MINIMAL)
        writer.writerow(table.header)
        writer.writerows(table.rows)


def write_run(report: RunReport, out_dir: Path) -> list[Path]:
    """Write report.json, one JSON per check and every CSV table, in check order."""
    written: list[Path] = []
    report_path = out_dir / "report.json"
    write_json(report_path, report.model_dump(mode="json"))
    written.append(report_path)
    for check in report.checks:
        check_path = out_dir / f"{check.check}.json"
        write_json(check_path, check.model_dump(mode="json"))
        written.append(check_path)
        for name in sorted(check.tables):
            table_path = out_dir / f"{name}.csv"
            write_csv(table_path, check.tables[name])
            written.append(table_path)
    logger.info("Wrote %d files to %s", len(written), out_dir)
    return written
