"""Fixed CSV schemas for the four experiment sweeps and their validation.

Each kind maps to an exact header and per-column parsers.  Validation
failures raise SchemaError with a diagnostic naming the expected and the
observed columns, which the CLI forwards verbatim before exiting nonzero.
"""

import csv
from dataclasses import dataclass
from typing import Dict, List


class SchemaError(ValueError):
    """CSV header or cell content does not match the declared kind."""


# kind -> ordered {column: parser}
KIND_COLUMNS: Dict[str, Dict[str, type]] = {
    "beam-split": {"M": int, "f_hz": float, "gain_exact": float,
                   "gain_sinc": float},
    "avg-gain": {"scenario": str, "f_hz": float, "avg_gain": float},
    "se-vs-users": {"scenario": str, "K": int, "se_bps_hz": float,
                    "stderr": float},
    "se-vs-elements": {"scenario": str, "M": int, "se_bps_hz": float,
                       "stderr": float},
}


@dataclass(frozen=True)
class Table:
    """Validated rows of one sweep CSV, cells already typed."""
    kind: str
    rows: List[dict]

    def series(self, key: str) -> Dict[object, List[dict]]:
        """Rows grouped by ``key``, group labels sorted for stable legends."""
        groups: Dict[object, List[dict]] = {}
        for row in self.rows:
            groups.setdefault(row[key], []).append(row)
        return dict(sorted(groups.items(), key=lambda kv: str(kv[0])))


def load_table(path: str, kind: str) -> Table:
    """Read and validate ``path`` against the schema of ``kind``."""
    if kind not in KIND_COLUMNS:
        raise SchemaError(f"unknown figure kind {kind!r}; expected one of "
                          f"{sorted(KIND_COLUMNS)}")
    spec = KIND_COLUMNS[kind]
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, expected header columns "
                              f"{list(spec)}") from None
        if header != list(spec):
            raise SchemaError(f"{path}: column mismatch for kind {kind!r}: "
                              f"expected {list(spec)}, found {header}")
        rows = []
        for lineno, raw in enumerate(reader, 2):
            if len(raw) != len(spec):
                raise SchemaError(f"{path}:{lineno}: expected {len(spec)} "
                                  f"cells, found {len(raw)}")
            row = {}
            for (col, parse), cell in zip(spec.items(), raw):
                try:
                    row[col] = parse(cell)
                except ValueError:
                    raise SchemaError(f"{path}:{lineno}: column {col!r} "
                                      f"expects {parse.__name__}, "
                                      f"got {cell!r}") from None
            rows.append(row)
    return Table(kind=kind, rows=rows)
