from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence

import numpy as np


@dataclass
class Table:
    """Named columns with units; every row holds one value per column."""

    name: str
    columns: List[str]
    units: List[str]
    rows: List[List[Any]] = field(default_factory=list)

    def __post_init__(self):
        if len(self.columns) != len(self.units):
            raise ValueError(f"Table {self.name}: {len(self.columns)} columns but {len(self.units)} units")

    def add_row(self, *values: Any):
        if len(values) != len(self.columns):
            raise ValueError(f"Table {self.name}: row of length {len(values)}, expected {len(self.columns)}")
        self.rows.append(list(values))

    def add_columns(self, *columns: Sequence[Any]):
        """Append rows from equally long column arrays."""
        lengths = {len(c) for c in columns}
        if len(lengths) != 1:
            raise ValueError(f"Table {self.name}: column arrays of unequal length {sorted(lengths)}")
        for row in zip(*columns):
            self.add_row(*row)

    def column(self, name: str) -> np.ndarray:
        idx = self.columns.index(name)
        return np.array([row[idx] for row in self.rows])


@dataclass
class ResultBundle:
    """
    Output of one run: the data tables plus the metadata needed to reproduce them
    (config echo, code version, wall time, solver residuals and warnings).
    """

    command: str
    tables: Dict[str, Table] = field(default_factory=dict)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def add(self, table: Table) -> Table:
        if table.name in self.tables:
            raise ValueError(f"Duplicate table name {table.name}")
        self.tables[table.name] = table
        return table

    def merge(self, other: "ResultBundle", prefix: str):
        for name, table in other.tables.items():
            table.name = f"{prefix}_{name}"
            self.add(table)
        self.metadata.setdefault("parts", {})[prefix] = other.metadata
