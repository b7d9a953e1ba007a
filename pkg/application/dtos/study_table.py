# application/dtos/study_table.py
"""
Result table of a sweep-style study: one row per cell, one median row per
grid value and the derived trend verdicts.
"""
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

Row = Dict[str, Any]


def _median(values: Sequence[Any]) -> Optional[float]:
    finite = [float(v) for v in values if v is not None and np.isfinite(v)]
    if not finite:
        return None
    return float(np.median(finite))


@dataclass(frozen=True)
class StudyTable:
    columns: Tuple[str, ...]
    rows: Tuple[Row, ...]
    median_columns: Tuple[str, ...] = ()
    medians: Tuple[Row, ...] = ()
    verdicts: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def build(
        cls,
        columns: Sequence[str],
        rows: Sequence[Row],
        group_key: str,
        median_fields: Sequence[str],
        include: Callable[[Row], bool] = lambda row: True,
    ) -> "StudyTable":
        """
        Medians of median_fields over the included rows of each group_key
        value, in first-appearance order of the groups.
        """
        groups: Dict[Any, List[Row]] = {}
        for row in rows:
            groups.setdefault(row[group_key], [])
            if include(row):
                groups[row[group_key]].append(row)
        medians = []
        for key, members in groups.items():
            median_row: Row = {group_key: key, "cells": len(members)}
            for name in median_fields:
                median_row[name] = _median([m.get(name) for m in members])
            medians.append(median_row)
        median_columns = (group_key, "cells") + tuple(median_fields)
        return cls(tuple(columns), tuple(rows), median_columns, tuple(medians))

    def with_verdicts(self, verdicts: Dict[str, Any]) -> "StudyTable":
        return StudyTable(self.columns, self.rows, self.median_columns, self.medians, dict(verdicts))

    def row_values(self) -> List[List[Any]]:
        return [[row.get(name) for name in self.columns] for row in self.rows]

    def median_values(self) -> List[List[Any]]:
        return [[row.get(name) for name in self.median_columns] for row in self.medians]

    def series(self, name: str) -> List[Optional[float]]:
        return [row.get(name) for row in self.medians]
