"""
Writes artifacts into one output directory. CSV floats use 17 significant
digits and JSON keys are sorted, so identical runs give identical bytes.
"""
import csv
import json
import logging
from pathlib import Path
from typing import Any, Dict, Sequence

import numpy as np

from core.exceptions.domain_exceptions import InvalidConfig, MissingFile
from core.services.ports.artifact_store_port import ArtifactStore
from core.value_objects.train_record import RECORD_COLUMNS, TrainRecord

logger = logging.getLogger(__name__)


def format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.17g" % float(value)
    return str(value)


def _json_default(value: Any) -> Any:
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


class FilesystemArtifactStore(ArtifactStore):
    def __init__(self, root: str):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    @property
    def location(self) -> str:
        return str(self.root)

    def write_records(self, name: str, records: Sequence[TrainRecord]) -> str:
        return self.write_table(name, RECORD_COLUMNS, [record.as_row() for record in records])

    def write_table(self, name: str, columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
        path = self.root / name
        with path.open("w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([format_cell(value) for value in row])
        logger.debug("wrote %s (%d rows)", path, len(rows))
        return str(path)

    def write_json(self, name: str, payload: Dict[str, Any]) -> str:
        path = self.root / name
        text = json.dumps(payload, indent=2, sort_keys=True, default=_json_default)
        path.write_text(text + "\n")
        logger.debug("wrote %s", path)
        return str(path)

    def read_json(self, path: str) -> Dict[str, Any]:
        source = Path(path)
        if not source.is_file():
            raise MissingFile(str(source))
        try:
            return json.loads(source.read_text())
        except json.JSONDecodeError as exc:
            raise InvalidConfig(f"{source} is not valid JSON: {exc}") from exc
