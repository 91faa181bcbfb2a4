"""
Artifact emission: CSV tables, JSON documents and the run manifest.
"""

import hashlib
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from loguru import logger

MANIFEST_NAME = "manifest.json"
CONFIG_ECHO_NAME = "resolved_config.json"
HYPOTHESIS_NAME = "hypothesis_report.json"


@dataclass
class LabResult:
    """Products of one subcommand before emission"""

    command: str
    frames: Dict[str, pd.DataFrame] = field(default_factory=dict)
    documents: Dict[str, Any] = field(default_factory=dict)
    hypothesis: Optional[Dict[str, Any]] = None
    summary: Dict[str, Any] = field(default_factory=dict)


def to_jsonable(value: Any) -> Any:
    """Plain JSON types; non-finite floats become strings"""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, complex):
        return [to_jsonable(value.real), to_jsonable(value.imag)]
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isfinite(value):
            return value
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    return value


def dumps(document: Any) -> str:
    return json.dumps(to_jsonable(document), sort_keys=True, indent=2) + "\n"


def sha256_of(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


class ArtifactWriter:
    """Write LabResults into an output directory with a manifest"""

    def __init__(self, directory: str, formats: Sequence[str] = ("csv", "json")):
        self.directory = Path(directory)
        self.formats = set(formats)

    def emit(self, result: LabResult, resolved_config: Dict[str, Any], config_hash: str) -> List[Path]:
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            logger.error(f"Error creating output directory {self.directory}: {str(e)}")
            raise

        written: List[Path] = []
        if "csv" in self.formats:
            for name, frame in sorted(result.frames.items()):
                written.append(self._write_csv(name, frame))
        if "json" in self.formats:
            for name, document in sorted(result.documents.items()):
                written.append(self._write_text(f"{name}.json", dumps(document)))
        written.append(self._write_text(CONFIG_ECHO_NAME, dumps(resolved_config)))
        if result.hypothesis is not None:
            written.append(self._write_text(HYPOTHESIS_NAME, dumps(result.hypothesis)))
        written.append(self._write_manifest(result.command, written, config_hash))
        logger.info(f"Wrote {len(written)} artifacts to {self.directory}")
        return written

    def _write_csv(self, name: str, frame: pd.DataFrame) -> Path:
        path = self.directory / f"{name}.csv"
        frame.to_csv(path, index=False, lineterminator="\n")
        logger.debug(f"{path.name}: {len(frame)} rows")
        return path

    def _write_text(self, filename: str, text: str) -> Path:
        path = self.directory / filename
        path.write_text(text, encoding="utf-8")
        return path

    def _write_manifest(self, command: str, paths: Sequence[Path], config_hash: str) -> Path:
        manifest = {
            "command": command,
            "config_sha256": config_hash,
            "artifacts": [{"file": p.name, "sha256": sha256_of(p)} for p in paths],
        }
        return self._write_text(MANIFEST_NAME, dumps(manifest))
