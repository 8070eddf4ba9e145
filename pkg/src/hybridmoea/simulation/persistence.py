"""One file per checkpoint snapshot.

Layout: ``<root>/<problem>/<chain>/<run>/<checkpoint>.<ext>`` where ``ext`` is
``pickle`` (default, compact) or ``json`` (interchange). Files are written to a
hidden temporary name in the target directory and renamed into place, so a
killed run never leaves a partial chunk behind.

JSON fields: ``schema_version, problem, chain, run, checkpoint, consumed,
seed, genotypes, objectives, wall_time_seconds, metrics``.
"""

from __future__ import annotations

import json
import os
import pickle
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

SCHEMA_VERSION = 1
FORMATS = {"pickle": "pickle", "json": "json"}
FIELDS = (
    "schema_version",
    "problem",
    "chain",
    "run",
    "checkpoint",
    "consumed",
    "seed",
    "genotypes",
    "objectives",
    "wall_time_seconds",
    "metrics",
)


class ChunkFormatError(ValueError):
    """A chunk file has an unknown schema version or is malformed."""


@dataclass(eq=False)
class ResultChunk:
    problem: str
    chain: str
    run: int
    checkpoint: int
    consumed: int
    seed: int
    genotypes: np.ndarray
    objectives: np.ndarray
    wall_time_seconds: float
    metrics: dict[str, float] = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION
    path: Path | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        self.genotypes = np.asarray(self.genotypes, dtype=np.float64).reshape(len(self.genotypes), -1)
        self.objectives = np.asarray(self.objectives, dtype=np.float64).reshape(len(self.objectives), -1)

    def to_record(self) -> dict[str, Any]:
        return {name: getattr(self, name) for name in FIELDS}

    def to_json(self) -> str:
        rec = self.to_record()
        rec["genotypes"] = self.genotypes.tolist()
        rec["objectives"] = self.objectives.tolist()
        rec["metrics"] = {k: float(v) for k, v in sorted(self.metrics.items())}
        return json.dumps(rec, indent=1) + "\n"

    @classmethod
    def from_record(cls, rec: dict[str, Any], path: Path | None = None) -> ResultChunk:
        version = rec.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ChunkFormatError(f"{path or 'chunk'}: schema version {version!r}, this build reads {SCHEMA_VERSION}")
        missing = [f for f in FIELDS if f not in rec]
        if missing:
            raise ChunkFormatError(f"{path or 'chunk'}: missing fields {missing}")
        return cls(**{f: rec[f] for f in FIELDS}, path=path)

    def same_content(self, other: ResultChunk, ignore_wall_time: bool = True) -> bool:
        a, b = self.to_record(), other.to_record()
        if ignore_wall_time:
            a.pop("wall_time_seconds")
            b.pop("wall_time_seconds")
        for key in a:
            if isinstance(a[key], np.ndarray):
                if not np.array_equal(a[key], b[key]):
                    return False
            elif a[key] != b[key]:
                return False
        return True


def chunk_path(root: str | Path, chunk: ResultChunk, fmt: str = "pickle") -> Path:
    if fmt not in FORMATS:
        raise ValueError(f"unknown chunk format {fmt!r}")
    return Path(root) / chunk.problem / chunk.chain / str(chunk.run) / f"{chunk.checkpoint}.{FORMATS[fmt]}"


def _atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def encode(chunk: ResultChunk, fmt: str) -> bytes:
    if fmt == "json":
        return chunk.to_json().encode("utf-8")
    return pickle.dumps(chunk.to_record(), protocol=pickle.HIGHEST_PROTOCOL)


def persist_chunk(chunk: ResultChunk, root: str | Path | None = None, fmt: str | None = None) -> Path:
    """Write ``chunk`` atomically; with no ``root`` it overwrites ``chunk.path``."""
    if root is None:
        if chunk.path is None:
            raise ValueError("chunk has no path; pass an output root")
        path = chunk.path
        fmt = fmt or path.suffix.lstrip(".")
    else:
        fmt = fmt or "pickle"
        path = chunk_path(root, chunk, fmt)
    _atomic_write(path, encode(chunk, fmt))
    chunk.path = path
    return path


def read_chunk(path: str | Path) -> ResultChunk:
    path = Path(path)
    try:
        if path.suffix == ".json":
            rec = json.loads(path.read_text(encoding="utf-8"))
        elif path.suffix == ".pickle":
            with path.open("rb") as fh:
                rec = pickle.load(fh)
        else:
            raise ChunkFormatError(f"{path}: unknown chunk extension")
    except (json.JSONDecodeError, pickle.UnpicklingError, EOFError) as exc:
        raise ChunkFormatError(f"{path}: unreadable chunk ({exc})") from exc
    if not isinstance(rec, dict):
        raise ChunkFormatError(f"{path}: chunk is not a record")
    return ResultChunk.from_record(rec, path)


def chunk_files(root: str | Path) -> list[Path]:
    root = Path(root)
    if not root.exists():
        return []
    files = [p for ext in FORMATS.values() for p in root.glob(f"*/*/*/*.{ext}") if not p.name.startswith(".")]
    return sorted(files)


def load_chunks(
    root: str | Path,
    problem: str | None = None,
    chain: str | None = None,
    run: int | None = None,
    checkpoint: int | None = None,
) -> list[ResultChunk]:
    """Load every chunk under ``root`` matching the optional filters.

    The result is sorted by (problem, chain, run, checkpoint).
    """
    out = []
    for path in chunk_files(root):
        c = read_chunk(path)
        if problem is not None and c.problem.upper() != problem.upper():
            continue
        if chain is not None and c.chain != chain:
            continue
        if run is not None and c.run != run:
            continue
        if checkpoint is not None and c.checkpoint != checkpoint:
            continue
        out.append(c)
    out.sort(key=lambda c: (c.problem, c.chain, c.run, c.checkpoint))
    return out
