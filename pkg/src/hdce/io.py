"""File formats and canonical serialization.

Inputs: model JSON, projects JSON, rankings CSV. Outputs: canonical JSON and
CSV with fixed key order and 17-significant-digit floats, so identical runs are
byte-identical. Every written artifact gets a sidecar run manifest carrying the
input digests, seed, and tool version (the timestamp lives only there).
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .diagnostics import Diagnostic, EmptyInputError, InputFormatError, warning
from .elicitation import RankingSheet
from .model import (
    CausalModel,
    FactorCategory,
    FactorKind,
    HistoricalProject,
    is_token,
    model_from_dict,
    projects_from_list,
)

TOOL_VERSION = "0.1.0"

RANKINGS_HEADER = ["expert_id", "kind", "category", "factor_id", "rank"]

JSON_FLOAT_DIGITS = 17
TABLE_FLOAT_DIGITS = 6


# ---------------------------------------------------------------------------
# canonical JSON
# ---------------------------------------------------------------------------


def format_float(value: float, digits: int = JSON_FLOAT_DIGITS) -> str:
    if math.isnan(value) or math.isinf(value):
        raise ValueError(f"non-finite float {value!r} cannot be serialized")
    return format(value, f".{digits}g")


def _emit(value, indent: int, pieces: list[str]) -> None:
    pad = "  " * indent
    child_pad = "  " * (indent + 1)
    if value is None:
        pieces.append("null")
    elif isinstance(value, bool):
        pieces.append("true" if value else "false")
    elif isinstance(value, int):
        pieces.append(str(value))
    elif isinstance(value, float):
        pieces.append(format_float(value))
    elif isinstance(value, str):
        pieces.append(json.dumps(value, ensure_ascii=False))
    elif isinstance(value, dict):
        if not value:
            pieces.append("{}")
            return
        pieces.append("{\n")
        for i, (key, item) in enumerate(value.items()):
            if not isinstance(key, str):
                raise ValueError(f"JSON object keys must be strings, got {key!r}")
            pieces.append(f"{child_pad}{json.dumps(key, ensure_ascii=False)}: ")
            _emit(item, indent + 1, pieces)
            pieces.append(",\n" if i < len(value) - 1 else "\n")
        pieces.append(f"{pad}}}")
    elif isinstance(value, (list, tuple)):
        if not value:
            pieces.append("[]")
            return
        pieces.append("[\n")
        for i, item in enumerate(value):
            pieces.append(child_pad)
            _emit(item, indent + 1, pieces)
            pieces.append(",\n" if i < len(value) - 1 else "\n")
        pieces.append(f"{pad}]")
    else:
        raise ValueError(f"cannot serialize {type(value).__name__} to JSON")


def canonical_json(obj) -> str:
    """Deterministic JSON text: caller-defined key order, .17g floats, LF endings."""
    pieces: list[str] = []
    _emit(obj, 0, pieces)
    return "".join(pieces) + "\n"


def write_json(path: str | Path, obj) -> None:
    Path(path).write_text(canonical_json(obj), encoding="utf-8")


# ---------------------------------------------------------------------------
# input files
# ---------------------------------------------------------------------------


def _apply_unknown_policy(
    unknown: list[str], strict: bool, diagnostics: list[Diagnostic] | None
) -> None:
    if not unknown:
        return
    listing = ", ".join(unknown)
    if strict:
        raise InputFormatError(f"unknown fields (strict mode): {listing}")
    if diagnostics is not None:
        diagnostics.append(warning("unknown-fields", f"ignoring unknown fields: {listing}"))


def _load_json_file(path: str | Path, what: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{what} file {path}: invalid JSON ({exc})") from None


def load_model(
    path: str | Path, strict: bool = False, diagnostics: list[Diagnostic] | None = None
) -> CausalModel:
    model, unknown = model_from_dict(_load_json_file(path, "model"))
    _apply_unknown_policy(unknown, strict, diagnostics)
    return model


def load_projects(
    path: str | Path, strict: bool = False, diagnostics: list[Diagnostic] | None = None
) -> list[HistoricalProject]:
    projects, unknown = projects_from_list(_load_json_file(path, "projects"))
    _apply_unknown_policy(unknown, strict, diagnostics)
    return projects


def load_rankings(path: str | Path) -> list[RankingSheet]:
    """Parse the rankings CSV into one sheet per (expert, kind, category)."""
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyInputError(f"rankings file {path} is empty") from None
        if [h.strip() for h in header] != RANKINGS_HEADER:
            raise InputFormatError(
                f"rankings file {path}: header must be {','.join(RANKINGS_HEADER)!r}, "
                f"got {','.join(header)!r}"
            )
        grouped: dict[tuple[str, FactorKind, FactorCategory], dict[str, float]] = {}
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(RANKINGS_HEADER):
                raise InputFormatError(
                    f"{path}:{line_no}: expected {len(RANKINGS_HEADER)} columns, got {len(row)}"
                )
            expert_id, kind_text, category_text, factor_id, rank_text = (c.strip() for c in row)
            if not is_token(expert_id) or not is_token(factor_id):
                raise InputFormatError(f"{path}:{line_no}: expert_id and factor_id must be tokens")
            try:
                kind = FactorKind(kind_text)
            except ValueError:
                raise InputFormatError(f"{path}:{line_no}: unknown kind {kind_text!r}") from None
            try:
                category = FactorCategory(category_text)
            except ValueError:
                raise InputFormatError(f"{path}:{line_no}: unknown category {category_text!r}") from None
            try:
                rank = float(rank_text)
            except ValueError:
                raise InputFormatError(f"{path}:{line_no}: rank {rank_text!r} is not a number") from None
            if rank <= 0:
                raise InputFormatError(f"{path}:{line_no}: rank must be positive, got {rank}")
            key = (expert_id, kind, category)
            sheet = grouped.setdefault(key, {})
            if factor_id in sheet:
                raise InputFormatError(
                    f"{path}:{line_no}: duplicate rank for expert {expert_id!r}, factor {factor_id!r}"
                )
            sheet[factor_id] = rank
    if not grouped:
        raise EmptyInputError(f"rankings file {path} contains no data rows")
    return [
        RankingSheet(expert_id=expert_id, kind=kind, category=category, ranks=ranks)
        for (expert_id, kind, category), ranks in sorted(
            grouped.items(), key=lambda item: (item[0][0], item[0][1].value, item[0][2].value)
        )
    ]


def write_csv(path: str | Path, header: list[str], rows: list[list]) -> None:
    """CSV with LF endings and .17g floats; strings and ints pass through."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [format_float(cell) if isinstance(cell, float) else cell for cell in row]
            )


# ---------------------------------------------------------------------------
# run manifests
# ---------------------------------------------------------------------------


def sha256_file(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(65536), b""):
            digest.update(block)
    return digest.hexdigest()


@dataclass(frozen=True)
class RunManifest:
    command: str
    inputs: dict[str, str]
    outputs: dict[str, str]
    seed: int | None = None
    sample_count: int | None = None
    parameters: dict = field(default_factory=dict)
    tool_version: str = TOOL_VERSION
    timestamp: str = ""

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "tool_version": self.tool_version,
            "seed": self.seed,
            "sample_count": self.sample_count,
            "parameters": self.parameters,
            "inputs": dict(sorted(self.inputs.items())),
            "outputs": dict(sorted(self.outputs.items())),
            "timestamp": self.timestamp,
        }


def write_manifest(
    command: str,
    input_paths: list[str | Path],
    output_paths: list[str | Path],
    *,
    seed: int | None = None,
    sample_count: int | None = None,
    parameters: dict | None = None,
    manifest_path: str | Path | None = None,
) -> Path:
    """Sidecar manifest next to the first output: <out>.manifest.json."""
    primary = Path(output_paths[0])
    target = Path(manifest_path) if manifest_path is not None else primary.with_name(
        primary.name + ".manifest.json"
    )
    manifest = RunManifest(
        command=command,
        inputs={str(p): sha256_file(p) for p in input_paths},
        outputs={str(p): sha256_file(p) for p in output_paths},
        seed=seed,
        sample_count=sample_count,
        parameters=parameters or {},
        timestamp=datetime.now(timezone.utc).isoformat(),
    )
    write_json(target, manifest.to_dict())
    return target
