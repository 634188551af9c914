"""Deterministic CSV and JSON emission.

Floats are written with 12 significant digits in scientific notation so that
repeated runs with one configuration produce byte-identical files.
"""

from __future__ import annotations

import hashlib
import io
import json
import math
from importlib import resources
from typing import Any, Iterable, Sequence

TOOL_NAME = "analogue-entanglement"
TOOL_VERSION = "0.1.0"
FORMAT_VERSION = 1

SCAN_COLUMNS = (
    "k", "omega_in", "omega_out", "beta_sq", "n_initial", "n_final",
    "nu_minus", "eof", "t_e", "t_sd", "error",
)
SUDDEN_DEATH_COLUMNS = (
    "source", "k", "omega_in", "omega_out", "beta_sq", "t_e", "t_sd",
    "t_sd_hbar_over_kB_K", "t_sd_kelvin", "temperature", "entangled", "verdict", "error",
)
RESONANCE_COLUMNS = (
    "section", "index", "t_minus", "kind", "m", "n", "residual",
    "r_per_shot", "nu_minus", "eof", "n_avg", "t_e", "t_sd",
)
ORACLE_COLUMNS = (
    "r", "nbar", "cutoff", "cm_deviation", "leakage", "leakage_ok",
    "nu_minus", "min_pt_eigenvalue", "gaussian_entangled", "fock_entangled", "agree",
)

COLUMNS = {
    "scan": SCAN_COLUMNS,
    "sudden-death": SUDDEN_DEATH_COLUMNS,
    "resonance": RESONANCE_COLUMNS,
    "oracle": ORACLE_COLUMNS,
}


def format_float(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.11e}"


def format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def round_sig(x: float) -> float | None:
    """Round to 12 significant digits; non-finite values become None (JSON null)."""
    if not math.isfinite(x):
        return None
    return float(format_float(x))


def _jsonable(value):
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return round_sig(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "item"):
        return _jsonable(value.item())
    raise TypeError(f"cannot serialize {type(value).__name__}")


def config_hash(config_echo: dict[str, Any]) -> str:
    canonical = json.dumps(config_echo, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def render_csv(command: str, config_echo: dict[str, Any], rows: Iterable[dict[str, Any]]) -> str:
    columns = COLUMNS[command]
    buf = io.StringIO()
    buf.write(
        f"# {TOOL_NAME} {TOOL_VERSION} command={command} format=v{FORMAT_VERSION} "
        f"config_sha256={config_hash(config_echo)}\n"
    )
    buf.write(",".join(columns) + "\n")
    for row in rows:
        cells = []
        for col in columns:
            cell = format_cell(row.get(col))
            if any(ch in cell for ch in ',"\n'):
                cell = '"' + cell.replace('"', '""') + '"'
            cells.append(cell)
        buf.write(",".join(cells) + "\n")
    return buf.getvalue()


def render_json(
    command: str,
    config_echo: dict[str, Any],
    rows: Sequence[dict[str, Any]],
    summary: dict[str, Any] | None = None,
) -> str:
    columns = COLUMNS[command]
    doc = {
        "tool_version": TOOL_VERSION,
        "format_version": FORMAT_VERSION,
        "command": command,
        "config_sha256": config_hash(config_echo),
        "config_echo": config_echo,
        "columns": list(columns),
        "rows": [{c: row.get(c) for c in columns} for row in rows],
        "summary": summary or {},
    }
    return json.dumps(_jsonable(doc), indent=2, sort_keys=True, allow_nan=False) + "\n"


def output_schema() -> dict[str, Any]:
    text = resources.files(__package__).joinpath("schemas/output.schema.json").read_text(encoding="utf-8")
    return json.loads(text)
