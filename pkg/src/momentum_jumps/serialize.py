"""CSV and JSON writers for sweep and dispersion output.

Floats are written with 17 significant digits so files round-trip exactly
and identical inputs give byte-identical files.
"""

from __future__ import annotations

import json
import math
from typing import Iterable, Sequence

from .constants import MEV
from .kinematics import WEIGHT_MODEL
from .sweep import SweepRecord


def fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} cannot be serialized")
    return format(x, ".17g")


def sweep_header(n_subbands: int) -> list[str]:
    return (
        ["B_T", "n_occupied"]
        + [f"N{n}_per_m2" for n in range(n_subbands)]
        + ["theta_deg", "frac_C", "frac_D1", "frac_D2", "resistance_proxy"]
    )


def sweep_row(rec: SweepRecord, n_subbands: int) -> list:
    f = rec.detector_fractions
    return (
        [rec.B, rec.occupied_count]
        + list(rec.densities[:n_subbands])
        + [rec.theta, f["C"], f["D1"], f["D2"], rec.resistance_proxy]
    )


def to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def sweep_csv(records: Sequence[SweepRecord], n_subbands: int) -> str:
    return to_csv(sweep_header(n_subbands), (sweep_row(r, n_subbands) for r in records))


def to_json(obj, indent: int = 0, step: int = 2) -> str:
    """Minimal JSON encoder with fixed float formatting and key order as given."""
    pad = " " * (indent + step)
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (bool, int, float)):
        return fmt(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{to_json(str(k))}: {to_json(v, indent + step, step)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + " " * indent + "}"
    if isinstance(obj, (list, tuple)):
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(fmt(v) for v in obj) + "]"
        items = [pad + to_json(v, indent + step, step) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + " " * indent + "]" if items else "[]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def sweep_json(records: Sequence[SweepRecord], n_subbands: int, events: Sequence[float]) -> str:
    header = sweep_header(n_subbands)
    doc = {
        "metadata": {
            "columns": header,
            "depopulation_fields_T": list(events),
            "beam_weight_model": WEIGHT_MODEL,
            "theta_deg": "outermost beam angle; beams come in +-theta pairs",
            "resistance_proxy": "1 / n_occupied (channel-count proxy, no absolute scale)",
        },
        "records": [dict(zip(header, sweep_row(r, n_subbands))) for r in records],
    }
    return to_json(doc) + "\n"


def dispersion_csv(kx, energies) -> str:
    header = ["kx_per_m"] + [f"E{n}_meV" for n in range(energies.shape[1])]
    rows = ([k] + [e / MEV for e in row] for k, row in zip(kx, energies))
    return to_csv(header, rows)
