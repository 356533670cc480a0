"""
Atomic JSON, JSON-lines and CSV writers
"""

from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence, Union
import io
import json
import logging
import os
import tempfile

import numpy as np
import pandas as pd

from ..mdp_core import FactoredMdp
from ..shift_planner import ShiftSolution

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

# 17 significant digits round-trip every double
FLOAT_FORMAT = "%.17g"


def atomic_write_text(path: PathLike, text: str) -> Path:
    """Write to a temporary file in the target directory, then rename over the target"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, temp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(temp_name, path)
    except BaseException:
        if os.path.exists(temp_name):
            os.unlink(temp_name)
        raise
    logger.debug(f"Wrote {path}")
    return path


def _plain(value: Any) -> Any:
    """JSON-ready copy: tuples become lists, numpy scalars become Python numbers"""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def write_json(path: PathLike, data: Any) -> Path:
    return atomic_write_text(path, json.dumps(_plain(data), indent=2) + "\n")


def write_jsonl(path: PathLike, records: Iterable[Dict[str, Any]]) -> Path:
    return atomic_write_text(path, "".join(json.dumps(_plain(r)) + "\n" for r in records))


def write_csv(path: PathLike, rows: Sequence[Dict[str, Any]], columns: List[str]) -> Path:
    """CSV with a fixed header; floats use 17 significant digits"""
    buffer = io.StringIO()
    pd.DataFrame(list(rows), columns=columns).to_csv(
        buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n"
    )
    return atomic_write_text(path, buffer.getvalue())


def read_json(path: PathLike) -> Any:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def values_records(mdp: FactoredMdp, solution: ShiftSolution) -> List[Dict[str, Any]]:
    """Per-state {state, mode, duration, V, G, I}"""
    return [
        {
            "state": _plain(state),
            "mode": int(solution.policy.modes[i]),
            "duration": int(solution.policy.durations[i]),
            "V": float(solution.values[i]),
            "G": float(solution.goal_values[i]),
            "I": float(solution.info_values[i]),
        }
        for i, state in enumerate(mdp.states)
    ]


def policy_records(mdp: FactoredMdp, solution: ShiftSolution) -> List[Dict[str, Any]]:
    """Per-state {state, mode, duration}"""
    return [
        {"state": _plain(state), "mode": int(solution.policy.modes[i]), "duration": int(solution.policy.durations[i])}
        for i, state in enumerate(mdp.states)
    ]
