"""
Data models for command runs
"""

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional


@dataclass
class RunManifest:
    """
    Record of one command run, written next to its outputs.

    Attributes:
        command: Command name (solve, sweep-t, pareto, simulate)
        config_path: Resolved world config path
        parameters: Every parameter the command used
        version: Toolkit version
        started_at: ISO timestamp of the run
        wall_clock_seconds: Elapsed time
        outputs: Output file names, relative to the manifest's directory
    """

    command: str
    config_path: str
    parameters: Dict[str, Any]
    version: str
    started_at: str = ""
    wall_clock_seconds: float = 0.0
    outputs: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunManifest":
        return cls(
            command=data["command"],
            config_path=data["config_path"],
            parameters=dict(data.get("parameters", {})),
            version=data.get("version", ""),
            started_at=data.get("started_at", ""),
            wall_clock_seconds=float(data.get("wall_clock_seconds", 0.0)),
            outputs=list(data.get("outputs", [])),
        )


@dataclass
class CommandResult:
    """
    Standard result returned by every command.

    Attributes:
        success: Whether the command completed
        command: Command name
        outputs: Paths of the files written
        summary: Headline numbers (G0, I0, V0, ...)
        rows: Per-T or per-weight rows for tabular commands
        error: Error message if the command failed
        exit_code: Process exit code (0 ok, 1 parse/validation, 2 non-convergence, 3 state cap)
    """

    success: bool
    command: str
    outputs: List[str] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)
    rows: List[Dict[str, Any]] = field(default_factory=list)
    error: Optional[str] = None
    exit_code: int = 0
