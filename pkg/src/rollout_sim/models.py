"""
Data models for simulated attention-shift executions
"""

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Tuple


@dataclass(frozen=True)
class StepRecord:
    """
    One executed step.

    Attributes:
        time: Step number, starting at 0
        state: Full state tuple before the step
        mode: Active attention mode k
        step_in_phase: j, position within the sustain phase (1 = decision point)
        action: Action name taken
        reward: R(x, a) of the step
        info_reward: Sensor-deactivation reward earned by the step
        full_observation: Whether the full state was observed at this step
    """

    time: int
    state: Tuple[Any, ...]
    mode: int
    step_in_phase: int
    action: str
    reward: float
    info_reward: float
    full_observation: bool

    def to_dict(self) -> Dict[str, Any]:
        record = asdict(self)
        record["state"] = [list(v) if isinstance(v, tuple) else v for v in self.state]
        return record


@dataclass
class TrajectoryLog:
    """Per-step records of one rollout"""

    seed: int
    steps: List[StepRecord] = field(default_factory=list)
    terminal: bool = False

    def __len__(self):
        return len(self.steps)

    @property
    def decision_times(self) -> List[int]:
        return [step.time for step in self.steps if step.full_observation]

    def timeline_rows(self) -> List[Dict[str, Any]]:
        """Rows of the `t,mode,j,full_obs,reward,info_reward` timeline"""
        return [
            {
                "t": step.time,
                "mode": step.mode,
                "j": step.step_in_phase,
                "full_obs": int(step.full_observation),
                "reward": step.reward,
                "info_reward": step.info_reward,
            }
            for step in self.steps
        ]


@dataclass(frozen=True)
class ReturnEstimate:
    """
    Monte-Carlo estimate of an expected discounted return.

    Attributes:
        mean: Sample mean
        std: Sample standard deviation
        n: Number of rollouts
        tail_bound: Bound on the discounted reward beyond the truncation horizon
        half_width: 3 standard errors plus the tail bound
    """

    mean: float
    std: float
    n: int
    tail_bound: float

    @property
    def half_width(self) -> float:
        return 3.0 * self.std / self.n**0.5 + self.tail_bound

    def contains(self, value: float) -> bool:
        return abs(self.mean - value) <= self.half_width

    def to_dict(self) -> Dict[str, float]:
        return {
            "mean": self.mean,
            "half_width": self.half_width,
            "std": self.std,
            "n": self.n,
            "tail_bound": self.tail_bound,
        }

    def __str__(self):
        return f"{self.mean:.2f} +/- {self.half_width:.2f}"


@dataclass(frozen=True)
class ReturnsReport:
    """Estimated goal (G) and information (I) returns at the initial state"""

    goal: ReturnEstimate
    info: ReturnEstimate
    horizon: int
    seed: int

    def to_dict(self) -> Dict[str, Any]:
        return {"G": self.goal.to_dict(), "I": self.info.to_dict(), "horizon": self.horizon, "seed": self.seed}
