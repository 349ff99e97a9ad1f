"""Data models for the pick-and-place navigation task."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from rlihf_bench.errors import ConfigError


@dataclass(frozen=True)
class Obstacle:
    """A circular obstacle on the table."""
    cx: float
    cy: float
    r: float

    def __post_init__(self):
        if self.r <= 0:
            raise ConfigError(f"obstacle at ({self.cx}, {self.cy}) has radius {self.r} <= 0")

    @property
    def center(self) -> np.ndarray:
        """Center as a 2-vector."""
        return np.array([self.cx, self.cy], dtype=float)

    def contains(self, point: np.ndarray) -> bool:
        """Strictly inside the obstacle."""
        return float(np.hypot(point[0] - self.cx, point[1] - self.cy)) < self.r


# Four tabletop objects around the two task legs
DEFAULT_OBSTACLES = (
    Obstacle(0.17, 0.42, 0.07),
    Obstacle(0.50, 0.78, 0.08),
    Obstacle(0.70, 0.62, 0.06),
    Obstacle(0.55, 0.35, 0.10),
)


@dataclass(frozen=True)
class Scenario:
    """Workspace geometry, task points and reward constants."""
    workspace: tuple[float, float, float, float] = (0.0, 0.0, 1.0, 1.0)  # xmin, ymin, xmax, ymax
    obstacles: tuple[Obstacle, ...] = DEFAULT_OBSTACLES
    start: tuple[float, float] = (0.10, 0.10)
    pick: tuple[float, float] = (0.20, 0.75)
    place: tuple[float, float] = (0.85, 0.70)
    reach_eps: float = 0.05
    d_safe: float = 0.05
    d_err: float = 0.10
    max_steps: int = 1000
    max_speed: float = 0.05
    start_jitter: float = 0.0

    # Reward constants
    success_reward: float = 10.0
    collision_penalty: float = -0.5
    k_p: float = 1.0
    k_d: float = 0.1

    # Ideal-path planner
    grid_cell: float = 0.01
    clearance_weight: float = 10.0

    def __post_init__(self):
        xmin, ymin, xmax, ymax = self.workspace
        if not (xmin < xmax and ymin < ymax):
            raise ConfigError(f"workspace {self.workspace} is empty")
        if self.d_safe <= 0:
            raise ConfigError("scenario.d_safe must be > 0")
        if self.d_err <= 0:
            raise ConfigError("scenario.d_err must be > 0")
        if self.reach_eps <= 0:
            raise ConfigError("scenario.reach_eps must be > 0")
        if self.max_steps < 1:
            raise ConfigError("scenario.max_steps must be >= 1")
        if self.max_speed <= 0:
            raise ConfigError("scenario.max_speed must be > 0")
        if self.grid_cell <= 0:
            raise ConfigError("scenario.grid_cell must be > 0")
        if self.start_jitter < 0:
            raise ConfigError("scenario.start_jitter must be >= 0")
        for name in ("start", "pick", "place"):
            point = np.asarray(getattr(self, name), dtype=float)
            if not self.in_workspace(point):
                raise ConfigError(f"scenario.{name} {tuple(point)} lies outside the workspace")
            for obstacle in self.obstacles:
                if obstacle.contains(point):
                    raise ConfigError(
                        f"scenario.{name} {tuple(point)} lies inside obstacle "
                        f"({obstacle.cx}, {obstacle.cy}, r={obstacle.r})"
                    )

    @property
    def start_pos(self) -> np.ndarray:
        return np.asarray(self.start, dtype=float)

    @property
    def pick_pos(self) -> np.ndarray:
        return np.asarray(self.pick, dtype=float)

    @property
    def place_pos(self) -> np.ndarray:
        return np.asarray(self.place, dtype=float)

    @property
    def observation_size(self) -> int:
        """7 task features plus 3 per obstacle."""
        return 7 + 3 * len(self.obstacles)

    def in_workspace(self, point: np.ndarray) -> bool:
        xmin, ymin, xmax, ymax = self.workspace
        return bool(xmin <= point[0] <= xmax and ymin <= point[1] <= ymax)

    def clamp(self, point: np.ndarray) -> np.ndarray:
        """Clamp a point into the workspace rectangle."""
        xmin, ymin, xmax, ymax = self.workspace
        return np.array([np.clip(point[0], xmin, xmax), np.clip(point[1], ymin, ymax)])

    def clearance(self, point: np.ndarray) -> float:
        """Distance from a point to the nearest obstacle surface (inf without obstacles)."""
        if not self.obstacles:
            return float("inf")
        centers = np.array([[o.cx, o.cy] for o in self.obstacles])
        radii = np.array([o.r for o in self.obstacles])
        return float(np.min(np.hypot(*(centers - point).T) - radii))

    def collides(self, point: np.ndarray) -> bool:
        return any(o.contains(point) for o in self.obstacles)


@dataclass
class EnvState:
    """Mutable per-episode state of the point robot."""
    agent_pos: np.ndarray
    carrying: bool = False
    step: int = 0
    collided_this_step: bool = False
    success: bool = False
    done: bool = False

    def copy(self) -> "EnvState":
        return EnvState(
            agent_pos=self.agent_pos.copy(),
            carrying=self.carrying,
            step=self.step,
            collided_this_step=self.collided_this_step,
            success=self.success,
            done=self.done,
        )


@dataclass(frozen=True)
class IdealPath:
    """Clearance-respecting reference polyline start → pick → place."""
    waypoints: np.ndarray           # (n, 2)
    pick_index: int                 # waypoint index of the pick point

    @property
    def segment_lengths(self) -> np.ndarray:
        return np.hypot(*np.diff(self.waypoints, axis=0).T)

    @property
    def total_length(self) -> float:
        return float(self.segment_lengths.sum())

    @property
    def cumulative_lengths(self) -> np.ndarray:
        """Arc length at each waypoint."""
        return np.concatenate([[0.0], np.cumsum(self.segment_lengths)])

    def translated(self, offset: np.ndarray) -> "IdealPath":
        return IdealPath(waypoints=self.waypoints + offset, pick_index=self.pick_index)


@dataclass(frozen=True)
class RewardComponents:
    """Rewards of one step under every condition's formula."""
    sparse: float
    dense_shaping: float

    @property
    def dense(self) -> float:
        return self.sparse + self.dense_shaping

    @property
    def unified(self) -> float:
        """Evaluation reward, identical to the dense formula."""
        return self.dense


@dataclass(frozen=True)
class StepOutcome:
    """Everything a single environment step produced."""
    observation: np.ndarray
    state: EnvState
    prev_pos: np.ndarray
    rewards: RewardComponents
    done: bool
    collision: bool = False
    picked: bool = False
    success: bool = False
    truncated: bool = False
    deviation: float = 0.0
    clearance: float = float("inf")

    @property
    def terminated(self) -> bool:
        """True terminal (success); timeouts are truncations."""
        return self.success


@dataclass(frozen=True)
class FeedbackEvent:
    """Observer's judgement of one environment step."""
    is_error: bool
    step: int = 0
    clearance: float = float("inf")
    deviation: float = 0.0


@dataclass
class Trajectory:
    """Positions visited during one rollout."""
    points: list[np.ndarray] = field(default_factory=list)
    carrying: list[bool] = field(default_factory=list)
    collisions: list[bool] = field(default_factory=list)
    final_state: Optional[EnvState] = None

    def append(self, pos: np.ndarray, carrying: bool, collision: bool) -> None:
        self.points.append(np.asarray(pos, dtype=float).copy())
        self.carrying.append(carrying)
        self.collisions.append(collision)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=float).reshape(-1, 2)
