"""Clearance-aware A* planner for the ideal (expert) path."""

import heapq
import logging
import math
from dataclasses import dataclass

import numpy as np

from rlihf_bench.env.geometry import segment_clearance
from rlihf_bench.errors import NoPathError
from rlihf_bench.models.scenario import IdealPath, Scenario

logger = logging.getLogger(__name__)

# (di, dj, step multiplier)
MOVES = [
    (1, 0, 1.0), (-1, 0, 1.0), (0, 1, 1.0), (0, -1, 1.0),
    (1, 1, math.sqrt(2)), (1, -1, math.sqrt(2)), (-1, 1, math.sqrt(2)), (-1, -1, math.sqrt(2)),
]

_TOLERANCE = 1e-9


@dataclass(frozen=True)
class PlanningGrid:
    """Uniform grid over the workspace with per-node obstacle clearance."""
    xs: np.ndarray
    ys: np.ndarray
    clearance: np.ndarray           # (nx, ny)
    cell: float

    @classmethod
    def build(cls, scenario: Scenario) -> "PlanningGrid":
        xmin, ymin, xmax, ymax = scenario.workspace
        cell = scenario.grid_cell
        nx = int(math.floor((xmax - xmin) / cell + 1e-9)) + 1
        ny = int(math.floor((ymax - ymin) / cell + 1e-9)) + 1
        xs = xmin + cell * np.arange(nx)
        ys = ymin + cell * np.arange(ny)
        gx, gy = np.meshgrid(xs, ys, indexing="ij")
        clearance = np.full(gx.shape, np.inf)
        for o in scenario.obstacles:
            clearance = np.minimum(clearance, np.hypot(gx - o.cx, gy - o.cy) - o.r)
        return cls(xs=xs, ys=ys, clearance=clearance, cell=cell)

    def point(self, node: tuple[int, int]) -> np.ndarray:
        return np.array([self.xs[node[0]], self.ys[node[1]]])

    def nearest_node(self, point: np.ndarray, min_clearance: float) -> tuple[int, int]:
        """Closest grid node whose clearance is at least min_clearance."""
        gx, gy = np.meshgrid(self.xs, self.ys, indexing="ij")
        dist = np.hypot(gx - point[0], gy - point[1])
        dist[self.clearance < min_clearance] = np.inf
        flat = int(np.argmin(dist))
        if not np.isfinite(dist.flat[flat]):
            raise NoPathError(f"no grid node with clearance >= {min_clearance}")
        i, j = np.unravel_index(flat, dist.shape)
        return int(i), int(j)


def astar(
    grid: PlanningGrid,
    start: tuple[int, int],
    goal: tuple[int, int],
    d_safe: float,
    clearance_weight: float,
    min_clearance: float = 0.0,
) -> list[tuple[int, int]]:
    """A* over grid nodes with cost = step length + λ·max(0, d_safe − clearance)².

    Nodes with clearance below min_clearance are impassable.

    Raises:
        NoPathError: When the goal is unreachable
    """
    nx, ny = grid.clearance.shape
    penalty = (clearance_weight * np.maximum(0.0, d_safe - grid.clearance) ** 2).tolist()
    blocked = (grid.clearance < min_clearance).tolist()
    goal_pt = grid.point(goal)

    def heuristic(node: tuple[int, int]) -> float:
        return float(np.hypot(grid.xs[node[0]] - goal_pt[0], grid.ys[node[1]] - goal_pt[1]))

    g_cost = {start: 0.0}
    previous: dict[tuple[int, int], tuple[int, int] | None] = {start: None}
    counter = 0
    open_heap = [(heuristic(start), counter, start)]
    closed: set[tuple[int, int]] = set()

    while open_heap:
        _, _, current = heapq.heappop(open_heap)
        if current == goal:
            path = []
            node: tuple[int, int] | None = current
            while node is not None:
                path.append(node)
                node = previous[node]
            return path[::-1]
        if current in closed:
            continue
        closed.add(current)

        ci, cj = current
        for di, dj, mult in MOVES:
            ni, nj = ci + di, cj + dj
            if not (0 <= ni < nx and 0 <= nj < ny) or blocked[ni][nj]:
                continue
            neighbor = (ni, nj)
            if neighbor in closed:
                continue
            tentative = g_cost[current] + mult * grid.cell + penalty[ni][nj]
            if tentative < g_cost.get(neighbor, math.inf):
                g_cost[neighbor] = tentative
                previous[neighbor] = current
                counter += 1
                heapq.heappush(open_heap, (tentative + heuristic(neighbor), counter, neighbor))

    raise NoPathError(f"grid node {goal} unreachable from {start}")


def string_pull(points: np.ndarray, scenario: Scenario) -> np.ndarray:
    """Line-of-sight shortening that never lowers clearance below the margin.

    A shortcut from point i to point j replaces the sub-path between them when
    its clearance stays at or above min(d_safe, lowest clearance on the
    sub-path). The farthest visible point is taken at each stage.
    """
    if len(points) <= 2:
        return points.copy()
    centers = np.array([[o.cx, o.cy] for o in scenario.obstacles]).reshape(-1, 2)
    radii = np.array([o.r for o in scenario.obstacles])
    point_clearance = np.array([scenario.clearance(p) for p in points])

    kept = [0]
    i = 0
    last = len(points) - 1
    while i < last:
        j = last
        while j > i + 1:
            required = min(scenario.d_safe, float(point_clearance[i:j + 1].min()))
            if segment_clearance(points[i], points[j], centers, radii) >= required - _TOLERANCE:
                break
            j -= 1
        kept.append(j)
        i = j
    return points[kept]


def plan_leg(
    scenario: Scenario,
    grid: PlanningGrid,
    start: np.ndarray,
    goal: np.ndarray,
) -> np.ndarray:
    """Polyline from start to goal (exact endpoints).

    Tries nodes with clearance ≥ d_safe first and falls back to the
    penalized search over all free nodes when the margin cannot be kept.
    """
    try:
        nodes = astar(
            grid,
            grid.nearest_node(start, scenario.d_safe),
            grid.nearest_node(goal, scenario.d_safe),
            scenario.d_safe,
            scenario.clearance_weight,
            min_clearance=scenario.d_safe,
        )
    except NoPathError:
        logger.warning(
            "clearance %.3f infeasible between %s and %s; planning with soft margin",
            scenario.d_safe, tuple(start), tuple(goal),
        )
        nodes = astar(
            grid,
            grid.nearest_node(start, 0.0),
            grid.nearest_node(goal, 0.0),
            scenario.d_safe,
            scenario.clearance_weight,
            min_clearance=0.0,
        )
    points = np.array([grid.point(n) for n in nodes])
    if len(points) == 1:
        points = np.array([start, goal], dtype=float)
    else:
        points[0] = start
        points[-1] = goal
    return string_pull(points, scenario)


def compute_ideal_path(scenario: Scenario) -> IdealPath:
    """Two-leg ideal path start → pick → place.

    Args:
        scenario: Workspace and task geometry

    Returns:
        IdealPath whose waypoints begin at start, pass through pick at
        pick_index and end at place

    Raises:
        NoPathError: When a leg is fully blocked
    """
    grid = PlanningGrid.build(scenario)
    first = plan_leg(scenario, grid, scenario.start_pos, scenario.pick_pos)
    second = plan_leg(scenario, grid, scenario.pick_pos, scenario.place_pos)
    waypoints = np.vstack([first, second[1:]])
    path = IdealPath(waypoints=waypoints, pick_index=len(first) - 1)
    logger.debug(
        "ideal path: %d waypoints, length %.3f", len(waypoints), path.total_length
    )
    return path
