"""Point-to-polyline projections."""

import numpy as np

from rlihf_bench.errors import EnvError


def project_onto_polyline(points: np.ndarray, waypoints: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Closest point on a polyline for each query point.

    Args:
        points: (N, 2) or (2,) query points
        waypoints: (M, 2) polyline vertices, M >= 1

    Returns:
        (distances, arc_lengths): distance to the polyline and the arc-length
        parameter of the closest point. Ties go to the earliest segment.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    wp = np.asarray(waypoints, dtype=float)
    if wp.ndim != 2 or wp.shape[1] != 2 or len(wp) == 0:
        raise EnvError(f"polyline must be (M, 2) with M >= 1, got {wp.shape}")

    if len(wp) == 1:
        dist = np.hypot(*(pts - wp[0]).T)
        return dist, np.zeros(len(pts))

    starts = wp[:-1]
    deltas = wp[1:] - starts                           # (S, 2)
    seg_len2 = np.einsum("sd,sd->s", deltas, deltas)
    seg_len = np.sqrt(seg_len2)
    cum = np.concatenate([[0.0], np.cumsum(seg_len)])

    rel = pts[:, None, :] - starts[None, :, :]          # (N, S, 2)
    safe_len2 = np.where(seg_len2 > 0, seg_len2, 1.0)
    t = np.einsum("nsd,sd->ns", rel, deltas) / safe_len2
    t = np.where(seg_len2 > 0, np.clip(t, 0.0, 1.0), 0.0)
    offsets = rel - t[:, :, None] * deltas[None, :, :]
    dist = np.hypot(offsets[..., 0], offsets[..., 1])  # (N, S)

    best = np.argmin(dist, axis=1)
    rows = np.arange(len(pts))
    arc = cum[best] + t[rows, best] * seg_len[best]
    return dist[rows, best], arc


def distance_to_polyline(point: np.ndarray, waypoints: np.ndarray) -> float:
    return float(project_onto_polyline(point, waypoints)[0][0])


def progress_along(point: np.ndarray, waypoints: np.ndarray) -> float:
    """Arc-length parameter of the closest polyline point."""
    return float(project_onto_polyline(point, waypoints)[1][0])


def segment_clearance(
    a: np.ndarray,
    b: np.ndarray,
    centers: np.ndarray,
    radii: np.ndarray,
) -> float:
    """Minimum distance from segment ab to the surface of any circle."""
    if len(radii) == 0:
        return float("inf")
    dist, _ = project_onto_polyline(centers, np.stack([a, b]))
    return float(np.min(dist - radii))
