"""Point-cloud container types, voxel grid partitioning and neighbor queries.

Everything downstream (features, filters, the synthetic generator) works on
the two containers defined here: :class:`PointCloud` for geometry plus
intensity and :class:`LabelSet` for per-point semantic ids, where ids
``1..Y`` are inlier classes and ``Y+1`` is the weather/outlier class.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .errors import InvalidArgumentError


@dataclass
class PointCloud:
    """N points with x, y, z in meters and intensity in [0, 1].

    Coordinates must be finite; intensity is clamped to [0, 1] at
    construction. Stored as one (N, 4) float64 array.
    """

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] != 4:
            raise InvalidArgumentError(
                f"point cloud must be (N, 4) [x y z intensity], got shape {arr.shape}"
            )
        if not np.isfinite(arr).all():
            raise InvalidArgumentError("point cloud contains non-finite values")
        arr = arr.copy()
        arr[:, 3] = np.clip(arr[:, 3], 0.0, 1.0)
        self.data = arr

    @classmethod
    def from_arrays(cls, xyz, intensity) -> "PointCloud":
        xyz = np.asarray(xyz, dtype=np.float64)
        intensity = np.asarray(intensity, dtype=np.float64)
        return cls(np.column_stack([xyz, intensity]))

    @classmethod
    def empty(cls) -> "PointCloud":
        return cls(np.empty((0, 4), dtype=np.float64))

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def xyz(self) -> np.ndarray:
        return self.data[:, :3]

    @property
    def intensity(self) -> np.ndarray:
        return self.data[:, 3]


@dataclass
class LabelSet:
    """Per-point class ids: inliers in {1..Y}, outliers = Y+1."""

    labels: np.ndarray
    inlier_classes: int

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.ndim != 1:
            raise InvalidArgumentError(f"labels must be 1-D, got shape {labels.shape}")
        if self.inlier_classes < 1:
            raise InvalidArgumentError("inlier_classes must be >= 1")
        if labels.size and (labels.min() < 1 or labels.max() > self.inlier_classes + 1):
            raise InvalidArgumentError(
                f"labels must lie in 1..{self.inlier_classes + 1}, "
                f"got range [{labels.min()}, {labels.max()}]"
            )
        self.labels = labels

    @property
    def n(self) -> int:
        return self.labels.shape[0]

    @property
    def outlier_class(self) -> int:
        return self.inlier_classes + 1

    @property
    def inlier_mask(self) -> np.ndarray:
        return self.labels <= self.inlier_classes

    @property
    def outlier_mask(self) -> np.ndarray:
        return self.labels == self.outlier_class


@dataclass
class VoxelGrid:
    """Partition of a cloud into axis-aligned voxels.

    ``cells`` maps integer 3-indices to member point indices; ``features``
    holds the arithmetic mean of member (x, y, z, intensity) per voxel.
    """

    voxel_size: tuple[float, float, float]
    cells: dict = field(default_factory=dict)
    features: dict = field(default_factory=dict)

    @property
    def n_points(self) -> int:
        return sum(len(v) for v in self.cells.values())


def voxelize(cloud: PointCloud, voxel_size: tuple[float, float, float]) -> VoxelGrid:
    """Assign every point to the voxel floor(coord / voxel_size) per axis.

    Points on a voxel boundary go to the lower-index voxel (floor
    convention). An empty cloud yields an empty grid.
    """
    size = np.asarray(voxel_size, dtype=np.float64)
    if size.shape != (3,) or not (size > 0).all():
        raise InvalidArgumentError(f"voxel_size must be 3 positive extents, got {voxel_size}")
    grid = VoxelGrid(voxel_size=(float(size[0]), float(size[1]), float(size[2])))
    if cloud.n == 0:
        return grid
    idx = np.floor(cloud.xyz / size[None, :]).astype(np.int64)
    order = np.lexsort((idx[:, 2], idx[:, 1], idx[:, 0]))
    sorted_idx = idx[order]
    boundaries = np.nonzero(np.any(np.diff(sorted_idx, axis=0) != 0, axis=1))[0] + 1
    for group in np.split(order, boundaries):
        key = tuple(int(v) for v in idx[group[0]])
        members = np.sort(group)
        grid.cells[key] = members
        grid.features[key] = cloud.data[members].mean(axis=0)
    return grid


class NeighborIndex:
    """Spatial index over a cloud for radius and k-nearest queries.

    Radius queries are boundary-inclusive (distance <= r) and always exclude
    the query point itself. Building an index over an empty cloud is an
    error.
    """

    def __init__(self, cloud: PointCloud):
        if cloud.n == 0:
            raise InvalidArgumentError("cannot build a neighbor index over an empty cloud")
        self.xyz = cloud.xyz
        self.n = cloud.n
        self._tree = cKDTree(self.xyz)

    def _check_id(self, point_id: int):
        if not 0 <= point_id < self.n:
            raise InvalidArgumentError(f"point id {point_id} out of range [0, {self.n})")

    def radius_neighbors(self, point_id: int, r: float) -> np.ndarray:
        """Sorted ids of all other points within distance r of point_id."""
        self._check_id(point_id)
        if not r > 0:
            raise InvalidArgumentError(f"radius must be > 0, got {r}")
        ids = self._tree.query_ball_point(self.xyz[point_id], r)
        return np.array(sorted(i for i in ids if i != point_id), dtype=np.int64)

    def radius_counts(self, r) -> np.ndarray:
        """Neighbor count within r for every point, excluding the point itself.

        ``r`` may be a scalar or a per-point array of radii.
        """
        r = np.asarray(r, dtype=np.float64)
        if not (r > 0).all():
            raise InvalidArgumentError("all radii must be > 0")
        counts = self._tree.query_ball_point(self.xyz, r, return_length=True)
        return np.asarray(counts, dtype=np.int64) - 1  # self always falls inside r

    def knn_distances(self, k: int) -> np.ndarray:
        """(N, k) distances to the k nearest other points, ascending per row."""
        if k < 1:
            raise InvalidArgumentError(f"k must be >= 1, got {k}")
        if k > self.n - 1:
            raise InvalidArgumentError(f"k={k} exceeds point count minus one ({self.n - 1})")
        _, idx = self._tree.query(self.xyz, k=k + 1)
        idx = np.atleast_2d(idx)
        # Recompute distances in numpy so values are bit-identical with a
        # brute-force scan of the same formula.
        diffs = self.xyz[idx] - self.xyz[:, None, :]
        dists = np.sqrt(np.sum(diffs * diffs, axis=2))
        rows = np.arange(self.n)
        drop = idx == rows[:, None]
        # Coincident points can push the query point itself out of the k+1
        # nearest; drop one zero-distance stand-in instead.
        missing = ~drop.any(axis=1)
        if missing.any():
            first_zero = (dists[missing] == 0.0).argmax(axis=1)
            drop[rows[missing], first_zero] = True
        keep = ~drop
        return dists[keep].reshape(self.n, k)

    def knn_mean_distance(self, point_id: int, k: int) -> float:
        """Mean Euclidean distance from point_id to its k nearest other points."""
        self._check_id(point_id)
        return float(self.knn_mean_distances(k)[point_id])

    def knn_mean_distances(self, k: int) -> np.ndarray:
        return self.knn_distances(k).mean(axis=1)
