"""Data containers, index partitioning, and lagged-feature construction.

Everything here is immutable after construction and safe to share across
threads or processes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import SeriesTooShort, SizeMismatch


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """An ordered sequence of real observations, optionally timestamped.

    Timestamps, when present, are integer epoch seconds and must be strictly
    increasing and aligned with the values.
    """

    values: np.ndarray
    timestamps: np.ndarray | None = None

    def __post_init__(self):
        values = _readonly(np.asarray(self.values, dtype=np.float64))
        if values.ndim != 1 or values.size < 1:
            raise SizeMismatch("a time series needs at least one observation")
        if not np.all(np.isfinite(values)):
            raise SizeMismatch("time series values must all be finite")
        object.__setattr__(self, "values", values)
        if self.timestamps is not None:
            ts = _readonly(np.asarray(self.timestamps, dtype=np.int64))
            if ts.shape != values.shape:
                raise SizeMismatch("timestamps must align with values")
            if ts.size > 1 and not np.all(np.diff(ts) > 0):
                raise SizeMismatch("timestamps must be strictly increasing")
            object.__setattr__(self, "timestamps", ts)

    def __len__(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class SupervisedDataset:
    """Rows of (covariate vector, real response), all with the same width."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = _readonly(np.asarray(self.x, dtype=np.float64))
        y = _readonly(np.asarray(self.y, dtype=np.float64))
        if x.ndim != 2:
            raise SizeMismatch("covariates must form a 2-d array")
        if y.ndim != 1 or y.shape[0] != x.shape[0]:
            raise SizeMismatch("responses must align with covariate rows")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise SizeMismatch("dataset entries must all be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return int(self.y.size)

    @property
    def dim(self) -> int:
        return int(self.x.shape[1])

    def __len__(self) -> int:
        return self.n

    def slice(self, start: int, stop: int) -> "SupervisedDataset":
        """Contiguous row window [start, stop)."""
        return SupervisedDataset(self.x[start:stop], self.y[start:stop])


@dataclass(frozen=True)
class SplitIndices:
    """Contiguous train / calibration / test partition of {0, ..., n-1}.

    Temporal order is load-bearing under dependence: training rows come
    first, then calibration, then test. Ranges are half-open.
    """

    n_train: int
    n_cal: int
    n_test: int
    train: range = field(init=False)
    cal: range = field(init=False)
    test: range = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "train", range(0, self.n_train))
        object.__setattr__(
            self, "cal", range(self.n_train, self.n_train + self.n_cal)
        )
        object.__setattr__(
            self,
            "test",
            range(self.n_train + self.n_cal, self.n_train + self.n_cal + self.n_test),
        )

    @property
    def n(self) -> int:
        return self.n_train + self.n_cal + self.n_test


def split_indices(n: int, n_train: int, n_cal: int, n_test: int) -> SplitIndices:
    """Partition {0..n-1} into ordered contiguous train/cal/test blocks.

    Raises SizeMismatch unless all three counts are positive and sum to n.
    """
    for name, count in (("n_train", n_train), ("n_cal", n_cal), ("n_test", n_test)):
        if int(count) != count or count <= 0:
            raise SizeMismatch(f"{name} must be a positive integer, got {count}")
    if n_train + n_cal + n_test != n:
        raise SizeMismatch(
            f"counts {n_train}+{n_cal}+{n_test} do not sum to n={n}"
        )
    return SplitIndices(int(n_train), int(n_cal), int(n_test))


def make_lagged_features(series: TimeSeries, lag_count: int) -> SupervisedDataset:
    """Turn a series into rows x_t = (v_{t-L}, ..., v_{t-1}), y_t = v_t.

    Row order preserves time order; the first lag_count observations only
    ever appear as features.
    """
    if lag_count < 1:
        raise SizeMismatch(f"lag_count must be >= 1, got {lag_count}")
    v = series.values
    if len(series) <= lag_count:
        raise SeriesTooShort(
            f"series of length {len(series)} cannot produce {lag_count}-lag rows"
        )
    windows = np.lib.stride_tricks.sliding_window_view(v, lag_count)
    return SupervisedDataset(windows[:-1], v[lag_count:])
