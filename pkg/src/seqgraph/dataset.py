"""Time-series dataset ingestion and subsequence extraction.

Datasets follow the UCR archive TSV layout: one series per line, first
field the class label, remaining tab-separated fields the values. Series
may have different lengths. Labels are kept only for evaluation; nothing
in the clustering pipeline reads them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DatasetError

MIN_SERIES_LENGTH = 5


@dataclass(frozen=True)
class TimeSeries:
    """One univariate series; values are an immutable float array."""

    values: np.ndarray
    id: int

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise DatasetError(f"series {self.id} is not one-dimensional")
        if values.size < MIN_SERIES_LENGTH:
            raise DatasetError(
                f"series {self.id} has fewer than {MIN_SERIES_LENGTH} values"
            )
        if not np.all(np.isfinite(values)):
            raise DatasetError(f"series {self.id} contains non-finite values")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class Dataset:
    """An immutable collection of series plus optional evaluation labels."""

    series: tuple[TimeSeries, ...]
    labels: np.ndarray | None = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "series", tuple(self.series))
        if len(self.series) < 2:
            raise DatasetError("a dataset needs at least 2 series")
        if self.labels is not None:
            labels = np.asarray(self.labels, dtype=np.int64)
            if labels.shape != (len(self.series),):
                raise DatasetError("labels must have exactly one entry per series")
            labels = labels.copy()
            labels.flags.writeable = False
            object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.series)

    def min_length(self) -> int:
        return min(len(t) for t in self.series)

    def z_normalized(self) -> "Dataset":
        """Per-series z-normalization (optional; off by default in the CLI)."""
        out = []
        for t in self.series:
            sd = t.values.std()
            if sd == 0:
                raise DatasetError(f"series {t.id} is constant; cannot z-normalize")
            out.append(TimeSeries((t.values - t.values.mean()) / sd, t.id))
        return Dataset(tuple(out), self.labels, self.name)


@dataclass(frozen=True)
class Subsequence:
    """A contiguous slice of a series, tagged with its origin."""

    values: np.ndarray
    series_id: int
    start: int


def load_ucr_tsv(path: str | Path, name: str = "") -> Dataset:
    """Parse a UCR-layout TSV file into a Dataset.

    Each nonempty line is ``label<TAB>v1<TAB>v2...``. Labels are truncated
    to integers; rows may differ in length but need at least 5 values.
    Row numbers in error messages are 1-based.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DatasetError(f"cannot read {path}: {exc}") from exc

    series: list[TimeSeries] = []
    labels: list[int] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) - 1 < MIN_SERIES_LENGTH:
            raise DatasetError(f"row {lineno} has fewer than {MIN_SERIES_LENGTH} values")
        try:
            label = int(float(fields[0]))
            values = np.array([float(f) for f in fields[1:]], dtype=np.float64)
        except ValueError as exc:
            raise DatasetError(f"row {lineno} is malformed: {exc}") from exc
        if not np.all(np.isfinite(values)):
            raise DatasetError(f"row {lineno} contains non-finite values")
        series.append(TimeSeries(values, id=len(series)))
        labels.append(label)
    if not series:
        raise DatasetError(f"{path} contains no series")
    return Dataset(tuple(series), np.array(labels), name or path.stem)


def write_ucr_tsv(dataset: Dataset, path: str | Path) -> None:
    """Serialize a dataset back into the UCR TSV layout."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for i, t in enumerate(dataset.series):
            label = dataset.labels[i] if dataset.labels is not None else 0
            fields = [str(int(label))] + [repr(float(v)) for v in t.values]
            fh.write("\t".join(fields) + "\n")


def sliding_windows(values: np.ndarray, length: int) -> np.ndarray:
    """All contiguous windows of ``length`` as a (n-length+1, length) view."""
    values = np.asarray(values)
    if not MIN_SERIES_LENGTH <= length <= values.size:
        raise ValueError(
            f"window length {length} outside [{MIN_SERIES_LENGTH}, {values.size}]"
        )
    return np.lib.stride_tricks.sliding_window_view(values, length)


def subsequences(series: TimeSeries, length: int) -> list[Subsequence]:
    """Subsequences of ``series`` in increasing start-offset order."""
    windows = sliding_windows(series.values, length)
    return [Subsequence(w, series.id, i) for i, w in enumerate(windows)]


def noise_ratio(series: TimeSeries) -> float:
    """Mean absolute step divided by the amplitude of the series."""
    v = series.values
    if v.size < 2:
        raise ValueError("noise ratio needs at least 2 points")
    amplitude = float(v.max() - v.min())
    if amplitude == 0:
        raise ValueError("zero amplitude: constant series has no noise ratio")
    return float(np.abs(np.diff(v)).mean() / amplitude)
