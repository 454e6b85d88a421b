"""Synthetic benchmarks, delimited-file ingestion and deterministic splits.

The two-moons and two-circles generators freeze the usual toolkit
parametrisations exactly (so ports agree bit for bit given a seed), noise is
Gaussian per coordinate drawn from the package's counter-based streams, and
splitting is stratified with standardisation fitted on the training part only.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import rng


@dataclass(frozen=True)
class Dataset:
    """Feature matrix, integer class labels and the fitted scaler state."""

    x: np.ndarray
    y: np.ndarray
    name: str
    seed: int | None = None
    scaler_mean: np.ndarray | None = None
    scaler_std: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def d(self) -> int:
        return self.x.shape[1]

    def class_counts(self) -> dict[int, int]:
        classes, counts = np.unique(self.y, return_counts=True)
        return {int(c): int(k) for c, k in zip(classes, counts)}


def make_moons(n: int, noise: float = 0.2, seed: int = 0) -> Dataset:
    """Two interleaving half-circles with Gaussian coordinate noise.

    Class 0 sits on (cos t, sin t) for t in [0, pi]; class 1 on
    (1 - cos t, 0.5 - sin t). Requires an even n >= 4.
    """
    if n < 4 or n % 2 != 0:
        raise ValueError(f"moons needs an even sample count >= 4, got {n}")
    half = n // 2
    t = np.linspace(0.0, np.pi, half)
    outer = np.column_stack([np.cos(t), np.sin(t)])
    inner = np.column_stack([1.0 - np.cos(t), 0.5 - np.sin(t)])
    x = np.vstack([outer, inner])
    y = np.concatenate([np.zeros(half, dtype=np.int64), np.ones(half, dtype=np.int64)])
    if noise > 0.0:
        x = x + noise * rng.normal(rng.stream(seed, "moons-noise"), x.shape)
    return Dataset(x=x, y=y, name="moons", seed=seed)


def make_circles(n: int, noise: float = 0.2, factor: float = 0.8, seed: int = 0) -> Dataset:
    """Concentric circles: outer radius 1 (class 0), inner radius ``factor``."""
    if n < 4 or n % 2 != 0:
        raise ValueError(f"circles needs an even sample count >= 4, got {n}")
    if not 0.0 < factor < 1.0:
        raise ValueError(f"factor must lie strictly between 0 and 1, got {factor}")
    half = n // 2
    t = np.linspace(0.0, 2.0 * np.pi, half, endpoint=False)
    outer = np.column_stack([np.cos(t), np.sin(t)])
    inner = factor * outer
    x = np.vstack([outer, inner])
    y = np.concatenate([np.zeros(half, dtype=np.int64), np.ones(half, dtype=np.int64)])
    if noise > 0.0:
        x = x + noise * rng.normal(rng.stream(seed, "circles-noise"), x.shape)
    return Dataset(x=x, y=y, name="circles", seed=seed)


def load_csv(path: str | Path, label_column: int | str = 0, has_header: bool = True) -> Dataset:
    """Read features and labels from a delimited file.

    The label column is selected by index or (with a header) by name. Feature
    cells must be numeric; malformed cells raise with their row and column.
    Labels that all parse as non-negative integers are kept as-is, anything
    else is mapped to dense ids in order of first appearance.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        rows = [row for row in reader if row]
    if not rows:
        raise ValueError(f"{path}: empty file")
    header: list[str] | None = None
    if has_header:
        header, rows = rows[0], rows[1:]
    if isinstance(label_column, str):
        if header is None:
            raise ValueError("label column by name requires a header")
        if label_column not in header:
            raise ValueError(f"label column {label_column!r} not in header {header}")
        label_idx = header.index(label_column)
    else:
        label_idx = int(label_column)
    features: list[list[float]] = []
    raw_labels: list[str] = []
    width = len(rows[0])
    for line_no, row in enumerate(rows, start=2 if has_header else 1):
        if len(row) != width:
            raise ValueError(f"{path}:{line_no}: expected {width} cells, got {len(row)}")
        if not -width <= label_idx < width:
            raise ValueError(f"{path}: label column {label_idx} out of range")
        raw_labels.append(row[label_idx].strip())
        feats = []
        for col, cell in enumerate(row):
            if col == label_idx % width:
                continue
            text = cell.strip()
            if not text:
                raise ValueError(f"{path}:{line_no}: blank feature cell in column {col}")
            try:
                feats.append(float(text))
            except ValueError as exc:
                raise ValueError(
                    f"{path}:{line_no}: non-numeric feature {cell!r} in column {col}"
                ) from exc
        features.append(feats)
    if any(not lbl for lbl in raw_labels):
        missing = raw_labels.index("")
        raise ValueError(f"{path}: missing label in data row {missing + 1}")
    labels = _encode_labels(raw_labels)
    x = np.asarray(features, dtype=np.float64)
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{path}: non-finite feature values after parsing")
    return Dataset(x=x, y=labels, name=path.stem)


def _encode_labels(raw: list[str]) -> np.ndarray:
    try:
        as_int = [int(text) for text in raw]
        if all(v >= 0 for v in as_int):
            return np.asarray(as_int, dtype=np.int64)
    except ValueError:
        pass
    mapping: dict[str, int] = {}
    out = []
    for text in raw:
        if text not in mapping:
            mapping[text] = len(mapping)
        out.append(mapping[text])
    return np.asarray(out, dtype=np.int64)


def save_csv(ds: Dataset, path: str | Path) -> None:
    """Write ``label,f0,...,f{d-1}`` rows with a header."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label"] + [f"f{i}" for i in range(ds.d)])
        for label, row in zip(ds.y, ds.x):
            writer.writerow([int(label)] + [f"{v:.17g}" for v in row])


def split(
    ds: Dataset,
    test_fraction: float = 0.10,
    seed: int = 0,
    stratified: bool = True,
) -> tuple[Dataset, Dataset]:
    """Stratified shuffle split with train-fitted standardisation.

    Per-feature mean and standard deviation come from the training part only
    and are applied to both parts, so no test statistics leak into training.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValueError(f"test fraction must lie in (0, 1), got {test_fraction}")
    gen = rng.stream(seed, "split")
    test_idx: list[int] = []
    if stratified:
        for cls in np.unique(ds.y):
            members = np.flatnonzero(ds.y == cls)
            if members.shape[0] < 2:
                raise ValueError(f"class {cls} has fewer than 2 samples; cannot stratify")
            perm = gen.permutation(members.shape[0])
            take = int(round(test_fraction * members.shape[0]))
            take = min(max(take, 1), members.shape[0] - 1)
            test_idx.extend(members[perm[:take]].tolist())
    else:
        perm = gen.permutation(ds.n)
        take = min(max(int(round(test_fraction * ds.n)), 1), ds.n - 1)
        test_idx = perm[:take].tolist()
    test_mask = np.zeros(ds.n, dtype=bool)
    test_mask[test_idx] = True
    train_x, test_x = ds.x[~test_mask], ds.x[test_mask]
    train_y, test_y = ds.y[~test_mask], ds.y[test_mask]
    mean = train_x.mean(axis=0)
    std = train_x.std(axis=0)
    std = np.where(std > 0.0, std, 1.0)
    train = Dataset(
        x=(train_x - mean) / std, y=train_y, name=ds.name, seed=seed,
        scaler_mean=mean, scaler_std=std,
    )
    test = Dataset(
        x=(test_x - mean) / std, y=test_y, name=ds.name, seed=seed,
        scaler_mean=mean, scaler_std=std,
    )
    return train, test
