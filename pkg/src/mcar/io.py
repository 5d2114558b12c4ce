"""Reading and writing the on-disk dataset formats.

All files use 1-based class and instance indices; everything is converted to
0-based at the boundary.  Formats:

* features: CSV, one row per instance, m numeric columns (stored internally
  transposed, as an (m, N) matrix).
* candidates: text, line j = comma-separated candidate class indices of
  instance j.
* groups: text, line k = comma-separated instance indices of group k;
  instances missing from every line become singleton groups.
* truth: one class index per line.  A predictions CSV (header line,
  ``instance,label,...`` columns) is also accepted, so emitted predictions
  round-trip as truth files.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .errors import DataError
from .groups import GroupStructure
from .labels import AmbiguousDataset, Candidates


def _rows(path, allow_blank: bool = False) -> list[tuple[int, list[str]]]:
    """CSV rows with their 1-based line numbers.

    Trailing blank lines are dropped; interior blank lines are an error
    unless ``allow_blank`` (then they are skipped).
    """
    try:
        with open(path, newline="") as fh:
            rows = [
                (lineno, [cell.strip() for cell in row])
                for lineno, row in enumerate(csv.reader(fh), start=1)
            ]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None
    while rows and not any(rows[-1][1]):
        rows.pop()
    blank = [lineno for lineno, cells in rows if not any(cells)]
    if blank and not allow_blank:
        raise DataError("blank line", line=blank[0])
    return [(lineno, cells) for lineno, cells in rows if any(cells)]


def load_features(path) -> np.ndarray:
    """Read an instances-by-features CSV into an (m, N) matrix."""
    rows = _rows(path)
    if not rows:
        raise DataError(f"{path} contains no data")
    width = len(rows[0][1])
    data = np.empty((len(rows), width))
    for r, (lineno, cells) in enumerate(rows):
        if len(cells) != width:
            raise DataError(
                f"expected {width} columns, found {len(cells)}", line=lineno
            )
        try:
            data[r] = [float(cell) for cell in cells]
        except ValueError:
            raise DataError("non-numeric cell", line=lineno) from None
    if not np.all(np.isfinite(data)):
        raise DataError(f"{path} contains non-finite values")
    return data.T


def _parse_index(cell: str, lineno: int, what: str) -> int:
    try:
        value = int(cell)
    except ValueError:
        raise DataError(f"non-integer {what} {cell!r}", line=lineno) from None
    if value < 1:
        raise DataError(f"{what} {value} is not 1-based", line=lineno)
    return value - 1


def load_candidates(path, num_classes: int | None = None) -> Candidates:
    """Read per-instance candidate label sets (1-based classes).

    A blank line would leave its instance without candidates and is a
    parse error.
    """
    candidates: Candidates = []
    for lineno, cells in _rows(path):
        labels = sorted({_parse_index(cell, lineno, "class index") for cell in cells})
        if num_classes is not None and labels[-1] >= num_classes:
            raise DataError(
                f"class index {labels[-1] + 1} exceeds {num_classes}", line=lineno
            )
        candidates.append(tuple(labels))
    if not candidates:
        raise DataError(f"{path} contains no candidate sets")
    return candidates


def load_truth(path, num_classes: int | None = None) -> np.ndarray:
    """Read ground-truth labels; accepts plain lists and predictions CSVs."""
    labels = []
    for lineno, cells in _rows(path):
        if lineno == 1 and not cells[0].lstrip("-").isdigit():
            continue  # header row of a predictions CSV
        cell = cells[0] if len(cells) == 1 else cells[1]
        label = _parse_index(cell, lineno, "class index")
        if num_classes is not None and label >= num_classes:
            raise DataError(f"class index {label + 1} exceeds {num_classes}", line=lineno)
        labels.append(label)
    if not labels:
        raise DataError(f"{path} contains no labels")
    return np.asarray(labels, dtype=int)


def load_groups(path, num_instances: int) -> GroupStructure:
    """Read co-occurrence groups (1-based instance indices per line)."""
    groups = []
    seen: dict[int, int] = {}
    for lineno, cells in _rows(path):
        members = [_parse_index(cell, lineno, "instance index") for cell in cells]
        for j in members:
            if j >= num_instances:
                raise DataError(
                    f"instance index {j + 1} exceeds {num_instances}", line=lineno
                )
            if j in seen:
                raise DataError(
                    f"instance {j + 1} already in group on line {seen[j]}",
                    line=lineno,
                )
            seen[j] = lineno
        groups.append(tuple(members))
    return GroupStructure.from_partial(groups, num_instances)


def normalize_features(X: np.ndarray) -> np.ndarray:
    """Scale all entries into [0, 1] by the global min and max."""
    lo, hi = X.min(), X.max()
    if hi == lo:
        return np.zeros_like(X)
    return (X - lo) / (hi - lo)


def load_dataset(
    features_path,
    candidates_path,
    groups_path=None,
    truth_path=None,
    num_classes: int | None = None,
    normalize: bool = False,
) -> tuple[AmbiguousDataset, GroupStructure | None]:
    """Assemble a dataset (and optional group structure) from files."""
    X = load_features(features_path)
    candidates = load_candidates(candidates_path, num_classes)
    if len(candidates) != X.shape[1]:
        raise DataError(
            f"{len(candidates)} candidate sets for {X.shape[1]} feature rows"
        )
    truth = load_truth(truth_path, num_classes) if truth_path else None
    if truth is not None and truth.size != X.shape[1]:
        raise DataError(f"{truth.size} truth labels for {X.shape[1]} instances")
    if num_classes is None:
        top = max(s[-1] for s in candidates)
        if truth is not None:
            top = max(top, int(truth.max()))
        num_classes = top + 1
    if normalize:
        X = normalize_features(X)
    dataset = AmbiguousDataset(
        features=X,
        candidates=candidates,
        num_classes=num_classes,
        ground_truth=truth,
    )
    structure = (
        load_groups(groups_path, dataset.num_instances) if groups_path else None
    )
    return dataset, structure


def write_features(path, X: np.ndarray) -> None:
    """Write an (m, N) matrix as an instances-by-features CSV."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in np.asarray(X).T:
            writer.writerow([repr(float(v)) for v in row])


def write_candidates(path, candidates: Candidates) -> None:
    with open(path, "w") as fh:
        for labels in candidates:
            fh.write(",".join(str(i + 1) for i in labels) + "\n")


def write_truth(path, labels) -> None:
    with open(path, "w") as fh:
        for label in labels:
            fh.write(f"{int(label) + 1}\n")


def write_groups(path, structure: GroupStructure) -> None:
    with open(path, "w") as fh:
        for members in structure.groups:
            fh.write(",".join(str(j + 1) for j in members) + "\n")


def write_predictions(path, predictions, Y: np.ndarray) -> None:
    """Write per-instance hard labels (1-based) with their soft score rows."""
    Y = np.asarray(Y)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["instance", "label"] + [f"score_{i + 1}" for i in range(Y.shape[0])]
        )
        for j, label in enumerate(predictions):
            writer.writerow(
                [j + 1, int(label) + 1] + [repr(float(v)) for v in Y[:, j]]
            )


def ensure_dir(path) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out
