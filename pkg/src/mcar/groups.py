"""Group labeling constraints with a reserved null class.

Instances are partitioned into co-occurrence groups (e.g. the faces that
appear together in one photo).  Within a group, every non-null class may be
assigned at most once, and at least one instance must be non-null unless the
group is explicitly all-null.  The last class index is reserved as the null
class: it is never masked away by candidate sets, so any instance can fall
back to "none of the named identities".

The constraints are enforced by a sequential projection heuristic; each
sub-step maps its own target quantity into range and is followed by a column
renormalization, which can perturb the other constraints.  Hard-label
conflicts that survive are therefore detected after the solve and reported,
with an optional greedy repair.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DataError
from .labels import (
    AmbiguousDataset,
    Candidates,
    candidate_mask,
    identity_weights,
    init_soft_labels,
    predict_labels,
    weight_matrix,
)
from .solver import SolveResult, SolverConfig, wmcar_solve


@dataclass(frozen=True)
class GroupStructure:
    """Disjoint index groups covering all instances.

    The null class is the last class index by convention and is not stored
    here.  Use :meth:`from_partial` to fill uncovered instances with
    singleton groups.
    """

    groups: tuple[tuple[int, ...], ...]
    num_instances: int

    def __post_init__(self):
        seen: set[int] = set()
        norm = []
        for k, g in enumerate(self.groups):
            members = tuple(sorted(int(j) for j in g))
            if not members:
                raise DataError(f"group {k} is empty")
            for j in members:
                if j < 0 or j >= self.num_instances:
                    raise DataError(f"group {k} references instance {j} out of range")
                if j in seen:
                    raise DataError(f"instance {j} appears in two groups")
                seen.add(j)
            norm.append(members)
        if len(seen) != self.num_instances:
            missing = sorted(set(range(self.num_instances)) - seen)
            raise DataError(
                f"groups do not cover instances {missing[:5]}"
                f"{'...' if len(missing) > 5 else ''}"
            )
        object.__setattr__(self, "groups", tuple(norm))

    @classmethod
    def from_partial(cls, groups, num_instances: int) -> "GroupStructure":
        """Build a full partition, placing uncovered instances in singletons."""
        listed = [tuple(sorted(int(j) for j in g)) for g in groups]
        covered = {j for g in listed for j in g}
        singletons = [(j,) for j in range(num_instances) if j not in covered]
        return cls(groups=tuple(listed + singletons), num_instances=num_instances)


def uses_null_class(candidates: Candidates, num_classes: int) -> bool:
    """Whether any instance lists the null (last) class as a candidate.

    When none does, the problem has no null semantics: exempting the null
    row from candidate masking would let predictions escape every candidate
    set, so the row is treated as a regular class instead and group solves
    with vacuous constraints reduce exactly to unconstrained ones.
    """
    null = num_classes - 1
    return any(null in s for s in candidates)


def extended_candidates(candidates: Candidates, num_classes: int) -> Candidates:
    """Candidate sets with the null class admitted (when the problem uses it)."""
    if not uses_null_class(candidates, num_classes):
        return [tuple(s) for s in candidates]
    null = num_classes - 1
    return [tuple(sorted(set(s) | {null})) for s in candidates]


def _allowed_mask(candidates: Candidates, num_classes: int) -> np.ndarray:
    mask = candidate_mask(candidates, num_classes)
    if uses_null_class(candidates, num_classes):
        mask[num_classes - 1, :] = True
    return mask


def _normalize_columns(Y: np.ndarray, fallback: np.ndarray) -> np.ndarray:
    """Scale each column to sum 1; empty columns go uniform over ``fallback``.

    The fallback support is the candidate set as listed (null included only
    when explicitly a candidate), so group-mode solves reduce exactly to the
    unconstrained ones when the constraints are vacuous.
    """
    sums = Y.sum(axis=0)
    dead = sums <= 0
    if np.any(dead):
        Y = Y.copy()
        for j in np.flatnonzero(dead):
            support = np.flatnonzero(fallback[:, j])
            Y[:, j] = 0.0
            Y[support, j] = 1.0 / support.size
        sums = Y.sum(axis=0)
    return Y / sums


def _clamp_and_mask(Y: np.ndarray, allowed: np.ndarray) -> np.ndarray:
    """Non-negativity clamp and candidate masking of the non-null rows."""
    out = np.maximum(Y, 0.0)
    out[~allowed] = 0.0
    return out


def _raise_group_floor(Y, groups, eligible, degenerate=None):
    """Scale eligible groups so total non-null mass reaches at least 1.

    Divides non-null entries by min(group non-null mass, 1); a group with no
    non-null mass cannot be restored by scaling and is left unchanged (and
    recorded in ``degenerate`` when given).
    """
    out = Y.copy()
    null = Y.shape[0] - 1
    for k, members in enumerate(groups):
        if not eligible[k]:
            continue
        cols = list(members)
        mass = out[:null, cols].sum()
        if mass <= 0:
            if degenerate is not None:
                degenerate.add(k)
            continue
        out[:null, cols] /= min(mass, 1.0)
    return out


def _cap_group_class_mass(Y, groups):
    """Scale each non-null class within each group down to total mass <= 1."""
    out = Y.copy()
    null = Y.shape[0] - 1
    for members in groups:
        cols = list(members)
        sums = out[:null, cols].sum(axis=1)
        out[:null, cols] /= np.maximum(sums, 1.0)[:, None]
    return out


def project_group_constraints(
    Y: np.ndarray,
    candidates: Candidates,
    groups: GroupStructure,
    degenerate: set | None = None,
) -> np.ndarray:
    """Sequential feasibility projection under group constraints.

    Applies, in order: candidate masking of non-null rows with clamping and
    column normalization; the per-group non-null floor (skipped for groups
    whose candidates are all-null); and the per-group uniqueness cap.  Each
    scaling step is followed by column renormalization.
    """
    Y = np.asarray(Y, dtype=float)
    c = Y.shape[0]
    null = c - 1
    allowed = _allowed_mask(candidates, c)
    fallback = candidate_mask(candidates, c)
    eligible = [
        set().union(*(candidates[j] for j in members)) != {null}
        for members in groups.groups
    ]

    Y = _normalize_columns(_clamp_and_mask(Y, allowed), fallback)
    Y = _normalize_columns(
        _raise_group_floor(Y, groups.groups, eligible, degenerate), fallback
    )
    Y = _normalize_columns(_cap_group_class_mass(Y, groups.groups), fallback)
    return Y


@dataclass(frozen=True)
class GroupReport:
    """Post-solve constraint audit.

    ``conflicts`` lists (group index, class, instances) for every non-null
    class predicted more than once inside a group, before any repair.
    ``predictions`` holds the final hard labels (repaired when requested).
    ``soft_caps_ok`` says whether every per-group per-class soft sum stayed
    within 1 + 1e-6 at exit; ``degenerate_groups`` are groups whose non-null
    floor could not be restored by scaling at some iteration.
    """

    conflicts: tuple[tuple[int, int, tuple[int, ...]], ...]
    predictions: np.ndarray
    soft_caps_ok: bool
    degenerate_groups: tuple[int, ...]
    repaired: bool


def _find_conflicts(pred, groups, null):
    conflicts = []
    for k, members in enumerate(groups):
        by_class: dict[int, list[int]] = {}
        for j in members:
            label = int(pred[j])
            if label != null:
                by_class.setdefault(label, []).append(j)
        for label, members_of in sorted(by_class.items()):
            if len(members_of) > 1:
                conflicts.append((k, label, tuple(members_of)))
    return conflicts


def _greedy_repair(Y, pred, groups, allowed, null):
    """Give each contested class to its best-scoring instance; demote the rest.

    Demoted instances move to their next-best admissible label (null always
    admissible), so the loop terminates within one pass per class.
    """
    pred = pred.copy()
    banned: dict[int, set[int]] = {}
    for _ in range(Y.shape[0]):
        conflicts = _find_conflicts(pred, groups, null)
        if not conflicts:
            break
        for _, label, members in conflicts:
            keep = max(members, key=lambda j: (Y[label, j], -j))
            for j in members:
                if j == keep:
                    continue
                banned.setdefault(j, set()).add(label)
                options = [
                    i
                    for i in np.flatnonzero(allowed[:, j])
                    if i not in banned[j] or i == null
                ]
                pred[j] = max(options, key=lambda i: (Y[i, j], -i))
    return pred


def group_mcar_solve(
    dataset: AmbiguousDataset,
    groups: GroupStructure,
    P: np.ndarray | None = None,
    config: SolverConfig | None = None,
    W: np.ndarray | None = None,
    repair_conflicts: bool = False,
) -> SolveResult:
    """Low-rank ambiguity resolution with group constraints.

    Identical alternating solve to the unconstrained one, with the label
    feasibility projection replaced by :func:`project_group_constraints`
    (applied in the unweighted domain when column weights are given).  The
    returned result carries a :class:`GroupReport`; uniqueness violations in
    the hard predictions are reported, and repaired only when
    ``repair_conflicts`` is set.
    """
    if groups.num_instances != dataset.num_instances:
        raise DataError("group structure does not match the dataset size")
    if W is None:
        W = identity_weights(dataset.num_instances)
    degenerate: set[int] = set()

    def project(Yb, cands, w):
        Y = project_group_constraints(Yb / w, cands, groups, degenerate)
        return Y * w

    result = wmcar_solve(dataset, P=P, W=W, config=config, project=project)

    c = dataset.num_classes
    null = c - 1
    ext = extended_candidates(dataset.candidates, c)
    pred = predict_labels(result.Y, ext)
    conflicts = _find_conflicts(pred, groups.groups, null)
    caps_ok = all(
        result.Y[:null, list(members)].sum(axis=1).max(initial=0.0) <= 1 + 1e-6
        for members in groups.groups
    )
    if repair_conflicts and conflicts:
        pred = _greedy_repair(
            result.Y, pred, groups.groups, _allowed_mask(dataset.candidates, c), null
        )
    report = GroupReport(
        conflicts=tuple(conflicts),
        predictions=pred,
        soft_caps_ok=caps_ok,
        degenerate_groups=tuple(sorted(degenerate)),
        repaired=repair_conflicts and bool(conflicts),
    )
    return replace(result, group_report=report)


def group_wmcar_solve(
    dataset: AmbiguousDataset,
    groups: GroupStructure,
    P: np.ndarray | None = None,
    config: SolverConfig | None = None,
    repair_conflicts: bool = False,
) -> SolveResult:
    """Group-constrained solve with imbalance-compensating column weights."""
    if P is None:
        P = init_soft_labels(dataset.candidates, dataset.num_classes)
    return group_mcar_solve(
        dataset,
        groups,
        P=P,
        config=config,
        W=weight_matrix(P),
        repair_conflicts=repair_conflicts,
    )
