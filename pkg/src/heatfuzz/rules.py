"""Wang-Mendel rule generation, rule rendering and the model file format."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .dataset import Dataset, Sample
from .fuzzy import (
    LABELS,
    Partition,
    TriangularMf,
    Universe,
    build_partition,
    classify_max,
    fuzzify,
    universe_from_data,
)
from .inference import ConsequentCenters, consequent_centers

MODEL_FORMAT = "heatfuzz-rulebase"
MODEL_VERSION = 1


class ModelFileError(ValueError):
    pass


@dataclass(frozen=True)
class FuzzyRule:
    """IF rh is ``rh_label`` AND t is ``t_label`` THEN hi is ``hi_label``."""

    rh_label: str
    t_label: str
    hi_label: str
    degree: float

    def __post_init__(self):
        for label in (self.rh_label, self.t_label, self.hi_label):
            if label not in LABELS:
                raise ValueError(f"unknown region label {label!r}")
        if not 0.0 < self.degree <= 1.0:
            raise ValueError(f"rule degree must lie in (0, 1], got {self.degree}")

    @property
    def antecedent(self) -> tuple[str, str]:
        return (self.rh_label, self.t_label)

    def proposition(self) -> str:
        return (
            f"IF relative humidity is {self.rh_label} and temperature is {self.t_label} "
            f"THEN heat index is {self.hi_label}"
        )


def _antecedent_key(rule: FuzzyRule) -> tuple[int, int]:
    return (LABELS.index(rule.rh_label), LABELS.index(rule.t_label))


@dataclass(frozen=True)
class RuleBase:
    """Deduplicated rules plus everything inference needs.

    Rules are kept in antecedent order (rh region, then t region).
    """

    rules: tuple[FuzzyRule, ...]
    rh: Partition
    t: Partition
    hi: Partition
    centers: ConsequentCenters

    def __post_init__(self):
        rules = tuple(sorted(self.rules, key=_antecedent_key))
        keys = [r.antecedent for r in rules]
        if len(set(keys)) != len(keys):
            raise ValueError("more than one rule for the same antecedent")
        object.__setattr__(self, "rules", rules)

    def __len__(self) -> int:
        return len(self.rules)

    def rule_for(self, rh_label: str, t_label: str) -> FuzzyRule | None:
        for r in self.rules:
            if r.antecedent == (rh_label, t_label):
                return r
        return None


def rule_from_sample(s: Sample, partitions: tuple[Partition, Partition, Partition]) -> FuzzyRule:
    labels = []
    degree = 1.0
    for value, p in zip((s.rh, s.t, s.hi), partitions):
        g = fuzzify(value, p)
        label = classify_max(g)
        labels.append(label)
        degree *= g[label]
    return FuzzyRule(*labels, degree=degree)


def learn_rules(train: Dataset) -> RuleBase:
    """Learn one rule per antecedent pair from the training samples.

    Every sample proposes a rule; for each antecedent only the highest-degree
    proposal survives, the earliest sample winning exact ties.
    """
    if len(train) == 0:
        raise ValueError("training set is empty")
    try:
        universes = [universe_from_data(train.column(name)) for name in ("rh", "t", "hi")]
    except ValueError as exc:
        raise ValueError(f"cannot learn rules: {exc}") from exc
    partitions = tuple(build_partition(u) for u in universes)

    best: dict[tuple[str, str], FuzzyRule] = {}
    for s in train:
        rule = rule_from_sample(s, partitions)
        held = best.get(rule.antecedent)
        if held is None or rule.degree > held.degree:
            best[rule.antecedent] = rule
    return RuleBase(
        rules=tuple(best.values()),
        rh=partitions[0],
        t=partitions[1],
        hi=partitions[2],
        centers=consequent_centers(universes[2]),
    )


def render_rules(rb: RuleBase) -> str:
    """One proposition per line, strongest rule first, degree to six places."""
    if not rb.rules:
        raise ValueError("rule base is empty")
    ordered = sorted(rb.rules, key=lambda r: (-r.degree, _antecedent_key(r)))
    width = len(max((r.proposition() for r in ordered), key=len))
    return "\n".join(f"{r.proposition():<{width}}  degree {r.degree:.6f}" for r in ordered) + "\n"


def _partition_to_dict(p: Partition) -> dict:
    return {
        "universe": [p.universe.lo, p.universe.hi],
        **{label: [p[label].a, p[label].b, p[label].c] for label in LABELS},
    }


def _partition_from_dict(d: dict) -> Partition:
    lo, hi = d["universe"]
    return Partition(Universe(float(lo), float(hi)), *(TriangularMf(*map(float, d[label])) for label in LABELS))


def model_to_dict(rb: RuleBase) -> dict:
    c = rb.centers
    return {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "partitions": {name: _partition_to_dict(getattr(rb, name)) for name in ("rh", "t", "hi")},
        "rules": [{"rh": r.rh_label, "t": r.t_label, "hi": r.hi_label, "degree": r.degree} for r in rb.rules],
        "centers": {
            "base": {label: c.base(label) for label in LABELS},
            "offset": {label: c.offset(label) for label in LABELS},
        },
    }


def model_from_dict(d: dict) -> RuleBase:
    if d.get("format") != MODEL_FORMAT:
        raise ModelFileError(f"not a {MODEL_FORMAT} file")
    if d.get("version") != MODEL_VERSION:
        raise ModelFileError(f"unsupported model version {d.get('version')!r} (expected {MODEL_VERSION})")
    try:
        parts = {name: _partition_from_dict(d["partitions"][name]) for name in ("rh", "t", "hi")}
        rules = tuple(FuzzyRule(r["rh"], r["t"], r["hi"], float(r["degree"])) for r in d["rules"])
        base, off = d["centers"]["base"], d["centers"]["offset"]
        centers = ConsequentCenters(
            *(float(base[label]) for label in LABELS), *(float(off[label]) for label in LABELS)
        )
        return RuleBase(rules=rules, centers=centers, **parts)
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFileError(f"corrupt model: {exc}") from exc


def save_model(rb: RuleBase, path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(rb), indent=2) + "\n")


def load_model(path) -> RuleBase:
    path = Path(path)
    try:
        d = json.loads(path.read_text())
    except OSError as exc:
        raise ModelFileError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ModelFileError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(d, dict):
        raise ModelFileError(f"{path}: expected a JSON object")
    return model_from_dict(d)
