"""Synthetic traffic generator with controllable class separation.

Each class is a product distribution over a few small-domain features.
The standard layout gives every class its own preferred feature value,
so records from a class held out of training sit in the low-probability
tail of every trained class at once.  That symmetry is the point: the
trained classes then split the posterior roughly evenly and the record
is anomalous under any threshold above that split.
"""

from dataclasses import dataclass

import numpy as np

from sentinet.detect.pipeline import Example


@dataclass(frozen=True)
class ClassProfile:
    name: str
    distributions: tuple[tuple[float, ...], ...]  # per feature, over states

    def __post_init__(self):
        for dist in self.distributions:
            total = sum(dist)
            if abs(total - 1.0) > 1e-9:
                raise ValueError(f"profile {self.name}: distribution sums to {total}")


@dataclass(frozen=True)
class SyntheticSpec:
    profiles: tuple[ClassProfile, ...]

    def generate(self, per_class: int, seed: int) -> list[Example]:
        """per_class rows for every profile, shuffled deterministically."""
        rng = np.random.default_rng(seed)
        rows = []
        for profile in self.profiles:
            for _ in range(per_class):
                values = tuple(
                    str(rng.choice(len(dist), p=np.array(dist)))
                    for dist in profile.distributions
                )
                rows.append(Example(values, profile.name))
        order = rng.permutation(len(rows))
        return [rows[i] for i in order]


def peaked_profile(name: str, peak_state: int, n_features: int, n_states: int, peak: float = 0.85) -> ClassProfile:
    rest = (1.0 - peak) / (n_states - 1)
    dist = tuple(peak if s == peak_state else rest for s in range(n_states))
    return ClassProfile(name, (dist,) * n_features)


def standard_spec(n_features: int = 6):
    """(training spec, held-out profile) used across tests.

    Features take raw values 0..4.  Training classes normal/flood/scan
    peak on value 0/1/2 and never emit 3 or 4, so those two values pool
    into the `other` bucket at discretization time.  Held-out stealth
    records emit only 3s and 4s: every feature of every stealth record
    encodes to `other`, a combination each trained class explains only
    through its smoothing floor.  The floors are symmetric across
    classes, so the posterior splits roughly evenly three ways and never
    crosses a threshold of 0.5, which is what makes the held-out class
    reliably anomalous rather than merely misclassified.
    """
    trained = []
    for name, peak_state in (("normal", 0), ("flood", 1), ("scan", 2)):
        dist = [0.075, 0.075, 0.075, 0.0, 0.0]
        dist[peak_state] = 0.85
        trained.append(ClassProfile(name, (tuple(dist),) * n_features))
    holdout = ClassProfile("stealth", ((0.0, 0.0, 0.0, 0.5, 0.5),) * n_features)
    return SyntheticSpec(tuple(trained)), holdout
