"""Knowledgebase growth after a confirmed anomaly.

A confirmed anomaly means the administrator vouched that a batch of
anomalous records is a genuinely new attack.  The class variable gains
one state, every table is refit on the old training matrix plus the
confirmed records, and the same sectioning recompiles over the new
network.  Structure is kept: the tree was learned from the old classes
and stays valid as a factorization; only the tables move.
"""

from dataclasses import replace

import numpy as np

from sentinet.detect.model import TrainedModel
from sentinet.detect.pipeline import Dataset, apply_binning
from sentinet.detect.structure import fit_cpts
from sentinet.errors import TooFewConfirmedRecordsError
from sentinet.msbn import section_network

MIN_CONFIRMED_RECORDS = 10


def merge_confirmed(train: Dataset, binning, new_class: str, confirmed) -> Dataset:
    """Training matrix extended with confirmed rows under a new class id."""
    if new_class in train.class_states:
        raise ValueError(f"class {new_class!r} already known")
    class_states = train.class_states + (new_class,)
    relabeled = [replace(ex, cls=new_class) for ex in confirmed]
    extra = apply_binning(relabeled, binning, class_states)
    data = np.vstack([train.data, extra.data])
    arities = (len(class_states),) + train.arities[1:]
    state_names = (tuple(class_states),) + train.state_names[1:]
    return Dataset(train.names, arities, state_names, data, class_states)


def update_knowledgebase(model: TrainedModel, new_class: str, confirmed,
                         min_records: int = MIN_CONFIRMED_RECORDS,
                         sectioning=None):
    """(retrained model, recompiled sectioned net or None).

    confirmed is a list of raw Example rows; their recorded class is
    ignored and replaced by the new class name.
    """
    if len(confirmed) < min_records:
        raise TooFewConfirmedRecordsError(
            f"need at least {min_records} confirmed records, have {len(confirmed)}"
        )
    merged = merge_confirmed(model.train, model.binning, new_class, confirmed)
    parents = tuple(cpt.parents for cpt in model.net.cpts)
    net = fit_cpts(parents, merged, model.alpha)
    retrained = TrainedModel(net, model.binning, merged.class_states, merged, model.alpha)
    sectioned = None
    if sectioning is not None:
        sectioned = section_network(net, sectioning)
    return retrained, sectioned
