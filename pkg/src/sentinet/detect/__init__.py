from sentinet.detect.model import (
    Classifier,
    ClassMetrics,
    MetricsReport,
    PredictionRow,
    TrainedModel,
    classify,
    classify_sectioned,
    evaluate,
    render_prediction_log,
    render_records,
    render_table,
    summarize,
)
from sentinet.detect.pipeline import (
    AttributeBins,
    BinningSpec,
    Dataset,
    Example,
    apply_binning,
    build_binning,
    canonical_class_order,
    class_histogram,
    discretize,
    label_records,
    parse_binning,
    serialize_binning,
    stratified_sample,
    train_test_split,
)
from sentinet.detect.schema import (
    ATTRIBUTE_NAMES,
    BASE_CLASSES,
    ConnectionRecord,
    load_label_map,
    map_label,
    parse_kdd,
)
from sentinet.detect.structure import fit_cpts, learn_structure
from sentinet.detect.synth import ClassProfile, SyntheticSpec, peaked_profile, standard_spec

__all__ = [
    "ATTRIBUTE_NAMES",
    "AttributeBins",
    "BASE_CLASSES",
    "BinningSpec",
    "ClassMetrics",
    "ClassProfile",
    "Classifier",
    "ConnectionRecord",
    "Dataset",
    "Example",
    "MetricsReport",
    "PredictionRow",
    "SyntheticSpec",
    "TrainedModel",
    "apply_binning",
    "build_binning",
    "canonical_class_order",
    "class_histogram",
    "classify",
    "classify_sectioned",
    "discretize",
    "evaluate",
    "fit_cpts",
    "label_records",
    "learn_structure",
    "load_label_map",
    "map_label",
    "parse_binning",
    "parse_kdd",
    "peaked_profile",
    "render_prediction_log",
    "render_records",
    "render_table",
    "serialize_binning",
    "standard_spec",
    "stratified_sample",
    "summarize",
    "train_test_split",
]
