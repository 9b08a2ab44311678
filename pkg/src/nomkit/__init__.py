"""nomkit: mining small nominal datasets.

C4.5-style decision trees, k-modes clustering, stratified
cross-validation with classic text reports, ARFF/CSV interchange, and
SVG cluster plots. Install the package and run ``nomkit --help`` for
the command-line interface.
"""

from .cluster import (
    ClusterModel,
    ClusterParams,
    format_cluster_report,
    impute_modes,
    kmeans,
    nominal_distance,
)
from .errors import DataError, FormatError, NomkitError, UsageError
from .estimators import C45TreeClassifier, NominalKMeans
from .evaluation import (
    ClassMetrics,
    Evaluation,
    FoldPlan,
    PerClassReport,
    class_priors,
    cross_validate,
    dts,
    evaluate_model,
    evaluate_training,
    format_report,
    machine_summary,
    per_class_metrics,
    roc_auc,
    stratified_folds,
    summary_metrics,
)
from .plot import DEFAULT_PALETTE, PlotSpec, jitter_scatter
from .tabular import (
    AttributeSpec,
    CellValue,
    Dataset,
    RawTable,
    column_mode,
    format_number,
    parse_arff,
    parse_csv,
    parse_ranges,
    quote_name,
    remove_attributes,
    rows_to_csv,
    write_arff,
    write_csv,
)
from .titanic import normalize_titanic
from .tree import (
    Leaf,
    Split,
    TreeNode,
    TreeParams,
    build_tree,
    entropy,
    gain_and_ratio,
    leaf_count,
    predict,
    print_tree,
    tree_size,
    upper_error_estimate,
)

__version__ = "0.1.0"

__all__ = [
    "AttributeSpec",
    "C45TreeClassifier",
    "CellValue",
    "ClassMetrics",
    "ClusterModel",
    "ClusterParams",
    "DEFAULT_PALETTE",
    "DataError",
    "Dataset",
    "Evaluation",
    "FoldPlan",
    "FormatError",
    "Leaf",
    "NominalKMeans",
    "NomkitError",
    "PerClassReport",
    "PlotSpec",
    "RawTable",
    "Split",
    "TreeNode",
    "TreeParams",
    "UsageError",
    "__version__",
    "build_tree",
    "class_priors",
    "column_mode",
    "cross_validate",
    "dts",
    "entropy",
    "evaluate_model",
    "evaluate_training",
    "format_cluster_report",
    "format_number",
    "format_report",
    "gain_and_ratio",
    "impute_modes",
    "jitter_scatter",
    "kmeans",
    "leaf_count",
    "machine_summary",
    "nominal_distance",
    "normalize_titanic",
    "parse_arff",
    "parse_csv",
    "parse_ranges",
    "per_class_metrics",
    "predict",
    "print_tree",
    "quote_name",
    "remove_attributes",
    "roc_auc",
    "rows_to_csv",
    "stratified_folds",
    "summary_metrics",
    "tree_size",
    "upper_error_estimate",
    "write_arff",
    "write_csv",
]
