"""Two-modality cohort stratification: ingest, cluster, integrate, compare.

Workflow: parse and align two expression matrices plus clinical follow-up,
select features per modality, cluster each modality (k-means, spectral, or
community detection), cross-tabulate the partitions into a parallel-sets
model, resolve block/ribbon selections to patient groups, and compare those
groups with Kaplan-Meier curves and the log-rank test.
"""

from ._kernels import USING_NUMBA
from .cluster import (
    HeatmapLayout,
    Partition,
    SilhouetteReport,
    community_detect,
    heatmap_order,
    kmeans,
    modularity,
    silhouette,
    spectral,
)
from .errors import (
    NotFoundError,
    ParseError,
    PhaseError,
    StratixError,
    ValidationError,
)
from .features import (
    FeatureSelection,
    FeatureView,
    full_view,
    parse_feature_list,
    select_features,
)
from .graph import (
    SimilarityGraph,
    SimilarityMatrix,
    adjacency,
    connected_components,
    graph_summary,
    graph_to_json,
    similarity_matrix,
    sparsify,
)
from .ingest import (
    ClinicalRecord,
    ClinicalTable,
    Cohort,
    ExpressionMatrix,
    align_cohort,
    normalize,
    parse_clinical_table,
    parse_expression_matrix,
    serialize_expression_matrix,
)
from .integrate import (
    Block,
    ContingencyTable,
    ParallelSetsModel,
    Ribbon,
    SelectionSpec,
    build_parallel_sets,
    compare_selections,
    cross_tab,
    make_selection,
    resolve_selection,
)
from .pipeline import (
    ModalityParams,
    PipelineConfig,
    cluster_modality,
    load_config,
    run_pipeline,
    run_pipeline_from_file,
)
from .survival import (
    LogRankResult,
    SurvivalCurve,
    chi_square_sf,
    km_curve,
    logrank,
)
from .synth import (
    GeneratedCohort,
    SyntheticCohortSpec,
    adjusted_rand_index,
    generate_synthetic,
)

__version__ = "1.0.0"

__all__ = [
    "USING_NUMBA",
    "__version__",
    # errors
    "StratixError", "ParseError", "ValidationError", "PhaseError",
    "NotFoundError",
    # ingest
    "ExpressionMatrix", "ClinicalRecord", "ClinicalTable", "Cohort",
    "parse_expression_matrix", "serialize_expression_matrix",
    "parse_clinical_table", "normalize", "align_cohort",
    # features
    "FeatureSelection", "FeatureView", "parse_feature_list",
    "select_features", "full_view",
    # graph
    "SimilarityMatrix", "SimilarityGraph", "similarity_matrix", "sparsify",
    "adjacency", "connected_components", "graph_summary", "graph_to_json",
    # cluster
    "Partition", "SilhouetteReport", "HeatmapLayout", "kmeans", "spectral",
    "community_detect", "modularity", "silhouette", "heatmap_order",
    # survival
    "SurvivalCurve", "LogRankResult", "km_curve", "logrank", "chi_square_sf",
    # integrate
    "ContingencyTable", "Block", "Ribbon", "SelectionSpec",
    "ParallelSetsModel", "cross_tab", "build_parallel_sets",
    "resolve_selection", "make_selection", "compare_selections",
    # pipeline
    "ModalityParams", "PipelineConfig", "load_config", "run_pipeline",
    "run_pipeline_from_file", "cluster_modality",
    # synth
    "SyntheticCohortSpec", "GeneratedCohort", "generate_synthetic",
    "adjusted_rand_index",
]
