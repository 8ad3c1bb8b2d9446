"""Analytics engine for hybrid weighted organizational performance metrics.

Ingest activity records, weight job categories from survey ratings, and
derive the coordinated view models: performance matrix, group glyph specs,
clustering, and 2D projection, with live weight adjustment over HTTP.
"""

from .analysis import (
    ClusterResult,
    FeatureTable,
    ProjectionParams,
    ProjectionResult,
    build_features,
    kmeans,
    project,
)
from .groups import (
    DandelionSpec,
    GroupSummary,
    StackedRadarSpec,
    build_dandelion,
    build_stacked_radar,
    group_by_assignment,
    group_by_clusters,
    top_categories,
)
from .ingest import (
    ActivityRecord,
    Behavior,
    Employee,
    EvaluationContext,
    RecordType,
    filter_records,
    parse_activity_csv,
    parse_employees_csv,
    validate_dataset,
    write_activity_csv,
)
from .matrix import (
    ColorScale,
    MatrixOrdering,
    ScoreMatrix,
    build_color_scale,
    build_matrix,
    cell_detail,
    pin_selection,
    sort_by_key,
    sort_by_total,
)
from .metrics import (
    RatingHistogram,
    WeightProfile,
    load_weight_profile,
    rating_histogram,
    score,
    set_included,
    set_weight,
)

__version__ = "0.1.0"
