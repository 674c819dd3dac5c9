"""Workbench for diagnosing spurious correlations in NLI training data.

Mines data-constrained counterfactuals (existing examples with
similar-but-differently-labeled neighbors that the model finds hard or
ambiguous), and supports an understand / diagnose / refine loop that turns
them into new, model-challenging counterfactual examples with full
provenance.
"""

from .config import SuggestionConfig, WorkbenchConfig, load_config
from .corpus import (
    CheckpointPredictionSet,
    CorpusHandle,
    DataPoint,
    Label,
    LABELS,
    argmax_label,
    load_corpus,
    majority_fraction,
    majority_vote,
    save_corpus,
)
from .datamap import (
    DataMapCoords,
    Region,
    RegionConfig,
    classify_region,
    compute_coords,
    coords_from_series,
    mean_population_std,
)
from .drafts import CounterfactualDraft, DraftStore
from .estimate import (
    Estimator,
    HttpScorer,
    LocationEstimate,
    MockScorer,
    ScorerEndpoint,
    estimate_location,
    scorer_from_target,
)
from .evaluation import (
    EvaluationReport,
    SuiteItem,
    evaluate_suite,
    export_suite,
    load_suite,
    parse_suite,
)
from .mining import DccMiner, DccRecord, MinerConfig, mine_dccs
from .neighbors import Neighbor, NeighborIndex, NeighborSet, cosine_similarity
from .service import Workbench, create_app
from .suggest import (
    CONTEXT_WORDS,
    HttpSuggestionClient,
    MockSuggestionClient,
    PromptSpec,
    Suggestion,
    build_prompt,
    client_from_target,
    fetch_suggestions,
    parse_completion,
)

__version__ = "0.1.0"

__all__ = [
    "CheckpointPredictionSet",
    "CorpusHandle",
    "CounterfactualDraft",
    "CONTEXT_WORDS",
    "DataMapCoords",
    "DataPoint",
    "DccMiner",
    "DccRecord",
    "DraftStore",
    "Estimator",
    "EvaluationReport",
    "HttpScorer",
    "HttpSuggestionClient",
    "Label",
    "LABELS",
    "LocationEstimate",
    "MinerConfig",
    "MockScorer",
    "MockSuggestionClient",
    "Neighbor",
    "NeighborIndex",
    "NeighborSet",
    "PromptSpec",
    "Region",
    "RegionConfig",
    "ScorerEndpoint",
    "SuggestionConfig",
    "SuiteItem",
    "Suggestion",
    "Workbench",
    "WorkbenchConfig",
    "argmax_label",
    "build_prompt",
    "classify_region",
    "client_from_target",
    "compute_coords",
    "coords_from_series",
    "cosine_similarity",
    "create_app",
    "estimate_location",
    "evaluate_suite",
    "export_suite",
    "fetch_suggestions",
    "load_config",
    "load_corpus",
    "load_suite",
    "majority_fraction",
    "majority_vote",
    "mean_population_std",
    "mine_dccs",
    "parse_completion",
    "parse_suite",
    "save_corpus",
    "scorer_from_target",
]
