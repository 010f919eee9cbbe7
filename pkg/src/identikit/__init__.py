"""identikit: classify social-media users by identity from profile metadata.

Library surface is re-exported here; the CLI lives in identikit.cli.
"""

from .analysis import (
    FeatureRanking,
    KSResult,
    chi_square_rank,
    content_practice_report,
    ecdf_points,
    ks_two_sample,
    label_distribution,
)
from .embedding import (
    EmbeddingModel,
    SkipgramParams,
    bio_score,
    preprocess_bio,
    train_skipgram,
)
from .errors import ToolkitError
from .evaluation import (
    EvalReport,
    MetricSet,
    confusion_matrix,
    cross_validate,
    metrics_from_confusion,
    stratified_folds,
)
from .features import (
    FEATURE_NAMES,
    FeatureCategory,
    N_FEATURES,
    activeness,
    extract_features,
    favorability,
    informality_counts,
    project_category,
    sociability,
    survivability,
)
from .ingestion import (
    KeywordSet,
    StreamCounters,
    TweetRecord,
    UserProfile,
    extract_user_profiles,
    load_keywords,
    matches_keywords,
    parse_tweet_line,
    stream_filter,
    tokenize_text,
)
from .learners import (
    BoostedModel,
    GBDTParams,
    fit_gbdt_binary,
    fit_gbdt_softmax,
    fit_tree,
    predict_margin,
    predict_proba,
)
from .modelio import (
    ModelBundle,
    load_embedding,
    load_model,
    save_embedding,
    save_model,
)
from .multiclass import (
    CLASS_LABELS,
    Framework,
    IdentityClass,
    MulticlassModel,
    predict,
    predict_batch,
    train_framework,
)
from .synth import SynthSpec, default_spec, generate

__version__ = "0.1.0"

__all__ = [
    "BoostedModel",
    "CLASS_LABELS",
    "EmbeddingModel",
    "EvalReport",
    "FEATURE_NAMES",
    "FeatureCategory",
    "FeatureRanking",
    "Framework",
    "GBDTParams",
    "IdentityClass",
    "KSResult",
    "KeywordSet",
    "MetricSet",
    "ModelBundle",
    "MulticlassModel",
    "N_FEATURES",
    "SkipgramParams",
    "StreamCounters",
    "SynthSpec",
    "ToolkitError",
    "TweetRecord",
    "UserProfile",
    "activeness",
    "bio_score",
    "chi_square_rank",
    "confusion_matrix",
    "content_practice_report",
    "cross_validate",
    "default_spec",
    "ecdf_points",
    "extract_features",
    "extract_user_profiles",
    "favorability",
    "fit_gbdt_binary",
    "fit_gbdt_softmax",
    "fit_tree",
    "generate",
    "informality_counts",
    "ks_two_sample",
    "label_distribution",
    "load_embedding",
    "load_keywords",
    "load_model",
    "matches_keywords",
    "metrics_from_confusion",
    "parse_tweet_line",
    "predict",
    "predict_batch",
    "predict_margin",
    "predict_proba",
    "preprocess_bio",
    "project_category",
    "save_embedding",
    "save_model",
    "sociability",
    "stratified_folds",
    "stream_filter",
    "survivability",
    "tokenize_text",
    "train_framework",
    "train_skipgram",
]
