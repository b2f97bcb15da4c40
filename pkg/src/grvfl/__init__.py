"""Graph-regularized random vector functional link (RVFL) classifiers.

Single-view RVFL baselines plus a coupled two-view variant whose output
weights come from one block-linear solve that embeds class-aware graph
structure of both views. Includes dataset utilities (CSV ingestion, PCA
view synthesis, splitting), an exhaustive cross-validation tuner, and
rank-based model-comparison statistics (Friedman, Nemenyi, win-tie-loss).
"""

from .data import (
    DataError,
    LabeledDataset,
    MultiViewDataset,
    OneHotTargets,
    PCAView,
    Standardizer,
    kfold,
    kfold_indices,
    load_csv,
    one_hot,
    pca_view,
    split_train_test,
    standardize,
    train_test_indices,
)
from .feature_map import (
    ACTIVATIONS,
    EnhancedMatrix,
    FeatureMapParams,
    activation_apply,
    derived_seed,
    enhance,
    init_feature_map,
)
from .graph import (
    EmbeddingMatrix,
    GraphLaplacians,
    LfdaGraphs,
    SingularPenaltyError,
    embedding_matrix,
    laplacians,
    lfda_weights,
    pairwise_affinity,
)
from .models import (
    GraphMVRVFLClassifier,
    HyperParams,
    RVFLClassifier,
    labels_from_scores,
    SchemaError,
    SingularSystemError,
    load_model,
    model_from_dict,
    model_to_dict,
    objective_and_gradient,
    ridge_weights_dual,
    ridge_weights_primal,
    save_model,
    solve_coupled_system,
)
from .evaluation import (
    AccuracyTable,
    HyperGrid,
    WinTieLoss,
    accuracy,
    adjusted_wins,
    friedman,
    grid_search,
    nemenyi_cd,
    per_dataset_ranks,
    q_alpha_05,
    rank_models,
    rvfl_grid_search,
    win_threshold,
    win_tie_loss,
)

__version__ = "0.1.0"

__all__ = [
    "ACTIVATIONS",
    "AccuracyTable",
    "DataError",
    "EmbeddingMatrix",
    "EnhancedMatrix",
    "FeatureMapParams",
    "GraphLaplacians",
    "GraphMVRVFLClassifier",
    "HyperGrid",
    "HyperParams",
    "LabeledDataset",
    "LfdaGraphs",
    "MultiViewDataset",
    "OneHotTargets",
    "PCAView",
    "RVFLClassifier",
    "SchemaError",
    "SingularPenaltyError",
    "SingularSystemError",
    "Standardizer",
    "WinTieLoss",
    "accuracy",
    "activation_apply",
    "adjusted_wins",
    "derived_seed",
    "embedding_matrix",
    "enhance",
    "friedman",
    "grid_search",
    "init_feature_map",
    "kfold",
    "kfold_indices",
    "labels_from_scores",
    "laplacians",
    "lfda_weights",
    "load_csv",
    "load_model",
    "model_from_dict",
    "model_to_dict",
    "nemenyi_cd",
    "objective_and_gradient",
    "one_hot",
    "pairwise_affinity",
    "pca_view",
    "per_dataset_ranks",
    "q_alpha_05",
    "rank_models",
    "ridge_weights_dual",
    "ridge_weights_primal",
    "rvfl_grid_search",
    "save_model",
    "solve_coupled_system",
    "split_train_test",
    "standardize",
    "train_test_indices",
    "win_threshold",
    "win_tie_loss",
    "__version__",
]
