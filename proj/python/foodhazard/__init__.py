"""Minority-class text augmentation pipeline for food hazard classification."""

from foodhazard._core import (
    CATEGORIES,
    FoodHazardError,
    SynonymDb,
    TableInsertionProvider,
    TextClassifier,
    TfidfModel,
    __version__,
    augment_records,
    build_plan,
    clean_text,
    compute_label_space,
    contextual_insert,
    f1_macro,
    grouped_confusion,
    kruskal_wallis_2group,
    random_swap,
    run_search,
    synonym_replace,
    task_score,
)

__all__ = [
    "CATEGORIES",
    "FoodHazardError",
    "SynonymDb",
    "TableInsertionProvider",
    "TextClassifier",
    "TfidfModel",
    "__version__",
    "augment_records",
    "build_plan",
    "clean_text",
    "compute_label_space",
    "contextual_insert",
    "f1_macro",
    "grouped_confusion",
    "kruskal_wallis_2group",
    "random_swap",
    "run_search",
    "synonym_replace",
    "task_score",
]
