"""Embedding models, negative sampling, and the SGD training loop."""

from .models import (
    loss_and_grad,
    score,
    score_all_heads,
    score_all_tails,
    score_batch,
)
from .sampling import corrupt_batch, sample_negative
from .store import MODELS, EmbeddingStore, checkpoint_digest
from .training import TrainConfig, train

__all__ = [
    "MODELS",
    "EmbeddingStore",
    "TrainConfig",
    "checkpoint_digest",
    "corrupt_batch",
    "loss_and_grad",
    "sample_negative",
    "score",
    "score_all_heads",
    "score_all_tails",
    "score_batch",
    "train",
]
