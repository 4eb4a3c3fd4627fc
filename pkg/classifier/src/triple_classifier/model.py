"""Fine-tuning and inference around a sequence-classification transformer.

The base model is any pretrained checkpoint directory or hub id (a
domain-specific BERT in production).  For offline environments
``build_tiny_base`` constructs a small randomly initialized BERT plus a
word-level vocabulary from the annotation text, which exercises the exact
same fine-tuning and scoring paths.
"""

from __future__ import annotations

import json
import re
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
import torch

from .data import AnnotatedTriple, ClassifierError, build_text

_TOKEN_RE = re.compile(r"[a-z0-9]+|[^\sa-z0-9]")


def _quiet_transformers() -> None:
    from transformers.utils import logging as hf_logging

    hf_logging.disable_progress_bar()


@dataclass
class Hyperparams:
    epochs: int = 4
    lr: float = 2e-5
    batch_size: int = 16
    max_length: int = 128
    val_fraction: float = 0.2
    seed: int = 0


@dataclass
class ValidationReport:
    precision: float
    recall: float
    f1: float
    accuracy: float
    n_train: int
    n_valid: int

    def to_dict(self) -> dict:
        return asdict(self)


def _texts_and_labels(annotations) -> tuple[list[str], np.ndarray]:
    texts = [build_text(a.subject, a.predicate, a.object, a.sentence) for a in annotations]
    labels = np.array([a.label for a in annotations], dtype=np.int64)
    return texts, labels


def build_tiny_base(annotations, outdir, hidden_size: int = 32) -> Path:
    """Write a small untrained BERT whose vocabulary covers the annotations."""
    from transformers import BertConfig, BertForSequenceClassification, BertTokenizer

    _quiet_transformers()
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    texts, _ = _texts_and_labels(annotations)
    seen: dict[str, None] = {}
    for text in texts:
        for token in _TOKEN_RE.findall(text.lower()):
            seen.setdefault(token, None)
    vocab = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]", *seen]
    vocab_path = outdir / "vocab.txt"
    vocab_path.write_text("\n".join(vocab) + "\n", encoding="utf-8")
    config = BertConfig(
        vocab_size=len(vocab),
        hidden_size=hidden_size,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=2 * hidden_size,
        max_position_embeddings=256,
        num_labels=2,
    )
    torch.manual_seed(0)
    model = BertForSequenceClassification(config)
    model.save_pretrained(outdir)
    BertTokenizer(str(vocab_path)).save_pretrained(outdir)
    return outdir


def finetune(
    annotations: list[AnnotatedTriple],
    base_model: str,
    outdir,
    hparams: Hyperparams | None = None,
) -> ValidationReport:
    """Fine-tune the base model on labeled triples and save the artifact.

    Requires both classes present.  Writes the classifier, its tokenizer, a
    validation report (precision/recall/F1/accuracy on the held-out split),
    and an environment manifest into ``outdir``.
    """
    from transformers import AutoModelForSequenceClassification, AutoTokenizer

    _quiet_transformers()
    hp = hparams or Hyperparams()
    if not annotations:
        raise ClassifierError("no annotations to fine-tune on")
    texts, labels = _texts_and_labels(annotations)
    if len(set(labels.tolist())) < 2:
        raise ClassifierError("annotations contain a single class; need both 0 and 1")

    rng = np.random.default_rng(hp.seed)
    torch.manual_seed(hp.seed)

    # Stratified holdout: a fixed fraction of each class.
    val_idx: list[int] = []
    for cls in (0, 1):
        members = np.flatnonzero(labels == cls)
        members = members[rng.permutation(members.size)]
        n_val = max(1, int(round(hp.val_fraction * members.size)))
        val_idx.extend(members[:n_val].tolist())
    val_mask = np.zeros(labels.size, dtype=bool)
    val_mask[val_idx] = True
    train_idx = np.flatnonzero(~val_mask)
    if train_idx.size == 0:
        raise ClassifierError("validation split leaves no training data")

    tokenizer = AutoTokenizer.from_pretrained(base_model)
    model = AutoModelForSequenceClassification.from_pretrained(base_model, num_labels=2)
    optimizer = torch.optim.AdamW(model.parameters(), lr=hp.lr)

    def encode(idx) -> dict:
        batch_texts = [texts[i] for i in idx]
        enc = tokenizer(
            batch_texts,
            padding=True,
            truncation=True,
            max_length=hp.max_length,
            return_tensors="pt",
        )
        enc["labels"] = torch.from_numpy(labels[idx])
        return enc

    model.train()
    for _ in range(hp.epochs):
        order = train_idx[rng.permutation(train_idx.size)]
        for start in range(0, order.size, hp.batch_size):
            batch = order[start : start + hp.batch_size]
            optimizer.zero_grad()
            out = model(**encode(batch))
            out.loss.backward()
            optimizer.step()

    val_order = np.sort(np.asarray(val_idx))
    predicted = _predict_labels(model, tokenizer, [texts[i] for i in val_order], hp)
    actual = labels[val_order]
    report = _classification_report(actual, predicted, train_idx.size, val_order.size)

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    model.save_pretrained(outdir)
    tokenizer.save_pretrained(outdir)
    (outdir / "validation_report.json").write_text(
        json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    (outdir / "environment.json").write_text(
        json.dumps(_environment(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return report


def _classification_report(actual, predicted, n_train, n_valid) -> ValidationReport:
    tp = int(((predicted == 1) & (actual == 1)).sum())
    fp = int(((predicted == 1) & (actual == 0)).sum())
    fn = int(((predicted == 0) & (actual == 1)).sum())
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    accuracy = float((predicted == actual).mean())
    return ValidationReport(precision, recall, f1, accuracy, n_train, n_valid)


def _predict_labels(model, tokenizer, texts, hp) -> np.ndarray:
    probs = _predict_probs(model, tokenizer, texts, hp.batch_size, hp.max_length)
    return (probs >= 0.5).astype(np.int64)


def _predict_probs(model, tokenizer, texts, batch_size, max_length) -> np.ndarray:
    model.eval()
    chunks = []
    with torch.no_grad():
        for start in range(0, len(texts), batch_size):
            enc = tokenizer(
                texts[start : start + batch_size],
                padding=True,
                truncation=True,
                max_length=max_length,
                return_tensors="pt",
            )
            logits = model(**enc).logits
            chunks.append(torch.softmax(logits, dim=1)[:, 1].numpy())
    return np.concatenate(chunks) if chunks else np.empty(0)


def predict_scores(model_dir, texts, batch_size: int = 32, max_length: int = 128) -> np.ndarray:
    """P(correct) in [0, 1] per text; deterministic for a frozen artifact."""
    from transformers import AutoModelForSequenceClassification, AutoTokenizer

    _quiet_transformers()
    # Single-threaded inference keeps floating-point reductions stable, so
    # repeated runs over the same file are byte-identical.
    n_threads = torch.get_num_threads()
    torch.set_num_threads(1)
    try:
        tokenizer = AutoTokenizer.from_pretrained(model_dir)
        model = AutoModelForSequenceClassification.from_pretrained(model_dir)
        return _predict_probs(model, tokenizer, texts, batch_size, max_length)
    finally:
        torch.set_num_threads(n_threads)


def _environment() -> dict:
    import transformers

    return {
        "torch": torch.__version__,
        "transformers": transformers.__version__,
        "numpy": np.__version__,
    }
