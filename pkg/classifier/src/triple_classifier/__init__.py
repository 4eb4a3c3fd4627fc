"""Transformer classifier for literature-extracted triples.

Fine-tunes a sequence classifier on labeled (subject, predicate, object,
sentence) annotations and scores predication files into the confidence TSV
consumed by the litkg pipeline's --scores flag.
"""

__version__ = "0.1.0"
