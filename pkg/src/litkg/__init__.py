"""Literature knowledge-graph pipeline.

Builds a filtered knowledge graph from subject-predicate-object
predications extracted from biomedical literature, trains translational
and bilinear graph embeddings, evaluates them with time-sliced link
prediction, and ranks candidate entities against disease targets.
"""

__version__ = "0.1.0"
