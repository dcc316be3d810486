"""scimap: bibliometric analysis and science mapping over Web of Science exports.

The package ingests tagged plaintext or BibTeX-flavored export files into an
immutable document corpus and computes descriptive statistics, citation
amortization, distribution laws, term statistics, and the co-occurrence /
co-citation / collaboration networks used in science mapping.  A randomized
minimum feedback arc set solver with confidence reporting ships alongside,
together with an exhaustive oracle and a calibration harness.
"""

ENGINE_VERSION = "0.1.0"

__all__ = ["ENGINE_VERSION"]
