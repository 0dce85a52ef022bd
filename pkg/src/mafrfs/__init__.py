"""Margin-aware fuzzy-rough feature selection.

Greedy feature ranking driven by fuzzy-rough uncertainty measures, with an
optional margin-aware second selection stage, a KNN cross-validation
evaluation harness, and Friedman/Nemenyi comparison statistics.
"""

__version__ = "0.1.0"
