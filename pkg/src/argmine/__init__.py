"""Argument mining for issue-tracker discussions.

Segments issue comments into quotes, extracts lexical and conversational
features, trains linear SVM and Complement Naive Bayes classifiers under
nested stratified cross-validation, and exports annotated threads for an
interactive viewer.
"""

from __future__ import annotations

__version__ = "0.1.0"
