"""scikit-learn style wrappers around the classifier and the oracle.

Nothing is learned: ``fit`` only validates its input and records the label
set, so both estimators drop into pipelines, ``cross_val_score`` or
``GridSearchCV`` over their parameters.  Inputs are 1-d sequences of
formulas (text or :class:`~pal.formula.Formula`).

>>> clf = SuccessClassifier().fit(["K_1 L_2 p"])
>>> list(clf.predict(["K_1 L_2 p", "L_1 K_2 p"]))
['Unsuccessful', 'Successful']
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from pal.classify import RuleSet, Status, Verdict, classify
from pal.formula import Formula, agents
from pal.oracle import SearchBounds, find_success_counterexample
from pal.parser import parse

LABELS = np.array([s.value for s in Status])


def _formulas(X):
    if isinstance(X, (str, Formula)):
        raise ValueError("expected a 1-d sequence of formulas, got a single formula")
    arr = np.asarray(X, dtype=object)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-d sequence of formulas, got shape {arr.shape}")
    return [x if isinstance(x, Formula) else parse(str(x)) for x in arr]


class SuccessClassifier(ClassifierMixin, BaseEstimator):
    """Rule-based success classifier.

    Parameters
    ----------
    rules : {"validated", "paper"}
        ``paper`` applies each published rule as stated; ``validated`` turns
        the applications the oracle refutes into ``Unknown``.
    """

    def __init__(self, rules: str = "validated"):
        self.rules = rules

    def fit(self, X, y=None):
        RuleSet(self.rules)
        _formulas(X)
        self.classes_ = LABELS.copy()
        return self

    def verdicts(self, X) -> list[Verdict]:
        check_is_fitted(self, "classes_")
        rs = RuleSet(self.rules)
        return [classify(f, rs) for f in _formulas(X)]

    def predict(self, X):
        return np.array([v.status.value for v in self.verdicts(X)], dtype=object)


class OracleClassifier(ClassifierMixin, BaseEstimator):
    """Labels from bounded counter-model search.

    ``Unsuccessful`` when a counter-model turns up, else ``Successful``.  The
    latter only means none exists in the searched family.
    """

    def __init__(self, max_worlds: int = 4, strategy: str = "exhaustive", samples: int = 1000, seed: int = 0):
        self.max_worlds = max_worlds
        self.strategy = strategy
        self.samples = samples
        self.seed = seed

    def fit(self, X, y=None):
        SearchBounds(self.max_worlds, (), self.strategy, self.samples, self.seed)
        _formulas(X)
        self.classes_ = LABELS.copy()
        return self

    def predict(self, X):
        check_is_fitted(self, "classes_")
        out = []
        for f in _formulas(X):
            ags = tuple(sorted(agents(f))) or ("a",)
            bounds = SearchBounds(self.max_worlds, ags, self.strategy, self.samples, self.seed)
            found = find_success_counterexample(f, bounds).found
            out.append(Status.UNSUCCESSFUL.value if found else Status.SUCCESSFUL.value)
        return np.array(out, dtype=object)
