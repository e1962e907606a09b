import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.metrics import make_scorer
from sklearn.model_selection import GridSearchCV, KFold

from pal.estimator import OracleClassifier, SuccessClassifier
from pal.parser import parse

FORMULAS = ["K_1 L_2 p", "L_1 K_2 p", "K_1 K_2 L_1 p", "p & L_1 q", "K_1 K_2 p", "p & ~K_1 p"]


def test_predict_strings():
    clf = SuccessClassifier().fit(FORMULAS)
    assert list(clf.predict(FORMULAS)) == [
        "Unsuccessful",
        "Successful",
        "Unknown",
        "Unsuccessful",
        "Successful",
        "Unsuccessful",
    ]


def test_paper_rules_param():
    clf = SuccessClassifier(rules="paper").fit(FORMULAS)
    assert clf.predict(["K_1 K_2 L_1 p"])[0] == "Unsuccessful"
    assert clf.get_params() == {"rules": "paper"}


def test_accepts_ast_and_column_vector():
    clf = SuccessClassifier().fit([parse("p")])
    col = np.array(FORMULAS[:2], dtype=object).reshape(-1, 1)
    assert list(clf.predict(col)) == ["Unsuccessful", "Successful"]


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        SuccessClassifier().fit("K_1 p")
    with pytest.raises(ValueError):
        SuccessClassifier(rules="other").fit(FORMULAS)


def test_not_fitted():
    with pytest.raises(NotFittedError):
        SuccessClassifier().predict(FORMULAS)


def test_clone_and_verdicts():
    clf = clone(SuccessClassifier(rules="paper")).fit(FORMULAS)
    (v,) = clf.verdicts(["K_1 L_2 p"])
    assert v.rule.id == "KLSimple"


def test_oracle_labels_and_score():
    X = ["K_1 L_2 p", "L_1 K_2 p", "K_1 K_2 p", "p & L_1 q"]
    oracle = OracleClassifier(max_worlds=4).fit(X)
    y = oracle.predict(X)
    assert list(y) == ["Unsuccessful", "Successful", "Successful", "Unsuccessful"]
    assert SuccessClassifier().fit(X).score(X, y) == 1.0


def _consistent(y_true, y_pred):
    """Fraction of predictions that are Unknown or match the oracle."""
    return float(np.mean((y_pred == "Unknown") | (y_pred == y_true)))


def test_grid_search_over_rules():
    X = ["K_1 K_2 L_1 p", "K_2 K_1 L_2 p", "L_1 K_2 p", "K_1 L_2 p"]
    y = OracleClassifier(max_worlds=4).fit(X).predict(X)
    gs = GridSearchCV(
        SuccessClassifier(),
        {"rules": ["paper", "validated"]},
        scoring=make_scorer(_consistent),
        cv=KFold(2),
    ).fit(X, y)
    # paper mode wrongly calls the first two Unsuccessful
    assert gs.best_params_ == {"rules": "validated"}
    assert gs.best_score_ == 1.0
