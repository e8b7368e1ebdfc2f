"""Model selection between feature scenarios on a train/test split of queries."""
import numpy as np

from .._errors import ParameterError
from .model import objective, objective_and_gradient
from .optim import adaptive_gd


def _fit(queries, eps, max_iter):
    x0 = np.zeros(queries[0].model.dim)
    x, _ = adaptive_gd(lambda z: objective_and_gradient(queries, z), x0, eps,
                       max_iter=max_iter, strict=False)
    return x


def evaluate_scenarios(train, test, scenarios, eps=1e-5, max_iter=2000):
    """Test-set objective of each scenario after training on ``train``.

    A scenario maps a raw item (whatever ``train``/``test`` hold) to a
    :class:`LabeledQuery`, e.g. selecting which features the model sees.
    """
    train, test = list(train), list(test)
    if not train or not test:
        raise ParameterError("train and test splits must both be non-empty")
    if not scenarios:
        raise ParameterError("need at least one scenario")
    scores = []
    for make in scenarios:
        tr = [make(item) for item in train]
        te = [make(item) for item in test]
        scores.append(objective(te, _fit(tr, eps, max_iter)))
    return scores


def scenario_select(train, test, scenarios, eps=1e-5, max_iter=2000):
    """Index of the scenario with the smallest test objective; ties go to the lowest index."""
    scores = evaluate_scenarios(train, test, scenarios, eps, max_iter)
    return int(np.argmin(scores)), scores
