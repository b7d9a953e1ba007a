"""Statistical quality of a fit against the ground truth."""
from typing import Optional, Tuple

import numpy as np

from core.exceptions.domain_exceptions import EmptyInterval, InvalidConfig, MissingGroundTruth
from core.services import relu_net
from core.services.datasets import gaussian_from
from core.value_objects.dataset import Dataset
from core.value_objects.net_params import NetParams

Interval = Tuple[float, float]

OPTIMIZED_TOL = 1e-12


def not_worse(own: float, reference: float) -> bool:
    """own <= reference up to rounding of the two residual sums."""
    return own <= reference + OPTIMIZED_TOL * (1.0 + abs(reference))


def mse(params: NetParams, data: Dataset, interval: Optional[Interval] = None) -> float:
    """
    (1/n) sum (f(x_i) - f0(x_i))^2, restricted to points in the closed interval
    when one is given (denominator n_I).

    Raises:
        MissingGroundTruth: dataset has no f0.
        EmptyInterval: no point falls inside the interval.
    """
    truth = data.f0_values()
    fitted = relu_net.forward_batch(params, data.xs)
    if interval is None:
        return float(np.mean((fitted - truth) ** 2))
    inside = data.mask(*interval)
    return float(np.mean((fitted[inside] - truth[inside]) ** 2))


def generalization_gap(params: NetParams, data: Dataset, interval: Interval, test_seed: int, m: int) -> float:
    """
    |test error - train error| on the interval, both plain mean squared errors.
    Test inputs are uniform on the interval and test labels are f0 plus fresh
    noise of the dataset's sigma.
    """
    if m < 1:
        raise InvalidConfig(f"Test sample size must be >= 1, got {m!r}.")
    lo, hi = interval
    if not lo < hi:
        raise EmptyInterval(lo, hi)
    truth = data.ground_truth
    if truth is None:
        raise MissingGroundTruth()
    sigma = data.require_sigma()
    inside = data.mask(lo, hi)

    rng = np.random.Generator(np.random.PCG64(test_seed))
    test_x = rng.uniform(lo, hi, m)
    test_y = truth(test_x) + sigma * gaussian_from(rng, m)
    test_error = float(np.mean((relu_net.forward_batch(params, test_x) - test_y) ** 2))

    fitted = relu_net.forward_batch(params, data.xs[inside])
    train_error = float(np.mean((fitted - data.ys[inside]) ** 2))
    return abs(test_error - train_error)


def optimized_over_interval(params: NetParams, data: Dataset, lo: float, hi: float) -> bool:
    """Training error on the interval is no larger than that of f0 on the same labels."""
    inside = data.mask(lo, hi)
    truth = data.f0_values()
    fitted = relu_net.forward_batch(params, data.xs)
    own = float(np.mean((fitted[inside] - data.ys[inside]) ** 2))
    reference = float(np.mean((truth[inside] - data.ys[inside]) ** 2))
    return not_worse(own, reference)


def grid_risk(params: NetParams, data: Dataset, m: int) -> float:
    """Mean of (f - f0)^2 over m evenly spaced points spanning [min x, max x]."""
    if m < 2:
        raise InvalidConfig(f"Risk grid needs at least 2 points, got {m!r}.")
    if data.ground_truth is None:
        raise MissingGroundTruth()
    grid = np.linspace(data.xs[0], data.xs[-1], m)
    return float(np.mean((relu_net.forward_batch(params, grid) - data.ground_truth(grid)) ** 2))
