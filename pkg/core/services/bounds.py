"""
Closed-form right-hand sides of the flatness-to-TV bounds and the order-level
rate targets. Every bound uses X = max(x_max, 1).
"""
import math

from core.exceptions.domain_exceptions import InvalidConfig
from core.value_objects.curvature import Curvature


def _scale(x_max: float) -> float:
    return max(float(x_max), 1.0)


def _check_delta(delta: float) -> None:
    if not 0.0 < delta < 1.0:
        raise InvalidConfig(f"delta must lie in (0, 1), got {delta!r}.")


def stability_tv_bound(curvature: Curvature, loss_value: float, x_max: float) -> float:
    """lambda/2 - 1/2 + X * sqrt(2 L), lambda = 2/eta in eta mode."""
    return curvature.lambda_value / 2.0 - 0.5 + _scale(x_max) * math.sqrt(2.0 * max(loss_value, 0.0))


def noise_term(sigma: float, x_max: float, k: int, n: int, delta: float) -> float:
    """sigma * X * min{4 sqrt(log(4n/delta)), 14 sqrt(k log(13n/delta) / n)}."""
    _check_delta(delta)
    if sigma < 0:
        raise InvalidConfig(f"sigma must be non-negative, got {sigma!r}.")
    dense = 4.0 * math.sqrt(math.log(4.0 * n / delta))
    sparse = 14.0 * math.sqrt(k * math.log(13.0 * n / delta) / n)
    return sigma * _scale(x_max) * min(dense, sparse)


def noisy_tv_bound(
    curvature: Curvature,
    mse_value: float,
    sigma: float,
    x_max: float,
    k: int,
    n: int,
    delta: float,
) -> float:
    """lambda/2 - 1/2 + noise_term + 2 X sqrt(MSE); holds with probability 1 - delta."""
    return (
        curvature.lambda_value / 2.0
        - 0.5
        + noise_term(sigma, x_max, k, n, delta)
        + 2.0 * _scale(x_max) * math.sqrt(max(mse_value, 0.0))
    )


def crude_mse_bound(sigma: float, n: int, delta: float) -> float:
    """MSE of any optimized fit is at most 16 sigma^2 log(2n/delta) w.p. 1 - delta."""
    _check_delta(delta)
    return 16.0 * sigma * sigma * math.log(2.0 * n / delta)


def high_probability_tv_bound(curvature: Curvature, sigma: float, x_max: float, k: int, n: int, delta: float) -> float:
    return noisy_tv_bound(curvature, crude_mse_bound(sigma, n, delta), sigma, x_max, k, n, delta)


def underparameterized_mse_rate(sigma: float, k: int, n: int, rho: float, x_max: float, delta: float) -> float:
    """sigma^2 k log(X k n rho / delta) / n with unit constant; the log is floored at 1."""
    _check_delta(delta)
    argument = _scale(x_max) * k * n * max(rho, 0.0) / delta
    return sigma * sigma * k * max(math.log(argument), 1.0) / n if argument > 0 else sigma * sigma * k / n


def generalization_gap_rate(radius: float, eta: float, x_max: float, n_in: int) -> float:
    """D^(9/5) [x_max (1/eta - 1/2 + 2 x_max D) / n_I^2]^(1/5) with unit constant."""
    if n_in < 1:
        raise InvalidConfig(f"n_I must be >= 1, got {n_in!r}.")
    inner = x_max * (1.0 / eta - 0.5 + 2.0 * x_max * radius) / (n_in * n_in)
    return radius ** 1.8 * max(inner, 0.0) ** 0.2


def mse_rate_target(sigma: float, n_in: int, eta: float, x_max: float, underparameterized: bool = False) -> float:
    """
    (sigma^2 / n_I)^(4/5) (x_max/eta + sigma x_max^2)^(2/5), unit constant.
    The under-parameterized variant drops the sigma x_max^2 term.
    """
    if n_in < 1:
        raise InvalidConfig(f"n_I must be >= 1, got {n_in!r}.")
    complexity = x_max / eta if underparameterized else x_max / eta + sigma * x_max * x_max
    return (sigma * sigma / n_in) ** 0.8 * complexity ** 0.4


def uniform_interval_guarantee(n: int, delta: float) -> bool:
    """For n uniform points on [-1, 1], I = [-2/3, 2/3] with c = 1/4320 is valid w.p. 1 - delta."""
    _check_delta(delta)
    return n >= 96.0 * math.log(48.0 / delta)
