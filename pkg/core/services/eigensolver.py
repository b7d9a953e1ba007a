"""
Largest eigenvalue of a symmetric operator.

The dense path symmetrizes the matrix and asks LAPACK for the top
eigenpair only. The power path runs on A + mu*I with mu an upper bound of
||A||, so the dominant eigenvalue of the shifted operator is the top
eigenvalue of A even when A has large negative eigenvalues.
"""
import logging
from typing import Callable, Optional, Tuple, Union

import numpy as np
import scipy.linalg

from core.enum.spectrum_method import SpectrumMethod
from core.exceptions.domain_exceptions import InvalidConfig, NoConvergence

logger = logging.getLogger(__name__)

DENSE_MAX_DIM = 2000
POWER_TOL = 1e-10
POWER_MAX_ITERS = 50000

Operator = Union[np.ndarray, Callable[[np.ndarray], np.ndarray]]


def resolve_method(method: SpectrumMethod, dim: int) -> SpectrumMethod:
    if method is SpectrumMethod.AUTO:
        return SpectrumMethod.DENSE if dim <= DENSE_MAX_DIM else SpectrumMethod.POWER
    return method


def _canonical_sign(vec: np.ndarray) -> np.ndarray:
    pivot = int(np.argmax(np.abs(vec)))
    return -vec if vec[pivot] < 0 else vec


def _as_matrix(operator: Operator, dim: int) -> np.ndarray:
    if callable(operator):
        return np.column_stack([operator(col) for col in np.eye(dim)])
    matrix = np.asarray(operator, dtype=np.float64)
    if matrix.shape != (dim, dim):
        raise InvalidConfig(f"Operator has shape {matrix.shape}, expected ({dim}, {dim}).")
    return matrix


def _dense_top(matrix: np.ndarray) -> Tuple[float, np.ndarray]:
    sym = 0.5 * (matrix + matrix.T)
    dim = sym.shape[0]
    values, vectors = scipy.linalg.eigh(sym, subset_by_index=[dim - 1, dim - 1])
    return float(values[0]), _canonical_sign(vectors[:, 0])


def _power_top(
    apply: Callable[[np.ndarray], np.ndarray],
    dim: int,
    shift: float,
    tol: float,
    max_iters: int,
    seed: int,
) -> Tuple[float, np.ndarray]:
    rng = np.random.Generator(np.random.PCG64(seed))
    vec = rng.standard_normal(dim)
    vec /= np.linalg.norm(vec)
    rayleigh = float("nan")
    residual = float("inf")
    for iteration in range(1, max_iters + 1):
        image = apply(vec)
        rayleigh = float(vec @ image)
        residual = float(np.linalg.norm(image - rayleigh * vec))
        if residual <= tol * (1.0 + abs(rayleigh)):
            logger.debug("power iteration converged in %d steps (rho=%r)", iteration, rayleigh)
            return rayleigh, _canonical_sign(vec)
        shifted = image + shift * vec
        norm = np.linalg.norm(shifted)
        if norm == 0.0:
            # vec lies in the kernel of A + mu*I, so rho = -mu is already exact
            return rayleigh, _canonical_sign(vec)
        vec = shifted / norm
    raise NoConvergence(rayleigh, residual, max_iters)


def lambda_max(
    operator: Operator,
    dim: int,
    method: SpectrumMethod = SpectrumMethod.AUTO,
    tol: float = POWER_TOL,
    max_iters: int = POWER_MAX_ITERS,
    norm_bound: Optional[float] = None,
    seed: int = 0,
) -> Tuple[float, np.ndarray]:
    """
    Top eigenpair of a symmetric operator.

    Args:
        operator: dense (dim, dim) matrix or matvec callable.
        dim: operator dimension.
        method: dense, power, or auto (dense up to dimension 2000).
        tol: power-method stop rule ||Av - rho v|| <= tol * (1 + |rho|).
        max_iters: power-method iteration cap.
        norm_bound: upper bound of ||A||; required for a callable under power.
        seed: start vector seed of the power method.

    Returns:
        (value, unit eigenvector).

    Raises:
        NoConvergence: power method only.
    """
    method = resolve_method(method, dim)
    if method is SpectrumMethod.DENSE:
        return _dense_top(_as_matrix(operator, dim))

    if callable(operator):
        if norm_bound is None:
            raise InvalidConfig("Power method on a matrix-free operator needs norm_bound.")
        apply = operator
        shift = 1.0 + float(norm_bound)
    else:
        matrix = _as_matrix(operator, dim)
        sym = 0.5 * (matrix + matrix.T)
        apply = sym.__matmul__
        bound = float(np.max(np.sum(np.abs(sym), axis=1))) if norm_bound is None else norm_bound
        shift = 1.0 + bound
    return _power_top(apply, dim, shift, tol, max_iters, seed)
