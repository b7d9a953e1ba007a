"""
Dataset generators. Noise is drawn from PCG64 as 52-bit integers m, mapped
to u = (m + 0.5) / 2^52 in (0, 1) and pushed through the inverse normal CDF,
so a seed gives the same noise on every platform.
"""
import csv
import logging
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.special import ndtri

from core.enum.design import Design
from core.exceptions.domain_exceptions import InsufficientData, InvalidConfig, MissingFile
from core.value_objects.dataset import Dataset
from core.value_objects.ground_truth import GroundTruth

logger = logging.getLogger(__name__)

_MANTISSA = 2 ** 52


def gaussian_from(rng: np.random.Generator, size: int) -> np.ndarray:
    m = rng.integers(0, _MANTISSA, size=size, dtype=np.uint64)
    u = (m.astype(np.float64) + 0.5) / _MANTISSA
    return ndtri(u)


def standard_normal(seed: int, size: int) -> np.ndarray:
    return gaussian_from(np.random.Generator(np.random.PCG64(seed)), size)


def _labelled(xs: np.ndarray, truth: GroundTruth, sigma: float, seed: int, x_max: float) -> Dataset:
    if sigma < 0:
        raise InvalidConfig(f"sigma must be non-negative, got {sigma!r}.")
    noises = sigma * standard_normal(seed, xs.size)
    ys = truth(xs) + noises
    return Dataset(xs, ys, x_max, ground_truth=truth, sigma=sigma, noises=noises)


def gen_hat_dataset(n: int, sigma: float, seed: int, x_max: float = 0.5) -> Dataset:
    """n equispaced points on [-x_max, x_max] labelled by the hat function plus noise."""
    if n < 2:
        raise InsufficientData(n, 2)
    xs = np.linspace(-x_max, x_max, n)
    return _labelled(xs, GroundTruth.HAT, sigma, seed, x_max)


def gen_counterexample(n: int, sigma: float, seed: int, x_max: float = 0.5) -> Dataset:
    """x_i = (2i - (n + 1)) x_max / (n - 1), i = 1..n, with pure-noise labels."""
    if n < 2:
        raise InsufficientData(n, 2)
    i = np.arange(1, n + 1, dtype=np.float64)
    xs = (2.0 * i - (n + 1)) * x_max / (n - 1)
    return _labelled(xs, GroundTruth.ZERO, sigma, seed, x_max)


def load_custom_dataset(path: str, x_max: Optional[float] = None, sigma: Optional[float] = None) -> Dataset:
    """
    Reads a CSV with columns x,y (header optional). Points are sorted by x;
    x_max defaults to max |x|. No ground truth is attached.
    """
    source = Path(path)
    if not source.is_file():
        raise MissingFile(str(source))
    rows = []
    with source.open(newline="") as handle:
        for line_no, row in enumerate(csv.reader(handle), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            try:
                rows.append((float(row[0]), float(row[1])))
            except (ValueError, IndexError):
                if line_no == 1:
                    continue
                raise InvalidConfig(f"{source}:{line_no}: expected two numeric columns x,y.")
    if len(rows) < 2:
        raise InsufficientData(len(rows), 2)
    table = np.array(sorted(rows))
    xs, ys = table[:, 0], table[:, 1]
    bound = float(np.max(np.abs(xs))) if x_max is None else float(x_max)
    logger.info("loaded %d points from %s", xs.size, source)
    return Dataset(xs, ys, bound, sigma=sigma)


def build_dataset(
    design: Design,
    n: int,
    sigma: float,
    seed: int,
    x_max: float,
    path: Optional[str] = None,
) -> Dataset:
    if design is Design.HAT:
        return gen_hat_dataset(n, sigma, seed, x_max)
    if design is Design.COUNTEREXAMPLE:
        return gen_counterexample(n, sigma, seed, x_max)
    if path is None:
        raise InvalidConfig("Design custom_file needs data_path.")
    return load_custom_dataset(path, x_max, sigma)
