"""Unconstrained benchmark functions.

Classic functions plus shifted/rotated variants whose shift vector and
orthogonal matrix are generated from a fixed seed per ``(name, D)``.
"""

from __future__ import annotations

import functools
import math
import zlib

import numpy as np


def sphere(x):
    x = np.asarray(x, dtype=float)
    return float(np.dot(x, x))


def rosenbrock(x):
    x = np.asarray(x, dtype=float)
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2))


def rastrigin(x):
    x = np.asarray(x, dtype=float)
    return float(10.0 * x.size + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x)))


def ackley(x):
    x = np.asarray(x, dtype=float)
    a = -20.0 * math.exp(-0.2 * math.sqrt(np.dot(x, x) / x.size))
    b = -math.exp(float(np.mean(np.cos(2.0 * np.pi * x))))
    return a + b + 20.0 + math.e


def griewank(x):
    x = np.asarray(x, dtype=float)
    i = np.arange(1, x.size + 1)
    return float(1.0 + np.dot(x, x) / 4000.0 - np.prod(np.cos(x / np.sqrt(i))))


def schwefel_2_26(x):
    x = np.asarray(x, dtype=float)
    return float(418.9828872724339 * x.size - np.sum(x * np.sin(np.sqrt(np.abs(x)))))


# name -> (function, (lower, upper), minimum dimension)
CLASSIC = {
    "sphere": (sphere, (-100.0, 100.0), 1),
    "rosenbrock": (rosenbrock, (-30.0, 30.0), 2),
    "rastrigin": (rastrigin, (-5.12, 5.12), 1),
    "ackley": (ackley, (-32.768, 32.768), 1),
    "griewank": (griewank, (-600.0, 600.0), 1),
    "schwefel_2_26": (schwefel_2_26, (-500.0, 500.0), 1),
}

SHIFTED_ROTATED = {
    "shifted_rotated_rastrigin": rastrigin,
    "shifted_rotated_ackley": ackley,
}
SHIFTED_ROTATED_BOUNDS = (-100.0, 100.0)
SHIFT_RANGE = 80.0

ALIASES = {"schwefel-2.26": "schwefel_2_26", "schwefel": "schwefel_2_26"}


def random_rotation(rng: np.random.Generator, dimension: int) -> np.ndarray:
    """Haar-distributed orthogonal matrix from the QR of a Gaussian matrix."""
    q, r = np.linalg.qr(rng.standard_normal((dimension, dimension)))
    return q * np.sign(np.diag(r))


@functools.lru_cache(maxsize=None)
def shift_and_rotation(name: str, dimension: int) -> tuple[np.ndarray, np.ndarray]:
    seed = zlib.crc32(f"{name}:{dimension}".encode())
    rng = np.random.default_rng(seed)
    shift = rng.uniform(-SHIFT_RANGE, SHIFT_RANGE, size=dimension)
    rotation = random_rotation(rng, dimension)
    shift.setflags(write=False)
    rotation.setflags(write=False)
    return shift, rotation


class ShiftedRotated:
    """``f(x) = base(R @ (x - shift))``; picklable, unlike a closure."""

    def __init__(self, name: str, dimension: int):
        self.name = name
        self.base = SHIFTED_ROTATED[name]
        self.shift, self.rotation = shift_and_rotation(name, dimension)

    def __call__(self, x):
        return self.base(self.rotation @ (np.asarray(x, dtype=float) - self.shift))

    def __reduce__(self):
        return (ShiftedRotated, (self.name, self.shift.size))
