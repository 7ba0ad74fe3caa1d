"""Position-update rules of the multiplayer battle game optimizer.

Each rule is a pure function of the positions involved and the random
numbers it consumes, so the same arithmetic can be replayed by either
kernel backend and checked against hand-computed values.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "sin_turns",
    "cos_turns",
    "safety_radius",
    "in_safe_zone",
    "move_inside",
    "move_outside",
    "direction_vector",
    "battle_vs_stronger",
    "battle_vs_weaker",
]

_EXACT_SIN = np.array([0.0, 1.0, 0.0, -1.0])
_EXACT_COS = np.array([1.0, 0.0, -1.0, 0.0])


def _turns(u, fn, exact):
    u = np.asarray(u, dtype=float)
    out = np.asarray(fn(2.0 * np.pi * u), dtype=float)
    quarters = np.mod(4.0 * u, 4.0)
    hit = quarters == np.floor(quarters)
    if np.any(hit):
        out = np.where(hit, exact[quarters.astype(int) % 4], out)
    return out


def sin_turns(u):
    """``sin(2*pi*u)``, exact at quarter turns."""
    return _turns(u, np.sin, _EXACT_SIN)


def cos_turns(u):
    """``cos(2*pi*u)``, exact at quarter turns."""
    return _turns(u, np.cos, _EXACT_COS)


def _distance(a, b) -> float:
    d = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    return math.sqrt(float(np.dot(d, d)))


def safety_radius(best, worst, alpha: float, eps: float = 1e-12) -> float:
    """Radius of the safe zone around ``best``.

    Parameters
    ----------
    best, worst : array_like
        Positions of the current best and worst individuals.
    alpha : float
        Random scale factor, drawn from ``[alpha_low, alpha_high)``.
    eps : float
        Keeps the radius positive when best and worst coincide.
    """
    return (_distance(best, worst) + eps) * alpha


def in_safe_zone(x, best, radius: float) -> bool:
    return _distance(x, best) < radius


def move_inside(x, best, sin_u: float) -> np.ndarray:
    # one angle for the whole vector
    return np.asarray(x, dtype=float) + np.asarray(best, dtype=float) * sin_u


def move_outside(x, best, coin, normal, frac) -> np.ndarray:
    """Per-dimension choice between a Gaussian kick and a pull toward best.

    Coordinates with ``coin < 0.5`` get ``x + normal``; the others move
    ``frac`` of the way toward ``best``.
    """
    x = np.asarray(x, dtype=float)
    best = np.asarray(best, dtype=float)
    return np.where(np.asarray(coin) < 0.5, x + normal, x + (best - x) * frac)


def direction_vector(xi, fit_i: float, opponent, fit_opponent: float) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    opponent = np.asarray(opponent, dtype=float)
    if fit_i < fit_opponent:
        return xi - opponent
    return opponent - xi


def battle_vs_stronger(xi, opponent, direction, coin, frac) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    opponent = np.asarray(opponent, dtype=float)
    step = np.asarray(frac) * direction
    return np.where(np.asarray(coin) < 0.5, xi + step, opponent + step)


def battle_vs_weaker(xi, direction, cos_u: float) -> np.ndarray:
    return np.asarray(xi, dtype=float) + np.asarray(direction, dtype=float) * cos_u
