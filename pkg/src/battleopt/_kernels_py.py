"""Pure-Python phase kernels.

Reference implementation of the compiled ``_kernels`` module; the two share
signatures and must stay numerically in step. Every function mutates
``pos``, ``fit`` and ``ext`` (``[best_index, worst_index]``) in place and
returns the number of objective evaluations it spent, at most ``limit``.
"""

import math

import numpy as np

BACKEND = "python"


def _accept(pos, fit, ext, i, cand, f):
    pos[i] = cand
    fit[i] = f
    b = ext[0]
    if f < fit[b] or (f == fit[b] and i < b):
        ext[0] = i
    if i == ext[1]:
        ext[1] = int(np.argmax(fit))


def movement_phase(pos, fit, ext, alpha, sin_u, coin, normal, frac,
                   lower, upper, eps, evaluate, limit):
    n = pos.shape[0]
    count = min(n, limit)
    for i in range(count):
        xb = pos[ext[0]]
        dw = xb - pos[ext[1]]
        radius = (math.sqrt(dw @ dw) + eps) * alpha[i]
        xi = pos[i]
        dx = xi - xb
        if math.sqrt(dx @ dx) < radius:
            cand = xi + xb * sin_u[i]
        else:
            cand = np.where(coin[i] < 0.5, xi + normal[i], xi + (xb - xi) * frac[i])
        np.clip(cand, lower, upper, out=cand)
        f = evaluate(cand)
        if f < fit[i]:
            _accept(pos, fit, ext, i, cand, f)
    return count


def battle_phase(pos, fit, ext, opponent, cos_u, coin, frac,
                 lower, upper, evaluate, limit):
    n = pos.shape[0]
    count = min(n, limit)
    for i in range(count):
        j = opponent[i]
        xi = pos[i]
        xj = pos[j]
        fi = fit[i]
        fj = fit[j]
        direction = xi - xj if fi < fj else xj - xi
        if fj < fi:
            step = frac[i] * direction
            cand = np.where(coin[i] < 0.5, xi + step, xj + step)
        else:
            cand = xi + direction * cos_u[i]
        np.clip(cand, lower, upper, out=cand)
        f = evaluate(cand)
        if f < fit[i]:
            _accept(pos, fit, ext, i, cand, f)
    return count
