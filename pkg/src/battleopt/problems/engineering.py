"""Constrained engineering design problems.

Formulations follow the versions most widely used in the metaheuristics
literature; ``docs/problems.md`` lists each one with its bounds and known
optimum. Constraints are in ``g(x) <= 0`` form. Functions receive the
already-rounded design vector as a list of floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

SQRT2 = math.sqrt(2.0)

# None: continuous, "integer": round to nearest, float q: nearest multiple of q
Discrete = Optional[Union[str, float]]


@dataclass(frozen=True)
class EngineeringProblem:
    name: str
    description: str
    lower: tuple
    upper: tuple
    objective: Callable[[list], float]
    constraints: Callable[[list], list]
    n_constraints: int
    discrete: tuple = ()
    known_optimum: Optional[float] = None


def _div(a, b):
    if b == 0.0:
        return math.copysign(math.inf, a) if a != 0.0 else math.nan
    return a / b


# welded beam -----------------------------------------------------------------

def _wbp_f(x):
    h, l, t, b = x
    return 1.10471 * h * h * l + 0.04811 * t * b * (14.0 + l)


def _wbp_g(x):
    h, l, t, b = x
    P, L, E, G = 6000.0, 14.0, 30e6, 12e6
    tau1 = _div(P, SQRT2 * h * l)
    M = P * (L + l / 2.0)
    R = math.sqrt(l * l / 4.0 + ((h + t) / 2.0) ** 2)
    J = 2.0 * (SQRT2 * h * l * (l * l / 12.0 + ((h + t) / 2.0) ** 2))
    tau2 = _div(M * R, J)
    tau = math.sqrt(tau1 ** 2 + 2.0 * tau1 * tau2 * _div(l, 2.0 * R) + tau2 ** 2)
    sigma = _div(6.0 * P * L, b * t * t)
    delta = _div(4.0 * P * L ** 3, E * t ** 3 * b)
    pc = 4.013 * E * math.sqrt(t * t * b ** 6 / 36.0) / L ** 2 * (
        1.0 - t / (2.0 * L) * math.sqrt(E / (4.0 * G)))
    return [
        tau - 13600.0,
        sigma - 30000.0,
        h - b,
        0.10471 * h * h + 0.04811 * t * b * (14.0 + l) - 5.0,
        0.125 - h,
        delta - 0.25,
        P - pc,
    ]


# pressure vessel --------------------------------------------------------------

def _pvp_f(x):
    ts, th, r, length = x
    return (0.6224 * ts * r * length + 1.7781 * th * r * r
            + 3.1661 * ts * ts * length + 19.84 * ts * ts * r)


def _pvp_g(x):
    ts, th, r, length = x
    return [
        -ts + 0.0193 * r,
        -th + 0.00954 * r,
        -math.pi * r * r * length - 4.0 / 3.0 * math.pi * r ** 3 + 1296000.0,
        length - 240.0,
    ]


# three-bar truss ----------------------------------------------------------------

def _tbtd_f(x):
    a1, a2 = x
    return (2.0 * SQRT2 * a1 + a2) * 100.0


def _tbtd_g(x):
    a1, a2 = x
    P = sigma = 2.0
    den = SQRT2 * a1 * a1 + 2.0 * a1 * a2
    return [
        _div(SQRT2 * a1 + a2, den) * P - sigma,
        _div(a2, den) * P - sigma,
        _div(1.0, SQRT2 * a2 + a1) * P - sigma,
    ]


# gear train ----------------------------------------------------------------------

def _gtd_f(x):
    a, b, c, d = x
    return (1.0 / 6.931 - (a * b) / (c * d)) ** 2


def _no_constraints(x):
    return []


# cantilever beam --------------------------------------------------------------------

def _cbd_f(x):
    return 0.0624 * sum(x)


def _cbd_g(x):
    x1, x2, x3, x4, x5 = x
    return [61.0 / x1 ** 3 + 37.0 / x2 ** 3 + 19.0 / x3 ** 3 + 7.0 / x4 ** 3
            + 1.0 / x5 ** 3 - 1.0]


# I-beam vertical deflection ----------------------------------------------------------

def _ibd_f(x):
    h, b, tw, tf = x
    inertia = (tw * (h - 2.0 * tf) ** 3 / 12.0 + b * tf ** 3 / 6.0
               + 2.0 * b * tf * ((h - tf) / 2.0) ** 2)
    return _div(5000.0, inertia)


def _ibd_g(x):
    h, b, tw, tf = x
    web = h - 2.0 * tf
    return [
        2.0 * b * tf + tw * web - 300.0,
        _div(18.0 * h * 1e4, tw * web ** 3 + 2.0 * b * tf * (4.0 * tf * tf + 3.0 * h * web))
        + _div(15.0 * b * 1e3, web * tw ** 3 + 2.0 * tf * b ** 3) - 6.0,
    ]


# tubular column ----------------------------------------------------------------------

def _tcd_f(x):
    d, t = x
    return 9.8 * d * t + 2.0 * d


def _tcd_g(x):
    d, t = x
    P, sy, E, L = 2500.0, 500.0, 0.85e6, 250.0
    return [
        P / (math.pi * d * t * sy) - 1.0,
        8.0 * P * L * L / (math.pi ** 3 * E * d * t * (d * d + t * t)) - 1.0,
        2.0 / d - 1.0,
        d / 14.0 - 1.0,
        0.2 / t - 1.0,
        t / 0.8 - 1.0,
    ]


# piston lever -------------------------------------------------------------------------

_PLD_SIN = _PLD_COS = math.sqrt(0.5)  # lever angle of 45 degrees


def _pld_lengths(H, B, X):
    L1 = math.sqrt((X - B) ** 2 + H * H)
    L2 = math.sqrt((X * _PLD_SIN + H) ** 2 + (B - X * _PLD_COS) ** 2)
    return L1, L2


def _pld_f(x):
    H, B, D, X = x
    L1, L2 = _pld_lengths(H, B, X)
    return 0.25 * math.pi * D * D * (L2 - L1)


def _pld_g(x):
    H, B, D, X = x
    L, M, P, Q = 240.0, 1.8e6, 1500.0, 10000.0
    s, c = _PLD_SIN, _PLD_COS
    L1, L2 = _pld_lengths(H, B, X)
    R = _div(abs(-X * (X * s + H) + H * (B - X * c)), L1)
    F = 0.25 * math.pi * P * D * D
    return [
        Q * L * c - R * F,
        Q * (L - X) - M,
        1.2 * (L2 - L1) - L1,
        D / 2.0 - B,
    ]


# corrugated bulkhead -------------------------------------------------------------------

def _cbhd_f(x):
    b, h, l, t = x
    return _div(5.885 * t * (b + l), b + math.sqrt(abs(l * l - h * h)))


def _cbhd_g(x):
    b, h, l, t = x
    s = b + math.sqrt(abs(l * l - h * h))
    return [
        -t * h * (0.4 * b + l / 6.0) + 8.94 * s,
        -t * h * h * (0.2 * b + l / 12.0) + 2.2 * (8.94 * s) ** (4.0 / 3.0),
        -t + 0.0156 * b + 0.15,
        -t + 0.0156 * l + 0.15,
        -t + 1.05,
        -l + h,
    ]


# reinforced concrete beam ----------------------------------------------------------------

def _rcb_f(x):
    As, b, h = x
    return 29.4 * As + 0.6 * b * h


def _rcb_g(x):
    As, b, h = x
    return [
        b / h - 4.0,
        180.0 + 7.375 * As * As / h - As * b,
    ]


PROBLEMS = {
    p.name: p
    for p in [
        EngineeringProblem(
            "WBP", "welded beam fabrication cost",
            (0.1, 0.1, 0.1, 0.1), (2.0, 10.0, 10.0, 2.0),
            _wbp_f, _wbp_g, 7, known_optimum=1.724852),
        EngineeringProblem(
            "PVP", "cylindrical pressure vessel with hemispherical heads, total cost",
            (0.0625, 0.0625, 10.0, 10.0), (99 * 0.0625, 99 * 0.0625, 200.0, 200.0),
            _pvp_f, _pvp_g, 4, discrete=(0.0625, 0.0625, None, None),
            known_optimum=6059.714335),
        EngineeringProblem(
            "TBTD", "three-bar truss weight under a vertical load",
            (0.0, 0.0), (1.0, 1.0), _tbtd_f, _tbtd_g, 3, known_optimum=263.895843),
        EngineeringProblem(
            "GTD", "gear train ratio error, integer teeth counts",
            (12.0, 12.0, 12.0, 12.0), (60.0, 60.0, 60.0, 60.0),
            _gtd_f, _no_constraints, 0, discrete=("integer",) * 4,
            known_optimum=2.700857e-12),
        EngineeringProblem(
            "CBD", "cantilever beam weight, five hollow square sections",
            (0.01,) * 5, (100.0,) * 5, _cbd_f, _cbd_g, 1, known_optimum=1.339956),
        EngineeringProblem(
            "IBD", "I-beam vertical deflection",
            (10.0, 10.0, 0.9, 0.9), (80.0, 50.0, 5.0, 5.0),
            _ibd_f, _ibd_g, 2, known_optimum=0.0130741),
        EngineeringProblem(
            "TCD", "tubular column cost under compressive load",
            (2.0, 0.2), (14.0, 0.8), _tcd_f, _tcd_g, 6, known_optimum=26.4994),
        EngineeringProblem(
            "PLD", "piston lever oil volume",
            (0.05, 0.05, 0.05, 0.05), (500.0, 500.0, 120.0, 500.0),
            _pld_f, _pld_g, 4, known_optimum=1.057),
        EngineeringProblem(
            "CBHD", "corrugated bulkhead weight",
            (0.0, 0.0, 0.0, 0.0), (100.0, 100.0, 100.0, 5.0),
            _cbhd_f, _cbhd_g, 6, known_optimum=6.842958),
        EngineeringProblem(
            "RCB", "reinforced concrete beam cost",
            (0.2, 28.0, 5.0), (15.0, 40.0, 10.0),
            _rcb_f, _rcb_g, 2, discrete=(None, "integer", None)),
    ]
}
