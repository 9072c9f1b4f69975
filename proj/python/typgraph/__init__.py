"""Typicality graphs of finite joint distributions.

Distributions are nested lists of probabilities, given as ``Fraction``,
``int`` or ``"num/den"`` strings, one row per X symbol.
"""

import json
from fractions import Fraction

from . import _typgraph
from ._typgraph import (
    CapExceeded,
    InputError,
    InvariantViolation,
    codebook_size,
    delta_schedule,
    is_typical,
    multinomial,
    phi_root,
    suen_tail_bound,
    suen_zero_bound,
    wilson_interval,
)

__all__ = [
    "CapExceeded",
    "InputError",
    "InvariantViolation",
    "codebook_size",
    "delta_schedule",
    "entropies",
    "graph",
    "is_typical",
    "moments",
    "multinomial",
    "phi_root",
    "prop1",
    "simulate",
    "suen_tail_bound",
    "suen_zero_bound",
    "typical_set_size",
    "wilson_interval",
    "wring",
]


def _rat(v):
    if isinstance(v, str):
        return v
    f = Fraction(v)
    return f"{f.numerator}/{f.denominator}"


def _joint(rows):
    if isinstance(rows, dict):
        return json.dumps(rows)
    return json.dumps(
        {
            "x_alphabet": [str(i) for i in range(len(rows))],
            "y_alphabet": [str(j) for j in range(len(rows[0]))],
            "joint": [[_rat(p) for p in row] for row in rows],
        }
    )


def _params(eps1, eps2, lam):
    return {
        "eps1": None if eps1 is None else _rat(eps1),
        "eps2": None if eps2 is None else _rat(eps2),
        "lam": None if lam is None else _rat(lam),
    }


def entropies(joint):
    return json.loads(_typgraph.entropies(_joint(joint)))


def typical_set_size(probs, delta, n):
    return _typgraph.typical_set_size([_rat(p) for p in probs], _rat(delta), n)


def graph(joint, n, schedule="cube-root", eps1=None, eps2=None, lam=None, implicit=False, cap=1 << 24):
    return json.loads(
        _typgraph.graph_report(_joint(joint), n, schedule, implicit=implicit, cap=cap, **_params(eps1, eps2, lam))
    )


def moments(joint, n, m1, m2, schedule="cube-root", eps1=None, eps2=None, lam=None):
    return json.loads(_typgraph.moments(_joint(joint), n, m1, m2, schedule, **_params(eps1, eps2, lam)))


def simulate(joint, n, m1, m2, trials, seed, schedule="cube-root", eps1=None, eps2=None, lam=None, workers=0):
    return json.loads(
        _typgraph.simulate(
            _joint(joint), n, m1, m2, trials, seed, schedule, workers=workers, **_params(eps1, eps2, lam)
        )
    )


def prop1(joint, n, schedule="cube-root"):
    return json.loads(_typgraph.prop1_report(_joint(joint), n, schedule))


def wring(x, y, delta):
    return json.loads(_typgraph.wring(list(x), list(y), delta))
