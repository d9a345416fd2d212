"""Builtin groups and test curves.

Three small groups cover the interesting cases: a weighted abelian plane
(no brackets, so the group law is plain addition), the 3-d group with one
bracket [e1, e2] = e3, and its 4-d step-3 extension with [e1, e3] = e4.
The curves live in those groups and are chosen so that degrees, blow-ups
and covering values have values one can check by hand.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import sqrt

import numpy as np

from .algebra import GradedAlgebraSpec, spec_from_dict, validate_algebra
from .curve import Curve
from .group import GroupLaw, bch_group_law
from .metric import HomogeneousDistance

_GROUP_DOCS = {
    "abelian_w12": {
        "layers": [1, 1],
        "brackets": [],
    },
    "heisenberg": {
        "layers": [2, 1],
        "brackets": [{"i": 1, "j": 2, "k": 3, "c": "1"}],
    },
    "engel": {
        "layers": [2, 1, 1],
        "brackets": [{"i": 1, "j": 2, "k": 3, "c": "1"},
                     {"i": 1, "j": 3, "k": 4, "c": "1"}],
    },
}


def group_names() -> tuple:
    return tuple(sorted(_GROUP_DOCS))


def algebra_spec(name: str) -> GradedAlgebraSpec:
    if name not in _GROUP_DOCS:
        raise KeyError(f"unknown group {name!r}; choose from {group_names()}")
    return spec_from_dict(_GROUP_DOCS[name])


@lru_cache(maxsize=None)
def group_law(name: str) -> GroupLaw:
    return bch_group_law(validate_algebra(algebra_spec(name)))


def distance(name: str, eps=None) -> HomogeneousDistance:
    """Gauge distance for a builtin group; eps defaults to all ones."""
    law = group_law(name)
    if eps is None:
        eps = (1.0,) * law.step
    return HomogeneousDistance(law, eps)


# -- curves ---------------------------------------------------------------------


def _vertical_pos(t):
    t = np.asarray(t, dtype=float)
    z = np.zeros_like(t)
    return np.stack([z, z, t], axis=-1)


def _vertical_vel(t):
    t = np.asarray(t, dtype=float)
    z = np.zeros_like(t)
    return np.stack([z, z, np.ones_like(t)], axis=-1)


def _horizontal_pos(t):
    t = np.asarray(t, dtype=float)
    z = np.zeros_like(t)
    return np.stack([t, z, z], axis=-1)


def _horizontal_vel(t):
    t = np.asarray(t, dtype=float)
    z = np.zeros_like(t)
    return np.stack([np.ones_like(t), z, z], axis=-1)


def _rot_horizontal_pos(t):
    t = np.asarray(t, dtype=float)
    s = t / sqrt(2.0)
    return np.stack([s, s, np.zeros_like(t)], axis=-1)


def _rot_horizontal_vel(t):
    t = np.asarray(t, dtype=float)
    c = np.full_like(t, 1.0 / sqrt(2.0))
    return np.stack([c, c, np.zeros_like(t)], axis=-1)


def _parabola_pos(t):
    t = np.asarray(t, dtype=float)
    return np.stack([t, np.zeros_like(t), 0.5 * t * t], axis=-1)


def _parabola_vel(t):
    t = np.asarray(t, dtype=float)
    return np.stack([np.ones_like(t), np.zeros_like(t), t], axis=-1)


def _glued_pos(t):
    t = np.asarray(t, dtype=float)
    bent = t > 0.0
    x = np.where(bent, t - 0.5 * t * t, t)
    z = np.where(bent, 0.5 * t * t, 0.0)
    return np.stack([x, np.zeros_like(t), z], axis=-1)


def _glued_vel(t):
    t = np.asarray(t, dtype=float)
    bent = t > 0.0
    vx = np.where(bent, 1.0 - t, 1.0)
    vz = np.where(bent, t, 0.0)
    return np.stack([vx, np.zeros_like(t), vz], axis=-1)


def _engel_vertical_pos(t):
    t = np.asarray(t, dtype=float)
    z = np.zeros_like(t)
    return np.stack([z, z, z, t], axis=-1)


def _engel_vertical_vel(t):
    t = np.asarray(t, dtype=float)
    z = np.zeros_like(t)
    return np.stack([z, z, z, np.ones_like(t)], axis=-1)


@dataclass(frozen=True)
class CurveFixture:
    group: str
    curve: Curve


def _fixture(group, name, pos, vel, n, domain, description) -> CurveFixture:
    return CurveFixture(group, Curve(domain=domain, n=n, position=pos,
                                     velocity=vel, name=name,
                                     description=description))


_CURVES = {
    "vertical": _fixture(
        "heisenberg", "vertical", _vertical_pos, _vertical_vel, 3, (-1.0, 1.0),
        "line along the center direction; degree 2 everywhere"),
    "horizontal": _fixture(
        "heisenberg", "horizontal", _horizontal_pos, _horizontal_vel, 3, (-1.0, 1.0),
        "line along the first generator; degree 1 everywhere"),
    "rotated_horizontal": _fixture(
        "heisenberg", "rotated_horizontal", _rot_horizontal_pos, _rot_horizontal_vel,
        3, (-1.0, 1.0),
        "unit-speed line along (e1 + e2)/sqrt(2); degree 1 everywhere"),
    "parabola_lift": _fixture(
        "heisenberg", "parabola_lift", _parabola_pos, _parabola_vel, 3, (-1.0, 1.0),
        "lift t -> (t, 0, t^2/2); degree 2 except at t = 0"),
    "glued_hv": _fixture(
        "heisenberg", "glued_hv", _glued_pos, _glued_vel, 3, (-1.0, 1.0),
        "C1 join of a horizontal ray (t <= 0) and a bending arc (t > 0); "
        "degree 1 exactly on [-1, 0]"),
    "engel_vertical": _fixture(
        "engel", "engel_vertical", _engel_vertical_pos, _engel_vertical_vel,
        4, (-1.0, 1.0),
        "line along the top layer of the step-3 group; degree 3 everywhere"),
}


def curve_names() -> tuple:
    return tuple(sorted(_CURVES))


def curve_fixture(name: str) -> CurveFixture:
    if name not in _CURVES:
        raise KeyError(f"unknown curve {name!r}; choose from {curve_names()}")
    return _CURVES[name]


def curve(name: str) -> Curve:
    return curve_fixture(name).curve


def catalog() -> dict:
    """Serializable listing of the builtin groups and curves."""
    groups = {name: {"layers": list(doc["layers"]),
                     "brackets": len(doc["brackets"])}
              for name, doc in sorted(_GROUP_DOCS.items())}
    curves = {name: {"group": fx.group,
                     "domain": list(fx.curve.domain),
                     "description": fx.curve.description}
              for name, fx in sorted(_CURVES.items())}
    return {"groups": groups, "curves": curves}
