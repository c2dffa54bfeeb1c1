"""2D scene geometry, blockage, mmWave path loss and multipath channel synthesis."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .units import db_to_linear


class Position(NamedTuple):
    x: float
    y: float


class Wall(NamedTuple):
    a: Position
    b: Position


def as_position(p) -> Position:
    p = Position(float(p[0]), float(p[1]))
    if not (math.isfinite(p.x) and math.isfinite(p.y)):
        raise ValueError(f"position must be finite, got {p}")
    return p


def make_wall(a, b) -> Wall:
    a, b = as_position(a), as_position(b)
    if a == b:
        raise ValueError("wall endpoints must differ")
    return Wall(a, b)


def distance(a, b) -> float:
    return math.hypot(b[0] - a[0], b[1] - a[1])


def boresight_angle(src, dst) -> float:
    """Angle of the line ``src -> dst`` measured from the +x axis."""
    if src[0] == dst[0] and src[1] == dst[1]:
        raise ValueError("boresight angle undefined for coincident points")
    return math.atan2(dst[1] - src[1], dst[0] - src[0])


def _orient(p, q, r):
    # exact rational arithmetic keeps the predicate consistent under argument swaps
    px, py, qx, qy, rx, ry = (Fraction(v) for v in (*p, *q, *r))
    v = (qx - px) * (ry - py) - (qy - py) * (rx - px)
    return (v > 0) - (v < 0)


def _on_segment(p, q, r):
    # q is collinear with p-r; check it lies in the bounding box
    return (min(p[0], r[0]) <= q[0] <= max(p[0], r[0])
            and min(p[1], r[1]) <= q[1] <= max(p[1], r[1]))


def segments_intersect(p1, p2, wall) -> bool:
    """True iff the closed segments ``p1-p2`` and ``wall`` share at least one point."""
    q1, q2 = wall
    o1, o2 = _orient(p1, p2, q1), _orient(p1, p2, q2)
    o3, o4 = _orient(q1, q2, p1), _orient(q1, q2, p2)
    if o1 != o2 and o3 != o4:
        return True
    return ((o1 == 0 and _on_segment(p1, q1, p2)) or (o2 == 0 and _on_segment(p1, q2, p2))
            or (o3 == 0 and _on_segment(q1, p1, q2)) or (o4 == 0 and _on_segment(q1, p2, q2)))


def is_blocked(a, b, walls) -> bool:
    return any(segments_intersect(a, b, w) for w in walls)


def _check_d_fc(d, fc):
    if not d > 0:
        raise ValueError(f"distance must be positive, got {d}")
    if not fc > 0:
        raise ValueError(f"carrier frequency must be positive, got {fc}")


def path_loss_los_db(d: float, fc_ghz: float) -> float:
    """mmMAGIC line-of-sight path loss, ``d`` in meters, ``fc_ghz`` in GHz."""
    _check_d_fc(d, fc_ghz)
    return 19.2 * math.log10(d) + 32.9 + 20.8 * math.log10(fc_ghz)


def path_loss_nlos_db(d: float, fc_ghz: float) -> float:
    _check_d_fc(d, fc_ghz)
    return 45.0 * math.log10(d) + 31.0 + 20.0 * math.log10(fc_ghz)


def link_gain(d: float, fc_ghz: float, blocked: bool = False, endpoint_gains_db: float = 0.0) -> float:
    """Linear large-scale power gain of a link: path loss offset by the endpoint antenna gains."""
    pl = path_loss_nlos_db(d, fc_ghz) if blocked else path_loss_los_db(d, fc_ghz)
    return db_to_linear(endpoint_gains_db - pl)


def steering_vector(n: int, angle: float) -> np.ndarray:
    """Half-wavelength ULA response, ``exp(j*pi*m*sin(angle))`` for m = 0..n-1."""
    if n < 1:
        raise ValueError("array size must be at least 1")
    return np.exp(1j * np.pi * np.arange(n) * np.sin(angle))


def complex_normal(rng: np.random.Generator, size) -> np.ndarray:
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / math.sqrt(2.0)


@dataclass(frozen=True)
class LinkRealization:
    """One channel draw. ``path_loss_db`` is the net loss after endpoint antenna gains."""

    matrix: np.ndarray
    path_loss_db: float
    blocked: bool
    aod_rad: np.ndarray
    aoa_rad: np.ndarray

    @property
    def gain(self) -> float:
        return db_to_linear(-self.path_loss_db)


def synthesize_channel(tx, rx, n_t: int, n_r: int, n_paths: int, fc_ghz: float,
                       blocked: bool, endpoint_gains_db: float,
                       rng: np.random.Generator) -> LinkRealization:
    """Draw an ``n_r x n_t`` multipath channel from ``tx`` to ``rx``.

    H = sqrt(G / L) * sum_l g_l a_r(aoa_l) a_t(aod_l)^T with g_l ~ CN(0, 1) and
    G the linear large-scale gain. Path 0 follows the geometric line of sight at
    both ends; the other paths take angles uniform on [-pi/2, pi/2].

    The draws consumed from ``rng`` depend only on ``n_paths``, so the same
    stream yields nested realizations for different array sizes.
    """
    if n_t < 1 or n_r < 1 or n_paths < 1:
        raise ValueError("n_t, n_r and n_paths must be positive")
    d = distance(tx, rx)
    if d == 0:
        raise ValueError("transmitter and receiver coincide")
    pl = path_loss_nlos_db(d, fc_ghz) if blocked else path_loss_los_db(d, fc_ghz)
    net_db = pl - endpoint_gains_db

    coeffs = complex_normal(rng, n_paths)
    aod = np.empty(n_paths)
    aoa = np.empty(n_paths)
    aod[0] = boresight_angle(tx, rx)
    aoa[0] = boresight_angle(rx, tx)
    aod[1:] = rng.uniform(-np.pi / 2, np.pi / 2, n_paths - 1)
    aoa[1:] = rng.uniform(-np.pi / 2, np.pi / 2, n_paths - 1)

    a_t = np.exp(1j * np.pi * np.outer(np.sin(aod), np.arange(n_t)))  # (L, n_t)
    a_r = np.exp(1j * np.pi * np.outer(np.sin(aoa), np.arange(n_r)))  # (L, n_r)
    H = (a_r.T * coeffs) @ a_t
    H *= math.sqrt(db_to_linear(-net_db) / n_paths)
    return LinkRealization(H, net_db, bool(blocked), aod, aoa)
