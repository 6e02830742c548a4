"""Integer-grid lattice primitives.

Grid points are plain tuples of ints (1-based coordinates). The componentwise
partial order makes any box [lo, hi] a complete lattice; the solvers navigate
it through levelsets, the sets of points with a fixed coordinate sum.
Everything here is a pure function, safe to call from any thread.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import InfeasibleLevelError

Point = tuple[int, ...]
SignVector = tuple[int, ...]


def sign(v: int) -> int:
    return (v > 0) - (v < 0)


def norm1(x: Point) -> int:
    """Coordinate sum of a point."""
    return sum(x)


def _same_dim(x: Point, y: Point) -> None:
    if len(x) != len(y):
        raise ValueError(f"dimension mismatch: {len(x)} vs {len(y)}")


def leq(x: Point, y: Point) -> bool:
    """Componentwise order: true iff x_i <= y_i for every i."""
    _same_dim(x, y)
    return all(a <= b for a, b in zip(x, y))


def glb(*points: Point) -> Point:
    """Greatest lower bound (componentwise minimum) of one or more points."""
    if not points:
        raise ValueError("glb of an empty collection")
    for p in points[1:]:
        _same_dim(points[0], p)
    return tuple(min(cs) for cs in zip(*points))


def lub(*points: Point) -> Point:
    """Least upper bound (componentwise maximum) of one or more points."""
    if not points:
        raise ValueError("lub of an empty collection")
    for p in points[1:]:
        _same_dim(points[0], p)
    return tuple(max(cs) for cs in zip(*points))


@dataclass(frozen=True)
class Box:
    """Inclusive sub-grid [lo, hi]; the recursion domain of the solvers."""

    lo: Point
    hi: Point

    def __post_init__(self):
        _same_dim(self.lo, self.hi)
        if any(a > b for a, b in zip(self.lo, self.hi)):
            raise ValueError(f"empty box {self.lo}..{self.hi}")

    @property
    def sides(self) -> tuple[int, ...]:
        return tuple(b - a + 1 for a, b in zip(self.lo, self.hi))

    @property
    def size(self) -> int:
        """Additive size measure: the sum of the side lengths."""
        return sum(self.sides)

    @property
    def volume(self) -> int:
        v = 1
        for s in self.sides:
            v *= s
        return v

    def contains(self, x: Point) -> bool:
        return len(x) == len(self.lo) and all(
            a <= c <= b for a, c, b in zip(self.lo, x, self.hi)
        )


def full_box(shape) -> Box:
    """The whole grid [1, n_1] x ... x [1, n_d] as a box."""
    shape = tuple(shape)
    if not shape or any(n < 1 for n in shape):
        raise ValueError(f"invalid grid shape {shape}")
    return Box((1,) * len(shape), shape)


def iter_box(box: Box):
    """Yield the points of a box in lexicographic order (first axis slowest)."""
    return itertools.product(*(range(a, b + 1) for a, b in zip(box.lo, box.hi)))


@dataclass(frozen=True)
class LabelSet:
    """All order relations a point has to its function value.

    Labels overlap on purpose: a point with signs (+1, 0, -1) is both 1-upward
    and 3-downward, and callers pick whichever serves them. Axes are 0-based.
    """

    is_fixed: bool
    is_upward: bool
    is_downward: bool
    i_upward: tuple[int, ...]
    i_downward: tuple[int, ...]


def classify(x: Point, fx: Point) -> tuple[SignVector, LabelSet]:
    """Sign vector of F(x) - x and the labels it implies.

    x is upward iff F(x) >= x, downward iff F(x) <= x, fixed iff both;
    i-upward iff strictly up in coordinate i and weakly down elsewhere,
    i-downward symmetrically. In 3D the label set is never empty.
    """
    _same_dim(x, fx)
    signs = tuple(sign(f - c) for c, f in zip(x, fx))
    is_up = all(s >= 0 for s in signs)
    is_down = all(s <= 0 for s in signs)
    i_up = tuple(
        i
        for i, s in enumerate(signs)
        if s > 0 and all(t <= 0 for j, t in enumerate(signs) if j != i)
    )
    i_down = tuple(
        i
        for i, s in enumerate(signs)
        if s < 0 and all(t >= 0 for j, t in enumerate(signs) if j != i)
    )
    return signs, LabelSet(is_up and is_down, is_up, is_down, i_up, i_down)


def level_point(lower: Point, upper: Point, k: int) -> Point:
    """A point q with lower <= q <= upper and norm1(q) == k.

    Deterministic greedy construction: start at lower and raise coordinates to
    their upper bounds in axis order until the deficit is consumed.
    """
    _same_dim(lower, upper)
    if not leq(lower, upper) or not norm1(lower) <= k <= norm1(upper):
        raise InfeasibleLevelError(
            f"no point with sum {k} inside {lower}..{upper}"
        )
    q = list(lower)
    deficit = k - norm1(lower)
    for i in range(len(q)):
        if deficit == 0:
            break
        step = min(deficit, upper[i] - lower[i])
        q[i] += step
        deficit -= step
    return tuple(q)


def extreme_level_point(box: Box, k: int, max_coord: int, min_coord: int) -> Point:
    """The point of box-level-k that maximizes one coordinate, then minimizes another.

    3D only. The third coordinate is determined by the level. Closed form:
    clamp the maximized coordinate against the box, push the minimized one as
    low as the remaining sum allows.
    """
    if len(box.lo) != 3:
        raise ValueError("extreme_level_point is defined for 3D boxes")
    if max_coord == min_coord or not {max_coord, min_coord} <= {0, 1, 2}:
        raise ValueError(f"invalid axes ({max_coord}, {min_coord})")
    return _oriented_extreme(box, k, max_coord, min_coord, +1)


def _oriented_extreme(box: Box, k: int, i: int, j: int, orient: int) -> Point:
    """Extreme point of box-level-k: coordinate i pushed to its orient-extreme
    (real max if orient > 0, real min otherwise), then coordinate j pushed the
    opposite way."""
    lo, hi = box.lo, box.hi
    if not norm1(lo) <= k <= norm1(hi):
        raise InfeasibleLevelError(f"level {k} misses box {lo}..{hi}")
    p = 3 - i - j
    if orient > 0:
        vi = min(hi[i], k - lo[j] - lo[p])
        vj = max(lo[j], k - vi - hi[p])
    else:
        vi = max(lo[i], k - hi[j] - hi[p])
        vj = min(hi[j], k - vi - lo[p])
    out = [0, 0, 0]
    out[i], out[j], out[p] = vi, vj, k - vi - vj
    return tuple(out)
