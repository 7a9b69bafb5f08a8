"""Rigorous branch-and-bound certification of analytic inequalities.

The quantities certified here are the lens-intersection area helpers from
:mod:`coopcast.geometry`, rewritten in forms that stay finite on the closed
parameter box.  The distance parameter ``d`` in [1, inf) is compactified to
``z = 1/d`` in (0, 1], so every inequality lives on a closed rectangle in
``(x, z)`` (or a closed segment in one variable) and can be decided by
adaptive bisection with outward-rounded interval arithmetic.

Key rewrites (all verified against direct evaluation):

* ``G(t) = g(t) / t**1.5`` is enclosed via the sandwich
  ``(4/3) sqrt(2 - t) <= G(t) <= (4/3) sqrt(2)`` obtained by bounding the
  integrand of ``g(t) = int_0^t 2 sqrt(u (2 - u)) du``; the direct quotient
  is intersected in when ``t`` is bounded away from zero.
* The curvature term with a removable ``0/0`` at ``(x, z) = (0, 1)`` is
  split as a polynomial part plus a remainder bounded by
  ``sqrt(2 (1 - z) / (x z + 2))``.

A task is *proved* when every leaf box certifies the bound, *refuted* when
some midpoint, evaluated as a degenerate interval, violates the bound with
its entire enclosure, and *exhausted* when the box budget or depth limit
runs out; the hardest undecided box is reported in that case.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .intervals import DomainError, Interval, ROUNDING_MODE

__all__ = [
    "Box",
    "ProofTask",
    "ProofResult",
    "interval_eval",
    "prove",
    "inequality_suite",
    "EXPRESSIONS",
]


# ---------------------------------------------------------------------------
# interval enclosures of the analytic building blocks
# ---------------------------------------------------------------------------

_UNIT = Interval(0.0, 1.0)
_CHORD_DOMAIN = Interval(0.0, 2.0)


def _g_iv(t: Interval) -> Interval:
    """Circular-segment shape function g(t) = acos(1-t) - (1-t) sqrt(t(2-t))."""
    u = 1.0 - t
    return u.acos() - u * (t * (2.0 - t)).sqrt()


def _coeff_intervals() -> tuple[tuple[Interval, ...], Interval]:
    """Series data for g(t)/t**1.5 on t <= 1.

    From g(t) = int_0^t 2 sqrt(u) sqrt(2) sqrt(1 - u/2) du and the binomial
    series sqrt(1 - v) = sum_k a_k v^k (a_0 = 1, a_k < 0 for k >= 1),
    termwise integration gives g(t)/t**1.5 = sum_k C_k t^k with
    C_k = 2 sqrt(2) a_k / (2^k (k + 1.5)).  Truncating after degree K leaves
    a tail in [-2 sqrt(2) (t/2)^(K+1) / (K + 2.5), 0] because the dropped
    a_k are negative with absolute sum at most 1.
    """
    from fractions import Fraction

    K = 10
    a = [Fraction(1)]
    for k in range(1, K + 1):
        a.append(a[-1] * Fraction(2 * k - 3, 2 * k))
    root2 = Interval(2.0).sqrt()
    coeffs = []
    for k in range(K + 1):
        c = Fraction(2) * a[k] / (2**k * Fraction(2 * k + 3, 2))
        coeffs.append(root2 * Interval(float(c.numerator)) / float(c.denominator))
    tail_scale = 2.0 * root2 / float(K + 2.5)
    return tuple(coeffs), tail_scale


_G32_COEFFS, _G32_TAIL = _coeff_intervals()


def _g32_series_iv(t: Interval) -> Interval:
    acc = _G32_COEFFS[-1]
    for c in reversed(_G32_COEFFS[:-1]):
        acc = acc * t + c
    half_t = t * 0.5
    tail_hi = _G32_TAIL * half_t.sq().sq().sq() * half_t.sq() * half_t
    return acc + Interval(-tail_hi.hi, 0.0)


def _g32_iv(t: Interval) -> Interval:
    """Enclosure of g(t) / t**1.5, finite down to t = 0 (limit 4 sqrt(2) / 3)."""
    t = t.intersect(_CHORD_DOMAIN)
    third = Interval(4.0) / 3.0
    lo = (third * (2.0 - t).sqrt()).lo
    hi = (third * Interval(2.0).sqrt()).hi
    enc = Interval(max(lo, 0.0), hi)
    if t.hi <= 1.0:
        enc = enc.intersect(_g32_series_iv(t))
    if t.lo > 0.0:
        enc = enc.intersect(_g_iv(t) / t.pow32())
    return enc


def _scaled_area_iv(x: Interval, z: Interval) -> Interval:
    """f(x, 1/z) / sqrt(x), finite on the closed box [0,2] x [0,1]."""
    c = (1.0 + z * (x - 2.0) * 0.5).intersect(_UNIT)
    q = x * z
    term1 = _g32_iv((x * c).intersect(_CHORD_DOMAIN)) * x * c.pow32()
    term2 = (q + 1.0) * (q + 2.0).sqrt() * (2.0 - x).pow32() * _g32_iv((2.0 - x) * z) / 4.0
    return term1 + term2


def _area_iv(x: Interval, z: Interval) -> Interval:
    return _scaled_area_iv(x, z) * x.sqrt()


def _ratio_iv(x: Interval, z: Interval) -> Interval:
    return Interval(2.0).sqrt() * _scaled_area_iv(x, z) / _scaled_area_iv(x * 0.5, z)


def _slope_iv(x: Interval, z: Interval) -> Interval:
    """d f / d x, valid for x bounded away from 0 and 2."""
    q = x * z
    poly = 2.0 * q.sq() + 4.0 * q + 1.0
    term1 = (2.0 - x).pow32() * _g32_iv((2.0 - x) * z) * poly / (
        4.0 * (x * (q + 2.0)).sqrt()
    )
    term2 = (q + 1.0 - 2.0 * z) * (
        x * (2.0 - x) * (q + 2.0 - 2.0 * z) * (q + 2.0)
    ).sqrt() * 0.5
    return term1 + term2


def _t1_weighted_iv(x: Interval, z: Interval) -> Interval:
    """First curvature term times sqrt(x (2 - x)).

    The raw quotient P(x, z) / (2 sqrt((x z + 2 - 2 z)(x z + 2))) is 0/0 at
    (x, z) = (0, 1).  Dividing P by s = x z + 2 - 2 z gives quotient Q and
    remainder 4 (1 - z); the remainder part is enclosed by its pointwise
    bound [0, sqrt(2 (1 - z) / (x z + 2))], which vanishes at the corner.
    """
    zsq = z.sq()
    s = (x * z + 2.0 - 2.0 * z).intersect(Interval(0.0, 4.0))
    q2 = x * z + 2.0
    quot = ((x * (-3.0 * zsq) + (8.0 * zsq - 6.0 * z)) * x + (
        -4.0 * zsq + 14.0 * z - 2.0
    )) * x - 4.0 * z
    main = quot * s.sqrt() / (2.0 * q2.sqrt())
    rest = Interval(0.0, ((2.0 * (1.0 - z)) / q2).sqrt().hi)
    if s.lo > 0.0:
        rest = rest.intersect((4.0 - 4.0 * z) / (2.0 * (s * q2).sqrt()))
        a3 = x * (x * (x * (-3.0 * x + 14.0) - 20.0) + 8.0)
        a2 = x * (x * (-12.0 * x + 42.0) - 40.0) + 8.0
        a1 = x * (-14.0 * x + 32.0) - 12.0
        a0 = 4.0 - 4.0 * x
        numer = ((a3 * z + a2) * z + a1) * z + a0
        return (main + rest).intersect(numer / (2.0 * (s * q2).sqrt()))
    return main + rest


def _t2_weighted_iv(x: Interval, z: Interval) -> Interval:
    """Second curvature term times sqrt(x)."""
    q = x * z
    s = (q + 2.0 - 2.0 * z).intersect(Interval(0.0, 4.0))
    return -(((2.0 - x) * s).sqrt() * (2.0 * q.sq() + 4.0 * q + 1.0)) / (
        2.0 * (q + 2.0).sqrt()
    )


def _t3_weighted_iv(x: Interval, z: Interval) -> Interval:
    """Third curvature term times x**1.5."""
    q = x * z
    return (q + 1.0) * (2.0 * q.sq() + 4.0 * q - 1.0) * (2.0 - x).pow32() * _g32_iv(
        (2.0 - x) * z
    ) / (4.0 * (q + 2.0).pow32())


def _curvature_iv(x: Interval, z: Interval) -> Interval:
    """d^2 f / d x^2, valid for x bounded away from 0 and 2."""
    return (
        _t1_weighted_iv(x, z) / (x * (2.0 - x)).sqrt()
        + _t2_weighted_iv(x, z) / x.sqrt()
        + _t3_weighted_iv(x, z) / x.pow32()
    )


def _curvature_excess_iv(x: Interval, z: Interval) -> Interval:
    """x**1.5 * (d^2 f / d x^2 + 199); nonpositivity near x = 0 certifies
    curvature <= -199 there without dividing by x."""
    return (
        _t1_weighted_iv(x, z) * x / (2.0 - x).sqrt()
        + _t2_weighted_iv(x, z) * x
        + _t3_weighted_iv(x, z)
        + 199.0 * x.pow32()
    )


#: name -> (number of variables, interval evaluator)
EXPRESSIONS = {
    "segment_shape": (1, _g_iv),
    "segment_shape_scaled": (1, _g32_iv),
    "lens_area": (2, _area_iv),
    "lens_area_scaled": (2, _scaled_area_iv),
    "lens_area_half_ratio": (2, _ratio_iv),
    "lens_area_slope": (2, _slope_iv),
    "lens_area_curvature": (2, _curvature_iv),
    "lens_area_curvature_excess": (2, _curvature_excess_iv),
    "curvature_term1_weighted": (2, _t1_weighted_iv),
    "curvature_term2_weighted": (2, _t2_weighted_iv),
    "curvature_term3_weighted": (2, _t3_weighted_iv),
}


# ---------------------------------------------------------------------------
# branch and bound
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Box:
    intervals: tuple[Interval, ...]
    depth: int = 0

    def widths(self) -> tuple[float, ...]:
        return tuple(iv.width for iv in self.intervals)

    def midpoint(self) -> tuple[float, ...]:
        return tuple(iv.mid for iv in self.intervals)

    def split(self, dim: int) -> tuple["Box", "Box"]:
        lo_iv, hi_iv = self.intervals[dim].split()
        parts = list(self.intervals)
        parts[dim] = lo_iv
        left = Box(tuple(parts), self.depth + 1)
        parts[dim] = hi_iv
        return left, Box(tuple(parts), self.depth + 1)

    def as_lists(self) -> list[list[float]]:
        return [[iv.lo, iv.hi] for iv in self.intervals]


@dataclass(frozen=True)
class ProofTask:
    name: str
    expression: str
    domain: tuple[tuple[float, float], ...]
    relation: str  # one of "<=", "<", ">=", ">"
    bound: float
    description: str = ""

    def __post_init__(self):
        if self.expression not in EXPRESSIONS:
            raise ValueError(f"unknown expression {self.expression!r}")
        if self.relation not in ("<=", "<", ">=", ">"):
            raise ValueError(f"unknown relation {self.relation!r}")
        arity = EXPRESSIONS[self.expression][0]
        if len(self.domain) != arity:
            raise ValueError(
                f"{self.expression} takes {arity} variables, domain has {len(self.domain)}"
            )


@dataclass
class ProofResult:
    task: ProofTask
    verdict: str  # "proved" | "refuted" | "exhausted"
    boxes_processed: int
    max_depth_reached: int
    witness_box: Box | None = None
    witness_point: tuple[float, ...] | None = None
    witness_enclosure: Interval | None = None
    budget: int = 0

    def certificate(self) -> dict:
        cert = {
            "task": self.task.name,
            "expression": self.task.expression,
            "domain": [list(d) for d in self.task.domain],
            "relation": self.task.relation,
            "bound": self.task.bound,
            "verdict": self.verdict,
            "boxes_processed": self.boxes_processed,
            "max_depth_reached": self.max_depth_reached,
            "box_budget": self.budget,
            "rounding": ROUNDING_MODE,
        }
        if self.witness_box is not None:
            cert["witness_box"] = self.witness_box.as_lists()
        if self.witness_point is not None:
            cert["witness_point"] = list(self.witness_point)
        if self.witness_enclosure is not None:
            cert["witness_enclosure"] = [
                self.witness_enclosure.lo,
                self.witness_enclosure.hi,
            ]
        return cert

    def certificate_json(self) -> str:
        return json.dumps(self.certificate(), indent=2, sort_keys=True)


def interval_eval(expression: str, *intervals: Interval) -> Interval:
    """Evaluate one of the cataloged expressions over an interval box."""
    arity, fn = EXPRESSIONS[expression]
    if len(intervals) != arity:
        raise ValueError(f"{expression} takes {arity} intervals")
    return fn(*intervals)


def _certifies(enc: Interval, relation: str, bound: float) -> bool:
    if relation == "<=":
        return enc.hi <= bound
    if relation == "<":
        return enc.hi < bound
    if relation == ">=":
        return enc.lo >= bound
    return enc.lo > bound


def _point_refutes(enc: Interval, relation: str, bound: float) -> bool:
    # The entire point enclosure must violate the claimed bound.
    if relation == "<=":
        return enc.lo > bound
    if relation == "<":
        return enc.lo >= bound
    if relation == ">=":
        return enc.hi < bound
    return enc.hi <= bound


def prove(task: ProofTask, max_boxes: int = 2**24, max_depth: int = 60) -> ProofResult:
    """Decide a :class:`ProofTask` by deterministic adaptive bisection.

    Boxes are processed depth first; undecided boxes are split along the
    dimension that is widest relative to the task domain (ties go to the
    first dimension), so results are reproducible.
    """
    _, fn = EXPRESSIONS[task.expression]
    domain_widths = [hi - lo for lo, hi in task.domain]
    root = Box(tuple(Interval(lo, hi) for lo, hi in task.domain))
    stack = [root]
    processed = 0
    deepest = 0
    hardest: Box | None = None

    while stack:
        box = stack.pop()
        processed += 1
        deepest = max(deepest, box.depth)

        try:
            enc = fn(*box.intervals)
            decided = _certifies(enc, task.relation, task.bound)
        except DomainError:
            decided = False
        if decided:
            continue

        mid = box.midpoint()
        try:
            point_enc = fn(*(Interval(m) for m in mid))
        except DomainError:
            point_enc = None
        if point_enc is not None and _point_refutes(point_enc, task.relation, task.bound):
            return ProofResult(
                task,
                "refuted",
                processed,
                deepest,
                witness_box=box,
                witness_point=mid,
                witness_enclosure=point_enc,
                budget=max_boxes,
            )

        if box.depth >= max_depth or processed + len(stack) >= max_boxes:
            hardest = box
            break

        rel = [
            (box.intervals[i].width / domain_widths[i]) if domain_widths[i] > 0 else 0.0
            for i in range(len(domain_widths))
        ]
        dim = max(range(len(rel)), key=lambda i: (rel[i], -i))
        lo_box, hi_box = box.split(dim)
        stack.append(hi_box)
        stack.append(lo_box)

    if hardest is not None:
        return ProofResult(
            task,
            "exhausted",
            processed,
            deepest,
            witness_box=hardest,
            witness_point=hardest.midpoint(),
            budget=max_boxes,
        )
    return ProofResult(task, "proved", processed, deepest, budget=max_boxes)


# ---------------------------------------------------------------------------
# the certified inequality suite
# ---------------------------------------------------------------------------

_FULL = ((0.0, 2.0), (0.0, 1.0))
_MID = ((0.01, 1.99), (0.0, 1.0))
_LEFT = ((0.0, 0.01), (0.0, 1.0))


def inequality_suite() -> list[ProofTask]:
    """All analytic inequalities backing the broadcast schedule analysis.

    ``x`` is the annulus width in units of the transmission radius and
    ``z = 1/d`` the reciprocal sender distance, so each task ranges over a
    closed box.
    """
    return [
        ProofTask(
            "shape_scaled_lower",
            "segment_shape_scaled",
            ((0.0, 2.0),),
            ">=",
            1.0,
            "g(t)/t^1.5 stays above 1 on [0, 2]",
        ),
        ProofTask(
            "shape_scaled_upper",
            "segment_shape_scaled",
            ((0.0, 2.0),),
            "<=",
            2.0,
            "g(t)/t^1.5 stays below 2 on [0, 2]",
        ),
        ProofTask(
            "area_scaled_lower",
            "lens_area_scaled",
            _FULL,
            ">",
            1.0,
            "f(x, d)/sqrt(x) exceeds 1 for all widths and distances",
        ),
        ProofTask(
            "area_scaled_upper",
            "lens_area_scaled",
            _FULL,
            "<",
            7.0 / 3.0,
            "f(x, d)/sqrt(x) stays below 7/3",
        ),
        ProofTask(
            "area_scaled_far_lower",
            "lens_area_scaled",
            ((0.0, 2.0), (0.0, 0.5)),
            ">",
            1.5,
            "f(x, d)/sqrt(x) exceeds 3/2 once d >= 2",
        ),
        ProofTask(
            "area_half_width_ratio",
            "lens_area_half_ratio",
            _FULL,
            ">",
            1.4,
            "sqrt(2) f(x, d) / f(x/2, d) exceeds 7/5: halving the width "
            "costs less than a sqrt(2)/(7/5) factor of area",
        ),
        ProofTask(
            "area_slope_positive",
            "lens_area_slope",
            _MID,
            ">",
            0.0,
            "f is strictly increasing in the width away from the endpoints",
        ),
        ProofTask(
            "area_concave_mid",
            "lens_area_curvature",
            _MID,
            "<=",
            -0.125,
            "f has curvature at most -1/8 for x in [0.01, 1.99]",
        ),
        ProofTask(
            "area_concave_left",
            "lens_area_curvature_excess",
            _LEFT,
            "<=",
            0.0,
            "x^1.5 (f'' + 199) <= 0, i.e. curvature <= -199, for x in [0, 0.01]",
        ),
        ProofTask(
            "term1_lower",
            "curvature_term1_weighted",
            _FULL,
            ">=",
            -2.0,
            "first curvature term, weighted by sqrt(x(2-x)), is at least -2",
        ),
        ProofTask(
            "term1_upper",
            "curvature_term1_weighted",
            _FULL,
            "<=",
            2.0,
            "first curvature term, weighted by sqrt(x(2-x)), is at most 2",
        ),
        ProofTask(
            "term2_upper",
            "curvature_term2_weighted",
            _FULL,
            "<=",
            0.0,
            "second curvature term, weighted by sqrt(x), is nonpositive",
        ),
        ProofTask(
            "term3_lower",
            "curvature_term3_weighted",
            _FULL,
            ">=",
            -1.0,
            "third curvature term, weighted by x^1.5, is at least -1",
        ),
        ProofTask(
            "term3_upper",
            "curvature_term3_weighted",
            _FULL,
            "<=",
            1.0,
            "third curvature term, weighted by x^1.5, is at most 1",
        ),
        ProofTask(
            "term3_left_upper",
            "curvature_term3_weighted",
            _LEFT,
            "<=",
            -0.2,
            "third curvature term, weighted by x^1.5, is at most -1/5 "
            "for x in [0, 0.01]",
        ),
    ]


def run_suite(
    max_boxes: int = 2**24, max_depth: int = 60
) -> list[ProofResult]:
    return [prove(task, max_boxes=max_boxes, max_depth=max_depth) for task in inequality_suite()]
