"""Mamdani inference over piecewise-linear membership functions.

Everything here is immutable and pure: fuzzify -> firing strengths ->
clip/max aggregation -> exact centroid -> classification band. The
aggregated output is kept as an explicit piecewise-linear node list so the
centroid integrates in closed form per segment.
"""
from __future__ import annotations

import itertools
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Optional, Sequence


class Shape(str, Enum):
    SHOULDER_LEFT = "shoulder_left"
    TRIANGLE = "triangle"
    SHOULDER_RIGHT = "shoulder_right"


class OutOfUniverseError(ValueError):
    """A crisp value fell outside a variable's universe."""

    def __init__(self, variable: str, value: float, lo: float, hi: float):
        self.variable = variable
        self.value = value
        self.lo = lo
        self.hi = hi
        super().__init__(
            f"value {value!r} for variable '{variable}' is outside its "
            f"universe [{lo}, {hi}]"
        )


class ModelConsistencyError(ValueError):
    """A rule or input binding referenced something the model does not define."""


@dataclass(frozen=True)
class MembershipFunction:
    shape: Shape
    a: float
    c: float
    b: Optional[float] = None  # triangle peak only

    def __post_init__(self):
        if self.shape is Shape.TRIANGLE:
            if self.b is None:
                raise ValueError("triangle needs a middle breakpoint")
            if not (self.a < self.b < self.c):
                raise ValueError(
                    f"triangle breakpoints must be increasing, got "
                    f"{self.a}, {self.b}, {self.c}"
                )
        else:
            if self.b is not None:
                raise ValueError(f"{self.shape.value} takes no middle breakpoint")
            if not (self.a < self.c):
                raise ValueError(
                    f"{self.shape.value} breakpoints must be increasing, got "
                    f"{self.a}, {self.c}"
                )

    def __call__(self, x: float) -> float:
        if self.shape is Shape.SHOULDER_LEFT:
            if x <= self.a:
                return 1.0
            if x >= self.c:
                return 0.0
            return (self.c - x) / (self.c - self.a)
        if self.shape is Shape.SHOULDER_RIGHT:
            if x <= self.a:
                return 0.0
            if x >= self.c:
                return 1.0
            return (x - self.a) / (self.c - self.a)
        # triangle
        if x <= self.a or x >= self.c:
            return 0.0
        if x <= self.b:
            return (x - self.a) / (self.b - self.a)
        return (self.c - x) / (self.c - self.b)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        if self.shape is Shape.TRIANGLE:
            return (self.a, self.b, self.c)
        return (self.a, self.c)


def triangle(a: float, b: float, c: float) -> MembershipFunction:
    return MembershipFunction(Shape.TRIANGLE, a, c, b)


def shoulder_left(a: float, c: float) -> MembershipFunction:
    return MembershipFunction(Shape.SHOULDER_LEFT, a, c)


def shoulder_right(a: float, c: float) -> MembershipFunction:
    return MembershipFunction(Shape.SHOULDER_RIGHT, a, c)


def eval_mf(mf: MembershipFunction, x: float) -> float:
    """Membership degree of x, always in [0, 1]."""
    return mf(x)


@dataclass(frozen=True)
class Term:
    label: str
    mf: MembershipFunction


@dataclass(frozen=True)
class LinguisticVariable:
    name: str
    display_name: str
    universe_min: float
    universe_max: float
    terms: tuple[Term, ...]

    def __post_init__(self):
        if not self.universe_min < self.universe_max:
            raise ValueError(
                f"variable '{self.name}': universe_min must be below universe_max"
            )
        labels = [t.label for t in self.terms]
        if len(labels) != len(set(labels)):
            raise ValueError(f"variable '{self.name}': duplicate term labels")
        for t in self.terms:
            # support must intersect the universe (open intersection)
            lo, hi = _support(t.mf)
            if hi <= self.universe_min or lo >= self.universe_max:
                raise ValueError(
                    f"variable '{self.name}': term '{t.label}' has no support "
                    f"inside the universe"
                )

    def term(self, label: str) -> Term:
        for t in self.terms:
            if t.label == label:
                return t
        raise ModelConsistencyError(
            f"variable '{self.name}' has no term '{label}'"
        )

    def term_labels(self) -> tuple[str, ...]:
        return tuple(t.label for t in self.terms)


def _support(mf: MembershipFunction) -> tuple[float, float]:
    # interval where the MF can be positive; shoulders extend to +/- inf
    if mf.shape is Shape.SHOULDER_LEFT:
        return (float("-inf"), mf.c)
    if mf.shape is Shape.SHOULDER_RIGHT:
        return (mf.a, float("inf"))
    return (mf.a, mf.c)


@dataclass(frozen=True)
class Rule:
    antecedents: tuple[tuple[str, str], ...]  # (variable_name, term_label)
    consequent_term: str

    def antecedent_map(self) -> dict[str, str]:
        return dict(self.antecedents)


@dataclass(frozen=True)
class ClassificationBand:
    label: str
    lower: float
    upper: float


@dataclass(frozen=True)
class Model:
    name: str
    inputs: tuple[LinguisticVariable, ...]
    output: LinguisticVariable
    bands: tuple[ClassificationBand, ...]
    rules: tuple[Rule, ...]

    def __post_init__(self):
        if not self.inputs:
            raise ValueError("model needs at least one input variable")
        if not self.rules:
            raise ValueError("model needs at least one rule")
        names = [v.name for v in self.inputs]
        if len(names) != len(set(names)):
            raise ValueError("duplicate input variable names")
        by_name = {v.name: v for v in self.inputs}
        for i, rule in enumerate(self.rules):
            seen = set()
            for var, label in rule.antecedents:
                if var not in by_name:
                    raise ModelConsistencyError(
                        f"rule {i + 1} references unknown variable '{var}'"
                    )
                if var in seen:
                    raise ModelConsistencyError(
                        f"rule {i + 1} repeats variable '{var}'"
                    )
                seen.add(var)
                by_name[var].term(label)
            missing = set(names) - seen
            if missing:
                raise ModelConsistencyError(
                    f"rule {i + 1} does not cover input(s): "
                    + ", ".join(sorted(missing))
                )
            self.output.term(rule.consequent_term)
        _check_bands(self.bands, self.output)

    def input(self, name: str) -> LinguisticVariable:
        for v in self.inputs:
            if v.name == name:
                return v
        raise ModelConsistencyError(f"model has no input variable '{name}'")

    def input_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.inputs)

    def rule_text(self, index: int) -> str:
        rule = self.rules[index]
        ants = rule.antecedent_map()
        parts = [f"{v.name} is {ants[v.name]}" for v in self.inputs if v.name in ants]
        return "if " + " and ".join(parts) + f" then {rule.consequent_term}"


def _check_bands(bands: Sequence[ClassificationBand], output: LinguisticVariable):
    if not bands:
        raise ValueError("model needs at least one classification band")
    if bands[0].lower != output.universe_min:
        raise ValueError("first band must start at the output universe minimum")
    if bands[-1].upper != output.universe_max:
        raise ValueError("last band must end at the output universe maximum")
    prev_upper = None
    for band in bands:
        if not band.lower < band.upper:
            raise ValueError(f"band '{band.label}' has inverted bounds")
        if prev_upper is not None and band.lower != prev_upper:
            raise ValueError(
                f"band '{band.label}' leaves a gap or overlap at {band.lower}"
            )
        prev_upper = band.upper


def fuzzify(var: LinguisticVariable, x: float) -> dict[str, float]:
    """Membership degree of x in every term of the variable."""
    if not (var.universe_min <= x <= var.universe_max):
        raise OutOfUniverseError(var.name, x, var.universe_min, var.universe_max)
    return {t.label: t.mf(x) for t in var.terms}


def firing_strength(
    rule: Rule, fuzzified: Mapping[str, Mapping[str, float]]
) -> float:
    """AND = min over the rule's antecedent degrees."""
    degrees = []
    for var, label in rule.antecedents:
        if var not in fuzzified:
            raise ModelConsistencyError(f"no fuzzified degrees for variable '{var}'")
        per_term = fuzzified[var]
        if label not in per_term:
            raise ModelConsistencyError(
                f"variable '{var}' has no degree for term '{label}'"
            )
        degrees.append(per_term[label])
    return min(degrees)


# --- piecewise-linear aggregation -------------------------------------------


@dataclass(frozen=True)
class AggregatedOutput:
    """Pointwise max of clipped consequents, as explicit (x, mu) nodes."""

    lo: float
    hi: float
    nodes: tuple[tuple[float, float], ...]

    def __call__(self, x: float) -> float:
        return _interp(self.nodes, x)


def _interp(nodes: Sequence[tuple[float, float]], x: float) -> float:
    xs = [p[0] for p in nodes]
    if x <= xs[0]:
        return nodes[0][1]
    if x >= xs[-1]:
        return nodes[-1][1]
    i = bisect_right(xs, x) - 1
    x0, y0 = nodes[i]
    x1, y1 = nodes[i + 1]
    if x1 == x0:
        return max(y0, y1)
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0)


def _mf_nodes(mf: MembershipFunction, lo: float, hi: float) -> list[tuple[float, float]]:
    xs = [lo] + [p for p in mf.breakpoints if lo < p < hi] + [hi]
    return [(x, mf(x)) for x in xs]


def _clip_nodes(
    nodes: Sequence[tuple[float, float]], strength: float
) -> list[tuple[float, float]]:
    out: list[tuple[float, float]] = []
    for (x0, y0), (x1, y1) in zip(nodes, nodes[1:]):
        out.append((x0, min(y0, strength)))
        if (y0 - strength) * (y1 - strength) < 0:
            xc = x0 + (strength - y0) / (y1 - y0) * (x1 - x0)
            out.append((xc, strength))
    x_last, y_last = nodes[-1]
    out.append((x_last, min(y_last, strength)))
    return out


def aggregate(model: Model, strengths: Sequence[float]) -> AggregatedOutput:
    """Clip each consequent at its rule's strength, combine by pointwise max."""
    if len(strengths) != len(model.rules):
        raise ModelConsistencyError(
            f"expected {len(model.rules)} strengths, got {len(strengths)}"
        )
    lo = model.output.universe_min
    hi = model.output.universe_max
    clipped: list[list[tuple[float, float]]] = []
    for rule, s in zip(model.rules, strengths):
        if s <= 0.0:
            continue
        mf = model.output.term(rule.consequent_term).mf
        clipped.append(_clip_nodes(_mf_nodes(mf, lo, hi), s))
    if not clipped:
        return AggregatedOutput(lo, hi, ((lo, 0.0), (hi, 0.0)))

    xs = sorted({x for nodes in clipped for x, _ in nodes})
    # pairwise crossings between segments make the max linear between nodes
    extra: list[float] = []
    for i in range(len(xs) - 1):
        x0, x1 = xs[i], xs[i + 1]
        v0 = [_interp(nodes, x0) for nodes in clipped]
        v1 = [_interp(nodes, x1) for nodes in clipped]
        for a in range(len(clipped)):
            for b in range(a + 1, len(clipped)):
                d0 = v0[a] - v0[b]
                d1 = v1[a] - v1[b]
                if d0 * d1 < 0:
                    t = d0 / (d0 - d1)
                    extra.append(x0 + t * (x1 - x0))
    all_xs = sorted(set(xs) | set(extra))
    nodes = tuple((x, max(_interp(n, x) for n in clipped)) for x in all_xs)
    return AggregatedOutput(lo, hi, nodes)


def defuzzify_centroid(agg: AggregatedOutput) -> Optional[float]:
    """Center of mass, closed form per linear segment; None on zero area."""
    areas = []
    moments = []
    for (x0, y0), (x1, y1) in zip(agg.nodes, agg.nodes[1:]):
        dx = x1 - x0
        areas.append(0.5 * (y0 + y1) * dx)
        moments.append(dx * (x0 * (2.0 * y0 + y1) + x1 * (y0 + 2.0 * y1)) / 6.0)
    area = math.fsum(areas)
    if area <= 0.0:
        return None
    return math.fsum(moments) / area


def classify_output(model: Model, value: float) -> str:
    """Band label for a crisp output value.

    Bands are half-open on the left except the first, so boundary values
    fall into the lower band: [lo, u1], (u1, u2], ... Values within 1e-9 of
    a band edge snap to it, so centroids that sit on an edge up to float
    round-off still classify into the lower band.
    """
    lo = model.output.universe_min
    hi = model.output.universe_max
    if not (lo <= value <= hi):
        raise OutOfUniverseError(model.output.name, value, lo, hi)
    for band in model.bands:
        if value <= band.upper + 1e-9:
            return band.label
    return model.bands[-1].label  # value == hi, guarded above


@dataclass(frozen=True)
class InferenceResult:
    crisp_value: Optional[float]
    category: Optional[str]
    fired_rules: tuple[tuple[int, float], ...]  # (rule index, strength > 0)
    status: str  # "ok" | "no_rule_fired"
    uncovered_combinations: tuple[tuple[tuple[str, str], ...], ...] = ()


def _activated_uncovered(
    model: Model, fuzzified: Mapping[str, Mapping[str, float]]
) -> tuple[tuple[tuple[str, str], ...], ...]:
    """Activated label combinations (all degrees > 0) with no matching rule."""
    ruled = {frozenset(r.antecedents) for r in model.rules}
    per_var = []
    for var in model.inputs:
        active = [l for l, d in fuzzified[var.name].items() if d > 0.0]
        per_var.append([(var.name, l) for l in active])
    out = []
    for combo in itertools.product(*per_var):
        if frozenset(combo) not in ruled:
            out.append(tuple(combo))
    return tuple(out)


def infer(model: Model, inputs: Mapping[str, float]) -> InferenceResult:
    """Full pipeline from crisp inputs to a classified intervention."""
    missing = set(model.input_names()) - set(inputs)
    if missing:
        raise ModelConsistencyError(
            "missing input value(s): " + ", ".join(sorted(missing))
        )
    unknown = set(inputs) - set(model.input_names())
    if unknown:
        raise ModelConsistencyError(
            "unknown input variable(s): " + ", ".join(sorted(unknown))
        )
    fuzzified = {v.name: fuzzify(v, inputs[v.name]) for v in model.inputs}
    strengths = [firing_strength(r, fuzzified) for r in model.rules]
    fired = tuple((i, s) for i, s in enumerate(strengths) if s > 0.0)
    agg = aggregate(model, strengths)
    value = defuzzify_centroid(agg)
    if value is None:
        return InferenceResult(
            crisp_value=None,
            category=None,
            fired_rules=(),
            status="no_rule_fired",
            uncovered_combinations=_activated_uncovered(model, fuzzified),
        )
    # float round-off can push the centroid marginally past the universe edge
    value = min(max(value, model.output.universe_min), model.output.universe_max)
    return InferenceResult(
        crisp_value=value,
        category=classify_output(model, value),
        fired_rules=fired,
        status="ok",
    )


# --- model diagnostics ------------------------------------------------------


@dataclass(frozen=True)
class Diagnostic:
    kind: str  # "coverage_hole" | "unreachable_rule" | "dead_zone"
    message: str
    details: tuple = ()


def validate_model(model: Model, grid_points: int = 25) -> list[Diagnostic]:
    """Non-fatal model diagnostics: term coverage holes, unreachable rules,
    and input-space dead zones found by a uniform grid scan."""
    diagnostics: list[Diagnostic] = []

    scan_n = 1001
    for var in list(model.inputs) + [model.output]:
        holes = _coverage_holes(var, scan_n)
        for lo, hi in holes:
            diagnostics.append(
                Diagnostic(
                    kind="coverage_hole",
                    message=(
                        f"variable '{var.name}' has no term support on "
                        f"approximately [{lo:g}, {hi:g}]"
                    ),
                    details=(var.name, lo, hi),
                )
            )

    axes = [
        [
            v.universe_min
            + (v.universe_max - v.universe_min) * i / (grid_points - 1)
            for i in range(grid_points)
        ]
        for v in model.inputs
    ]
    fired_ever = [False] * len(model.rules)
    dead_points: list[tuple[float, ...]] = []
    for point in itertools.product(*axes):
        fuzzified = {
            v.name: fuzzify(v, x) for v, x in zip(model.inputs, point)
        }
        any_fired = False
        for i, rule in enumerate(model.rules):
            if firing_strength(rule, fuzzified) > 0.0:
                fired_ever[i] = True
                any_fired = True
        if not any_fired:
            dead_points.append(point)

    for i, fired in enumerate(fired_ever):
        if not fired:
            diagnostics.append(
                Diagnostic(
                    kind="unreachable_rule",
                    message=(
                        f"rule {i + 1} ({model.rule_text(i)}) never fires on the "
                        f"{grid_points}-point grid scan"
                    ),
                    details=(i,),
                )
            )
    if dead_points:
        witnesses = dead_points[:5]
        names = model.input_names()
        shown = "; ".join(
            "(" + ", ".join(f"{n}={x:g}" for n, x in zip(names, p)) + ")"
            for p in witnesses
        )
        diagnostics.append(
            Diagnostic(
                kind="dead_zone",
                message=(
                    f"no rule fires at {len(dead_points)} of "
                    f"{grid_points ** len(model.inputs)} grid points, "
                    f"e.g. {shown}"
                ),
                details=tuple(dead_points),
            )
        )
    return diagnostics


def _coverage_holes(var: LinguisticVariable, n: int) -> list[tuple[float, float]]:
    holes = []
    start = None
    prev_x = var.universe_min
    for i in range(n):
        x = var.universe_min + (var.universe_max - var.universe_min) * i / (n - 1)
        covered = any(t.mf(x) > 0.0 for t in var.terms)
        if not covered and start is None:
            start = x
        elif covered and start is not None:
            if prev_x > start:
                holes.append((start, prev_x))
            start = None
        prev_x = x
    if start is not None and var.universe_max > start:
        holes.append((start, var.universe_max))
    return holes
