"""Shared oracles and generators, kept independent of the engine internals.

The membership evaluation, aggregation and centroid here are deliberate
re-implementations (direct formulas + dense sampling) so they can act as
oracles for the closed-form code paths.
"""
from __future__ import annotations

import random

import numpy as np
from hypothesis import strategies as st

from fuzzdss import (
    ClassificationBand,
    LinguisticVariable,
    MembershipFunction,
    Model,
    Rule,
    Shape,
    Term,
)

# --- independent membership evaluation (numpy, vectorized) ------------------


def np_mf(mf: MembershipFunction, xs: np.ndarray) -> np.ndarray:
    a, b, c = mf.a, mf.b, mf.c
    if mf.shape is Shape.SHOULDER_LEFT:
        return np.clip((c - xs) / (c - a), 0.0, 1.0)
    if mf.shape is Shape.SHOULDER_RIGHT:
        return np.clip((xs - a) / (c - a), 0.0, 1.0)
    rising = (xs - a) / (b - a)
    falling = (c - xs) / (c - b)
    return np.clip(np.minimum(rising, falling), 0.0, 1.0)


def riemann_centroid(
    consequents: list[tuple[MembershipFunction, float]],
    lo: float,
    hi: float,
    n: int = 100_000,
):
    """Centroid of max_i min(strength_i, mf_i) by dense trapezoid sums."""
    xs = np.linspace(lo, hi, n + 1)
    mu = np.zeros_like(xs)
    for mf, strength in consequents:
        mu = np.maximum(mu, np.minimum(np_mf(mf, xs), strength))
    area = np.trapezoid(mu, xs)
    if area <= 0.0:
        return None
    return float(np.trapezoid(xs * mu, xs) / area)


# --- wrap bare consequents in a minimal model so core.aggregate applies -----


def consequent_model(
    mfs: list[MembershipFunction], lo: float, hi: float
) -> Model:
    inp = LinguisticVariable(
        "x", "X", 0.0, 1.0, (Term("t", MembershipFunction(Shape.SHOULDER_LEFT, 0.0, 1.0)),)
    )
    out_terms = tuple(Term(f"o{i}", mf) for i, mf in enumerate(mfs))
    out = LinguisticVariable("out", "Out", lo, hi, out_terms)
    rules = tuple(Rule((("x", "t"),), f"o{i}") for i in range(len(mfs)))
    return Model("agg", (inp,), out, (ClassificationBand("all", lo, hi),), rules)


def random_mf(rnd: random.Random, lo: float, hi: float) -> MembershipFunction:
    shape = rnd.choice(list(Shape))
    span = hi - lo
    min_gap = 0.15 * span
    while True:
        pts = sorted(rnd.uniform(lo, hi) for _ in range(3))
        if pts[1] - pts[0] >= min_gap and pts[2] - pts[1] >= min_gap:
            break
    if shape is Shape.TRIANGLE:
        return MembershipFunction(shape, pts[0], pts[2], pts[1])
    return MembershipFunction(shape, pts[0], pts[2])


# --- hypothesis strategy for random valid models ----------------------------

_ident = st.from_regex(r"[a-z][a-z0-9_]{0,7}", fullmatch=True)
_display = st.text(
    alphabet="abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ &-",
    min_size=1,
    max_size=20,
)


def _mk_mf(kind: int, pts: list[float]) -> MembershipFunction:
    if kind == 0:
        return MembershipFunction(Shape.SHOULDER_LEFT, pts[0], pts[2])
    if kind == 1:
        return MembershipFunction(Shape.SHOULDER_RIGHT, pts[0], pts[2])
    return MembershipFunction(Shape.TRIANGLE, pts[0], pts[2], pts[1])


@st.composite
def models(draw) -> Model:
    n_inputs = draw(st.integers(1, 3))
    names = draw(
        st.lists(_ident, min_size=n_inputs + 1, max_size=n_inputs + 1, unique=True)
    )
    input_names, out_name = names[:-1], names[-1]

    def draw_var(name: str, with_bands: bool):
        lo = draw(st.floats(-5, 5).map(lambda v: round(v, 3)))
        width = draw(st.floats(1, 10).map(lambda v: round(v, 3)))
        hi = lo + width
        n_terms = draw(st.integers(1, 3))
        labels = draw(
            st.lists(_ident, min_size=n_terms, max_size=n_terms, unique=True)
        )
        terms = []
        for label in labels:
            kind = draw(st.integers(0, 2))
            fracs = sorted(
                draw(
                    st.lists(
                        st.floats(0.05, 0.95), min_size=3, max_size=3,
                        unique_by=lambda v: round(v, 2),
                    )
                )
            )
            pts = [round(lo + f * width, 4) for f in fracs]
            if len(set(pts)) < 3 or pts[2] <= pts[0]:
                pts = [lo + 0.1 * width, lo + 0.5 * width, lo + 0.9 * width]
            terms.append(Term(label, _mk_mf(kind, pts)))
        var = LinguisticVariable(
            name, draw(_display), lo, hi, tuple(terms)
        )
        if not with_bands:
            return var, ()
        cuts = sorted(
            round(lo + f * width, 4)
            for f in draw(
                st.lists(
                    st.floats(0.2, 0.8), min_size=n_terms - 1, max_size=n_terms - 1,
                    unique_by=lambda v: round(v, 1),
                )
            )
        )
        edges = [lo] + cuts + [hi]
        if len(set(edges)) != len(edges):
            edges = [lo + i * width / n_terms for i in range(n_terms)] + [hi]
        bands = tuple(
            ClassificationBand(
                draw(st.one_of(st.just(terms[i].label), _display)),
                edges[i],
                edges[i + 1],
            )
            for i in range(n_terms)
        )
        return var, bands

    inputs = tuple(draw_var(n, False)[0] for n in input_names)
    output, bands = draw_var(out_name, True)

    n_rules = draw(st.integers(1, 6))
    rules = []
    for _ in range(n_rules):
        antecedents = tuple(
            (var.name, draw(st.sampled_from([t.label for t in var.terms])))
            for var in inputs
        )
        consequent = draw(st.sampled_from([t.label for t in output.terms]))
        rules.append(Rule(antecedents, consequent))
    return Model(draw(_display), inputs, output, bands, tuple(rules))
