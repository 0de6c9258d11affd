"""Generalized independent urn models and their derived exact measures.

An urn model places m balls independently into n urns; ball i lands in urn j
with probability probs[i][j] (exact rationals, rows sum to 1).  From the
model we derive, all in exact arithmetic:

* the enumeration measure (joint law of the ball counts B_1..B_n),
* the occupation measure (joint law of the indicators min(B_j, 1)),
* interval measures (coordinatewise interval index of the counts),
* the conditional laws of the set of balls in the last urn, given either
  "first d urns occupied" or "first d urns hold exactly a_1..a_d balls",
* the sub-urn refinement that splits each urn beyond the first d into one
  sub-urn per ball.

Urns, balls, and coordinates are 1-based everywhere in the public API.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

from .measures import FiniteMeasure, SetMeasure
from .rationals import format_rational, parse_rational

DEFAULT_ASSIGNMENT_BUDGET = 10**7


class BudgetExceededError(RuntimeError):
    """Raised when an exhaustive enumeration would exceed its budget."""


class ZeroMassConditionError(ValueError):
    """Raised when conditioning on an event of probability zero."""


@dataclass(frozen=True)
class UrnModel:
    probs: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not self.probs or not self.probs[0]:
            raise ValueError("model needs at least one ball and one urn")
        n = len(self.probs[0])
        for row in self.probs:
            if len(row) != n:
                raise ValueError("ragged probability matrix")
            for p in row:
                if not isinstance(p, Fraction):
                    raise ValueError("probabilities must be Fractions")
                if p < 0 or p > 1:
                    raise ValueError(f"probability out of range: {p}")
            if sum(row) != 1:
                raise ValueError(f"row does not sum to 1: {row}")

    @property
    def balls(self) -> int:
        return len(self.probs)

    @property
    def urns(self) -> int:
        return len(self.probs[0])

    @staticmethod
    def from_rows(rows) -> "UrnModel":
        return UrnModel(tuple(tuple(parse_rational(p) for p in row) for row in rows))

    @staticmethod
    def ordinary(m: int, row) -> "UrnModel":
        """All m balls share the same distribution (the i.i.d. case)."""
        one = tuple(parse_rational(p) for p in row)
        return UrnModel(tuple(one for _ in range(m)))

    def to_json_dict(self) -> dict:
        return {
            "balls": self.balls,
            "urns": self.urns,
            "probs": [[format_rational(p) for p in row] for row in self.probs],
        }

    @staticmethod
    def from_json_dict(data: Mapping) -> "UrnModel":
        probs = data["probs"]
        model = UrnModel.from_rows(probs)
        if "balls" in data and int(data["balls"]) != model.balls:
            raise ValueError("'balls' disagrees with the probs matrix")
        if "urns" in data and int(data["urns"]) != model.urns:
            raise ValueError("'urns' disagrees with the probs matrix")
        return model


def assignment_count(model: UrnModel) -> int:
    return model.urns**model.balls


def _check_budget(model: UrnModel, budget: int | None):
    limit = DEFAULT_ASSIGNMENT_BUDGET if budget is None else budget
    if assignment_count(model) > limit:
        raise BudgetExceededError(
            f"{model.urns}^{model.balls} assignments exceed budget {limit}"
        )


def enumerate_assignments(
    model: UrnModel, budget: int | None = None
) -> Iterator[tuple[tuple[int, ...], Fraction]]:
    """Stream all n^m assignments sigma with their exact weights.

    sigma is a tuple of 1-based urn indices, one per ball; weights are the
    products of the per-ball probabilities and sum to 1 over the stream.
    """
    _check_budget(model, budget)
    m, n = model.balls, model.urns
    for sigma in itertools.product(range(1, n + 1), repeat=m):
        w = Fraction(1)
        for i in range(m):
            w *= model.probs[i][sigma[i] - 1]
        yield sigma, w


def occupancy_of(sigma: tuple[int, ...], n: int) -> tuple[int, ...]:
    counts = [0] * n
    for j in sigma:
        counts[j - 1] += 1
    return tuple(counts)


def enumeration_measure(model: UrnModel, budget: int | None = None) -> FiniteMeasure:
    """Exact joint law of the occupancy counts (B_1, ..., B_n).

    Computed by per-ball convolution; equal to summing assignment weights per
    occupancy vector (the enumerate_assignments oracle, tested against this).
    """
    _check_budget(model, budget)
    m, n = model.balls, model.urns
    states: dict[tuple[int, ...], Fraction] = {tuple([0] * n): Fraction(1)}
    for i in range(m):
        nxt: dict[tuple[int, ...], Fraction] = {}
        row = model.probs[i]
        for state, w in states.items():
            for j in range(n):
                p = row[j]
                if p == 0:
                    continue
                new = list(state)
                new[j] += 1
                key = tuple(new)
                nxt[key] = nxt.get(key, Fraction(0)) + w * p
        states = nxt
    return FiniteMeasure.from_dict((m,) * n, states)


def occupation_measure(model: UrnModel, budget: int | None = None) -> FiniteMeasure:
    """Exact joint law of the occupancy indicators (min(B_j, 1))_j."""
    _check_budget(model, budget)
    m, n = model.balls, model.urns
    states: dict[int, Fraction] = {0: Fraction(1)}  # occupied-urn bitmasks
    for i in range(m):
        nxt: dict[int, Fraction] = {}
        row = model.probs[i]
        for state, w in states.items():
            for j in range(n):
                p = row[j]
                if p == 0:
                    continue
                key = state | (1 << j)
                nxt[key] = nxt.get(key, Fraction(0)) + w * p
        states = nxt
    mass = {
        tuple((state >> j) & 1 for j in range(n)): w for state, w in states.items()
    }
    return FiniteMeasure.from_dict((1,) * n, mass)


@dataclass(frozen=True)
class IntervalSpec:
    """Per-urn strictly increasing cutpoints 0 = c_0 < ... < c_k = m+1.

    The final cutpoint m+1 plays the role of an unbounded threshold: counts
    never exceed m, so [c_{k-1}, m+1) is "c_{k-1} or more".
    """

    cutpoints: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for cuts in self.cutpoints:
            if len(cuts) < 2 or cuts[0] != 0:
                raise ValueError(f"cutpoints must start at 0: {cuts}")
            if any(a >= b for a, b in zip(cuts, cuts[1:])):
                raise ValueError(f"cutpoints must strictly increase: {cuts}")

    def validate_for(self, model: UrnModel):
        if len(self.cutpoints) != model.urns:
            raise ValueError("one cutpoint sequence per urn required")
        for cuts in self.cutpoints:
            if cuts[-1] != model.balls + 1:
                raise ValueError(
                    f"last cutpoint must be m+1 = {model.balls + 1}: {cuts}"
                )

    def index(self, urn: int, count: int) -> int:
        """The t with c_t <= count < c_{t+1} for the given (1-based) urn."""
        cuts = self.cutpoints[urn - 1]
        for t in range(len(cuts) - 1):
            if cuts[t] <= count < cuts[t + 1]:
                return t
        raise ValueError(f"count {count} outside cutpoint range {cuts}")

    @staticmethod
    def unit(model: UrnModel) -> "IntervalSpec":
        cuts = tuple(range(model.balls + 2))
        return IntervalSpec(tuple(cuts for _ in range(model.urns)))

    @staticmethod
    def occupancy_threshold(model: UrnModel) -> "IntervalSpec":
        cuts = (0, 1, model.balls + 1)
        return IntervalSpec(tuple(cuts for _ in range(model.urns)))


def interval_measure(
    model: UrnModel, spec: IntervalSpec, budget: int | None = None
) -> FiniteMeasure:
    """Pushforward of the enumeration measure under interval indexing."""
    spec.validate_for(model)
    mu = enumeration_measure(model, budget)
    n = model.urns
    box = tuple(len(spec.cutpoints[j]) - 2 for j in range(n))
    mass: dict[tuple[int, ...], Fraction] = {}
    for point, w in mu.mass.items():
        key = tuple(spec.index(j + 1, point[j]) for j in range(n))
        mass[key] = mass.get(key, Fraction(0)) + w
    return FiniteMeasure.from_dict(box, mass)


def _last_urn_set(sigma: tuple[int, ...], n: int) -> frozenset[int]:
    return frozenset(i + 1 for i, j in enumerate(sigma) if j == n)


def ball_set_measure_occ(
    model: UrnModel, d: int, budget: int | None = None
) -> SetMeasure:
    """Law of the ball set in urn n, given urns 1..d are all occupied."""
    if not 0 <= d <= model.urns - 1:
        raise ValueError(f"d must be in 0..n-1, got {d}")
    mass: dict[frozenset[int], Fraction] = {}
    total = Fraction(0)
    for sigma, w in enumerate_assignments(model, budget):
        if w == 0:
            continue
        occ = occupancy_of(sigma, model.urns)
        if all(occ[j] >= 1 for j in range(d)):
            total += w
            key = _last_urn_set(sigma, model.urns)
            mass[key] = mass.get(key, Fraction(0)) + w
    if total == 0:
        raise ZeroMassConditionError(f"P(first {d} urns occupied) = 0")
    return SetMeasure.from_dict(model.balls, {s: w / total for s, w in mass.items()})


def ball_set_measure_ball(
    model: UrnModel, a: tuple[int, ...], budget: int | None = None
) -> SetMeasure:
    """Law of the ball set in urn n, given B_i = a_i for i = 1..len(a)."""
    a = tuple(int(x) for x in a)
    d = len(a)
    if d > model.urns - 1:
        raise ValueError("a may constrain at most the first n-1 urns")
    if any(x < 0 for x in a):
        raise ValueError("a must be nonnegative")
    mass: dict[frozenset[int], Fraction] = {}
    total = Fraction(0)
    for sigma, w in enumerate_assignments(model, budget):
        if w == 0:
            continue
        occ = occupancy_of(sigma, model.urns)
        if all(occ[j] == a[j] for j in range(d)):
            total += w
            key = _last_urn_set(sigma, model.urns)
            mass[key] = mass.get(key, Fraction(0)) + w
    if total == 0:
        raise ZeroMassConditionError(f"P(B_1..B_{d} = {a}) = 0")
    return SetMeasure.from_dict(model.balls, {s: w / total for s, w in mass.items()})


def conditioning_probability_occ(model: UrnModel, d: int) -> Fraction:
    """P(urns 1..d all occupied)."""
    mu = occupation_measure(model)
    total = Fraction(0)
    for point, w in mu.mass.items():
        if all(point[j] == 1 for j in range(d)):
            total += w
    return total


def conditioning_probability_ball(model: UrnModel, a: tuple[int, ...]) -> Fraction:
    """P(B_i = a_i for i = 1..len(a))."""
    mu = enumeration_measure(model)
    total = Fraction(0)
    for point, w in mu.mass.items():
        if all(point[j] == a[j] for j in range(len(a))):
            total += w
    return total


@dataclass(frozen=True)
class RefinementMap:
    """Coordinate bookkeeping for the sub-urn refinement.

    Urns 1..d map through unchanged; old urn j > d splits into the m new urns
    d + m(j-d-1) + 1 .. d + m(j-d-1) + m, whose counts sum back to B_j.
    """

    balls: int
    d: int
    old_urns: int
    new_urns: int

    def block(self, j: int) -> tuple[int, ...]:
        """New urn indices whose counts sum to old B_j (for j > d)."""
        if not self.d < j <= self.old_urns:
            raise ValueError(f"urn {j} is not refined")
        base = self.d + self.balls * (j - self.d - 1)
        return tuple(base + i for i in range(1, self.balls + 1))

    def new_urn_for(self, ball: int, old_urn: int) -> int:
        if old_urn <= self.d:
            return old_urn
        return self.d + self.balls * (old_urn - self.d - 1) + ball

    def original_counts(self, refined: tuple[int, ...]) -> tuple[int, ...]:
        """Push a refined count vector back to the original urns."""
        out = list(refined[: self.d])
        for j in range(self.d + 1, self.old_urns + 1):
            out.append(sum(refined[c - 1] for c in self.block(j)))
        return tuple(out)

    def to_json_dict(self) -> dict:
        return {
            "balls": self.balls,
            "d": self.d,
            "old_urns": self.old_urns,
            "new_urns": self.new_urns,
            "blocks": {str(j): list(self.block(j)) for j in range(self.d + 1, self.old_urns + 1)},
        }


def refine_model(model: UrnModel, d: int) -> tuple[UrnModel, RefinementMap]:
    """Split every urn beyond the first d into one sub-urn per ball.

    In the refined model ball i keeps its probabilities, rerouted so that a
    ball landing in old urn j > d lands in its private sub-urn; hence every
    refined urn beyond d holds at most one ball and the refined counts there
    coincide with their occupancy indicators.
    """
    m, n = model.balls, model.urns
    if not 0 <= d < n:
        raise ValueError(f"d must be in 0..n-1, got {d}")
    new_n = d + m * (n - d)
    desc = RefinementMap(balls=m, d=d, old_urns=n, new_urns=new_n)
    rows = []
    for i in range(1, m + 1):
        row = [Fraction(0)] * new_n
        for j in range(1, n + 1):
            row[desc.new_urn_for(i, j) - 1] = model.probs[i - 1][j - 1]
        rows.append(tuple(row))
    return UrnModel(tuple(rows)), desc
