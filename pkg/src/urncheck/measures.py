"""Finite measures on bounded integer boxes, increasing events, and the
relations between them: conditioning, the affects relation, negative
correlation of events and of coordinates, stochastic dominance of set
measures, and external fields.

Conventions.  A measure lives on the box prod_j {0..box[j]}; all mass sits
inside the box.  Coordinates are 1-based in the public API.  An increasing
event (up-set) is stored by its antichain of minimal elements; membership is
"some minimal element is coordinatewise <=".  Everything is exact rational.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping

from .flownet import FlowNetwork
from .rationals import format_rational, parse_rational


class ZeroMassConditionError(ValueError):
    """Conditioning event has probability zero."""


def _leq(x, y) -> bool:
    return all(a <= b for a, b in zip(x, y))


@dataclass(frozen=True)
class FiniteMeasure:
    box: tuple[int, ...]
    mass: Mapping[tuple[int, ...], Fraction]

    @property
    def dimension(self) -> int:
        return len(self.box)

    @staticmethod
    def from_dict(box, mass: Mapping) -> "FiniteMeasure":
        box = tuple(int(b) for b in box)
        clean: dict[tuple[int, ...], Fraction] = {}
        total = Fraction(0)
        for point, w in mass.items():
            w = Fraction(w)
            if w < 0:
                raise ValueError(f"negative mass at {point}")
            if w == 0:
                continue
            point = tuple(int(x) for x in point)
            if len(point) != len(box) or any(
                not 0 <= x <= b for x, b in zip(point, box)
            ):
                raise ValueError(f"support point {point} outside box {box}")
            clean[point] = clean.get(point, Fraction(0)) + w
            total += w
        if total != 1:
            raise ValueError(f"total mass is {total}, not 1")
        return FiniteMeasure(box, MappingProxyType(clean))

    def probability(self, predicate) -> Fraction:
        return sum(
            (w for point, w in self.mass.items() if predicate(point)), Fraction(0)
        )

    def support(self):
        return self.mass.keys()

    def to_json_list(self) -> list:
        return [
            {"point": list(point), "mass": format_rational(w)}
            for point, w in sorted(self.mass.items())
        ]

    @staticmethod
    def from_json_list(box, items) -> "FiniteMeasure":
        return FiniteMeasure.from_dict(
            box, {tuple(it["point"]): parse_rational(it["mass"]) for it in items}
        )


def condition(mu: FiniteMeasure, fixed: Mapping[int, int]) -> FiniteMeasure:
    """Condition on x_i = a_i for the 1-based coordinates in `fixed`.

    The dimension is unchanged; fixed coordinates are retained.
    """
    for i, a in fixed.items():
        if not 1 <= i <= mu.dimension:
            raise ValueError(f"coordinate {i} out of range")
        if not 0 <= a <= mu.box[i - 1]:
            raise ZeroMassConditionError(f"x_{i}={a} lies outside the box")
    kept = {
        point: w
        for point, w in mu.mass.items()
        if all(point[i - 1] == a for i, a in fixed.items())
    }
    total = sum(kept.values(), Fraction(0))
    if total == 0:
        raise ZeroMassConditionError(f"conditioning {dict(fixed)} has mass 0")
    return FiniteMeasure.from_dict(mu.box, {p: w / total for p, w in kept.items()})


def marginal(mu: FiniteMeasure, coords: tuple[int, ...]) -> FiniteMeasure:
    """Marginal on the given 1-based coordinates, in the given order."""
    box = tuple(mu.box[i - 1] for i in coords)
    mass: dict[tuple[int, ...], Fraction] = {}
    for point, w in mu.mass.items():
        key = tuple(point[i - 1] for i in coords)
        mass[key] = mass.get(key, Fraction(0)) + w
    return FiniteMeasure.from_dict(box, mass)


# ---------------------------------------------------------------------------
# increasing events


@dataclass(frozen=True)
class UpSet:
    """Increasing event on a box, stored as its antichain of minimal points."""

    box: tuple[int, ...]
    minimal_elements: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_generators(box, points: Iterable[tuple[int, ...]]) -> "UpSet":
        box = tuple(int(b) for b in box)
        pts = []
        for p in points:
            p = tuple(int(x) for x in p)
            if len(p) != len(box) or any(not 0 <= x <= b for x, b in zip(p, box)):
                raise ValueError(f"generator {p} outside box {box}")
            pts.append(p)
        minimal = [p for p in pts if not any(q != p and _leq(q, p) for q in pts)]
        return UpSet(box, tuple(sorted(set(minimal))))

    @staticmethod
    def empty(box) -> "UpSet":
        return UpSet(tuple(box), ())

    @staticmethod
    def whole(box) -> "UpSet":
        box = tuple(box)
        return UpSet(box, ((0,) * len(box),))

    def contains(self, x: tuple[int, ...]) -> bool:
        return any(_leq(p, x) for p in self.minimal_elements)

    __contains__ = contains

    def is_empty(self) -> bool:
        return not self.minimal_elements

    def is_whole_box(self) -> bool:
        return self.minimal_elements == ((0,) * len(self.box),)

    def affected_coordinates(self) -> frozenset[int]:
        """1-based coordinates j for which membership can flip along j.

        Equivalent to scanning box neighbours along j (tested against that):
        j affects the event iff some minimal element has a positive j-th
        coordinate.
        """
        return frozenset(
            j + 1
            for j in range(len(self.box))
            if any(p[j] > 0 for p in self.minimal_elements)
        )

    def intersect(self, other: "UpSet") -> "UpSet":
        if self.box != other.box:
            raise ValueError("boxes differ")
        gens = []
        for p in self.minimal_elements:
            for q in other.minimal_elements:
                top = tuple(max(a, b) for a, b in zip(p, q))
                if all(x <= b for x, b in zip(top, self.box)):
                    gens.append(top)
        return UpSet.from_generators(self.box, gens)

    def union(self, other: "UpSet") -> "UpSet":
        if self.box != other.box:
            raise ValueError("boxes differ")
        return UpSet.from_generators(
            self.box, self.minimal_elements + other.minimal_elements
        )

    def to_json(self) -> list:
        return [list(p) for p in self.minimal_elements]

    @staticmethod
    def from_json(box, data) -> "UpSet":
        return UpSet.from_generators(box, [tuple(p) for p in data])


def affects(j: int, event: UpSet) -> bool:
    """Whether coordinate j (1-based) affects the event."""
    return j in event.affected_coordinates()


def affects_by_scan(j: int, event: UpSet) -> bool:
    """Literal definition: some box point flips membership along j.

    Exponential in the dimension; kept as the oracle for affects().
    """
    box = event.box
    for x in itertools.product(*(range(b + 1) for b in box)):
        if x[j - 1] == 0:
            continue
        y = x[: j - 1] + (x[j - 1] - 1,) + x[j:]
        if event.contains(x) != event.contains(y):
            return True
    return False


def disjoint_dependence(a: UpSet, b: UpSet) -> bool:
    """True when no coordinate affects both events."""
    if a.box != b.box:
        raise ValueError("boxes differ")
    return not (a.affected_coordinates() & b.affected_coordinates())


def event_probability(mu: FiniteMeasure, event: UpSet) -> Fraction:
    if event.box != mu.box:
        raise ValueError("event box does not match measure box")
    return mu.probability(event.contains)


def negatively_correlated(mu: FiniteMeasure, a: UpSet, b: UpSet) -> bool:
    """mu(A and B) <= mu(A) mu(B), with A and B intersected as up-sets."""
    pab = event_probability(mu, a.intersect(b))
    return pab <= event_probability(mu, a) * event_probability(mu, b)


def threshold_event(box, i: int, s: int) -> UpSet:
    gen = [0] * len(box)
    gen[i - 1] = s
    return UpSet.from_generators(box, [tuple(gen)])


def rv_negatively_correlated(mu: FiniteMeasure, i: int, j: int):
    """x_i and x_j negatively correlated at every threshold pair.

    Returns (True, None) or (False, (s, t)) for the first violating pair.
    Thresholds 0 give probability-1 events and cannot violate, so scanning
    within the box suffices.
    """
    if i == j:
        raise ValueError("coordinates must differ")
    for s in range(1, mu.box[i - 1] + 1):
        ev_i = threshold_event(mu.box, i, s)
        p_i = event_probability(mu, ev_i)
        for t in range(1, mu.box[j - 1] + 1):
            ev_j = threshold_event(mu.box, j, t)
            p_j = event_probability(mu, ev_j)
            p_ij = event_probability(mu, ev_i.intersect(ev_j))
            if p_ij > p_i * p_j:
                return False, (s, t)
    return True, None


def rv_positively_correlated_with_event(mu: FiniteMeasure, j: int, event: UpSet):
    """{x_j >= s} positively correlated with the event at every threshold s."""
    p_a = event_probability(mu, event)
    for s in range(1, mu.box[j - 1] + 1):
        ev_j = threshold_event(mu.box, j, s)
        p_j = event_probability(mu, ev_j)
        p_ja = event_probability(mu, ev_j.intersect(event))
        if p_ja < p_j * p_a:
            return False, s
    return True, None


# ---------------------------------------------------------------------------
# external fields


@dataclass(frozen=True)
class ExternalField:
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if any(w < 0 for w in self.weights):
            raise ValueError("field weights must be nonnegative")

    @staticmethod
    def of(values) -> "ExternalField":
        return ExternalField(tuple(parse_rational(v) for v in values))


def impose_external_field(mu: FiniteMeasure, field: ExternalField) -> FiniteMeasure:
    """Reweight a {0,1}^n measure by prod_i W_i^{x_i} and renormalize."""
    if any(b != 1 for b in mu.box):
        raise ValueError("external fields apply to {0,1}^n measures")
    if len(field.weights) != mu.dimension:
        raise ValueError("field dimension mismatch")
    reweighted: dict[tuple[int, ...], Fraction] = {}
    total = Fraction(0)
    for point, w in mu.mass.items():
        f = w
        for x, wi in zip(point, field.weights):
            if x:
                f *= wi
        if f:
            reweighted[point] = f
            total += f
    if total == 0:
        raise ZeroMassConditionError("external field kills all mass")
    return FiniteMeasure.from_dict(mu.box, {p: f / total for p, f in reweighted.items()})


# ---------------------------------------------------------------------------
# set measures (laws of a random subset of [m])


@dataclass(frozen=True)
class SetMeasure:
    ground: int
    mass: Mapping[frozenset[int], Fraction]

    @staticmethod
    def from_dict(ground: int, mass: Mapping) -> "SetMeasure":
        clean: dict[frozenset[int], Fraction] = {}
        total = Fraction(0)
        for s, w in mass.items():
            w = Fraction(w)
            if w < 0:
                raise ValueError(f"negative mass at {set(s)}")
            if w == 0:
                continue
            s = frozenset(int(x) for x in s)
            if any(not 1 <= x <= ground for x in s):
                raise ValueError(f"{set(s)} not a subset of [{ground}]")
            clean[s] = clean.get(s, Fraction(0)) + w
            total += w
        if total != 1:
            raise ValueError(f"total mass is {total}, not 1")
        return SetMeasure(ground, MappingProxyType(clean))

    def point(self, s: Iterable[int]) -> Fraction:
        return self.mass.get(frozenset(s), Fraction(0))

    def to_finite(self) -> FiniteMeasure:
        """Indicator-vector view on the box {0,1}^ground."""
        mass = {
            tuple(1 if i in s else 0 for i in range(1, self.ground + 1)): w
            for s, w in self.mass.items()
        }
        return FiniteMeasure.from_dict((1,) * self.ground, mass)

    @staticmethod
    def from_finite(mu: FiniteMeasure) -> "SetMeasure":
        if any(b != 1 for b in mu.box):
            raise ValueError("only {0,1}^m measures convert to set measures")
        mass = {
            frozenset(i + 1 for i, x in enumerate(point) if x): w
            for point, w in mu.mass.items()
        }
        return SetMeasure.from_dict(mu.dimension, mass)

    def to_json_list(self) -> list:
        items = sorted(self.mass.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))
        return [{"set": sorted(s), "mass": format_rational(w)} for s, w in items]

    @staticmethod
    def from_json_list(ground: int, items) -> "SetMeasure":
        return SetMeasure.from_dict(
            ground, {frozenset(it["set"]): parse_rational(it["mass"]) for it in items}
        )


def condition_set_measure(nu: SetMeasure, fixed: Mapping[int, int]) -> SetMeasure:
    """Condition on membership indicators: fixed[i] in {0, 1}."""
    kept: dict[frozenset[int], Fraction] = {}
    total = Fraction(0)
    for s, w in nu.mass.items():
        if all((i in s) == bool(v) for i, v in fixed.items()):
            kept[s] = w
            total += w
    if total == 0:
        raise ZeroMassConditionError(f"conditioning {dict(fixed)} has mass 0")
    return SetMeasure.from_dict(nu.ground, {s: w / total for s, w in kept.items()})


def level_probability(nu: SetMeasure, k: int) -> Fraction:
    return sum((w for s, w in nu.mass.items() if len(s) == k), Fraction(0))


def level_conditional(nu: SetMeasure, k: int) -> SetMeasure | None:
    """nu conditioned on |Z| = k, or None when that level has mass zero."""
    total = level_probability(nu, k)
    if total == 0:
        return None
    return SetMeasure.from_dict(
        nu.ground, {s: w / total for s, w in nu.mass.items() if len(s) == k}
    )


def set_upset_probability(nu: SetMeasure, generators: Iterable[frozenset[int]]) -> Fraction:
    gens = [frozenset(g) for g in generators]
    return sum(
        (w for s, w in nu.mass.items() if any(g <= s for g in gens)), Fraction(0)
    )


# ---------------------------------------------------------------------------
# stochastic dominance between set measures


def dominance_coupling(hi: SetMeasure, lo: SetMeasure):
    """Exact upward coupling of lo below hi, or a violating up-set.

    Returns (True, coupling, None) where coupling maps (S, T) with S <= T to
    positive mass, lo-marginal on the left and hi-marginal on the right; or
    (False, None, generators) with an increasing family witnessing
    lo(A) > hi(A).  Decided by exact max-flow (Strassen coupling).
    """
    if hi.ground != lo.ground:
        raise ValueError("ground sets differ")
    net = FlowNetwork()
    source, sink = ("source",), ("sink",)
    for s, w in sorted(lo.mass.items(), key=lambda kv: (len(kv[0]), sorted(kv[0]))):
        net.add_edge(source, ("lo", s), w)
    for t, w in sorted(hi.mass.items(), key=lambda kv: (len(kv[0]), sorted(kv[0]))):
        net.add_edge(("hi", t), sink, w)
    for s in sorted(lo.mass, key=lambda s: (len(s), sorted(s))):
        for t in sorted(hi.mass, key=lambda t: (len(t), sorted(t))):
            if s <= t:
                net.add_edge(("lo", s), ("hi", t), None)
    value = net.max_flow(source, sink)
    if value == 1:
        coupling = {}
        for (u, v), f in net.positive_flows():
            if f > 0 and u[0] == "lo" and v[0] == "hi":
                coupling[(u[1], v[1])] = f
        return True, coupling, None
    reachable = net.residual_reachable(source)
    gens = [u[1] for u in reachable if isinstance(u, tuple) and u[0] == "lo"]
    witness = _minimal_sets(gens)
    # The cut argument guarantees this family violates dominance; verified
    # by the caller before it is reported.
    return False, None, witness


def _minimal_sets(sets):
    sets = list(sets)
    return tuple(
        sorted(
            (s for s in sets if not any(t < s for t in sets)),
            key=lambda s: (len(s), sorted(s)),
        )
    )


def stochastically_dominates(hi: SetMeasure, lo: SetMeasure) -> bool:
    """hi(A) >= lo(A) for every increasing A, via exact flow coupling."""
    ok, _, _ = dominance_coupling(hi, lo)
    return ok


def stochastically_dominates_exhaustive(hi: SetMeasure, lo: SetMeasure) -> bool:
    """Oracle: test hi(A) >= lo(A) over every increasing family of subsets.

    Exponential (Dedekind growth); meant for ground sets of size <= 5.
    """
    from .upsets import upset_masks, box_points

    if hi.ground != lo.ground:
        raise ValueError("ground sets differ")
    m = hi.ground
    pts = box_points((1,) * m)
    index = {p: i for i, p in enumerate(pts)}

    def mask_prob(nu, mask):
        total = Fraction(0)
        for s, w in nu.mass.items():
            p = tuple(1 if i in s else 0 for i in range(1, m + 1))
            if (mask >> index[p]) & 1:
                total += w
        return total

    for mask in upset_masks((1,) * m):
        if mask_prob(hi, mask) < mask_prob(lo, mask):
            return False
    return True
