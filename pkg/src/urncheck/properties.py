"""Negative-dependence property checkers.

Each checker returns a PropertyReport: verdict "pass", "pass-sampled"
(sampled refutation search only), "fail" (with a witness that re-verifies
exactly), or "inconclusive" (an enumeration cap was exceeded).

The exhaustive event sweeps (NA, CNA, FM, CFM, NC, CNC) run on an integer
reformulation: support masses are scaled to a common denominator, and the
inequality mu(A and B) <= mu(A) mu(B) for a conditioned measure is tested as
w(A and B) * W <= w(A) * w(B) on the raw restricted weights with total W,
which avoids renormalizing per conditioning.  Nontrivial increasing events
are cylinders over the coordinates affecting them, so NA-type pair sweeps
enumerate events per pair of disjoint coordinate groups (see upsets).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from math import comb
from random import Random

from . import _kernels
from .measures import (
    ExternalField,
    FiniteMeasure,
    SetMeasure,
    UpSet,
    ZeroMassConditionError,
    condition,
    condition_set_measure,
    disjoint_dependence,
    dominance_coupling,
    event_probability,
    impose_external_field,
    level_conditional,
    level_probability,
    set_upset_probability,
    threshold_event,
)
from .rationals import common_integerization, format_rational
from .upsets import (
    EnumerationCapError,
    box_points,
    box_size,
    mask_minimal_points,
    na_pair_atlas,
    point_index,
    upset_masks,
)

PASS = "pass"
PASS_SAMPLED = "pass-sampled"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"


@dataclass
class PropertyReport:
    property: str
    verdict: str
    witness: dict | None = None
    details: dict = dataclass_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict in (PASS, PASS_SAMPLED)

    @property
    def failed(self) -> bool:
        return self.verdict == FAIL

    def to_json_dict(self) -> dict:
        return {
            "property": self.property,
            "verdict": self.verdict,
            "witness": self.witness,
            "details": self.details,
        }


def _measure_payload(mu: FiniteMeasure) -> dict:
    return {"box": list(mu.box), "mass": mu.to_json_list()}


def _set_measure_payload(nu: SetMeasure) -> dict:
    return {"ground": nu.ground, "mass": nu.to_json_list()}


# ---------------------------------------------------------------------------
# integer support tables shared by the event-scan engines


class _SupportTable:
    def __init__(self, mu: FiniteMeasure):
        self.mu = mu
        self.points = sorted(mu.mass)
        weights, _ = common_integerization([mu.mass[p] for p in self.points])
        self.weights = weights
        self.total = sum(weights)
        self._proj_cache: dict[tuple[int, ...], list[int]] = {}

    def projection(self, coords: tuple[int, ...]) -> list[int]:
        """Sub-box point index of each support point under the projection."""
        if coords not in self._proj_cache:
            sub_box = tuple(self.mu.box[c - 1] for c in coords)
            self._proj_cache[coords] = [
                point_index(sub_box, tuple(p[c - 1] for c in coords))
                for p in self.points
            ]
        return self._proj_cache[coords]

    def restricted(self, fixed: dict[int, int]) -> tuple[list[int], int]:
        """Raw weights with non-matching support zeroed; no renormalization."""
        if not fixed:
            return self.weights, self.total
        out = []
        total = 0
        for p, w in zip(self.points, self.weights):
            if all(p[i - 1] == a for i, a in fixed.items()):
                out.append(w)
                total += w
            else:
                out.append(0)
        return out, total

    def conditionings(self):
        """All (S, a) with positive mass: realized value-combinations only."""
        n = self.mu.dimension
        for r in range(n + 1):
            for coords in itertools.combinations(range(1, n + 1), r):
                seen = set()
                for p in self.points:
                    key = tuple(p[c - 1] for c in coords)
                    if key not in seen:
                        seen.add(key)
                for key in sorted(seen):
                    yield dict(zip(coords, key))


def _scan_args_fit_kernel(total: int, npoints: int, ncoords: int = 0) -> bool:
    return (
        total <= _kernels.INT64_SAFE_TOTAL
        and npoints <= _kernels.MAX_KERNEL_POINTS
        and ncoords <= _kernels.MAX_KERNEL_COORDS
    )


# ---------------------------------------------------------------------------
# NA / NC pair-sweep engine


class _PairEngine:
    """Per-measure state for exhaustive negative-correlation pair sweeps."""

    def __init__(self, mu: FiniteMeasure, cap: int | None = None,
                 max_group: int | None = None):
        self.table = _SupportTable(mu)
        self.box = mu.box
        self.classes = []
        for cls in na_pair_atlas(self.box, cap, max_group):
            proj = self.table.projection(cls.union_coords)
            parent_nz = 0
            for idx in proj:
                parent_nz |= 1 << idx
            # events equal on every realized sub-box point are measure-equal
            # under every conditioning of this measure: deduplicate now
            idx_a = _dedup_indices(cls.masks_a, parent_nz)
            idx_b = _dedup_indices(cls.masks_b, parent_nz)
            self.classes.append((cls, proj, idx_a, idx_b))

    def pair_count(self) -> int:
        return sum(len(ia) * len(ib) for _, _, ia, ib in self.classes)

    def violation(self, weights: list[int], total: int):
        """First violating event pair for the given restricted weights.

        Returns None or (pair_class, home_mask_a, home_mask_b).
        """
        for cls, proj, idx_a, idx_b in self.classes:
            size = box_size(cls.union_box)
            w_u = [0] * size
            for idx, w in zip(proj, weights):
                if w:
                    w_u[idx] += w
            masks_a = [cls.masks_a[i] for i in idx_a]
            masks_b = [cls.masks_b[i] for i in idx_b]
            kernel = (
                _kernels
                if _scan_args_fit_kernel(total, size)
                else _kernels.python_twin
            )
            vals_a = kernel.masked_sums(w_u, masks_a)
            vals_b = kernel.masked_sums(w_u, masks_b)
            live_a = [i for i, v in enumerate(vals_a) if 0 < v < total]
            live_b = [i for i, v in enumerate(vals_b) if 0 < v < total]
            if not live_a or not live_b:
                continue
            pairs_a = []
            pairs_b = []
            for i in live_a:
                for j in live_b:
                    pairs_a.append(i)
                    pairs_b.append(j)
            hit = kernel.upset_pair_scan(
                w_u, total, masks_a, vals_a, masks_b, vals_b, pairs_a, pairs_b
            )
            if hit >= 0:
                ia = idx_a[pairs_a[hit]]
                ib = idx_b[pairs_b[hit]]
                return cls, cls.home_masks_a[ia], cls.home_masks_b[ib]
        return None


def _dedup_indices(masks, parent_nz) -> list[int]:
    seen = {}
    for i, m in enumerate(masks):
        key = m & parent_nz
        if key not in seen:
            seen[key] = i
    return sorted(seen.values())


def _home_mask_to_upset(box, coords, home_mask) -> UpSet:
    sub_box = tuple(box[c - 1] for c in coords)
    gens = []
    for p in mask_minimal_points(sub_box, home_mask):
        g = [0] * len(box)
        for c, v in zip(coords, p):
            g[c - 1] = v
        gens.append(tuple(g))
    return UpSet.from_generators(box, gens)


def _na_witness(mu: FiniteMeasure, fixed: dict[int, int], hit) -> dict:
    cls, home_a, home_b = hit
    ev_a = _home_mask_to_upset(mu.box, cls.ca, home_a)
    ev_b = _home_mask_to_upset(mu.box, cls.cb, home_b)
    cond = condition(mu, fixed) if fixed else mu
    p_a = event_probability(cond, ev_a)
    p_b = event_probability(cond, ev_b)
    p_ab = event_probability(cond, ev_a.intersect(ev_b))
    assert disjoint_dependence(ev_a, ev_b)
    assert p_ab > p_a * p_b, "scan hit must re-verify"
    return {
        "kind": "na",
        "box": list(mu.box),
        "measure": mu.to_json_list(),
        "fixed": {str(i): a for i, a in fixed.items()},
        "event_a": ev_a.to_json(),
        "event_b": ev_b.to_json(),
        "p_a": format_rational(p_a),
        "p_b": format_rational(p_b),
        "p_ab": format_rational(p_ab),
    }


def check_NA(mu: FiniteMeasure, cap: int | None = None) -> PropertyReport:
    """Every pair of increasing events with disjoint affect-sets is
    negatively correlated."""
    try:
        engine = _PairEngine(mu, cap)
    except EnumerationCapError as exc:
        return PropertyReport("NA", INCONCLUSIVE, details={"reason": str(exc)})
    hit = engine.violation(engine.table.weights, engine.table.total)
    if hit is None:
        return PropertyReport("NA", PASS, details={"pairs": engine.pair_count()})
    return PropertyReport("NA", FAIL, witness=_na_witness(mu, {}, hit))


def check_CNA(mu: FiniteMeasure, cap: int | None = None) -> PropertyReport:
    """NA holds for every positive-probability coordinate conditioning."""
    try:
        engine = _PairEngine(mu, cap)
    except EnumerationCapError as exc:
        return PropertyReport("CNA", INCONCLUSIVE, details={"reason": str(exc)})
    tested = 0
    for fixed in engine.table.conditionings():
        weights, total = engine.table.restricted(fixed)
        if total == 0:
            continue
        tested += 1
        hit = engine.violation(weights, total)
        if hit is not None:
            return PropertyReport("CNA", FAIL, witness=_na_witness(mu, fixed, hit))
    return PropertyReport(
        "CNA", PASS, details={"conditionings": tested, "pairs": engine.pair_count()}
    )


def _nc_witness(mu, fixed, hit) -> dict:
    witness = _na_witness(mu, fixed, hit)
    witness["kind"] = "nc"
    cls, home_a, home_b = hit
    ev_a = _home_mask_to_upset(mu.box, cls.ca, home_a)
    ev_b = _home_mask_to_upset(mu.box, cls.cb, home_b)
    witness["i"] = cls.ca[0]
    witness["j"] = cls.cb[0]
    witness["s"] = max(ev_a.minimal_elements[0])
    witness["t"] = max(ev_b.minimal_elements[0])
    return witness


def check_NC(mu: FiniteMeasure) -> PropertyReport:
    """Coordinates pairwise negatively correlated at all threshold pairs."""
    engine = _PairEngine(mu, cap=None, max_group=1)
    hit = engine.violation(engine.table.weights, engine.table.total)
    if hit is None:
        return PropertyReport("NC", PASS, details={"pairs": engine.pair_count()})
    return PropertyReport("NC", FAIL, witness=_nc_witness(mu, {}, hit))


def check_CNC(mu: FiniteMeasure) -> PropertyReport:
    """NC holds for every positive-probability coordinate conditioning."""
    engine = _PairEngine(mu, cap=None, max_group=1)
    tested = 0
    for fixed in engine.table.conditionings():
        weights, total = engine.table.restricted(fixed)
        if total == 0:
            continue
        tested += 1
        hit = engine.violation(weights, total)
        if hit is not None:
            return PropertyReport("CNC", FAIL, witness=_nc_witness(mu, fixed, hit))
    return PropertyReport("CNC", PASS, details={"conditionings": tested})


# ---------------------------------------------------------------------------
# Feder-Mihail


class _FMEngine:
    """Per-measure state for the positively-correlated-coordinate sweeps."""

    def __init__(self, mu: FiniteMeasure, cap: int | None = None):
        if any(b != 1 for b in mu.box):
            raise ValueError("FM checks apply to {0,1}^n measures")
        self.mu = mu
        self.n = mu.dimension
        self.table = _SupportTable(mu)
        cube_masks = upset_masks(mu.box, cap)
        cube_idx = [point_index(mu.box, p) for p in self.table.points]
        support_masks = []
        for mask in cube_masks:
            sm = 0
            for i, ci in enumerate(cube_idx):
                if (mask >> ci) & 1:
                    sm |= 1 << i
            support_masks.append(sm)
        keep = _dedup_indices(support_masks, (1 << len(self.table.points)) - 1)
        self.event_cube_masks = [cube_masks[i] for i in keep]
        self.event_masks = [support_masks[i] for i in keep]
        self.coord_masks = []
        for j in range(1, self.n + 1):
            cm = 0
            for i, p in enumerate(self.table.points):
                if p[j - 1] == 1:
                    cm |= 1 << i
            self.coord_masks.append(cm)
        self.point_sums = [sum(p) for p in self.table.points]

    def violation(self, weights: list[int], total: int):
        """Index of an event with no positively correlated coordinate."""
        wsum = [w * s for w, s in zip(weights, self.point_sums)]
        total_sum = sum(wsum)
        kernel = (
            _kernels
            if _scan_args_fit_kernel(total, len(weights), self.n)
            else _kernels.python_twin
        )
        coord_totals = kernel.masked_sums(weights, self.coord_masks)
        idx = kernel.fm_scan(
            weights, wsum, total, total_sum,
            self.event_masks, self.coord_masks, coord_totals,
        )
        return None if idx < 0 else idx


def _fm_witness(mu, fixed, engine: _FMEngine, idx: int) -> dict:
    event = UpSet.from_generators(
        mu.box, mask_minimal_points(mu.box, engine.event_cube_masks[idx])
    )
    cond = condition(mu, fixed) if fixed else mu
    p_a = event_probability(cond, event)
    assert 0 < p_a < 1
    per_coord = []
    for j in range(1, mu.dimension + 1):
        ev_j = threshold_event(mu.box, j, 1)
        p_j = event_probability(cond, ev_j)
        p_ja = event_probability(cond, ev_j.intersect(event))
        assert p_ja < p_j * p_a, "scan hit must re-verify on every coordinate"
        per_coord.append(
            {"j": j, "p_j": format_rational(p_j), "p_ja": format_rational(p_ja)}
        )
    return {
        "kind": "fm",
        "box": list(mu.box),
        "measure": mu.to_json_list(),
        "fixed": {str(i): a for i, a in fixed.items()},
        "event": event.to_json(),
        "p_event": format_rational(p_a),
        "per_coordinate": per_coord,
    }


def check_FM(mu: FiniteMeasure, cap: int | None = None) -> PropertyReport:
    """Every nontrivial increasing event is positively correlated with some
    coordinate indicator."""
    try:
        engine = _FMEngine(mu, cap)
    except EnumerationCapError as exc:
        return PropertyReport("FM", INCONCLUSIVE, details={"reason": str(exc)})
    idx = engine.violation(engine.table.weights, engine.table.total)
    if idx is None:
        return PropertyReport(
            "FM", PASS, details={"events": len(engine.event_masks)}
        )
    return PropertyReport("FM", FAIL, witness=_fm_witness(mu, {}, engine, idx))


def check_CFM(mu: FiniteMeasure, cap: int | None = None) -> PropertyReport:
    """FM holds for every positive-probability coordinate conditioning."""
    try:
        engine = _FMEngine(mu, cap)
    except EnumerationCapError as exc:
        return PropertyReport("CFM", INCONCLUSIVE, details={"reason": str(exc)})
    tested = 0
    for fixed in engine.table.conditionings():
        weights, total = engine.table.restricted(fixed)
        if total == 0:
            continue
        tested += 1
        idx = engine.violation(weights, total)
        if idx is not None:
            return PropertyReport(
                "CFM", FAIL, witness=_fm_witness(mu, fixed, engine, idx)
            )
    return PropertyReport("CFM", PASS, details={"conditionings": tested})


# ---------------------------------------------------------------------------
# normalized matching and stochastic covering


def check_NMP(nu: SetMeasure) -> PropertyReport:
    """Each nonempty level conditional dominates the one below it.

    All k >= 0 with both levels of positive mass are checked (the theorems
    deliver k >= 0 even though the property is usually quoted for k >= 1);
    the failing k, if any, is reported.
    """
    levels_checked = []
    for k in range(nu.ground):
        lo = level_conditional(nu, k)
        hi = level_conditional(nu, k + 1)
        if lo is None or hi is None:
            continue
        levels_checked.append(k)
        ok, _, witness_gens = dominance_coupling(hi, lo)
        if not ok:
            p_lo = set_upset_probability(lo, witness_gens)
            p_hi = set_upset_probability(hi, witness_gens)
            assert p_lo > p_hi, "cut witness must re-verify"
            return PropertyReport(
                "NMP",
                FAIL,
                witness={
                    "kind": "nmp",
                    "set_measure": _set_measure_payload(nu),
                    "level": k,
                    "upset": [sorted(s) for s in witness_gens],
                    "p_low_level": format_rational(p_lo),
                    "p_high_level": format_rational(p_hi),
                },
            )
    return PropertyReport("NMP", PASS, details={"levels": levels_checked})


def check_SCP(nu: SetMeasure) -> PropertyReport:
    """Conditional measures increase in dominance as conditioned coordinates
    increase (checked over all coordinate sets and 0/1 value pairs)."""
    m = nu.ground
    pairs_tested = 0
    for r in range(1, m + 1):
        for coords in itertools.combinations(range(1, m + 1), r):
            for hi_vals in itertools.product((0, 1), repeat=r):
                for lo_vals in itertools.product((0, 1), repeat=r):
                    if lo_vals == hi_vals:
                        continue
                    if any(a > b for a, b in zip(lo_vals, hi_vals)):
                        continue
                    try:
                        lo = condition_set_measure(nu, dict(zip(coords, lo_vals)))
                        hi = condition_set_measure(nu, dict(zip(coords, hi_vals)))
                    except ZeroMassConditionError:
                        continue
                    pairs_tested += 1
                    ok, _, witness_gens = dominance_coupling(hi, lo)
                    if not ok:
                        p_lo = set_upset_probability(lo, witness_gens)
                        p_hi = set_upset_probability(hi, witness_gens)
                        assert p_lo > p_hi
                        return PropertyReport(
                            "SCP",
                            FAIL,
                            witness={
                                "kind": "scp",
                                "set_measure": _set_measure_payload(nu),
                                "coords": list(coords),
                                "low": list(lo_vals),
                                "high": list(hi_vals),
                                "upset": [sorted(s) for s in witness_gens],
                                "p_low": format_rational(p_lo),
                                "p_high": format_rational(p_hi),
                            },
                        )
    return PropertyReport("SCP", PASS, details={"pairs": pairs_tested})


# ---------------------------------------------------------------------------
# rank sequences and external fields


def rank_sequence(mu: FiniteMeasure) -> tuple[Fraction, ...]:
    if any(b != 1 for b in mu.box):
        raise ValueError("rank sequences apply to {0,1}^n measures")
    n = mu.dimension
    ranks = [Fraction(0)] * (n + 1)
    for point, w in mu.mass.items():
        ranks[sum(point)] += w
    return tuple(ranks)


def check_ULC(mu: FiniteMeasure) -> PropertyReport:
    """Rank sequence has no internal zeros and is ultra-log-concave."""
    ranks = rank_sequence(mu)
    n = mu.dimension
    payload = {
        "kind": "ulc",
        "box": list(mu.box),
        "measure": mu.to_json_list(),
        "ranks": [format_rational(r) for r in ranks],
    }
    nonzero = [j for j, r in enumerate(ranks) if r > 0]
    for j in range(nonzero[0], nonzero[-1] + 1):
        if ranks[j] == 0:
            payload["internal_zero"] = j
            return PropertyReport("ULC", FAIL, witness=payload)
    for j in range(1, n):
        lhs = (ranks[j] / comb(n, j)) ** 2
        rhs = (ranks[j + 1] / comb(n, j + 1)) * (ranks[j - 1] / comb(n, j - 1))
        if lhs < rhs:
            payload["j"] = j
            payload["lhs"] = format_rational(lhs)
            payload["rhs"] = format_rational(rhs)
            return PropertyReport("ULC", FAIL, witness=payload)
    return PropertyReport("ULC", PASS, details={"ranks": payload["ranks"]})


DEFAULT_FIELD_GRID = (Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(4))


def rayleigh_fields(n: int, grid=DEFAULT_FIELD_GRID, seed: int = 0, samples: int = 50):
    """Deterministic field stream: full grid, then seeded random rationals."""
    for combo in itertools.product(grid, repeat=n):
        yield ExternalField(tuple(combo))
    rng = Random(seed)
    numerators = list(range(1, 9))
    for _ in range(samples):
        weights = tuple(
            Fraction(rng.choice(numerators), rng.choice(numerators))
            for _ in range(n)
        )
        yield ExternalField(weights)


def check_Rayleigh(
    mu: FiniteMeasure,
    fields=None,
    seed: int = 0,
    samples: int = 50,
) -> PropertyReport:
    """NC under external fields: fail is proven, pass is sampled only.

    Universal quantification over real fields cannot be decided by sampling,
    so a clean sweep yields the two-tier "pass-sampled" verdict.
    """
    if any(b != 1 for b in mu.box):
        raise ValueError("Rayleigh checks apply to {0,1}^n measures")
    if fields is None:
        fields = rayleigh_fields(mu.dimension, seed=seed, samples=samples)
    tested = 0
    for field in fields:
        try:
            shifted = impose_external_field(mu, field)
        except ZeroMassConditionError:
            continue
        tested += 1
        report = check_NC(shifted)
        if report.failed:
            inner = report.witness
            witness = {
                "kind": "rayleigh",
                "box": list(mu.box),
                "measure": mu.to_json_list(),
                "field": [format_rational(w) for w in field.weights],
                "i": inner["i"],
                "j": inner["j"],
                "s": inner["s"],
                "t": inner["t"],
                "p_a": inner["p_a"],
                "p_b": inner["p_b"],
                "p_ab": inner["p_ab"],
            }
            return PropertyReport("Rayleigh", FAIL, witness=witness)
    return PropertyReport("Rayleigh", PASS_SAMPLED, details={"fields": tested})


# ---------------------------------------------------------------------------
# witness replay


def replay_witness(witness: dict) -> bool:
    """Re-verify a fail witness from its serialized form alone."""
    kind = witness["kind"]
    if kind in ("na", "nc"):
        mu = FiniteMeasure.from_json_list(tuple(witness["box"]), witness["measure"])
        fixed = {int(i): a for i, a in witness.get("fixed", {}).items()}
        cond = condition(mu, fixed) if fixed else mu
        ev_a = UpSet.from_json(cond.box, witness["event_a"])
        ev_b = UpSet.from_json(cond.box, witness["event_b"])
        if not disjoint_dependence(ev_a, ev_b):
            return False
        p_ab = event_probability(cond, ev_a.intersect(ev_b))
        return p_ab > event_probability(cond, ev_a) * event_probability(cond, ev_b)
    if kind == "fm":
        mu = FiniteMeasure.from_json_list(tuple(witness["box"]), witness["measure"])
        fixed = {int(i): a for i, a in witness.get("fixed", {}).items()}
        cond = condition(mu, fixed) if fixed else mu
        event = UpSet.from_json(cond.box, witness["event"])
        p_a = event_probability(cond, event)
        if not 0 < p_a < 1:
            return False
        for j in range(1, cond.dimension + 1):
            ev_j = threshold_event(cond.box, j, 1)
            p_j = event_probability(cond, ev_j)
            if event_probability(cond, ev_j.intersect(event)) >= p_j * p_a:
                return False
        return True
    if kind == "nmp":
        payload = witness["set_measure"]
        nu = SetMeasure.from_json_list(payload["ground"], payload["mass"])
        k = witness["level"]
        lo = level_conditional(nu, k)
        hi = level_conditional(nu, k + 1)
        if lo is None or hi is None:
            return False
        gens = [frozenset(s) for s in witness["upset"]]
        return set_upset_probability(lo, gens) > set_upset_probability(hi, gens)
    if kind == "scp":
        payload = witness["set_measure"]
        nu = SetMeasure.from_json_list(payload["ground"], payload["mass"])
        coords = witness["coords"]
        lo = condition_set_measure(nu, dict(zip(coords, witness["low"])))
        hi = condition_set_measure(nu, dict(zip(coords, witness["high"])))
        gens = [frozenset(s) for s in witness["upset"]]
        return set_upset_probability(lo, gens) > set_upset_probability(hi, gens)
    if kind == "ulc":
        mu = FiniteMeasure.from_json_list(tuple(witness["box"]), witness["measure"])
        ranks = rank_sequence(mu)
        if "internal_zero" in witness:
            j = witness["internal_zero"]
            nonzero = [i for i, r in enumerate(ranks) if r > 0]
            return ranks[j] == 0 and nonzero[0] < j < nonzero[-1]
        j = witness["j"]
        n = mu.dimension
        lhs = (ranks[j] / comb(n, j)) ** 2
        rhs = (ranks[j + 1] / comb(n, j + 1)) * (ranks[j - 1] / comb(n, j - 1))
        return lhs < rhs
    if kind == "rayleigh":
        mu = FiniteMeasure.from_json_list(tuple(witness["box"]), witness["measure"])
        field = ExternalField.of(witness["field"])
        shifted = impose_external_field(mu, field)
        i, j, s, t = witness["i"], witness["j"], witness["s"], witness["t"]
        ev_i = threshold_event(shifted.box, i, s)
        ev_j = threshold_event(shifted.box, j, t)
        p_ij = event_probability(shifted, ev_i.intersect(ev_j))
        return p_ij > event_probability(shifted, ev_i) * event_probability(shifted, ev_j)
    raise ValueError(f"unknown witness kind: {kind!r}")
