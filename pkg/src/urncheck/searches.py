"""Model families, counterexample searches, and the sweep harness.

The grid family is the deterministic desk-scale stock of models (unit rows,
uniform, one-dominant-urn rows, all row combinations); random families draw
rows with bounded denominators from a seeded generator, so every sweep is
reproducible from its seed.  The searches hunt for ULC and field-NC
(Rayleigh) violations of occupation measures by exhaustive/grid scanning in
exact arithmetic and return replayable witnesses.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from random import Random

from .measures import ZeroMassConditionError
from .properties import (
    PropertyReport,
    check_CFM,
    check_CNA,
    check_CNC,
    check_NMP,
    check_Rayleigh,
    check_ULC,
)
from .urns import (
    UrnModel,
    ball_set_measure_ball,
    ball_set_measure_occ,
    enumeration_measure,
    occupation_measure,
)

GRID_DENOMINATORS = (2, 3, 4, 5, 6, 8)


def grid_rows(n: int) -> list[tuple[Fraction, ...]]:
    """Unit rows, the uniform row, and one-dominant-urn rows."""
    rows: list[tuple[Fraction, ...]] = []
    for j in range(n):
        rows.append(tuple(Fraction(1 if k == j else 0) for k in range(n)))
    rows.append(tuple(Fraction(1, n) for _ in range(n)))
    if n == 2:
        rows.extend([(Fraction(3, 4), Fraction(1, 4)), (Fraction(1, 4), Fraction(3, 4))])
    elif n >= 3:
        rest = Fraction(1, 2 * (n - 1))
        for j in range(n):
            rows.append(
                tuple(Fraction(1, 2) if k == j else rest for k in range(n))
            )
    seen = []
    for row in rows:
        if row not in seen:
            seen.append(row)
    return seen


def grid_models(m: int, n: int) -> list[UrnModel]:
    """Every combination of grid rows: the exhaustive desk-scale family."""
    rows = grid_rows(n)
    return [UrnModel(combo) for combo in itertools.product(rows, repeat=m)]


def random_row(rng: Random, n: int, denominators=GRID_DENOMINATORS):
    """A random exact row: uniform cut points over a random denominator."""
    d = rng.choice(denominators)
    cuts = sorted(rng.randint(0, d) for _ in range(n - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [d])]
    return tuple(Fraction(p, d) for p in parts)


def random_models(
    seed: int, count: int, m_range=(1, 3), n_range=(1, 3),
    denominators=GRID_DENOMINATORS,
) -> list[UrnModel]:
    rng = Random(seed)
    out = []
    for _ in range(count):
        m = rng.randint(*m_range)
        n = rng.randint(*n_range)
        out.append(UrnModel(tuple(random_row(rng, n, denominators) for _ in range(m))))
    return out


def ordinary_row_grid(n: int, max_denominator: int = 8):
    """All distinct probability rows with entries p_i = k_i / D, D <= cap."""
    rows = set()
    for d in range(1, max_denominator + 1):
        for cuts in itertools.combinations_with_replacement(range(d + 1), n - 1):
            parts = [b - a for a, b in zip((0,) + cuts, cuts + (d,))]
            rows.add(tuple(Fraction(p, d) for p in parts))
    return sorted(rows)


def _private_shared_model(m: int, n: int, q: Fraction) -> UrnModel:
    """Ball i keeps a private urn i with probability 1-q, shared last urn
    otherwise (requires n > m); the occupation rank sequence concentrates in
    a way that breaks ultra-log-concavity for small q."""
    rows = []
    for i in range(m):
        row = [Fraction(0)] * n
        row[i] = 1 - q
        row[n - 1] = q
        rows.append(tuple(row))
    return UrnModel(tuple(rows))


def search_ulc_failure(
    max_m: int = 6,
    max_n: int = 4,
    scope: str = "ordinary",
    max_denominator: int = 8,
    seed: int = 0,
    random_count: int = 200,
):
    """First occupation measure in the family failing ULC, or None.

    scope "ordinary": exhaustive over the rational row grid, every
    m <= max_m, n <= max_n (identical balls).  scope "generalized": the
    private/shared family plus seeded random models; this one succeeds at
    desk scale, whereas no ordinary model in range fails.
    """
    if scope == "ordinary":
        for n in range(2, max_n + 1):
            for row in ordinary_row_grid(n, max_denominator):
                for m in range(2, max_m + 1):
                    model = UrnModel.ordinary(m, row)
                    report = check_ULC(occupation_measure(model))
                    if report.failed:
                        return model, report
        return None
    if scope == "generalized":
        for m in range(2, max_m + 1):
            for n in range(m + 1, max_n + 1):
                for q_num in (1, 2, 3):
                    q = Fraction(q_num, 8)
                    model = _private_shared_model(m, n, q)
                    report = check_ULC(occupation_measure(model))
                    if report.failed:
                        return model, report
        for model in random_models(
            seed, random_count, m_range=(2, max_m), n_range=(2, max_n)
        ):
            report = check_ULC(occupation_measure(model))
            if report.failed:
                return model, report
        return None
    raise ValueError(f"unknown scope {scope!r}")


def search_rayleigh_failure(
    max_m: int = 6,
    max_n: int = 4,
    scope: str = "ordinary",
    max_denominator: int = 8,
    seed: int = 0,
    field_samples: int = 20,
):
    """First occupation measure in the family failing NC under some field.

    Exhaustive over the row grid and the field grid; exact arithmetic
    throughout, witness replayable.
    """
    if scope not in ("ordinary", "generalized"):
        raise ValueError(f"unknown scope {scope!r}")
    for n in range(2, max_n + 1):
        for row in ordinary_row_grid(n, max_denominator):
            for m in range(2, max_m + 1):
                model = UrnModel.ordinary(m, row)
                report = check_Rayleigh(
                    occupation_measure(model), seed=seed, samples=field_samples
                )
                if report.failed:
                    return model, report
    return None


# ---------------------------------------------------------------------------
# sweep harness


def criterion_models(seed: int = 0, random_count: int = 50,
                     max_m: int = 3, max_n: int = 3) -> list[UrnModel]:
    """The grid family over all m, n in range plus seeded random models."""
    models = []
    for m in range(1, max_m + 1):
        for n in range(1, max_n + 1):
            models.extend(grid_models(m, n))
    models.extend(
        random_models(seed, random_count, m_range=(1, max_m), n_range=(1, max_n))
    )
    return models


def positive_ball_specs(model: UrnModel, max_entry: int | None = None):
    """All a-vectors with positive probability, entries bounded by m."""
    m, n = model.balls, model.urns
    cap = m if max_entry is None else max_entry
    mu = enumeration_measure(model)
    specs = []
    for d in range(0, n):
        seen = set()
        for point in mu.mass:
            prefix = point[:d]
            if all(v <= cap for v in prefix):
                seen.add(prefix)
        specs.extend(sorted(seen))
    return specs


def sweep_models(config: dict) -> dict:
    """Run property checks over a model family; returns a summary dict.

    config keys: seed (int), random_count, max_m, max_n, properties (list of
    "cna-occ", "cna-enum", "cnc-occ", "cnc-enum", "nmp-occ", "nmp-ball",
    "cfm-occ"), cap (up-set cap).  Deterministic given the seed; counts
    instances and collects violations (expected none for these theorems).
    """
    seed = int(config.get("seed", 0))
    models = criterion_models(
        seed=seed,
        random_count=int(config.get("random_count", 50)),
        max_m=int(config.get("max_m", 3)),
        max_n=int(config.get("max_n", 3)),
    )
    properties = config.get("properties", ["cna-occ"])
    cap = config.get("cap")
    summary = {
        "seed": seed,
        "models": len(models),
        "checks": 0,
        "violations": [],
        "inconclusive": 0,
    }

    def run(name: str, report: PropertyReport, model: UrnModel, extra=None):
        summary["checks"] += 1
        if report.verdict == "inconclusive":
            summary["inconclusive"] += 1
        elif report.failed:
            entry = {
                "property": name,
                "model": model.to_json_dict(),
                "witness": report.witness,
            }
            if extra is not None:
                entry["spec"] = extra
            summary["violations"].append(entry)

    for model in models:
        for prop in properties:
            if prop == "cna-occ":
                run(prop, check_CNA(occupation_measure(model), cap), model)
            elif prop == "cna-enum":
                run(prop, check_CNA(enumeration_measure(model), cap), model)
            elif prop == "cnc-occ":
                run(prop, check_CNC(occupation_measure(model)), model)
            elif prop == "cnc-enum":
                run(prop, check_CNC(enumeration_measure(model)), model)
            elif prop == "cfm-occ":
                run(prop, check_CFM(occupation_measure(model), cap), model)
            elif prop == "nmp-occ":
                for d in range(0, model.urns):
                    try:
                        nu = ball_set_measure_occ(model, d)
                    except ZeroMassConditionError:
                        continue
                    run(prop, check_NMP(nu), model, extra={"d": d})
            elif prop == "nmp-ball":
                for a in positive_ball_specs(model):
                    try:
                        nu = ball_set_measure_ball(model, a)
                    except ZeroMassConditionError:
                        continue
                    run(prop, check_NMP(nu), model, extra={"a": list(a)})
            else:
                raise ValueError(f"unknown sweep property {prop!r}")
    return summary
