"""Enumeration of increasing events on integer boxes, as point-set bitmasks.

Points of the box prod_j {0..box[j]} are indexed in mixed radix with the
first coordinate fastest; an event is an up-closed bitmask over those
indices.  Enumeration slices on the last coordinate: an up-set is a nested
ascending chain of up-sets of the smaller box, which keeps the recursion
cheap at desk scale while the configurable cap guards the Dedekind growth.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

DEFAULT_UPSET_CAP = 10**6


class EnumerationCapError(RuntimeError):
    """Up-set enumeration would exceed the configured cap."""


def box_strides(box: tuple[int, ...]) -> tuple[int, ...]:
    strides = []
    acc = 1
    for b in box:
        strides.append(acc)
        acc *= b + 1
    return tuple(strides)


def box_size(box: tuple[int, ...]) -> int:
    size = 1
    for b in box:
        size *= b + 1
    return size


def box_points(box: tuple[int, ...]) -> list[tuple[int, ...]]:
    """All points in index order (first coordinate fastest)."""
    size = box_size(box)
    strides = box_strides(box)
    out = []
    for idx in range(size):
        out.append(tuple((idx // s) % (b + 1) for b, s in zip(box, strides)))
    return out


def point_index(box: tuple[int, ...], point: tuple[int, ...]) -> int:
    strides = box_strides(box)
    return sum(v * s for v, s in zip(point, strides))


def _count_upsets(box: tuple[int, ...]) -> int:
    # number of nested chains; cheap DP used only for the cap pre-check
    if not box:
        return 2
    inner = upset_masks_uncapped(box[:-1]) if box_size(box[:-1]) <= 20 else None
    if inner is None:
        # fall back to a crude overestimate; triggers the cap conservatively
        return DEFAULT_UPSET_CAP + 1
    counts = {mask: 1 for mask in inner}
    for _ in range(box[-1]):
        nxt = {}
        for big, ways in counts.items():
            for small in inner:
                if small & ~big == 0:
                    nxt[small] = nxt.get(small, 0) + ways
        counts = nxt
    return sum(counts.values())


@lru_cache(maxsize=None)
def upset_masks_uncapped(box: tuple[int, ...]) -> tuple[int, ...]:
    if not box:
        return (0, 1)
    inner = upset_masks_uncapped(box[:-1])
    npts = box_size(box[:-1])
    full = (1 << npts) - 1
    levels = box[-1]
    out: list[int] = []

    def extend(t: int, prev: int, acc: int):
        if t < 0:
            out.append(acc)
            return
        for mask in inner:
            if mask & ~prev == 0:
                extend(t - 1, mask, acc | (mask << (t * npts)))

    extend(levels, full, 0)
    return tuple(out)


def upset_masks(box: tuple[int, ...], cap: int | None = None) -> tuple[int, ...]:
    """All up-closed bitmasks of the box, deterministic order, cap-guarded."""
    cap = DEFAULT_UPSET_CAP if cap is None else cap
    if _count_upsets(box) > cap:
        raise EnumerationCapError(
            f"box {box} has more than {cap} increasing events"
        )
    return upset_masks_uncapped(box)


def mask_minimal_points(box: tuple[int, ...], mask: int) -> tuple[tuple[int, ...], ...]:
    """Antichain of minimal points of an up-closed mask."""
    pts = box_points(box)
    strides = box_strides(box)
    minimal = []
    for idx, p in enumerate(pts):
        if not (mask >> idx) & 1:
            continue
        if any(
            p[j] > 0 and (mask >> (idx - strides[j])) & 1 for j in range(len(box))
        ):
            continue
        minimal.append(p)
    return tuple(sorted(minimal))


def mask_from_generators(box: tuple[int, ...], gens) -> int:
    pts = box_points(box)
    gens = [tuple(g) for g in gens]
    mask = 0
    for idx, p in enumerate(pts):
        if any(all(a <= b for a, b in zip(g, p)) for g in gens):
            mask |= 1 << idx
    return mask


def mask_affected_coords(box: tuple[int, ...], mask: int) -> frozenset[int]:
    """1-based coordinates along which membership flips somewhere."""
    strides = box_strides(box)
    pts = box_points(box)
    affected = set()
    for j in range(len(box)):
        s = strides[j]
        for idx, p in enumerate(pts):
            if p[j] > 0 and (mask >> idx) & 1 and not (mask >> (idx - s)) & 1:
                affected.add(j + 1)
                break
    return frozenset(affected)


@lru_cache(maxsize=None)
def upsets_affected_by_all(box: tuple[int, ...], cap: int | None = None):
    """Up-set masks affected by every coordinate of the box (cylinders on a
    strict subset of coordinates excluded)."""
    masks = upset_masks(box, cap)
    n = len(box)
    want = frozenset(range(1, n + 1))
    return tuple(m for m in masks if mask_affected_coords(box, m) == want)


# ---------------------------------------------------------------------------
# pair atlas for negative-association sweeps


class PairClass:
    """Events on two disjoint coordinate groups, lifted to their union.

    ca/cb are sorted 1-based coordinate tuples of the ambient box; masks_a /
    masks_b live on the union sub-box's points (so intersections are plain
    ANDs), while home_masks_* live on each group's own sub-box (used to
    rebuild witnesses).
    """

    __slots__ = (
        "ca", "cb", "union_coords", "union_box",
        "masks_a", "masks_b", "home_masks_a", "home_masks_b",
    )

    def __init__(self, ca, cb, union_coords, union_box,
                 masks_a, masks_b, home_masks_a, home_masks_b):
        self.ca = ca
        self.cb = cb
        self.union_coords = union_coords
        self.union_box = union_box
        self.masks_a = masks_a
        self.masks_b = masks_b
        self.home_masks_a = home_masks_a
        self.home_masks_b = home_masks_b


def _lift_mask(mask: int, sub_box, sub_pos, union_box) -> int:
    """Lift an event mask from a coordinate group to the union sub-box.

    sub_pos maps each group coordinate to its position within the union.
    """
    out = 0
    for idx, p in enumerate(box_points(union_box)):
        q = tuple(p[k] for k in sub_pos)
        if (mask >> point_index(sub_box, q)) & 1:
            out |= 1 << idx
    return out


@lru_cache(maxsize=64)
def na_pair_atlas(box: tuple[int, ...], cap: int | None = None,
                  max_group: int | None = None):
    """All event-pair classes needed for an exhaustive NA check on the box.

    A nontrivial increasing event is a cylinder over the coordinates that
    affect it, so every pair of events with disjoint affect-sets appears in
    exactly one class (groups ordered to avoid duplicates).  Trivial events
    can never violate the inequality and are omitted.  max_group=1 restricts
    to single-coordinate (threshold) events, i.e. the NC sweep.
    """
    n = len(box)
    coords = range(1, n + 1)
    per_group: dict[tuple[int, ...], tuple[int, ...]] = {}

    def group_events(cs: tuple[int, ...]):
        if cs not in per_group:
            sub_box = tuple(box[c - 1] for c in cs)
            per_group[cs] = upsets_affected_by_all(sub_box, cap)
        return per_group[cs]

    classes = []
    subsets = []
    top = n - 1 if max_group is None else min(max_group, n - 1)
    for r in range(1, top + 1):
        subsets.extend(itertools.combinations(coords, r))
    for ca in subsets:
        for cb in subsets:
            if cb <= ca:
                continue
            if set(ca) & set(cb):
                continue
            ev_a = group_events(ca)
            ev_b = group_events(cb)
            if not ev_a or not ev_b:
                continue
            union_coords = tuple(sorted(set(ca) | set(cb)))
            union_box = tuple(box[c - 1] for c in union_coords)
            pos_a = tuple(union_coords.index(c) for c in ca)
            pos_b = tuple(union_coords.index(c) for c in cb)
            box_a = tuple(box[c - 1] for c in ca)
            box_b = tuple(box[c - 1] for c in cb)
            masks_a = tuple(_lift_mask(m, box_a, pos_a, union_box) for m in ev_a)
            masks_b = tuple(_lift_mask(m, box_b, pos_b, union_box) for m in ev_b)
            classes.append(
                PairClass(ca, cb, union_coords, union_box,
                          masks_a, masks_b, ev_a, ev_b)
            )
    return tuple(classes)


def atlas_pair_count(box: tuple[int, ...], cap: int | None = None,
                     max_group: int | None = None) -> int:
    return sum(
        len(c.masks_a) * len(c.masks_b) for c in na_pair_atlas(box, cap, max_group)
    )
