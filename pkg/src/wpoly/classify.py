"""Grouping quadruples by projected polygon class, and class enumeration.

Every good quadruple of genus g projects (through a determinant-d row
triple) to a lattice polygon with exactly g interior points, pinned down
up to affine unimodular equivalence.  This module groups quadruples by
the canonical form of that polygon, enumerates all candidate classes for
a genus by two independent methods, and transports curves between
quadruples in the same class through an exact rational basis change.
"""
from __future__ import annotations

import functools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import DegenerateInputError, InvariantViolation, PreconditionError
from .polygon2d import (
    LatticePolygon,
    Point2,
    UnimodularAffineMap,
    _build_polygon,
    _canonical_cycle,
    _hull_cycle,
    projection_coordinates,
)
from .quadruples import Quadruple, enumerate_g_good
from .wpolytope import Point3, build, find_unimodular_triple, minor_det

Triple3 = tuple[Point3, Point3, Point3]


@dataclass(frozen=True)
class ClassEntry:
    canonical: LatticePolygon
    n: int
    members: tuple[Quadruple, ...]
    witness_triples: tuple[Triple3, ...]


@dataclass(frozen=True)
class ClassAtlas:
    g: int
    d_max: int
    classes: tuple[ClassEntry, ...]

    def to_json_dict(self) -> dict:
        return {
            "version": 1,
            "g": self.g,
            "d_max": self.d_max,
            "classes": [
                {
                    "canonical": [[x, y] for x, y in entry.canonical.vertices],
                    "n": entry.n,
                    "members": [[*q.weights, q.d] for q in entry.members],
                }
                for entry in self.classes
            ],
        }

    def to_json_bytes(self) -> bytes:
        return (json.dumps(self.to_json_dict(), indent=2) + "\n").encode("utf-8")

    def to_csv_text(self) -> str:
        lines = ["w0,w1,w2,d,n,class_index"]
        for index, entry in enumerate(self.classes):
            for q in entry.members:
                lines.append(f"{q.w0},{q.w1},{q.w2},{q.d},{entry.n},{index}")
        return "\n".join(lines) + "\n"


def _classify_one(
    q: Quadruple, include_mirror: bool = True
) -> tuple[Quadruple, tuple[Point2, ...], int, Triple3]:
    from .polygon2d import project

    p = build(q)
    triple = find_unimodular_triple(p)
    poly = project(p, triple)
    cycle, _ = _canonical_cycle(poly.vertices, include_mirror)
    return (q, cycle, poly.n, triple)


def group_by_class(
    g: int, d_max: int, jobs: int = 1, include_mirror: bool = True
) -> ClassAtlas:
    """Atlas of genus-g quadruples up to d_max, grouped by polygon class.

    Classes are sorted by (point count, canonical vertices); members stay
    in enumeration order.  Parallel runs produce identical atlases.
    """
    quads = enumerate_g_good(g, d_max, jobs=jobs)
    worker = functools.partial(_classify_one, include_mirror=include_mirror)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(worker, quads))
    else:
        rows = [worker(q) for q in quads]
    grouped: dict[tuple[Point2, ...], dict] = {}
    for q, cycle, n, triple in rows:
        slot = grouped.setdefault(cycle, {"n": n, "members": [], "triples": []})
        if slot["n"] != n:
            raise InvariantViolation(
                f"class {cycle}: members disagree on point count ({slot['n']} vs {n})"
            )
        slot["members"].append(q)
        slot["triples"].append(triple)
    entries = []
    for cycle in sorted(grouped, key=lambda c: (grouped[c]["n"], c)):
        slot = grouped[cycle]
        poly = _build_polygon(cycle)
        if poly.n != slot["n"]:
            raise InvariantViolation(
                f"class {cycle}: canonical polygon has {poly.n} points, members have {slot['n']}"
            )
        entries.append(
            ClassEntry(
                canonical=poly,
                n=slot["n"],
                members=tuple(slot["members"]),
                witness_triples=tuple(slot["triples"]),
            )
        )
    return ClassAtlas(g=g, d_max=d_max, classes=tuple(entries))


# ---------------------------------------------------------------------------
# enumeration of polygon classes with a fixed interior count


def _pick_counts(cycle: tuple[Point2, ...]) -> tuple[int, int]:
    """(interior, total) lattice counts from vertices only."""
    k = len(cycle)
    area2 = sum(
        cycle[j][0] * cycle[(j + 1) % k][1] - cycle[(j + 1) % k][0] * cycle[j][1]
        for j in range(k)
    )
    b = sum(
        gcd(abs(cycle[(j + 1) % k][0] - cycle[j][0]), abs(cycle[(j + 1) % k][1] - cycle[j][1]))
        for j in range(k)
    )
    interior = (area2 - b + 2) // 2
    return interior, interior + b


def _inductive_cycles(
    g: int, n_max: int, include_mirror: bool
) -> set[tuple[Point2, ...]]:
    """Grow classes point by point from the unit triangle.

    A class with n+1 lattice points is reachable from one with n points
    by re-adding a vertex, so each level extends every class rep by all
    points Q near it (bounding box inflated by 2) whose hull gains
    exactly Q.  Classes keep at most g interior points along the way.
    """
    margin = 2
    unit = ((0, 0), (1, 0), (0, 1))
    start, _ = _canonical_cycle(unit, include_mirror)
    current: set[tuple[Point2, ...]] = {start}
    found: set[tuple[Point2, ...]] = set()
    if g == 0:
        found.add(start)
    level_n = 3
    while level_n < n_max and current:
        next_level: set[tuple[Point2, ...]] = set()
        for cycle in current:
            xs = [p[0] for p in cycle]
            ys = [p[1] for p in cycle]
            for qx in range(min(xs) - margin, max(xs) + margin + 1):
                for qy in range(min(ys) - margin, max(ys) + margin + 1):
                    grown = _grow_cycle(cycle, (qx, qy), level_n, g)
                    if grown is None:
                        continue
                    can, _ = _canonical_cycle(grown, include_mirror)
                    next_level.add(can)
        level_n += 1
        for cycle in next_level:
            if _pick_counts(cycle)[0] == g:
                found.add(cycle)
        current = next_level
    return found


def _grow_cycle(
    cycle: tuple[Point2, ...], q: Point2, n: int, g: int
) -> tuple[Point2, ...] | None:
    """Hull cycle of cycle+q when it gains exactly q and keeps interior <= g."""
    try:
        grown = _hull_cycle(list(cycle) + [q])
    except DegenerateInputError:
        return None
    if q not in grown:
        return None
    interior, total = _pick_counts(grown)
    if total != n + 1 or interior > g:
        return None
    return grown


def _angular_directions(bound: int) -> list[Point2]:
    """Primitive directions with coordinates in [-bound, bound], ordered
    counterclockwise starting just above angle -90 degrees."""
    dirs = [
        (dx, dy)
        for dx in range(-bound, bound + 1)
        for dy in range(-bound, bound + 1)
        if (dx, dy) != (0, 0) and gcd(abs(dx), abs(dy)) == 1
    ]

    def half(d: Point2) -> int:
        return 0 if (d[0] > 0 or (d[0] == 0 and d[1] > 0)) else 1

    def cmp(a: Point2, b: Point2) -> int:
        ha, hb = half(a), half(b)
        if ha != hb:
            return -1 if ha < hb else 1
        c = a[0] * b[1] - a[1] * b[0]
        return -1 if c > 0 else (1 if c < 0 else 0)

    return sorted(dirs, key=functools.cmp_to_key(cmp))


def _box_cycles(g: int, bound: int, include_mirror: bool) -> set[tuple[Point2, ...]]:
    """All classes with g interior points realizable inside a bound x bound
    grid (up to translation), by direct enumeration of convex vertex cycles.

    Cycles are walked counterclockwise from the lex-least vertex with
    angularly increasing primitive edge directions; a cycle is kept when
    its interior count is exactly g.  For g >= 1 the search prunes on
    twice-area > 4g + 5, which no polygon with g interior points exceeds.
    """
    dirs = _angular_directions(bound)
    index = {d: i for i, d in enumerate(dirs)}
    area_bound = 4 * g + 5 if g >= 1 else None
    found: set[tuple[Point2, ...]] = set()

    def vcross(a: Point2, b: Point2) -> int:
        return a[0] * b[1] - a[1] * b[0]

    def close(chain: list[Point2], first_dir: Point2, last_idx: int, area2: int, blen: int) -> None:
        pos = chain[-1]
        cx, cy = -pos[0], -pos[1]
        glen = gcd(abs(cx), abs(cy))
        prim = (cx // glen, cy // glen)
        ci = index.get(prim)
        if ci is None or ci <= last_idx:
            return
        if vcross(dirs[last_idx], prim) <= 0 or vcross(prim, first_dir) <= 0:
            return
        interior = (area2 - (blen + glen) + 2) // 2
        if (area2 - (blen + glen)) % 2 != 0:
            raise InvariantViolation(f"parity failure closing chain {chain}")
        if interior != g:
            return
        can, _ = _canonical_cycle(tuple(chain), include_mirror)
        found.add(can)

    def extend(chain: list[Point2], first_dir: Point2, last_idx: int, area2: int, blen: int) -> None:
        if len(chain) >= 3:
            close(chain, first_dir, last_idx, area2, blen)
        pos = chain[-1]
        ys = [p[1] for p in chain]
        for ni in range(last_idx + 1, len(dirs)):
            nd = dirs[ni]
            if vcross(dirs[last_idx], nd) <= 0:
                break
            for length in range(1, 2 * bound + 2):
                np_ = (pos[0] + length * nd[0], pos[1] + length * nd[1])
                if np_ == (0, 0):
                    break
                if np_[0] < 0 or np_[0] > bound or (np_[0] == 0 and np_[1] < 0):
                    break
                if max(max(ys), np_[1]) - min(min(ys), np_[1]) > bound:
                    break
                new_area2 = area2 + (pos[0] * np_[1] - np_[0] * pos[1])
                if area_bound is not None and new_area2 > area_bound:
                    break
                chain.append(np_)
                extend(chain, first_dir, ni, new_area2, blen + length)
                chain.pop()

    for fi, fd in enumerate(dirs):
        if fd[0] < 1:
            continue
        for length in range(1, bound + 1):
            start = (length * fd[0], length * fd[1])
            if start[0] > bound or abs(start[1]) > bound:
                break
            extend([(0, 0), start], fd, fi, 0, length)
    return found


def enumerate_classes(
    g: int,
    method: str = "inductive",
    *,
    box_bound: int | None = None,
    n_max: int | None = None,
    include_mirror: bool = True,
) -> tuple[LatticePolygon, ...]:
    """All polygon classes with exactly g interior points.

    method="inductive" grows classes point by point up to n_max (default
    3g + 7).  method="box" enumerates every class realizable in a grid of
    the given bound; the default max(3, 2g + 2) is large enough for every
    class (the widest, the triangle hull of (0,0),(2,0),(0,2g+2), needs
    width exactly 2g + 2).  The two must agree wherever both are complete.
    """
    if g < 0:
        raise PreconditionError(f"g must be >= 0, got {g}")
    if method == "inductive":
        cap = (3 * g + 7) if n_max is None else n_max
        if cap < 3:
            raise PreconditionError(f"n_max must be >= 3, got {cap}")
        cycles = _inductive_cycles(g, cap, include_mirror)
    elif method == "box":
        bound = (max(3, 2 * g + 2)) if box_bound is None else box_bound
        if bound < 1:
            raise PreconditionError(f"box bound must be >= 1, got {bound}")
        cycles = _box_cycles(g, bound, include_mirror)
        if n_max is not None:
            cycles = {c for c in cycles if _pick_counts(c)[1] <= n_max}
    else:
        raise ValueError(f"unknown method {method!r}")
    polys = [_build_polygon(c) for c in sorted(cycles, key=lambda c: (_pick_counts(c)[1], c))]
    return tuple(polys)


# ---------------------------------------------------------------------------
# basis change and curve transport


@dataclass(frozen=True)
class BasisChange:
    """Exact rational coordinate change aligning two polytopes row by row.

    matrix T satisfies row_i(M(P)) * T = row_{row_map[i]}(M(P')) for every
    row; all denominators in T divide the common degree d.
    """

    q_from: Quadruple
    q_to: Quadruple
    matrix: tuple[tuple[Fraction, Fraction, Fraction], ...]
    row_map: tuple[int, ...]
    triple_from: Triple3
    triple_to: Triple3


def _adjugate3(m: tuple[Point3, Point3, Point3]) -> list[list[int]]:
    (a, b, c), (d, e, f), (g_, h, i) = m
    return [
        [e * i - f * h, -(b * i - c * h), b * f - c * e],
        [-(d * i - f * g_), a * i - c * g_, -(a * f - c * d)],
        [d * h - e * g_, -(a * h - b * g_), a * e - b * d],
    ]


def basis_change(
    q_from: Quadruple, q_to: Quadruple, witness: UnimodularAffineMap
) -> BasisChange:
    """Coordinate change induced by a polygon equivalence witness.

    Both quadruples are projected through their first determinant-d
    triples; the witness must carry the first projected polygon onto the
    second.  The returned matrix is verified on every row.
    """
    p_from = build(q_from)
    p_to = build(q_to)
    if p_from.n != p_to.n:
        raise PreconditionError(
            f"{q_from} and {q_to} have different point counts; not one class"
        )
    t_from = find_unimodular_triple(p_from)
    t_to = find_unimodular_triple(p_to)
    coords_from = projection_coordinates(p_from, t_from)
    coords_to = projection_coordinates(p_to, t_to)
    pos_to = {pt: idx for idx, pt in enumerate(coords_to)}
    row_map = []
    for a in coords_from:
        j = pos_to.get(witness.apply(a))
        if j is None:
            raise PreconditionError(
                "witness does not map the projected polygon onto the target"
            )
        row_map.append(j)
    if len(set(row_map)) != p_from.n:
        raise PreconditionError("witness-induced row correspondence is not bijective")
    det = minor_det(*t_from)
    adj = _adjugate3(t_from)
    rows_to = [
        p_to.points[row_map[p_from.points.index(t_from[k])]] for k in range(3)
    ]
    matrix = tuple(
        tuple(
            Fraction(
                sum(adj[r][k] * rows_to[k][c] for k in range(3)), det
            )
            for c in range(3)
        )
        for r in range(3)
    )
    d = q_from.d
    for row in matrix:
        for entry in row:
            if (entry * d).denominator != 1:
                raise InvariantViolation(
                    f"basis change entry {entry} has denominator not dividing {d}"
                )
    for idx, row in enumerate(p_from.points):
        image = tuple(
            sum(Fraction(row[k]) * matrix[k][c] for k in range(3)) for c in range(3)
        )
        expected = p_to.points[row_map[idx]]
        if image != tuple(Fraction(x) for x in expected):
            raise InvariantViolation(
                f"basis change does not carry row {row} to {expected}"
            )
    return BasisChange(
        q_from=q_from,
        q_to=q_to,
        matrix=matrix,
        row_map=tuple(row_map),
        triple_from=t_from,
        triple_to=t_to,
    )


@dataclass(frozen=True)
class WeightedCurve:
    """Finite sum of monomials, each of full weighted degree d."""

    quadruple: Quadruple
    terms: tuple[tuple[Fraction, Point3], ...]

    @property
    def support(self) -> frozenset[Point3]:
        return frozenset(v for _, v in self.terms)


def make_curve(q: Quadruple, terms) -> WeightedCurve:
    """Validate and normalize curve terms (sorted by exponent vector)."""
    seen: dict[Point3, Fraction] = {}
    for coef, expo in terms:
        coef = Fraction(coef)
        if coef == 0:
            raise ValueError(f"zero coefficient for {expo}")
        v = tuple(expo)
        if len(v) != 3 or any((not isinstance(x, int)) or x < 0 for x in v):
            raise ValueError(f"bad exponent vector {expo!r}")
        if sum(x * w for x, w in zip(v, q.weights)) != q.d:
            raise ValueError(f"monomial {v} does not have weighted degree {q.d}")
        if v in seen:
            raise ValueError(f"duplicate monomial {v}")
        seen[v] = coef
    if not seen:
        raise ValueError("curve needs at least one term")
    return WeightedCurve(
        quadruple=q, terms=tuple((seen[v], v) for v in sorted(seen))
    )


def _support_conditions(support: frozenset[Point3]) -> tuple[tuple[bool, bool, bool], tuple[bool, bool, bool]]:
    """Which of the two monomial conditions the support itself witnesses."""
    cond_i = []
    cond_ii = []
    for axis in range(3):
        others = [j for j in range(3) if j != axis]
        has_i = False
        for p in support:
            if p[axis] >= 2 and all(p[j] == 0 for j in others):
                has_i = True
                break
            for j in others:
                k = [o for o in others if o != j][0]
                if p[axis] >= 1 and p[j] == 1 and p[k] == 0:
                    has_i = True
                    break
            if has_i:
                break
        cond_i.append(has_i)
        cond_ii.append(any(p[axis] == 0 for p in support))
    return (tuple(cond_i), tuple(cond_ii))


def map_curve(
    curve: WeightedCurve, bc: BasisChange, q_to: Quadruple
) -> tuple[WeightedCurve, tuple[str, ...]]:
    """Transport a curve along a basis change, term by term.

    Every monomial must land on an exponent vector of the target degree
    with integer entries.  Monomial-condition coverage of the support is
    compared before and after; regressions come back as warnings.
    """
    if curve.quadruple != bc.q_from or q_to != bc.q_to:
        raise PreconditionError("curve, basis change, and target do not line up")
    rows = set(build(curve.quadruple).points)
    if not curve.support <= rows:
        raise PreconditionError("curve support contains non-polytope monomials")
    new_terms = []
    for coef, v in curve.terms:
        image = [
            sum(Fraction(v[k]) * bc.matrix[k][c] for k in range(3)) for c in range(3)
        ]
        if any(x.denominator != 1 or x < 0 for x in image):
            raise InvariantViolation(f"monomial {v} maps to non-lattice {image}")
        iv = tuple(int(x) for x in image)
        if sum(x * w for x, w in zip(iv, q_to.weights)) != q_to.d:
            raise InvariantViolation(f"monomial {v} maps off degree {q_to.d}")
        new_terms.append((coef, iv))
    mapped = make_curve(q_to, new_terms)
    warnings = []
    before = _support_conditions(curve.support)
    after = _support_conditions(mapped.support)
    for label, idx in (("(i)", 0), ("(ii)", 1)):
        for axis in range(3):
            if before[idx][axis] and not after[idx][axis]:
                warnings.append(
                    f"support condition {label} for axis {axis} lost under mapping"
                )
    return (mapped, tuple(warnings))


@dataclass(frozen=True)
class StabilizationReport:
    g: int
    steps: tuple[tuple[int, int], ...]
    growing: bool

    def to_dict(self) -> dict:
        return {
            "g": self.g,
            "steps": [[d, c] for d, c in self.steps],
            "growing": self.growing,
        }


def stabilization_report(g: int, d_steps, jobs: int = 1) -> StabilizationReport:
    """Class counts along increasing degree bounds, flagging growth at the end."""
    steps = list(d_steps)
    if not steps or any(
        steps[i] >= steps[i + 1] for i in range(len(steps) - 1)
    ):
        raise PreconditionError(f"d_steps must be strictly increasing, got {steps}")
    counts = []
    for d_max in steps:
        atlas = group_by_class(g, d_max, jobs=jobs)
        counts.append(len(atlas.classes))
    growing = len(counts) >= 2 and counts[-1] > counts[-2]
    return StabilizationReport(
        g=g, steps=tuple(zip(steps, counts)), growing=growing
    )
