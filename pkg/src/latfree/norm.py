"""Free-lattice norms as certified lower/upper sandwiches.

The norm of a piecewise-linear element is the supremum of Sum_i |f(x_i)|
over finite tuples of dual points whose admissibility value
(constraint_norm) is at most 1.  For the polyhedral spaces the supremum
is an exact rational, computed by one LP over the vertices of a box
subdivision of f's kink geometry; the LP duals certify optimality.  For
the remaining spaces certified lower/upper bounds are produced instead.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import (
    DimensionError,
    InternalFaultError,
    LatfreeError,
    UnsupportedSpaceError,
)
from .expr import Add, Expr, Inf, Scale, Sup, Var
from .lp import simplex_standard
from .pwl import (
    PwlFunction,
    Region,
    active_piece,
    arrangement_for,
    canonical_normals,
    difference_normals,
    equivalent,
    is_zero,
    linear_pieces,
    sup_abs_over,
    zero_pwl,
)
from .qmath import (
    Vec,
    dot,
    format_fraction,
    l1_norm,
    l2_norm_sq,
    linf_norm,
    null_space_basis,
    rationalize_vec,
    sqrt_upper,
    to_fraction,
    transpose,
    vec,
    vec_scale,
    zero_vec,
)

INF_P = "inf"

_MAX_VERTEX_SUBSETS = 2_000_000


# ---------------------------------------------------------------------------
# spaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpaceSpec:
    """Either fvl:n (n free generators) or seq:p:m (R^m with the l_p norm)."""

    kind: str
    dim: int
    p: Fraction | str | None = None

    def __post_init__(self):
        if self.kind not in ("fvl", "seq"):
            raise UnsupportedSpaceError(f"unknown space kind {self.kind!r}")
        if self.dim < 1:
            raise UnsupportedSpaceError("space dimension must be at least 1")
        if self.kind == "fvl":
            if self.p is not None:
                raise UnsupportedSpaceError("fvl spaces carry no exponent")
        else:
            if self.p != INF_P:
                if not isinstance(self.p, Fraction):
                    raise UnsupportedSpaceError("seq exponent must be rational or inf")
                if self.p < 1:
                    raise UnsupportedSpaceError("seq exponent must satisfy p >= 1")

    def __str__(self) -> str:
        if self.kind == "fvl":
            return f"fvl:{self.dim}"
        p = self.p if self.p == INF_P else format_fraction(self.p)
        return f"seq:{p}:{self.dim}"

    @property
    def is_polyhedral(self) -> bool:
        """The admissible-tuple region is a polyhedron (exact path applies)."""
        return self.kind == "fvl" or self.p == Fraction(1) or self.p == INF_P

    @property
    def exact_capable(self) -> bool:
        """Admissibility is decidable in exact rational arithmetic."""
        return self.kind == "fvl" or self.p in (Fraction(1), Fraction(2), INF_P)


def fvl_space(n: int) -> SpaceSpec:
    return SpaceSpec(kind="fvl", dim=n)


def seq_space(p, m: int) -> SpaceSpec:
    pp = INF_P if p in (INF_P, "oo", "infinity") else to_fraction(p)
    return SpaceSpec(kind="seq", dim=m, p=pp)


def parse_space(text: str) -> SpaceSpec:
    parts = text.strip().lower().split(":")
    try:
        if parts[0] == "fvl" and len(parts) == 2:
            return fvl_space(int(parts[1]))
        if parts[0] == "seq" and len(parts) == 3:
            p = parts[1] if parts[1] in ("inf", "oo", "infinity") else Fraction(parts[1])
            return seq_space(p, int(parts[2]))
    except (ValueError, ZeroDivisionError) as exc:
        raise UnsupportedSpaceError(f"cannot parse space {text!r}: {exc}") from exc
    raise UnsupportedSpaceError(
        f"cannot parse space {text!r}; expected fvl:N or seq:P:M"
    )


# ---------------------------------------------------------------------------
# tuples and certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FunctionalTuple:
    """Finite tuple of dual points inducing the seminorm Sum_i |f(x_i)|."""

    space: SpaceSpec
    points: tuple[Vec, ...]

    def __post_init__(self):
        if not self.points:
            raise DimensionError("a functional tuple needs at least one point")
        for x in self.points:
            if len(x) != self.space.dim:
                raise DimensionError(
                    f"tuple point of length {len(x)} in space {self.space}"
                )


def functional_tuple(space: SpaceSpec, points) -> FunctionalTuple:
    return FunctionalTuple(space=space, points=tuple(vec(x) for x in points))


@dataclass(frozen=True)
class NormCertificate:
    """Sandwich lower <= norm <= upper with a reproducible witness tuple."""

    lower: Fraction
    upper: Fraction
    witness: FunctionalTuple
    upper_method: str  # "exact_match" | "strong_unit_lambda_n"
    exact: bool
    lam: Fraction | None = None
    unit_support: tuple[Vec, ...] = ()

    def __post_init__(self):
        if self.lower > self.upper:
            raise InternalFaultError(
                f"certificate violates lower <= upper: {self.lower} > {self.upper}"
            )
        if self.exact and self.lower != self.upper:
            raise InternalFaultError("exact certificate with a strict sandwich")


# ---------------------------------------------------------------------------
# admissibility
# ---------------------------------------------------------------------------


def _sign_patterns(k: int):
    """Representatives of {+-1}^k modulo global sign (first entry +1)."""
    for rest in itertools.product((1, -1), repeat=k - 1):
        yield (1,) + rest


def constraint_norm(tup: FunctionalTuple, space: SpaceSpec | None = None) -> Fraction:
    """sup over the unit ball of the space of Sum_i |x_i(v)|.

    Exact for fvl and p in {1, inf}; for p = 2 a certified rational upper
    bound (exact whenever the squared value is a perfect square); for other
    p a float-based value inflated by 1e-9.
    """
    space = tup.space if space is None else space
    pts = tup.points
    if space.kind == "fvl" or space.p == Fraction(1):
        return max(
            sum((abs(x[j]) for x in pts), Fraction(0)) for j in range(space.dim)
        )
    if space.p == INF_P:
        best = Fraction(0)
        for s in _sign_patterns(len(pts)):
            combined = zero_vec(space.dim)
            for si, x in zip(s, pts):
                combined = tuple(c + si * v for c, v in zip(combined, x))
            best = max(best, l1_norm(combined))
        return best
    if space.p == Fraction(2):
        return sqrt_upper(_constraint_sq_l2(pts, space.dim))
    q = float(space.p) / (float(space.p) - 1.0) if space.p != Fraction(1) else None
    best_f = 0.0
    for s in _sign_patterns(len(pts)):
        combined = [0.0] * space.dim
        for si, x in zip(s, pts):
            for j, v in enumerate(x):
                combined[j] += si * float(v)
        best_f = max(best_f, sum(abs(c) ** q for c in combined) ** (1.0 / q))
    return to_fraction(best_f * (1.0 + 1e-9))


def _constraint_sq_l2(pts, dim: int) -> Fraction:
    """Exact square of the l2 admissibility value (max over sign patterns)."""
    best = Fraction(0)
    for s in _sign_patterns(len(pts)):
        combined = zero_vec(dim)
        for si, x in zip(s, pts):
            combined = tuple(c + si * v for c, v in zip(combined, x))
        best = max(best, l2_norm_sq(combined))
    return best


def tuple_admissible(tup: FunctionalTuple) -> bool:
    """Exact check constraint_norm(tup) <= 1 where the space allows it."""
    space = tup.space
    if space.p == Fraction(2):
        return _constraint_sq_l2(tup.points, space.dim) <= 1
    return constraint_norm(tup) <= 1


def tuple_seminorm_value(f: PwlFunction, tup: FunctionalTuple) -> Fraction:
    """Sum_i |f(x_i)| normalized by max(1, constraint_norm) — a sound lower bound."""
    if f.dim != tup.space.dim:
        raise DimensionError("function and tuple live in different dimensions")
    total = sum((abs(f.eval(x)) for x in tup.points), Fraction(0))
    return total / max(Fraction(1), constraint_norm(tup))


# ---------------------------------------------------------------------------
# exact norm on polyhedral spaces
# ---------------------------------------------------------------------------


def budget_directions(space: SpaceSpec) -> tuple[Vec, ...]:
    """Finite directions b with admissibility == (Sum_i |<x_i, b>| <= 1 for all b).

    These are the extreme points (up to sign) of the space's unit ball.
    """
    d = space.dim
    if space.kind == "fvl" or space.p == Fraction(1):
        return tuple(
            tuple(Fraction(1 if i == j else 0) for j in range(d)) for i in range(d)
        )
    if space.p == INF_P:
        return tuple(
            (Fraction(1),) + tuple(Fraction(s) for s in rest)
            for rest in itertools.product((1, -1), repeat=d - 1)
        )
    raise UnsupportedSpaceError(
        f"space {space} has a non-polyhedral unit ball; use norm_bounds"
    )


def _subdivision_vertices(f: PwlFunction, budget: tuple[Vec, ...]) -> list[Vec]:
    """Vertices of the box subdivision induced by kink and budget hyperplanes.

    The hyperplane set contains every plane where |f| or any |<., b>| can
    kink: piece differences, the pieces themselves (zero set of f), and the
    budget planes; the box facets close the subdivision.  Every vertex of
    every subdivision polytope solves d independent tight equations from
    this list, so enumerating d-subsets is a superset of what is needed,
    and extra box points are harmless LP columns.
    """
    d = f.dim
    pieces = linear_pieces(f)
    homs = canonical_normals(
        difference_normals(pieces) + [p.coeffs for p in pieces] + list(budget)
    )
    planes: list[tuple[Vec, Fraction]] = [(h, Fraction(0)) for h in homs]
    for i in range(d):
        e = tuple(Fraction(1 if j == i else 0) for j in range(d))
        planes.append((e, Fraction(1)))
        planes.append((e, Fraction(-1)))

    from math import comb

    if comb(len(planes), d) > _MAX_VERTEX_SUBSETS:
        raise LatfreeError(
            f"{len(planes)} kink planes in dimension {d} exceed desk scale"
        )

    from .qmath import solve_square_system

    seen: set[Vec] = set()
    for subset in itertools.combinations(planes, d):
        x = solve_square_system([p[0] for p in subset], [p[1] for p in subset])
        if x is not None and linf_norm(x) <= 1:
            seen.add(x)
    return sorted(seen)


def _zero_certificate(space: SpaceSpec, method: str) -> NormCertificate:
    return NormCertificate(
        lower=Fraction(0),
        upper=Fraction(0),
        witness=functional_tuple(space, (zero_vec(space.dim),)),
        upper_method=method,
        exact=space.exact_capable,
        lam=Fraction(0) if method == "strong_unit_lambda_n" else None,
    )


def norm_exact_polyhedral(f: PwlFunction, space: SpaceSpec) -> NormCertificate:
    """Exact norm for fvl / seq:1 / seq:inf, with an LP-dual optimality proof.

    Scaling any admissible tuple point into the box and splitting it over
    the vertices of its subdivision polytope preserves both the objective
    and every budget row (all are linear there), so the supremum equals

        max { Sum_v lam_v |f(v)| : Sum_v lam_v |<v,b>| <= 1 for all b }

    over the finite vertex set.  The optimal basis gives the witness tuple
    {lam_v * v}; the exact dual y gives Sum_b y_b |<x,b>| >= |f(x)| on the
    whole space, hence value = Sum_b y_b is also an upper bound.
    """
    if f.dim != space.dim:
        raise DimensionError("function dimension does not match the space")
    if not space.is_polyhedral:
        raise UnsupportedSpaceError(
            f"space {space} is not polyhedral; use norm_bounds"
        )
    if is_zero(f):
        return _zero_certificate(space, "exact_match")

    budget = budget_directions(space)
    vertices = _subdivision_vertices(f, budget)
    objective = [abs(f.eval(v)) for v in vertices]
    matrix = [[abs(dot(v, b)) for v in vertices] for b in budget]
    rows = [(tuple(row), "<=", Fraction(1)) for row in matrix]
    res = simplex_standard(objective, rows)
    if res.status != "optimal":
        raise InternalFaultError(f"vertex LP ended {res.status}, expected optimal")
    value = res.value
    if value <= 0:
        raise InternalFaultError("nonzero element received a nonpositive norm")

    duals = res.duals
    if duals is None or len(duals) != len(budget):
        raise InternalFaultError("vertex LP returned no usable duals")
    if any(y < 0 for y in duals):
        raise InternalFaultError("negative LP dual on a <= row")
    if sum(duals, Fraction(0)) != value:
        raise InternalFaultError("LP dual value does not match the optimum")
    for j, c in enumerate(objective):
        covered = sum(
            (y * matrix[i][j] for i, y in enumerate(duals)), Fraction(0)
        )
        if covered < c:
            raise InternalFaultError("LP dual fails to dominate a vertex column")

    points = sorted(
        vec_scale(lam, v)
        for lam, v in zip(res.point, vertices)
        if lam > 0
    )
    witness = functional_tuple(space, points)
    if constraint_norm(witness) > 1:
        raise InternalFaultError("witness tuple is not admissible")
    if tuple_seminorm_value(f, witness) != value:
        raise InternalFaultError("witness does not reproduce the exact norm")
    return NormCertificate(
        lower=value,
        upper=value,
        witness=witness,
        upper_method="exact_match",
        exact=True,
    )


# ---------------------------------------------------------------------------
# independent oracle: one LP slot per (cell, sign)
# ---------------------------------------------------------------------------


def norm_by_cell_assignment(
    f: PwlFunction, space: SpaceSpec, duplicate_slot: int | None = None
) -> Fraction:
    """Exact norm via one tuple slot per (cell, sign) pair of f's arrangement.

    Two admissible points in the same cell whose values carry the same sign
    merge by addition without losing objective or admissibility, so one
    slot per (cell, sign) suffices; duplicate_slot adds a redundant copy of
    the given slot, which must never improve the optimum.  Only for spaces
    whose budget is per-coordinate (fvl / seq:1), where |x_ij| splits as
    u + w with x = u - w.
    """
    if f.dim != space.dim:
        raise DimensionError("function dimension does not match the space")
    if not (space.kind == "fvl" or space.p == Fraction(1)):
        raise UnsupportedSpaceError(
            "cell-assignment oracle requires a per-coordinate budget"
        )
    if is_zero(f):
        return Fraction(0)
    d = f.dim
    arr = arrangement_for(f)
    pieces = linear_pieces(f)
    slots = []
    for cell in arr.cells:
        act = active_piece(f, arr, cell, pieces)
        for sign in (1, -1):
            slots.append((cell, act, sign))
    if duplicate_slot is not None:
        slots.append(slots[duplicate_slot])

    nvars = 2 * d * len(slots)

    def var_index(slot: int, coord: int, positive: bool) -> int:
        return 2 * d * slot + coord + (0 if positive else d)

    objective = [Fraction(0)] * nvars
    rows = []
    for s, (cell, act, sign) in enumerate(slots):
        for i, c in enumerate(act.coeffs):
            objective[var_index(s, i, True)] = sign * c
            objective[var_index(s, i, False)] = -sign * c
        constraints = [
            (h.coeffs, -chi) for h, chi in zip(arr.hyperplanes, cell.signs)
        ] + [(act.coeffs, -sign)]
        for coeffs, factor in constraints:
            row = [Fraction(0)] * nvars
            for i, c in enumerate(coeffs):
                row[var_index(s, i, True)] = factor * c
                row[var_index(s, i, False)] = -factor * c
            rows.append((tuple(row), "<=", Fraction(0)))
    for j in range(d):
        row = [Fraction(0)] * nvars
        for s in range(len(slots)):
            row[var_index(s, j, True)] = Fraction(1)
            row[var_index(s, j, False)] = Fraction(1)
        rows.append((tuple(row), "<=", Fraction(1)))

    res = simplex_standard(objective, rows)
    if res.status != "optimal":
        raise InternalFaultError(f"cell-assignment LP ended {res.status}")
    return res.value


# ---------------------------------------------------------------------------
# certified bounds for every space
# ---------------------------------------------------------------------------


def _row_norm_upper(row: Vec, space: SpaceSpec) -> Fraction:
    """Certified upper bound on the space norm of a generator row."""
    if space.kind == "fvl" or space.p == Fraction(1):
        return l1_norm(row)
    if space.p == INF_P:
        return linf_norm(row)
    if space.p == Fraction(2):
        return sqrt_upper(l2_norm_sq(row))
    p = float(space.p)
    val = sum(abs(float(v)) ** p for v in row) ** (1.0 / p)
    return to_fraction(val * (1.0 + 1e-9))


def strong_unit_factor(f: PwlFunction):
    """(lam, unit_rows) with |f| <= lam * Sum_j |<x_j, .>| everywhere.

    lam is the exact sup of |f| rewritten over its composition values y,
    restricted to the image subspace of the composition matrix and the
    l1 ball Sum_j |y_j| <= 1; f depends on its argument only through y,
    and a vanishing budget forces a vanishing value, so the bound is tight
    and always finite.
    """
    n = len(f.comp)
    shadow = PwlFunction.from_expr(f.expr, n)
    identity = tuple(
        tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)
    )
    image_rows = tuple(
        (c, "=", Fraction(0)) for c in null_space_basis(transpose(f.comp))
    )
    region = Region(linear=image_rows, abs_groups=((identity, Fraction(1)),))
    lam, _ = sup_abs_over(shadow, region)
    return lam, tuple(f.comp)


def _eval_float(e: Expr, vals) -> float:
    match e:
        case Var(index=i):
            return vals[i - 1]
        case Scale(coeff=c, child=ch):
            return float(c) * _eval_float(ch, vals)
        case Add(left=l, right=r):
            return _eval_float(l, vals) + _eval_float(r, vals)
        case Sup(left=l, right=r):
            return max(_eval_float(l, vals), _eval_float(r, vals))
        case Inf(left=l, right=r):
            return min(_eval_float(l, vals), _eval_float(r, vals))
    raise TypeError(f"not an expression node: {e!r}")


def _pwl_float(f: PwlFunction, x) -> float:
    comp = [[float(v) for v in row] for row in f.comp]
    return _eval_float(f.expr, [sum(c * xi for c, xi in zip(row, x)) for row in comp])


def _constraint_float(points, space: SpaceSpec) -> float:
    if space.kind == "fvl" or space.p == Fraction(1):
        return max(
            sum(abs(x[j]) for x in points) for j in range(space.dim)
        )
    if space.p == INF_P:
        q = 1.0
    elif space.p == Fraction(2):
        q = 2.0
    else:
        p = float(space.p)
        q = p / (p - 1.0) if p > 1.0 else float("inf")
    best = 0.0
    for s in _sign_patterns(len(points)):
        combined = [0.0] * space.dim
        for si, x in zip(s, points):
            for j, v in enumerate(x):
                combined[j] += si * v
        if q == float("inf"):
            best = max(best, max(abs(c) for c in combined))
        else:
            best = max(best, sum(abs(c) ** q for c in combined) ** (1.0 / q))
    return best


def _dual_ball_region(space: SpaceSpec) -> Region | None:
    """Admissible single points {x : constraint_norm({x}) <= 1}, if polyhedral."""
    d = space.dim
    if space.kind == "fvl" or space.p == Fraction(1):
        rows = []
        for i in range(d):
            e = tuple(Fraction(1 if j == i else 0) for j in range(d))
            rows.append((e, "<=", Fraction(1)))
            rows.append((tuple(-v for v in e), "<=", Fraction(1)))
        return Region(linear=tuple(rows))
    if space.p == INF_P:
        identity = tuple(
            tuple(Fraction(1 if i == j else 0) for j in range(d)) for i in range(d)
        )
        return Region(abs_groups=((identity, Fraction(1)),))
    return None


def _sweep_candidates(
    f: PwlFunction, space: SpaceSpec, extra_points: tuple[Vec, ...] = ()
) -> list[FunctionalTuple]:
    d = space.dim
    out: list[tuple[Vec, ...]] = [(p,) for p in extra_points]

    region = _dual_ball_region(space)
    if region is not None:
        _, wit = sup_abs_over(f, region)
        if wit is not None:
            out.append((wit,))
    if space.p == Fraction(2):
        for piece in sorted(linear_pieces(f), key=lambda p: p.coeffs):
            sq = l2_norm_sq(piece.coeffs)
            if sq > 0:
                out.append((vec_scale(1 / sqrt_upper(sq), piece.coeffs),))

    for s in _sign_patterns(d):
        out.append((vec(s),))

    basis = [
        tuple(Fraction(1 if i == j else 0) for j in range(d)) for i in range(d)
    ]
    signed = []
    for e in basis:
        neg = tuple(-v for v in e)
        signed.append(e if abs(f.eval(e)) >= abs(f.eval(neg)) else neg)
    out.append(tuple(signed))
    out.append(tuple(basis))

    arr = arrangement_for(f)
    for cell in arr.cells[:16]:
        out.append((cell.interior,))

    tuples = []
    seen = set()
    for points in out:
        for variant in _admissible_variants(points, space):
            if variant not in seen:
                seen.add(variant)
                tuples.append(FunctionalTuple(space=space, points=variant))
    return tuples


def _admissible_variants(points: tuple[Vec, ...], space: SpaceSpec):
    """The tuple as given plus a copy rescaled to admissibility value ~1."""
    yield points
    cn = constraint_norm(FunctionalTuple(space=space, points=points))
    if cn > 0 and cn != 1:
        yield tuple(vec_scale(1 / cn, x) for x in points)


def _ascent_restart(f: PwlFunction, space: SpaceSpec, seed: int, r: int):
    """One deterministic hill-climbing run; returns float points."""
    rng = random.Random((seed * 1_000_003 + r) & 0xFFFFFFFF)
    d = space.dim
    k = 1 + r % 3

    def score(ps) -> float:
        cn = _constraint_float(ps, space)
        if cn < 1e-12:
            return 0.0
        return sum(abs(_pwl_float(f, x)) for x in ps) / max(1.0, cn)

    pts = [[rng.uniform(-1.0, 1.0) for _ in range(d)] for _ in range(k)]
    best = score(pts)
    step = 0.6
    for _ in range(240):
        i = rng.randrange(k)
        j = rng.randrange(d)
        cand = [list(x) for x in pts]
        cand[i][j] += step * (2.0 * rng.random() - 1.0)
        cn = _constraint_float(cand, space)
        if cn > 1e-12:
            cand = [[v / max(1.0, cn) for v in x] for x in cand]
        s = score(cand)
        if s > best:
            best, pts = s, cand
        else:
            step *= 0.985
    return pts


def norm_bounds(
    f: PwlFunction,
    space: SpaceSpec,
    *,
    restarts: int = 16,
    seed: int = 0,
    threads: int = 1,
    max_denominator: int = 10**6,
) -> NormCertificate:
    """Certified sandwich for any space: sweep + ascent lower, strong-unit upper.

    The lower bound is the best exact re-score over deterministic candidate
    tuples and rationalized hill-climbing results (identical for any thread
    count: restarts are independent, keyed by (seed, index), and merged by
    value then lexicographic witness).  The upper bound is lam * Sum_j ||x_j||
    over the composition rows, with lam exact from strong_unit_factor.
    """
    if f.dim != space.dim:
        raise DimensionError("function dimension does not match the space")
    eq_zero, nonzero_witness = equivalent(f, zero_pwl(f.dim))
    if eq_zero:
        return _zero_certificate(space, "strong_unit_lambda_n")

    lam, unit_rows = strong_unit_factor(f)
    unit_sum = sum((_row_norm_upper(row, space) for row in unit_rows), Fraction(0))
    upper = lam * unit_sum

    best_value = Fraction(0)
    best_witness = functional_tuple(space, (zero_vec(space.dim),))
    for tup in _sweep_candidates(f, space, extra_points=(nonzero_witness,)):
        value = tuple_seminorm_value(f, tup)
        if value > best_value or (
            value == best_value and tup.points < best_witness.points
        ):
            best_value, best_witness = value, tup

    if restarts > 0:
        with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
            runs = list(
                pool.map(
                    lambda r: _ascent_restart(f, space, seed, r), range(restarts)
                )
            )
        for float_pts in runs:
            points = tuple(
                rationalize_vec(x, max_denominator) for x in float_pts
            )
            if all(len(x) == space.dim for x in points):
                tup = FunctionalTuple(space=space, points=points)
                value = tuple_seminorm_value(f, tup)
                if value > best_value or (
                    value == best_value and points < best_witness.points
                ):
                    best_value, best_witness = value, tup

    exact_capable = space.exact_capable
    if best_value > upper:
        if exact_capable:
            raise InternalFaultError(
                f"sound bounds crossed: lower {best_value} > upper {upper}"
            )
        best_value = upper
    return NormCertificate(
        lower=best_value,
        upper=upper,
        witness=best_witness,
        upper_method="strong_unit_lambda_n",
        exact=exact_capable and best_value == upper,
        lam=lam,
        unit_support=unit_rows,
    )


def norm_certificate(
    f: PwlFunction, space: SpaceSpec, **opts
) -> NormCertificate:
    """Exact norm when the space is polyhedral, else certified bounds."""
    if space.is_polyhedral:
        return norm_exact_polyhedral(f, space)
    return norm_bounds(f, space, **opts)


# ---------------------------------------------------------------------------
# maximality audit
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeminormHandle:
    """A lattice seminorm with certified comparison against rational bounds.

    leq(f, bound) decides nu(f) <= bound exactly (for l2-valued seminorms
    the comparison is made on squares, avoiding square roots); display(f)
    is for reports only and may round.
    """

    name: str
    leq: Callable[[PwlFunction, Fraction], bool]
    display: Callable[[PwlFunction], str]


def evaluation_seminorm(tup: FunctionalTuple, name: str | None = None) -> SeminormHandle:
    label = name or f"eval[{len(tup.points)}pt]"
    return SeminormHandle(
        name=label,
        leq=lambda f, bound: tuple_seminorm_value(f, tup) <= bound,
        display=lambda f: format_fraction(tuple_seminorm_value(f, tup)),
    )


@dataclass(frozen=True)
class AuditEntry:
    name: str
    ok: bool
    observed: str
    bound: str


@dataclass(frozen=True)
class AuditReport:
    entries: tuple[AuditEntry, ...]

    @property
    def passed(self) -> bool:
        return all(e.ok for e in self.entries)

    @property
    def violations(self) -> tuple[AuditEntry, ...]:
        return tuple(e for e in self.entries if not e.ok)


def maximality_audit(
    f: PwlFunction,
    space: SpaceSpec,
    family,
    cert: NormCertificate,
) -> AuditReport:
    """Check nu(f) <= cert.upper for every sampled admissible seminorm nu."""
    if f.dim != space.dim:
        raise DimensionError("function dimension does not match the space")
    entries = []
    for handle in family:
        ok = handle.leq(f, cert.upper)
        entries.append(
            AuditEntry(
                name=handle.name,
                ok=ok,
                observed=handle.display(f),
                bound=format_fraction(cert.upper),
            )
        )
    return AuditReport(entries=tuple(entries))
