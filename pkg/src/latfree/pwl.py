"""Piecewise-linear function engine.

A PwlFunction pairs a lattice-linear expression with a rational matrix of
composition rows; its value at x is the expression evaluated at the row
products.  Such functions are positively homogeneous and piecewise linear,
with linear candidate pieces obtained structurally from the expression.
All questions about them (equality, domination, extrema over regions)
reduce to exact LPs over the cells of a central hyperplane arrangement.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    DimensionError,
    InternalFaultError,
    LatfreeError,
    UnboundedRegionError,
)
from .expr import Expr, Add, Inf, Scale, Sup, Var, eval_expr, max_var_index, substitute
from .lp import solve_lp
from .qmath import Vec, dot, is_zero_vec, primitive_normal, to_fraction, vec, zero_vec

_MAX_PIECES = 256
_MAX_CELLS = 8192


@dataclass(frozen=True)
class LinFunc:
    """Linear functional represented by its coefficient vector."""

    coeffs: tuple[Fraction, ...]

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def __call__(self, x) -> Fraction:
        return dot(self.coeffs, vec(x))

    def scale(self, c) -> "LinFunc":
        cc = to_fraction(c)
        return LinFunc(tuple(cc * v for v in self.coeffs))

    def add(self, other: "LinFunc") -> "LinFunc":
        return LinFunc(tuple(a + b for a, b in zip(self.coeffs, other.coeffs, strict=True)))

    def sub(self, other: "LinFunc") -> "LinFunc":
        return LinFunc(tuple(a - b for a, b in zip(self.coeffs, other.coeffs, strict=True)))

    def is_zero(self) -> bool:
        return is_zero_vec(self.coeffs)


def lin_func(values) -> LinFunc:
    return LinFunc(vec(values))


@dataclass(frozen=True)
class PwlFunction:
    """expr composed with rational rows: f(x) = expr(row_1.x, ..., row_n.x)."""

    dim: int
    expr: Expr
    comp: tuple[Vec, ...]

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionError("ambient dimension must be at least 1")
        if not self.comp:
            raise DimensionError("composition matrix needs at least one row")
        for row in self.comp:
            if len(row) != self.dim:
                raise DimensionError(
                    f"composition row of length {len(row)} in ambient dimension {self.dim}"
                )
        if max_var_index(self.expr) > len(self.comp):
            raise DimensionError(
                f"expression uses t{max_var_index(self.expr)} but only "
                f"{len(self.comp)} composition rows are given"
            )

    @property
    def arity(self) -> int:
        return len(self.comp)

    def eval(self, x) -> Fraction:
        xs = vec(x)
        if len(xs) != self.dim:
            raise DimensionError(f"expected a point of length {self.dim}, got {len(xs)}")
        return eval_expr(self.expr, tuple(dot(row, xs) for row in self.comp))

    @classmethod
    def from_expr(cls, expr: Expr, n: int) -> "PwlFunction":
        """Expression over the standard coordinates of Q^n (identity rows)."""
        rows = tuple(
            tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)
        )
        return cls(dim=n, expr=expr, comp=rows)


def make_pwl(expr: Expr, rows) -> PwlFunction:
    comp = tuple(vec(r) for r in rows)
    if not comp:
        raise DimensionError("composition matrix needs at least one row")
    return PwlFunction(dim=len(comp[0]), expr=expr, comp=comp)


def zero_pwl(dim: int) -> PwlFunction:
    return PwlFunction(dim=dim, expr=Scale(Fraction(0), Var(1)), comp=(zero_vec(dim),))


def _shift_vars(e: Expr, offset: int, arity: int) -> Expr:
    return substitute(e, [Var(i + 1 + offset) for i in range(arity)])


def _combine(f: PwlFunction, g: PwlFunction, node) -> PwlFunction:
    if f.dim != g.dim:
        raise DimensionError("combining functions over different ambient dimensions")
    shifted = _shift_vars(g.expr, len(f.comp), len(g.comp))
    return PwlFunction(dim=f.dim, expr=node(f.expr, shifted), comp=f.comp + g.comp)


def pwl_add(f: PwlFunction, g: PwlFunction) -> PwlFunction:
    return _combine(f, g, Add)


def pwl_sup(f: PwlFunction, g: PwlFunction) -> PwlFunction:
    return _combine(f, g, Sup)


def pwl_inf(f: PwlFunction, g: PwlFunction) -> PwlFunction:
    return _combine(f, g, Inf)


def pwl_scale(c, f: PwlFunction) -> PwlFunction:
    return PwlFunction(dim=f.dim, expr=Scale(to_fraction(c), f.expr), comp=f.comp)


def pwl_abs(f: PwlFunction) -> PwlFunction:
    return PwlFunction(
        dim=f.dim,
        expr=Sup(f.expr, Scale(Fraction(-1), f.expr)),
        comp=f.comp,
    )


# ---------------------------------------------------------------------------
# candidate pieces
# ---------------------------------------------------------------------------


def linear_pieces(f: PwlFunction) -> frozenset[LinFunc]:
    """Closure of candidate linear pieces; f agrees with one on every cell."""

    def rec(node: Expr) -> frozenset[tuple[Fraction, ...]]:
        match node:
            case Var(index=i):
                return frozenset((tuple(f.comp[i - 1]),))
            case Scale(coeff=c, child=ch):
                cc = to_fraction(c)
                return frozenset(tuple(cc * v for v in t) for t in rec(ch))
            case Add(left=l, right=r):
                left, right = rec(l), rec(r)
                out = frozenset(
                    tuple(a + b for a, b in zip(ta, tb))
                    for ta in left
                    for tb in right
                )
                if len(out) > _MAX_PIECES:
                    raise LatfreeError(
                        f"candidate piece count exceeded {_MAX_PIECES}; "
                        "expression is beyond desk scale"
                    )
                return out
            case Sup(left=l, right=r) | Inf(left=l, right=r):
                return rec(l) | rec(r)
        raise TypeError(f"not an expression node: {node!r}")

    return frozenset(LinFunc(t) for t in rec(f.expr))


# ---------------------------------------------------------------------------
# arrangements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cell:
    """Full-dimensional cell given by strict signs against the hyperplanes."""

    signs: tuple[int, ...]
    interior: Vec
    active: LinFunc | None = None


@dataclass(frozen=True)
class Arrangement:
    dim: int
    hyperplanes: tuple[LinFunc, ...]
    cells: tuple[Cell, ...]


def canonical_normals(vectors) -> list[Vec]:
    """Canonicalize, drop zeros, dedupe, and sort hyperplane normals."""
    seen = set()
    for v in vectors:
        n = primitive_normal(vec(v))
        if not is_zero_vec(n):
            seen.add(n)
    return sorted(seen)


def difference_normals(pieces) -> list[Vec]:
    plist = [p.coeffs if isinstance(p, LinFunc) else vec(p) for p in pieces]
    diffs = []
    for i in range(len(plist)):
        for j in range(i + 1, len(plist)):
            diffs.append(tuple(a - b for a, b in zip(plist[i], plist[j])))
    return diffs


def _strict_cell_point(normals: list[Vec], signs, dim: int):
    """Rational x with signs[i]*normals[i](x) >= 1, or None when empty.

    By homogeneity of the cone, strict sign feasibility is the same as
    margin-1 feasibility, and the LP returns an exact interior point.
    """
    rows = [
        (tuple(-s * c for c in n), "<=", Fraction(-1))
        for n, s in zip(normals, signs)
    ]
    res = solve_lp([Fraction(0)] * dim, rows, goal="max")
    if res.status == "optimal":
        return res.point
    return None


def build_arrangement(dim: int, normals, extra_normals=()) -> Arrangement:
    """Enumerate full-dimensional cells of a central hyperplane arrangement.

    normals/extra_normals are coefficient vectors; they are canonicalized
    and deduplicated first.  With no (nonzero) normals the whole space is
    the single cell.  Cells come out sorted by sign vector.
    """
    canon = canonical_normals(list(normals) + list(extra_normals))
    for n in canon:
        if len(n) != dim:
            raise DimensionError("hyperplane normal has wrong length")
    states: list[tuple[tuple[int, ...], Vec]] = [((), zero_vec(dim))]
    prefix: list[Vec] = []
    for h in canon:
        prefix.append(h)
        next_states: list[tuple[tuple[int, ...], Vec]] = []
        for signs, point in states:
            val = dot(h, point)
            reuse_sign = 0 if val == 0 else (1 if val > 0 else -1)
            for s in (1, -1):
                if s == reuse_sign:
                    next_states.append((signs + (s,), point))
                    continue
                found = _strict_cell_point(prefix, signs + (s,), dim)
                if found is not None:
                    next_states.append((signs + (s,), found))
        states = next_states
        if len(states) > _MAX_CELLS:
            raise LatfreeError(
                f"cell count exceeded {_MAX_CELLS}; arrangement is beyond desk scale"
            )
    states.sort(key=lambda sp: sp[0])
    cells = tuple(Cell(signs=s, interior=p) for s, p in states)
    return Arrangement(
        dim=dim,
        hyperplanes=tuple(LinFunc(n) for n in canon),
        cells=cells,
    )


def arrangement_for(f: PwlFunction, extra_normals=()) -> Arrangement:
    return build_arrangement(
        f.dim, difference_normals(linear_pieces(f)), extra_normals
    )


def signs_at(arr: Arrangement, x) -> tuple[int, ...]:
    xs = vec(x)
    out = []
    for h in arr.hyperplanes:
        v = h(xs)
        out.append(0 if v == 0 else (1 if v > 0 else -1))
    return tuple(out)


# ---------------------------------------------------------------------------
# active pieces
# ---------------------------------------------------------------------------


def _probe_points(arr: Arrangement, cell: Cell) -> list[Vec]:
    """cell.interior plus d axis perturbations that stay strictly inside."""
    p = cell.interior
    d = arr.dim
    probes = [p]
    for i in range(d):
        step = None
        for h in arr.hyperplanes:
            hi = h.coeffs[i]
            if hi != 0:
                bound = abs(h(p)) / (2 * abs(hi))
                step = bound if step is None else min(step, bound)
        if step is None or step > 1:
            step = Fraction(1)
        probes.append(tuple(v + (step if j == i else 0) for j, v in enumerate(p)))
    return probes


def active_piece(
    f: PwlFunction, arr: Arrangement, cell: Cell, candidates=None
) -> LinFunc:
    """The unique candidate piece equal to f on the (closed) cell."""
    cands = linear_pieces(f) if candidates is None else frozenset(candidates)
    probes = _probe_points(arr, cell)
    values = [f.eval(p) for p in probes]
    matches = [
        c
        for c in sorted(cands, key=lambda c: c.coeffs)
        if all(c(p) == v for p, v in zip(probes, values))
    ]
    if len(matches) != 1:
        raise InternalFaultError(
            f"expected exactly one active piece on cell {cell.signs}, "
            f"found {len(matches)}"
        )
    return matches[0]


def active_pieces_by_cell(
    f: PwlFunction, arr: Arrangement, candidates=None
) -> dict[tuple[int, ...], LinFunc]:
    """Deterministic map cell signs -> active piece (cells are independent)."""
    cands = linear_pieces(f) if candidates is None else frozenset(candidates)
    return {
        cell.signs: active_piece(f, arr, cell, cands) for cell in arr.cells
    }


# ---------------------------------------------------------------------------
# equivalence
# ---------------------------------------------------------------------------

_SAMPLE_COUNT = 48
_SAMPLE_SEED = 0x1A7F4EE


def _sample_points(dim: int) -> list[tuple[int, ...]]:
    rng = random.Random(_SAMPLE_SEED + dim)
    pts = []
    for _ in range(_SAMPLE_COUNT):
        pts.append(tuple(rng.randint(-9, 9) for _ in range(dim)))
    return pts


def equivalent(f: PwlFunction, g: PwlFunction):
    """Decide pointwise equality; returns (True, None) or (False, witness).

    A fixed integer sample is tried first purely as a shortcut for the
    unequal branch (any hit is re-checked exactly); the equal verdict always
    comes from comparing active pieces on every cell of the joint
    arrangement of piece differences.
    """
    if f.dim != g.dim:
        raise DimensionError("cannot compare functions over different dimensions")
    for p in _sample_points(f.dim):
        if f.eval(p) != g.eval(p):
            return False, vec(p)
    pieces_f = linear_pieces(f)
    pieces_g = linear_pieces(g)
    arr = build_arrangement(f.dim, difference_normals(pieces_f | pieces_g))
    for cell in arr.cells:
        af = active_piece(f, arr, cell, pieces_f)
        ag = active_piece(g, arr, cell, pieces_g)
        if af != ag:
            w = cell.interior
            if f.eval(w) == g.eval(w):
                raise InternalFaultError(
                    "active pieces differ but values agree at the interior point"
                )
            return False, w
    return True, None


def is_zero(f: PwlFunction) -> bool:
    eq, _ = equivalent(f, zero_pwl(f.dim))
    return eq


# ---------------------------------------------------------------------------
# max-min normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MaxMinForm:
    """f as a maximum of minima of linear pieces (not necessarily minimal)."""

    dim: int
    groups: tuple[tuple[LinFunc, ...], ...]

    def as_pwl(self) -> PwlFunction:
        pieces = sorted({p for g in self.groups for p in g}, key=lambda p: p.coeffs)
        index = {p: i + 1 for i, p in enumerate(pieces)}

        def tree(node_cls, leaves):
            out = leaves[0]
            for leaf in leaves[1:]:
                out = node_cls(out, leaf)
            return out

        group_exprs = [
            tree(Inf, [Var(index[p]) for p in g]) for g in self.groups
        ]
        expr = tree(Sup, group_exprs)
        return PwlFunction(
            dim=self.dim, expr=expr, comp=tuple(p.coeffs for p in pieces)
        )

    def eval(self, x) -> Fraction:
        xs = vec(x)
        return max(min(p(xs) for p in g) for g in self.groups)


def _dominates_on_cell(
    candidate: LinFunc, act: LinFunc, arr: Arrangement, cell: Cell
) -> bool:
    """candidate >= act everywhere on the closed cell cone (exact LP)."""
    diff = candidate.sub(act)
    if diff.is_zero():
        return True
    d = arr.dim
    rows = [
        (tuple(-s * c for c in h.coeffs), "<=", Fraction(0))
        for h, s in zip(arr.hyperplanes, cell.signs)
    ]
    for i in range(d):
        e = [Fraction(0)] * d
        e[i] = Fraction(1)
        rows.append((tuple(e), "<=", Fraction(1)))
        rows.append((tuple(-v for v in e), "<=", Fraction(1)))
    res = solve_lp(diff.coeffs, rows, goal="min")
    if res.status != "optimal":
        raise InternalFaultError("domination LP must be bounded over the boxed cell")
    return res.value >= 0


def max_min_form(f: PwlFunction) -> MaxMinForm:
    """Max of min-groups over the cells; verified equivalent to f."""
    pieces = linear_pieces(f)
    arr = arrangement_for(f)
    groups = []
    seen = set()
    for cell in arr.cells:
        act = active_piece(f, arr, cell, pieces)
        group = tuple(
            sorted(
                (
                    p
                    for p in pieces
                    if _dominates_on_cell(p, act, arr, cell)
                ),
                key=lambda p: p.coeffs,
            )
        )
        if group not in seen:
            seen.add(group)
            groups.append(group)
    form = MaxMinForm(dim=f.dim, groups=tuple(groups))
    eq, witness = equivalent(f, form.as_pwl())
    if not eq:
        raise InternalFaultError(
            f"max-min form failed verification at witness {witness}"
        )
    return form


# ---------------------------------------------------------------------------
# suprema over polyhedral regions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Region:
    """Conjunction of linear constraints and absolute-sum budget constraints.

    linear entries are (coeffs, rel, rhs) with rel in {"<=", ">=", "="};
    abs_groups entries are (rows, rhs) meaning sum_j |rows[j].x| <= rhs.
    """

    linear: tuple = ()
    abs_groups: tuple = ()


def sup_abs_over(f: PwlFunction, region: Region):
    """Exact sup of |f| over the region, with a witness point.

    The region must be bounded; per cell, boundedness of every +-coordinate
    direction is established by LP before the extremal LPs run.  Returns
    (value, witness); an empty region yields (0, None).
    """
    d = f.dim
    abs_rows: list[tuple[Vec, Fraction]] = []
    for rows, rhs in region.abs_groups:
        abs_rows.extend((vec(r), to_fraction(rhs)) for r in rows)
    arr = arrangement_for(f, extra_normals=[r for r, _ in abs_rows])
    pieces = linear_pieces(f)

    best_value = None
    best_point = None
    for cell in arr.cells:
        act = active_piece(f, arr, cell, pieces)
        rows = [
            (tuple(-s * c for c in h.coeffs), "<=", Fraction(0))
            for h, s in zip(arr.hyperplanes, cell.signs)
        ]
        for coeffs, rel, rhs in region.linear:
            rows.append((vec(coeffs), rel, to_fraction(rhs)))
        for group_rows, rhs in region.abs_groups:
            combined = zero_vec(d)
            for r in group_rows:
                rv = vec(r)
                if is_zero_vec(rv):
                    continue
                v = dot(rv, cell.interior)
                eps = 1 if v > 0 else -1
                if v == 0:
                    raise InternalFaultError(
                        "abs-group row vanishes at a cell interior point"
                    )
                combined = tuple(c + eps * rc for c, rc in zip(combined, rv))
            rows.append((combined, "<=", to_fraction(rhs)))

        feasible = True
        for i in range(d):
            e = [Fraction(0)] * d
            e[i] = Fraction(1)
            for direction in (tuple(e), tuple(-v for v in e)):
                probe = solve_lp(direction, rows, goal="max")
                if probe.status == "unbounded":
                    raise UnboundedRegionError(
                        "region admits an unbounded coordinate direction"
                    )
                if probe.status == "infeasible":
                    feasible = False
                    break
            if not feasible:
                break
        if not feasible:
            continue

        for objective in (act.coeffs, tuple(-v for v in act.coeffs)):
            res = solve_lp(objective, rows, goal="max")
            if res.status != "optimal":
                raise InternalFaultError("bounded cell LP must reach an optimum")
            if best_value is None or res.value > best_value:
                best_value = res.value
                best_point = res.point

    if best_value is None:
        return Fraction(0), None
    return best_value, best_point
