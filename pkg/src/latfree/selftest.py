"""Built-in acceptance suite: ten checks covering the whole library.

Each criterion returns a deterministic details string (no wall times), so
a fixed seed yields byte-identical reports; elapsed seconds are tracked
separately for the human-readable table and the stated time budgets.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .expr import Add, Expr, Inf, Scale, Sup, Var, parse, print_expr
from .free import (
    LatticeMap,
    contractivity_audit,
    extend_hom,
    generator,
    make_element,
    pullback_seminorm,
    target_lattice,
)
from .norm import (
    NormCertificate,
    _row_norm_upper,
    evaluation_seminorm,
    fvl_space,
    maximality_audit,
    norm_bounds,
    norm_by_cell_assignment,
    norm_exact_polyhedral,
    seq_space,
    tuple_seminorm_value,
)
from .pwl import (
    PwlFunction,
    arrangement_for,
    equivalent,
    is_zero,
    linear_pieces,
    pwl_abs,
    pwl_add,
    pwl_scale,
    pwl_sup,
)
from .qmath import Vec, format_fraction, l1_norm, l2_norm_sq, linf_norm
from .sampling import (
    random_admissible_map,
    random_admissible_tuple,
    random_expr,
    random_pair,
    random_vector,
)
from .free import embed


@dataclass(frozen=True)
class CriterionResult:
    index: int
    name: str
    passed: bool
    details: str
    elapsed: float


@dataclass(frozen=True)
class SelftestReport:
    seed: int
    threads: int
    results: tuple[CriterionResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


def _mc_eval(f: PwlFunction, pts: np.ndarray) -> np.ndarray:
    """Vectorized float evaluation; exact for integer data below 2**53."""
    comp = np.array([[float(v) for v in row] for row in f.comp])
    y = pts @ comp.T

    def rec(e: Expr) -> np.ndarray:
        match e:
            case Var(index=i):
                return y[:, i - 1]
            case Scale(coeff=c, child=ch):
                return float(c) * rec(ch)
            case Add(left=l, right=r):
                return rec(l) + rec(r)
            case Sup(left=l, right=r):
                return np.maximum(rec(l), rec(r))
            case Inf(left=l, right=r):
                return np.minimum(rec(l), rec(r))
        raise TypeError(f"not an expression node: {e!r}")

    return rec(f.expr)


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------


def _c1_generator_norms(seed: int, threads: int):
    values = []
    ok = True
    for n in range(1, 5):
        t0 = time.perf_counter()
        cert = norm_exact_polyhedral(generator(fvl_space(n), 1).realized, fvl_space(n))
        ok &= cert.exact and cert.lower == 1 == cert.upper
        ok &= time.perf_counter() - t0 < 1.0
        values.append(format_fraction(cert.lower))
    return ok, f"norm(generator) in fvl:1..4 = {','.join(values)}"


def _c2_equivalence(seed: int, threads: int):
    a = PwlFunction.from_expr(parse(r"t1 + (t2 \/ t3)", 3), 3)
    b = PwlFunction.from_expr(parse(r"(t1 + t2) \/ (t1 + t3)", 3), 3)
    eq, _ = equivalent(a, b)
    if not eq:
        return False, "distribution identity not recognized"
    rng = random.Random(seed * 7919 + 2)
    npts = 10_000
    grid_rng = np.random.default_rng(seed * 7919 + 2)
    contradictions = 0
    known_equal_missed = 0
    for _ in range(200):
        arity = rng.randint(2, 3)
        fe, ge, surely_equal = random_pair(rng, arity)
        f = PwlFunction.from_expr(fe, arity)
        g = PwlFunction.from_expr(ge, arity)
        eq, witness = equivalent(f, g)
        if surely_equal and not eq:
            known_equal_missed += 1
            continue
        pts = grid_rng.integers(-9, 10, size=(npts, arity)).astype(float)
        diffs = int(np.count_nonzero(_mc_eval(f, pts) != _mc_eval(g, pts)))
        if eq and diffs > 0:
            contradictions += 1
        if not eq and f.eval(witness) == g.eval(witness):
            contradictions += 1
    ok = contradictions == 0 and known_equal_missed == 0
    return ok, (
        f"identity equal; 200 random pairs, {contradictions} contradictions, "
        f"{known_equal_missed} sound rewrites misjudged"
    )


_EXACT_SUITE = [
    (r"t1 \/ t2", 2, Fraction(2)),
    (r"t1 \/ t2 \/ t3", 3, Fraction(3)),
    ("|t1| + |t2|", 2, Fraction(2)),
    ("t1 - t2", 2, Fraction(2)),
    ("|t1|", 1, Fraction(1)),
]


def _exact_suite_certs():
    out = []
    for text, n, expected in _EXACT_SUITE:
        f = PwlFunction.from_expr(parse(text, n), n)
        cert = norm_exact_polyhedral(f, fvl_space(n))
        out.append((text, n, expected, f, cert))
    return out


def _c3_exact_norms(seed: int, threads: int):
    ok = True
    shown = []
    for text, n, expected, f, cert in _exact_suite_certs():
        t0 = time.perf_counter()
        ok &= cert.exact and cert.lower == expected == cert.upper
        ok &= tuple_seminorm_value(f, cert.witness) == cert.lower
        ok &= time.perf_counter() - t0 < 10.0
        shown.append(f"{text}={format_fraction(cert.lower)}")
    return ok, "; ".join(shown)


def _c4_l1_agreement(seed: int, threads: int):
    rng = random.Random(seed * 7919 + 4)
    mismatches = 0
    for _ in range(50):
        n = rng.randint(1, 3)
        f = PwlFunction.from_expr(random_expr(rng, n), n)
        ca = norm_exact_polyhedral(f, fvl_space(n))
        cb = norm_exact_polyhedral(f, seq_space(1, n))
        if (ca.lower, ca.upper) != (cb.lower, cb.upper):
            mismatches += 1
    return mismatches == 0, f"50 expressions, {mismatches} fvl/seq:1 mismatches"


def _c5_norm_extension(seed: int, threads: int):
    rng = random.Random(seed * 7919 + 5)
    ok = True
    checked = {"1": 0, "2": 0, "inf": 0}
    for i in range(20):
        m = rng.randint(1, 3)
        p = ["1", "2", "inf"][i % 3]
        x = random_vector(rng, m)
        if all(v == 0 for v in x):
            x = (Fraction(1),) + x[1:]
        space = seq_space(Fraction(p) if p != "inf" else "inf", m)
        xhat = embed(x, space).realized
        if p == "1":
            cert = norm_exact_polyhedral(xhat, space)
            ok &= cert.exact and cert.lower == l1_norm(x) == cert.upper
        elif p == "inf":
            cert = norm_exact_polyhedral(xhat, space)
            ok &= cert.exact and cert.lower == linf_norm(x) == cert.upper
        else:
            cert = norm_bounds(xhat, space, restarts=4, seed=seed, threads=threads)
            true = math.sqrt(float(l2_norm_sq(x)))
            ok &= cert.lower <= cert.upper
            ok &= abs(float(cert.lower) - true) < 1e-9
            ok &= abs(float(cert.upper) - true) < 1e-9
        checked[p] += 1
    return ok, (
        f"20 embeddings: p=1 x{checked['1']}, p=2 x{checked['2']}, "
        f"p=inf x{checked['inf']}"
    )


def _c6_norm_axioms(seed: int, threads: int):
    rng = random.Random(seed * 7919 + 6)
    ok = True
    abs_sum = PwlFunction.from_expr(parse("|t1| + |t2|", 2), 2)
    for _ in range(50):
        n = 2
        space = fvl_space(n)
        f = PwlFunction.from_expr(random_expr(rng, n, max_pieces=3), n)
        g = PwlFunction.from_expr(random_expr(rng, n, max_pieces=3), n)
        nf = norm_exact_polyhedral(f, space).lower
        ng = norm_exact_polyhedral(g, space).lower
        nsum = norm_exact_polyhedral(pwl_add(f, g), space).lower
        ok &= nsum <= nf + ng
        c = Fraction(rng.choice([-3, -2, -1, 2, 3]))
        ok &= norm_exact_polyhedral(pwl_scale(c, f), space).lower == abs(c) * nf
        # monotonicity: dominate |f| by c_max*(|x1|+|x2|), certify the
        # domination through the equivalence engine, then compare norms
        c_max = max(
            (abs(co) for piece in linear_pieces(f) for co in piece.coeffs),
            default=Fraction(0),
        )
        if c_max > 0:
            big = pwl_scale(c_max, abs_sum)
            eq, _ = equivalent(pwl_sup(pwl_abs(f), big), big)
            ok &= eq
            ok &= nf <= norm_exact_polyhedral(big, space).lower
        if not is_zero(f):
            ok &= nf > 0
    return ok, "50 pairs: triangle, homogeneity, monotonicity, nondegeneracy"


def _c7_sandwich(seed: int, threads: int):
    rng = random.Random(seed * 7919 + 7)
    spaces = [
        fvl_space(2),
        fvl_space(3),
        seq_space(1, 2),
        seq_space(2, 2),
        seq_space("inf", 2),
        seq_space(2, 3),
        seq_space(Fraction(3, 2), 2),
    ]
    ok = True
    lower_bound_checks = 0
    for i in range(100):
        space = spaces[i % len(spaces)]
        f = PwlFunction.from_expr(random_expr(rng, space.dim, max_pieces=3), space.dim)
        cert = norm_bounds(f, space, restarts=4, seed=seed + i, threads=threads)
        ok &= cert.lower <= cert.upper
        ok &= tuple_seminorm_value(f, cert.witness) == cert.lower
        if cert.lam is not None:
            unit = sum(
                (_row_norm_upper(r, space) for r in cert.unit_support), Fraction(0)
            )
            ok &= cert.upper == cert.lam * unit
        if space.exact_capable:
            for k in (1, 2):
                tup = random_admissible_tuple(rng, space, k)
                ok &= tuple_seminorm_value(f, tup) <= cert.upper
                lower_bound_checks += 1
    return ok, f"100 sandwiches valid; {lower_bound_checks} random tuples below upper"


def _c8_extension_audit(seed: int, threads: int):
    rng = random.Random(seed * 7919 + 8)
    suite = _exact_suite_certs()
    ok = True
    audits = 0
    for i in range(25):
        p = "inf" if i % 2 == 0 else 1
        r = 1 + i % 3
        target = target_lattice(p, r)
        for text, n, expected, f, cert in suite:
            lat_map = random_admissible_map(rng, fvl_space(n), target)
            el = make_element(
                fvl_space(n),
                [tuple(Fraction(1 if a == b else 0) for b in range(n)) for a in range(n)],
                f.expr,
            )
            rep = contractivity_audit(lat_map, [el], certs=[cert])
            ok &= rep.passed
            nu = pullback_seminorm(lat_map)
            ok &= maximality_audit(f, fvl_space(n), [nu], cert).passed
            audits += 1
    # well-definedness: equivalent elements extend identically
    agree = True
    for _ in range(25):
        n = rng.randint(2, 3)
        from .sampling import equivalent_variant

        e = random_expr(rng, n)
        e2 = equivalent_variant(rng, e)
        basis = [
            tuple(Fraction(1 if a == b else 0) for b in range(n)) for a in range(n)
        ]
        el1 = make_element(fvl_space(n), basis, e)
        el2 = make_element(fvl_space(n), basis, e2)
        target = target_lattice(1, 2)
        lat_map = random_admissible_map(rng, fvl_space(n), target)
        agree &= extend_hom(lat_map, el1) == extend_hom(lat_map, el2)
    ok &= agree
    return ok, f"{audits} contractivity audits passed; 25 well-definedness checks"


def _c9_slot_sufficiency(seed: int, threads: int):
    ok = True
    checked = 0
    for text, n, expected, f, cert in _exact_suite_certs():
        space = fvl_space(n)
        base = norm_by_cell_assignment(f, space)
        ok &= base == cert.lower
        slots = 2 * len(arrangement_for(f).cells)
        for s in range(slots):
            ok &= norm_by_cell_assignment(f, space, duplicate_slot=s) == base
            checked += 1
    return ok, f"{checked} duplicate-slot probes, none improved the optimum"


def _c10_determinism(seed: int, threads: int):
    f = PwlFunction.from_expr(parse(r"t1 /\ t2 + t1 \/ (2*t3)", 3), 3)
    space = fvl_space(3)
    b1 = norm_bounds(f, space, restarts=8, seed=seed, threads=1)
    bn = norm_bounds(f, space, restarts=8, seed=seed, threads=max(2, threads))
    same_bounds = (
        b1.lower == bn.lower
        and b1.upper == bn.upper
        and b1.witness.points == bn.witness.points
    )
    r1 = _c3_exact_norms(seed, threads)
    r2 = _c3_exact_norms(seed, threads)
    same_rerun = r1 == r2
    ok = same_bounds and same_rerun
    return ok, (
        f"threads 1 vs N certificates identical: {same_bounds}; "
        f"seeded rerun identical: {same_rerun}"
    )


_CRITERIA = [
    ("generator_norms", _c1_generator_norms),
    ("equivalence_vs_sampling", _c2_equivalence),
    ("exact_norm_values", _c3_exact_norms),
    ("l1_path_agreement", _c4_l1_agreement),
    ("norm_extension", _c5_norm_extension),
    ("lattice_norm_axioms", _c6_norm_axioms),
    ("sandwich_soundness", _c7_sandwich),
    ("extension_audit", _c8_extension_audit),
    ("slot_sufficiency", _c9_slot_sufficiency),
    ("determinism", _c10_determinism),
]


def run_selftest(seed: int = 0, threads: int = 1) -> SelftestReport:
    results = []
    for idx, (name, fn) in enumerate(_CRITERIA, start=1):
        t0 = time.perf_counter()
        try:
            passed, details = fn(seed, threads)
        except Exception as exc:  # a crash is a failure, not an abort
            passed, details = False, f"raised {type(exc).__name__}: {exc}"
        results.append(
            CriterionResult(
                index=idx,
                name=name,
                passed=bool(passed),
                details=details,
                elapsed=time.perf_counter() - t0,
            )
        )
    return SelftestReport(seed=seed, threads=threads, results=tuple(results))
