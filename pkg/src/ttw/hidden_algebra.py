"""The algebra g^(s): gl(2) generators, the R and T towers, and J0.

For an index s >= 1 and a representation parameter N:

    J1 = Dt                      J2 = t*Dt - N/3
    J3 = s*u*Du - N/3            J4 = t^2*Dt + s*t*u*Du - N*t
    R_i = t^i*Du                 (0 <= i <= s)
    T_0 = u*Dt^s
    T_i = u*Dt^(s-i) * J0*(J0+1)*...*(J0+i-1),   T_i = 0 for i > s
    J0  = t*Dt + s*u*Du - N

N is a rational number substituted before any operator is built, so the
coefficient ring never grows a sixth variable.  Checks that should hold for
every N are run at several values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Sequence

from .polyring import ParamPoly
from .reduction import NoSolution, SparseSystem, VerificationError, detect_grading, solve_combination, solve_exact
from .report import VerificationReport
from .weyl import DiffOp, op_commutator, op_compose

TAGS = ("J1", "J2", "J3", "J4", "R", "T", "J0")

#: N values used when a check has to hold for generic N
DEFAULT_NS = (Fraction(0), Fraction(7, 3), Fraction(5))

t, u = ParamPoly.var("t"), ParamPoly.var("u")


class TowerMismatch(AssertionError):
    """Iterated commutators and the closed form of the T tower disagree."""


@dataclass(frozen=True)
class GeneratorId:
    tag: str
    s: int
    N: Fraction = Fraction(0)
    i: int | None = None

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown generator tag {self.tag!r}")
        if not isinstance(self.s, int) or self.s <= 0:
            raise ValueError(f"s must be a positive integer, got {self.s!r}")
        if self.tag in ("R", "T"):
            if not isinstance(self.i, int) or self.i < 0:
                raise ValueError(f"{self.tag} needs a non-negative integer index, got {self.i!r}")
            if self.tag == "R" and self.i > self.s:
                raise ValueError(f"R_{self.i} is not defined for s={self.s}")
        elif self.i is not None:
            raise ValueError(f"{self.tag} takes no index")
        object.__setattr__(self, "N", Fraction(self.N))

    @property
    def name(self) -> str:
        return f"{self.tag}{self.i}" if self.i is not None else self.tag


def _op(terms) -> DiffOp:
    return DiffOp(terms)


@lru_cache(maxsize=None)
def _build(tag: str, s: int, N: Fraction, i: int | None) -> DiffOp:
    third = N / 3
    if tag == "J1":
        return _op({(1, 0): 1})
    if tag == "J2":
        return _op({(1, 0): t, (0, 0): -third})
    if tag == "J3":
        return _op({(0, 1): s * u, (0, 0): -third})
    if tag == "J4":
        return _op({(1, 0): t * t, (0, 1): s * t * u, (0, 0): -N * t})
    if tag == "J0":
        return _op({(1, 0): t, (0, 1): s * u, (0, 0): -N})
    if tag == "R":
        return _op({(0, 1): t**i})
    # T tower in closed form
    if i > s:
        return DiffOp.zero()
    j0 = _build("J0", s, N, None)
    op = _op({(s - i, 0): u})
    for l in range(i):
        op = op_compose(op, j0 + DiffOp.identity().scale(l))
    return op


def build_generator(gid: GeneratorId) -> DiffOp:
    return _build(gid.tag, gid.s, gid.N, gid.i)


def generating_set(s: int, N=Fraction(0)) -> list[tuple[str, DiffOp]]:
    """(name, operator) in the fixed order J1 < J2 < J3 < J4 < R_0..R_s < T_0..T_s."""
    ids = [GeneratorId(tag, s, N) for tag in ("J1", "J2", "J3", "J4")]
    ids += [GeneratorId("R", s, N, i) for i in range(s + 1)]
    ids += [GeneratorId("T", s, N, i) for i in range(s + 1)]
    return [(g.name, build_generator(g)) for g in ids]


def tower_factor(s: int, i: int) -> int:
    """(-1)^i s!/(s-i)!: nested commutators with J4 carry this factor over the closed form."""
    return (-1) ** i * factorial(s) // factorial(s - i)


def t_tower_by_commutators(s: int, N=Fraction(0)) -> list[DiffOp]:
    """T_0..T_s built by nested commutators with J4, checked against the closed form.

    The nested commutator equals tower_factor(s, i) times the closed form, and
    one more commutator past T_s vanishes.  The closed forms are returned.
    """
    if not isinstance(s, int) or s <= 0:
        raise ValueError(f"s must be a positive integer, got {s!r}")
    j4 = _build("J4", s, Fraction(N), None)
    current = _build("T", s, Fraction(N), 0)
    out = [current]
    for i in range(1, s + 1):
        current = op_commutator(j4, current)
        closed = _build("T", s, Fraction(N), i)
        if current != closed.scale(tower_factor(s, i)):
            raise TowerMismatch(f"T_{i} for s={s}, N={N}")
        out.append(closed)
    if not op_commutator(j4, current).is_zero():
        raise TowerMismatch(f"[J4, T_{s}] is not zero for s={s}, N={N}")
    return out


def _linear_span_coeffs(target: DiffOp, basis: Sequence[DiffOp]) -> list[Fraction] | None:
    """Constant coefficients expressing target in basis, or None if it is not in the span."""
    system = SparseSystem(ncols=len(basis))
    index: dict = {}

    def row(key):
        if key not in index:
            index[key] = len(system.rows)
            system.rows.append({})
            system.rhs.append(Fraction(0))
            system.row_labels.append(key)
        return index[key]

    for ci, op in enumerate(basis):
        for (i, j), c in op.items():
            for exp, v in c.terms():
                system.rows[row((i, j) + exp)][ci] = v
    for (i, j), c in target.items():
        for exp, v in c.terms():
            system.rhs[row((i, j) + exp)] = v
    try:
        return solve_exact(system).values
    except NoSolution:
        return None


def _combo_text(coeffs, names) -> str:
    parts = [f"{c}*{n}" if c != 1 else n for c, n in zip(coeffs, names) if c]
    return " + ".join(parts) if parts else "0"


def verify_structure(s: int, N=None) -> VerificationReport:
    """Bracket checks for g^(s); with N=None they run at each value in DEFAULT_NS."""
    if not isinstance(s, int) or s <= 0:
        raise ValueError(f"s must be a positive integer, got {s!r}")
    report = VerificationReport(f"hidden-algebra s={s}")
    for n in (DEFAULT_NS if N is None else (Fraction(N),)):
        tag = f"s={s},N={n}"
        gens = dict(generating_set(s, n))
        report.record(f"{tag}:dimension", len(gens) == 2 * s + 6, f"{len(gens)} generators")
        rs = [gens[f"R{i}"] for i in range(s + 1)]
        ts = [gens[f"T{i}"] for i in range(s + 1)]
        bad = [(i, j) for i in range(s + 1) for j in range(i + 1, s + 1) if not op_commutator(rs[i], rs[j]).is_zero()]
        report.record(f"{tag}:R-commute", not bad, f"failing pairs {bad}" if bad else "")
        bad = [(i, j) for i in range(s + 1) for j in range(i + 1, s + 1) if not op_commutator(ts[i], ts[j]).is_zero()]
        report.record(f"{tag}:T-commute", not bad, f"failing pairs {bad}" if bad else "")
        zero_past = all(build_generator(GeneratorId("T", s, n, i)).is_zero() for i in range(s + 1, s + 4))
        nonzero = all(not op.is_zero() for op in ts)
        report.record(f"{tag}:T-nilpotent", zero_past and nonzero)
        report.run(f"{tag}:T-tower", lambda s=s, n=n: (t_tower_by_commutators(s, n) is not None, ""))
        names = ["J1", "J2", "J3", "J4", "1"]
        basis = [gens[x] for x in names[:4]] + [DiffOp.identity()]
        table = []
        closed = True
        for x, y in itertools.combinations(names[:4], 2):
            coeffs = _linear_span_coeffs(op_commutator(gens[x], gens[y]), basis)
            if coeffs is None:
                closed = False
                table.append(f"[{x},{y}] not in span")
            else:
                table.append(f"[{x},{y}]={_combo_text(coeffs, names)}")
        report.record(f"{tag}:gl2-closure", closed, "; ".join(table))
    return report


# ---------------------------------------------------------------------------
# expressing operators through the generators

@dataclass(frozen=True)
class GenCombination:
    """sum_k coeff_k * (ordered product of generators), exponents per generator name."""

    names: tuple[str, ...]
    terms: tuple[tuple[tuple[int, ...], ParamPoly], ...]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.terms:
            word = "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in zip(self.names, exps) if e
            ) or "1"
            text = str(c)
            if len(c) > 1:
                text = f"({text})"
            parts.append(word if text == "1" else f"{text}*{word}")
        return " + ".join(parts).replace("+ -", "- ")

    def __len__(self) -> int:
        return len(self.terms)


def ordered_products(count: int, max_degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors with every entry and the total at most max_degree."""
    out = []
    for total in range(max_degree + 1):
        for combo in itertools.combinations_with_replacement(range(count), total):
            exps = [0] * count
            for idx in combo:
                exps[idx] += 1
            out.append(tuple(exps))
    return out


def express_in_generators(
    target: DiffOp,
    s: int,
    N=Fraction(0),
    max_product_degree: int = 2,
    param_degree: int | None = None,
    method: str = "pointwise",
) -> GenCombination:
    """A combination of ordered generator products equal to target, or NoSolution."""
    if max_product_degree < 1:
        raise ValueError("max_product_degree must be at least 1")
    named = [(n, op) for n, op in generating_set(s, N) if not op.is_zero()]
    names = tuple(n for n, _ in named)
    ex = _ProductExpander([op for _, op in named])
    words = ordered_products(len(named), max_product_degree)
    columns = [ex(wd) for wd in words]
    keep = [i for i, c in enumerate(columns) if not c.is_zero()]
    words = [words[i] for i in keep]
    columns = [columns[i] for i in keep]
    powers = None
    found = detect_grading(columns + [target]) if not target.is_zero() else None
    if found is not None and None not in found[1]:
        *col_w, tw = found[1]
        pairs = [(wd, c, cw - tw) for wd, c, cw in zip(words, columns, col_w) if cw >= tw]
        words = [p[0] for p in pairs]
        columns = [p[1] for p in pairs]
        powers = [p[2] for p in pairs]
    bounds = {"s": s, "N": N, "max_product_degree": max_product_degree}
    if target.is_zero():
        return GenCombination(names, ())
    try:
        coeffs, _ = solve_combination(
            target, columns, powers=powers, param_degree=param_degree, method=method
        )
    except NoSolution as exc:
        raise NoSolution("target is not a combination of generator products", {**bounds, **exc.bounds}) from None
    terms = tuple((wd, c) for wd, c in zip(words, coeffs) if not c.is_zero())
    acc = DiffOp.zero()
    for wd, c in terms:
        acc = acc + ex(wd).scale(c)
    if acc != target:
        raise VerificationError("generator combination does not reproduce the target")
    return GenCombination(names, terms)


class _ProductExpander:
    """Ordered products g_0^e0 * g_1^e1 * ... with prefix caching."""

    def __init__(self, ops: Sequence[DiffOp]):
        self.ops = list(ops)
        self.cache: dict[tuple, DiffOp] = {tuple([0] * len(self.ops)): DiffOp.identity()}

    def __call__(self, exps: tuple[int, ...]) -> DiffOp:
        hit = self.cache.get(exps)
        if hit is not None:
            return hit
        idx = next(i for i, e in enumerate(exps) if e)
        rest = list(exps)
        rest[idx] -= 1
        op = op_compose(self.ops[idx], self(tuple(rest)))
        self.cache[exps] = op
        return op


__all__ = [
    "DEFAULT_NS",
    "GenCombination",
    "GeneratorId",
    "TowerMismatch",
    "build_generator",
    "express_in_generators",
    "generating_set",
    "ordered_products",
    "t_tower_by_commutators",
    "tower_factor",
    "verify_structure",
]
