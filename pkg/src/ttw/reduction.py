"""Express operators as polynomials in ordered monomials of generators.

Two solvers share the same candidate space and the same final check:

* ``method="monomial"`` writes every unknown coefficient as a polynomial in
  the parameters with scalar unknowns per parameter monomial and solves one
  large sparse system over Q.
* ``method="pointwise"`` specialises the parameters a, b to rational points,
  solves the small scalar system at each point and recovers the coefficient
  polynomials by Newton interpolation on a simplex lattice of points.

Whatever route is taken, the returned GenPolynomial is expanded symbolically
and compared with the target before it is handed back.

When the generators and the target are homogeneous for the grading
t:1, u:k, Dt:-1, Du:-k, w:-1, a,b:0 the power of w in front of each ordered
monomial is forced, which removes w from the unknowns entirely.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import flint

from .genpoly import GenMonomial, GenPolynomial
from .polyring import ParamPoly, to_fmpq, to_fraction
from .weyl import DiffOp, op_compose


class NoSolution(Exception):
    """No combination exists inside the given bounds."""

    def __init__(self, message: str, bounds: Mapping[str, object] | None = None):
        self.bounds = dict(bounds or {})
        if self.bounds:
            text = ", ".join(f"{k}={v}" for k, v in self.bounds.items())
            message = f"{message} ({text})"
        super().__init__(message)


class VerificationError(AssertionError):
    """A candidate solution failed the symbolic re-expansion."""


# ---------------------------------------------------------------------------
# expansion

class Expander:
    """Caches H^n I1^m I2^p I12^q products for a fixed 4-tuple of generators."""

    def __init__(self, gens: Sequence[DiffOp]):
        if len(gens) != 4:
            raise ValueError("expected four generators")
        self.gens = tuple(gens)
        self._cache: dict[tuple, DiffOp] = {(0, 0, 0, 0): DiffOp.identity()}

    def __call__(self, mono: Iterable[int]) -> DiffOp:
        mono = tuple(mono)
        hit = self._cache.get(mono)
        if hit is not None:
            return hit
        if min(mono) < 0:
            raise ValueError(f"negative exponent in {mono}")
        # peel off the leftmost factor so prefixes of the ordered word are shared
        idx = next(i for i, e in enumerate(mono) if e)
        rest = list(mono)
        rest[idx] -= 1
        op = op_compose(self.gens[idx], self(tuple(rest)))
        self._cache[mono] = op
        return op

    def expand(self, poly: GenPolynomial) -> DiffOp:
        acc = DiffOp.zero()
        for mono, c in poly.items():
            acc = acc + self(mono).scale(c)
        return acc


def expand_monomial(gens: Sequence[DiffOp], mono: Iterable[int]) -> DiffOp:
    """The composition H^n . I1^m . I2^p . I12^q for ``gens = (H, I1, I2, I12)``."""
    return Expander(gens)(mono)


def expand_polynomial(gens: Sequence[DiffOp], poly: GenPolynomial) -> DiffOp:
    return Expander(gens).expand(poly)


# ---------------------------------------------------------------------------
# grading

def operator_weight(op: DiffOp, kappa: int) -> int | None:
    """Common weight of all terms, or None when ``op`` is not homogeneous.

    The zero operator has no weight and returns None as well.
    """
    found = None
    for (i, j), c in op.items():
        for (et, eu, _ea, _eb, ew), _ in c.terms():
            wt = et + kappa * eu - i - kappa * j - ew
            if found is None:
                found = wt
            elif wt != found:
                return None
    return found


def detect_grading(ops: Sequence[DiffOp], kappas: Iterable[int] = range(1, 9)) -> tuple[int, list[int]] | None:
    """First kappa for which every non-zero op is homogeneous, with the weights."""
    for kappa in kappas:
        weights = []
        for op in ops:
            if op.is_zero():
                weights.append(None)
                continue
            wt = operator_weight(op, kappa)
            if wt is None:
                break
            weights.append(wt)
        else:
            return kappa, weights
    return None


# ---------------------------------------------------------------------------
# sparse exact linear algebra

@dataclass
class SparseSystem:
    """Rows of ``{column: coefficient}`` with right-hand sides; labels are informational."""

    rows: list[dict[int, Fraction]] = field(default_factory=list)
    rhs: list[Fraction] = field(default_factory=list)
    ncols: int = 0
    col_labels: list = field(default_factory=list)
    row_labels: list = field(default_factory=list)

    def add_row(self, entries: Mapping[int, object], value=0, label=None) -> None:
        self.rows.append({c: Fraction(v) for c, v in entries.items() if v != 0})
        self.rhs.append(Fraction(value))
        self.row_labels.append(label)


@dataclass
class SparseSolution:
    values: list[Fraction]
    rank: int
    pivots: list[int]

    @property
    def unique(self) -> bool:
        return self.rank == len(self.values)


def solve_sparse(system: SparseSystem) -> SparseSolution:
    """Exact elimination over Q.

    Pivot column: the one present in the most remaining rows (lowest column
    index on ties).  Pivot row: the lowest-index remaining row holding it.
    Free variables are set to 0.  Raises NoSolution when inconsistent.
    """
    ncols = max(system.ncols, 1 + max((c for r in system.rows for c in r), default=-1))
    rows = [{c: to_fmpq(v) for c, v in r.items() if v != 0} for r in system.rows]
    rhs = [to_fmpq(v) for v in system.rhs]
    # where[c] only ever holds rows that have not been used as pivots yet
    where: dict[int, set[int]] = {}
    for ri, r in enumerate(rows):
        for c in r:
            where.setdefault(c, set()).add(ri)
    order: list[tuple[int, int]] = []
    while where:
        best = min(where, key=lambda c: (-len(where[c]), c))
        holders = where.pop(best)
        pr = min(holders)
        prow = rows[pr]
        for c in prow:
            if c != best:
                where[c].discard(pr)
        inv = 1 / prow[best]
        if inv != 1:
            for c in prow:
                prow[c] *= inv
            rhs[pr] *= inv
        for ri in holders:
            if ri == pr:
                continue
            row = rows[ri]
            f = row.pop(best)
            for c, v in prow.items():
                if c == best:
                    continue
                nv = row.get(c, 0) - f * v
                if nv == 0:
                    if c in row:
                        del row[c]
                        where[c].discard(ri)
                else:
                    if c not in row:
                        where[c].add(ri)
                    row[c] = nv
            rhs[ri] -= f * rhs[pr]
        for c in [c for c, rs in where.items() if not rs]:
            del where[c]
        order.append((best, pr))
    pivot_rows = {pr for _, pr in order}
    for ri, row in enumerate(rows):
        if ri not in pivot_rows and rhs[ri] != 0:
            label = system.row_labels[ri] if ri < len(system.row_labels) else ri
            raise NoSolution("inconsistent linear system", {"row": label})
    values = [flint.fmpq(0)] * ncols
    for c, pr in reversed(order):
        # later pivots never reappear in earlier pivot rows' free part, so this is plain back substitution
        acc = rhs[pr]
        for cc, v in rows[pr].items():
            if cc != c:
                acc -= v * values[cc]
        values[c] = acc
    return SparseSolution([to_fraction(v) for v in values], len(order), sorted(c for c, _ in order))


_PRIME = 2**62 - 57


def _independent_rows(rows, ncols: int) -> list[int] | None:
    """Indices of ncols rows independent mod a large prime, or None."""
    if len(rows) < ncols:
        return None
    entries = [0] * (ncols * len(rows))
    n = len(rows)
    for ri, row in enumerate(rows):
        for c, v in row.items():
            den = int(v.q) % _PRIME
            if den == 0:
                return None
            entries[c * n + ri] = int(v.p) * pow(den, -1, _PRIME) % _PRIME
    red, rank = flint.nmod_mat(ncols, n, entries, _PRIME).rref()
    if rank < ncols:
        return None
    picked = []
    for i in range(ncols):
        for j in range(n):
            if int(red[i, j]):
                picked.append(j)
                break
    return picked


def solve_exact(system: SparseSystem) -> SparseSolution:
    """Same answer as :func:`solve_sparse`, faster on overdetermined full-rank systems.

    Full column rank means the solution is unique, so it does not depend on
    the pivot order.  A square subsystem is picked modulo a large prime (a
    non-zero determinant mod p is non-zero over Q), solved exactly, and the
    solution is checked against every row.  Anything else falls back to the
    elimination in :func:`solve_sparse`.
    """
    ncols = max(system.ncols, 1 + max((c for r in system.rows for c in r), default=-1))
    if ncols == 0:
        return solve_sparse(system)
    rows = [{c: to_fmpq(v) for c, v in r.items() if v != 0} for r in system.rows]
    picked = _independent_rows(rows, ncols)
    if picked is None:
        return solve_sparse(system)
    mat = flint.fmpq_mat(ncols, ncols)
    vec = flint.fmpq_mat(ncols, 1)
    for i, ri in enumerate(picked):
        for c, v in rows[ri].items():
            mat[i, c] = v
        vec[i, 0] = to_fmpq(system.rhs[ri])
    sol = mat.solve(vec)
    values = [sol[c, 0] for c in range(ncols)]
    for ri, row in enumerate(rows):
        lhs = sum((v * values[c] for c, v in row.items()), flint.fmpq(0))
        if lhs != to_fmpq(system.rhs[ri]):
            label = system.row_labels[ri] if ri < len(system.row_labels) else ri
            raise NoSolution("inconsistent linear system", {"row": label})
    return SparseSolution([to_fraction(v) for v in values], ncols, list(range(ncols)))


# ---------------------------------------------------------------------------
# candidate space

@dataclass(frozen=True)
class Bounds:
    total_degree: int
    param_degree: int
    caps: tuple[int | None, int | None, int | None, int | None] = (None, None, None, 1)

    def as_dict(self) -> dict:
        names = ("H", "I1", "I2", "I12")
        caps = {n: c for n, c in zip(names, self.caps) if c is not None}
        return {"total_degree": self.total_degree, "param_degree": self.param_degree, "caps": caps}


def candidate_monomials(total_degree: int, caps=(None, None, None, 1)) -> list[GenMonomial]:
    out = []
    lim = [total_degree if c is None else min(c, total_degree) for c in caps]
    for n, m, p, q in itertools.product(*(range(x + 1) for x in lim)):
        if n + m + p + q <= total_degree:
            out.append(GenMonomial(n, m, p, q))
    out.sort(key=lambda mono: (mono.degree, tuple(mono)))
    return out


@dataclass
class Grading:
    kappa: int
    gen_weights: list[int]
    target_weight: int

    def omega_power(self, mono: GenMonomial) -> int:
        wt = sum(e * g for e, g in zip(mono, self.gen_weights))
        return wt - self.target_weight


def _grading_for(gens: Sequence[DiffOp], target: DiffOp) -> Grading | None:
    found = detect_grading(list(gens) + [target])
    if found is None:
        return None
    kappa, weights = found
    if any(wt is None for wt in weights):
        return None
    return Grading(kappa, weights[:4], weights[4])


def _param_monomials(max_degree: int, names: Sequence[str]) -> list[tuple[int, ...]]:
    out = []
    for total in range(max_degree + 1):
        for combo in itertools.product(range(total + 1), repeat=len(names)):
            if sum(combo) == total:
                out.append(combo)
    return out


def param_degree_of(op: DiffOp) -> int:
    best = 0
    for _, c in op.items():
        for (_, _, ea, eb, ew), _ in c.terms():
            best = max(best, ea + eb + ew)
    return best


# ---------------------------------------------------------------------------
# solving for a linear combination of candidate operators
#
# Both solvers look for scalars c_i in Q[a, b, w] with sum c_i * col_i == target.
# ``powers[i]`` is the forced power of w in c_i under a grading, or None when
# no grading is available (then w is an ordinary unknown parameter).


def _raw_terms(op: DiffOp):
    """(i, j, exponent tuple, fmpq) without detouring through Fraction."""
    for (i, j), raw in op._terms.items():
        for exp, v in raw.terms():
            yield i, j, tuple(map(int, exp)), v


def _row(system: SparseSystem, row_index: dict, key) -> int:
    ri = row_index.get(key)
    if ri is None:
        ri = row_index[key] = len(system.rows)
        system.rows.append({})
        system.rhs.append(0)
        system.row_labels.append(key)
    return ri


def _add_op_rows(system: SparseSystem, row_index: dict, ci: int, op: DiffOp, shift=None) -> None:
    for i, j, exp, v in _raw_terms(op):
        if shift is not None:
            exp = tuple(x + y for x, y in zip(exp, shift))
        system.rows[_row(system, row_index, (i, j) + exp)][ci] = v


def _add_rhs(system: SparseSystem, row_index: dict, target: DiffOp) -> None:
    for i, j, exp, v in _raw_terms(target):
        system.rhs[_row(system, row_index, (i, j) + exp)] = v


def _solve_monomial(target: DiffOp, columns: Sequence[DiffOp], powers, param_degree: int):
    """One big system: a scalar unknown per (column, parameter monomial)."""
    unknowns = []  # (column index, (ea, eb, ew))
    for ci in range(len(columns)):
        e = None if powers is None else powers[ci]
        if e is None:
            for ea, eb, ew in _param_monomials(param_degree, ("a", "b", "w")):
                unknowns.append((ci, (ea, eb, ew)))
        elif 0 <= e <= param_degree:
            for ea, eb in _param_monomials(param_degree - e, ("a", "b")):
                unknowns.append((ci, (ea, eb, e)))
    system = SparseSystem(ncols=len(unknowns), col_labels=unknowns)
    row_index: dict = {}
    for ui, (ci, (ea, eb, ew)) in enumerate(unknowns):
        _add_op_rows(system, row_index, ui, columns[ci], (0, 0, ea, eb, ew))
    _add_rhs(system, row_index, target)
    sol = solve_exact(system)
    coeffs = [ParamPoly() for _ in columns]
    for ui, val in enumerate(sol.values):
        if val:
            ci, (ea, eb, ew) = unknowns[ui]
            coeffs[ci] = coeffs[ci] + ParamPoly({(0, 0, ea, eb, ew): val})
    return coeffs, {"rank": sol.rank, "unknowns": len(unknowns), "param_degree": param_degree}


def _nodes(name: str, count: int) -> list[Fraction]:
    # distinct, non-special rational nodes; fixed so results are reproducible
    base = {"a": Fraction(17, 7), "b": Fraction(23, 11), "w": Fraction(29, 13)}[name]
    step = {"a": Fraction(5, 3), "b": Fraction(7, 5), "w": Fraction(11, 9)}[name]
    return [base + i * step for i in range(count)]


def _eval(p: ParamPoly, point: Mapping[str, Fraction]) -> Fraction:
    return p(**point)


def _simplex_newton(f: Callable[[tuple], list[Fraction]], names: Sequence[str], degree: int, size: int):
    """Interpolate a vector-valued polynomial of total degree <= degree.

    ``f`` maps a point (one Fraction per name) to ``size`` values and is only
    called on the lattice {node_i : sum of indices <= degree}.  Newton form in
    the last variable, recursing on the others with the degree reduced.
    """
    if not names:
        return [ParamPoly.const(v) for v in f(())]
    *head, last = names
    nodes = _nodes(last, degree + 1)
    coeffs: list[list[ParamPoly]] = []
    for j in range(degree + 1):
        bj = nodes[j]

        def g(point, j=j, bj=bj):
            vals = list(f(tuple(point) + (bj,)))
            sub = dict(zip(head, point))
            for l in range(j):
                denom = bj - nodes[l]
                vals = [(v - _eval(coeffs[l][c], sub)) / denom for c, v in enumerate(vals)]
            return vals

        coeffs.append(_simplex_newton(g, head, degree - j, size))
    var = ParamPoly.var(last)
    out = []
    for c in range(size):
        acc = ParamPoly()
        basis = ParamPoly.const(1)
        for j in range(degree + 1):
            acc = acc + coeffs[j][c] * basis
            basis = basis * (var - nodes[j])
        out.append(acc)
    return out


class _PointSolver:
    """Solves the specialised scalar system at a parameter point, with caching."""

    def __init__(self, target: DiffOp, columns_at, ncols: int, powers, names):
        self.target = target
        self.columns_at = columns_at
        self.ncols = ncols
        self.powers = powers
        self.names = names
        self.cache: dict[tuple, list[Fraction]] = {}
        self.ranks: set[int] = set()

    def __call__(self, point: tuple) -> list[Fraction]:
        hit = self.cache.get(point)
        if hit is not None:
            return hit
        bind = dict(zip(self.names, point))
        system = SparseSystem(ncols=self.ncols)
        row_index: dict = {}
        w = ParamPoly.var("w")
        for ci, op in enumerate(self.columns_at(bind)):
            if self.powers is not None:
                op = op.scale(w ** self.powers[ci])
            _add_op_rows(system, row_index, ci, op)
        _add_rhs(system, row_index, self.target.subs(bind))
        sol = solve_exact(system)
        self.ranks.add(sol.rank)
        self.cache[point] = sol.values
        return sol.values


def _solve_pointwise(target, columns_at, ncols, powers, param_degree, max_param_degree):
    names = ("a", "b") if powers is not None else ("a", "b", "w")
    solver = _PointSolver(target, columns_at, ncols, powers, names)
    degree = param_degree
    while True:
        polys = _simplex_newton(solver, names, degree, ncols)
        # an off-lattice probe guards against an under-estimated degree
        probe = tuple(_nodes(n, degree + 3)[-1] + Fraction(1, 3) for n in names)
        expected = solver(probe)
        bind = dict(zip(names, probe))
        if all(_eval(p, bind) == v for p, v in zip(polys, expected)):
            break
        if degree + 2 > max_param_degree:
            raise NoSolution("interpolation did not stabilise", {"param_degree": degree})
        degree += 2
    if powers is not None:
        w = ParamPoly.var("w")
        polys = [p * w ** e if not p.is_zero() else p for p, e in zip(polys, powers)]
    info = {"rank": max(solver.ranks), "unknowns": ncols, "points": len(solver.cache), "param_degree": degree}
    return polys, info


def solve_combination(
    target: DiffOp,
    columns: Sequence[DiffOp] | None = None,
    *,
    columns_at: Callable[[dict], Sequence[DiffOp]] | None = None,
    ncols: int | None = None,
    powers: Sequence[int] | None = None,
    param_degree: int | None = None,
    method: str = "pointwise",
    max_param_degree: int = 16,
) -> tuple[list[ParamPoly], dict]:
    """Scalars c_i in Q[a, b, w] with sum c_i * columns[i] == target.

    ``columns_at(bind)`` may supply the columns already specialised at a
    parameter point, which is much cheaper when they are products; it
    defaults to substituting into ``columns``.  The answer is not verified
    here; callers re-expand it.
    """
    if columns is None and (columns_at is None or ncols is None or method == "monomial"):
        raise ValueError("symbolic columns are needed for this method")
    if columns is not None:
        ncols = len(columns)
        if columns_at is None:
            columns_at = lambda bind: [c.subs(bind) for c in columns]
    if param_degree is None:
        param_degree = param_degree_of(target) + 2
    if method == "monomial":
        degree = param_degree
        while True:
            try:
                return _solve_monomial(target, columns, powers, degree)
            except NoSolution:
                if degree + 2 > max_param_degree:
                    raise NoSolution("no linear combination", {"param_degree": degree}) from None
                degree += 2
    if method == "pointwise":
        return _solve_pointwise(target, columns_at, ncols, powers, param_degree, max_param_degree)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# public entry points

@dataclass
class Reduction:
    result: GenPolynomial
    bounds: Bounds
    method: str
    unique: bool
    info: dict


def reduce_to_generators(
    target: DiffOp,
    gens: Sequence[DiffOp],
    caps=(None, None, None, 1),
    total_degree: int = 2,
    param_degree: int | None = None,
    method: str = "pointwise",
    max_param_degree: int = 16,
    expander: Expander | None = None,
    use_grading: bool = True,
) -> GenPolynomial:
    """Find G with expand(G) == target; raises NoSolution within the bounds."""
    return reduce_detailed(
        target, gens, caps, total_degree, param_degree, method, max_param_degree, expander, use_grading
    ).result


def reduce_detailed(
    target: DiffOp,
    gens: Sequence[DiffOp],
    caps=(None, None, None, 1),
    total_degree: int = 2,
    param_degree: int | None = None,
    method: str = "pointwise",
    max_param_degree: int = 16,
    expander: Expander | None = None,
    use_grading: bool = True,
) -> Reduction:
    """Like :func:`reduce_to_generators` but also reports rank and solver statistics."""
    caps = tuple(caps)
    if param_degree is None:
        param_degree = param_degree_of(target) + 2
    bounds = Bounds(total_degree, param_degree, caps)
    if target.is_zero():
        return Reduction(GenPolynomial(), bounds, method, True, {})
    expander = expander or Expander(gens)
    grading = _grading_for(gens, target) if use_grading else None
    monos = candidate_monomials(total_degree, caps)
    if grading is not None:
        monos = [m for m in monos if grading.omega_power(m) >= 0]
    powers = None if grading is None else [grading.omega_power(m) for m in monos]
    if method == "monomial":
        columns = [expander(m) for m in monos]
        columns_at = None
    else:
        columns = None

        def columns_at(bind):
            ex = Expander([g.subs(bind) for g in gens])
            return [ex(m) for m in monos]

    try:
        coeffs, info = solve_combination(
            target,
            columns,
            columns_at=columns_at,
            ncols=len(monos),
            powers=powers,
            param_degree=param_degree,
            method=method,
            max_param_degree=max_param_degree,
        )
    except NoSolution as exc:
        raise NoSolution("no combination of ordered monomials", {**bounds.as_dict(), **exc.bounds}) from None
    result = GenPolynomial({m: c for m, c in zip(monos, coeffs) if not c.is_zero()})
    residual = target - expander.expand(result)
    if not residual.is_zero():
        raise VerificationError(f"re-expansion left {len(residual)} non-zero derivative terms")
    info["grading"] = None if grading is None else grading.kappa
    unique = info["rank"] == info["unknowns"]
    return Reduction(result, Bounds(total_degree, info["param_degree"], caps), method, unique, info)


def find_syzygy(
    gens: Sequence[DiffOp],
    caps=(None, None, None, 1),
    total_degree: int = 3,
    param_degree: int | None = None,
    method: str = "pointwise",
    max_param_degree: int = 16,
    expander: Expander | None = None,
) -> GenPolynomial:
    """R with I12^2 == expand(R), searched among monomials with the given caps."""
    expander = expander or Expander(gens)
    square = expander((0, 0, 0, 2))
    return reduce_to_generators(square, gens, caps, total_degree, param_degree, method, max_param_degree, expander)
