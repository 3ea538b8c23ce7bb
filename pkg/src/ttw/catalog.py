"""Concrete TTW operators and the closed forms they are expected to satisfy.

H and I1 come from closed formulas valid for any k >= 1.  I2 has a closed
formula only for k = 1; for k = 2, 3, 4 it is read from the fixture files,
as are I12 and every closure right-hand side.  The fixtures hold verified
values; where a published form differs, the literal published version sits
under ``k*/printed/`` and is returned by :func:`printed_operator` and
:func:`printed_closure`.

Fixtures live in ``ttw/fixtures`` unless the ``TTW_FIXTURES`` environment
variable points elsewhere.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from pathlib import Path
from typing import Callable

from .genpoly import GenPolynomial
from .polyring import ParamPoly
from .weyl import DiffOp, op_commutator

CATALOG_KS = (1, 2, 3, 4)
CLOSURES = ("doubleI1", "doubleI2", "syzygy", "syzygy_omega0")
OPERATORS = ("H", "I1", "I2", "I12")

t, u, a, b, w = (ParamPoly.var(n) for n in "tuabw")


class NotPrinted(LookupError):
    """The requested closed form has no published version."""


class NoCatalogEntry(ValueError):
    """k lies outside the range covered by the stored integrals."""


def fixtures_dir() -> Path:
    env = os.environ.get("TTW_FIXTURES")
    if env:
        return Path(env)
    return Path(__file__).resolve().parent / "fixtures"


def _check_k(k: int, catalog: bool = True) -> None:
    if not isinstance(k, int) or k <= 0:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    if catalog and k not in CATALOG_KS:
        raise NoCatalogEntry(f"no catalog integral for k={k}")


def _rational_root(c: Fraction) -> Fraction | None:
    """Larger root of x(x-1) = c when it is rational."""
    disc = 1 + 4 * Fraction(c)
    if disc < 0:
        return None
    num, den = disc.numerator, disc.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn != num or rd * rd != den:
        return None
    return (1 + Fraction(rn, rd)) / 2


@dataclass(frozen=True)
class ModelParams:
    """Index k with optional numeric values for a, b, w.

    Leaving a parameter as None keeps it symbolic.  ``alpha`` and ``beta``
    may be given instead of ``a`` and ``b``; the larger rational root of
    x(x-1) is then used, and an irrational root is rejected.
    """

    k: int
    a: Fraction | int | None = None
    b: Fraction | int | None = None
    w: Fraction | int | None = None
    alpha: Fraction | int | None = None
    beta: Fraction | int | None = None

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k <= 0:
            raise ValueError(f"k must be a positive integer, got {self.k!r}")
        for name, coupling in (("a", "alpha"), ("b", "beta")):
            given, c = getattr(self, name), getattr(self, coupling)
            if c is None:
                continue
            if given is None:
                root = _rational_root(c)
                if root is None:
                    raise ValueError(f"{coupling}={c} has no rational {name}")
                object.__setattr__(self, name, root)
            elif Fraction(given) * (Fraction(given) - 1) != Fraction(c):
                raise ValueError(f"{name}={given} does not give {coupling}={c}")

    def bindings(self) -> dict[str, Fraction]:
        return {n: Fraction(v) for n, v in (("a", self.a), ("b", self.b), ("w", self.w)) if v is not None}

    def _value(self, name: str) -> ParamPoly:
        v = getattr(self, name)
        return ParamPoly.var(name) if v is None else ParamPoly.const(v)

    @property
    def alpha_poly(self) -> ParamPoly:
        x = self._value("a")
        return x * (x - 1)

    @property
    def beta_poly(self) -> ParamPoly:
        x = self._value("b")
        return x * (x - 1)

    def bind(self, op: DiffOp) -> DiffOp:
        return op.eval_params(self.bindings())


def _as_params(params) -> ModelParams:
    return params if isinstance(params, ModelParams) else ModelParams(int(params))


# ---------------------------------------------------------------------------
# fixtures

@lru_cache(maxsize=None)
def _load_operator(root: str, rel: str) -> DiffOp:
    path = Path(root) / rel
    if not path.exists():
        raise FileNotFoundError(f"missing fixture {path}")
    return DiffOp.loads(path.read_text(encoding="utf-8"))


@lru_cache(maxsize=None)
def _load_genpoly(root: str, rel: str) -> GenPolynomial:
    path = Path(root) / rel
    if not path.exists():
        raise FileNotFoundError(f"missing fixture {path}")
    return GenPolynomial.loads(path.read_text(encoding="utf-8"))


def fixture_operator(k: int, name: str) -> DiffOp:
    """Stored operator ``name`` in {H, I1, I2, I12} for catalog index k."""
    _check_k(k)
    if name not in OPERATORS:
        raise ValueError(f"unknown operator {name!r}")
    return _load_operator(str(fixtures_dir()), f"k{k}/{name}.json")


def printed_operator(k: int, name: str = "I12") -> DiffOp:
    """Operator exactly as published, misprints included.

    Only stored where the published form differs from the corrected fixture;
    otherwise the fixture itself is returned.
    """
    _check_k(k)
    path = fixtures_dir() / f"k{k}/printed/{name}.json"
    if path.exists():
        return _load_operator(str(fixtures_dir()), f"k{k}/printed/{name}.json")
    return fixture_operator(k, name)


# ---------------------------------------------------------------------------
# operators

def build_hamiltonian(params) -> DiffOp:
    """The algebraic TTW Hamiltonian h_k for any positive integer k."""
    p = _as_params(params)
    k = p.k
    tk1 = t ** (k - 1)
    op = DiffOp(
        {
            (2, 0): -4 * t,
            (1, 1): -8 * k * u,
            (0, 2): -4 * k * k * tk1 * u,
            (1, 0): 4 * (w * t - (a + b) * k - 1),
            (0, 1): 4 * w * k * u - 2 * k * k * (2 * b + 1) * tk1,
        }
    )
    return p.bind(op)


def build_I1(params) -> DiffOp:
    """The second-order integral x_k for any positive integer k."""
    p = _as_params(params)
    k = p.k
    tk = t**k
    op = DiffOp(
        {
            (0, 2): -4 * k * k * u * (tk - u),
            (0, 1): -4 * k * k * ((b + Fraction(1, 2)) * tk - (a + b + 1) * u),
        }
    )
    return p.bind(op)


def build_I2(params) -> DiffOp:
    """The integral of order 2k; closed form for k = 1, stored tables otherwise."""
    p = _as_params(params)
    _check_k(p.k)
    if p.k == 1:
        op = DiffOp({(2, 0): 4 * (t - u), (1, 0): 4 * (w * (u - t) + a + Fraction(1, 2))})
    else:
        op = fixture_operator(p.k, "I2")
    return p.bind(op)


def build_I12(params, source: str = "computed") -> DiffOp:
    """[I1, I2] computed in the Weyl algebra, or the stored table."""
    p = _as_params(params)
    _check_k(p.k)
    if source == "computed":
        return p.bind(_computed_I12(p.k, str(fixtures_dir())))
    if source == "fixture":
        return p.bind(fixture_operator(p.k, "I12"))
    raise ValueError(f"source must be 'computed' or 'fixture', not {source!r}")


@lru_cache(maxsize=None)
def _computed_I12(k: int, root: str) -> DiffOp:
    # keyed on the fixture root so a TTW_FIXTURES switch is not served stale results
    return op_commutator(build_I1(k), build_I2(k))


def generators(params) -> tuple[DiffOp, DiffOp, DiffOp, DiffOp]:
    """(H, I1, I2, I12) with I12 computed."""
    p = _as_params(params)
    return build_hamiltonian(p), build_I1(p), build_I2(p), build_I12(p)


# ---------------------------------------------------------------------------
# closures

@dataclass(frozen=True)
class ExpectedClosure:
    k: int
    which: str
    rhs: GenPolynomial


def expected_closure(k: int, which: str) -> ExpectedClosure:
    """Verified right-hand side of a double commutator or syzygy."""
    _check_k(k)
    if which not in CLOSURES:
        raise ValueError(f"unknown closure {which!r}; expected one of {CLOSURES}")
    path = fixtures_dir() / f"k{k}/closures/{which}.json"
    if not path.exists():
        if which == "syzygy" and k == 4:
            raise NotPrinted("the k=4 syzygy is published only at w=0 (use syzygy_omega0)")
        raise FileNotFoundError(f"missing fixture {path}")
    return ExpectedClosure(k, which, _load_genpoly(str(fixtures_dir()), f"k{k}/closures/{which}.json"))


def printed_closure(k: int, which: str) -> ExpectedClosure:
    """Right-hand side as published, misprints included.

    Stored only where the publication differs from the verified fixture.
    """
    closure = expected_closure(k, which)
    rel = f"k{k}/printed/closures/{which}.json"
    if (fixtures_dir() / rel).exists():
        return ExpectedClosure(k, which, _load_genpoly(str(fixtures_dir()), rel))
    return closure


def conjecture_forms(k: int) -> tuple[GenPolynomial, GenPolynomial]:
    """w-free parts of the conjectured [I2, I12] and syzygy right-hand sides."""
    _check_k(k, catalog=False)
    s = (-1) ** k
    q_lead = GenPolynomial({(k, 0, 1, 0): 8 * k * k * s, (0, 0, 2, 0): -8 * k * k})
    k2, k4 = k * k, k**4
    r_lead = GenPolynomial(
        {
            (2 * k, 0, 0, 0): 4 * k4 * (2 * a + 1) * (2 * a - 3),
            (k, 1, 1, 0): -s * 16 * k2,
            (k, 0, 0, 1): s * 8 * k2,
            (k, 0, 1, 0): -s * 16 * k4 * (2 * a * a + 2 * a * b - a + b - 9),
            (0, 1, 2, 0): 16 * k2,
            (0, 0, 2, 0): 16 * k4 * ((a + b) ** 2 - 9),
            (0, 0, 1, 1): -16 * k2,
        }
    )
    return q_lead, r_lead


# ---------------------------------------------------------------------------
# spectrum

@dataclass(frozen=True)
class SpectralData:
    E0: ParamPoly
    eps: Callable[[int, int], ParamPoly]
    c_k: ParamPoly


def spectral_data(params) -> SpectralData:
    p = _as_params(params)
    k = p.k
    av, bv, wv = p._value("a"), p._value("b"), p._value("w")

    def eps(pp: int, q: int) -> ParamPoly:
        if pp < 0 or q < 0:
            raise ValueError("quantum numbers must be non-negative")
        return 4 * wv * (pp + k * q)

    return SpectralData(2 * wv * ((av + bv) * k + 1), eps, k * k * (av + bv) ** 2)
