"""Differential operators sum p_ij(t,u; a,b,w) Dt^i Du^j in normal form.

Coefficients sit to the left of the derivatives.  Composition normal-orders
with the two-variable Leibniz rule

    Dt^i Du^j . p = sum_{r<=i, s<=j} C(i,r) C(j,s) (Dt^r Du^s p) Dt^(i-r) Du^(j-s)
"""

from __future__ import annotations

import json
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping

from .polyring import CTX, ParamPoly, check_cap, to_fmpq

#: order of the zero operator
ZERO_ORDER = float("-inf")

_ZERO_RAW = CTX.from_dict({})


@lru_cache(maxsize=None)
def binomial(n: int, k: int) -> int:
    return comb(n, k)


class DiffOp:
    """Immutable differential operator with polynomial coefficients.

    ``terms`` maps ``(i, j)`` (orders in Dt, Du) to a coefficient.  Internally
    the coefficients are raw FLINT polynomials; the public accessors hand out
    :class:`ParamPoly` values.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        raw = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError(f"negative derivative order {(i, j)}")
            if isinstance(c, ParamPoly):
                c = c.raw
            elif not hasattr(c, "derivative"):
                c = ParamPoly.const(c).raw
            if not c.is_zero():
                key = (int(i), int(j))
                raw[key] = raw[key] + c if key in raw else c
        self._terms = {k: v for k, v in raw.items() if not v.is_zero()}
        self._hash = None

    @classmethod
    def _from_raw(cls, raw: dict) -> DiffOp:
        obj = cls.__new__(cls)
        obj._terms = raw
        obj._hash = None
        return obj

    @classmethod
    def identity(cls) -> DiffOp:
        return cls({(0, 0): 1})

    @classmethod
    def zero(cls) -> DiffOp:
        return cls._from_raw({})

    @classmethod
    def multiplication(cls, p: ParamPoly) -> DiffOp:
        return cls({(0, 0): p})

    @classmethod
    def derivative(cls, i: int, j: int) -> DiffOp:
        return cls({(i, j): 1})

    # -- inspection -------------------------------------------------------
    def keys(self) -> list[tuple[int, int]]:
        return sorted(self._terms)

    def items(self) -> list[tuple[tuple[int, int], ParamPoly]]:
        return [(k, ParamPoly.from_raw(self._terms[k])) for k in sorted(self._terms)]

    def coeff(self, i: int, j: int) -> ParamPoly:
        return ParamPoly.from_raw(self._terms.get((i, j), _ZERO_RAW))

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    @property
    def order(self):
        """max(i+j) over stored terms; :data:`ZERO_ORDER` for the zero operator."""
        if not self._terms:
            return ZERO_ORDER
        return max(i + j for i, j in self._terms)

    def n_monomials(self) -> int:
        return sum(len(c) for c in self._terms.values())

    def free_of(self, names: Iterable[str]) -> bool:
        names = list(names)
        return all(ParamPoly.from_raw(c).free_of(names) for c in self._terms.values())

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        if self._terms.keys() != other._terms.keys():
            return False
        return all(self._terms[k] == other._terms[k] for k in self._terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple((k, tuple(self._terms[k].terms())) for k in sorted(self._terms)))
        return self._hash

    def __repr__(self) -> str:
        from .expr import print_operator

        text = print_operator(self)
        if len(text) > 200:
            text = text[:200] + "..."
        return f"DiffOp({text!r})"

    # -- linear structure -------------------------------------------------
    def __add__(self, other: DiffOp) -> DiffOp:
        if not isinstance(other, DiffOp):
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            if k in out:
                s = out[k] + c
                if s.is_zero():
                    del out[k]
                else:
                    out[k] = s
            else:
                out[k] = c
        return DiffOp._from_raw(out)

    def __neg__(self) -> DiffOp:
        return DiffOp._from_raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: DiffOp) -> DiffOp:
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self + (-other)

    def scale(self, s) -> DiffOp:
        """Multiply every coefficient by the central scalar ``s``."""
        if isinstance(s, ParamPoly):
            s = s.raw
        else:
            s = ParamPoly.const(s).raw
        if s.is_zero():
            return DiffOp.zero()
        out = {}
        for k, c in self._terms.items():
            p = c * s
            check_cap(p)
            if not p.is_zero():
                out[k] = p
        return DiffOp._from_raw(out)

    def __mul__(self, other):
        if isinstance(other, DiffOp):
            return op_compose(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int) -> DiffOp:
        if n < 0:
            raise ValueError("negative power")
        out = DiffOp.identity()
        for _ in range(n):
            out = op_compose(out, self)
        return out

    def subs(self, bind: Mapping[str, object]) -> DiffOp:
        """Substitute values for any of t, u, a, b, w in the coefficients."""
        if not bind:
            return self
        sb = {k: to_fmpq(v) for k, v in bind.items()}
        out = {}
        for k, c in self._terms.items():
            p = c.subs(sb)
            if not p.is_zero():
                out[k] = p
        return DiffOp._from_raw(out)

    def eval_params(self, bind: Mapping[str, object]) -> DiffOp:
        bad = set(bind) - {"a", "b", "w"}
        if bad:
            raise ValueError(f"only a, b, w can be bound, got {sorted(bad)}")
        return self.subs(bind)

    # -- json -------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "format": "diffop-v1",
            "terms": [
                {"dt": i, "du": j, "coeff": coeff.to_json()} for (i, j), coeff in self.items()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> DiffOp:
        if data.get("format") != "diffop-v1":
            raise ValueError(f"expected format diffop-v1, got {data.get('format')!r}")
        terms = {}
        for item in data["terms"]:
            key = (int(item["dt"]), int(item["du"]))
            if key in terms:
                raise ValueError(f"duplicate derivative key {key}")
            terms[key] = ParamPoly.from_json(item["coeff"])
        return cls(terms)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1) + "\n"

    @classmethod
    def loads(cls, text: str) -> DiffOp:
        return cls.from_json(json.loads(text))


def _derivatives(c, r_max: int, s_max: int) -> dict:
    """All mixed derivatives Dt^r Du^s c for r <= r_max, s <= s_max (non-zero only)."""
    out = {}
    row = c
    for r in range(r_max + 1):
        if row.is_zero():
            break
        col = row
        for s in range(s_max + 1):
            if col.is_zero():
                break
            out[(r, s)] = col
            col = col.derivative(1)
        row = row.derivative(0)
    return out


def op_compose(A: DiffOp, B: DiffOp) -> DiffOp:
    """A . B in normal form."""
    if not A._terms or not B._terms:
        return DiffOp.zero()
    ri = max(i for i, _ in A._terms)
    sj = max(j for _, j in A._terms)
    dB = {key: _derivatives(c, ri, sj) for key, c in B._terms.items()}
    acc: dict = {}
    for (i, j), pa in A._terms.items():
        for (k, l), ders in dB.items():
            for (r, s), dc in ders.items():
                if r > i or s > j:
                    continue
                prod = pa * dc
                m = binomial(i, r) * binomial(j, s)
                if m != 1:
                    prod *= m
                key = (i - r + k, j - s + l)
                if key in acc:
                    acc[key] += prod
                else:
                    acc[key] = prod
    out = {}
    for key, c in acc.items():
        if not c.is_zero():
            check_cap(c)
            out[key] = c
    return DiffOp._from_raw(out)


def op_commutator(A: DiffOp, B: DiffOp) -> DiffOp:
    """[A, B] = A.B - B.A."""
    return op_compose(A, B) - op_compose(B, A)


def op_linear(ops: Iterable[tuple[object, DiffOp]]) -> DiffOp:
    """sum scalar * op for (scalar, op) pairs; scalars are central."""
    out = DiffOp.zero()
    for s, op in ops:
        out = out + op.scale(s)
    return out


def op_apply(A: DiffOp, p: ParamPoly) -> ParamPoly:
    """The image A(p) of a polynomial."""
    if not A._terms or p.is_zero():
        return ParamPoly()
    ri = max(i for i, _ in A._terms)
    sj = max(j for _, j in A._terms)
    ders = _derivatives(p.raw, ri, sj)
    acc = _ZERO_RAW
    for key, c in A._terms.items():
        d = ders.get(key)
        if d is not None:
            acc = acc + c * d
    return ParamPoly.from_raw(acc)


# convenient atoms
Dt = DiffOp.derivative(1, 0)
Du = DiffOp.derivative(0, 1)
