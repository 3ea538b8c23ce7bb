"""Operators on the polynomial spaces P_N^(s) = span{t^p u^q : p + s*q <= N}.

The basis is ordered by grade g = p + s*q, ties broken by p ascending.  With
that order the Hamiltonian is lower triangular when s = k, so its spectrum is
the diagonal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .polyring import ParamPoly
from .report import VerificationReport
from .weyl import DiffOp, op_apply


class NotInvariant(ValueError):
    """The operator maps a basis monomial outside the space."""

    def __init__(self, source: tuple[int, int], image: tuple[int, int], N: int, s: int):
        self.source, self.image, self.N, self.s = source, image, N, s
        super().__init__(
            f"t^{source[0]}*u^{source[1]} is sent to a multiple of t^{image[0]}*u^{image[1]}, "
            f"outside P_{N}^({s})"
        )


class NotTriangular(ValueError):
    """An off-diagonal entry does not lower the grade."""


@dataclass(frozen=True)
class MonomialBasis:
    N: int
    s: int
    elements: tuple[tuple[int, int], ...]

    def grade(self, pq: tuple[int, int]) -> int:
        return pq[0] + self.s * pq[1]

    def __len__(self) -> int:
        return len(self.elements)

    def index(self, pq: tuple[int, int]) -> int:
        return self.elements.index(pq)


def basis(N: int, s: int) -> MonomialBasis:
    if N < 0 or s < 1:
        raise ValueError(f"need N >= 0 and s >= 1, got N={N}, s={s}")
    elems = [(p, q) for q in range(N // s + 1) for p in range(N - s * q + 1)]
    elems.sort(key=lambda pq: (pq[0] + s * pq[1], pq[0]))
    return MonomialBasis(N, s, tuple(elems))


@dataclass(frozen=True)
class RepMatrix:
    basis: MonomialBasis
    entries: Mapping[tuple[int, int], ParamPoly]

    @property
    def size(self) -> int:
        return len(self.basis)

    def __getitem__(self, rc: tuple[int, int]) -> ParamPoly:
        return self.entries.get(rc, ParamPoly())

    def __eq__(self, other) -> bool:
        if not isinstance(other, RepMatrix):
            return NotImplemented
        return self.basis == other.basis and dict(self.entries) == dict(other.entries)

    def __matmul__(self, other: RepMatrix) -> RepMatrix:
        if self.basis != other.basis:
            raise ValueError("bases differ")
        out: dict[tuple[int, int], ParamPoly] = {}
        for (r, m), x in self.entries.items():
            for (m2, c), y in other.entries.items():
                if m == m2:
                    out[(r, c)] = out.get((r, c), ParamPoly()) + x * y
        return RepMatrix(self.basis, {k: v for k, v in out.items() if not v.is_zero()})

    def block(self, n: int) -> dict[tuple[int, int], ParamPoly]:
        """Entries of the leading n x n block."""
        return {(r, c): v for (r, c), v in self.entries.items() if r < n and c < n}

    def diagonal(self) -> list[ParamPoly]:
        return [self[(i, i)] for i in range(self.size)]

    def is_lower_triangular_by_grade(self) -> bool:
        """Every off-diagonal entry sends a monomial to strictly lower grade."""
        g = [self.basis.grade(pq) for pq in self.basis.elements]
        return all(r == c or g[r] < g[c] for (r, c) in self.entries)

    def to_json(self) -> dict:
        return {
            "format": "repmat-v1",
            "N": self.basis.N,
            "s": self.basis.s,
            "basis": [list(pq) for pq in self.basis.elements],
            "entries": [
                {"r": r, "c": c, "coeff": v.to_json()} for (r, c), v in sorted(self.entries.items())
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1) + "\n"

    @classmethod
    def from_json(cls, data: dict) -> RepMatrix:
        if data.get("format") != "repmat-v1":
            raise ValueError(f"expected format repmat-v1, got {data.get('format')!r}")
        b = basis(int(data["N"]), int(data["s"]))
        if [list(pq) for pq in b.elements] != data["basis"]:
            raise ValueError("basis does not match N and s")
        entries = {}
        for item in data["entries"]:
            key = (int(item["r"]), int(item["c"]))
            if key in entries:
                raise ValueError(f"duplicate entry {key}")
            entries[key] = ParamPoly.from_json(item["coeff"])
        return cls(b, entries)


def matrix_of(op: DiffOp, N: int, s: int) -> RepMatrix:
    """Matrix of op on P_N^(s); column c holds the image of basis[c]."""
    b = basis(N, s)
    pos = {pq: i for i, pq in enumerate(b.elements)}
    entries: dict[tuple[int, int], ParamPoly] = {}
    for c, (p, q) in enumerate(b.elements):
        image = op_apply(op, ParamPoly({(p, q, 0, 0, 0): 1}))
        collected: dict[tuple[int, int], dict] = {}
        for (et, eu, ea, eb, ew), v in image.terms():
            collected.setdefault((et, eu), {})[(0, 0, ea, eb, ew)] = v
        for pq in sorted(collected):
            r = pos.get(pq)
            if r is None:
                raise NotInvariant((p, q), pq, N, s)
            entries[(r, c)] = ParamPoly(collected[pq])
    return RepMatrix(b, entries)


def spectrum(op: DiffOp, N: int, s: int) -> list[ParamPoly]:
    """Eigenvalues read off the diagonal, in basis order."""
    m = matrix_of(op, N, s)
    if not m.is_lower_triangular_by_grade():
        raise NotTriangular(f"matrix on P_{N}^({s}) mixes monomials of equal or higher grade")
    return m.diagonal()


def flag_check(op: DiffOp, s: int, N_max: int) -> VerificationReport:
    """Invariance of each P_N^(s), N <= N_max, and nesting of the matrices."""
    if N_max < 1:
        raise ValueError("N_max must be at least 1")
    report = VerificationReport(f"flag s={s}")
    previous = None
    for N in range(N_max + 1):
        try:
            m = matrix_of(op, N, s)
        except NotInvariant as exc:
            report.record(f"N={N}:invariant", False, str(exc))
            previous = None
            continue
        report.record(f"N={N}:invariant", True, f"dim {m.size}")
        if previous is not None:
            nested = m.block(previous.size) == dict(previous.entries)
            report.record(f"N={N}:nested", nested)
        previous = m
    return report


def expected_spectrum(k: int, N: int, s: int, w=None) -> list[ParamPoly]:
    """4w(p + k*q) for each basis monomial, in basis order."""
    wv = ParamPoly.var("w") if w is None else ParamPoly.const(Fraction(w))
    return [4 * wv * (p + k * q) for p, q in basis(N, s).elements]
