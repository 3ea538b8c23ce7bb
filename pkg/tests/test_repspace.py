from collections import Counter
from fractions import Fraction

import pytest

from ttw import catalog
from ttw.expr import parse_operator
from ttw.polyring import ParamPoly
from ttw.repspace import (
    NotInvariant,
    NotTriangular,
    RepMatrix,
    basis,
    expected_spectrum,
    flag_check,
    matrix_of,
    spectrum,
)
from ttw.weyl import op_compose

W = ParamPoly.var("w")


def test_basis_order():
    assert basis(2, 2).elements == ((0, 0), (1, 0), (0, 1), (2, 0))
    # grade ties go to the smaller p
    assert basis(1, 1).elements == ((0, 0), (0, 1), (1, 0))
    assert len(basis(6, 3)) == 7 + 4 + 1
    with pytest.raises(ValueError):
        basis(-1, 1)


def test_matrix_of_euler_operator():
    m = matrix_of(parse_operator("t*Dt + 2*u*Du"), 4, 2)
    assert m.entries.keys() == {(i, i) for i in range(len(m.basis)) if i}
    assert [m[(i, i)] for i in range(len(m.basis))] == [p + 2 * q for p, q in m.basis.elements]


def test_not_invariant_carries_monomials():
    with pytest.raises(NotInvariant) as err:
        matrix_of(parse_operator("t"), 2, 1)
    assert err.value.source == (0, 2)
    assert err.value.image == (1, 2)


def test_not_triangular():
    with pytest.raises(NotTriangular):
        spectrum(parse_operator("u*Dt"), 2, 1)


def test_matmul_is_composition():
    A = catalog.build_hamiltonian(2)
    B = catalog.build_I1(2)
    assert matrix_of(A, 4, 2) @ matrix_of(B, 4, 2) == matrix_of(op_compose(A, B), 4, 2)


def test_json_round_trip():
    m = matrix_of(catalog.build_hamiltonian(2), 3, 2)
    assert RepMatrix.from_json(m.to_json()) == m
    bad = m.to_json() | {"basis": [[0, 0]]}
    with pytest.raises(ValueError):
        RepMatrix.from_json(bad)


@pytest.mark.parametrize("k", (1, 2, 3, 4))
def test_spectrum_is_the_diagonal(k):
    H = catalog.build_hamiltonian(k)
    for N in range(9):
        m = matrix_of(H, N, k)
        assert m.is_lower_triangular_by_grade()
        want = Counter(4 * W * (p + k * q) for p, q in basis(N, k).elements)
        assert Counter(m.diagonal()) == want
        assert spectrum(H, N, k) == expected_spectrum(k, N, k)


def test_k2_small_spectrum():
    assert sorted(map(str, spectrum(catalog.build_hamiltonian(2), 2, 2))) == ["0", "4*w", "8*w", "8*w"]


def test_bound_omega():
    H = catalog.build_hamiltonian(catalog.ModelParams(2, w=Fraction(1, 2)))
    assert spectrum(H, 2, 2) == expected_spectrum(2, 2, 2, w=Fraction(1, 2))


@pytest.mark.parametrize("k", (1, 2, 3, 4))
def test_flag(k):
    H = catalog.build_hamiltonian(k)
    for s in (k - 1, k):
        if s >= 1:
            report = flag_check(H, s, 6)
            assert report.passed, report.to_text()


@pytest.mark.parametrize("k", (3, 4))
def test_flag_breaks_below(k):
    report = flag_check(catalog.build_hamiltonian(k), k - 2, 6)
    assert not report.passed
    with pytest.raises(NotInvariant):
        matrix_of(catalog.build_hamiltonian(k), 6, k - 2)


def test_integrals_preserve_the_flag():
    for op in catalog.generators(2):
        assert flag_check(op, 2, 4).passed
