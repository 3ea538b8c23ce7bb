from fractions import Fraction

import pytest

from ttw import catalog
from ttw.expr import parse_operator
from ttw.hidden_algebra import (
    GeneratorId,
    TowerMismatch,
    build_generator,
    express_in_generators,
    generating_set,
    ordered_products,
    t_tower_by_commutators,
    tower_factor,
    verify_structure,
)
from ttw.reduction import NoSolution
from ttw.repspace import matrix_of
from ttw.weyl import op_commutator


def test_generator_ids_validate():
    assert GeneratorId("R", 2, 0, 1).name == "R1"
    with pytest.raises(ValueError):
        GeneratorId("R", 2, 0, 3)
    with pytest.raises(ValueError):
        GeneratorId("J1", 2, 0, 1)
    with pytest.raises(ValueError):
        GeneratorId("T", 0, 0, 0)
    with pytest.raises(ValueError):
        GeneratorId("X", 1)


def test_closed_forms():
    assert build_generator(GeneratorId("J4", 2, 3)) == parse_operator("t^2*Dt + 2*t*u*Du - 3*t")
    assert build_generator(GeneratorId("T", 2, 0, 1)) == parse_operator("u*Dt*(t*Dt + 2*u*Du)")
    assert build_generator(GeneratorId("T", 2, 0, 3)).is_zero()


@pytest.mark.parametrize("s", range(1, 5))
def test_generating_set_size(s):
    assert len(generating_set(s)) == 2 * s + 6


@pytest.mark.parametrize("s", (1, 2, 3))
@pytest.mark.parametrize("N", (0, 3, 5))
def test_generators_preserve_the_space(s, N):
    # the finite-dimensional representation: every generator maps P_N^(s) into itself
    for name, op in generating_set(s, N):
        matrix_of(op, N, s)


def test_tower_factor():
    assert [tower_factor(3, i) for i in range(4)] == [1, -3, 6, -6]


@pytest.mark.parametrize("s", range(1, 7))
def test_tower_by_commutators(s):
    tower = t_tower_by_commutators(s, Fraction(7, 3))
    assert len(tower) == s + 1
    assert all(not op.is_zero() for op in tower)


def test_tower_rejects_bad_s():
    with pytest.raises(ValueError):
        t_tower_by_commutators(0)
    assert issubclass(TowerMismatch, AssertionError)


@pytest.mark.parametrize("s", (1, 2, 3, 4))
def test_structure(s):
    report = verify_structure(s)
    assert report.passed, report.to_text()


def test_gl2_table_holds_at_symbolic_free_N():
    J = {n: build_generator(GeneratorId(n, 2, Fraction(5, 2))) for n in ("J1", "J2", "J3", "J4")}
    assert op_commutator(J["J1"], J["J2"]) == J["J1"]
    assert op_commutator(J["J2"], J["J4"]) == J["J4"]
    assert op_commutator(J["J1"], J["J4"]) == J["J2"].scale(2) + J["J3"]


def test_ordered_products():
    words = ordered_products(3, 2)
    assert len(words) == 1 + 3 + 6
    assert (0, 2, 0) in words and (1, 0, 1) in words


@pytest.mark.parametrize("k", (2, 3, 4))
def test_integrals_in_hidden_algebra(k):
    x = express_in_generators(catalog.build_I1(k), k)
    h = express_in_generators(catalog.build_hamiltonian(k), k)
    h_low = express_in_generators(catalog.build_hamiltonian(k), k - 1)
    assert len(x) and len(h) and len(h_low)


def test_hamiltonian_not_in_smaller_algebra():
    # k - 2 is below the threshold, so no combination exists
    with pytest.raises(NoSolution):
        express_in_generators(catalog.build_hamiltonian(3), 1)
