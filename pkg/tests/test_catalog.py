from fractions import Fraction

import pytest

from ttw import catalog
from ttw.catalog import ModelParams, NoCatalogEntry, NotPrinted
from ttw.genpoly import GenPolynomial
from ttw.expr import parse_operator
from ttw.polyring import ParamPoly
from ttw.weyl import op_commutator

KS = catalog.CATALOG_KS


def test_k1_closed_forms():
    H = catalog.build_hamiltonian(1)
    want = parse_operator(
        "-4*t*Dt^2 - 8*u*Dt*Du - 4*u*Du^2 + 4*(w*t - a - b - 1)*Dt + 4*(w*u - b - 1/2)*Du"
    )
    assert H == want
    assert catalog.build_I1(1) == parse_operator("-4*u*(t - u)*Du^2 - 4*((b + 1/2)*t - (a + b + 1)*u)*Du")


@pytest.mark.parametrize("k", KS)
def test_closed_forms_match_tables(k):
    assert catalog.build_hamiltonian(k) == catalog.fixture_operator(k, "H")
    assert catalog.build_I1(k) == catalog.fixture_operator(k, "I1")


@pytest.mark.parametrize("k", KS)
def test_orders(k):
    H, I1, I2, I12 = catalog.generators(k)
    assert (H.order, I1.order, I2.order, I12.order) == (2, 2, 2 * k, 2 * k + 1)


@pytest.mark.parametrize("k", (1, 2, 3))
def test_printed_I12_carries_misprints(k):
    printed = catalog.printed_operator(k)
    assert printed != catalog.build_I12(k)
    assert not op_commutator(catalog.build_hamiltonian(k), printed).is_zero()


def test_k1_printed_misprint_is_in_dt2():
    diff = catalog.printed_operator(1) - catalog.build_I12(1)
    t, u, w = (ParamPoly.var(v) for v in "tuw")
    assert dict(diff.items()) == {(1, 0): 8 * t * w, (2, 0): -112 * u}


def test_k4_printed_table_is_correct():
    assert catalog.printed_operator(4) == catalog.build_I12(4)


def test_no_catalog_entry_past_four():
    with pytest.raises(NoCatalogEntry, match="no catalog integral for k=5"):
        catalog.build_I2(5)
    # the closed forms do not need a table
    assert catalog.build_hamiltonian(5).order == 2


def test_k4_syzygy_not_printed():
    with pytest.raises(NotPrinted):
        catalog.expected_closure(4, "syzygy")
    assert len(catalog.expected_closure(4, "syzygy_omega0").rhs) > 0


def test_unknown_closure_name():
    with pytest.raises(ValueError):
        catalog.expected_closure(1, "tripleI1")


def test_params_from_couplings():
    p = ModelParams(2, alpha=2, beta=Fraction(3, 4))
    assert (p.a, p.b) == (2, Fraction(3, 2))
    assert p.alpha_poly == 2
    with pytest.raises(ValueError):
        ModelParams(2, alpha=1)
    with pytest.raises(ValueError):
        ModelParams(2, a=3, alpha=2)
    with pytest.raises(ValueError):
        ModelParams(0)


def test_bound_parameters_commute():
    params = ModelParams(3, a=Fraction(1, 3), b=2, w=5)
    H, I1, I2, I12 = catalog.generators(params)
    assert H.free_of("abw") and I12.free_of("abw")
    assert op_commutator(H, I2).is_zero()
    assert I12 == catalog.build_I12(3).eval_params(params.bindings())


def test_spectral_data():
    data = catalog.spectral_data(ModelParams(2, a=1, b=0, w=3))
    assert data.E0 == 2 * 3 * (2 + 1)
    assert data.eps(1, 2) == 4 * 3 * 5
    assert data.c_k == 4
    with pytest.raises(ValueError):
        data.eps(-1, 0)


def test_fixture_dir_override(monkeypatch, tmp_path):
    monkeypatch.setenv("TTW_FIXTURES", str(tmp_path))
    with pytest.raises(FileNotFoundError):
        catalog.fixture_operator(2, "I2")


def test_conjecture_forms_shape():
    q, r = catalog.conjecture_forms(2)
    assert str(q) == "32*H^2*I2 - 32*I2^2"
    assert r.degree == 4


def test_printed_k3_syzygy_misprints():
    from ttw.reduction import Expander

    ex = Expander(catalog.generators(3))
    printed = catalog.printed_closure(3, "syzygy").rhs
    verified = catalog.expected_closure(3, "syzygy").rhs
    assert ex.expand(verified) == ex((0, 0, 0, 2))
    assert ex.expand(printed) != ex((0, 0, 0, 2))
    differ = {tuple(m) for m in (printed - verified).monomials()}
    assert differ == {(4, 1, 0, 0), (4, 0, 0, 0), (3, 1, 0, 0), (3, 0, 0, 0), (2, 1, 0, 0), (0, 3, 0, 0), (2, 0, 0, 0), (1, 0, 0, 0)}
    # the misprints all carry w, so the w = 0 relation is unaffected
    assert printed.eval_params({"w": 0}) == verified.eval_params({"w": 0})


def test_printed_k4_double_commutator_misprint():
    printed = catalog.printed_closure(4, "doubleI2").rhs
    verified = catalog.expected_closure(4, "doubleI2").rhs
    a, b, w = (ParamPoly.var(v) for v in "abw")
    # 4a(13 + 26b - 19b^2) is printed where -14b^2 is correct
    assert printed - verified == GenPolynomial({(1, 0, 1, 0): 8192 * 4 * a * (-19 + 14) * b**2 * w**3})


def test_printed_closure_defaults_to_fixture():
    assert catalog.printed_closure(2, "doubleI1") == catalog.expected_closure(2, "doubleI1")
