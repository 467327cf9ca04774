import time

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

import weylops as wo
from heisenberg import bracket_table
from weylops import COMPLEX_Z, COMPLEX_ZP, HEIS, R3, REAL_X, REAL_Y, DiffOp

racionales = st.builds(sp.Rational, st.integers(-9, 9), st.integers(1, 6))
campos = st.tuples(racionales, racionales, racionales)
mus = st.builds(sp.Rational, st.integers(1, 12), st.integers(1, 4))


def _xd(chart):
    return ([DiffOp.coord(chart, v) for v in chart.variables],
            [DiffOp.deriv(chart, v) for v in chart.variables])


X, D = _xd(REAL_X)


def test_relacion_de_definicion():
    assert D[0] * X[0] == X[0] * D[0] + 1
    assert wo.op_commutator(D[0], X[0]) == DiffOp.identity(REAL_X)
    assert wo.op_commutator(D[0], X[1]).is_zero()


def test_identidad_neutra(rng):
    p = wo.random_diffop(rng, REAL_X)
    assert p * DiffOp.identity(REAL_X) == p
    assert DiffOp.identity(REAL_X) * p == p
    assert wo.op_commutator(p, p).is_zero()


def test_ejemplo_leibniz():
    p, q = X[0] * D[1], X[1] * D[0]
    assert p * q - q * p == X[0] * D[0] - X[1] * D[1]


def test_forma_canonica_sin_ceros():
    p = X[0] * D[1] - X[0] * D[1]
    assert p.is_zero()
    assert len(p.terms) == 0
    with pytest.raises(AttributeError):
        p.chart = REAL_Y


def test_asociatividad(rng):
    for _ in range(5):
        p, q, r = (wo.random_diffop(rng, REAL_X) for _ in range(3))
        assert (p * q) * r == p * (q * r)


def test_mezclar_cartas_falla():
    with pytest.raises(wo.WeylOpsError):
        DiffOp.coord(REAL_X, "x0") * DiffOp.coord(REAL_Y, "y0")
    with pytest.raises(wo.WeylOpsError):
        DiffOp.coord(REAL_X, "y0")


def test_potencia():
    assert D[0] ** 2 == D[0] * D[0]
    assert X[0] ** 0 == DiffOp.identity(REAL_X)


def test_to_text_ordenado():
    texto = (D[0] * D[0] + 2 * X[1]).to_text()
    assert texto.splitlines() == ["2 | x1 | 1", "1 | 1 | D[x0]**2"]


def test_campos_de_heisenberg():
    f = wo.build_heisenberg_fields()
    (x0, x1, x2, x3) = (DiffOp.coord(HEIS, f"x{a}") for a in range(4))
    dt = [DiffOp.deriv(HEIS, f"t{lam}") for lam in (1, 2, 3)]
    assert f[0] == DiffOp.deriv(HEIS, "x0") - x1 * dt[0] - x2 * dt[1] - x3 * dt[2]
    assert wo.op_commutator(f[0], f[1]) == 2 * f[4]
    for a in range(4):
        for lam in range(4, 7):
            assert wo.op_commutator(f[a], f[lam]).is_zero()


def test_tabla_simbolica_igual_a_matricial():
    simbolica, matricial = wo.field_brackets_table(), bracket_table()
    assert simbolica.keys() == matricial.keys()
    for clave, valor in matricial.items():
        assert tuple(simbolica[clave]) == valor


def test_decompose_fields_rechaza_coeficientes_variables():
    with pytest.raises(wo.WeylOpsError):
        wo.decompose_fields(DiffOp.coord(HEIS, "x0") * DiffOp.deriv(HEIS, "x1"))


def test_elemento_de_laplace():
    q, sub = wo.build_laplace_element(), wo.build_sub_laplacian()
    f = wo.build_heisenberg_fields()
    zero = (0,) * HEIS.dim
    d_x0 = tuple(2 if v == "x0" else 0 for v in HEIS.variables)
    assert q.coefficient(zero, d_x0) == 1
    assert q - (f[4] * f[4] + f[5] * f[5] + f[6] * f[6]) == sub
    for lam in range(3):
        d_t = tuple(2 if k == lam else 0 for k in range(HEIS.dim))
        assert sub.coefficient(zero, d_t) == 0


def test_fourier_parcial_ejemplos():
    f = wo.build_heisenberg_fields()
    n1, n2, n3 = sp.Rational(1, 2), sp.Integer(-3), sp.Rational(2, 3)
    assert wo.partial_fourier(f[4] * f[4], (n1, n2, n3)) == DiffOp.scalar(REAL_X, -n1 ** 2)
    esperado = D[0] + sp.I * (-n1 * X[1] - n2 * X[2] - n3 * X[3])
    assert wo.partial_fourier(f[0], (n1, n2, n3)) == esperado


def test_fourier_parcial_errores():
    t1 = DiffOp.coord(HEIS, "t1")
    with pytest.raises(wo.WeylOpsError):
        wo.partial_fourier(t1, (1, 2, 3))
    with pytest.raises(wo.WeylOpsError):
        wo.partial_fourier(wo.build_sub_laplacian(), (1, 2))
    with pytest.raises(wo.WeylOpsError):
        wo.partial_fourier(D[0], (1, 2, 3))


@settings(max_examples=25, deadline=None)
@given(campos)
def test_sublaplaciano_da_landau(nu):
    assert -wo.partial_fourier(wo.build_sub_laplacian(), nu) == wo.build_landau(nu)


def test_sublaplaciano_da_landau_simbolico():
    nu = sp.symbols("nu1 nu2 nu3", real=True)
    assert -wo.partial_fourier(wo.build_sub_laplacian(), nu) == wo.build_landau(nu)


@settings(max_examples=15, deadline=None)
@given(campos)
def test_landau_covariante_y_momento_angular(nu):
    h = wo.build_landau(nu)
    assert h == wo.build_landau_covariant(nu)
    lap = D[0] * D[0] + D[1] * D[1] + D[2] * D[2] + D[3] * D[3]
    r2 = X[0] * X[0] + X[1] * X[1] + X[2] * X[2] + X[3] * X[3]
    l1, l2, l3 = wo.build_angular_momentum()
    n2 = nu[0] ** 2 + nu[1] ** 2 + nu[2] ** 2
    assert h == -lap + 2 * (nu[0] * l1 + nu[1] * l2 + nu[2] * l3) + n2 * r2


def test_landau_campo_nulo():
    lap = D[0] * D[0] + D[1] * D[1] + D[2] * D[2] + D[3] * D[3]
    assert wo.build_landau((0, 0, 0)) == -lap


def test_landau_en_el_plano():
    b = sp.Rational(3, 2)
    h = wo.restrict_to_plane(wo.build_landau((0, 0, b)), ("x0", "x3"))
    esperado = (-(D[1] * D[1] + D[2] * D[2]) - 2 * sp.I * b * (X[1] * D[2] - X[2] * D[1])
                + b ** 2 * (X[1] * X[1] + X[2] * X[2]))
    assert h == esperado


@settings(max_examples=10, deadline=None)
@given(mus)
def test_forma_canonica(mu):
    y, d = _xd(REAL_Y)
    can = wo.build_canonical(mu)
    assert can == wo.rename_chart(wo.build_landau((mu, 0, 0)), REAL_Y)
    angular = -2 * sp.I * mu * (y[0] * d[1] - y[1] * d[0] + y[2] * d[3] - y[3] * d[2])
    for (clave, c) in angular.terms.items():
        assert can.terms[clave] == c


def test_forma_canonica_errores():
    lap = sum((dd * dd for dd in _xd(REAL_Y)[1]), DiffOp(REAL_Y))
    assert wo.build_canonical(0) == -lap
    with pytest.raises(ValueError):
        wo.build_canonical(-1)


def test_algebra_reducida():
    f0, f1, f2, f3, t = wo.build_reduced_heisenberg_fields()
    assert wo.op_commutator(f0, f1) == 2 * t
    assert wo.op_commutator(f2, f3) == 2 * t
    assert wo.op_commutator(f0, f2).is_zero()
    mu = sp.Rational(5, 2)
    sub = f0 * f0 + f1 * f1 + f2 * f2 + f3 * f3
    assert -wo.partial_fourier(sub, (mu,)) == wo.build_canonical(mu)


def test_momento_angular():
    l1, l2, l3 = wo.build_angular_momentum()
    assert l1 == -sp.I * (X[0] * D[1] - X[1] * D[0] + X[2] * D[3] - X[3] * D[2])
    uno = DiffOp.identity(REAL_X)
    for l in (l1, l2, l3):
        assert wo.op_apply(l, uno).is_zero()
    assert (l1, l2, l3) == wo.angular_momentum_from_bivector()


def test_momento_angular_3d():
    lx, ly, lz = wo.build_angular_momentum_3d()
    assert wo.op_commutator(lx, ly) == sp.I * lz
    assert wo.op_commutator(ly, lz) == sp.I * lx
    assert wo.op_commutator(lz, lx) == sp.I * ly
    assert lx.chart == R3


def test_laplaciano_en_carta_compleja():
    d1, db1 = DiffOp.deriv(COMPLEX_ZP, "zp1"), DiffOp.deriv(COMPLEX_ZP, "zpb1")
    assert wo.chart_transform(-(D[0] * D[0] + D[1] * D[1])) == -4 * (d1 * db1)


def test_momento_angular_complejo():
    (z1, zb1, z2, zb2), (d1, db1, d2, db2) = _xd(COMPLEX_ZP)
    l1, l2, l3 = wo.build_angular_momentum()
    assert wo.chart_transform(l1) == z1 * d1 - zb1 * db1 + z2 * d2 - zb2 * db2
    assert wo.chart_transform(l2) == -sp.I * (zb1 * d2 - zb2 * d1 - z2 * db1 + z1 * db2)
    assert wo.chart_transform(l3) == zb1 * d2 - zb2 * d1 + z2 * db1 - z1 * db2


@settings(max_examples=10, deadline=None)
@given(campos)
def test_landau_complejo(nu):
    assert wo.build_landau_complex(nu) == wo.chart_transform(wo.build_landau(nu))


def test_ida_y_vuelta_y_homomorfismo(rng):
    for _ in range(4):
        p, q = wo.random_diffop(rng, REAL_X), wo.random_diffop(rng, REAL_X)
        assert wo.chart_transform(wo.chart_transform(p), "to_real") == p
        assert wo.chart_transform(p * q) == wo.chart_transform(p) * wo.chart_transform(q)
    py = wo.random_diffop(rng, REAL_Y)
    assert wo.chart_transform(py).chart == COMPLEX_Z
    assert wo.chart_transform(wo.chart_transform(py), "to_real") == py


def test_chart_transform_errores():
    with pytest.raises(wo.WeylOpsError):
        wo.chart_transform(D[0], "sideways")
    with pytest.raises(wo.WeylOpsError):
        wo.chart_transform(DiffOp.deriv(HEIS, "t1"))
    with pytest.raises(wo.WeylOpsError):
        wo.conjugate_chart(D[0])


@pytest.mark.parametrize("mu", [1, 2, 3, sp.Rational(7, 2)])
def test_escalera(mu):
    a1, a2, a1d, a2d = wo.build_ladder(mu)
    ident = DiffOp.identity(COMPLEX_Z)
    assert wo.op_commutator(a1, a1d) == mu * ident
    assert wo.op_commutator(a2, a2d) == mu * ident
    assert wo.op_commutator(a1, a2d).is_zero()
    assert wo.op_commutator(a1, a2).is_zero()
    assert wo.op_commutator(a1d, a2d).is_zero()


def test_escalera_necesita_mu_positivo():
    with pytest.raises(ValueError):
        wo.build_ladder(0)
    with pytest.raises(ValueError):
        wo.resolve_chirality(-1)


def test_quiralidad_consistente():
    veredictos = [wo.resolve_chirality(mu) for mu in (1, 2, 3, sp.Rational(7, 2))]
    assert {v.sign for v in veredictos} == {1}
    assert {v.canonical_sign for v in veredictos} == {-1}
    assert all(v.conjugate_matches for v in veredictos)
    assert veredictos[0].as_dict() == {"mu": "1", "sign": 1, "canonical_sign": -1, "conjugate_matches": True}


def test_forma_de_osciladores():
    mu = sp.Rational(7, 2)
    h = wo.conjugate_chart(wo.chart_transform(wo.build_canonical(mu)))
    assert h - wo.oscillator_form(mu) == DiffOp(COMPLEX_Z)
    assert wo.build_complex_canonical(mu, 1) == wo.oscillator_form(mu)
    with pytest.raises(ValueError):
        wo.build_complex_canonical(mu, 0)


def test_quiralidad_simbolica():
    mu = sp.Symbol("mu", positive=True)
    assert wo.resolve_chirality(mu).sign == 1


def test_diferencias_finitas(rng):
    f = DiffOp(REAL_X, {((2, 1, 0, 3), (0, 0, 0, 0)): sp.Rational(3, 2),
                        ((0, 2, 2, 0), (0, 0, 0, 0)): sp.I,
                        ((1, 0, 0, 0), (0, 0, 0, 0)): -2})
    ops = [wo.random_diffop(rng, REAL_X, max_deg=1) for _ in range(3)]
    ops.append(X[1] * D[0] * D[0] + D[1] * D[2] + X[0] * D[3] * D[3])
    for p in ops:
        for punto in rng.standard_normal((10, 4)):
            exacto = wo.evaluate(wo.op_apply(p, f), punto)
            numerico = wo.finite_difference_apply(p, f, punto)
            assert abs(exacto - numerico) <= 1e-8 * max(1.0, abs(exacto))


def test_op_apply_necesita_polinomio():
    with pytest.raises(wo.WeylOpsError):
        wo.op_apply(D[0], D[1])
    assert wo.evaluate(X[0] * X[1] + 1, (2.0, 3.0, 0.0, 0.0)) == 7


def test_finite_difference_orden_alto():
    with pytest.raises(wo.WeylOpsError):
        wo.finite_difference_apply(D[0] ** 3, X[0], np.zeros(4))


def test_coeficientes_gaussianos_normalizados():
    a = DiffOp.scalar(REAL_X, (1 + sp.I) * (2 + sp.I))
    b = DiffOp.scalar(REAL_X, 1 + 3 * sp.I)
    assert a == b
    assert a.coefficient((0,) * 4, (0,) * 4) == 1 + 3 * sp.I
    assert DiffOp.scalar(REAL_X, sp.I / 2 - sp.Rational(1, 2) * sp.I).is_zero()


@pytest.mark.parametrize("nu", [(0, 0, 0), (1, 0, 0), (sp.Rational(1, 3), sp.Rational(-2, 3), 2),
                                (sp.Rational(5, 2), 0, sp.Rational(-7, 4))])
def test_landau_por_plantilla_igual_al_desarrollo(nu):
    assert wo.build_landau(nu) == wo._build_landau_expanded(nu)
    assert wo.build_landau(nu) == wo.build_landau_covariant(nu)


def test_landau_numero_de_componentes():
    with pytest.raises(wo.WeylOpsError):
        wo.build_landau((1, 2))


def _limpiar_caches():
    for f in (wo.build_heisenberg_fields, wo.build_sub_laplacian, wo.build_laplace_element,
              wo._landau_template, wo.resolve_chirality):
        f.cache_clear()


@pytest.mark.slow
def test_tiempo_sublaplaciano_sobre_cien_campos():
    rng = np.random.default_rng(42)
    nus = [tuple(sp.Rational(int(n), int(d)) for n, d in zip(rng.integers(-9, 10, 3), rng.integers(1, 7, 3)))
           for _ in range(100)]
    _limpiar_caches()
    inicio = time.perf_counter()
    sub = wo.build_sub_laplacian()
    assert all(-wo.partial_fourier(sub, nu) == wo.build_landau(nu) for nu in nus)
    assert time.perf_counter() - inicio < 10.0


@pytest.mark.slow
def test_tiempo_escalera_y_quiralidad():
    _limpiar_caches()
    inicio = time.perf_counter()
    for mu in (sp.Integer(1), sp.Integer(2), sp.Integer(3), sp.Rational(7, 2)):
        a1, a2, a1d, a2d = wo.build_ladder(mu)
        ident = DiffOp.identity(COMPLEX_Z)
        assert wo.op_commutator(a1, a1d) == mu * ident
        assert wo.op_commutator(a2, a2d) == mu * ident
        assert wo.op_commutator(a1, a2d).is_zero()
        assert wo.resolve_chirality(mu).sign == 1
        assert wo.build_complex_canonical(mu, 1) == wo.oscillator_form(mu)
    assert time.perf_counter() - inicio < 5.0
