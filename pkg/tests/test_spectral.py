import math

import numpy as np
import pytest

from spectral import (ConvergenceError, FockSpectrum, GridSpec, GridTooLargeError, SpectrumReport,
                      assemble_canonical_2d, assemble_canonical_4d, assemble_landau, compare_spectra,
                      default_half_width, dirichlet_mode_energy, eigensolve, first_difference, fock_spectrum,
                      hermiticity_residual, kronecker_sum, potential_residual, richardson_extrapolate,
                      second_difference)


@pytest.mark.parametrize("kwargs", [
    dict(d=3, L=1.0, N=8),
    dict(d=2, L=0.0, N=8),
    dict(d=2, L=math.inf, N=8),
    dict(d=2, L=1.0, N=7),
    dict(d=2, L=1.0, N=8.5),
    dict(d=2, L=1.0, N=8, bc="periodic"),
])
def test_gridspec_invalida(kwargs):
    with pytest.raises(ValueError):
        GridSpec(**kwargs)


def test_gridspec_nodos():
    g = GridSpec(2, 3.0, 11)
    assert g.h == pytest.approx(0.5)
    assert g.unknowns == 121
    nodos = g.nodes()
    assert nodos[0] == pytest.approx(-2.5)
    assert nodos[-1] == pytest.approx(2.5)
    assert nodos[5] == pytest.approx(0.0, abs=1e-15)
    assert g.as_dict()["h"] == g.h


def test_semianchura_por_defecto():
    assert default_half_width(1.0) == 6.0
    assert default_half_width(4.0) == 3.0


def test_diferencias_unidimensionales():
    g = GridSpec(2, math.pi / 2, 9)
    d2 = second_difference(g.N, g.h).toarray()
    d1 = first_difference(g.N, g.h).toarray()
    np.testing.assert_array_equal(d1, -d1.T)
    np.testing.assert_array_equal(d2, d2.T)
    exactos = [dirichlet_mode_energy(m, g) for m in range(1, g.N + 1)]
    np.testing.assert_allclose(np.linalg.eigvalsh(-d2), exactos, rtol=1e-12)


def test_modo_fundamental_unidimensional():
    g = GridSpec(2, math.pi / 2, 99)
    e1 = dirichlet_mode_energy(1, g)
    assert e1 == pytest.approx(1.0, abs=1e-3)
    assert e1 < 1.0


def test_suma_de_kronecker():
    a = np.diag([1.0, 2.0])
    b = np.diag([10.0, 20.0, 30.0])
    s = kronecker_sum(a, b).toarray()
    np.testing.assert_array_equal(np.diag(s), [11.0, 21.0, 31.0, 12.0, 22.0, 32.0])


def test_diagonal_central_2d():
    g = GridSpec(2, 2.0, 9)
    h = assemble_canonical_2d(1.5, g)
    centro = 4 * g.N + 4
    assert h[centro, centro] == pytest.approx(4.0 / g.h ** 2)


def test_diagonal_central_4d():
    g = GridSpec(4, 2.0, 9)
    h = assemble_landau((0.4, -1.0, 0.7), g)
    centro = 4 * (1 + g.N + g.N ** 2 + g.N ** 3)
    assert h[centro, centro] == pytest.approx(8.0 / g.h ** 2)


def test_diferencias_de_orden_4():
    g = GridSpec(2, 2.0, 9)
    d2 = second_difference(g.N, g.h, order=4).toarray()
    d1 = first_difference(g.N, g.h, order=4).toarray()
    np.testing.assert_array_equal(d1, -d1.T)
    np.testing.assert_array_equal(d2, d2.T)
    assert d2[4, 4] == pytest.approx(-2.5 / g.h ** 2)
    assert d1[4, 6] == pytest.approx(-1.0 / (12.0 * g.h))
    x = g.nodes()
    # Exacta para cúbicos lejos del borde.
    np.testing.assert_allclose((d1 @ x ** 3)[2:-2], (3 * x ** 2)[2:-2], rtol=1e-10, atol=1e-10)


def test_diagonal_central_4d_orden_4():
    g = GridSpec(4, 2.0, 9)
    h = assemble_landau((0.4, -1.0, 0.7), g, order=4)
    centro = 4 * (1 + g.N + g.N ** 2 + g.N ** 3)
    assert h[centro, centro] == pytest.approx(10.0 / g.h ** 2)
    assert hermiticity_residual(h) == 0.0


def test_orden_no_soportado():
    with pytest.raises(ValueError):
        second_difference(8, 0.1, order=3)
    with pytest.raises(ValueError):
        assemble_canonical_2d(1.0, GridSpec(2, 1.0, 8), order=6)


def test_hermiticidad_exacta():
    g = GridSpec(4, 3.0, 8)
    assert hermiticity_residual(assemble_landau((0.3, -0.5, 1.1), g)) == 0.0
    assert hermiticity_residual(assemble_canonical_2d(2.0, GridSpec(2, 3.0, 12))) == 0.0


def test_canonico_4d_igual_a_landau_en_e1():
    g = GridSpec(4, 2.5, 8)
    a = assemble_canonical_4d(1.25, g)
    b = assemble_landau((1.25, 0.0, 0.0), g)
    assert abs(a - b).max() <= 1e-10


def test_residuo_del_potencial():
    assert potential_residual((0.3, -2.0, 0.9), GridSpec(4, 2.0, 8)) <= 1e-12


def test_dimension_equivocada():
    with pytest.raises(ValueError):
        assemble_landau((1, 0, 0), GridSpec(2, 1.0, 8))
    with pytest.raises(ValueError):
        assemble_canonical_2d(1.0, GridSpec(4, 1.0, 8))
    with pytest.raises(ValueError):
        assemble_canonical_2d(0.0, GridSpec(2, 1.0, 8))


def test_malla_demasiado_grande():
    with pytest.raises(GridTooLargeError):
        assemble_landau((1, 0, 0), GridSpec(4, 1.0, 40), max_unknowns=1000)
    with pytest.raises(GridTooLargeError):
        assemble_canonical_4d(1.0, GridSpec(4, 1.0, 40), max_unknowns=1000)


def test_campo_nulo_lanczos():
    g = GridSpec(4, 3.0, 8)
    rep = eigensolve(assemble_landau((0, 0, 0), g), k=1, tol=1e-8, seed=7, method="lanczos", grid=g, nu=(0, 0, 0))
    assert rep.converged
    assert rep.matvecs > 0
    assert rep.eigenvalues[0] == pytest.approx(4 * dirichlet_mode_energy(1, g), rel=1e-10)
    assert rep.as_dict()["grid"]["N"] == 8


def test_denso_contra_lanczos():
    g = GridSpec(2, 3.0, 14)
    op = assemble_canonical_2d(0.5, g)
    denso = eigensolve(op, k=3, method="dense")
    lanczos = eigensolve(op, k=3, method="lanczos", seed=3)
    assert denso.method == "dense"
    assert denso.matvecs == 0
    np.testing.assert_allclose(lanczos.eigenvalues, denso.eigenvalues, rtol=1e-7)
    assert eigensolve(op, k=3, method="auto").method == "dense"


def test_lanczos_reproducible():
    g = GridSpec(2, 3.0, 20)
    op = assemble_canonical_2d(1.0, g)
    a = eigensolve(op, k=2, method="lanczos", seed=11)
    b = eigensolve(op, k=2, method="lanczos", seed=11)
    assert a.eigenvalues == b.eigenvalues
    assert a.matvecs == b.matvecs


def test_error_de_convergencia_con_informe():
    op = assemble_canonical_2d(1.0, GridSpec(2, 3.0, 10))
    with pytest.raises(ConvergenceError) as info:
        eigensolve(op, k=2, tol=1e-30, method="dense")
    assert info.value.report is not None
    assert not info.value.report.converged
    assert len(info.value.report.eigenvalues) == 2


@pytest.mark.parametrize("kwargs", [dict(method="qr"), dict(k=0), dict(k=200)])
def test_eigensolve_argumentos(kwargs):
    op = assemble_canonical_2d(1.0, GridSpec(2, 3.0, 10))
    with pytest.raises(ValueError):
        eigensolve(op, **kwargs)


def test_filas_csv():
    rep = SpectrumReport(eigenvalues=(1.0, 2.5), residuals=(1e-12, 2e-12), matvecs=3, method="dense", tol=1e-8)
    filas = rep.rows()
    assert filas.shape == (2, 3)
    np.testing.assert_array_equal(filas[:, 0], [0, 1])


def test_espectro_de_fock():
    f4 = fock_spectrum(1.0, 2)
    assert f4.levels == ((4.0, 1), (8.0, 2), (12.0, 3))
    f2 = fock_spectrum(0.5, 2, dimension=2)
    assert f2.energies() == [1.0, 3.0, 5.0]
    assert f2.as_dict()["levels"][0] == [1.0, 1]


@pytest.mark.parametrize("args", [(0.0, 2), (1.0, -1), (1.0, 1.5), (1.0, 2, 3)])
def test_espectro_de_fock_errores(args):
    with pytest.raises(ValueError):
        fock_spectrum(*args)


def test_comparacion_contra_fock():
    rep = SpectrumReport(eigenvalues=(2.01, 6.05), residuals=(0.0, 0.0), matvecs=0, method="dense", tol=1e-8)
    comp = compare_spectra(rep, fock_spectrum(1.0, 3, dimension=2), rel_tol=0.01)
    assert comp.pairs == ((2.01, 2.0), (6.05, 6.0))
    assert comp.max_rel_deviation == pytest.approx(0.05 / 6.0)
    assert comp.passed
    assert not compare_spectra(fock_spectrum(1.0, 3, dimension=2), rep, rel_tol=1e-3).passed


def test_comparacion_entre_informes():
    a = SpectrumReport(eigenvalues=(1.0, 2.0), residuals=(0.0, 0.0), matvecs=0, method="dense", tol=1e-8)
    b = SpectrumReport(eigenvalues=(2.0, 1.0), residuals=(0.0, 0.0), matvecs=0, method="dense", tol=1e-8)
    comp = compare_spectra(a, b, rel_tol=0.0)
    assert comp.max_rel_deviation == 0.0
    assert comp.passed
    assert isinstance(fock_spectrum(1.0, 0), FockSpectrum)


def test_extrapolacion_de_richardson():
    def lam(h):
        return 3.0 + 5.0 * h ** 2

    assert richardson_extrapolate(0.2, lam(0.2), 0.1, lam(0.1)) == pytest.approx(3.0)


def test_extrapolacion_de_richardson_orden_4():
    def lam(h):
        return 3.0 + 5.0 * h ** 4

    assert richardson_extrapolate(0.2, lam(0.2), 0.1, lam(0.1), order=4) == pytest.approx(3.0)


@pytest.mark.slow
def test_nivel_fundamental_2d():
    g = GridSpec(2, 8.0, 96)
    rep = eigensolve(assemble_canonical_2d(1.0, g), k=6, tol=1e-8, seed=0, method="lanczos")
    assert all(1.96 <= v <= 2.04 for v in rep.eigenvalues)


@pytest.mark.slow
def test_campo_rotado_4d():
    g = GridSpec(4, 5.0, 16)
    rotado = eigensolve(assemble_landau((1 / 3, 2 / 3, 2 / 3), g, order=4), k=4, tol=1e-8, seed=0,
                        method="lanczos")
    alineado = eigensolve(assemble_landau((1.0, 0.0, 0.0), g, order=4), k=4, tol=1e-8, seed=0,
                          method="lanczos")
    assert compare_spectra(rotado, alineado, rel_tol=0.01).passed
    assert abs(rotado.eigenvalues[0] - 4.0) / 4.0 <= 0.10


@pytest.mark.slow
def test_refinamiento_y_richardson_2d():
    lams, hs = [], []
    for n in (48, 96, 192):
        g = GridSpec(2, 8.0, n)
        rep = eigensolve(assemble_canonical_2d(1.0, g), k=6, tol=1e-8, seed=0, method="lanczos")
        lams.append(rep.eigenvalues[0])
        hs.append(g.h)
    errores = [abs(v - 2.0) for v in lams]
    assert errores[0] > errores[1] > errores[2]
    d1, d2 = lams[0] - lams[1], lams[1] - lams[2]
    assert d1 * d2 > 0
    assert 3.0 <= d1 / d2 <= 5.0
    assert richardson_extrapolate(hs[1], lams[1], hs[2], lams[2]) == pytest.approx(2.0, rel=5e-3)
    assert richardson_extrapolate(hs[0], lams[0], hs[1], lams[1]) == pytest.approx(2.0, rel=5e-3)
