# spectral.py

"""
Discretización por diferencias finitas centradas (orden 2 o 4) del
operador de Landau en cajas [−L, L]^d con Dirichlet, autovalores con
ARPACK vía eigsh y el espectro analítico de Fock para comparar.

Para operadores reales eigsh ejecuta el Lanczos implícitamente reiniciado
de ARPACK; los operadores magnéticos son complejos hermíticos y scipy los
resuelve con el driver complejo de ARPACK, un Arnoldi implícitamente
reiniciado cuyos autovalores se toman por su parte real.
"""

from contextlib import nullcontext
from dataclasses import dataclass, field
import math

import numpy as np
from scipy import linalg, sparse
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh
from threadpoolctl import threadpool_limits

from algebra import field_matrix, nu_norm
from logger import logger

MAX_INCOGNITAS = 2_000_000
DENSE_CUTOFF = 500
K_DEFECTO = 6


class SpectralError(Exception):
    """Excepción base del módulo espectral."""
    pass


class GridTooLargeError(SpectralError):
    """La malla pedida excede el presupuesto de memoria configurado."""
    pass


class ConvergenceError(SpectralError):
    """El autosolver no convergió; 'report' lleva el resultado parcial."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class GridSpec:
    """Malla uniforme de N nodos interiores por eje en [−L, L]^d."""
    d: int
    L: float
    N: int
    bc: str = "dirichlet"

    def __post_init__(self):
        if self.d not in (2, 4):
            raise ValueError(f"Dimensión de malla no soportada: d={self.d} (se espera 2 o 4).")
        if not (self.L > 0 and math.isfinite(self.L)):
            raise ValueError(f"La semianchura L debe ser positiva y finita, llegó {self.L}.")
        if int(self.N) != self.N or self.N < 8:
            raise ValueError(f"N debe ser un entero ≥ 8, llegó {self.N}.")
        if self.bc != "dirichlet":
            raise ValueError(f"Condición de contorno no soportada: {self.bc!r}.")

    @property
    def h(self) -> float:
        return 2.0 * self.L / (self.N + 1)

    @property
    def unknowns(self) -> int:
        return self.N ** self.d

    def nodes(self) -> np.ndarray:
        return -self.L + self.h * np.arange(1, self.N + 1)

    def as_dict(self) -> dict:
        return {"d": self.d, "L": float(self.L), "N": int(self.N), "bc": self.bc, "h": self.h}


def default_half_width(mu: float) -> float:
    """L = 6/√μ: el ancho del estado fundamental escala como 1/√μ."""
    return 6.0 / math.sqrt(mu)


# (desplazamientos, numeradores, denominador) de las diferencias centradas.
_ESTENCILES = {
    (1, 2): ((-1, 1), (-1.0, 1.0), 2.0),
    (2, 2): ((-1, 0, 1), (1.0, -2.0, 1.0), 1.0),
    (1, 4): ((-2, -1, 1, 2), (1.0, -8.0, 8.0, -1.0), 12.0),
    (2, 4): ((-2, -1, 0, 1, 2), (-1.0, 16.0, -30.0, 16.0, -1.0), 12.0),
}


def _check_order(order: int):
    if order not in (2, 4):
        raise ValueError(f"Orden de diferencias no soportado: {order} (se espera 2 o 4).")


def _difference(deriv: int, n: int, h: float, order: int) -> sparse.csr_matrix:
    _check_order(order)
    offsets, nums, den = _ESTENCILES[(deriv, order)]
    return sparse.diags([c / den for c in nums], offsets, shape=(n, n), format="csr") / h ** deriv


def second_difference(n: int, h: float, order: int = 2) -> sparse.csr_matrix:
    """
    Orden 2: (f[j−1] − 2f[j] + f[j+1])/h². Orden 4: el estencil de cinco
    puntos (−1, 16, −30, 16, −1)/(12h²). Ceros fuera de la malla.
    """
    return _difference(2, n, h, order)


def first_difference(n: int, h: float, order: int = 2) -> sparse.csr_matrix:
    """(f[j+1] − f[j−1])/(2h) u (f[j−2] − 8f[j−1] + 8f[j+1] − f[j+2])/(12h); antisimétrica."""
    return _difference(1, n, h, order)


def _on_axis(op1d, axis: int, d: int, n: int):
    left = sparse.identity(n ** axis, format="csr")
    right = sparse.identity(n ** (d - axis - 1), format="csr")
    return sparse.kron(sparse.kron(left, op1d), right, format="csr")


def kronecker_sum(a, b) -> sparse.csr_matrix:
    """A ⊕ B = A ⊗ I + I ⊗ B."""
    ia = sparse.identity(a.shape[0], format="csr")
    ib = sparse.identity(b.shape[0], format="csr")
    return (sparse.kron(a, ib) + sparse.kron(ia, b)).tocsr()


def _check_budget(grid: GridSpec, max_unknowns: int):
    if grid.unknowns > max_unknowns:
        raise GridTooLargeError(
            f"La malla N={grid.N}, d={grid.d} tiene {grid.unknowns} incógnitas; el límite es {max_unknowns}.")


def _coordinates(grid: GridSpec) -> list[np.ndarray]:
    axes = np.meshgrid(*([grid.nodes()] * grid.d), indexing="ij")
    return [a.ravel() for a in axes]


def _assemble_magnetic(omega: np.ndarray, grid: GridSpec, max_unknowns: int, order: int) -> sparse.csr_matrix:
    """
    −Σ D2_α − 2i Σ diag(A_α) D1_α + diag(Σ A_α²) con A = Ω x en los nodos.
    Ω tiene diagonal nula, así que diag(A_α) no depende de x_α, conmuta con
    D1_α y el término magnético es hermítico exacto con cualquier orden.
    """
    _check_order(order)
    _check_budget(grid, max_unknowns)
    d, n, h = grid.d, grid.N, grid.h
    x = _coordinates(grid)
    d1, d2 = first_difference(n, h, order), second_difference(n, h, order)

    pot = np.zeros(grid.unknowns)
    op = sparse.csr_matrix((grid.unknowns, grid.unknowns), dtype=complex)
    for alpha in range(d):
        a_alpha = sum(omega[alpha, beta] * x[beta] for beta in range(d))
        pot += a_alpha ** 2
        op = op - _on_axis(d2, alpha, d, n)
        if np.any(omega[alpha]):
            op = op - 2j * (sparse.diags(a_alpha) @ _on_axis(d1, alpha, d, n))
    op = op + sparse.diags(pot)
    logger.debug(f"Operador ensamblado: {grid.unknowns} incógnitas, {op.nnz} no nulos.")
    return op.tocsr()


def _require_dimension(grid: GridSpec, d: int):
    if grid.d != d:
        raise ValueError(f"Se esperaba una malla de dimensión {d}, llegó d={grid.d}.")


def assemble_landau(nu, grid: GridSpec, max_unknowns: int = MAX_INCOGNITAS, order: int = 2) -> sparse.csr_matrix:
    """
    H_ν = −Δ − 2i⟨Ω_ν x, ∇⟩ + ‖Ω_ν x‖² sobre una malla 4-D. Con order=4 el
    error anisótropo de la malla baja a O(h⁴), que es lo que necesita la
    comparación entre campos rotados de igual norma en mallas gruesas.
    """
    _require_dimension(grid, 4)
    omega = field_matrix([float(v) for v in nu]).m.astype(float)
    return _assemble_magnetic(omega, grid, max_unknowns, order)


def assemble_canonical_2d(mu: float, grid: GridSpec, max_unknowns: int = MAX_INCOGNITAS,
                          order: int = 2) -> sparse.csr_matrix:
    """Factor −(∂0 − iμy1)² − (∂1 + iμy0)² sobre una malla 2-D."""
    if not mu > 0:
        raise ValueError(f"μ debe ser positivo, llegó {mu}.")
    _require_dimension(grid, 2)
    omega = mu * np.array([[0.0, -1.0], [1.0, 0.0]])
    return _assemble_magnetic(omega, grid, max_unknowns, order)


def assemble_canonical_4d(mu: float, grid: GridSpec, max_unknowns: int = MAX_INCOGNITAS,
                          order: int = 2) -> sparse.csr_matrix:
    """Suma de Kronecker de dos factores 2-D idénticos (planos y0y1 y y2y3)."""
    _require_dimension(grid, 4)
    _check_budget(grid, max_unknowns)
    factor = assemble_canonical_2d(mu, GridSpec(2, grid.L, grid.N), max_unknowns, order)
    return kronecker_sum(factor, factor)


def hermiticity_residual(op) -> float:
    """max |M − M†|."""
    diff = op - op.conj().T
    return float(abs(diff).max()) if diff.nnz else 0.0


def potential_residual(nu, grid: GridSpec) -> float:
    """max |‖Ω_ν x‖² − ‖ν‖²‖x‖²| en los nodos, relativo al mayor valor."""
    omega = field_matrix([float(v) for v in nu]).m.astype(float)
    x = np.array(_coordinates(grid))
    a = omega @ x
    lhs = np.sum(a ** 2, axis=0)
    rhs = nu_norm(nu) ** 2 * np.sum(x ** 2, axis=0)
    return float(np.max(np.abs(lhs - rhs)) / max(1.0, float(np.max(rhs))))


@dataclass(frozen=True)
class SpectrumReport:
    """Autovalores ordenados, residuos ‖Mv − λv‖ y metadatos del cálculo."""
    eigenvalues: tuple
    residuals: tuple
    matvecs: int
    method: str
    tol: float
    converged: bool = True
    grid: GridSpec | None = None
    nu: tuple | None = None
    mu: float | None = None

    def as_dict(self) -> dict:
        return {
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "residuals": [float(v) for v in self.residuals],
            "matvecs": int(self.matvecs),
            "method": self.method,
            "tol": float(self.tol),
            "converged": self.converged,
            "grid": self.grid.as_dict() if self.grid else None,
            "nu": [float(v) for v in self.nu] if self.nu is not None else None,
            "mu": float(self.mu) if self.mu is not None else None,
        }

    def rows(self) -> np.ndarray:
        """Filas (índice, autovalor, residuo) para exportar como CSV."""
        idx = np.arange(len(self.eigenvalues), dtype=float)
        return np.column_stack([idx, np.asarray(self.eigenvalues, dtype=float),
                                np.asarray(self.residuals, dtype=float)])


def _residuals(op, vals, vecs) -> np.ndarray:
    r = op @ vecs - vecs * vals
    return np.linalg.norm(r, axis=0) / np.linalg.norm(vecs, axis=0)


def eigensolve(op, k: int = K_DEFECTO, tol: float = 1e-8, seed: int = 0, method: str = "auto",
               threads: int | None = None, maxiter: int | None = None, ncv: int | None = None,
               dense_cutoff: int = DENSE_CUTOFF, grid: GridSpec | None = None, nu=None, mu=None) -> SpectrumReport:
    """
    Los k autovalores más pequeños de un operador hermítico.

    'lanczos' usa eigsh de ARPACK (Lanczos para operadores reales, Arnoldi
    complejo para los magnéticos hermíticos) con vector inicial tomado de
    default_rng(seed); 'dense' usa scipy.linalg.eigh;
    'auto' elige 'dense' por debajo de dense_cutoff. Cada residuo debe quedar
    por debajo de tol·max(1, |λ|); si no, se lanza ConvergenceError con el
    informe parcial.
    """
    n = op.shape[0]
    if method == "auto":
        method = "dense" if n <= dense_cutoff else "lanczos"
    if method not in ("dense", "lanczos"):
        raise ValueError(f"Método desconocido: {method!r}.")
    if k < 1 or k > n or (method == "lanczos" and k >= n - 1):
        raise ValueError(f"k={k} fuera de rango para un operador de dimensión {n}.")

    meta = dict(grid=grid, nu=tuple(nu) if nu is not None else None, mu=mu)
    limits = threadpool_limits(limits=threads) if threads else nullcontext()
    with limits:
        if method == "dense":
            mat = op.toarray() if sparse.issparse(op) else np.asarray(op)
            vals, vecs = linalg.eigh(mat, subset_by_index=[0, k - 1])
            matvecs = 0
        else:
            calls = 0

            def matvec(v):
                nonlocal calls
                calls += 1
                return op @ v

            lin = LinearOperator(op.shape, matvec=matvec, dtype=op.dtype)
            rng = np.random.default_rng(seed)
            v0 = rng.standard_normal(n)
            if np.issubdtype(op.dtype, np.complexfloating):
                v0 = v0 + 1j * rng.standard_normal(n)
            # Los niveles de Landau forman grupos casi degenerados; un subespacio amplio acelera ARPACK.
            ncv = ncv or min(n - 1, max(2 * k + 1, 64))
            # Con dtype complejo eigsh delega en eigs: driver complejo (Arnoldi) de ARPACK, which=SA pasa a SR.
            try:
                vals, vecs = eigsh(lin, k=k, which="SA", tol=tol / 10.0, v0=v0, maxiter=maxiter, ncv=ncv)
            except ArpackNoConvergence as e:
                pv, pvec = np.real(e.eigenvalues), e.eigenvectors
                order = np.argsort(pv)
                partial = SpectrumReport(tuple(pv[order]), tuple(_residuals(op, pv[order], pvec[:, order])),
                                         calls, method, tol, converged=False, **meta)
                logger.error(f"ARPACK no convergió: {len(pv)} de {k} autovalores tras {calls} productos.")
                raise ConvergenceError(f"ARPACK no convergió ({len(pv)}/{k} autovalores).", partial) from e
            matvecs = calls

    vals = np.real(vals)
    order = np.argsort(vals)
    vals, vecs = vals[order], vecs[:, order]
    res = _residuals(op, vals, vecs)
    ok = bool(np.all(res <= tol * np.maximum(1.0, np.abs(vals))))
    report = SpectrumReport(tuple(float(v) for v in vals), tuple(float(r) for r in res), matvecs, method, tol,
                            converged=ok, **meta)
    if not ok:
        raise ConvergenceError(f"Residuo máximo {float(np.max(res)):.3e} por encima de la tolerancia {tol:.1e}.", report)
    logger.info(f"Autovalores calculados ({method}, {matvecs} productos): λ₀ = {report.eigenvalues[0]:.10g}")
    return report


@dataclass(frozen=True)
class FockSpectrum:
    """Niveles (energía, multiplicidad dentro del corte) de los osciladores desacoplados."""
    mu: float
    n_max: int
    dimension: int
    levels: tuple

    def energies(self) -> list:
        return [e for e, _ in self.levels]

    def as_dict(self) -> dict:
        return {"mu": float(self.mu), "n_max": self.n_max, "dimension": self.dimension,
                "levels": [[float(e), int(m)] for e, m in self.levels]}


def fock_spectrum(mu: float, n_max: int, dimension: int = 4) -> FockSpectrum:
    """
    4-D: 4(a1†a1 + a2†a2) + 4μ tiene energías 4μ(n+1), n = n1 + n2, con
    n+1 particiones. 2-D (un factor, 4a†a + 2μ): energías 2μ(2n+1).
    """
    if not mu > 0:
        raise ValueError(f"μ debe ser positivo, llegó {mu}.")
    if int(n_max) != n_max or n_max < 0:
        raise ValueError(f"n_max debe ser un entero ≥ 0, llegó {n_max}.")
    if dimension == 4:
        levels = tuple((4.0 * mu * (n + 1), n + 1) for n in range(n_max + 1))
    elif dimension == 2:
        levels = tuple((2.0 * mu * (2 * n + 1), 1) for n in range(n_max + 1))
    else:
        raise ValueError(f"Dimensión no soportada: {dimension}.")
    return FockSpectrum(mu=mu, n_max=int(n_max), dimension=dimension, levels=levels)


@dataclass(frozen=True)
class SpectrumComparison:
    pairs: tuple
    max_rel_deviation: float
    rel_tol: float
    passed: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "passed", bool(self.max_rel_deviation <= self.rel_tol))

    def as_dict(self) -> dict:
        return {"pairs": [[float(a), float(b)] for a, b in self.pairs],
                "max_rel_deviation": float(self.max_rel_deviation),
                "rel_tol": float(self.rel_tol), "passed": self.passed}


def compare_spectra(a, b, rel_tol: float) -> SpectrumComparison:
    """
    Emparejamiento voraz de listas ordenadas. Contra un FockSpectrum cada
    autovalor se empareja con el nivel más cercano (la caja rompe la
    degeneración, así que un nivel puede recibir varios autovalores).
    """
    if isinstance(a, FockSpectrum) and not isinstance(b, FockSpectrum):
        a, b = b, a
    if isinstance(b, FockSpectrum) and not isinstance(a, FockSpectrum):
        levels = np.array(b.energies())
        pairs = tuple((float(v), float(levels[np.argmin(np.abs(levels - v))])) for v in sorted(a.eigenvalues))
    else:
        va = sorted(a.energies() if isinstance(a, FockSpectrum) else a.eigenvalues)
        vb = sorted(b.energies() if isinstance(b, FockSpectrum) else b.eigenvalues)
        pairs = tuple(zip(va, vb))
    dev = max((abs(x - y) / max(abs(y), np.finfo(float).tiny) for x, y in pairs), default=0.0)
    return SpectrumComparison(pairs=pairs, max_rel_deviation=float(dev), rel_tol=rel_tol)


def richardson_extrapolate(h1: float, lam1: float, h2: float, lam2: float, order: int = 2) -> float:
    """Extrapolación a h → 0 suponiendo λ(h) = λ₀ + C h^order."""
    a, b = h1 ** order, h2 ** order
    return (a * lam2 - b * lam1) / (a - b)


def dirichlet_mode_energy(m: int, grid: GridSpec) -> float:
    """Autovalor discreto exacto del modo m de −D2 en un eje: (2/h²)(1 − cos(mπh/(2L)))."""
    h = grid.h
    return 2.0 / h ** 2 * (1.0 - math.cos(m * math.pi * h / (2.0 * grid.L)))
