# canonicalize.py

"""
Rotación canónica de un campo uniforme: para cada ν se construye
R ∈ SO(4) con R Ω_ν Rᵀ = ‖ν‖·i, a partir de una base directa
ortonormal (ε′1, ε′2, ε′3) de ℝ³ con ε′1 = ν/‖ν‖.

Convención fijada: con F la matriz 3×3 cuyas columnas son los ε′,
R = (1 ⊕ F)ᵀ. Las columnas de (1 ⊕ F) son la base adaptada de ℝ⁴
(e0, ν̂, ε2, Ω ε2/‖ν‖), en la que Ω_ν actúa como ‖ν‖·i.
"""

from dataclasses import dataclass
import math

import numpy as np

from algebra import field_matrix, nu_norm, unit_matrix
from logger import logger

# ν2² + ν3² por debajo de este múltiplo de ‖ν‖² se trata como ν ∥ e′1.
UMBRAL_DEGENERADO = 1e-24

# Permutaciones pares con P·i·Pᵀ = j y P·i·Pᵀ = k (columnas: imágenes de e0..e3).
_PERMUTACIONES = {
    "i": np.eye(4),
    "j": np.eye(4)[:, [0, 2, 3, 1]],
    "k": np.eye(4)[:, [0, 3, 1, 2]],
}


class CanonicalizeError(Exception):
    """Excepción para entradas sin marco canónico definido."""
    pass


@dataclass(frozen=True, eq=False)
class Frame3:
    """Base directa ortonormal (ε′1, ε′2, ε′3) de ℝ³."""
    e1: np.ndarray
    e2: np.ndarray
    e3: np.ndarray
    branch: str

    def matrix(self) -> np.ndarray:
        """Matriz de cambio de base: columnas ε′1, ε′2, ε′3."""
        return np.column_stack([self.e1, self.e2, self.e3])


@dataclass(frozen=True, eq=False)
class CanonicalRotation:
    """R, rama del caso tomada y residuo ‖R Ω_ν Rᵀ − ‖ν‖·target‖_F."""
    matrix: np.ndarray
    branch: str
    residual: float
    nu: tuple
    target: str = "i"

    @property
    def degenerate(self) -> bool:
        return self.branch == "degenerate-zero"

    def as_dict(self) -> dict:
        return {
            "nu": [float(v) for v in self.nu],
            "target": self.target,
            "branch": self.branch,
            "degenerate": self.degenerate,
            "R": [[float(v) for v in row] for row in self.matrix],
            "residual": float(self.residual),
        }


def _is_degenerate(nu: np.ndarray, norm: float) -> bool:
    return nu[1] ** 2 + nu[2] ** 2 <= UMBRAL_DEGENERADO * norm ** 2


def frame3(nu) -> Frame3:
    """
    ε′1 = ν/‖ν‖, ε′2 = ε′1∧e′1 normalizado = (0, ν3/λ, −ν2/λ), ε′3 = ε′1∧ε′2.
    Si ν es paralelo a e′1 el marco es (e′1, e′2, e′3) o (−e′1, e′2, −e′3).
    """
    nu = np.asarray(nu, dtype=float)
    norm = nu_norm(nu)
    if norm == 0.0:
        raise CanonicalizeError("El campo nulo no define un marco ε′1 = ν/‖ν‖.")

    if _is_degenerate(nu, norm):
        s = 1.0 if nu[0] > 0 else -1.0
        return Frame3(np.array([s, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]), np.array([0.0, 0.0, s]),
                      branch="identity" if s > 0 else "flip")

    lam = math.hypot(nu[1], nu[2])
    e1 = nu / norm
    e2 = np.array([0.0, nu[2] / lam, -nu[1] / lam])
    return Frame3(e1, e2, np.cross(e1, e2), branch="generic")


def proof_matrix(nu) -> np.ndarray:
    """Matriz explícita de la rama genérica, escrita entrada a entrada."""
    n1, n2, n3 = (float(v) for v in nu)
    norm = nu_norm(nu)
    lam = math.hypot(n2, n3)
    if lam == 0.0:
        raise CanonicalizeError("proof_matrix sólo está definida con ν2² + ν3² ≠ 0.")
    return np.array([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, n1 / norm, 0.0, -lam / norm],
        [0.0, n2 / norm, n3 / lam, n1 * n2 / (lam * norm)],
        [0.0, n3 / norm, -n2 / lam, n1 * n3 / (lam * norm)],
    ])


def conjugation_residual(r: np.ndarray, nu, target: str = "i") -> float:
    omega = field_matrix([float(v) for v in nu]).m
    return float(np.linalg.norm(r @ omega @ r.T - nu_norm(nu) * unit_matrix(target), ord="fro"))


def canonical_rotation(nu, target: str = "i") -> CanonicalRotation:
    """R ∈ SO(4) con R Ω_ν R⁻¹ = ‖ν‖·target, target ∈ {'i', 'j', 'k'}."""
    if target not in _PERMUTACIONES:
        raise ValueError(f"Dirección canónica desconocida: {target!r}.")
    nu = tuple(float(v) for v in nu)
    if nu_norm(nu) == 0.0:
        r, branch = np.eye(4), "degenerate-zero"
        logger.debug("Campo nulo: R = I₄ (cualquier rotación sirve).")
    else:
        frame = frame3(nu)
        block = np.eye(4)
        block[1:, 1:] = frame.matrix()
        r, branch = block.T, frame.branch
    r = _PERMUTACIONES[target] @ r
    return CanonicalRotation(matrix=r, branch=branch, residual=conjugation_residual(r, nu, target),
                             nu=nu, target=target)


def charpoly_coefficients(m) -> np.ndarray:
    """Coeficientes del polinomio característico (numpy.poly)."""
    return np.poly(np.asarray(m, dtype=float))
