# algebra.py

"""
Álgebra de cuaterniones y objetos asociados sobre ℍ ≅ ℝ⁴.

Contiene el producto de Hamilton, las matrices de i, j, k en ℝ⁴, la forma
simpléctica ω con valores en Im ℍ ≅ ℝ³, la matriz de campo Ω_ν, el
potencial vector A(x) = Ω_ν x y la estrella de Hodge sobre Λ²(ℝ⁴).

Las funciones son puras y genéricas en el tipo escalar: aceptan float,
int o racionales y expresiones de sympy, de modo que los caminos
exactos (heisenberg, weylops) reutilizan las mismas fórmulas.
"""

from dataclasses import dataclass
from typing import NamedTuple
import math

import numpy as np


class Vec4(NamedTuple):
    """Punto x = x0 e0 + x1 e1 + x2 e2 + x3 e3 de ℝ⁴."""
    x0: object
    x1: object
    x2: object
    x3: object


class Vec3(NamedTuple):
    """Vector de ℝ³ en la base (e′1, e′2, e′3) asociada a (i, j, k)."""
    v1: object
    v2: object
    v3: object


class Bivector(NamedTuple):
    """
    Bivector de Λ²(ℝ⁴) en el orden de base (01, 02, 03, 23, 31, 12).
    Con este orden la estrella de Hodge es una permutación.
    """
    b01: object
    b02: object
    b03: object
    b23: object
    b31: object
    b12: object


E = tuple(Vec4(*(1 if a == b else 0 for b in range(4))) for a in range(4))
E_PRIMA = tuple(Vec3(*(1 if a == b else 0 for b in range(3))) for a in range(3))


@dataclass(frozen=True)
class Quaternion:
    """Cuaternión q = w + x i + y j + z k."""
    w: object
    x: object
    y: object
    z: object

    def __add__(self, other):
        return Quaternion(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other):
        return Quaternion(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return quat_mul(self, other)
        return Quaternion(self.w * other, self.x * other, self.y * other, self.z * other)

    def __rmul__(self, other):
        return Quaternion(other * self.w, other * self.x, other * self.y, other * self.z)

    def as_vec4(self) -> Vec4:
        return Vec4(self.w, self.x, self.y, self.z)

    def imag(self) -> Vec3:
        return Vec3(self.x, self.y, self.z)

    @classmethod
    def from_vec4(cls, v):
        return cls(*v)

    @classmethod
    def pure(cls, v):
        """Cuaternión imaginario puro asociado a un vector de ℝ³."""
        return cls(0, *v)


ONE = Quaternion(1, 0, 0, 0)
I = Quaternion(0, 1, 0, 0)
J = Quaternion(0, 0, 1, 0)
K = Quaternion(0, 0, 0, 1)


def quat_mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Producto de Hamilton: i² = j² = k² = ijk = −1."""
    return Quaternion(
        p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
        p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
        p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
        p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
    )


def quat_conj(q: Quaternion) -> Quaternion:
    return Quaternion(q.w, -q.x, -q.y, -q.z)


def quat_norm2(q: Quaternion):
    return q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z


def quat_norm(q: Quaternion) -> float:
    return math.sqrt(float(quat_norm2(q)))


def quat_inverse(q: Quaternion) -> Quaternion:
    """Inverso multiplicativo conj(q)/‖q‖². Un cuaternión nulo lanza ZeroDivisionError."""
    n2 = quat_norm2(q)
    if n2 == 0:
        raise ZeroDivisionError("El cuaternión nulo no tiene inverso.")
    c = quat_conj(q)
    return Quaternion(c.w / n2, c.x / n2, c.y / n2, c.z / n2)


_UNIT_ENTRIES = {
    "i": {(0, 1): -1, (1, 0): 1, (2, 3): -1, (3, 2): 1},
    "j": {(0, 2): -1, (1, 3): 1, (2, 0): 1, (3, 1): -1},
    "k": {(0, 3): -1, (1, 2): -1, (2, 1): 1, (3, 0): 1},
}


def unit_matrix(u: str) -> np.ndarray:
    """Matriz entera 4×4 de la unidad imaginaria u ∈ {'i', 'j', 'k'} actuando sobre ℝ⁴."""
    try:
        entries = _UNIT_ENTRIES[u]
    except KeyError:
        raise ValueError(f"Unidad imaginaria desconocida: {u!r} (se espera 'i', 'j' o 'k').") from None
    m = np.zeros((4, 4), dtype=np.int64)
    for (r, c), v in entries.items():
        m[r, c] = v
    return m


def quat_left_matrix(q: Quaternion) -> np.ndarray:
    """Matriz de la multiplicación por la izquierda p ↦ q·p en la base (1, i, j, k)."""
    return (q.w * np.eye(4, dtype=np.int64) + q.x * unit_matrix("i")
            + q.y * unit_matrix("j") + q.z * unit_matrix("k"))


def omega_form(x, y) -> Vec3:
    """Forma ω(x, y) ∈ ℝ³ por sus fórmulas de componentes."""
    x0, x1, x2, x3 = x
    y0, y1, y2, y3 = y
    return Vec3(
        x0 * y1 - x1 * y0 + x2 * y3 - x3 * y2,
        x0 * y2 - x2 * y0 + x3 * y1 - x1 * y3,
        x0 * y3 - x3 * y0 + x1 * y2 - x2 * y1,
    )


def omega_form_quaternionic(x, y) -> Vec3:
    """La misma forma vía cuaterniones: Im ½(y·conj(x) − x·conj(y))."""
    qx, qy = Quaternion.from_vec4(x), Quaternion.from_vec4(y)
    d = quat_mul(qy, quat_conj(qx)) - quat_mul(qx, quat_conj(qy))
    return Vec3(d.x / 2, d.y / 2, d.z / 2)


@dataclass(frozen=True, eq=False)
class FieldMatrix:
    """Matriz antisimétrica Ω_ν asociada al campo magnético ν."""
    m: np.ndarray
    nu: Vec3

    def norm(self) -> float:
        return nu_norm(self.nu)

    def square_residual(self) -> float:
        """max |Ω² + ‖ν‖² I₄|, nulo salvo redondeo."""
        n2 = float(sum(float(v) ** 2 for v in self.nu))
        m = self.m.astype(float)
        return float(np.max(np.abs(m @ m + n2 * np.eye(4))))

    def antisymmetry_residual(self) -> float:
        m = self.m.astype(float)
        return float(np.max(np.abs(m + m.T)))


def nu_norm(nu) -> float:
    """Norma euclídea ‖ν‖ (sin desbordamiento para campos grandes)."""
    return float(math.hypot(*(float(v) for v in nu)))


def field_matrix(nu) -> FieldMatrix:
    """Ω_ν = ν₁·i + ν₂·j + ν₃·k como matriz 4×4."""
    nu = Vec3(*nu)
    m = nu.v1 * unit_matrix("i") + nu.v2 * unit_matrix("j") + nu.v3 * unit_matrix("k")
    return FieldMatrix(m=m, nu=nu)


def field_matrix_em(e_field, b_field) -> np.ndarray:
    """Matriz Ω_{E,B} con parte eléctrica E y magnética B; Ω_{ν,ν} = Ω_ν."""
    e1, e2, e3 = e_field
    b1, b2, b3 = b_field
    return np.array([
        [0, -e1, -e2, -e3],
        [e1, 0, -b3, b2],
        [e2, b3, 0, -b1],
        [e3, -b2, b1, 0],
    ])


def vector_potential(nu, x) -> Vec4:
    """A(x) = Ω_ν x, escrito componente a componente."""
    n1, n2, n3 = nu
    x0, x1, x2, x3 = x
    return Vec4(
        -n1 * x1 - n2 * x2 - n3 * x3,
        n1 * x0 - n3 * x2 + n2 * x3,
        n2 * x0 + n3 * x1 - n1 * x3,
        n3 * x0 - n2 * x1 + n1 * x2,
    )


def vector_potential_divergence(nu):
    """div A = traza de Ω_ν."""
    return np.trace(field_matrix(nu).m)


def bivector_from_matrix(m) -> Bivector:
    """
    Curvatura de la conexión A = m·x: la componente sobre e_α∧e_β es
    ½(∂_α A_β − ∂_β A_α) = m[β, α] cuando m es antisimétrica.
    """
    return Bivector(m[1][0], m[2][0], m[3][0], m[3][2], m[1][3], m[2][1])


def matrix_from_bivector(b: Bivector) -> np.ndarray:
    b01, b02, b03, b23, b31, b12 = b
    return field_matrix_em((b01, b02, b03), (b23, b31, b12))


def hodge_star(b: Bivector) -> Bivector:
    """⋆: e0∧e1 ↔ e2∧e3, e0∧e2 ↔ e3∧e1, e0∧e3 ↔ e1∧e2."""
    return Bivector(b.b23, b.b31, b.b12, b.b01, b.b02, b.b03)


def is_self_dual(b: Bivector) -> bool:
    return hodge_star(b) == b
