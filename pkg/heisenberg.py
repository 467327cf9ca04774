# heisenberg.py

"""
Grupo de Heisenberg cuaterniónico N_ω = ℝ³ ×_ω ℝ⁴.

La representación matricial ζ(t, x) es 8×8 con el orden de índices
(t1, t2, t3, x0, x1, x2, x3, 1):

    ζ(t, x) = | I₃  M(x)  t |
              | 0   I₄    x |
              | 0   0     1 |

donde M(x)·y = ω(x, y). Todo es lineal en (t, x), así que los generadores
del álgebra de Lie se obtienen en forma cerrada como ζ − I₈.
"""

from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np
import sympy as sp
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from algebra import E, E_PRIMA, Vec3, Vec4, omega_form
from logger import logger

DIM = 8
GENERATOR_NAMES = ("F0", "F1", "F2", "F3", "T1", "T2", "T3")


@dataclass(frozen=True)
class HeisElement:
    """Elemento (t, x) del grupo: t en el centro ℝ³, x en la base ℝ⁴."""
    t: Vec3
    x: Vec4

    def __post_init__(self):
        object.__setattr__(self, "t", Vec3(*self.t))
        object.__setattr__(self, "x", Vec4(*self.x))


IDENTITY = HeisElement(Vec3(0, 0, 0), Vec4(0, 0, 0, 0))


def heis_mul(g: HeisElement, h: HeisElement) -> HeisElement:
    """(t, x)·(t′, x′) = (t + t′ + ω(x, x′), x + x′)."""
    w = omega_form(g.x, h.x)
    return HeisElement(
        Vec3(*(a + b + c for a, b, c in zip(g.t, h.t, w))),
        Vec4(*(a + b for a, b in zip(g.x, h.x))),
    )


def heis_inverse(g: HeisElement) -> HeisElement:
    return HeisElement(Vec3(*(-v for v in g.t)), Vec4(*(-v for v in g.x)))


def heis_commutator(g: HeisElement, h: HeisElement) -> HeisElement:
    """g·h·g⁻¹·h⁻¹, que vale (2ω(x_g, x_h), 0)."""
    return heis_mul(heis_mul(heis_mul(g, h), heis_inverse(g)), heis_inverse(h))


def _linear_part(t, x) -> list:
    """Entradas de ζ(t, x) − I₈ como lista de filas (escalares genéricos)."""
    x0, x1, x2, x3 = x
    rows = [[0] * DIM for _ in range(DIM)]
    rows[0][3:7] = [-x1, x0, -x3, x2]
    rows[1][3:7] = [-x2, x3, x0, -x1]
    rows[2][3:7] = [-x3, -x2, x1, x0]
    for lam in range(3):
        rows[lam][7] = t[lam]
    for a in range(4):
        rows[3 + a][7] = x[a]
    return rows


def heis_matrix(g: HeisElement) -> np.ndarray:
    """
    Matriz ζ(t, x). El dtype sigue al de los escalares: float64 para
    floats, object para racionales de sympy (producto matricial exacto).
    """
    rows = _linear_part(g.t, g.x)
    for d in range(DIM):
        rows[d][d] = rows[d][d] + 1
    return np.array(rows)


def generator_matrices() -> list[np.ndarray]:
    """
    Generadores F0..F3, T1..T3 como matrices enteras 8×8.
    Fα = d/ds ζ(0, s·eα)|₀ y Tλ = d/ds ζ(s·e′λ, 0)|₀; como ζ − I₈ es
    lineal, la derivada es la parte lineal evaluada en el vector base.
    """
    zero3, zero4 = Vec3(0, 0, 0), Vec4(0, 0, 0, 0)
    gens = [np.array(_linear_part(zero3, e), dtype=np.int64) for e in E]
    gens += [np.array(_linear_part(ep, zero4), dtype=np.int64) for ep in E_PRIMA]
    return gens


def bracket(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def decompose(m: np.ndarray) -> tuple[np.ndarray, object]:
    """
    Coordenadas (f0..f3, τ1..τ3) de una matriz del álgebra y el residuo
    máximo de la reconstrucción (0 si m pertenece al álgebra).
    """
    coefs = np.concatenate([m[3:7, 7], m[0:3, 7]])
    gens = generator_matrices()
    recon = sum(c * g for c, g in zip(coefs, gens))
    return coefs, np.max(np.abs(m - recon))


def bracket_table() -> dict[tuple[str, str], tuple]:
    """Tabla de constantes de estructura calculada desde las matrices."""
    gens = generator_matrices()
    table = {}
    for a, b in combinations(range(len(gens)), 2):
        coefs, _ = decompose(bracket(gens[a], gens[b]))
        table[(GENERATOR_NAMES[a], GENERATOR_NAMES[b])] = tuple(int(c) for c in coefs)
    return table


def expected_bracket(a: int, b: int) -> tuple:
    """Predicción [Fα, Fβ] = 2 Σ_λ ω_λ(eα, eβ) T_λ; cero si interviene algún T."""
    if a >= 4 or b >= 4:
        return (0,) * 7
    w = omega_form(E[a], E[b])
    return (0, 0, 0, 0) + tuple(2 * v for v in w)


@dataclass
class StructureReport:
    """Resultado de la verificación del álgebra de Lie."""
    table: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)  # (nombre, residuo)
    violations: int = 0

    @property
    def ok(self) -> bool:
        return self.violations == 0


def verify_structure() -> StructureReport:
    """
    Calcula los 21 corchetes, los compara con el patrón 2Tγ, comprueba
    que los T son centrales y que todo doble corchete se anula.
    """
    gens = generator_matrices()
    report = StructureReport(table=bracket_table())
    n = len(gens)

    for a, b in combinations(range(n), 2):
        got = report.table[(GENERATOR_NAMES[a], GENERATOR_NAMES[b])]
        residual = max(abs(g - e) for g, e in zip(got, expected_bracket(a, b)))
        report.checks.append((f"[{GENERATOR_NAMES[a]},{GENERATOR_NAMES[b]}]", int(residual)))
        if residual != 0:
            report.violations += 1

    centro = max(int(np.max(np.abs(bracket(gens[lam], gens[x])))) for lam in range(4, n) for x in range(n))
    report.checks.append(("centro [T,X]=0", centro))
    if centro != 0:
        report.violations += 1

    doble = max(int(np.max(np.abs(bracket(bracket(gens[a], gens[b]), gens[c]))))
                for a, b, c in product(range(n), repeat=3))
    report.checks.append(("nilpotencia [[X,Y],Z]=0", doble))
    if doble != 0:
        report.violations += 1

    logger.debug(f"Estructura del álgebra verificada: {report.violations} violaciones.")
    return report


def _is_exact(g: HeisElement) -> bool:
    return all(isinstance(v, (int, sp.Rational)) for v in (*g.t, *g.x))


def _qq_matrix(g: HeisElement) -> DomainMatrix:
    rows = [[QQ.from_sympy(sp.sympify(v)) for v in row] for row in heis_matrix(g).tolist()]
    return DomainMatrix(rows, (DIM, DIM), QQ)


def homomorphism_residual(pairs) -> float:
    """
    max |ζ(g)ζ(h) − ζ(g·h)| sobre los pares dados. Los pares racionales se
    multiplican como DomainMatrix sobre QQ, así el residuo exacto es 0.
    """
    worst = 0
    for g, h in pairs:
        if _is_exact(g) and _is_exact(h):
            diff = (_qq_matrix(g) * _qq_matrix(h) - _qq_matrix(heis_mul(g, h))).to_list()
            worst = max(worst, max(abs(v) for row in diff for v in row))
        else:
            diff = heis_matrix(g) @ heis_matrix(h) - heis_matrix(heis_mul(g, h))
            worst = max(worst, np.max(np.abs(diff)))
    return float(worst)


def random_element(rng: np.random.Generator, exact: bool = True, max_den: int = 9) -> HeisElement:
    """Elemento aleatorio; con exact=True las coordenadas son sympy.Rational."""
    if exact:
        nums = rng.integers(-20, 21, size=7)
        dens = rng.integers(1, max_den + 1, size=7)
        vals = [sp.Rational(int(n), int(d)) for n, d in zip(nums, dens)]
    else:
        vals = [float(v) for v in rng.normal(size=7)]
    return HeisElement(Vec3(*vals[:3]), Vec4(*vals[3:]))
