# weylops.py

"""
Motor simbólico del álgebra de Weyl: operadores diferenciales con
coeficientes polinómicos en orden normal (coordenadas a la izquierda de
las derivadas), con coeficientes exactos de sympy.

Sobre este motor se construyen los campos de Heisenberg, el elemento de
Laplace, el sub-Laplaciano y su transformada parcial de Fourier, el
operador de Landau H_ν, su forma canónica, el momento angular, los
operadores escalera y el cambio a coordenadas complejas.
"""

from collections.abc import Mapping
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import comb, perm
from types import MappingProxyType

import numpy as np
import sympy as sp

from algebra import Bivector, E, field_matrix, hodge_star, omega_form
from logger import logger


class WeylOpsError(Exception):
    """Excepción para operaciones inválidas del motor de Weyl (cartas, entradas fuera de alcance)."""
    pass


class ChiralityError(WeylOpsError):
    """Ningún signo del término angular reproduce la forma de osciladores."""
    pass


@dataclass(frozen=True)
class Chart:
    """Conjunto ordenado de variables; 'center' son las variables que elimina la transformada de Fourier."""
    name: str
    variables: tuple
    center: tuple = ()

    @property
    def dim(self) -> int:
        return len(self.variables)

    def index(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise WeylOpsError(f"La variable {var!r} no pertenece a la carta {self.name!r}.") from None


HEIS = Chart("heisenberg", ("t1", "t2", "t3", "x0", "x1", "x2", "x3"), center=("t1", "t2", "t3"))
HEIS_REDUCIDO = Chart("heisenberg_reducido", ("t", "y0", "y1", "y2", "y3"), center=("t",))
REAL_X = Chart("real_x", ("x0", "x1", "x2", "x3"))
REAL_Y = Chart("real_y", ("y0", "y1", "y2", "y3"))
COMPLEX_ZP = Chart("complejo_zp", ("zp1", "zpb1", "zp2", "zpb2"))
COMPLEX_Z = Chart("complejo_z", ("z1", "zb1", "z2", "zb2"))
R3 = Chart("r3", ("x1", "x2", "x3"))

_FOURIER_TARGET = {HEIS.name: REAL_X, HEIS_REDUCIDO.name: REAL_Y}


def _is_gaussian(c) -> bool:
    """a + b·i con a, b numéricos; sympy ya los deja en forma canónica al sumarlos."""
    if c.is_Number or c is sp.I:
        return True
    if c.is_Mul:
        return len(c.args) == 2 and c.args[0].is_Number and c.args[1] is sp.I
    if c.is_Add:
        return all(not a.is_Add and _is_gaussian(a) for a in c.args)
    return False


def _coef(c):
    c = sp.sympify(c)
    return c if _is_gaussian(c) else sp.expand(c)



class DiffOp:
    """
    Elemento del álgebra de Weyl sobre una carta. Cada término se indexa
    por (exponentes de coordenadas, exponentes de derivadas) y representa
    coef · x^a ∂^b. Inmutable; la forma canónica no tiene coeficientes nulos.
    """

    __slots__ = ("chart", "terms")

    def __init__(self, chart: Chart, terms=None):
        acc = {}
        items = terms.items() if isinstance(terms, Mapping) else (terms or ())
        for (xe, de), c in items:
            xe, de = tuple(int(v) for v in xe), tuple(int(v) for v in de)
            if len(xe) != chart.dim or len(de) != chart.dim:
                raise WeylOpsError(f"Término con {len(xe)} variables en la carta {chart.name!r} de dimensión {chart.dim}.")
            acc.setdefault((xe, de), []).append(c)
        clean = {}
        for key, cs in acc.items():
            c = _coef(cs[0] if len(cs) == 1 else sp.Add(*cs))
            if c != 0:
                clean[key] = c
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "terms", MappingProxyType(clean))

    def __setattr__(self, name, value):
        raise AttributeError("DiffOp es inmutable.")

    # --- constructores ---

    @classmethod
    def identity(cls, chart: Chart):
        return cls.scalar(chart, 1)

    @classmethod
    def scalar(cls, chart: Chart, c):
        zero = (0,) * chart.dim
        return cls(chart, {(zero, zero): c})

    @classmethod
    def coord(cls, chart: Chart, var: str):
        i = chart.index(var)
        xe = tuple(1 if k == i else 0 for k in range(chart.dim))
        return cls(chart, {(xe, (0,) * chart.dim): 1})

    @classmethod
    def deriv(cls, chart: Chart, var: str):
        i = chart.index(var)
        de = tuple(1 if k == i else 0 for k in range(chart.dim))
        return cls(chart, {((0,) * chart.dim, de): 1})

    # --- aritmética ---

    def _lift(self, other):
        if isinstance(other, DiffOp):
            _require_same_chart(self, other)
            return other
        return DiffOp.scalar(self.chart, other)

    def __add__(self, other):
        other = self._lift(other)
        return DiffOp(self.chart, list(self.terms.items()) + list(other.terms.items()))

    __radd__ = __add__

    def __neg__(self):
        return DiffOp(self.chart, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, DiffOp):
            return op_compose(self, other)
        return DiffOp(self.chart, {k: c * other for k, c in self.terms.items()})

    def __rmul__(self, other):
        return DiffOp(self.chart, {k: other * c for k, c in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise WeylOpsError("Potencia negativa de un operador diferencial.")
        out = DiffOp.identity(self.chart)
        for _ in range(n):
            out = op_compose(out, self)
        return out

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.chart == other.chart and (self - other).is_zero()

    __hash__ = None

    # --- consultas ---

    def is_zero(self) -> bool:
        return not self.terms

    def is_polynomial(self) -> bool:
        return all(not any(de) for (_, de) in self.terms)

    def coefficient(self, xexp, dexp):
        return self.terms.get((tuple(xexp), tuple(dexp)), sp.Integer(0))

    def order(self) -> int:
        return max((sum(de) for (_, de) in self.terms), default=0)

    def to_text(self) -> str:
        """Lista ordenada de términos, una línea por término (para archivos dorados)."""
        lines = []
        for (xe, de) in sorted(self.terms, key=lambda k: (sum(k[1]), k[1], sum(k[0]), k[0])):
            mono = "*".join(_factor(v, e) for v, e in zip(self.chart.variables, xe) if e) or "1"
            ders = "*".join(_factor(f"D[{v}]", e) for v, e in zip(self.chart.variables, de) if e) or "1"
            lines.append(f"{sp.sstr(self.terms[(xe, de)])} | {mono} | {ders}")
        return "\n".join(lines)

    def __repr__(self):
        return f"DiffOp({self.chart.name}, {len(self.terms)} términos)"


def _factor(name, e):
    return name if e == 1 else f"{name}**{e}"


def _require_same_chart(p: DiffOp, q: DiffOp):
    if p.chart != q.chart:
        raise WeylOpsError(f"Cartas distintas: {p.chart.name!r} y {q.chart.name!r}; use chart_transform o rename_chart.")


def op_compose(p: DiffOp, q: DiffOp) -> DiffOp:
    """
    Producto P∘Q en orden normal. Por Leibniz,
    ∂^b x^a = Σ_k C(b,k)·a!/(a−k)!·x^{a−k} ∂^{b−k} en cada variable.
    """
    _require_same_chart(p, q)
    acc = []
    for (pa, pb), pc in p.terms.items():
        for (qa, qb), qc in q.terms.items():
            ranges = [range(min(b, a) + 1) for b, a in zip(pb, qa)]
            for ks in product(*ranges):
                factor = 1
                for b, a, k in zip(pb, qa, ks):
                    factor *= comb(b, k) * perm(a, k)
                xe = tuple(x + a - k for x, a, k in zip(pa, qa, ks))
                de = tuple(b - k + d for b, k, d in zip(pb, ks, qb))
                acc.append(((xe, de), factor * pc * qc))
    return DiffOp(p.chart, acc)


def op_commutator(p: DiffOp, q: DiffOp) -> DiffOp:
    return op_compose(p, q) - op_compose(q, p)


def op_apply(p: DiffOp, f: DiffOp) -> DiffOp:
    """Acción de P sobre el polinomio f: los términos de P∘f sin derivadas."""
    if not f.is_polynomial():
        raise WeylOpsError("op_apply espera un polinomio (operador sin derivadas).")
    composed = op_compose(p, f)
    return DiffOp(p.chart, {k: c for k, c in composed.terms.items() if not any(k[1])})


def _numeric_terms(f: DiffOp):
    try:
        keys = list(f.terms)
        exps = np.array([xe for xe, _ in keys], dtype=float).reshape(len(keys), f.chart.dim)
        coefs = np.array([complex(f.terms[k]) for k in keys], dtype=complex)
    except TypeError as e:
        raise WeylOpsError(f"Coeficientes no numéricos: {e}") from e
    return exps, coefs


def evaluate(f: DiffOp, point) -> complex:
    """Valor numérico del polinomio f en un punto."""
    if not f.is_polynomial():
        raise WeylOpsError("Sólo se evalúan polinomios.")
    exps, coefs = _numeric_terms(f)
    if not len(coefs):
        return 0j
    point = np.asarray(point, dtype=float)
    return complex(np.sum(coefs * np.prod(point ** exps, axis=1)))


# Diferencias centradas de cinco puntos: exactas para polinomios de grado ≤ 4.
_OFFSETS = np.arange(-2, 3)
_STENCILS = {
    1: np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0,
    2: np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0,
}


def finite_difference_apply(p: DiffOp, f: DiffOp, point, h: float = 0.5) -> complex:
    """(P f)(point) con derivadas por diferencias finitas del valor de f."""
    point = np.asarray(point, dtype=float)
    exps, coefs = _numeric_terms(f)

    def f_at(y):
        return complex(np.sum(coefs * np.prod(y ** exps, axis=1))) if len(coefs) else 0j

    total = 0j
    for (xe, de), c in p.terms.items():
        if max(de, default=0) > 2:
            raise WeylOpsError("finite_difference_apply admite derivadas de orden ≤ 2 por variable.")
        axes = [i for i, d in enumerate(de) if d]
        deriv = 0j
        for shifts in product(range(len(_OFFSETS)), repeat=len(axes)):
            weight = 1.0
            y = point.copy()
            for ax, s in zip(axes, shifts):
                weight *= _STENCILS[de[ax]][s] / h ** de[ax]
                y[ax] += _OFFSETS[s] * h
            if weight:
                deriv += weight * f_at(y)
        total += complex(c) * float(np.prod(point ** np.array(xe, dtype=float))) * deriv
    return total


def random_diffop(rng: np.random.Generator, chart: Chart, n_terms: int = 3, max_deg: int = 2) -> DiffOp:
    """Operador aleatorio con coeficientes racionales gaussianos."""
    terms = []
    for _ in range(n_terms):
        xe = tuple(int(v) for v in rng.integers(0, max_deg + 1, size=chart.dim))
        de = tuple(int(v) for v in rng.integers(0, max_deg + 1, size=chart.dim))
        re = sp.Rational(int(rng.integers(-9, 10)), int(rng.integers(1, 6)))
        im = sp.Rational(int(rng.integers(-9, 10)), int(rng.integers(1, 6)))
        terms.append(((xe, de), re + sp.I * im))
    return DiffOp(chart, terms)


def rename_chart(p: DiffOp, chart: Chart) -> DiffOp:
    """Mismo operador con los nombres de variables de otra carta de igual dimensión."""
    if chart.dim != p.chart.dim:
        raise WeylOpsError(f"No se puede renombrar {p.chart.name!r} a {chart.name!r}: dimensiones distintas.")
    return DiffOp(chart, dict(p.terms))


def restrict_to_plane(p: DiffOp, frozen) -> DiffOp:
    """
    Acción de P sobre funciones independientes de las variables 'frozen',
    evaluada en el plano donde esas variables se anulan.
    """
    idx = [p.chart.index(v) for v in frozen]
    keep = {k: c for k, c in p.terms.items() if not any(k[0][i] or k[1][i] for i in idx)}
    return DiffOp(p.chart, keep)


# --- Grupo de Heisenberg y operador de Landau ---

@lru_cache(maxsize=None)
def build_heisenberg_fields() -> tuple:
    """
    Campos invariantes a izquierda Fα = ∂xα + Σ_λ ω_λ(x, eα) ∂tλ y Tλ = ∂tλ.
    Devuelve (F0, F1, F2, F3, T1, T2, T3).
    """
    xs = [DiffOp.coord(HEIS, f"x{a}") for a in range(4)]
    dts = [DiffOp.deriv(HEIS, f"t{lam}") for lam in (1, 2, 3)]
    fields = []
    for a in range(4):
        w = omega_form(xs, E[a])
        fa = DiffOp.deriv(HEIS, f"x{a}")
        for lam in range(3):
            fa = fa + w[lam] * dts[lam]
        fields.append(fa)
    return tuple(fields) + tuple(dts)


@lru_cache(maxsize=None)
def build_sub_laplacian() -> DiffOp:
    """Δ_sub = F0² + F1² + F2² + F3²."""
    f = build_heisenberg_fields()
    return sum((fa * fa for fa in f[:4]), DiffOp(HEIS))


@lru_cache(maxsize=None)
def build_laplace_element() -> DiffOp:
    """Q = Δ_sub + T1² + T2² + T3²."""
    f = build_heisenberg_fields()
    return build_sub_laplacian() + sum((t * t for t in f[4:]), DiffOp(HEIS))


def field_brackets_table() -> dict:
    """Tabla de corchetes de los campos en la base (F0..F3, T1..T3)."""
    from heisenberg import GENERATOR_NAMES
    fields = build_heisenberg_fields()
    table = {}
    for a in range(len(fields)):
        for b in range(a + 1, len(fields)):
            table[(GENERATOR_NAMES[a], GENERATOR_NAMES[b])] = decompose_fields(op_commutator(fields[a], fields[b]))
    return table


def decompose_fields(p: DiffOp) -> tuple:
    """Coordenadas de P sobre (F0..F3, T1..T3); falla si P no está en su span constante."""
    fields = build_heisenberg_fields()
    zero = (0,) * HEIS.dim
    coefs = []
    for var in ("x0", "x1", "x2", "x3", "t1", "t2", "t3"):
        i = HEIS.index(var)
        de = tuple(1 if k == i else 0 for k in range(HEIS.dim))
        coefs.append(p.coefficient(zero, de))
    if sum((c * fld for c, fld in zip(coefs, fields)), DiffOp(HEIS)) != p:
        raise WeylOpsError("El operador no es combinación constante de los generadores.")
    return tuple(int(c) if c.is_Integer else c for c in coefs)


def partial_fourier(p: DiffOp, nu) -> DiffOp:
    """Sustituye cada ∂/∂t_λ por iν_λ; el resultado vive en la carta de la base."""
    try:
        target = _FOURIER_TARGET[p.chart.name]
    except KeyError:
        raise WeylOpsError(f"La carta {p.chart.name!r} no tiene variables de centro.") from None
    center = [p.chart.index(v) for v in p.chart.center]
    if len(nu) != len(center):
        raise WeylOpsError(f"Se esperaban {len(center)} componentes de campo, llegaron {len(nu)}.")
    base = [i for i in range(p.chart.dim) if i not in center]
    out = []
    for (xe, de), c in p.terms.items():
        if any(xe[i] for i in center):
            raise WeylOpsError("El operador contiene un factor de coordenada t; fuera del alcance de la transformada parcial.")
        for i, v in zip(center, nu):
            c = c * (sp.I * sp.sympify(v)) ** de[i]
        out.append(((tuple(xe[i] for i in base), tuple(de[i] for i in base)), c))
    return DiffOp(target, out)


def _potential_ops(nu, chart: Chart) -> list:
    """Componentes A_α = (Ω_ν x)_α como polinomios de la carta."""
    omega = field_matrix([sp.sympify(v) for v in nu]).m
    xs = [DiffOp.coord(chart, v) for v in chart.variables]
    return [sum((omega[a, b] * xs[b] for b in range(4)), DiffOp(chart)) for a in range(4)]


_NU = sp.symbols("nu1:4")


def _build_landau_expanded(nu) -> DiffOp:
    chart = REAL_X
    a = _potential_ops(nu, chart)
    out = DiffOp(chart)
    for alpha, var in enumerate(chart.variables):
        d = DiffOp.deriv(chart, var)
        out = out - d * d - 2 * sp.I * (a[alpha] * d) + a[alpha] * a[alpha]
    return out


@lru_cache(maxsize=None)
def _landau_template() -> DiffOp:
    return _build_landau_expanded(_NU)


def build_landau(nu) -> DiffOp:
    """
    H_ν = −Δ − 2i⟨Ω_ν x, ∇⟩ + ‖Ω_ν x‖², ya desarrollado (div A = 0). Se
    desarrolla una sola vez con ν simbólico y aquí solo se sustituyen valores.
    """
    if len(nu) != 3:
        raise WeylOpsError(f"Se esperaban 3 componentes de campo, llegaron {len(nu)}.")
    values = dict(zip(_NU, (sp.sympify(v) for v in nu)))
    return DiffOp(REAL_X, {k: c.xreplace(values) for k, c in _landau_template().terms.items()})


def build_landau_covariant(nu) -> DiffOp:
    """H_ν = −Σ_α (∂_α + iA_α)², compuesto sin desarrollar a mano."""
    chart = REAL_X
    a = _potential_ops(nu, chart)
    out = DiffOp(chart)
    for alpha, var in enumerate(chart.variables):
        cov = DiffOp.deriv(chart, var) + sp.I * a[alpha]
        out = out - cov * cov
    return out


def build_canonical(mu) -> DiffOp:
    """
    Forma canónica en coordenadas y:
    −(∂0 − iμy1)² − (∂1 + iμy0)² − (∂2 − iμy3)² − (∂3 + iμy2)².
    """
    mu = sp.sympify(mu)
    if mu.is_negative:
        raise ValueError(f"μ debe ser no negativo, llegó {mu}.")
    c = REAL_Y
    y = [DiffOp.coord(c, v) for v in c.variables]
    d = [DiffOp.deriv(c, v) for v in c.variables]
    factors = [
        d[0] - sp.I * mu * y[1],
        d[1] + sp.I * mu * y[0],
        d[2] - sp.I * mu * y[3],
        d[3] + sp.I * mu * y[2],
    ]
    return sum((-(f * f) for f in factors), DiffOp(c))


def build_reduced_heisenberg_fields() -> tuple:
    """Álgebra de dimensión 5: F′0..F′3 y T′ sobre (t, y0..y3)."""
    c = HEIS_REDUCIDO
    y = [DiffOp.coord(c, f"y{a}") for a in range(4)]
    d = [DiffOp.deriv(c, f"y{a}") for a in range(4)]
    dt = DiffOp.deriv(c, "t")
    return (
        d[0] - y[1] * dt,
        d[1] + y[0] * dt,
        d[2] - y[3] * dt,
        d[3] + y[2] * dt,
        dt,
    )


# --- Momento angular ---

def _wedge_x_d(chart: Chart) -> Bivector:
    x = [DiffOp.coord(chart, v) for v in chart.variables]
    d = [DiffOp.deriv(chart, v) for v in chart.variables]

    def w(a, b):
        return x[a] * d[b] - x[b] * d[a]

    return Bivector(w(0, 1), w(0, 2), w(0, 3), w(2, 3), w(3, 1), w(1, 2))


def build_angular_momentum() -> tuple:
    """l1, l2, l3 en ℝ⁴ con ħ = 1, escritos término a término."""
    c = REAL_X
    x = [DiffOp.coord(c, v) for v in c.variables]
    d = [DiffOp.deriv(c, v) for v in c.variables]
    l1 = -sp.I * (x[0] * d[1] - x[1] * d[0] + x[2] * d[3] - x[3] * d[2])
    l2 = -sp.I * (x[0] * d[2] - x[2] * d[0] + x[3] * d[1] - x[1] * d[3])
    l3 = -sp.I * (x[0] * d[3] - x[3] * d[0] + x[1] * d[2] - x[2] * d[1])
    return l1, l2, l3


def angular_momentum_from_bivector() -> tuple:
    """Las mismas componentes leídas de −i(x̂∧∂̂ + ⋆(x̂∧∂̂)) en la base autodual."""
    w = _wedge_x_d(REAL_X)
    s = Bivector(*(a + b for a, b in zip(w, hodge_star(w))))
    return -sp.I * s.b01, -sp.I * s.b02, -sp.I * s.b03


def build_angular_momentum_3d() -> tuple:
    """l̂x, l̂y, l̂z = −i r × ∇ en la carta (x1, x2, x3)."""
    c = R3
    x = [DiffOp.coord(c, v) for v in c.variables]
    d = [DiffOp.deriv(c, v) for v in c.variables]
    lx = -sp.I * (x[1] * d[2] - x[2] * d[1])
    ly = -sp.I * (x[2] * d[0] - x[0] * d[2])
    lz = -sp.I * (x[0] * d[1] - x[1] * d[0])
    return lx, ly, lz


# --- Cartas complejas ---

@dataclass(frozen=True)
class ChartMap:
    """
    Puente lineal entre una carta real (v0..v3) y una compleja
    (z1, z̄1, z2, z̄2) con z_j = v_{2j−2} + i v_{2j−1}.
    """
    real: Chart
    complex: Chart

    def _images(self, to_complex: bool) -> dict:
        src, dst = (self.real, self.complex) if to_complex else (self.complex, self.real)
        coord = {v: DiffOp.coord(dst, v) for v in dst.variables}
        der = {v: DiffOp.deriv(dst, v) for v in dst.variables}
        half = sp.Rational(1, 2)
        images = {}
        for j in range(2):
            r0, r1 = self.real.variables[2 * j], self.real.variables[2 * j + 1]
            z, zb = self.complex.variables[2 * j], self.complex.variables[2 * j + 1]
            if to_complex:
                images[r0] = (half * (coord[z] + coord[zb]), der[z] + der[zb])
                images[r1] = (-sp.I * half * (coord[z] - coord[zb]), sp.I * (der[z] - der[zb]))
            else:
                images[z] = (coord[r0] + sp.I * coord[r1], half * (der[r0] - sp.I * der[r1]))
                images[zb] = (coord[r0] - sp.I * coord[r1], half * (der[r0] + sp.I * der[r1]))
        return {v: images[v] for v in src.variables}, dst


CHART_MAP_X = ChartMap(REAL_X, COMPLEX_ZP)
CHART_MAP_Y = ChartMap(REAL_Y, COMPLEX_Z)
_CHART_MAPS = (CHART_MAP_X, CHART_MAP_Y)


def chart_transform(p: DiffOp, direction: str = "to_complex") -> DiffOp:
    """
    Cambia P de la carta real a la compleja ('to_complex') o al revés
    ('to_real'). Coordenadas y derivadas se sustituyen por separado; el
    producto resultante ya está en orden normal porque cada familia conmuta.
    """
    if direction not in ("to_complex", "to_real"):
        raise WeylOpsError(f"Dirección desconocida: {direction!r}.")
    to_complex = direction == "to_complex"
    for cmap in _CHART_MAPS:
        if p.chart == (cmap.real if to_complex else cmap.complex):
            break
    else:
        raise WeylOpsError(f"No hay ChartMap para la carta {p.chart.name!r} en dirección {direction!r}.")

    images, dst = cmap._images(to_complex)
    variables = p.chart.variables
    out = DiffOp(dst)
    for (xe, de), c in p.terms.items():
        term = DiffOp.scalar(dst, c)
        for v, e in zip(variables, xe):
            if e:
                term = term * images[v][0] ** e
        for v, e in zip(variables, de):
            if e:
                term = term * images[v][1] ** e
        out = out + term
    return out


def conjugate_chart(p: DiffOp) -> DiffOp:
    """Intercambia z_j ↔ z̄_j (coordenadas y derivadas) en una carta compleja."""
    if p.chart not in (COMPLEX_Z, COMPLEX_ZP):
        raise WeylOpsError(f"conjugate_chart requiere una carta compleja, no {p.chart.name!r}.")
    swap = [1, 0, 3, 2]
    return DiffOp(p.chart, {(tuple(xe[i] for i in swap), tuple(de[i] for i in swap)): c
                            for (xe, de), c in p.terms.items()})


def _complex_parts(chart: Chart):
    z = [DiffOp.coord(chart, v) for v in chart.variables]
    d = [DiffOp.deriv(chart, v) for v in chart.variables]
    return z, d


def build_landau_complex(nu) -> DiffOp:
    """H_ν escrito directamente en (z′1, z̄′1, z′2, z̄′2)."""
    n1, n2, n3 = (sp.sympify(v) for v in nu)
    z, d = _complex_parts(COMPLEX_ZP)
    z1, zb1, z2, zb2 = z
    d1, db1, d2, db2 = d
    lap = -4 * (d1 * db1 + d2 * db2)
    ang1 = z1 * d1 - zb1 * db1 + z2 * d2 - zb2 * db2
    ang2 = zb1 * d2 - zb2 * d1 - z2 * db1 + z1 * db2
    ang3 = zb1 * d2 - zb2 * d1 + z2 * db1 - z1 * db2
    pot = (n1 ** 2 + n2 ** 2 + n3 ** 2) * (z1 * zb1 + z2 * zb2)
    return lap + 2 * n1 * ang1 - 2 * sp.I * n2 * ang2 + 2 * n3 * ang3 + pot


def build_complex_canonical(mu, sign: int) -> DiffOp:
    """−4Σ∂_{z_j}∂_{z̄_j} − 2·sign·μ Σ(z_j∂_{z_j} − z̄_j∂_{z̄_j}) + μ²Σ|z_j|²."""
    if sign not in (1, -1):
        raise ValueError(f"El signo debe ser ±1, llegó {sign}.")
    mu = sp.sympify(mu)
    z, d = _complex_parts(COMPLEX_Z)
    z1, zb1, z2, zb2 = z
    d1, db1, d2, db2 = d
    ang = z1 * d1 - zb1 * db1 + z2 * d2 - zb2 * db2
    return -4 * (d1 * db1 + d2 * db2) - 2 * sign * mu * ang + mu ** 2 * (z1 * zb1 + z2 * zb2)


def build_ladder(mu) -> tuple:
    """(a1, a2, a1†, a2†) con a_j = ∂_{z̄_j} + (μ/2)z_j y a_j† = −∂_{z_j} + (μ/2)z̄_j."""
    mu = sp.sympify(mu)
    if not mu.is_positive:
        raise ValueError(f"μ debe ser positivo, llegó {mu}.")
    z, d = _complex_parts(COMPLEX_Z)
    z1, zb1, z2, zb2 = z
    d1, db1, d2, db2 = d
    half = mu / 2
    return db1 + half * z1, db2 + half * z2, -d1 + half * zb1, -d2 + half * zb2


def oscillator_form(mu) -> DiffOp:
    """4(a1†a1 + a2†a2) + 4μ."""
    a1, a2, a1d, a2d = build_ladder(mu)
    return 4 * (a1d * a1 + a2d * a2) + 4 * sp.sympify(mu)


@dataclass(frozen=True)
class ChiralityVerdict:
    """Signo del término angular para el que la forma de osciladores es una identidad."""
    mu: object
    sign: int
    canonical_sign: int
    conjugate_matches: bool

    def as_dict(self) -> dict:
        return {
            "mu": str(self.mu),
            "sign": self.sign,
            "canonical_sign": self.canonical_sign,
            "conjugate_matches": self.conjugate_matches,
        }


@lru_cache(maxsize=64)
def resolve_chirality(mu) -> ChiralityVerdict:
    """
    Compara exactamente build_complex_canonical(μ, ±1) con 4(a1†a1 + a2†a2) + 4μ y
    registra también qué signo lleva la forma canónica en la carta
    z = y0 + i·y1, y si conjugar la carta lo invierte.
    """
    mu = sp.sympify(mu)
    if not mu.is_positive:
        raise ValueError(f"μ debe ser positivo, llegó {mu}.")
    osc = oscillator_form(mu)
    matching = [s for s in (1, -1) if build_complex_canonical(mu, s) == osc]
    if len(matching) != 1:
        raise ChiralityError(f"Ningún signo único reproduce la forma de osciladores para μ={mu}.")
    sign = matching[0]

    canonical = chart_transform(build_canonical(mu), "to_complex")
    canon = [s for s in (1, -1) if build_complex_canonical(mu, s) == canonical]
    if len(canon) != 1:
        raise ChiralityError(f"La forma canónica no coincide con ningún signo para μ={mu}.")
    conj_ok = conjugate_chart(canonical) == build_complex_canonical(mu, -canon[0])

    logger.debug(f"Quiralidad μ={mu}: signo {sign:+d}, forma canónica {canon[0]:+d}.")
    return ChiralityVerdict(mu=mu, sign=sign, canonical_sign=canon[0], conjugate_matches=conj_ok)
