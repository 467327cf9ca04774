# translations.py

"""
Traslaciones magnéticas (T_a f)(x) = e^{i⟨Ω_ν a, x⟩} f(x + a) sobre una
familia cerrada de funciones de prueba

    f(x) = P(x) · exp(i⟨w, x⟩ − σ‖x − c‖²),

con P polinomio complejo. La familia es cerrada bajo traslaciones y bajo
multiplicación por ondas planas, así que T_a f se representa de forma
exacta y todas las identidades se comprueban punto a punto.
"""

from dataclasses import dataclass
from itertools import product
from math import comb

import numpy as np

from algebra import field_matrix, nu_norm

_OFFSETS = np.arange(-2, 3)
_D1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_D2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0


def _omega(nu) -> np.ndarray:
    return field_matrix([float(v) for v in nu]).m.astype(float)


def _as_points(x) -> np.ndarray:
    return np.atleast_2d(np.asarray(x, dtype=float))


@dataclass(frozen=True, eq=False)
class TestFunction:
    """P(x)·e^{i⟨w,x⟩}·e^{−σ‖x−c‖²} con P = Σ_j coefs[j]·x^{exps[j]}."""
    __test__ = False  # no es una clase de pytest

    exps: np.ndarray
    coefs: np.ndarray
    sigma: float
    center: np.ndarray
    wave: np.ndarray

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"σ debe ser positivo, llegó {self.sigma}.")
        object.__setattr__(self, "exps", np.asarray(self.exps, dtype=np.int64).reshape(-1, 4))
        object.__setattr__(self, "coefs", np.asarray(self.coefs, dtype=complex).reshape(-1))
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float).reshape(4))
        object.__setattr__(self, "wave", np.asarray(self.wave, dtype=float).reshape(4))

    # --- polinomio ---

    @staticmethod
    def _poly(x, exps, coefs) -> np.ndarray:
        if not len(coefs):
            return np.zeros(len(x), dtype=complex)
        mono = np.prod(x[:, None, :] ** exps[None, :, :], axis=2)
        return mono @ coefs

    def _poly_derivative(self, alpha: int, exps=None, coefs=None):
        exps = self.exps if exps is None else exps
        coefs = self.coefs if coefs is None else coefs
        new_coefs = coefs * exps[:, alpha]
        new_exps = exps.copy()
        new_exps[:, alpha] = np.maximum(new_exps[:, alpha] - 1, 0)
        return new_exps, new_coefs

    # --- factor exponencial g(x) = i⟨w,x⟩ − σ‖x−c‖² ---

    def _envelope(self, x) -> np.ndarray:
        return np.exp(1j * (x @ self.wave) - self.sigma * np.sum((x - self.center) ** 2, axis=1))

    def _g_grad(self, x) -> np.ndarray:
        return 1j * self.wave[None, :] - 2.0 * self.sigma * (x - self.center)

    # --- evaluación exacta ---

    def value(self, x) -> np.ndarray:
        x = _as_points(x)
        return self._poly(x, self.exps, self.coefs) * self._envelope(x)

    def gradient(self, x) -> np.ndarray:
        """∂_α f en cada punto, forma (n, 4)."""
        x = _as_points(x)
        p = self._poly(x, self.exps, self.coefs)
        g = self._g_grad(x)
        env = self._envelope(x)
        out = np.empty((len(x), 4), dtype=complex)
        for a in range(4):
            pa = self._poly(x, *self._poly_derivative(a))
            out[:, a] = (pa + p * g[:, a]) * env
        return out

    def hessian(self, x) -> np.ndarray:
        """∂_α∂_β f en cada punto, forma (n, 4, 4)."""
        x = _as_points(x)
        p = self._poly(x, self.exps, self.coefs)
        g = self._g_grad(x)
        env = self._envelope(x)
        firsts = [self._poly_derivative(a) for a in range(4)]
        pa = [self._poly(x, *fa) for fa in firsts]
        out = np.empty((len(x), 4, 4), dtype=complex)
        for a in range(4):
            for b in range(a, 4):
                pab = self._poly(x, *self._poly_derivative(b, *firsts[a]))
                val = pab + pa[a] * g[:, b] + pa[b] * g[:, a] + p * g[:, a] * g[:, b]
                if a == b:
                    val = val - 2.0 * self.sigma * p
                out[:, a, b] = out[:, b, a] = val * env
        return out

    def laplacian(self, x) -> np.ndarray:
        return np.trace(self.hessian(x), axis1=1, axis2=2)

    # --- transformaciones cerradas ---

    def shifted(self, a) -> "TestFunction":
        """x ↦ f(x + a): desarrolla P(x + a), mueve el centro y absorbe e^{i⟨w,a⟩}."""
        a = np.asarray(a, dtype=float)
        acc: dict = {}
        for e, c in zip(self.exps, self.coefs):
            for ks in product(*(range(int(v) + 1) for v in e)):
                coef = c
                for v, k, av in zip(e, ks, a):
                    coef = coef * comb(int(v), k) * av ** (int(v) - k)
                acc[ks] = acc.get(ks, 0j) + coef
        keys = sorted(acc)
        phase = np.exp(1j * float(self.wave @ a))
        return TestFunction(exps=np.array(keys, dtype=np.int64).reshape(-1, 4),
                            coefs=phase * np.array([acc[k] for k in keys], dtype=complex),
                            sigma=self.sigma, center=self.center - a, wave=self.wave)

    def with_wave(self, extra) -> "TestFunction":
        """Multiplica por e^{i⟨extra, x⟩}."""
        return TestFunction(exps=self.exps, coefs=self.coefs, sigma=self.sigma,
                            center=self.center, wave=self.wave + np.asarray(extra, dtype=float))


@dataclass(frozen=True, eq=False)
class MagneticTranslation:
    """T_a para el campo ν; el vector de fase es A(a) = Ω_ν a."""
    a: np.ndarray
    nu: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", np.asarray(self.a, dtype=float).reshape(4))
        object.__setattr__(self, "nu", tuple(float(v) for v in self.nu))

    @property
    def phase_vector(self) -> np.ndarray:
        return _omega(self.nu) @ self.a


def apply_translation(t: MagneticTranslation, f: TestFunction) -> TestFunction:
    """T_a f en forma cerrada: traslación exacta más onda plana e^{i⟨Ω_ν a, x⟩}."""
    return f.shifted(t.a).with_wave(t.phase_vector)


def inverse_translation(t: MagneticTranslation) -> MagneticTranslation:
    """T_a⁻¹ = T_{−a}, porque ⟨Ω_ν a, a⟩ = 0."""
    return MagneticTranslation(-t.a, t.nu)


def translated_value(t: MagneticTranslation, f: TestFunction, x) -> np.ndarray:
    """(T_a f)(x) por la fórmula de definición, sin pasar por la forma cerrada."""
    x = _as_points(x)
    return np.exp(1j * (x @ t.phase_vector)) * f.value(x + t.a)


def _relative(diff: np.ndarray, ref: np.ndarray) -> float:
    scale = float(np.max(np.abs(ref))) if ref.size else 0.0
    worst = float(np.max(np.abs(diff))) if diff.size else 0.0
    return worst / scale if scale > 0 else worst


def translation_residual(t: MagneticTranslation, f: TestFunction, points) -> float:
    """Forma cerrada frente a fórmula de definición, relativo al mayor valor."""
    ref = translated_value(t, f, points)
    return _relative(apply_translation(t, f).value(points) - ref, ref)


def composition_check(a, b, nu, f: TestFunction, points) -> float:
    """max |(T_b T_a f)(x) − e^{i⟨Ωa,b⟩} e^{i⟨Ω(b+a),x⟩} f(x+b+a)|, relativo."""
    x = _as_points(points)
    omega = _omega(nu)
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    lhs = apply_translation(MagneticTranslation(b, nu), apply_translation(MagneticTranslation(a, nu), f)).value(x)
    rhs = np.exp(1j * float((omega @ a) @ b)) * np.exp(1j * (x @ (omega @ (a + b)))) * f.value(x + a + b)
    return _relative(lhs - rhs, rhs)


def associativity_check(a, b, c, nu, f: TestFunction, points) -> float:
    """T_c T_b T_a f frente a las dos lecturas del cociclo ⟨Ωa,b⟩ + ⟨Ω(a+b),c⟩ = ⟨Ωb,c⟩ + ⟨Ωa,b+c⟩."""
    x = _as_points(points)
    omega = _omega(nu)
    a, b, c = (np.asarray(v, dtype=float) for v in (a, b, c))
    g = f
    for v in (a, b, c):
        g = apply_translation(MagneticTranslation(v, nu), g)
    lhs = g.value(x)
    direct = translated_value(MagneticTranslation(a + b + c, nu), f, x)
    left = float((omega @ a) @ b + (omega @ (a + b)) @ c)
    right = float((omega @ b) @ c + (omega @ a) @ (b + c))
    return max(_relative(lhs - np.exp(1j * left) * direct, direct),
               _relative(lhs - np.exp(1j * right) * direct, direct))


def commutator_phase(a, b, nu) -> complex:
    """e^{2i⟨Ω_ν a, b⟩}."""
    omega = _omega(nu)
    return complex(np.exp(2j * float((omega @ np.asarray(a, dtype=float)) @ np.asarray(b, dtype=float))))


def commutator_operator_check(a, b, nu, f: TestFunction, points) -> float:
    """Aplica T_b⁻¹T_a⁻¹T_bT_a a f y lo compara con commutator_phase(a, b, ν)·f."""
    x = _as_points(points)
    ta, tb = MagneticTranslation(a, nu), MagneticTranslation(b, nu)
    g = f
    for t in (ta, tb, inverse_translation(ta), inverse_translation(tb)):
        g = apply_translation(t, g)
    ref = commutator_phase(a, b, nu) * f.value(x)
    return _relative(g.value(x) - ref, ref)


def apply_landau(nu, f: TestFunction, x) -> np.ndarray:
    """(H_ν f)(x) = −Δf − 2i⟨Ω_ν x, ∇f⟩ + ‖ν‖²‖x‖² f, con derivadas exactas."""
    x = _as_points(x)
    pot_vec = x @ _omega(nu).T
    return (-f.laplacian(x) - 2j * np.sum(pot_vec * f.gradient(x), axis=1)
            + nu_norm(nu) ** 2 * np.sum(x ** 2, axis=1) * f.value(x))


def intertwine_check(nu, a, f: TestFunction, points) -> float:
    """max |H_ν(T_a f) − T_a(H_ν f)| normalizado por max |H_ν f| en los puntos."""
    x = _as_points(points)
    t = MagneticTranslation(a, nu)
    lhs = apply_landau(nu, apply_translation(t, f), x)
    rhs = np.exp(1j * (x @ t.phase_vector)) * apply_landau(nu, f, x + t.a)
    return _relative(lhs - rhs, apply_landau(nu, f, x))


def covariance_check(nu, a, f: TestFunction, points) -> float:
    """∇_α(T_a f) frente a T_a(∇_α f) con ∇_α = ∂_α + iA_α, para los cuatro α."""
    x = _as_points(points)
    omega = _omega(nu)
    t = MagneticTranslation(a, nu)
    g = apply_translation(t, f)
    lhs = g.gradient(x) + 1j * (x @ omega.T) * g.value(x)[:, None]
    y = x + t.a
    cov_f = f.gradient(y) + 1j * (y @ omega.T) * f.value(y)[:, None]
    rhs = np.exp(1j * (x @ t.phase_vector))[:, None] * cov_f
    return _relative(lhs - rhs, rhs)


def unitarity_check(a, nu, f: TestFunction, points) -> float:
    """| |(T_a f)(x)| − |f(x+a)| |, relativo."""
    x = _as_points(points)
    t = MagneticTranslation(a, nu)
    ref = np.abs(f.value(x + t.a))
    return _relative(np.abs(apply_translation(t, f).value(x)) - ref, ref)


def derivative_self_test(f: TestFunction, points, h: float = 1e-3) -> float:
    """Gradiente y hessiano exactos frente a diferencias de cinco puntos del valor."""
    x = _as_points(points)
    grad, hess = f.gradient(x), f.hessian(x)
    num_grad = np.zeros_like(grad)
    num_hess = np.zeros_like(hess)
    for a in range(4):
        for s, w in zip(_OFFSETS, _D1):
            if w:
                num_grad[:, a] += w / h * f.value(x + s * h * np.eye(4)[a])
        for s, w in zip(_OFFSETS, _D2):
            num_hess[:, a, a] += w / h ** 2 * f.value(x + s * h * np.eye(4)[a])
        for b in range(a + 1, 4):
            for (sa, wa), (sb, wb) in product(zip(_OFFSETS, _D1), repeat=2):
                if wa and wb:
                    shift = sa * h * np.eye(4)[a] + sb * h * np.eye(4)[b]
                    num_hess[:, a, b] += wa * wb / h ** 2 * f.value(x + shift)
            num_hess[:, b, a] = num_hess[:, a, b]
    return max(_relative(num_grad - grad, grad), _relative(num_hess - hess, hess))


def random_test_function(rng: np.random.Generator, degree: int = 2, n_terms: int = 3) -> TestFunction:
    exps = rng.integers(0, degree + 1, size=(n_terms, 4))
    coefs = rng.standard_normal(n_terms) + 1j * rng.standard_normal(n_terms)
    return TestFunction(exps=exps, coefs=coefs, sigma=float(rng.uniform(0.3, 1.0)),
                        center=0.5 * rng.standard_normal(4), wave=0.5 * rng.standard_normal(4))


def sample_points(f: TestFunction, n: int, rng: np.random.Generator) -> np.ndarray:
    """Nube gaussiana de desviación 1/√σ alrededor del centro (radio ~3/√σ)."""
    return f.center + rng.standard_normal((n, 4)) / np.sqrt(f.sigma)
