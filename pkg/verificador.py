# verificador.py

import numpy as np
import sympy as sp

import canonicalize as cn
import heisenberg as hz
import translations as tr
import weylops as wo
from algebra import (I, J, K, ONE, Bivector, Quaternion, bivector_from_matrix, field_matrix, field_matrix_em, hodge_star,
                     is_self_dual, nu_norm, omega_form, omega_form_quaternionic, quat_conj, quat_left_matrix,
                     quat_mul, quat_norm, quat_norm2, unit_matrix, vector_potential, vector_potential_divergence)
from logger import logger
from report_manager import CheckRecord

SUITES = ("algebra", "heisenberg", "weyl", "canonical", "translations")

TOLERANCIAS_DEFECTO = {
    "exacta": 0.0,
    "redondeo": 1e-12,
    "conjugacion": 1e-10,
    "traslacion_puntual": 1e-12,
    "traslaciones": 1e-10,
    "diferencias_finitas": 1e-8,
}

TAMANOS_DEFECTO = {
    "n_algebra": 1000,
    "n_heisenberg": 1000,
    "n_weyl": 100,
    "n_canonico": 10000,
    "n_traslaciones": 100,
}

MU_QUIRALIDAD = (sp.Integer(1), sp.Integer(2), sp.Integer(3), sp.Rational(7, 2))


def _racional(rng, max_num: int = 9, max_den: int = 5):
    return sp.Rational(int(rng.integers(-max_num, max_num + 1)), int(rng.integers(1, max_den + 1)))


def _cuaternion(rng) -> Quaternion:
    return Quaternion(*(float(v) for v in rng.standard_normal(4)))


def _bivector(v) -> Bivector:
    return Bivector(*(int(c) for c in v))


def _polinomio(rng, chart, n_terms: int = 3, max_deg: int = 3) -> wo.DiffOp:
    zero = (0,) * chart.dim
    terms = []
    for _ in range(n_terms):
        xe = tuple(int(v) for v in rng.integers(0, max_deg + 1, size=chart.dim))
        terms.append(((xe, zero), _racional(rng) + sp.I * _racional(rng)))
    return wo.DiffOp(chart, terms)


def _muestras_canonicas(rng, n: int) -> list:
    """Campos genéricos, de norma 1e−8 y 1e8, casi paralelos a e′1 y exactamente paralelos."""
    out = []
    for i in range(n):
        d = rng.standard_normal(3)
        cat = i % 5
        if cat == 0:
            nu = d
        elif cat == 1:
            nu = 1e-8 * d / np.linalg.norm(d)
        elif cat == 2:
            nu = 1e8 * d / np.linalg.norm(d)
        elif cat == 3:
            off = 10.0 ** rng.uniform(-14, -6) * rng.standard_normal(2)
            nu = np.array([1.0 if d[0] >= 0 else -1.0, *off]) * 10.0 ** rng.uniform(-8, 8)
        else:
            nu = np.array([rng.choice([-1.0, 1.0]) * 10.0 ** rng.uniform(-8, 8), 0.0, 0.0])
        out.append(tuple(float(v) for v in nu))
    return out


class Verificador:
    """
    Orquesta las suites de comprobación. Cada comprobación produce un
    CheckRecord; una excepción dentro de una comprobación se registra
    como fallo y la suite continúa.
    """
    def __init__(self, tolerancias: dict | None = None, tamanos: dict | None = None, semilla: int = 0, nu=None):
        """
        Inicializa el Verificador con sus parámetros (Inyección de Dependencias).
        'nu', si se da, sustituye a los campos aleatorios de la suite weyl.
        """
        self.tolerancias = {**TOLERANCIAS_DEFECTO, **(tolerancias or {})}
        self.tamanos = {**TAMANOS_DEFECTO, **(tamanos or {})}
        self.semilla = int(semilla)
        self.nu = tuple(nu) if nu is not None else None
        self.registros: list[CheckRecord] = []
        logger.info(f"Verificador inicializado (semilla {self.semilla}).")

    def tol(self, nombre: str) -> float:
        return float(self.tolerancias[nombre])

    def _rng(self, suite: str) -> np.random.Generator:
        return np.random.default_rng([self.semilla, SUITES.index(suite)])

    def _registrar(self, nombre: str, tolerancia: float, comprobacion):
        try:
            out = comprobacion()
            residuo, detalle = out if isinstance(out, tuple) else (out, None)
            rec = CheckRecord(nombre, residuo, tolerancia, detalle)
        except Exception as e:
            logger.opt(exception=True).error(f"La comprobación '{nombre}' lanzó una excepción: {e}")
            rec = CheckRecord.failed(nombre, tolerancia, f"{type(e).__name__}: {e}")
        if rec.passed:
            logger.debug(f"✅ {nombre}: residuo {rec.residual:.3e}")
        else:
            logger.warning(f"❌ {nombre}: residuo {rec.residual:.3e} > {rec.tolerance:.1e}")
        self.registros.append(rec)

    def verificar(self, suite: str) -> list[CheckRecord]:
        """Ejecuta una suite (o 'all') y devuelve sus registros."""
        if suite != "all" and suite not in SUITES:
            raise ValueError(f"Suite desconocida: {suite!r}.")
        inicio = len(self.registros)
        for nombre in (SUITES if suite == "all" else (suite,)):
            logger.info(f"--- 🔎 SUITE {nombre.upper()} ---")
            getattr(self, f"_suite_{nombre}")(self._rng(nombre))
        nuevos = self.registros[inicio:]
        fallos = sum(not r.passed for r in nuevos)
        logger.info(f"--- 🏁 {len(nuevos)} comprobaciones, {fallos} fallidas ---")
        return nuevos

    # --- algebra ---

    def _suite_algebra(self, rng):
        n = int(self.tamanos["n_algebra"])
        exacta, red = self.tol("exacta"), self.tol("redondeo")
        ternas = [(_cuaternion(rng), _cuaternion(rng), _cuaternion(rng)) for _ in range(n)]
        vecs = [(rng.standard_normal(4), rng.standard_normal(4)) for _ in range(n)]
        # ω es bilineal: la comparación con enteros es exacta.
        exactos = [([int(v) for v in rng.integers(-20, 21, size=4)], [int(v) for v in rng.integers(-20, 21, size=4)])
                   for _ in range(n)]
        nus = [rng.standard_normal(3) for _ in range(n)]
        enteros = [tuple(int(v) for v in rng.integers(-3, 4, size=6)) for _ in range(n)]

        def tabla():
            esperado = {(I, J): K, (J, K): I, (K, I): J, (J, I): -K, (K, J): -I, (I, K): -J,
                        (I, I): -ONE, (J, J): -ONE, (K, K): -ONE}
            fallos = sum(quat_mul(p, q) != r for (p, q), r in esperado.items())
            return fallos + int(quat_mul(quat_mul(I, J), K) != -ONE)

        def matrices():
            mi, mj, mk = (unit_matrix(u) for u in "ijk")
            eye = np.eye(4, dtype=np.int64)
            diffs = [mi @ mi + eye, mj @ mj + eye, mk @ mk + eye, mi @ mj - mk, mj @ mk - mi, mk @ mi - mj,
                     mi - quat_left_matrix(I), mj - quat_left_matrix(J), mk - quat_left_matrix(K)]
            return max(int(np.max(np.abs(d))) for d in diffs)

        def asociatividad():
            worst = 0.0
            for p, q, r in ternas:
                lhs, rhs = quat_mul(quat_mul(p, q), r), quat_mul(p, quat_mul(q, r))
                worst = max(worst, float(np.max(np.abs(np.subtract(lhs.as_vec4(), rhs.as_vec4())))))
            return worst

        def norma():
            return max(abs(quat_norm(quat_mul(p, q)) - quat_norm(p) * quat_norm(q))
                       / max(1.0, quat_norm(p) * quat_norm(q))
                       for p, q, _ in ternas)

        def conjugado():
            return max(float(np.max(np.abs(np.subtract(quat_mul(p, quat_conj(p)).as_vec4(),
                                                       (quat_norm2(p) * ONE).as_vec4()))))
                       for p, _, _ in ternas)

        def antisimetria():
            return max(float(np.max(np.abs(np.add(omega_form(x, y), omega_form(y, x)))))
                       / max(1.0, np.linalg.norm(x) * np.linalg.norm(y))
                       for x, y in vecs)

        def dual_exacta():
            return sum(omega_form(x, y) != omega_form_quaternionic(x, y) for x, y in exactos)

        def dual_flotante():
            return max(float(np.max(np.abs(np.subtract(omega_form(x, y), omega_form_quaternionic(x, y)))))
                       / max(1.0, np.linalg.norm(x) * np.linalg.norm(y)) for x, y in vecs)

        def cuadrado():
            return max(field_matrix(nu).square_residual() / max(1.0, nu_norm(nu) ** 2) for nu in nus)

        def antisimetria_campo():
            return max(field_matrix(nu).antisymmetry_residual() for nu in nus)

        def potencial():
            worst = 0.0
            for nu, (x, _) in zip(nus, vecs):
                a = np.array(vector_potential(nu, x), dtype=float)
                via_matriz = field_matrix(nu).m @ x
                via_producto = np.array((Quaternion.pure(nu) * Quaternion.from_vec4(x)).as_vec4(), dtype=float)
                escala = max(1.0, nu_norm(nu) * float(np.linalg.norm(x)))
                worst = max(worst, float(np.max(np.abs(a - via_matriz))) / escala,
                            float(np.max(np.abs(a - via_producto))) / escala, abs(float(a @ x)) / escala ** 2)
            return worst

        def divergencia():
            return max(abs(int(vector_potential_divergence(v[:3]))) for v in enteros)

        def hodge():
            base = np.eye(6, dtype=np.int64)
            imagenes = [3, 4, 5, 0, 1, 2]
            fallos = sum(hodge_star(_bivector(base[i])) != _bivector(base[j]) for i, j in enumerate(imagenes))
            return fallos + sum(hodge_star(hodge_star(_bivector(v))) != _bivector(v) for v in enteros)

        def autodualidad():
            fallos = 0
            for idx, v in enumerate(enteros):
                e, b = v[:3], (v[:3] if idx % 2 else v[3:])
                m = field_matrix_em(e, b)
                fallos += is_self_dual(bivector_from_matrix(m)) != (tuple(e) == tuple(b))
                fallos += tuple(int(c) for c in bivector_from_matrix(m)) != (*e, *b)
            fallos += sum(not np.array_equal(field_matrix_em(v[:3], v[:3]), field_matrix(v[:3]).m) for v in enteros)
            return fallos

        self._registrar("algebra.tabla_cuaterniones", exacta, tabla)
        self._registrar("algebra.matrices_unidad", exacta, matrices)
        self._registrar("algebra.asociatividad", red, asociatividad)
        self._registrar("algebra.norma_multiplicativa", red, norma)
        self._registrar("algebra.conjugado", red, conjugado)
        self._registrar("algebra.omega_antisimetria", red, antisimetria)
        self._registrar("algebra.omega_dual_exacta", exacta, dual_exacta)
        self._registrar("algebra.omega_dual_flotante", red, dual_flotante)
        self._registrar("algebra.campo_cuadrado", red, cuadrado)
        self._registrar("algebra.campo_antisimetrico", red, antisimetria_campo)
        self._registrar("algebra.potencial_vector", red, potencial)
        self._registrar("algebra.divergencia_nula", exacta, divergencia)
        self._registrar("algebra.hodge", exacta, hodge)
        self._registrar("algebra.autodualidad", exacta, autodualidad)

    # --- heisenberg ---

    def _suite_heisenberg(self, rng):
        n = int(self.tamanos["n_heisenberg"])
        exacta, red = self.tol("exacta"), self.tol("redondeo")
        pares = [(hz.random_element(rng), hz.random_element(rng)) for _ in range(n)]
        terceros = [hz.random_element(rng) for _ in range(n)]
        flotantes = [(hz.random_element(rng, exact=False), hz.random_element(rng, exact=False)) for _ in range(n)]

        def estructura():
            rep = hz.verify_structure()
            detalle = {"tabla": {f"{a},{b}": list(v) for (a, b), v in sorted(rep.table.items())},
                       "checks": {nombre: int(r) for nombre, r in rep.checks}}
            return rep.violations, detalle

        def tablas_cruzadas():
            simbolica, matricial = wo.field_brackets_table(), hz.bracket_table()
            distintas = sum(tuple(simbolica[k]) != tuple(matricial[k]) for k in matricial)
            return distintas + int(simbolica.keys() != matricial.keys())

        def inverso():
            fallos = sum(hz.heis_mul(g, hz.heis_inverse(g)) != hz.IDENTITY for g, _ in pares)
            eye = np.eye(hz.DIM, dtype=np.int64)
            for g, _ in pares[: max(1, n // 10)]:
                prod = hz.heis_matrix(g) @ hz.heis_matrix(hz.heis_inverse(g))
                fallos += int(np.any(prod != eye))
            return fallos

        def asociatividad():
            return sum(hz.heis_mul(hz.heis_mul(g, h), k) != hz.heis_mul(g, hz.heis_mul(h, k))
                       for (g, h), k in zip(pares, terceros))

        def conmutador():
            fallos = 0
            for g, h in pares:
                esperado = hz.HeisElement(tuple(2 * v for v in omega_form(g.x, h.x)), (0, 0, 0, 0))
                fallos += hz.heis_commutator(g, h) != esperado
            return fallos

        self._registrar("heisenberg.estructura", exacta, estructura)
        self._registrar("heisenberg.tablas_simbolica_matricial", exacta, tablas_cruzadas)
        self._registrar("heisenberg.homomorfismo_exacto", exacta, lambda: hz.homomorphism_residual(pares))
        self._registrar("heisenberg.homomorfismo_flotante", red, lambda: hz.homomorphism_residual(flotantes))
        self._registrar("heisenberg.inverso", exacta, inverso)
        self._registrar("heisenberg.asociatividad", exacta, asociatividad)
        self._registrar("heisenberg.conmutador_grupo", exacta, conmutador)

    # --- weyl ---

    def _suite_weyl(self, rng):
        n = int(self.tamanos["n_weyl"])
        exacta = self.tol("exacta")
        if self.nu is not None:
            campos = [tuple(sp.sympify(v) for v in self.nu)]
        else:
            campos = [tuple(_racional(rng) for _ in range(3)) for _ in range(n)]
        muestra = campos[: min(len(campos), 10)]
        x = wo.REAL_X
        xs = [wo.DiffOp.coord(x, v) for v in x.variables]
        ds = [wo.DiffOp.deriv(x, v) for v in x.variables]
        ternas = [tuple(wo.random_diffop(rng, x) for _ in range(3)) for _ in range(5)]
        fd_ops = [(wo.random_diffop(rng, x, max_deg=1), _polinomio(rng, x)) for _ in range(3)]
        fd_ops.append((xs[1] * ds[0] * ds[0] + ds[1] * ds[2] + xs[0] * ds[3] * ds[3], _polinomio(rng, x)))
        fd_puntos = rng.standard_normal((10, 4))

        def relacion():
            fallos = int(wo.op_commutator(ds[0], xs[0]) != wo.DiffOp.identity(x))
            fallos += int(ds[0] * xs[0] != xs[0] * ds[0] + 1)
            return fallos + int(wo.op_commutator(ds[0], xs[1]) != wo.DiffOp(x))

        def leibniz():
            p, q = xs[0] * ds[1], xs[1] * ds[0]
            return int(wo.op_commutator(p, q) != xs[0] * ds[0] - xs[1] * ds[1])

        def asociatividad():
            return sum((p * q) * r != p * (q * r) for p, q, r in ternas)

        def laplace():
            fields = wo.build_heisenberg_fields()
            q, sub = wo.build_laplace_element(), wo.build_sub_laplacian()
            fallos = int(q - sum((t * t for t in fields[4:]), wo.DiffOp(wo.HEIS)) != sub)
            zero = (0,) * wo.HEIS.dim
            for lam in range(3):
                de = tuple(2 if k == lam else 0 for k in range(wo.HEIS.dim))
                fallos += int(sub.coefficient(zero, de) != 0)
            d0 = tuple(2 if k == wo.HEIS.index("x0") else 0 for k in range(wo.HEIS.dim))
            return fallos + int(q.coefficient(zero, d0) != 1)

        def fourier():
            f0, t1 = wo.build_heisenberg_fields()[0], wo.build_heisenberg_fields()[4]
            fallos = 0
            for n1, n2, n3 in muestra:
                esperado = ds[0] + sp.I * (-n1 * xs[1] - n2 * xs[2] - n3 * xs[3])
                fallos += int(wo.partial_fourier(f0, (n1, n2, n3)) != esperado)
                fallos += int(wo.partial_fourier(t1 * t1, (n1, n2, n3)) != wo.DiffOp.scalar(x, -n1 ** 2))
            return fallos

        def sublaplaciano():
            sub = wo.build_sub_laplacian()
            fallos = sum(-wo.partial_fourier(sub, nu) != wo.build_landau(nu) for nu in campos)
            return fallos, {"campos": len(campos)}

        def covariante():
            return sum(wo.build_landau(nu) != wo.build_landau_covariant(nu) for nu in muestra)

        def momento_angular():
            ls = wo.build_angular_momentum()
            lap = sum((d * d for d in ds), wo.DiffOp(x))
            r2 = sum((c * c for c in xs), wo.DiffOp(x))
            fallos = 0
            for nu in muestra:
                esperado = -lap + 2 * sum((v * l for v, l in zip(nu, ls)), wo.DiffOp(x)) + sum(v ** 2 for v in nu) * r2
                fallos += int(wo.build_landau(nu) != esperado)
            return fallos

        def bivector():
            return sum(a != b for a, b in zip(wo.build_angular_momentum(), wo.angular_momentum_from_bivector()))

        def momento_3d():
            lx, ly, lz = wo.build_angular_momentum_3d()
            ciclo = ((lx, ly, lz), (ly, lz, lx), (lz, lx, ly))
            return sum(wo.op_commutator(a, b) != sp.I * c for a, b, c in ciclo)

        def forma_compleja():
            fallos = sum(wo.build_landau_complex(nu) != wo.chart_transform(wo.build_landau(nu)) for nu in muestra)
            z = wo.COMPLEX_ZP
            esperado = -4 * (wo.DiffOp.deriv(z, "zp1") * wo.DiffOp.deriv(z, "zpb1"))
            return fallos + int(wo.chart_transform(-(ds[0] * ds[0] + ds[1] * ds[1])) != esperado)

        def momento_complejo():
            z = wo.COMPLEX_ZP
            zc = [wo.DiffOp.coord(z, v) for v in z.variables]
            zd = [wo.DiffOp.deriv(z, v) for v in z.variables]
            z1, zb1, z2, zb2 = zc
            d1, db1, d2, db2 = zd
            esperados = (
                z1 * d1 - zb1 * db1 + z2 * d2 - zb2 * db2,
                -sp.I * (zb1 * d2 - zb2 * d1 - z2 * db1 + z1 * db2),
                zb1 * d2 - zb2 * d1 + z2 * db1 - z1 * db2,
            )
            return sum(wo.chart_transform(l) != e for l, e in zip(wo.build_angular_momentum(), esperados))

        def ida_y_vuelta():
            fallos = 0
            for p, q, _ in ternas:
                fallos += int(wo.chart_transform(wo.chart_transform(p), "to_real") != p)
                fallos += int(wo.chart_transform(p * q) != wo.chart_transform(p) * wo.chart_transform(q))
            return fallos

        def plano():
            b3 = muestra[0][2] if muestra[0][2] != 0 else sp.Integer(1)
            h = wo.restrict_to_plane(wo.build_landau((0, 0, b3)), ("x0", "x3"))
            esperado = (-(ds[1] * ds[1] + ds[2] * ds[2]) - 2 * sp.I * b3 * (xs[1] * ds[2] - xs[2] * ds[1])
                        + b3 ** 2 * (xs[1] * xs[1] + xs[2] * xs[2]))
            return int(h != esperado)

        def canonica():
            fallos = 0
            for mu in MU_QUIRALIDAD:
                fallos += int(wo.build_canonical(mu) != wo.rename_chart(wo.build_landau((mu, 0, 0)), wo.REAL_Y))
            return fallos

        def reducida():
            f0, f1, f2, f3, t = wo.build_reduced_heisenberg_fields()
            fallos = int(wo.op_commutator(f0, f1) != 2 * t) + int(wo.op_commutator(f2, f3) != 2 * t)
            fallos += int(not wo.op_commutator(f0, f2).is_zero())
            sub = f0 * f0 + f1 * f1 + f2 * f2 + f3 * f3
            for mu in MU_QUIRALIDAD:
                fallos += int(-wo.partial_fourier(sub, (mu,)) != wo.build_canonical(mu))
            return fallos

        def escalera():
            fallos = 0
            for mu in MU_QUIRALIDAD:
                a1, a2, a1d, a2d = wo.build_ladder(mu)
                ident = wo.DiffOp.identity(wo.COMPLEX_Z)
                for i, a in enumerate((a1, a2)):
                    for j, ad in enumerate((a1d, a2d)):
                        fallos += int(wo.op_commutator(a, ad) != (mu * ident if i == j else 0 * ident))
                fallos += int(not wo.op_commutator(a1, a2).is_zero())
                fallos += int(not wo.op_commutator(a1d, a2d).is_zero())
            return fallos

        def quiralidad():
            veredictos = [wo.resolve_chirality(mu) for mu in MU_QUIRALIDAD]
            signos = {v.sign for v in veredictos}
            canonicos = {v.canonical_sign for v in veredictos}
            fallos = (len(signos) - 1) + (len(canonicos) - 1) + sum(not v.conjugate_matches for v in veredictos)
            return fallos, {"veredictos": [v.as_dict() for v in veredictos]}

        def osciladores():
            fallos = 0
            for mu in MU_QUIRALIDAD:
                v = wo.resolve_chirality(mu)
                h = wo.chart_transform(wo.build_canonical(mu))
                if v.canonical_sign != v.sign:
                    h = wo.conjugate_chart(h)
                fallos += int(h - wo.oscillator_form(mu) != wo.DiffOp(wo.COMPLEX_Z))
            return fallos

        def diferencias_finitas():
            worst = 0.0
            for p, f in fd_ops:
                exacto = [wo.evaluate(wo.op_apply(p, f), pt) for pt in fd_puntos]
                numerico = [wo.finite_difference_apply(p, f, pt) for pt in fd_puntos]
                escala = max(1.0, max(abs(v) for v in exacto))
                worst = max(worst, max(abs(a - b) for a, b in zip(exacto, numerico)) / escala)
            return worst

        self._registrar("weyl.relacion_definicion", exacta, relacion)
        self._registrar("weyl.leibniz", exacta, leibniz)
        self._registrar("weyl.asociatividad", exacta, asociatividad)
        self._registrar("weyl.elemento_laplace", exacta, laplace)
        self._registrar("weyl.fourier_parcial", exacta, fourier)
        self._registrar("weyl.sublaplaciano_landau", exacta, sublaplaciano)
        self._registrar("weyl.landau_covariante", exacta, covariante)
        self._registrar("weyl.landau_momento_angular", exacta, momento_angular)
        self._registrar("weyl.momento_bivector", exacta, bivector)
        self._registrar("weyl.momento_3d", exacta, momento_3d)
        self._registrar("weyl.forma_compleja", exacta, forma_compleja)
        self._registrar("weyl.momento_complejo", exacta, momento_complejo)
        self._registrar("weyl.cartas", exacta, ida_y_vuelta)
        self._registrar("weyl.landau_plano", exacta, plano)
        self._registrar("weyl.forma_canonica", exacta, canonica)
        self._registrar("weyl.algebra_reducida", exacta, reducida)
        self._registrar("weyl.escalera", exacta, escalera)
        self._registrar("weyl.quiralidad", exacta, quiralidad)
        self._registrar("weyl.forma_osciladores", exacta, osciladores)
        self._registrar("weyl.diferencias_finitas", self.tol("diferencias_finitas"), diferencias_finitas)

    # --- canonical ---

    def _suite_canonical(self, rng):
        n = int(self.tamanos["n_canonico"])
        red, conj = self.tol("redondeo"), self.tol("conjugacion")
        campos = _muestras_canonicas(rng, n)
        rotaciones = [cn.canonical_rotation(nu) for nu in campos]
        eye = np.eye(4)

        def ortogonalidad():
            return max(float(np.max(np.abs(r.matrix.T @ r.matrix - eye))) for r in rotaciones)

        def determinante():
            return max(abs(float(np.linalg.det(r.matrix)) - 1.0) for r in rotaciones)

        def conjugacion():
            ramas = {}
            for r in rotaciones:
                ramas[r.branch] = ramas.get(r.branch, 0) + 1
            worst = max(r.residual / max(1.0, nu_norm(r.nu)) for r in rotaciones)
            return worst, {"ramas": dict(sorted(ramas.items()))}

        def ramas():
            fallos = 0
            r = cn.canonical_rotation((5, 0, 0))
            fallos += int(r.branch != "identity" or r.residual != 0 or not np.array_equal(r.matrix, eye))
            r = cn.canonical_rotation((-5, 0, 0))
            fallos += int(r.branch != "flip" or r.residual != 0
                          or not np.array_equal(r.matrix, np.diag([1.0, -1.0, 1.0, -1.0])))
            mostrada = np.array([[1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=float)
            r = cn.canonical_rotation((0, 0, 1))
            fallos += int(r.branch != "generic" or not np.allclose(r.matrix, mostrada.T, atol=1e-15))
            r = cn.canonical_rotation((0, 0, 0))
            fallos += int(r.branch != "degenerate-zero" or not np.array_equal(r.matrix, eye))
            return fallos

        def matriz_demostracion():
            genericas = [(nu, r) for nu, r in zip(campos, rotaciones) if r.branch == "generic"]
            return max((float(np.max(np.abs(r.matrix - cn.proof_matrix(nu).T))) for nu, r in genericas), default=0.0)

        def marco():
            worst = 0.0
            for nu in campos:
                if nu_norm(nu) == 0.0:
                    continue
                f = cn.frame3(nu).matrix()
                worst = max(worst, float(np.max(np.abs(f.T @ f - np.eye(3)))), abs(float(np.linalg.det(f)) - 1.0))
            return worst

        def direcciones():
            return max(cn.canonical_rotation(nu, target).residual / max(1.0, nu_norm(nu))
                       for nu in campos[:100] for target in ("j", "k"))

        def polinomio():
            worst = 0.0
            for nu, r in list(zip(campos, rotaciones))[::5][:100]:
                omega = field_matrix(nu).m
                c0 = cn.charpoly_coefficients(omega)
                c1 = cn.charpoly_coefficients(r.matrix @ omega @ r.matrix.T)
                worst = max(worst, float(np.max(np.abs(c1 - c0))) / max(1.0, nu_norm(nu) ** 4))
            return worst

        self._registrar("canonico.ortogonalidad", red, ortogonalidad)
        self._registrar("canonico.determinante", red, determinante)
        self._registrar("canonico.conjugacion", conj, conjugacion)
        self._registrar("canonico.ramas", self.tol("exacta"), ramas)
        self._registrar("canonico.matriz_demostracion", red, matriz_demostracion)
        self._registrar("canonico.marco", red, marco)
        self._registrar("canonico.direcciones_jk", conj, direcciones)
        self._registrar("canonico.polinomio_caracteristico", conj, polinomio)

    # --- translations ---

    def _suite_translations(self, rng):
        n = int(self.tamanos["n_traslaciones"])
        puntual, tol = self.tol("traslacion_puntual"), self.tol("traslaciones")
        draws = []
        for _ in range(n):
            nu = rng.standard_normal(3)
            a, b, c = (rng.standard_normal(4) for _ in range(3))
            f = tr.random_test_function(rng)
            draws.append((nu, a, b, c, f, tr.sample_points(f, 20, rng)))

        def peor(fn):
            return lambda: max(fn(*d) for d in draws)

        def inversa(nu, a, b, c, f, pts):
            t = tr.MagneticTranslation(a, nu)
            g = tr.apply_translation(tr.inverse_translation(t), tr.apply_translation(t, f))
            ref = f.value(pts)
            return float(np.max(np.abs(g.value(pts) - ref)) / np.max(np.abs(ref)))

        def antisimetria_fase(nu, a, b, c, f, pts):
            return abs(tr.commutator_phase(a, b, nu) * tr.commutator_phase(b, a, nu) - 1.0)

        def ejemplo():
            e = np.eye(4)
            return abs(tr.commutator_phase(e[1], e[2], (0, 0, 1)) - np.exp(2j))

        self._registrar("traslaciones.forma_cerrada", puntual,
                        peor(lambda nu, a, b, c, f, pts: tr.translation_residual(tr.MagneticTranslation(a, nu), f, pts)))
        self._registrar("traslaciones.composicion", tol,
                        peor(lambda nu, a, b, c, f, pts: tr.composition_check(a, b, nu, f, pts)))
        self._registrar("traslaciones.asociatividad", tol,
                        peor(lambda nu, a, b, c, f, pts: tr.associativity_check(a, b, c, nu, f, pts)))
        self._registrar("traslaciones.fase_conmutador", tol,
                        peor(lambda nu, a, b, c, f, pts: tr.commutator_operator_check(a, b, nu, f, pts)))
        self._registrar("traslaciones.antisimetria_fase", puntual, peor(antisimetria_fase))
        self._registrar("traslaciones.ejemplo_fase", puntual, ejemplo)
        self._registrar("traslaciones.covarianza", tol,
                        peor(lambda nu, a, b, c, f, pts: tr.covariance_check(nu, a, f, pts)))
        self._registrar("traslaciones.entrelazamiento", tol,
                        peor(lambda nu, a, b, c, f, pts: tr.intertwine_check(nu, a, f, pts)))
        self._registrar("traslaciones.unitariedad", tol,
                        peor(lambda nu, a, b, c, f, pts: tr.unitarity_check(a, nu, f, pts)))
        self._registrar("traslaciones.inversa", tol, peor(inversa))
        self._registrar("traslaciones.autoprueba_derivadas", self.tol("diferencias_finitas"),
                        lambda: max(tr.derivative_self_test(f, pts[:5], h=2e-3) for *_, f, pts in draws[:10]))
