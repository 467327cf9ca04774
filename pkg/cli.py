# cli.py

"""
Punto de entrada de línea de comandos: 'verify', 'spectrum' y 'canonicalize'.

Orden de configuración: valores por defecto → config.yaml (o --config) →
flags. Códigos de salida: 0 todo pasa, 1 alguna comprobación falla,
2 error de uso o de configuración, 3 error de E/S, 4 el autosolver no
convergió (el reporte parcial se escribe igualmente).
"""

import argparse
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np
import sympy as sp
import yaml

from algebra import nu_norm
from canonicalize import canonical_rotation
from logger import configurar_archivo, logger
from report_manager import CheckRecord, Report, ReportIOError, ReportManager
from spectral import (DENSE_CUTOFF, K_DEFECTO, MAX_INCOGNITAS, ConvergenceError, GridSpec, GridTooLargeError,
                      assemble_canonical_2d, assemble_canonical_4d, assemble_landau, compare_spectra,
                      default_half_width, eigensolve, fock_spectrum, hermiticity_residual)
from verificador import SUITES, TAMANOS_DEFECTO, TOLERANCIAS_DEFECTO, Verificador

CONFIG_DEFECTO = "config.yaml"

EXIT_OK = 0
EXIT_FALLO = 1
EXIT_USO = 2
EXIT_IO = 3
EXIT_CONVERGENCIA = 4

ESPECTRO_DEFECTO = {
    "k": K_DEFECTO,
    "tol": 1e-8,
    "N_2d": 96,
    "N_4d": 16,
    "orden_2d": 2,
    "orden_4d": 2,
    "metodo": "auto",
    "max_incognitas": MAX_INCOGNITAS,
    "dense_cutoff": DENSE_CUTOFF,
    "n_max_fock": 3,
    "fock_rel_2d": 0.02,
    "fock_rel_4d": 0.10,
    "hermiticidad": 1e-12,
}


class ConfigError(Exception):
    """Excepción para configuraciones inválidas; el mensaje nombra el campo."""
    pass


@dataclass
class RunConfig:
    """Configuración resuelta de una ejecución."""
    command: str
    suite: str | None = None
    nu: tuple | None = None
    mu: sp.Rational | None = None
    L: float | None = None
    N: int | None = None
    k: int = K_DEFECTO
    tol: float = 1e-8
    seed: int = 0
    threads: int | None = None
    out: str = "-"
    fmt: str = "json"
    factor2d: bool = False
    compare_fock: bool = False
    method: str = "auto"
    order: int | None = None
    target: str = "i"
    log_dir: str | None = None
    tolerancias: dict = field(default_factory=dict)
    tamanos: dict = field(default_factory=dict)
    espectro: dict = field(default_factory=dict)

    def echo(self) -> dict:
        """Eco determinista de la configuración para el reporte."""
        return {
            "command": self.command, "suite": self.suite,
            "nu": [str(v) for v in self.nu] if self.nu is not None else None,
            "mu": str(self.mu) if self.mu is not None else None,
            "L": self.L, "N": self.N, "k": self.k, "tol": self.tol, "seed": self.seed,
            "threads": self.threads, "format": self.fmt, "factor2d": self.factor2d,
            "compare_fock": self.compare_fock, "method": self.method, "order": self.order, "target": self.target,
            "tolerancias": dict(sorted(self.tolerancias.items())),
            "tamanos": dict(sorted(self.tamanos.items())),
            "espectro": dict(sorted(self.espectro.items())),
        }


@dataclass
class Resultado:
    report: Report
    code: int
    spectrum: object = None


# --- Configuración ---

def cargar_config(path: str | None) -> dict:
    """Lee el YAML de configuración. Un --config inexistente es un error; el config.yaml por defecto es opcional."""
    explicito = path is not None
    path = path or CONFIG_DEFECTO
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
    except FileNotFoundError:
        if explicito:
            raise ConfigError(f"--config: no existe el archivo '{path}'.") from None
        logger.debug(f"Sin '{path}'; se usan los valores por defecto.")
        return {}
    except yaml.YAMLError as e:
        raise ConfigError(f"--config: YAML inválido en '{path}': {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"--config: '{path}' debe contener un mapeo de secciones.")
    return data


def _seccion(archivo: dict, nombre: str) -> dict:
    sec = archivo.get(nombre) or {}
    if not isinstance(sec, dict):
        raise ConfigError(f"{nombre}: la sección debe ser un mapeo clave: valor.")
    return sec


def _numero(nombre: str, valor, tipo=float):
    try:
        v = tipo(valor)
    except (TypeError, ValueError):
        raise ConfigError(f"{nombre}: valor no numérico {valor!r}.") from None
    if tipo is float and not math.isfinite(v):
        raise ConfigError(f"{nombre}: debe ser finito, llegó {valor!r}.")
    return v


def _parse_nu(texto: str) -> tuple:
    partes = texto.split(",")
    if len(partes) != 3:
        raise ConfigError(f"--nu: se esperan tres componentes 'a,b,c', llegó {texto!r}.")
    try:
        return tuple(sp.Rational(p.strip()) for p in partes)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ConfigError(f"--nu: componente no numérica en {texto!r}.") from None


def _parse_mu(texto: str) -> sp.Rational:
    try:
        mu = sp.Rational(texto.strip())
    except (TypeError, ValueError, ZeroDivisionError):
        raise ConfigError(f"--mu: valor no numérico {texto!r}.") from None
    if mu < 0:
        raise ConfigError(f"--mu: debe ser ≥ 0, llegó {texto}.")
    return mu


def _threads(flag) -> int | None:
    if flag is not None:
        valor, nombre = flag, "--threads"
    elif os.getenv("QLANDAU_THREADS"):
        valor, nombre = os.getenv("QLANDAU_THREADS"), "QLANDAU_THREADS"
    else:
        return None
    n = _numero(nombre, valor, int)
    if n < 1:
        raise ConfigError(f"{nombre}: debe ser ≥ 1, llegó {valor}.")
    return n


def resolver_config(args: argparse.Namespace, archivo: dict) -> RunConfig:
    """Combina archivo y flags en un RunConfig validado."""
    verif = _seccion(archivo, "verificacion")
    salida = _seccion(archivo, "salida")
    tolerancias = {k: _numero(f"tolerancias.{k}", v)
                   for k, v in {**TOLERANCIAS_DEFECTO, **_seccion(archivo, "tolerancias")}.items()}
    espectro = {**ESPECTRO_DEFECTO, **_seccion(archivo, "espectro")}
    tamanos = {k: _numero(f"verificacion.{k}", verif.get(k, v), int) for k, v in TAMANOS_DEFECTO.items()}

    suite_size = getattr(args, "suite_size", None)
    if suite_size is not None:
        if suite_size < 1:
            raise ConfigError(f"--suite-size: debe ser ≥ 1, llegó {suite_size}.")
        tamanos = {k: suite_size for k in tamanos}

    seed = args.seed if args.seed is not None else _numero("verificacion.semilla", verif.get("semilla", 0), int)
    if seed < 0:
        raise ConfigError(f"--seed: debe ser ≥ 0, llegó {seed}.")
    k = args.k if args.k is not None else _numero("espectro.k", espectro["k"], int)
    if k < 1:
        raise ConfigError(f"--k: debe ser ≥ 1, llegó {k}.")
    tol = args.tol if args.tol is not None else _numero("espectro.tol", espectro["tol"])
    if not (tol > 0 and math.isfinite(tol)):
        raise ConfigError(f"--tol: debe ser positiva y finita, llegó {tol}.")
    if args.L is not None and not (args.L > 0 and math.isfinite(args.L)):
        raise ConfigError(f"--L: la semianchura debe ser positiva y finita, llegó {args.L}.")
    if args.N is not None and args.N < 8:
        raise ConfigError(f"--N: se necesitan al menos 8 nodos por eje, llegó {args.N}.")

    fmt = args.format or salida.get("formato", "json")
    if fmt not in ("json", "csv"):
        raise ConfigError(f"salida.formato: se espera 'json' o 'csv', llegó {fmt!r}.")
    if fmt == "csv" and args.command != "spectrum":
        raise ConfigError("--format: 'csv' sólo aplica a 'spectrum'.")
    method = getattr(args, "method", None) or espectro["metodo"]
    if method not in ("auto", "dense", "lanczos"):
        raise ConfigError(f"espectro.metodo: método desconocido {method!r}.")
    for clave in ("orden_2d", "orden_4d"):
        espectro[clave] = _numero(f"espectro.{clave}", espectro[clave], int)
        if espectro[clave] not in (2, 4):
            raise ConfigError(f"espectro.{clave}: se espera 2 o 4, llegó {espectro[clave]}.")
    for clave in ("max_incognitas", "dense_cutoff", "n_max_fock"):
        espectro[clave] = _numero(f"espectro.{clave}", espectro[clave], int)
    for clave in ("fock_rel_2d", "fock_rel_4d", "hermiticidad", "tol"):
        espectro[clave] = _numero(f"espectro.{clave}", espectro[clave])

    return RunConfig(
        command=args.command,
        suite=getattr(args, "suite", None),
        nu=_parse_nu(args.nu) if args.nu is not None else None,
        mu=_parse_mu(args.mu) if args.mu is not None else None,
        L=args.L, N=args.N, k=k, tol=tol, seed=seed,
        threads=_threads(args.threads),
        out=args.out or "-",
        fmt=fmt,
        factor2d=bool(getattr(args, "factor2d", False)),
        compare_fock=bool(getattr(args, "compare_fock", False)),
        method=method,
        order=getattr(args, "order", None),
        target=getattr(args, "target", None) or "i",
        log_dir=salida.get("log_dir"),
        tolerancias=tolerancias, tamanos=tamanos, espectro=espectro,
    )


# --- Comandos ---

def cmd_verify(cfg: RunConfig) -> Resultado:
    verificador = Verificador(cfg.tolerancias, cfg.tamanos, cfg.seed, nu=cfg.nu)
    records = verificador.verificar(cfg.suite)
    report = Report("verify", cfg.echo(), records=records,
                    payload={"suite": cfg.suite, "n_records": len(records),
                             "n_passed": sum(r.passed for r in records)})
    return Resultado(report, EXIT_OK if report.status == "pass" else EXIT_FALLO)


def _registro_convergencia(spectrum, tol: float) -> CheckRecord:
    if not spectrum.eigenvalues:
        return CheckRecord.failed("espectro.convergencia", tol, "sin autovalores convergidos")
    rel = max(r / max(1.0, abs(v)) for v, r in zip(spectrum.eigenvalues, spectrum.residuals))
    return CheckRecord("espectro.convergencia", rel, tol, {"matvecs": spectrum.matvecs, "method": spectrum.method})


def cmd_spectrum(cfg: RunConfig) -> Resultado:
    if cfg.nu is None and cfg.mu is None:
        raise ConfigError("--nu/--mu: se requiere el campo (--nu a,b,c o --mu x).")
    esp = cfg.espectro
    nu = tuple(float(v) for v in cfg.nu) if cfg.nu is not None else None
    mu = float(cfg.mu) if cfg.mu is not None else nu_norm(nu)
    d = 2 if cfg.factor2d else 4
    if cfg.factor2d and mu <= 0:
        raise ConfigError("--mu: el factor 2-D necesita μ > 0.")
    if cfg.L is not None:
        half = cfg.L
    elif mu > 0:
        half = default_half_width(mu)
    else:
        raise ConfigError("--L: obligatorio cuando el campo es nulo.")
    try:
        grid = GridSpec(d, half, cfg.N or esp["N_2d" if d == 2 else "N_4d"])
    except ValueError as e:
        raise ConfigError(f"--L/--N: {e}") from None
    if cfg.k >= grid.unknowns - 1:
        raise ConfigError(f"--k: debe ser menor que {grid.unknowns - 1} para esta malla, llegó {cfg.k}.")
    orden = cfg.order or esp["orden_2d" if d == 2 else "orden_4d"]

    logger.info(f"Ensamblando operador d={d}, N={grid.N}, L={grid.L:.6g} ({grid.unknowns} incógnitas).")
    if d == 2:
        op = assemble_canonical_2d(mu, grid, esp["max_incognitas"], orden)
    elif nu is not None:
        op = assemble_landau(nu, grid, esp["max_incognitas"], orden)
    else:
        op = assemble_canonical_4d(mu, grid, esp["max_incognitas"], orden)

    records = [CheckRecord("espectro.hermiticidad", hermiticity_residual(op), esp["hermiticidad"])]
    operador = "canonical_2d" if d == 2 else ("landau" if nu is not None else "canonical_4d")
    payload = {"grid": grid.as_dict(), "operator": operador, "order": orden}
    try:
        spectrum = eigensolve(op, k=cfg.k, tol=cfg.tol, seed=cfg.seed, method=cfg.method, threads=cfg.threads,
                              dense_cutoff=esp["dense_cutoff"], grid=grid, nu=nu, mu=mu)
    except ConvergenceError as e:
        partial = e.report
        if partial is not None:
            records.append(_registro_convergencia(partial, cfg.tol))
            payload["spectrum"] = partial.as_dict()
        else:
            records.append(CheckRecord.failed("espectro.convergencia", cfg.tol, str(e)))
        logger.error(f"Espectro sin converger: {e}")
        return Resultado(Report("spectrum", cfg.echo(), records, payload), EXIT_CONVERGENCIA, partial)

    records.append(_registro_convergencia(spectrum, cfg.tol))
    payload["spectrum"] = spectrum.as_dict()
    if cfg.compare_fock:
        if mu <= 0:
            raise ConfigError("--compare-fock: el campo nulo no tiene niveles de Landau.")
        fock = fock_spectrum(mu, esp["n_max_fock"], dimension=d)
        rel = esp["fock_rel_2d" if d == 2 else "fock_rel_4d"]
        comparacion = compare_spectra(spectrum, fock, rel)
        fundamental = fock.energies()[0]
        desvio = abs(spectrum.eigenvalues[0] - fundamental) / fundamental
        records.append(CheckRecord("espectro.fock_fundamental", desvio, rel, {"fock": fundamental}))
        payload["fock"] = fock.as_dict()
        payload["comparison"] = comparacion.as_dict()

    report = Report("spectrum", cfg.echo(), records, payload)
    return Resultado(report, EXIT_OK if report.status == "pass" else EXIT_FALLO, spectrum)


def cmd_canonicalize(cfg: RunConfig) -> Resultado:
    if cfg.nu is None:
        raise ConfigError("--nu: 'canonicalize' necesita el campo a,b,c.")
    rot = canonical_rotation(cfg.nu, target=cfg.target)
    r = rot.matrix
    escala = max(1.0, nu_norm(rot.nu))
    records = [
        CheckRecord("canonico.conjugacion", rot.residual / escala, cfg.tolerancias["conjugacion"]),
        CheckRecord("canonico.ortogonalidad", float(np.max(np.abs(r.T @ r - np.eye(4)))), cfg.tolerancias["redondeo"]),
        CheckRecord("canonico.determinante", abs(float(np.linalg.det(r)) - 1.0), cfg.tolerancias["redondeo"]),
    ]
    logger.info(f"Rotación canónica: rama '{rot.branch}', residuo {rot.residual:.3e}.")
    report = Report("canonicalize", cfg.echo(), records, rot.as_dict())
    return Resultado(report, EXIT_OK if report.status == "pass" else EXIT_FALLO)


COMANDOS = {"verify": cmd_verify, "spectrum": cmd_spectrum, "canonicalize": cmd_canonicalize}


# --- Parser ---

def construir_parser() -> argparse.ArgumentParser:
    comun = argparse.ArgumentParser(add_help=False)
    comun.add_argument("--nu", help="campo magnético 'a,b,c' (admite fracciones, p. ej. 1/3)")
    comun.add_argument("--mu", help="intensidad μ = ‖ν‖ de la forma canónica")
    comun.add_argument("--L", type=float, help="semianchura de la caja [−L, L]^d (por defecto 6/√μ)")
    comun.add_argument("--N", type=int, help="nodos interiores por eje")
    comun.add_argument("--k", type=int, help="número de autovalores")
    comun.add_argument("--tol", type=float, help="tolerancia relativa del autosolver")
    comun.add_argument("--seed", type=int, help="semilla de los generadores aleatorios")
    comun.add_argument("--threads", type=int, help="hilos BLAS (por defecto $QLANDAU_THREADS)")
    comun.add_argument("--out", help="ruta de salida; '-' es stdout")
    comun.add_argument("--format", choices=("json", "csv"))
    comun.add_argument("--config", help="archivo YAML de configuración")

    parser = argparse.ArgumentParser(prog="qlandau", description="Operador de Landau cuaterniónico.")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", parents=[comun], help="ejecuta una suite de comprobaciones")
    verify.add_argument("suite", choices=(*SUITES, "all"))
    verify.add_argument("--suite-size", type=int, help="tamaño de todas las muestras aleatorias")

    spectrum = sub.add_parser("spectrum", parents=[comun], help="autovalores del operador discretizado")
    spectrum.add_argument("--factor2d", action="store_true", help="factor 2-D de la forma canónica")
    spectrum.add_argument("--compare-fock", action="store_true", help="compara con los niveles de Landau")
    spectrum.add_argument("--method", choices=("auto", "dense", "lanczos"))
    spectrum.add_argument("--order", type=int, choices=(2, 4), help="orden de las diferencias finitas")

    canon = sub.add_parser("canonicalize", parents=[comun], help="rotación R ∈ SO(4) del campo")
    canon.add_argument("--target", choices=("i", "j", "k"))
    return parser


def main(argv=None) -> int:
    parser = construir_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        cfg = resolver_config(args, cargar_config(args.config))
    except ConfigError as e:
        logger.error(f"Configuración inválida: {e}")
        return EXIT_USO
    configurar_archivo(cfg.log_dir)

    logger.info(f"--- ▶️ qlandau {cfg.command} ---")
    try:
        resultado = COMANDOS[cfg.command](cfg)
    except (ConfigError, GridTooLargeError) as e:
        logger.error(f"Parámetros inválidos: {e}")
        return EXIT_USO
    except Exception as e:
        logger.opt(exception=True).critical(f"Error no controlado en '{cfg.command}': {e}")
        return EXIT_FALLO

    try:
        with ReportManager(cfg.out) as rm:
            if cfg.fmt == "csv" and resultado.spectrum is not None:
                rm.write_spectrum_csv(resultado.spectrum)
            else:
                if cfg.fmt == "csv":
                    logger.warning("Sin espectro que exportar en CSV; se escribe el reporte JSON.")
                rm.write_report(resultado.report)
    except ReportIOError as e:
        logger.error(f"No se pudo escribir la salida: {e}")
        return EXIT_IO

    logger.info(f"--- 🏁 {cfg.command}: {resultado.report.status} (código {resultado.code}) ---")
    return resultado.code


if __name__ == "__main__":
    sys.exit(main())
