# report_manager.py

import json
import math
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from logger import logger

TOOL_VERSION = "1.0.0"
SCHEMA_VERSION = 1
CSV_HEADER = "index,eigenvalue,residual"


class ReportIOError(Exception):
    """Excepción personalizada para fallos al escribir reportes."""
    pass


@dataclass
class CheckRecord:
    """Resultado de una comprobación: pasa si el residuo es finito y no supera la tolerancia."""
    name: str
    residual: float
    tolerance: float
    detail: dict | None = None
    status: str = field(init=False)

    def __post_init__(self):
        self.residual = float(self.residual)
        self.tolerance = float(self.tolerance)
        ok = math.isfinite(self.residual) and self.residual <= self.tolerance
        self.status = "pass" if ok else "fail"

    @classmethod
    def failed(cls, name: str, tolerance: float, error: str):
        return cls(name, math.inf, tolerance, detail={"error": error})

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def as_dict(self) -> dict:
        out = {"name": self.name, "status": self.status,
               "residual": self.residual if math.isfinite(self.residual) else None,
               "tolerance": self.tolerance}
        if self.detail is not None:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    """Reporte versionado: eco de la configuración, registros y carga útil del comando."""
    command: str
    config: dict
    records: list = field(default_factory=list)
    payload: dict = field(default_factory=dict)
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    @property
    def status(self) -> str:
        return "pass" if all(r.passed for r in self.records) else "fail"

    def as_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "tool_version": TOOL_VERSION,
            "timestamp": self.timestamp,
            "command": self.command,
            "config": self.config,
            "records": [r.as_dict() for r in self.records],
            "status": self.status,
            "payload": self.payload,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


class ReportManager:
    """
    Gestor de salida con manejo de contexto: abre el destino ('-' es stdout)
    al entrar y lo cierra al salir.
    """
    def __init__(self, path: str = "-"):
        self.path = path
        self.stream = None

    def __enter__(self):
        """Abre el archivo de salida."""
        try:
            if self.path == "-":
                self.stream = sys.stdout
            else:
                self.stream = open(self.path, "w", encoding="utf-8", newline="\n")
                logger.info(f"Archivo de reporte abierto: '{self.path}'")
            return self
        except OSError as e:
            logger.critical(f"No se pudo abrir el archivo de reporte '{self.path}': {e}")
            raise ReportIOError(f"No se pudo abrir '{self.path}': {e}") from e

    def __exit__(self, exc_type, exc_val, exc_tb):
        """Cierra el archivo al salir del contexto."""
        if self.stream is not None and self.stream is not sys.stdout:
            self.stream.close()
            logger.info(f"Reporte '{self.path}' cerrado.")
        self.stream = None

    def write_report(self, report: Report):
        try:
            self.stream.write(report.to_json())
            self.stream.flush()
        except OSError as e:
            raise ReportIOError(f"Error escribiendo el reporte JSON: {e}") from e

    def write_spectrum_csv(self, spectrum):
        """CSV con cabecera index,eigenvalue,residual y 17 cifras significativas."""
        try:
            np.savetxt(self.stream, spectrum.rows(), fmt=["%d", "%.17g", "%.17g"], delimiter=",",
                       header=CSV_HEADER, comments="", newline="\n")
            self.stream.flush()
        except OSError as e:
            raise ReportIOError(f"Error escribiendo el CSV del espectro: {e}") from e
