# logger.py

from loguru import logger
import os
import sys

# La consola va a stderr: stdout queda libre para los reportes JSON/CSV.
nivel_consola = os.getenv("QLANDAU_LOG_LEVEL", "INFO").upper()

logger.remove()

logger.add(sys.stderr,
           colorize=True,
           level=nivel_consola,
           format="<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level}</level> | {message}")

_sink_archivo = None


def configurar_archivo(log_dir: str | None):
    """
    Activa el sink de archivo con rotación diaria en 'log_dir'.
    Llamadas repetidas reemplazan el sink anterior; None lo desactiva.
    """
    global _sink_archivo
    if _sink_archivo is not None:
        logger.remove(_sink_archivo)
        _sink_archivo = None
    if not log_dir:
        return
    _sink_archivo = logger.add(os.path.join(log_dir, "qlandau_{time:YYYYMMDD}.log"),
                               rotation="00:00",  # Rota el archivo cada día a medianoche
                               retention="7 days",
                               compression="zip",
                               level="INFO",
                               format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} - {message}")
