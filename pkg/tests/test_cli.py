import json
import re

import numpy as np
import pytest

import cli
from cli import EXIT_CONVERGENCIA, EXIT_FALLO, EXIT_IO, EXIT_OK, EXIT_USO, Resultado, main
from report_manager import CSV_HEADER, Report
from spectral import GridSpec, dirichlet_mode_energy


@pytest.fixture(autouse=True)
def sin_config_local(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("QLANDAU_THREADS", raising=False)


def _leer(path):
    return json.loads(path.read_text(encoding="utf-8"))


def test_canonicalize_identidad(tmp_path):
    out = tmp_path / "r.json"
    assert main(["canonicalize", "--nu", "5,0,0", "--out", str(out)]) == EXIT_OK
    datos = _leer(out)
    assert datos["command"] == "canonicalize"
    assert datos["status"] == "pass"
    assert datos["payload"]["branch"] == "identity"
    assert datos["payload"]["R"] == np.eye(4).tolist()
    assert datos["payload"]["residual"] == 0.0
    assert datos["config"]["nu"] == ["5", "0", "0"]


def test_canonicalize_campo_nulo(tmp_path):
    out = tmp_path / "r.json"
    assert main(["canonicalize", "--nu", "0,0,0", "--out", str(out)]) == EXIT_OK
    payload = _leer(out)["payload"]
    assert payload["branch"] == "degenerate-zero"
    assert payload["degenerate"] is True


def test_canonicalize_generico_y_fracciones(tmp_path):
    out = tmp_path / "r.json"
    assert main(["canonicalize", "--nu", "1,2,2", "--target", "k", "--out", str(out)]) == EXIT_OK
    datos = _leer(out)
    assert datos["payload"]["branch"] == "generic"
    assert datos["payload"]["target"] == "k"
    assert main(["canonicalize", "--nu", "1/3,-1/2,0", "--out", str(out)]) == EXIT_OK
    assert _leer(out)["config"]["nu"] == ["1/3", "-1/2", "0"]


def test_reporte_determinista_salvo_fecha(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["canonicalize", "--nu", "0.3,-1.2,4", "--out", str(a)])
    main(["canonicalize", "--nu", "0.3,-1.2,4", "--out", str(b)])
    da, db = _leer(a), _leer(b)
    da.pop("timestamp")
    db.pop("timestamp")
    assert da == db


def test_espectro_campo_nulo(tmp_path):
    out = tmp_path / "s.json"
    assert main(["spectrum", "--nu", "0,0,0", "--N", "8", "--L", "3", "--k", "1", "--out", str(out)]) == EXIT_OK
    datos = _leer(out)
    esperado = 4 * dirichlet_mode_energy(1, GridSpec(4, 3.0, 8))
    assert datos["payload"]["spectrum"]["eigenvalues"][0] == pytest.approx(esperado, rel=1e-10)
    assert datos["payload"]["operator"] == "landau"
    assert {r["name"] for r in datos["records"]} == {"espectro.hermiticidad", "espectro.convergencia"}


def test_espectro_csv(tmp_path):
    out = tmp_path / "s.csv"
    codigo = main(["spectrum", "--factor2d", "--mu", "1", "--N", "10", "--L", "3", "--k", "3", "--format", "csv",
                   "--out", str(out)])
    assert codigo == EXIT_OK
    lineas = out.read_text(encoding="utf-8").splitlines()
    assert lineas[0] == CSV_HEADER
    assert len(lineas) == 4
    assert [linea.split(",")[0] for linea in lineas[1:]] == ["0", "1", "2"]


def test_espectro_con_fock(tmp_path):
    out = tmp_path / "s.json"
    codigo = main(["spectrum", "--factor2d", "--mu", "1", "--N", "12", "--L", "4", "--k", "2", "--compare-fock",
                   "--out", str(out)])
    assert codigo in (EXIT_OK, EXIT_FALLO)
    datos = _leer(out)
    assert datos["payload"]["fock"]["levels"][0] == [2.0, 1]
    assert "espectro.fock_fundamental" in {r["name"] for r in datos["records"]}


def test_espectro_sin_converger(tmp_path):
    out = tmp_path / "s.json"
    codigo = main(["spectrum", "--factor2d", "--mu", "1", "--N", "8", "--L", "3", "--k", "2", "--tol", "1e-30",
                   "--method", "dense", "--out", str(out)])
    assert codigo == EXIT_CONVERGENCIA
    datos = _leer(out)
    assert datos["status"] == "fail"
    assert datos["payload"]["spectrum"]["converged"] is False


@pytest.mark.parametrize("argv", [
    ["verify", "bogus"],
    ["spectrum", "--N", "8", "--L", "3"],
    ["spectrum", "--nu", "0,0,0", "--N", "8"],
    ["spectrum", "--nu", "1,0,0", "--N", "4"],
    ["spectrum", "--nu", "1,0", "--N", "8"],
    ["canonicalize", "--nu", "1,0,0", "--format", "csv"],
    ["canonicalize", "--nu", "a,b,c"],
    ["canonicalize"],
    ["canonicalize", "--nu", "1,0,0", "--seed", "-1"],
    ["canonicalize", "--nu", "1,0,0", "--config", "no_existe.yaml"],
    ["spectrum", "--nu", "1,0,0", "--N", "40", "--L", "2"],
    ["spectrum", "--factor2d", "--mu", "1", "--N", "8", "--L", "3", "--k", "63"],
    ["spectrum", "--factor2d", "--mu", "1", "--N", "8", "--L", "3", "--order", "3"],
])
def test_errores_de_uso(argv):
    assert main(argv) == EXIT_USO


def test_error_de_escritura(tmp_path):
    assert main(["canonicalize", "--nu", "1,0,0", "--out", str(tmp_path / "falta" / "r.json")]) == EXIT_IO


def test_config_yaml_con_tolerancia_imposible(tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("tolerancias:\n  conjugacion: -1.0\n", encoding="utf-8")
    out = tmp_path / "r.json"
    assert main(["canonicalize", "--nu", "1,2,2", "--config", str(cfg), "--out", str(out)]) == EXIT_FALLO
    assert _leer(out)["status"] == "fail"


def test_config_yaml_invalido(tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("- una\n- lista\n", encoding="utf-8")
    assert main(["canonicalize", "--nu", "1,0,0", "--config", str(cfg)]) == EXIT_USO


def test_hilos_desde_el_entorno(tmp_path, monkeypatch):
    monkeypatch.setenv("QLANDAU_THREADS", "0")
    assert main(["canonicalize", "--nu", "1,0,0", "--out", str(tmp_path / "r.json")]) == EXIT_USO
    monkeypatch.setenv("QLANDAU_THREADS", "1")
    out = tmp_path / "r.json"
    assert main(["canonicalize", "--nu", "1,0,0", "--out", str(out)]) == EXIT_OK
    assert _leer(out)["config"]["threads"] == 1


def test_verify_suite_algebra(tmp_path):
    out = tmp_path / "v.json"
    assert main(["verify", "algebra", "--seed", "42", "--suite-size", "10", "--out", str(out)]) == EXIT_OK
    datos = _leer(out)
    assert datos["payload"]["n_records"] == datos["payload"]["n_passed"] == 14
    assert datos["config"]["tamanos"]["n_algebra"] == 10


@pytest.mark.slow
def test_verify_all(tmp_path):
    out = tmp_path / "v.json"
    assert main(["verify", "all", "--seed", "42", "--suite-size", "10", "--out", str(out)]) == EXIT_OK
    datos = _leer(out)
    assert datos["payload"]["n_passed"] >= 30
    assert datos["status"] == "pass"


def test_espectro_de_orden_4(tmp_path):
    out = tmp_path / "s.json"
    codigo = main(["spectrum", "--factor2d", "--mu", "1", "--N", "10", "--L", "3", "--k", "2", "--order", "4",
                   "--out", str(out)])
    assert codigo == EXIT_OK
    datos = _leer(out)
    assert datos["payload"]["order"] == 4
    assert datos["config"]["order"] == 4


def test_orden_por_defecto_desde_config(tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("espectro:\n  orden_2d: 4\n", encoding="utf-8")
    out = tmp_path / "s.json"
    assert main(["spectrum", "--factor2d", "--mu", "1", "--N", "10", "--L", "3", "--k", "2", "--config", str(cfg),
                 "--out", str(out)]) == EXIT_OK
    assert _leer(out)["payload"]["order"] == 4
    cfg.write_text("espectro:\n  orden_4d: 6\n", encoding="utf-8")
    assert main(["spectrum", "--nu", "1,0,0", "--N", "8", "--config", str(cfg)]) == EXIT_USO


def test_value_error_inesperado_es_fallo(monkeypatch):
    def roto(cfg):
        raise ValueError("estado interno inconsistente")

    monkeypatch.setitem(cli.COMANDOS, "canonicalize", roto)
    assert main(["canonicalize", "--nu", "1,0,0"]) == EXIT_FALLO


def test_csv_sin_espectro_escribe_json(tmp_path, monkeypatch):
    def sin_espectro(cfg):
        return Resultado(Report("spectrum", cfg.echo()), EXIT_CONVERGENCIA, None)

    monkeypatch.setitem(cli.COMANDOS, "spectrum", sin_espectro)
    out = tmp_path / "s.csv"
    codigo = main(["spectrum", "--factor2d", "--mu", "1", "--N", "8", "--L", "3", "--format", "csv",
                   "--out", str(out)])
    assert codigo == EXIT_CONVERGENCIA
    datos = _leer(out)
    assert datos["command"] == "spectrum"
    assert datos["config"]["format"] == "csv"


@pytest.mark.slow
def test_verify_all_reproducible(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["verify", "all", "--seed", "42", "--suite-size", "5"]
    codigo_a = main([*argv, "--out", str(a)])
    codigo_b = main([*argv, "--out", str(b)])
    assert codigo_a == codigo_b
    sin_fecha = re.compile(r'^\s*"timestamp": .*\n', re.MULTILINE)
    texto_a = sin_fecha.sub("", a.read_text(encoding="utf-8"))
    texto_b = sin_fecha.sub("", b.read_text(encoding="utf-8"))
    assert texto_a == texto_b
    assert _leer(a)["payload"]["n_records"] > 0
