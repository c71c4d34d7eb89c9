import subprocess
import sys

import pytest

from heatfuzz.cli import run
from heatfuzz.rules import load_model


@pytest.fixture
def data_csv(tmp_path):
    p = tmp_path / "data.csv"
    assert run(["synth", "--n", "2000", "--seed", "1", "--noise-std", "0.05", "--out", str(p)]) == 0
    return p


@pytest.fixture
def model(tmp_path, data_csv):
    p = tmp_path / "model.fz"
    assert run(["train", "--input", str(data_csv), "--seed", "2", "--out", str(p)]) == 0
    return p


def test_synth_layout(data_csv):
    lines = data_csv.read_text().splitlines()
    assert lines[0] == "timestamp,rh,t,hi"
    assert len(lines) == 2001
    assert lines[2].startswith("50,")


def test_clean(tmp_path, data_csv, capsys):
    out = tmp_path / "clean.csv"
    assert run(["clean", "--input", str(data_csv), "--out", str(out), "--iqr-k", "1.5"]) == 0
    assert "removed" in capsys.readouterr().err
    assert out.read_text().startswith("timestamp,rh,t,hi\n")


def test_stats(data_csv, capsys):
    assert run(["stats", "--input", str(data_csv)]) == 0
    out = capsys.readouterr().out
    for word in ("Mean", "Standard deviation", "Min", "Max", "Pearson", "Heat Index"):
        assert word in out
    assert run(["stats", "--input", str(data_csv), "--format", "csv"]) == 0
    rows = capsys.readouterr().out.splitlines()
    assert rows[0].startswith("attribute,mean,std,min,max")
    assert len(rows) == 4


def test_train_and_rules(model, capsys):
    assert run(["rules", "--model", str(model)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert 1 <= len(lines) <= 9
    assert all(line.startswith("IF relative humidity is ") for line in lines)
    assert all(" THEN heat index is " in line for line in lines)


def test_train_optimize(tmp_path, data_csv):
    p = tmp_path / "opt.fz"
    assert run(["train", "--input", str(data_csv), "--seed", "2", "--optimize", "--step", "0.1", "--out", str(p)]) == 0
    assert all(-1 <= o <= 1 for o in load_model(p).centers.offsets)


def test_train_requires_input(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        run(["train", "--seed", "1", "--out", str(tmp_path / "m.fz")])
    assert exc.value.code != 0
    assert "--input" in capsys.readouterr().err


def test_train_requires_seed(tmp_path, data_csv):
    with pytest.raises(SystemExit) as exc:
        run(["train", "--input", str(data_csv), "--out", str(tmp_path / "m.fz")])
    assert exc.value.code != 0


def test_unknown_subcommand():
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate"])
    assert exc.value.code != 0


def test_missing_file_diagnostic(tmp_path, capsys):
    code = run(["rules", "--model", str(tmp_path / "absent.fz")])
    assert code == 1
    err = capsys.readouterr().err.strip()
    assert "absent.fz" in err and len(err.splitlines()) == 1


def test_predict(tmp_path, model, capsys):
    inp = tmp_path / "pairs.csv"
    inp.write_text("rh,t\n76,24.5\n68,23\n90,30\n")
    assert run(["predict", "--model", str(model), "--input", str(inp)]) == 0
    rows = capsys.readouterr().out.splitlines()
    assert rows[0] == "rh,t,hi_pred,fallback"
    assert len(rows) == 4
    assert all(r.split(",")[3] in ("0", "1") for r in rows[1:])


def test_predict_bad_row(tmp_path, model):
    inp = tmp_path / "pairs.csv"
    inp.write_text("76,24.5\nxx,24\n")
    assert run(["predict", "--model", str(model), "--input", str(inp)]) == 1


def test_evaluate(model, data_csv, capsys):
    assert run(["evaluate", "--model", str(model), "--input", str(data_csv), "--seed", "2"]) == 0
    out = capsys.readouterr().out
    for word in ("R2", "RMSE", "MAE", "F-statistic", "(1,598)", "overprediction", "residual histogram"):
        assert word in out
    assert run(["evaluate", "--model", str(model), "--input", str(data_csv), "--seed", "2", "--format", "csv"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("quantity,value\nn,600\n")


def test_compare(model, data_csv, capsys):
    assert run(["compare", "--model", str(model), "--input", str(data_csv), "--seed", "2"]) == 0
    rows = capsys.readouterr().out.splitlines()
    assert [r.split()[0] for r in rows[2:]] == ["fuzzy", "mlr"]


def test_module_entry_point(model):
    proc = subprocess.run(
        [sys.executable, "-m", "heatfuzz", "rules", "--model", str(model)], capture_output=True, text=True
    )
    assert proc.returncode == 0 and proc.stdout.startswith("IF ")
