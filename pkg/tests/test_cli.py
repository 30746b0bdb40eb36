import json

from kinkwell.cli import main


def test_solve_prints_table_with_oracle_column(capsys):
    rc = main(["solve", "--well", "triangular", "--max-states", "2"])
    assert rc == 0
    out = capsys.readouterr().out
    lines = [ln for ln in out.splitlines() if ln.strip()]
    assert "E_oracle" in lines[0]
    assert "|dE|" in lines[0]
    assert len(lines) == 3  # header + two states
    assert "even" in lines[1]
    assert "odd" in lines[2]
    assert "2.9789" in lines[1].replace(" ", "")


def test_solve_csv_output(tmp_path, capsys):
    out = tmp_path / "spec.csv"
    rc = main(["solve", "--well", "convexp", "--max-states", "1",
               "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n,parity,E,C,E_oracle,dE_abs"
    fields = lines[1].split(",")
    assert fields[0] == "0"
    assert fields[1] == "even"
    assert abs(float(fields[2]) - (-7.3460)) < 5e-4


def test_figure_csv_header_and_rerun_bytes(tmp_path, capsys):
    args = ["figure", "--well", "triangular", "--max-states", "1",
            "--points", "64", "--out", str(tmp_path)]
    assert main(args) == 0
    csv_path = tmp_path / "triangular_n0.csv"
    json_path = tmp_path / "triangular_figure.json"
    first_csv = csv_path.read_bytes()
    first_json = json_path.read_bytes()

    header = first_csv.split(b"\n", 1)[0]
    assert header == b"p,I,p2I,p4I,p6I"
    assert b"\r" not in first_csv

    sidecar = json.loads(first_json)
    state = sidecar["states"][0]
    assert state["parity"] == "even"
    assert abs(state["tail_fit"]["exponent"] - 8.0) < 0.3
    assert state["moments"]["1"]["verdict"] == "converged"
    assert state["moments"]["2"]["verdict"] == "converged"
    assert state["moments"]["3"]["verdict"] in ("converged", "marginal")

    # same config must rerun to identical bytes
    assert main(args) == 0
    assert csv_path.read_bytes() == first_csv
    assert json_path.read_bytes() == first_json


def test_moments_json(tmp_path, capsys):
    out = tmp_path / "m.json"
    rc = main(["moments", "--well", "divexp", "--state", "1", "--j", "3",
               "--out", str(out)])
    assert rc == 0
    payload = json.loads(out.read_text())
    assert payload["j"] == 3
    assert payload["parity"] == "odd"
    assert payload["verdict"] == "converged"
    assert abs(payload["value"] / payload["position_value"] - 1.0) < 1e-3
    assert payload == json.loads(capsys.readouterr().out)


def test_tails_json(capsys):
    rc = main(["tails", "--well", "convexp", "--state", "0"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert abs(payload["exponent"] - 8.0) < 0.3
    assert payload["r_squared"] > 0.999


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"well": "divexp", "state": 1, "j": 2}))
    rc = main(["moments", "--config", str(cfg)])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert (payload["well"], payload["state"], payload["j"]) == \
        ("divexp", 1, 2)
    # explicit flags override the file
    rc = main(["moments", "--config", str(cfg), "--j", "1", "--state", "0"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert (payload["state"], payload["j"]) == (0, 1)


def test_exit_code_2_on_config_errors(tmp_path, capsys):
    assert main(["solve", "--well", "triangular", "--v0", "-3.0"]) == 2
    assert main(["solve", "--max-states", "0"]) == 2
    assert main(["moments", "--cutoffs", "1,2,oops"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"no_such_key": 1}))
    assert main(["solve", "--config", str(bad)]) == 2
    # asking for a state beyond the spectrum is a usage error too
    assert main(["moments", "--well", "triangular", "--state", "7"]) == 2


def test_exit_code_3_on_numerical_failure(capsys):
    # cutoffs past the validated transform range trip AccuracyError
    rc = main(["moments", "--well", "triangular", "--state", "0",
               "--j", "2", "--cutoffs", "2,6,20,63,500"])
    assert rc == 3
    assert "numerical failure" in capsys.readouterr().err
