import csv
import io
import json

import pytest

from namrspin.cli import run
from namrspin.config import default_config_path, load_config, parse_config
from namrspin.errors import ConfigError

from conftest import G, LAMBDA, OMEGA_R, T_G

BASE = {
    "n": 4,
    "omega_r_hz": 1e6,
    "g_hz": 5e5,
    "lambda_hz": 5e4,
    "delta_max": 0.01,
    "seed": 7,
    "t_g_seconds": 3e-4,
    "trials": 5,
}


@pytest.fixture
def config(tmp_path):
    def write(**changes):
        data = dict(BASE)
        data.update(changes)
        for key in [k for k, v in changes.items() if v is None]:
            del data[key]
        path = tmp_path / "c.json"
        path.write_text(json.dumps(data))
        return str(path)
    return write


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_default_config_reproduces_standard_parameters():
    cfg = load_config(default_config_path())
    assert cfg.spec.n == 11
    assert cfg.spec.omega_r == pytest.approx(OMEGA_R)
    assert cfg.spec.g == pytest.approx(G)
    assert cfg.spec.lambda_bar == pytest.approx(LAMBDA)
    assert cfg.t_g == pytest.approx(T_G)
    assert cfg.trials == 200


def test_config_rejects_bad_values():
    with pytest.raises(ConfigError) as info:
        parse_config(dict(BASE, omega_r_hz=0))
    assert info.value.key == "omega_r_hz"
    with pytest.raises(ConfigError) as info:
        parse_config(dict(BASE, omega_hz=1e6))
    assert "omega_r_hz" in str(info.value)
    data = dict(BASE)
    del data["seed"]
    with pytest.raises(ConfigError) as info:
        parse_config(data)
    assert info.value.key == "seed"
    with pytest.raises(ConfigError):
        parse_config(dict(BASE, delta_max=1.5))
    with pytest.raises(ConfigError):
        parse_config(dict(BASE, trials=2.5))


def test_missing_seed_exit_code(config):
    code, _, err = invoke("sweep-n", "--config", config(seed=None))
    assert code == 2
    assert "seed" in err


def test_unknown_subcommand_and_usage():
    assert invoke("bogus")[0] == 4
    assert invoke()[0] == 4
    assert invoke("modes", "--no-such-flag")[0] == 4


def test_sweep_n_without_disorder(config):
    code, out, _ = invoke("sweep-n", "--config", config(delta_max=0.0))
    assert code == 0
    table = rows(out)
    assert [int(r["n"]) for r in table] == [2, 3, 4]
    assert all(float(r["mean_fidelity"]) == 1.0 for r in table)
    assert list(table[0]) == ["n", "delta_max", "trials", "mean_fidelity", "std_fidelity"]


def test_sweep_n_deterministic_bytes(config, tmp_path):
    path = config(delta_max=0.05)
    a = invoke("sweep-n", "--config", path, "--deltas", "0.01,0.05")[1]
    b = invoke("sweep-n", "--config", path, "--deltas", "0.01,0.05")[1]
    assert a == b
    assert len(rows(a)) == 6


def test_dispersion_two_sites():
    code, out, _ = invoke("dispersion", "--n", "2")
    assert code == 0
    table = rows(out)
    assert float(table[0]["omega_tilde_hz"]) == pytest.approx(1.0e6, rel=1e-12)
    assert float(table[1]["omega_tilde_hz"]) == pytest.approx(1.7320508e6, rel=1e-8)
    assert float(table[1]["omega_analytic_hz"]) == pytest.approx(1.7320508e6, rel=1e-8)


def test_modes_output(config):
    code, out, _ = invoke("modes", "--config", config())
    assert code == 0
    table = rows(out)
    assert list(table[0]) == ["mode_index", "omega_tilde_hz", "shift_mean_hz", "shift_std_hz"]
    assert len(table) == 4


def test_lattice_modes(config):
    code, out, _ = invoke("lattice-modes", "--config", config(), "--rows", "2", "--cols", "3")
    assert code == 0
    assert len(rows(out)) == 6


def test_sweep_t_summary(config, tmp_path):
    dest = tmp_path / "t.csv"
    code, out, _ = invoke("sweep-t", "--config", config(n=2), "--steps", "51", "--out", str(dest))
    assert code == 0
    summary = json.loads(out)
    table = rows(dest.read_text())
    assert len(table) == 51
    assert summary["max_fidelity"] == max(float(r["fidelity"]) for r in table)


def test_fit_round_trip(config, tmp_path):
    sweep = tmp_path / "sweep.csv"
    assert invoke("sweep-n", "--config", config(n=6, delta_max=0.05), "--out", str(sweep))[0] == 0
    code, out, _ = invoke("fit", "--input", str(sweep), "--f0", "0.5")
    assert code == 0
    result = json.loads(out)
    assert set(result) == {"slope", "intercept", "pearson_r", "n_max_at_f0"}
    assert -1 <= result["pearson_r"] <= 1


def test_fit_requires_input():
    assert invoke("fit")[0] == 4


def test_compensate_json(config):
    code, out, _ = invoke("compensate", "--config", config(n=6, delta_max=0.2))
    assert code == 0
    result = json.loads(out)
    assert result["n"] == 6 and result["seed"] == 7
    assert result["fidelity"] >= 1 - 1e-10
    assert len(result["durations"]) == 5


def test_compensate_clean_total_time(config):
    result = json.loads(invoke("compensate", "--config", config(n=5, delta_max=0.0))[1])
    assert result["total_time_seconds"] == pytest.approx(2 * 3e-4, rel=1e-12)


def test_naive_compare(config):
    code, out, _ = invoke("naive-compare", "--config", config(n=4))
    assert code == 0
    table = rows(out)
    assert [int(r["n"]) for r in table] == [2, 3, 4]
    assert all(float(r["fidelity_compensated"]) >= 1 - 1e-10 for r in table)


def test_seed_override_changes_output(config):
    path = config(n=3, delta_max=0.05)
    a = invoke("compensate", "--config", path)[1]
    b = invoke("compensate", "--config", path, "--seed", "8")[1]
    assert json.loads(a)["durations"] != json.loads(b)["durations"]


def test_bad_override_is_config_error(config):
    assert invoke("dispersion", "--config", config(), "--n", "0")[0] == 2
