"""Command-line surface: JSON determinism, the exact-series cache, exit
codes, config parsing."""

import json
import os
import subprocess
import sys

import pytest

from pretzel237.cli import RunConfig, cached_series, main


def run_cli(args, env_extra=None, capsys=None):
    """Invoke main() in-process, capturing stdout."""
    import io
    from contextlib import redirect_stdout
    buf = io.StringIO()
    old_env = {}
    if env_extra:
        for k, v in env_extra.items():
            old_env[k] = os.environ.get(k)
            os.environ[k] = v
    try:
        with redirect_stdout(buf):
            code = main(args)
    except SystemExit as exc:  # argparse errors
        code = exc.code
    finally:
        for k, v in old_env.items():
            if v is None:
                os.environ.pop(k, None)
            else:
                os.environ[k] = v
    return code, buf.getvalue()


def test_hseries_emits_reference_terms(tmp_path):
    env = {"PRETZEL237_CACHE_DIR": str(tmp_path)}
    code, out = run_cli(["hseries", "--lambda", "0", "--j", "0", "--sign",
                         "plus", "--order", "64"], env)
    assert code == 0
    data = json.loads(out)
    terms = dict((k, v) for k, v in data["series"]["terms"])
    assert terms["0" if "0" in terms else 0] == "1/1" or terms[0] == "1/1"
    assert terms[24] == "1/1"
    assert terms[32] == "3/1"


def test_hseries_bad_j_is_usage_error(tmp_path):
    env = {"PRETZEL237_CACHE_DIR": str(tmp_path)}
    code, _ = run_cli(["hseries", "--j", "9"], env)
    assert code == 2


def test_cached_rerun_is_byte_identical(tmp_path):
    env = {"PRETZEL237_CACHE_DIR": str(tmp_path)}
    args = ["hseries", "--lambda", "1", "--j", "2", "--sign", "minus",
            "--order", "48"]
    code1, out1 = run_cli(args, env)
    code2, out2 = run_cli(args, env)
    assert code1 == code2 == 0
    assert out1 == out2


def test_cache_cold_vs_warm_payload(tmp_path):
    cold = cached_series("h", 0, 3, "plus", 40, base=tmp_path)
    files = list(tmp_path.glob("h-*.json"))
    assert len(files) == 1
    warm = cached_series("h", 0, 3, "plus", 40, base=tmp_path)
    assert cold == warm


def test_cache_revision_invalidation(tmp_path):
    cached_series("h", 0, 0, "plus", 32, base=tmp_path)
    path = next(tmp_path.glob("h-*.json"))
    blob = json.loads(path.read_text())
    blob["key"]["revision"] = "stale"
    # a stale payload under the same filename must not be served
    blob["payload"]["terms"] = [[0, "99/1"]]
    path.write_text(json.dumps(blob))
    fresh = cached_series("h", 0, 0, "plus", 32, base=tmp_path)
    assert fresh.coeff(0) == 1


def test_verify_quadratic_exit_zero(tmp_path):
    # negative bounds ride along via the --flag=value form
    code, out = run_cli(["verify", "quadratic", "--lambda=-1..1",
                         "--order", "32"])
    assert code == 0
    data = json.loads(out)
    assert data["pass"] and len(data["reports"]) == 3


def test_verify_selfdual_symbolic(tmp_path):
    code, out = run_cli(["verify", "selfdual-symbolic"])
    assert code == 0
    data = json.loads(out)
    detail = data["reports"][0]["detail"]
    assert detail["det_q"] and detail["conjugation_transposed"]


def test_statphase_command_contains_reference_c1():
    code, out = run_cli(["statphase", "--field", "xi", "--K", "1",
                         "--sigma", "sigma1"])
    assert code == 0
    data = json.loads(out)
    c1 = data["points"][0]["c"][1]["lambda_coeffs"]
    assert c1[2] == ["3/92", "-7/92", "-1/46"]


def test_config_file_parsing(tmp_path):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text("precision_bits = 128\ncache_dir = {}\n".format(tmp_path))
    cfg = RunConfig.from_file(cfg_file)
    assert cfg.precision_bits == 128
    assert cfg.cache_dir == str(tmp_path)
    with pytest.raises(KeyError):
        bad = tmp_path / "bad.cfg"
        bad.write_text("nonsense_key = 1\n")
        RunConfig.from_file(bad)


def test_stateintegral_exit_codes():
    # absurd tolerance forces a reported failure and a nonzero exit
    code, out = run_cli(["stateintegral", "--tau", "0.5+0.5j", "--prec", "96",
                         "--order", "240", "--check-factorization",
                         "--tolerance-digits", "500"])
    assert code == 1
    data = json.loads(out)
    assert data["pass"] is False


def test_entry_point_runs_as_module(tmp_path):
    env = dict(os.environ, PRETZEL237_CACHE_DIR=str(tmp_path))
    proc = subprocess.run(
        [sys.executable, "-m", "pretzel237.cli", "hseries", "--j", "0",
         "--order", "16"],
        capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["kind"] == "hseries"
