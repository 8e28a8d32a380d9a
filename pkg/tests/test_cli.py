import csv
import json
import math

import pytest

from fdbounds.cli import decode_floats, encode_floats, main, parse_distribution
from fdbounds.errors import DomainError

CATEGORICAL = ["--p", "0.202,0.198,0.2,0.2,0.2", "--q", "uniform:5"]


def run(capsys, *argv):
    code = main(list(argv))
    out = json.loads(capsys.readouterr().out)
    return code, out


def test_divergence_categorical(capsys):
    code, env = run(capsys, "divergence", "--g", "kl", *CATEGORICAL)
    assert code == 0
    assert env["command"] == "divergence" and env["version"]
    assert env["results"]["value"] == pytest.approx(2.0000333346667380997e-5, rel=1e-12)
    assert env["inputs_echo"]["q"] == "uniform:5"


def test_divergence_bits(capsys):
    _, env = run(capsys, "divergence", "--g", "kl", "--bits", *CATEGORICAL)
    res = env["results"]
    assert res["unit"] == "bits"
    assert res["value"] == pytest.approx(res["value_nats"] / math.log(2))


def test_divergence_family_and_identical(capsys):
    _, env = run(capsys, "divergence", "--g", "tv", "--family", "local-gaussian", "--t", "0.1")
    assert env["results"]["value"] == pytest.approx(0.039877611676744925, rel=1e-14)
    _, env = run(capsys, "divergence", "--g", "chi2", "--p", "uniform:3", "--q", "uniform:3")
    assert env["results"]["value"] == 0.0


def test_domain_errors_exit_2(capsys):
    code, env = run(capsys, "divergence", "--g", "kl", "--p", "0.5,0.6", "--q", "uniform:2")
    assert code == 2 and env["results"]["error"] == "DomainError"
    code, env = run(capsys, "divergence", "--g", "nope", *CATEGORICAL)
    assert code == 2
    code, env = run(capsys, "divergence", "--g", "kl", "--p", "0.5,0.5", "--q", "1,0")
    assert code == 2 and env["results"]["error"] == "AbsoluteContinuityError"


def test_normalize_flag(capsys):
    code, env = run(capsys, "divergence", "--g", "tv", "--p", "1,3", "--q", "1,1", "--normalize")
    assert code == 0 and env["results"]["value"] == pytest.approx(0.25)


def test_csv_input(tmp_path, capsys):
    f = tmp_path / "pair.csv"
    f.write_text("label,p,q\na,0.202,0.2\nb,0.198,0.2\nc,0.2,0.2\nd,0.2,0.2\ne,0.2,0.2\n")
    _, env = run(capsys, "divergence", "--g", "chi2", "--file", str(f))
    assert env["results"]["value"] == pytest.approx(4e-5, rel=1e-10)
    bad = tmp_path / "bad.csv"
    bad.write_text("x,y\n1,2\n")
    code, _ = run(capsys, "divergence", "--g", "chi2", "--file", str(bad))
    assert code == 2


def test_parse_distribution():
    assert parse_distribution("uniform:4").masses.tolist() == [0.25] * 4
    with pytest.raises(DomainError):
        parse_distribution("a,b")


def test_certify_categorical(capsys):
    code, env = run(capsys, "certify", *CATEGORICAL, "--epsilon", "0.05", "--infer-spec", "--g", "kl")
    res = env["results"]
    assert code == 0 and res["all_hold"]
    assert res["spec"]["big_m"] == pytest.approx(0.2) and res["spec"]["small_m"] == pytest.approx(0.2)
    assert res["tilde_c"] == 0.0


def test_certify_truncated_ball_echoes_theta(capsys):
    code, env = run(capsys, "certify", "--family", "truncated-ball", "--dim", "4", "--y", "100",
                    "--epsilon", "0.1", "--M", "1", "--m", "1")
    res = env["results"]
    assert code == 0
    assert res["tilde_c"] == res["pair"]["theta"]


def test_certify_infeasible_exit_3(capsys):
    code, env = run(capsys, "certify", "--p", "0.3,0.7", "--q", "uniform:2",
                    "--epsilon", "0.05", "--M", "1", "--m", "1")
    assert code == 3
    assert env["results"]["certificate"]["condition1_holds"] is False


def test_bound_corollary1(capsys):
    code, env = run(capsys, "bound", "--source", "corollary1", "--g", "kl", *CATEGORICAL,
                    "--epsilon", "0.05", "--infer-spec")
    assert code == 0 and env["results"]["reports"][0]["holds"]
    # non-finite floats are encoded as strings
    assert env["results"]["reports"][0]["upper"] == "+inf"


def test_bound_specialized(capsys):
    code, env = run(capsys, "bound", "--source", "specialized", "--pair", "kl-rkl", *CATEGORICAL,
                    "--epsilon", "0.05", "--infer-spec")
    assert code == 0 and env["results"]["all_hold"]


def test_bound_soundness_failure_exit_4(capsys):
    args = ["bound", "--source", "theorem1", "--g", "kl", "--family", "truncated-ball",
            "--epsilon", "0.1", "--M", "1", "--m", "1"]
    code, env = run(capsys, *args)
    assert code == 4 and not env["results"]["all_hold"]
    code, env = run(capsys, *args, "--honor-witness")
    assert code == 0


def test_compare_kl_rkl_interval(capsys):
    code, env = run(capsys, "compare", "--pair", "kl-rkl", "--epsilon", "0.1", "--M", "1", "--m", "1")
    lo, hi = env["results"]["interval"]
    assert code == 0
    assert lo == pytest.approx(0.87851, abs=5e-6) and hi == pytest.approx(1.14595, abs=5e-6)


def test_compare_baselines_table(tmp_path, capsys):
    out = tmp_path / "table.csv"
    code, env = run(capsys, "compare", "--g", "kl", *CATEGORICAL, "--epsilon", "0.05", "--infer-spec",
                    "--tightness", "5", "100", "20", "1", "--csv", str(out))
    assert code == 0
    names = {row["name"] for row in env["results"]["table"]}
    assert {"pinsker", "phi_linear", "finite_alphabet"} <= names
    assert env["results"]["tightness"]["condition_holds"] is False
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert {r["name"] for r in rows} == names


def test_gof_small(tmp_path, capsys):
    out = tmp_path / "samples.csv"
    code, env = run(capsys, "gof", "--statistic", "chi2", "--k", "5", "--n", "5000", "--R", "300",
                    "--seed", "7", "--csv", str(out))
    assert code == 0 and env["results"]["reference"] == "chi2(4)"
    assert len(out.read_text().splitlines()) == 301


def test_reproduce_categorical(tmp_path, capsys):
    code, env = run(capsys, "reproduce", "example-categorical", "--out-dir", str(tmp_path))
    res = env["results"]
    assert code == 0 and res["all_passed"]
    assert res["results"]["tv"] == pytest.approx(0.002)
    assert res["results"]["tightness"]["condition_holds"] is False
    assert (tmp_path / "example-categorical.json").exists()


def test_reproduce_sphere_hardening(tmp_path, capsys):
    code, env = run(capsys, "reproduce", "sphere-hardening", "--mu", "0.9", "--n", "100,200,400",
                    "--out-dir", str(tmp_path))
    tvs = [r["tv"] for r in env["results"]["results"]["rows"]]
    assert code == 0 and tvs == sorted(tvs, reverse=True)
    assert (tmp_path / "sphere_hardening.csv").exists()


def test_reproduce_unknown(capsys):
    code, env = run(capsys, "reproduce", "nope", "--out-dir", "")
    assert code == 2 and env["results"]["error"] == "UnknownScenario"


def test_replay_round_trip(tmp_path, capsys):
    code, env = run(capsys, "certify", *CATEGORICAL, "--epsilon", "0.05", "--infer-spec", "--g", "kl")
    f = tmp_path / "env.json"
    f.write_text(json.dumps(env))
    code, replay = run(capsys, "replay", str(f))
    assert code == 0 and replay["results"]["identical"]
    env["results"]["delta"] = 1.0
    f.write_text(json.dumps(env))
    code, replay = run(capsys, "replay", str(f))
    assert code == 1 and not replay["results"]["identical"]


def test_gof_deterministic(capsys):
    args = ["gof", "--statistic", "fdiv", "--g", "kl", "--k", "4", "--n", "1000", "--R", "100", "--seed", "3"]
    _, a = run(capsys, *args)
    _, b = run(capsys, *args)
    assert a["results"] == b["results"]


def test_float_encoding_round_trip():
    obj = {"a": [math.inf, -math.inf, 1.5], "b": math.nan}
    enc = encode_floats(obj)
    assert enc == {"a": ["+inf", "-inf", 1.5], "b": "nan"}
    dec = decode_floats(enc)
    assert dec["a"][0] == math.inf and math.isnan(dec["b"])
