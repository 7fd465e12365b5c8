import json
import shutil
import subprocess
import sys

import numpy as np
import pytest

from mapentropy import cli
from mapentropy.additivity import certify_dynamical_additivity, conditional_mutual_information, verify_block_saturation
from mapentropy.channel import KrausChannel
from mapentropy.entropy import map_entropy
from mapentropy.generators import BlockSpec, bit_flip, completely_depolarizing, phase_flip, random_bistochastic
from mapentropy.io import ChannelFileError, dumps, load_channel, loads, save_channel

from conftest import unit


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr().out
    values = dict(line.split(" = ", 1) for line in out.splitlines() if " = " in line)
    return code, values


# -- file format --------------------------------------------------------------

def test_roundtrip_bit_exact():
    ch = random_bistochastic(3, 3, seed=1)
    back = loads(dumps(ch, {"name": "x", "seed": 1}))
    assert all(np.array_equal(a, b) for a, b in zip(ch.kraus, back.kraus))
    assert dumps(back, {"name": "x", "seed": 1}) == dumps(ch, {"name": "x", "seed": 1})


def test_file_layout(tmp_path):
    path = tmp_path / "bf.json"
    save_channel(path, bit_flip(0.5), {"name": "bit-flip"})
    doc = json.loads(path.read_text())
    assert doc["format_version"] == "1" and doc["dim"] == 2
    assert len(doc["kraus"]) == 2 and doc["kraus"][1][0][1] == [pytest.approx(np.sqrt(0.5)), 0.0]
    assert doc["metadata"]["name"] == "bit-flip"


@pytest.mark.parametrize(
    "text",
    [
        "{not json",
        "[]",
        '{"format_version": "2", "dim": 1, "kraus": [[[[1, 0]]]]}',
        '{"format_version": "1", "dim": 0, "kraus": [[[[1, 0]]]]}',
        '{"format_version": "1", "dim": 1, "kraus": []}',
        '{"format_version": "1", "dim": 2, "kraus": [[[[1, 0]]]]}',
        '{"format_version": "1", "dim": 1, "kraus": [[[[1]]]]}',
        '{"format_version": "1", "dim": 1, "kraus": [[[["1", 0]]]]}',
        '{"format_version": "1", "dim": 1, "kraus": [[[[1, 0]]]], "metadata": 3}',
    ],
)
def test_schema_errors(text):
    with pytest.raises(ChannelFileError):
        loads(text)


def test_non_finite_entries_rejected():
    with pytest.raises(ValueError):
        loads('{"format_version": "1", "dim": 1, "kraus": [[[[NaN, 0]]]]}')


def test_missing_file(tmp_path):
    with pytest.raises(ChannelFileError):
        load_channel(tmp_path / "nope.json")


# -- commands -----------------------------------------------------------------

def test_entropy_identity_and_depolarizing(tmp_path, capsys):
    path = tmp_path / "id.json"
    assert cli.main(["gen", "--kind", "identity", "--dim", "2", "--out", str(path)]) == 0
    code, vals = run(capsys, "entropy", path)
    assert code == 0 and vals["S"] == "0.000000000000"
    assert vals["trace_preserving"] == "true" and vals["unital"] == "true"

    save_channel(tmp_path / "dep.json", completely_depolarizing(2))
    code, vals = run(capsys, "entropy", tmp_path / "dep.json")
    assert vals["S"] == "2.000000000000"
    assert [float(x) for x in vals["choi_spectrum"].split()] == pytest.approx([0.5] * 4)


def test_entropy_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{malformed")
    assert cli.main(["entropy", str(bad)]) == cli.EXIT_PARSE
    lossy = tmp_path / "lossy.json"
    save_channel(lossy, KrausChannel([unit(2, 0, 0)]))
    assert cli.main(["entropy", str(lossy)]) == cli.EXIT_INVARIANT


def test_gen_pauli_then_entropy(tmp_path, capsys):
    path = tmp_path / "pauli.json"
    assert cli.main(["gen", "--kind", "pauli", "--probs", "1/2,1/4,1/8,1/8", "--out", str(path)]) == 0
    code, vals = run(capsys, "entropy", path)
    assert vals["S"] == "1.750000000000"
    assert cli.main(["gen", "--kind", "pauli", "--out", str(path)]) == cli.EXIT_PARSE


def test_gen_same_seed_identical(tmp_path):
    for name in ("a", "b"):
        cli.main(["gen", "--kind", "bistochastic", "--dim", "3", "--terms", "3", "--seed", "7", "--out", str(tmp_path / f"{name}.json")])
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_certify_add(tmp_path, capsys):
    save_channel(tmp_path / "bf.json", bit_flip(0.5))
    save_channel(tmp_path / "pf.json", phase_flip(0.5))
    code, vals = run(capsys, "certify-add", tmp_path / "bf.json", tmp_path / "pf.json")
    assert code == 0 and vals["certified"] == "true"
    assert abs(float(vals["entropy_gap"])) < 1e-9

    code, vals = run(capsys, "certify-add", tmp_path / "bf.json", tmp_path / "bf.json")
    assert code == 1 and vals["certified"] == "false"
    assert float(vals["max_violation"]) == pytest.approx(0.5, abs=1e-10)
    assert vals["entropy_gap"] == cli.fmt(certify_dynamical_additivity(bit_flip(0.5), bit_flip(0.5)).entropy_gap)

    for name in ("u", "v"):
        cli.main(["gen", "--kind", "unitary", "--dim", "3", "--seed", str(ord(name)), "--out", str(tmp_path / f"{name}.json")])
    capsys.readouterr()
    code, _ = run(capsys, "certify-add", tmp_path / "u.json", tmp_path / "v.json")
    assert code == 0


def test_decompose(tmp_path, capsys):
    save_channel(tmp_path / "meas.json", KrausChannel([unit(2, 0, 0), unit(2, 1, 1)]))
    code, vals = run(capsys, "decompose", tmp_path / "meas.json", "--out-dir", tmp_path / "parts")
    assert code == 0 and vals["components"] == "2"
    assert load_channel(tmp_path / "parts" / "component_1.json").dim == 2

    save_channel(tmp_path / "dep.json", completely_depolarizing(2))
    _, vals = run(capsys, "decompose", tmp_path / "dep.json")
    assert vals["components"] == "1"


def test_gen_and_verify_sds(tmp_path, capsys):
    prefix = tmp_path / "triple"
    assert cli.main(["gen", "--kind", "sds-triple", "--blocks", "2:2", "--seed", "3", "--out", str(prefix)]) == 0
    files = [f"{prefix}.{r}.json" for r in ("phi", "lambda", "psi")]
    capsys.readouterr()
    code, vals = run(capsys, "verify-sds", *files, "--blocks", "2:2")
    assert code == 0 and vals["saturated"] == "true"
    chans = [load_channel(f) for f in files]
    rep = verify_block_saturation(*chans, BlockSpec.parse("2:2"))
    assert vals["gap"] == cli.fmt_e(rep.gap)
    assert vals["choi_residual"] == cli.fmt_e(rep.choi_residual)

    save_channel(tmp_path / "other.json", random_bistochastic(4, 3, seed=8))
    code, vals = run(capsys, "verify-sds", files[0], files[1], tmp_path / "other.json", "--blocks", "2:2")
    assert code == 1 and float(vals["gap"]) > 0

    for name in ("a", "b", "c"):
        cli.main(["gen", "--kind", "unitary", "--dim", "2", "--seed", str(ord(name)), "--out", str(tmp_path / f"{name}.json")])
    capsys.readouterr()
    code, _ = run(capsys, "verify-sds", *(tmp_path / f"{n}.json" for n in "abc"), "--blocks", "2:1")
    assert code == 0


def test_verify_sds_bad_blocks(tmp_path, capsys):
    save_channel(tmp_path / "bf.json", bit_flip(0.5))
    f = tmp_path / "bf.json"
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify-sds", str(f), str(f), str(f), "--blocks", "2x2"])
    assert exc.value.code == 2
    assert cli.main(["verify-sds", str(f), str(f), str(f), "--blocks", "2:2"]) == cli.EXIT_INVARIANT


def test_cmi(tmp_path, capsys):
    save_channel(tmp_path / "bf.json", bit_flip(0.5))
    cli.main(["gen", "--kind", "identity", "--dim", "2", "--out", str(tmp_path / "id.json")])
    cli.main(["gen", "--kind", "unitary", "--dim", "2", "--seed", "1", "--out", str(tmp_path / "u.json")])
    capsys.readouterr()
    _, vals = run(capsys, "cmi", tmp_path / "bf.json", tmp_path / "id.json", tmp_path / "bf.json")
    assert vals["cmi"] == "1.000000000000"
    _, vals = run(capsys, "cmi", *[tmp_path / "u.json"] * 3)
    assert float(vals["cmi"]) == 0.0


def test_console_script(tmp_path):
    exe = shutil.which("mapentropy")
    cmd = [exe] if exe else [sys.executable, "-m", "mapentropy.cli"]
    out = tmp_path / "dep.json"
    subprocess.run(cmd + ["gen", "--kind", "depolarizing", "--dim", "3", "--out", str(out)], check=True, capture_output=True)
    res = subprocess.run(cmd + ["entropy", str(out)], capture_output=True, text=True)
    assert res.returncode == 0
    assert f"S = {cli.fmt(map_entropy(completely_depolarizing(3)))}" in res.stdout
    bad = tmp_path / "bad.json"
    bad.write_text("nope")
    assert subprocess.run(cmd + ["entropy", str(bad)], capture_output=True).returncode == 2


def test_cli_matches_library_cmi(tmp_path, capsys):
    chans = [random_bistochastic(2, 2, seed=s) for s in range(3)]
    paths = []
    for i, ch in enumerate(chans):
        paths.append(tmp_path / f"c{i}.json")
        save_channel(paths[-1], ch)
    _, vals = run(capsys, "cmi", *paths)
    assert vals["cmi"] == cli.fmt(conditional_mutual_information(*chans))
