import csv
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stackedtau.cli import main
from stackedtau.constructions import general_lower_bound_2, linear_lower_bound, random_ball
from stackedtau.core import boundary
from stackedtau.io import (
    InstanceFormatError,
    dumps_json,
    dumps_text,
    from_ball,
    from_family,
    from_sphere,
    loads_json,
    loads_text,
    read_instance,
    write_instance,
)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def fields(line):
    return dict(tok.split("=", 1) for tok in line.split() if "=" in tok)


class TestRoundTrip:
    def test_text_family(self):
        inst = from_family(linear_lower_bound(2, 1))
        back = loads_text(dumps_text(inst))
        assert back.kind == "ball" and len(back.payload) == 11
        assert back.vertices == list(range(14))
        assert len(back.removed) == 2
        assert back.sphere().n == 14

    def test_json_restores_labels(self):
        fam = general_lower_bound_2(1)
        inst = from_family(fam)
        back = loads_json(dumps_json(inst))
        assert back.payload == inst.payload
        assert back.removed == inst.removed
        assert back.metadata["claimed_tau_lower"] == 6
        assert back.sphere() == fam.sphere

    def test_sphere_text(self):
        sph = boundary(random_ball(3, 6, seed=4))
        back = loads_text(dumps_text(from_sphere(sph)))
        assert len(back.payload) == len(sph.facets) and back.kind == "sphere"

    @settings(max_examples=40, deadline=None)
    @given(d=st.sampled_from([2, 3, 4]), m=st.integers(1, 12), seed=st.integers(0, 10**6))
    def test_boundary_preserved(self, d, m, seed):
        ball = random_ball(d, m, seed)
        text = loads_text(dumps_text(from_ball(ball)))
        assert len(boundary(text.ball()).facets) == d * m + 2
        js = loads_json(dumps_json(from_ball(ball)))
        assert boundary(js.ball()) == boundary(ball)

    def test_files(self, tmp_path):
        inst = from_family(linear_lower_bound(2, 1))
        for name in ("a.txt", "a.json"):
            write_instance(inst, tmp_path / name)
            assert read_instance(tmp_path / name).sphere().n == 14


class TestParseErrors:
    @pytest.mark.parametrize("text", [
        "",
        "tree 2 1\n",
        "ball 2\n0 1 2 3\n",
        "ball 2 2\n0 1 2 3\n",
        "ball 2 1\n0 1 2\n",
        "ball 2 1\n0 1 x 3\n",
        "ball 2 1\n0 1 2 3\nextra\n",
        "ball 2 1\n0 1 2 3\nremoved 2\n0 1 2\n",
        "sphere 2 5 1\n0 1 2\n",
    ])
    def test_bad_text(self, text):
        with pytest.raises(InstanceFormatError):
            loads_text(text)

    def test_bad_json(self):
        with pytest.raises(InstanceFormatError):
            loads_json('{"kind": "ball"}')
        with pytest.raises(InstanceFormatError):
            loads_json('{"kind": "cube", "dim": 2, "facets": []}')

    def test_invalid_complex(self, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("ball 2 2\n0 1 2 3\n4 5 6 7\n")
        with pytest.raises(InstanceFormatError):
            read_instance(p)


class TestCli:
    def test_gen_and_tau(self, tmp_path, capsys):
        out = tmp_path / "lb.json"
        code, text, _ = run(capsys, "gen", "linear-lb", "--d", 2, "--k", 1, "--out", out)
        assert code == 0 and fields(text)["n"] == "14"
        code, text, _ = run(capsys, "tau", out)
        line = fields(text.splitlines()[0])
        assert code == 0
        assert line["tau"] == "6" and line["status"] == "CERTIFIED" and line["optimal"] == "true"

    def test_tau_modes(self, tmp_path, capsys):
        out = tmp_path / "g.txt"
        run(capsys, "gen", "general-lb-2", "--k", 1, "--out", out)
        _, text, _ = run(capsys, "tau", out, "--greedy")
        assert text.startswith("tau<=")
        _, text, _ = run(capsys, "tau", out, "--brute", 3)
        assert text.startswith("tau>3")
        _, text, _ = run(capsys, "tau", out, "--brute", 8)
        assert text.startswith("tau=6")

    def test_tau_remove(self, tmp_path, capsys):
        out = tmp_path / "p.txt"
        run(capsys, "gen", "path", "--d", 2, "--m", 1, "--kind", "sphere", "--out", out)
        _, text, _ = run(capsys, "tau", out, "--remove", "0,1,2")
        assert fields(text.splitlines()[0])["edges"] == "3"

    def test_cover37(self, tmp_path, capsys):
        out = tmp_path / "lb.txt"
        run(capsys, "gen", "linear-lb", "--d", 2, "--k", 2, "--out", out)
        code, text, _ = run(capsys, "cover37", out)
        line = fields(text.splitlines()[0])
        assert code == 0 and line["size"] == "12" and line["bound"] == "12"

    def test_random_linear_deterministic(self, tmp_path, capsys):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        for p in (a, b):
            run(capsys, "gen", "random-linear", "--d", 2, "--m", 30, "--seed", 9, "--out", p)
        assert a.read_text() == b.read_text()

    def test_enumerate(self, tmp_path, capsys):
        code, text, _ = run(capsys, "enumerate", "--d", 2, "--m", 2, "--out-dir", tmp_path)
        assert code == 0 and fields(text)["count"] == "4"
        assert len(list(tmp_path.glob("linear_d2_m2_*.txt"))) == 4

    @pytest.mark.slow
    def test_enumerate_seven(self, tmp_path, capsys):
        run(capsys, "enumerate", "--d", 2, "--m", 7, "--out-dir", tmp_path)
        assert len(list(tmp_path.iterdir())) == 972

    def test_bench(self, tmp_path, capsys):
        out = tmp_path / "bench.csv"
        assert run(capsys, "bench", "--sizes", "14,21,28", "--out", out)[0] == 0
        rows = list(csv.DictReader(out.open()))
        taus = [int(r["tau"]) for r in rows]
        assert taus == sorted(taus) and taus[0] == 6 and taus[-1] == 12
        assert all(int(r["cover37_size"]) <= int(r["bound"]) for r in rows)

    def test_verify_instance(self, tmp_path, capsys):
        out = tmp_path / "lb.json"
        run(capsys, "gen", "linear-lb", "--d", 2, "--k", 1, "--out", out)
        code, text, _ = run(capsys, "verify", "--instance", out)
        assert code == 0 and "status=CERTIFIED" in text
        # an inflated claim must be refused
        code, text, _ = run(capsys, "verify", "--instance", out, "--claim", 7)
        assert code == 3 and "status=VIOLATED" in text
        doc = json.loads(out.read_text())
        doc["metadata"]["claimed_tau_lower"] = 9
        out.write_text(json.dumps(doc))
        assert run(capsys, "tau", out)[0] == 3

    def test_exit_codes(self, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("ball two\n")
        assert run(capsys, "tau", bad)[0] == 2
        assert run(capsys, "tau", tmp_path / "missing.txt")[0] == 2
        assert run(capsys, "gen", "linear-lb", "--out", tmp_path / "x.txt")[0] == 2
        assert run(capsys, "nonsense")[0] == 2
        out = tmp_path / "g.txt"
        run(capsys, "gen", "general-lb", "--d", 3, "--k", 1, "--out", out)
        code, text, _ = run(capsys, "tau", out, "--max-nodes", 1)
        assert code == 4 and "status=NODE-CAP" in text
        # text files carry no metadata, so the claim comes from the command line
        assert run(capsys, "verify", "--instance", out)[0] == 2
        code, text, _ = run(capsys, "verify", "--instance", out, "--claim", 9, "--max-nodes", 1)
        assert code == 4 and "SKIPPED-too-large" in text

    def test_verify_oracle_suite(self, capsys):
        code, text, _ = run(capsys, "verify", "--suite", "oracle")
        assert code == 0
        assert "status=VIOLATED" not in text
        assert "criterion=8" in text
