from __future__ import annotations

import subprocess
import sys

import pytest

from conftest import DATA
from robustmatch.cli import run
from robustmatch.core import format_instance, parse_instance
from robustmatch.generate import ADVERSARIAL, MASTER, UNIFORM, GeneratorConfig, generate
from robustmatch.oracle import enumerate_stable
from robustmatch.rotations import build_rotation_poset

DEMO = str(DATA / "demo_A.txt")
DEMO_ERR = str(DATA / "demo_errors.txt")


class TestGenerate:
    def test_master_list_single(self):
        for seed in range(5):
            assert len(enumerate_stable(generate(GeneratorConfig(4, seed, MASTER)))) == 1

    def test_adversarial_three(self):
        assert len(enumerate_stable(generate(GeneratorConfig(3, 1, ADVERSARIAL)))) == 3

    def test_adversarial_is_rich(self):
        inst = generate(GeneratorConfig(30, 2, ADVERSARIAL))
        assert len(build_rotation_poset(inst).rotations) >= 20

    def test_uniform_trivial(self):
        assert generate(GeneratorConfig(1, 0, UNIFORM)).boy_prefs == ((0,),)

    def test_deterministic(self):
        for mode in (UNIFORM, MASTER, ADVERSARIAL):
            a = format_instance(generate(GeneratorConfig(9, 123, mode)))
            assert a == format_instance(generate(GeneratorConfig(9, 123, mode)))
        assert generate(GeneratorConfig(9, 1)) != generate(GeneratorConfig(9, 2))

    @pytest.mark.parametrize("kw", [dict(n=0), dict(n=3, mode="x"), dict(n=3, seed=-1)])
    def test_bad_config(self, kw):
        with pytest.raises(ValueError):
            GeneratorConfig(**kw)


def test_solve(capsys):
    assert run(["solve", "--instance", DEMO]) == 0
    assert capsys.readouterr().out == "{a1,b2,c3,d4}\n"
    assert run(["solve", "--instance", DEMO, "--side", "girls"]) == 0
    assert capsys.readouterr().out == "{a2,b1,c4,d3}\n"


def test_poset_and_enumerate(capsys):
    assert run(["poset", "--instance", DEMO]) == 0
    assert capsys.readouterr().out == "2: (a1,b2)\n3: (c3,d4)\n0 -> 2\n0 -> 3\n2 -> 1\n3 -> 1\n"
    assert run(["enumerate", "--instance", DEMO]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 4


def test_robust_demo(capsys, tmp_path):
    assert run(["robust", "--instance", DEMO, "--errors", DEMO_ERR]) == 0
    assert capsys.readouterr().out == "{a1,b2,c3,d4}\n"
    w = tmp_path / "w.txt"
    w.write_text("1 0 0 0\n0 2 0 0\n0 0 3 0\n0 0 0 4\n")
    assert run(["robust", "--instance", DEMO, "--errors", DEMO_ERR, "--weights", str(w), "--trace"]) == 0
    out = capsys.readouterr()
    assert out.out == "{a1,b2,c3,d4}\nweight: 10.0\n"
    assert "girl 1: c a b d -> 1->2 1->3" in out.err


def test_robust_none(capsys, tmp_path):
    errs = tmp_path / "e.txt"
    errs.write_text("girl 1: c a b d\nboy a: 2 1 3 4\n")
    assert run(["robust", "--instance", DEMO, "--errors", str(errs)]) == 3
    assert capsys.readouterr().out == "NO FULLY ROBUST MATCHING\n"


def test_bouquet_cmd(capsys):
    assert run(["bouquet", "--instance", DEMO, "--error", "girl 1: c a b d", "--trace"]) == 0
    out = capsys.readouterr()
    assert out.out == "1: 2 3\nedges: 1->2 1->3\n"
    assert "round 0: tail=1" in out.err
    assert run(["bouquet", "--instance", DEMO, "--error", "boy a: 2 1 3 4"]) == 0
    assert capsys.readouterr().out.startswith("# order reversed")


def test_compress_cmd(capsys, tmp_path):
    e = tmp_path / "edges.txt"
    e.write_text("1 -> 2\n1 3\n")
    assert run(["compress", "--instance", DEMO, "--edges", str(e)]) == 0
    assert capsys.readouterr().out == "block 0 (A_s): 0\nblock 1 (A_t): 1 2 3\n0 -> 1\n"
    e.write_text("1 x\n")
    assert run(["compress", "--instance", DEMO, "--edges", str(e)]) == 3


def test_gen_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert run(["gen", "--n", "6", "--seed", "7", "-o", str(a)]) == 0
    assert run(["gen", "--n", "6", "--seed", "7", "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert parse_instance(a.read_text()).n == 6


def test_exit_codes(tmp_path, capsys):
    assert run([]) == 2
    assert run(["solve"]) == 2
    assert run(["solve", "--instance", str(tmp_path / "missing.txt")]) == 4
    bad = tmp_path / "bad.txt"
    bad.write_text("2\n1 1\n2 1\n1 2\n1 2\n")
    assert run(["solve", "--instance", str(bad)]) == 3
    assert run(["enumerate", "--instance", DEMO, "--bound", "2"]) == 3


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "robustmatch", "solve", "--instance", DEMO],
                         capture_output=True, text=True, check=True)
    assert out.stdout == "{a1,b2,c3,d4}\n"
