import csv
import json
import re
from pathlib import Path

import pytest

from strippack import cli
from strippack.bench import COLUMNS, PackingInvalid, Settings, UnknownAlgorithm, bench, pack_with, run_one
from strippack.binpack import first_fit, first_fit_decreasing
from strippack.core import Instance, InstanceError, lower_bound, save_instance, validate_packing
from strippack.generators import gen_equal_height, gen_sizes, gen_tiling, gen_uniform
from strippack.render import svg_string, render_svg
from strippack.strip_offline import bp_pack_detail, nfdh
from strippack.strip_online import shelf_pack

GOLDEN = Path(__file__).parent / "golden"


# -- generators -------------------------------------------------------------------

def test_uniform_basics():
    assert len(gen_uniform(0, 1)) == 0
    assert gen_uniform(50, 9) == gen_uniform(50, 9)
    assert gen_uniform(50, 9) != gen_uniform(50, 10)


def test_uniform_ranges():
    inst = gen_uniform(500, 3, w_range=(0.2, 0.3), h_range=(0.5, 1.0))
    assert all(0.2 < r.w <= 0.3 and 0.5 < r.h <= 1.0 for r in inst.rects)
    with pytest.raises(InstanceError):
        gen_uniform(5, 1, w_range=(0.4, 0.4))
    with pytest.raises(InstanceError):
        gen_uniform(5, 1, h_range=(0.5, 1.5))


def test_uniform_smoke():
    inst = gen_uniform(1000, 42)
    assert lower_bound(inst) > 0
    for name in ("bp-ffd", "nfdh", "ffdh", "gp", "shelf-ff"):
        assert validate_packing(inst, pack_with(name, inst)).ok


def test_tiling_single():
    inst = gen_tiling(1, 1.0, 0)
    assert [(r.w, r.h) for r in inst.rects] == [(1.0, 1.0)] and inst.known_opt == 1.0


@pytest.mark.parametrize("n, H, seed", [(10, 2.5, 0), (200, 7, 1), (1000, 50, 2)])
def test_tiling_area(n, H, seed):
    inst = gen_tiling(n, H, seed)
    assert len(inst) == n
    assert sum(r.area for r in inst.rects) == pytest.approx(H, abs=1e-9)
    assert all(r.h <= 1 and r.w <= 1 for r in inst.rects)


def test_tiling_lower_bound_tight():
    assert lower_bound(gen_tiling(1000, 50, 4)) == pytest.approx(50, abs=1e-9)


def test_tiling_too_tall():
    with pytest.raises(InstanceError):
        gen_tiling(3, 5.0, 0)


def test_tiling_deterministic():
    assert gen_tiling(100, 5, 8) == gen_tiling(100, 5, 8)


def test_equal_height_wrap():
    inst = gen_equal_height([0.5, 0.5], 1.0)
    assert [(r.w, r.h) for r in inst.rects] == [(0.5, 1.0), (0.5, 1.0)]


def test_equal_height_reductions():
    widths = gen_sizes(300, 2)
    inst = gen_equal_height(widths, 1.0)
    _, (slips, assignment) = bp_pack_detail(inst, 1.5, "ffd")
    assert assignment.count == first_fit_decreasing([s.width for s in slips[:-1]]).count
    assert len(shelf_pack(inst, "ff", 0.5).regions) == first_fit(widths).count


# -- SVG ----------------------------------------------------------------------------

def test_svg_empty():
    from strippack.core import StripPacking
    svg = svg_string(Instance("e", ()), StripPacking((), 0.0))
    assert svg.count("<rect") == 1 and 'class="strip"' in svg


def test_svg_nfdh_example(tmp_path):
    inst = Instance.from_dims([(0.6, 0.5), (0.5, 0.4), (0.4, 0.3)])
    path = render_svg(inst, nfdh(inst), tmp_path / "a.svg")
    svg = path.read_text()
    assert svg.count('class="item"') == 3
    assert svg.count('class="level"') == 2
    # uniform 600-unit scale: 0.6 wide -> 360
    assert 'width="360"' in svg
    again = render_svg(inst, nfdh(inst), tmp_path / "b.svg")
    assert again.read_bytes() == path.read_bytes()


def test_svg_bad_path(tmp_path):
    inst = Instance.from_dims([(0.5, 0.5)])
    with pytest.raises(OSError, match="nope"):
        render_svg(inst, nfdh(inst), tmp_path / "nope" / "x.svg")


# -- bench --------------------------------------------------------------------------

def test_bench_rows(tmp_path):
    inst = gen_tiling(60, 3, 0)
    save_instance(inst, tmp_path / "a.json")
    out = tmp_path / "b.csv"
    rows = bench(str(tmp_path / "*.json"), ["nfdh", "bp-ffd"], out, Settings(c=2.0))
    assert len(rows) == 2
    with open(out) as fh:
        data = list(csv.DictReader(fh))
    assert [d["algorithm"] for d in data] == ["nfdh", "bp-ffd"]
    assert all(float(d["ratio"]) >= 1 - 1e-9 for d in data)


def test_bench_csv_golden(tmp_path):
    insts = [gen_tiling(40, 2, s, name=f"t{s}") for s in range(2)]
    out = tmp_path / "g.csv"
    bench(insts, ["nfdh", "ffdh", "bp-ffd", "gp", "shelf-harmonic:3"], out,
          Settings(c=3.0, r=0.5, eps=0.2))
    text = out.read_text()
    assert text.splitlines()[0] == ",".join(COLUMNS)
    stable = re.sub(r",[^,\n]*\r?$", ",", text, flags=re.M)  # drop wall_time
    golden = GOLDEN / "bench.csv"
    assert stable == golden.read_text()


def test_bench_unknown_algorithm():
    with pytest.raises(UnknownAlgorithm):
        bench([gen_uniform(5, 0)], ["bp-magic"])


def test_bench_rejects_invalid_packing(monkeypatch):
    import strippack.bench as b
    from strippack.core import Placement, StripPacking
    broken = lambda inst, *a: StripPacking(tuple(Placement(r.id, 0, 0) for r in inst.rects), 1.0)
    monkeypatch.setattr(b, "nfdh", broken)
    with pytest.raises(PackingInvalid):
        run_one(gen_uniform(5, 0), "nfdh")


# -- CLI ----------------------------------------------------------------------------

def run(argv, capsys=None):
    return cli.main([str(a) for a in argv])


def test_cli_pipeline(tmp_path, capsys):
    inst, pk, svg = tmp_path / "i.json", tmp_path / "p.json", tmp_path / "p.svg"
    assert run(["gen", "tiling", "-n", 80, "--H", 4, "--seed", 3, "-o", inst]) == 0
    assert json.loads(inst.read_text())["known_opt"] == 4
    assert run(["pack", "offline", "--alg", "bp-ffd", "--c", 2, "-i", inst, "-o", pk,
                "--svg", svg]) == 0
    assert svg.read_text().startswith("<svg")
    assert set(json.loads(pk.read_text())) >= {"height", "placements"}
    assert run(["pack", "online", "--alg", "gp", "--eps", 0.1, "--r", 0.8, "--c", 3,
                "-i", inst, "-o", pk]) == 0
    assert run(["pack", "online", "--alg", "gp", "--eps", 0.25, "--params", "toy",
                "-i", inst, "-o", pk]) == 0
    assert run(["render", "-i", inst, "-p", pk, "-o", svg]) == 0


def test_cli_global_flags_before_subcommand(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["--seed", 5, "gen", "uniform", "-n", 10, "-o", a]) == 0
    assert run(["gen", "uniform", "-n", 10, "--seed", 5, "-o", b]) == 0
    assert a.read_text() == b.read_text()


def test_cli_binpack(capsys):
    assert run(["binpack", "--alg", "ffd", 0.3, 0.7, 0.2, 0.6]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["count"] == 2 and out["bins"] == [[1, 0], [3, 2]]
    assert run(["--format", "csv", "binpack", "--alg", "opt", 0.6, 0.5, 0.4, 0.3]) == 0
    assert capsys.readouterr().out.splitlines()[-1] == "opt,2"


def test_cli_analyze(tmp_path, capsys):
    assert run(["analyze", "bound", "--params", "harmonic:2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["bound"] == pytest.approx(1.75) and out["patterns"] == [[1, 1]]
    inst = tmp_path / "i.json"
    save_instance(Instance.from_dims([(0.6, 0.5)]), inst)
    assert run(["analyze", "weight", "-i", inst, "--params", "harmonic:12"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["xi"] == pytest.approx(0.5)


def test_cli_bench(tmp_path, capsys):
    save_instance(gen_tiling(30, 2, 1), tmp_path / "x.json")
    assert run(["bench", "--instances", tmp_path / "*.json", "--algs", "nfdh,gp",
                "--c", 2, "--eps", 0.2]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 3


def test_cli_usage_errors(tmp_path, capsys):
    inst = tmp_path / "i.json"
    save_instance(gen_uniform(5, 0), inst)
    assert run(["pack", "offline", "--alg", "gp", "-i", inst]) == 2
    assert run(["pack", "online", "--alg", "nfdh", "-i", inst]) == 2
    assert run(["binpack", "--alg", "magic", 0.5]) == 2
    assert run(["pack", "online", "--alg", "gp", "--eps", 0.3, "--params", "toy", "-i", inst]) == 2
    with pytest.raises(SystemExit) as e:
        cli.main(["frobnicate"])
    assert e.value.code == 2


def test_cli_invalid_packing_exit_code(tmp_path):
    inst, pk, svg = tmp_path / "i.json", tmp_path / "p.json", tmp_path / "o.svg"
    save_instance(Instance.from_dims([(0.5, 0.5), (0.5, 0.5)]), inst)
    pk.write_text(json.dumps({"height": 1, "placements": [{"id": 0, "x": 0, "y": 0},
                                                          {"id": 1, "x": 0.2, "y": 0}]}))
    assert run(["render", "-i", inst, "-p", pk, "-o", svg]) == 1
    pk.write_text(json.dumps({"height": 1, "placements": [{"id": 0, "x": 0, "y": 0}]}))
    assert run(["render", "-i", inst, "-p", pk, "-o", svg]) == 1
