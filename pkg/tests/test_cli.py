import json
import os

import numpy as np
import pytest

from ternwave.cli import (
    RunConfig,
    _parse_targets,
    _parse_wavelets,
    build_summary,
    ingest_image,
    main,
    parse_results_csv,
    rows_to_csv_lines,
    run_benchmark,
)
from ternwave.common import InvalidArgumentError, Wavelet
from ternwave.compression import BenchmarkRecord
from ternwave.pixmaps import write_pnm


@pytest.fixture
def dataset(tmp_path, rng):
    """Two tiny color scenes, just big enough for one ternary level."""
    root = tmp_path / "imgs"
    root.mkdir()
    for name, (h, w) in (("tiny_a", (44, 48)), ("tiny_b", (48, 40))):
        yy, xx = np.mgrid[0:h, 0:w]
        r = 0.5 + 0.3 * np.sin(xx / 5.0)
        g = 0.5 + 0.3 * np.cos(yy / 7.0)
        b = 0.5 + 0.2 * np.sin((xx + yy) / 6.0)
        rgb = np.stack([r, g, b], axis=-1)
        rgb = np.clip(rgb + 0.05 * rng.standard_normal(rgb.shape), 0.0, 1.0)
        write_pnm(str(root / f"{name}.ppm"), np.rint(rgb * 255))
    return str(root)


def base_config(dataset, **kw):
    defaults = dict(dataset=dataset,
                    wavelets=(Wavelet.TERN2, Wavelet.CDF97),
                    targets=(0.95,), jobs=1, no_figure=True)
    defaults.update(kw)
    return RunConfig(**defaults)


# ---------------------------------------------------------------------------
# configuration parsing

def test_parse_wavelets():
    assert _parse_wavelets("tern1,cdf97") == (Wavelet.TERN1, Wavelet.CDF97)
    assert _parse_wavelets("cdf97, cdf97") == (Wavelet.CDF97, Wavelet.CDF97)
    with pytest.raises(InvalidArgumentError):
        _parse_wavelets("tern3")


def test_parse_targets_dedupes_keeping_order():
    assert _parse_targets("0.99,0.95,0.99") == (0.99, 0.95)
    with pytest.raises(InvalidArgumentError):
        _parse_targets("high")


def test_run_config_validation(dataset):
    with pytest.raises(InvalidArgumentError):
        base_config(dataset, wavelets=())
    with pytest.raises(InvalidArgumentError):
        base_config(dataset, targets=(1.2,))
    with pytest.raises(InvalidArgumentError):
        base_config(dataset, targets=())
    with pytest.raises(InvalidArgumentError):
        base_config(dataset, jobs=0)
    with pytest.raises(InvalidArgumentError):
        base_config(dataset, threshold_scope="everything")
    with pytest.raises(InvalidArgumentError):
        base_config(dataset, msssim_channels="rgb")


# ---------------------------------------------------------------------------
# summaries and report formats

def make_records():
    def rec(img, beta):
        m_cdf = 1000
        m_tern = round((1.0 - beta) * m_cdf)
        return BenchmarkRecord.pair(img, Wavelet.TERN1, 0.99, m_tern, m_cdf)
    return tuple(rec(f"img{i}", b) for i, b in
                 enumerate((-5.0, 0.0, 0.1, 0.2, 0.3)))


def test_build_summary_quartiles_and_outliers():
    summary = build_summary(make_records(), Wavelet.CDF97)
    assert len(summary.pairs) == 1
    p = summary.pairs[0]
    assert p.family == "tern1" and p.baseline == "cdf97"
    assert p.count == 5
    assert p.median == pytest.approx(0.1)
    assert p.q25 == pytest.approx(0.0)
    assert p.q75 == pytest.approx(0.2)
    assert p.minimum == pytest.approx(-5.0)
    assert p.maximum == pytest.approx(0.3)
    assert [i for i, _ in p.outliers] == ["img0"]
    assert [i for i, _ in p.values] == [f"img{i}" for i in range(5)]


def test_build_summary_empty():
    assert build_summary((), Wavelet.CDF97).pairs == ()


def test_csv_round_trip(dataset):
    out = run_benchmark(base_config(dataset))
    lines = rows_to_csv_lines(out.rows)
    path = os.path.join(dataset, os.pardir, "r.csv")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    parsed = parse_results_csv(path)
    assert len(parsed) == len(out.rows)
    for row, d in zip(out.rows, parsed):
        assert d["image_id"] == row.image_id
        assert d["wavelet"] == row.wavelet.value
        assert d["m_min"] == row.result.m_min
        assert d["total_coeffs"] == row.result.total_coeffs
        assert d["achieved_msssim"] == pytest.approx(row.result.achieved,
                                                     rel=1e-8)


# ---------------------------------------------------------------------------
# benchmark protocol

def test_identical_selection_gives_zero_beta(dataset):
    out = run_benchmark(base_config(
        dataset, wavelets=(Wavelet.CDF97, Wavelet.CDF97)))
    assert len(out.rows) == 2            # one per image, computed once
    assert len(out.records) == 2
    assert all(r.beta_c == 0.0 for r in out.records)


def test_benchmark_deterministic_across_jobs_and_cache(dataset, tmp_path):
    cache = str(tmp_path / "cache.jsonl")
    cfg1 = base_config(dataset, cache=cache)
    out1 = run_benchmark(cfg1)
    lines1 = rows_to_csv_lines(out1.rows)

    out2 = run_benchmark(base_config(dataset, jobs=2))
    assert rows_to_csv_lines(out2.rows) == lines1

    # third run is served from the cache and must be byte-identical
    assert os.path.exists(cache)
    out3 = run_benchmark(base_config(dataset, cache=cache))
    assert rows_to_csv_lines(out3.rows) == lines1
    assert out3.summary == out1.summary


def test_benchmark_baseline_is_last_selection(dataset):
    out = run_benchmark(base_config(
        dataset, wavelets=(Wavelet.CDF97, Wavelet.TERN2)))
    assert {r.family for r in out.records} == {Wavelet.CDF97}
    assert all(p.baseline == "tern2" for p in out.summary.pairs)


def test_ingest_gray_image(tmp_path, rng):
    path = str(tmp_path / "g.pgm")
    write_pnm(path, rng.integers(0, 256, size=(40, 40)))
    planes = ingest_image(path)
    assert planes.width == planes.height == 40
    assert np.max(np.abs(planes.cb)) < 1e-12
    assert np.max(np.abs(planes.cr)) < 1e-12


# ---------------------------------------------------------------------------
# command line entry points

def test_main_exit_codes(tmp_path, dataset):
    assert main(["bench", "run", "--dataset", str(tmp_path / "nope"),
                 "--targets", "0.9"]) == 3
    assert main(["bench", "run", "--dataset", dataset,
                 "--wavelets", "bogus", "--targets", "0.9"]) == 2
    assert main(["bench", "run", "--dataset", dataset,
                 "--targets", "2.0"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_main_bench_writes_reports(dataset, tmp_path, capsys):
    out_csv = str(tmp_path / "rows.csv")
    out_json = str(tmp_path / "summary.json")
    code = main(["bench", "run", "--dataset", dataset,
                 "--wavelets", "tern2,cdf97", "--targets", "0.95",
                 "--out", out_csv, "--summary", out_json, "--no-figure"])
    assert code == 0
    assert "result rows" in capsys.readouterr().out
    parsed = parse_results_csv(out_csv)
    assert {d["wavelet"] for d in parsed} == {"tern2", "cdf97"}
    with open(out_json, encoding="utf-8") as fh:
        summary = json.load(fh)
    (pair,) = summary["pairs"]
    assert pair["family"] == "tern2"
    assert pair["count"] == 2
    assert len(pair["beta_c"]) == 2


def test_main_figure_output(dataset, tmp_path):
    out_csv = str(tmp_path / "rows.csv")
    code = main(["bench", "run", "--dataset", dataset,
                 "--wavelets", "tern2,cdf97", "--targets", "0.95",
                 "--out", out_csv])
    assert code == 0
    fig = str(tmp_path / "rows_box.png")
    assert os.path.exists(fig)
    with open(fig, "rb") as fh:
        assert fh.read(8).startswith(b"\x89PNG")


def test_main_metric_self(dataset, capsys):
    first = os.path.join(dataset, sorted(os.listdir(dataset))[0])
    assert main(["metric", "--ref", first, "--test", first]) == 0
    assert capsys.readouterr().out.strip() == "1.000000"


def test_main_transform_round_trip(dataset, tmp_path, capsys):
    first = os.path.join(dataset, sorted(os.listdir(dataset))[0])
    dump = str(tmp_path / "y.twv")
    assert main(["transform", "--input", first, "--wavelet", "tern1",
                 "--out", dump]) == 0
    assert os.path.exists(dump)
    assert "round-trip error" in capsys.readouterr().out


def test_main_design_render(tmp_path, capsys):
    out = str(tmp_path / "g.csv")
    assert main(["design", "render", "--family", "tern2", "--channel", "g+",
                 "--iterations", "3", "--out", out]) == 0
    with open(out, encoding="utf-8") as fh:
        header = fh.readline().strip()
    assert header == "x,value"


def test_main_cost_table(capsys):
    assert main(["cost", "--n", "300", "--image-n", "81"]) == 0
    out = capsys.readouterr().out
    assert "tern1" in out and "cdf97" in out
