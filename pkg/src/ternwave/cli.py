"""Command-line harness: benchmark runs, transforms, metrics, cost tables.

The benchmark crosses every dataset image with the selected wavelets and
quality targets, finds the certified-minimal coefficient counts, pairs each
selected wavelet against the baseline (the last selection) to produce the
relative-performance statistic, and emits a CSV of rows, a JSON summary with
quartiles and 1.5*IQR outliers, a box-plot figure, and optionally a
gnuplot-ready box data file.  Outputs are byte-stable: rows are sorted,
floats use 9 significant digits, and results are independent of --jobs.

Exit codes: 0 success, 2 configuration error, 3 dataset/IO error.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import hashlib
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from .common import (
    DecodeError,
    InvalidArgumentError,
    TernwaveError,
    TooShortError,
    UnattainableQualityError,
    Wavelet,
)
from .compression import (
    CHANNEL_MODES,
    CSV_FIELDS,
    SCOPES,
    BenchmarkRecord,
    CoefficientScan,
    CompressionResult,
    min_coeffs_for_quality,
)
from .design import default_constraints, render_function, solve_angles, verify_angles
from .image2d import forward2d, inverse2d, rgb_to_ycbcr, spec_for
from .metrics import ms_ssim
from .pixmaps import read_image

_IMAGE_EXTS = (".ppm", ".pgm", ".pnm", ".png")
_CACHE_VERSION = 1


# ---------------------------------------------------------------------------
# configuration and result containers

@dataclass(frozen=True)
class RunConfig:
    dataset: str
    wavelets: tuple[Wavelet, ...]        # last entry is the baseline
    targets: tuple[float, ...]
    threshold_scope: str = "global"
    msssim_channels: str = "y"
    jobs: int = 1
    out: str | None = None
    summary: str | None = None
    cache: str | None = None
    figure: str | None = None            # default: next to --out
    no_figure: bool = False
    gnuplot: str | None = None

    def __post_init__(self):
        if not self.wavelets:
            raise InvalidArgumentError("select at least one wavelet")
        if not self.targets:
            raise InvalidArgumentError("select at least one quality target")
        for t in self.targets:
            if not 0.0 < t < 1.0:
                raise InvalidArgumentError(f"target {t} outside (0, 1)")
        if self.threshold_scope not in SCOPES:
            raise InvalidArgumentError(f"unknown scope {self.threshold_scope!r}")
        if self.msssim_channels not in CHANNEL_MODES:
            raise InvalidArgumentError(
                f"unknown channel mode {self.msssim_channels!r}")
        if self.jobs < 1:
            raise InvalidArgumentError("jobs must be >= 1")


@dataclass(frozen=True)
class ResultRow:
    image_id: str
    width: int
    height: int
    wavelet: Wavelet
    target: float
    result: CompressionResult


@dataclass(frozen=True)
class PairSummary:
    family: str
    baseline: str
    target: float
    count: int
    median: float
    q25: float
    q75: float
    minimum: float
    maximum: float
    outliers: tuple[tuple[str, float], ...]
    values: tuple[tuple[str, float], ...]


@dataclass(frozen=True)
class SummaryStats:
    pairs: tuple[PairSummary, ...]


@dataclass(frozen=True)
class BenchmarkOutput:
    rows: tuple[ResultRow, ...]
    records: tuple[BenchmarkRecord, ...]
    summary: SummaryStats


# ---------------------------------------------------------------------------
# benchmark protocol

def ingest_image(path: str):
    """Decode and convert to normalized Y/Cb/Cr planes."""
    arr, depth = read_image(path)
    if arr.ndim == 2:
        arr = np.stack([arr, arr, arr], axis=-1)
    return rgb_to_ycbcr(arr, depth=depth)


def _unit_key(file_sha: str, wavelet: Wavelet, target: float,
              scope: str, channels: str) -> str:
    blob = f"{file_sha}:{wavelet.value}:{target!r}:{scope}:{channels}:v{_CACHE_VERSION}"
    return hashlib.sha256(blob.encode()).hexdigest()


def _row_dict(image_id: str, width: int, height: int,
              wavelet: Wavelet, res: CompressionResult) -> dict:
    return {
        "image_id": image_id, "width": width, "height": height,
        "wavelet": wavelet.value, "target": res.target, "m_min": res.m_min,
        "total_coeffs": res.total_coeffs, "achieved": res.achieved,
        "achieved_below": res.achieved_below, "levels": res.levels,
        "flags": list(res.flags),
        "scan_window": [[int(m), float(q)] for m, q in res.scan_window],
    }


def _row_from_dict(d: dict) -> ResultRow:
    res = CompressionResult(
        wavelet=Wavelet(d["wavelet"]), target=d["target"], m_min=d["m_min"],
        total_coeffs=d["total_coeffs"], achieved=d["achieved"],
        achieved_below=d["achieved_below"], levels=d["levels"],
        flags=tuple(d["flags"]),
        scan_window=tuple((int(m), float(q)) for m, q in d["scan_window"]))
    return ResultRow(d["image_id"], d["width"], d["height"],
                     Wavelet(d["wavelet"]), d["target"], res)


def _run_unit(payload: tuple) -> dict:
    """Worker: one (image, wavelet) pair, all uncached targets."""
    path, image_id, wavelet_value, targets, scope, channels = payload
    wavelet = Wavelet(wavelet_value)
    try:
        planes = ingest_image(path)
        state = CoefficientScan(planes, wavelet, scope=scope,
                                channel_mode=channels)
        rows = []
        for target in targets:
            res = min_coeffs_for_quality(planes, wavelet, target, state=state)
            rows.append(_row_dict(image_id, planes.width, planes.height,
                                  wavelet, res))
        return {"ok": True, "rows": rows}
    except (DecodeError, TooShortError, UnattainableQualityError) as exc:
        return {"ok": False, "image_id": image_id, "error": str(exc)}


def _load_cache(path: str | None) -> dict[str, dict]:
    cache: dict[str, dict] = {}
    if path and os.path.exists(path):
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    entry = json.loads(line)
                    cache[entry["key"]] = entry["row"]
    return cache


def _store_cache(path: str | None, cache: dict[str, dict]) -> None:
    if not path:
        return
    with open(path, "w", encoding="utf-8") as fh:
        for key in sorted(cache):
            fh.write(json.dumps({"key": key, "row": cache[key]},
                                sort_keys=True) + "\n")


def _dataset_files(dataset: str) -> list[str]:
    if not os.path.isdir(dataset):
        raise DecodeError(f"dataset directory not found: {dataset}")
    files = sorted(
        os.path.join(dataset, f) for f in os.listdir(dataset)
        if os.path.splitext(f)[1].lower() in _IMAGE_EXTS)
    if not files:
        raise DecodeError(f"no images under {dataset}")
    return files


def build_summary(records: tuple[BenchmarkRecord, ...],
                  baseline: Wavelet) -> SummaryStats:
    """Quartiles and 1.5*IQR outliers of beta_c per (family, target)."""
    groups: dict[tuple[str, float], list[BenchmarkRecord]] = {}
    for rec in records:
        groups.setdefault((rec.family.value, rec.target), []).append(rec)
    pairs = []
    for (family, target) in sorted(groups):
        recs = sorted(groups[(family, target)], key=lambda r: r.image_id)
        vals = np.array([r.beta_c for r in recs])
        q25, med, q75 = np.percentile(vals, [25.0, 50.0, 75.0])
        iqr = q75 - q25
        lo_fence, hi_fence = q25 - 1.5 * iqr, q75 + 1.5 * iqr
        outliers = tuple((r.image_id, r.beta_c) for r in recs
                         if not lo_fence <= r.beta_c <= hi_fence)
        pairs.append(PairSummary(
            family=family, baseline=baseline.value, target=target,
            count=len(recs), median=float(med), q25=float(q25),
            q75=float(q75), minimum=float(vals.min()),
            maximum=float(vals.max()), outliers=outliers,
            values=tuple((r.image_id, r.beta_c) for r in recs)))
    return SummaryStats(pairs=tuple(pairs))


def run_benchmark(config: RunConfig) -> BenchmarkOutput:
    """Execute the full protocol; deterministic for a fixed config+dataset."""
    files = _dataset_files(config.dataset)
    cache = _load_cache(config.cache)

    images = []          # (path, image_id, sha)
    for path in files:
        with open(path, "rb") as fh:
            sha = hashlib.sha256(fh.read()).hexdigest()
        images.append((path, os.path.splitext(os.path.basename(path))[0], sha))

    unique_wavelets = list(dict.fromkeys(config.wavelets))
    done: dict[tuple[str, str, float], dict] = {}
    units = []
    for path, image_id, sha in images:
        for wavelet in unique_wavelets:
            missing = []
            for target in config.targets:
                key = _unit_key(sha, wavelet, target, config.threshold_scope,
                                config.msssim_channels)
                row = cache.get(key)
                if row is not None:
                    done[(image_id, wavelet.value, target)] = row
                else:
                    missing.append(target)
            if missing:
                units.append((path, image_id, wavelet.value, tuple(missing),
                              config.threshold_scope, config.msssim_channels))

    if units and config.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=config.jobs) as ex:
            outcomes = list(ex.map(_run_unit, units))
    else:
        outcomes = [_run_unit(u) for u in units]

    failed_images = set()
    for unit, outcome in zip(units, outcomes):
        if not outcome["ok"]:
            failed_images.add(outcome["image_id"])
            print(f"warning: skipping {outcome['image_id']}: {outcome['error']}",
                  file=sys.stderr)
            continue
        for row in outcome["rows"]:
            done[(row["image_id"], row["wavelet"], row["target"])] = row

    sha_by_id = {image_id: sha for _, image_id, sha in images}
    for (image_id, wavelet_value, target), row in done.items():
        key = _unit_key(sha_by_id[image_id], Wavelet(wavelet_value), target,
                        config.threshold_scope, config.msssim_channels)
        cache[key] = row
    _store_cache(config.cache, cache)

    rows = tuple(sorted((_row_from_dict(d) for d in done.values()),
                        key=lambda r: (r.image_id, r.wavelet.value, r.target)))
    if not rows:
        raise DecodeError("benchmark produced no results")

    baseline = config.wavelets[-1]
    records = []
    for _, image_id, _ in images:
        if image_id in failed_images:
            continue
        for target in config.targets:
            base_row = done.get((image_id, baseline.value, target))
            if base_row is None:
                continue
            for family in config.wavelets[:-1]:
                fam_row = done.get((image_id, family.value, target))
                if fam_row is not None:
                    records.append(BenchmarkRecord.pair(
                        image_id, family, target,
                        fam_row["m_min"], base_row["m_min"]))
    records = tuple(sorted(records,
                           key=lambda r: (r.image_id, r.family.value, r.target)))
    return BenchmarkOutput(rows=rows, records=records,
                           summary=build_summary(records, baseline))


# ---------------------------------------------------------------------------
# report emission

def _fmt(value: float) -> str:
    return f"{value:.9g}"


def rows_to_csv_lines(rows: tuple[ResultRow, ...]) -> list[str]:
    lines = [",".join(CSV_FIELDS)]
    for r in rows:
        lines.append(",".join([
            r.image_id, str(r.width), str(r.height), r.wavelet.value,
            _fmt(r.target), str(r.result.m_min), str(r.result.total_coeffs),
            _fmt(r.result.achieved), ";".join(r.result.flags)]))
    return lines


def parse_results_csv(path: str) -> list[dict]:
    """Read a results CSV back into typed row dicts."""
    with open(path, encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines or lines[0] != ",".join(CSV_FIELDS):
        raise DecodeError(f"{path}: unexpected CSV header")
    out = []
    for ln in lines[1:]:
        parts = ln.split(",")
        out.append({
            "image_id": parts[0], "width": int(parts[1]),
            "height": int(parts[2]), "wavelet": parts[3],
            "target": float(parts[4]), "m_min": int(parts[5]),
            "total_coeffs": int(parts[6]), "achieved_msssim": float(parts[7]),
            "flags": tuple(p for p in parts[8].split(";") if p),
        })
    return out


def _summary_json(summary: SummaryStats) -> str:
    payload = {"pairs": [{
        "family": p.family, "baseline": p.baseline, "target": p.target,
        "count": p.count, "median": p.median, "q25": p.q25, "q75": p.q75,
        "min": p.minimum, "max": p.maximum,
        "outliers": [{"image_id": i, "beta_c": v} for i, v in p.outliers],
        "beta_c": [{"image_id": i, "beta_c": v} for i, v in p.values],
    } for p in summary.pairs]}
    return json.dumps(payload, indent=2) + "\n"


def _gnuplot_box_data(summary: SummaryStats) -> str:
    lines = ["# idx label min q25 median q75 max n"]
    for i, p in enumerate(summary.pairs, start=1):
        label = f"{p.family}@{_fmt(p.target)}"
        lines.append(" ".join([
            str(i), label, _fmt(p.minimum), _fmt(p.q25), _fmt(p.median),
            _fmt(p.q75), _fmt(p.maximum), str(p.count)]))
    return "\n".join(lines) + "\n"


def _render_figure(summary: SummaryStats, path: str) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    labels = [f"{p.family}@{p.target:g}" for p in summary.pairs]
    data = [[v for _, v in p.values] for p in summary.pairs]
    fig, ax = plt.subplots(figsize=(1.8 + 1.2 * len(labels), 4.2))
    ax.boxplot(data, whis=1.5)
    ax.set_xticklabels(labels, rotation=20)
    ax.axhline(0.0, color="gray", linewidth=0.8)
    ax.set_ylabel("beta_c = 1 - m / m_baseline")
    ax.set_title("coefficient counts at fixed MS-SSIM")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def emit_reports(output: BenchmarkOutput, config: RunConfig) -> list[str]:
    """Write the configured report files; returns the paths written."""
    written = []
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(rows_to_csv_lines(output.rows)) + "\n")
        written.append(config.out)
    if config.summary:
        with open(config.summary, "w", encoding="utf-8") as fh:
            fh.write(_summary_json(output.summary))
        written.append(config.summary)
    if config.gnuplot:
        with open(config.gnuplot, "w", encoding="utf-8") as fh:
            fh.write(_gnuplot_box_data(output.summary))
        written.append(config.gnuplot)
    figure = config.figure
    if figure is None and config.out and not config.no_figure:
        figure = os.path.splitext(config.out)[0] + "_box.png"
    if figure and not config.no_figure and output.summary.pairs:
        _render_figure(output.summary, figure)
        written.append(figure)
    return written


# ---------------------------------------------------------------------------
# subcommands

def _parse_wavelets(text: str) -> tuple[Wavelet, ...]:
    names = [w.strip() for w in text.split(",") if w.strip()]
    try:
        return tuple(Wavelet(n) for n in names)
    except ValueError as exc:
        raise InvalidArgumentError(
            f"unknown wavelet in {text!r} (choose from "
            f"{', '.join(w.value for w in Wavelet)})") from exc


def _parse_targets(text: str) -> tuple[float, ...]:
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise InvalidArgumentError(f"bad target list {text!r}") from exc
    return tuple(dict.fromkeys(vals))


def _cmd_bench_run(args) -> int:
    config = RunConfig(
        dataset=args.dataset, wavelets=_parse_wavelets(args.wavelets),
        targets=_parse_targets(args.targets),
        threshold_scope=args.threshold_scope,
        msssim_channels=args.msssim_channels, jobs=args.jobs,
        out=args.out, summary=args.summary, cache=args.cache,
        figure=args.figure, no_figure=args.no_figure, gnuplot=args.gnuplot)
    output = run_benchmark(config)
    written = emit_reports(output, config)
    print(f"{len(output.rows)} result rows, {len(output.records)} comparisons")
    for p in output.summary.pairs:
        print(f"{p.family} vs {p.baseline} @ {p.target:g}: "
              f"median {p.median:+.4f}  iqr [{p.q25:+.4f}, {p.q75:+.4f}]  "
              f"range [{p.minimum:+.4f}, {p.maximum:+.4f}]  n={p.count}  "
              f"outliers={len(p.outliers)}")
    for path in written:
        print(f"wrote {path}")
    return 0


def _cmd_transform(args) -> int:
    from .dumps import dump_pyramid

    planes = ingest_image(args.input)
    plane = getattr(planes, args.channel)
    wavelet = Wavelet(args.wavelet)
    pyramid = forward2d(plane, wavelet, max_levels=args.levels)
    if args.out:
        dump_pyramid(pyramid, args.out)
    err = float(np.max(np.abs(inverse2d(pyramid) - plane)))
    print(f"{args.input}: {planes.width}x{planes.height} {args.channel} "
          f"-> {pyramid.levels} levels, {pyramid.total_coeffs} coefficients, "
          f"round-trip error {err:.3e}")
    if args.out:
        print(f"wrote {args.out}")
    return 0


def _cmd_metric(args) -> int:
    ref = ingest_image(args.ref)
    test = ingest_image(args.test)
    if (ref.width, ref.height) != (test.width, test.height):
        raise InvalidArgumentError(
            f"size mismatch {ref.width}x{ref.height} vs {test.width}x{test.height}")
    if args.msssim_channels == "y":
        score = ms_ssim(ref.y, test.y)
    else:
        parts = [ms_ssim(ref.y, test.y),
                 ms_ssim(ref.cb + 0.5, test.cb + 0.5),
                 ms_ssim(ref.cr + 0.5, test.cr + 0.5)]
        score = float(np.mean(parts))
    print(f"{score:.6f}")
    return 0


def _cmd_cost(args) -> int:
    from .costmeter import instrument_transform, mu_image_total

    families = _parse_wavelets(args.families)
    rng = np.random.default_rng(0)
    signal = rng.standard_normal(args.n)
    print(f"{'family':8} {'n':>8} {'analytic':>12} {'instrumented':>12} "
          f"{'envelope':>9} {'check':>10}")
    for family in families:
        rep = instrument_transform(signal, family)
        print(f"{family.value:8} {rep.n:>8} {rep.mu_analytic:>12} "
              f"{rep.mu_instrumented:>12} {rep.envelope:>9} "
              f"{rep.rescale_check:>10.2e}")
    print()
    print(f"{'family':8} {'image':>10} {'levels':>7} {'total':>16} "
          f"{'ratio':>9} {'asymptote':>10}")
    for family in families:
        tot = mu_image_total(family, args.image_n)
        mark = "~" if tot.near_asymptote else "!"
        print(f"{family.value:8} {tot.n:>7}x{tot.n:<4} {tot.levels:>5} "
              f"{tot.count:>16} {tot.ratio:>9.4f} {mark}{tot.asymptote:<9}")
    return 0


def _cmd_design_verify(args) -> int:
    spec = spec_for(Wavelet(args.family))
    report = verify_angles(spec, default_constraints(spec.cascade))
    for entry in report.entries:
        note = " (symmetry-trivial)" if entry.trivial else ""
        print(f"{entry.constraint.label():30} {entry.value:+.3e}{note}")
    print(f"max residual: {report.max_residual:.3e}")
    return 0


def _cmd_design_solve(args) -> int:
    spec = spec_for(Wavelet(args.family))
    if args.perturb:
        rng = np.random.default_rng(args.seed)
        init = tuple(t + rng.uniform(-args.perturb, args.perturb)
                     for t in spec.angles)
    else:
        init = spec.angles
    result = solve_angles(spec.depth, default_constraints(spec.cascade),
                          init, tol=args.tol)
    print("angles: " + ", ".join(f"{t:+.9f}" for t in result.angles))
    print(f"max residual {result.max_residual:.3e} "
          f"after {result.iterations} iterations")
    return 0


def _cmd_design_render(args) -> int:
    spec = spec_for(Wavelet(args.family))
    x, values = render_function(spec, args.channel, args.iterations)
    lines = ["x,value"]
    lines += [f"{_fmt(xi)},{_fmt(vi)}" for xi, vi in zip(x, values)]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.out} ({len(values)} samples)")
    else:
        sys.stdout.write(text)
    return 0


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ternwave",
                                description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    bench = sub.add_parser("bench", help="benchmark protocol")
    bench_sub = bench.add_subparsers(dest="bench_command", required=True)
    run = bench_sub.add_parser("run", help="run the compression benchmark")
    run.add_argument("--dataset", required=True)
    run.add_argument("--wavelets", default="tern1,tern2,cdf97",
                     help="comma list; last entry is the baseline")
    run.add_argument("--targets", default="0.99")
    run.add_argument("--threshold-scope", default="global", choices=SCOPES)
    run.add_argument("--msssim-channels", default="y", choices=CHANNEL_MODES)
    run.add_argument("--jobs", type=int, default=1)
    run.add_argument("--out", help="results CSV path")
    run.add_argument("--summary", help="summary JSON path")
    run.add_argument("--cache", help="JSONL result cache path")
    run.add_argument("--figure", help="box-plot PNG path")
    run.add_argument("--no-figure", action="store_true")
    run.add_argument("--gnuplot", help="box-plot data file for gnuplot")
    run.set_defaults(func=_cmd_bench_run)

    tr = sub.add_parser("transform", help="transform one image plane")
    tr.add_argument("--input", required=True)
    tr.add_argument("--wavelet", default="tern1",
                    choices=[w.value for w in Wavelet])
    tr.add_argument("--channel", default="y", choices=("y", "cb", "cr"))
    tr.add_argument("--levels", type=int, default=None)
    tr.add_argument("--out", help="coefficient dump path")
    tr.set_defaults(func=_cmd_transform)

    me = sub.add_parser("metric", help="MS-SSIM between two images")
    me.add_argument("--ref", required=True)
    me.add_argument("--test", required=True)
    me.add_argument("--msssim-channels", default="y", choices=CHANNEL_MODES)
    me.set_defaults(func=_cmd_metric)

    co = sub.add_parser("cost", help="multiplication-count table")
    co.add_argument("--n", type=int, default=3000)
    co.add_argument("--image-n", type=int, default=1024)
    co.add_argument("--families", default="tern1,tern2,cdf97")
    co.set_defaults(func=_cmd_cost)

    de = sub.add_parser("design", help="angle design tools")
    de_sub = de.add_subparsers(dest="design_command", required=True)
    ve = de_sub.add_parser("verify", help="moment residual table")
    ve.add_argument("--family", default="tern1",
                    choices=("tern1", "tern2"))
    ve.set_defaults(func=_cmd_design_verify)
    so = de_sub.add_parser("solve", help="re-solve the design angles")
    so.add_argument("--family", default="tern1", choices=("tern1", "tern2"))
    so.add_argument("--perturb", type=float, default=0.0)
    so.add_argument("--seed", type=int, default=0)
    so.add_argument("--tol", type=float, default=1e-10)
    so.set_defaults(func=_cmd_design_solve)
    re = de_sub.add_parser("render", help="cascade-rendered function samples")
    re.add_argument("--family", default="tern1", choices=("tern1", "tern2"))
    re.add_argument("--channel", default="h+", help="h+, g+ or g-")
    re.add_argument("--iterations", type=int, default=5)
    re.add_argument("--out")
    re.set_defaults(func=_cmd_design_render)

    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except (DecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (InvalidArgumentError,) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TernwaveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
