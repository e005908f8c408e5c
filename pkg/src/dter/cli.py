"""Command-line front end: ``dter conceal``, ``dter compare`` and ``dter pattern``.

Exit status: 0 success, 2 usage error, 3 I/O error, 4 internal invariant violation.
Set ``DTER_LOG_LEVEL`` (e.g. DEBUG) for progress logging on stderr.
"""
from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

from .core import ConfigError, DterError, ValidationError
from .loss import PatternConfig, apply_loss, checkerboard_pattern
from .metrics import ConcealmentReport, PsnrMode, mean_gain
from .pipeline import Algorithm, ContextMode, build_report, conceal_sequence
from .refine import RefinementParams
from .temporal import Metric, SearchParams
from .video_io import read_loss_map, read_yuv420, write_loss_map, write_report_csv, write_yuv420

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_INTERNAL = 0, 2, 3, 4

log = logging.getLogger("dter")


class UsageError(DterError):
    pass


@dataclass(frozen=True)
class RunConfig:
    input: Path
    width: int
    height: int
    max_frames: int = 148
    algorithm: Algorithm = Algorithm.DTER
    pattern: PatternConfig | None = field(default_factory=PatternConfig)
    loss_map: Path | None = None
    search: SearchParams = SearchParams()
    refine: RefinementParams = RefinementParams()
    psnr_mode: PsnrMode = PsnrMode.MEAN_OF_FRAMES
    out_yuv: Path | None = None
    out_csv: Path | None = None
    context: ContextMode = ContextMode.SEQUENTIAL
    fill: int = 0

    def __post_init__(self):
        object.__setattr__(self, "input", Path(self.input))
        object.__setattr__(self, "algorithm", Algorithm(self.algorithm))
        object.__setattr__(self, "psnr_mode", PsnrMode(self.psnr_mode))
        object.__setattr__(self, "context", ContextMode(self.context))
        if (self.pattern is None) == (self.loss_map is None):
            raise UsageError("give exactly one of a checkerboard pattern or a loss-map file")
        if self.max_frames < 1:
            raise UsageError("max_frames must be >= 1")

    @property
    def label(self) -> str:
        return Path(self.input).stem


def load_maps(cfg: RunConfig, frame_count: int):
    if cfg.loss_map is not None:
        return read_loss_map(cfg.loss_map, cfg.width, cfg.height)
    return checkerboard_pattern(cfg.width, cfg.height, frame_count, cfg.pattern)


def run_conceal(cfg: RunConfig) -> ConcealmentReport:
    """Damage, conceal and score one sequence; writes the requested outputs."""
    orig = read_yuv420(cfg.input, cfg.width, cfg.height, cfg.max_frames)
    maps = [m for m in load_maps(cfg, orig.frame_count) if m.frame_index < orig.frame_count]
    damaged = apply_loss(orig, maps, cfg.fill)
    log.info("%s: %d frames, algorithm %s", cfg.input, orig.frame_count, cfg.algorithm.value)
    concealed, diags = conceal_sequence(damaged, maps, cfg.algorithm, cfg.search, cfg.refine, cfg.context)
    report = build_report(orig, concealed, diags, cfg.algorithm, cfg.psnr_mode, cfg.label)
    if cfg.out_yuv is not None:
        write_yuv420(concealed, cfg.input, cfg.out_yuv, truncate_source=True)
    if cfg.out_csv is not None:
        write_report_csv(report, cfg.out_csv)
    return report


def run_compare(cfgs: list[RunConfig], baseline: Algorithm | str, out_csv=None) -> list[dict]:
    """Run every config and tabulate sequence PSNR and gain over ``baseline``.

    Configs are grouped by input; each group must contain the baseline.
    """
    baseline = Algorithm(baseline)
    reports: dict[str, dict[Algorithm, ConcealmentReport]] = {}
    for cfg in cfgs:
        reports.setdefault(cfg.label, {})
    for label, algs in reports.items():
        if baseline not in {c.algorithm for c in cfgs if c.label == label}:
            raise UsageError(f"no {baseline.value} baseline run for {label}")
    for cfg in cfgs:
        reports[cfg.label][cfg.algorithm] = run_conceal(replace(cfg, out_csv=None, out_yuv=None))

    rows = []
    for label, algs in reports.items():
        base = algs[baseline].sequence_psnr_db
        for alg, rep in algs.items():
            rows.append(
                {
                    "sequence": label,
                    "algorithm": alg.value,
                    "psnr_db": f"{rep.sequence_psnr_db:.6f}",
                    "gain_db": f"{rep.sequence_psnr_db - base:.6f}",
                }
            )
    algorithms = []
    for cfg in cfgs:
        if cfg.algorithm not in algorithms:
            algorithms.append(cfg.algorithm)
    for alg in algorithms:
        triples = [(lab, a[baseline], a[alg]) for lab, a in reports.items() if alg in a]
        rows.append(
            {"sequence": "mean", "algorithm": alg.value, "psnr_db": "",
             "gain_db": f"{mean_gain(triples):.6f}"}
        )
    if out_csv is not None:
        with open(out_csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, ["sequence", "algorithm", "psnr_db", "gain_db"], lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
    return rows


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--width", type=int, default=352)
    p.add_argument("--height", type=int, default=288)
    p.add_argument("--max-frames", type=int, default=148)
    g = p.add_argument_group("loss pattern (mutually exclusive with --loss-map)")
    g.add_argument("--block-size", type=int)
    g.add_argument("--first-lossy-frame", type=int)
    g.add_argument("--phase", type=int, choices=(0, 1))
    g.add_argument("--alternate-phase", action="store_true", default=None)
    g.add_argument("--loss-map", type=Path)
    g.add_argument("--fill", type=int, default=0, help="value written into lost samples")
    s = p.add_argument_group("motion search")
    s.add_argument("--search-range", type=int, default=16)
    s.add_argument("--band-width", type=int, default=2)
    s.add_argument("--metric", choices=[m.value for m in Metric], default="ssd")
    r = p.add_argument_group("refinement")
    r.add_argument("--d-m", type=int, default=6, help="patch half-width")
    r.add_argument("--eta", type=float, default=5.0)
    r.add_argument("--border", type=int, default=12, help="width of the known border around a block")
    r.add_argument("--d-width", type=int, default=8, help="width of the test area")
    p.add_argument("--psnr-mode", choices=[m.value for m in PsnrMode], default="mean_of_frames")
    p.add_argument("--context", choices=[m.value for m in ContextMode], default="sequential")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dter", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("conceal", help="damage, conceal and score one sequence")
    c.add_argument("input", type=Path, help="raw I420 .yuv file")
    c.add_argument("--algorithm", choices=[a.value for a in Algorithm], default="dter")
    c.add_argument("--out-yuv", type=Path)
    c.add_argument("--out-csv", type=Path)
    _add_common(c)

    m = sub.add_parser("compare", help="score several algorithms against a baseline")
    m.add_argument("inputs", type=Path, nargs="+")
    m.add_argument("--algorithms", default="dmve,dter")
    m.add_argument("--baseline", default="dmve")
    m.add_argument("--out-csv", type=Path)
    _add_common(m)

    t = sub.add_parser("pattern", help="write the checkerboard loss map as text")
    t.add_argument("output", type=Path)
    t.add_argument("--width", type=int, default=352)
    t.add_argument("--height", type=int, default=288)
    t.add_argument("--frames", type=int, default=148)
    t.add_argument("--block-size", type=int, default=16)
    t.add_argument("--first-lossy-frame", type=int, default=1)
    t.add_argument("--phase", type=int, choices=(0, 1), default=0)
    t.add_argument("--alternate-phase", action="store_true")
    return parser


def config_from_args(args, input_path: Path, algorithm: str, out_yuv=None, out_csv=None) -> RunConfig:
    pattern_flags = (args.block_size, args.first_lossy_frame, args.phase, args.alternate_phase)
    if args.loss_map is not None:
        if any(v is not None for v in pattern_flags):
            raise UsageError("pattern flags cannot be combined with --loss-map")
        pattern = None
    else:
        pattern = PatternConfig(
            block_size=16 if args.block_size is None else args.block_size,
            first_lossy_frame=1 if args.first_lossy_frame is None else args.first_lossy_frame,
            phase=0 if args.phase is None else args.phase,
            per_frame_phase_alternation=bool(args.alternate_phase),
        )
    return RunConfig(
        input=input_path,
        width=args.width,
        height=args.height,
        max_frames=args.max_frames,
        algorithm=Algorithm(algorithm),
        pattern=pattern,
        loss_map=args.loss_map,
        search=SearchParams(args.search_range, args.band_width, args.metric),
        refine=RefinementParams(args.d_m, args.eta, args.border, args.d_width),
        psnr_mode=PsnrMode(args.psnr_mode),
        out_yuv=out_yuv,
        out_csv=out_csv,
        context=ContextMode(args.context),
        fill=args.fill,
    )


def _print_report(report: ConcealmentReport):
    print(f"{report.label}\t{report.algorithm}\t{report.sequence_psnr_db:.4f} dB ({report.psnr_mode.value})")


def main(argv=None) -> int:
    logging.basicConfig(
        level=os.environ.get("DTER_LOG_LEVEL", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "pattern":
            cfg = PatternConfig(args.block_size, args.first_lossy_frame, args.phase, args.alternate_phase)
            write_loss_map(checkerboard_pattern(args.width, args.height, args.frames, cfg), args.output)
        elif args.command == "conceal":
            cfg = config_from_args(args, args.input, args.algorithm, args.out_yuv, args.out_csv)
            _print_report(run_conceal(cfg))
        else:
            algs = [a.strip() for a in args.algorithms.split(",") if a.strip()]
            try:
                cfgs = [config_from_args(args, path, a) for path in args.inputs for a in algs]
            except ValueError as exc:
                raise UsageError(str(exc)) from None
            rows = run_compare(cfgs, args.baseline, args.out_csv)
            for row in rows:
                print("\t".join(row.values()))
    except (UsageError, ConfigError, ValidationError, ValueError) as exc:
        print(f"dter: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"dter: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (DterError, AssertionError) as exc:
        print(f"dter: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
