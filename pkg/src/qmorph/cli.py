"""Command-line entry point: ``qmorph <subcommand> ...``.

Histogram outcome labels are ``[result bit | Y | X]`` with Y and X written
most significant bit first.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import cost as costmod
from .core import RegisterLayout
from .morph import (
    HatMode,
    Threshold,
    build_binarization,
    build_dilation,
    build_pipeline,
    measured_qubits,
    pipeline_parts,
    result_register,
    segment,
)
from .neqr import GrayImage, image_set_parts, layout_for
from .netpbm import format_pbm, read_pgm
from .oracle import o_segment
from .qasm import export_qasm
from .sim import sample
from .units import (
    QCL,
    build_comparator,
    build_copy,
    build_cyclic_shift,
    build_qcsl,
    build_subtractor,
)

FORMAT_VERSION = 1
LABEL_ORDER = "result bit, then Y (MSB first), then X (MSB first)"


@dataclass
class RunConfig:
    mode: HatMode
    threshold: int
    backend: str = "ensemble"
    shots: int = 8192
    seed: int = 0
    input: Optional[str] = None
    output: Optional[str] = None
    histogram: Optional[str] = None
    cost: Optional[str] = None
    qasm: Optional[str] = None

    def check(self, img: GrayImage):
        Threshold(self.threshold, img.q)
        if self.shots < 1:
            raise ValueError("shots must be >= 1")


def _emit(text: str, path: Optional[str]):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def histogram_document(run, cfg: RunConfig) -> dict:
    doc = {
        "format": FORMAT_VERSION,
        "mode": run.mode.value,
        "threshold": run.threshold,
        "backend": run.backend,
        "result_register": result_register(run.mode),
        "measured_qubits": list(run.measured),
        "label_order": LABEL_ORDER,
        "exact": run.distribution,
    }
    if cfg.shots:
        doc["shots"] = cfg.shots
        doc["seed"] = cfg.seed
        doc["counts"] = sample(run.distribution, cfg.shots, cfg.seed)
    return doc


def cost_document(layout: RegisterLayout, mode, threshold: int, img: Optional[GrayImage] = None) -> dict:
    """Measured costs of every unit at this layout next to the published formulas."""
    paper = costmod.paper_table(layout.n, layout.q)
    skeleton = image_set_parts(layout, None)
    dil = costmod.count_parts(skeleton + [("dilate", build_dilation(layout))])
    measured = {
        "comparator": costmod.count(build_comparator(layout, "c_main", "d_up")).weighted_total,
        "subtractor": costmod.count(build_subtractor(layout, "c_main", "c_copy")).weighted_total,
        "cycle_shift": costmod.count(build_cyclic_shift(layout, "X", 1)).weighted_total,
        "copy": costmod.count(build_copy(layout, "c_main", "c_copy")).weighted_total,
        "qcs_qcl": costmod.count(build_qcsl(layout, "c_main", "d_up", QCL)).weighted_total,
        "dilation_erosion": dil.weighted_total,
        "binarization": costmod.count(
            build_binarization(layout, threshold, result_register(mode))
        ).weighted_total,
    }
    pipe = costmod.count_parts(pipeline_parts(layout, img, mode, threshold))
    paper_rows = paper.rows()
    return {
        "format": FORMAT_VERSION,
        "n": layout.n,
        "q": layout.q,
        "mode": HatMode.parse(mode).value,
        "threshold": threshold,
        "units": {
            k: {"measured": v, "published": paper_rows[k]} for k, v in measured.items()
        },
        "published_comparator_comparison": paper.comparator_comparison,
        "published_complexity": paper.complexity(),
        "pipeline": pipe.to_dict(),
        "pipeline_includes_oracle": img is not None,
    }


def _load(cfg: RunConfig) -> GrayImage:
    img = read_pgm(cfg.input)
    cfg.check(img)
    return img


def cmd_segment(cfg: RunConfig) -> int:
    img = _load(cfg)
    run = segment(img, cfg.mode, cfg.threshold, cfg.backend)
    _emit(format_pbm(run.binary), cfg.output)
    if cfg.histogram:
        _emit(_dumps(histogram_document(run, cfg)), cfg.histogram)
    if cfg.qasm:
        _emit(export_qasm(run.circuit, run.measured), cfg.qasm)
    if cfg.cost:
        _emit(_dumps(cost_document(run.layout, cfg.mode, cfg.threshold, img)), cfg.cost)
    return 0


def cmd_oracle(cfg: RunConfig) -> int:
    img = _load(cfg)
    _emit(format_pbm(o_segment(img, cfg.mode, cfg.threshold)), cfg.output)
    return 0


def cmd_compare(cfg: RunConfig) -> int:
    img = _load(cfg)
    run = segment(img, cfg.mode, cfg.threshold, cfg.backend)
    ref = o_segment(img, cfg.mode, cfg.threshold)
    if run.binary == ref:
        print(f"match: {img.side}x{img.side} {cfg.mode.value} T={cfg.threshold}")
        return 0
    for y, x in np.argwhere(run.binary.pixels != ref.pixels):
        print(f"({y}, {x}): circuit={run.binary[y, x]} oracle={ref[y, x]}")
    return 2


def cmd_histogram(cfg: RunConfig) -> int:
    img = _load(cfg)
    run = segment(img, cfg.mode, cfg.threshold, cfg.backend)
    _emit(_dumps(histogram_document(run, cfg)), cfg.output)
    return 0


def cmd_cost(cfg: RunConfig, n: Optional[int], q: Optional[int]) -> int:
    if cfg.input:
        img = _load(cfg)
        layout = layout_for(img)
    else:
        if n is None or q is None:
            raise ValueError("cost needs an input image or both --n and --q")
        img = None
        layout = RegisterLayout(n, q)
        Threshold(cfg.threshold, q)
    _emit(_dumps(cost_document(layout, cfg.mode, cfg.threshold, img)), cfg.output)
    return 0


def cmd_export_qasm(cfg: RunConfig) -> int:
    img = _load(cfg)
    layout = layout_for(img)
    circuit = build_pipeline(layout, img, cfg.mode, cfg.threshold)
    _emit(export_qasm(circuit, measured_qubits(layout, cfg.mode)), cfg.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmorph",
        description="Grayscale-morphology segmentation of NEQR images with reversible circuits.",
        epilog=f"Histogram labels: {LABEL_ORDER}.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("input", help="PGM image (P2 or P5), square with power-of-two side")
        p.add_argument("--mode", default="bottomhat", choices=["bottomhat", "tophat"])
        p.add_argument("--threshold", type=int, default=1)
        p.add_argument("--backend", default="ensemble", choices=["ensemble", "dense"])
        p.add_argument("-o", "--output", help="output file (default: stdout)")

    p = sub.add_parser("segment", help="run the segmentation circuit and write a PBM")
    common(p)
    p.add_argument("--shots", type=int, default=8192)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--histogram", help="write histogram JSON here")
    p.add_argument("--qasm", help="write OpenQASM 2.0 here")
    p.add_argument("--cost", help="write cost report JSON here")

    p = sub.add_parser("oracle", help="classical reference segmentation")
    common(p)

    p = sub.add_parser("compare", help="circuit vs oracle; exit 2 on any mismatch")
    common(p)

    p = sub.add_parser("histogram", help="exact and sampled outcome distribution as JSON")
    common(p)
    p.add_argument("--shots", type=int, default=8192)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("cost", help="measured gate costs next to the published formulas")
    p.add_argument("input", nargs="?", help="optional PGM; without it --n and --q are used")
    p.add_argument("--n", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--mode", default="bottomhat", choices=["bottomhat", "tophat"])
    p.add_argument("--threshold", type=int, default=1)
    p.add_argument("-o", "--output")

    p = sub.add_parser("export-qasm", help="write the full pipeline as OpenQASM 2.0")
    common(p)
    return parser


def cli_main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        mode=HatMode.parse(args.mode),
        threshold=args.threshold,
        backend=getattr(args, "backend", "ensemble"),
        shots=getattr(args, "shots", 8192),
        seed=getattr(args, "seed", 0),
        input=args.input,
        output=args.output,
        histogram=getattr(args, "histogram", None),
        cost=getattr(args, "cost", None),
        qasm=getattr(args, "qasm", None),
    )
    handlers = {
        "segment": cmd_segment,
        "oracle": cmd_oracle,
        "compare": cmd_compare,
        "histogram": cmd_histogram,
        "export-qasm": cmd_export_qasm,
    }
    try:
        if args.command == "cost":
            return cmd_cost(cfg, args.n, args.q)
        return handlers[args.command](cfg)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"qmorph {args.command}: error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
