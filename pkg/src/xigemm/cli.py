"""Command-line harness.

    xigemm precision --size 256 --dist kar --th 0.5 --out prec.csv
    xigemm density   --dist uniform normal --out density.md
    xigemm calibrate --size 512 --out xigemm.cfg
    xigemm timing    --size 128 512 1024
    xigemm qr        --bits 4 8 --out table.md

Exit status: 0 on success, 2 on bad usage, 1 when a run fails.
"""
import argparse
import logging
import sys

from . import harness
from .calibrate import calibrate_eta
from .config import read_config, write_config
from .gemm import XigemmConfig

log = logging.getLogger("xigemm")

DIST_CHOICES = ("uniform", "normal", "esp", "poison", "kar")


def _positive(kind):
    def parse(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
        if not v > 0:
            raise argparse.ArgumentTypeError(f"must be > 0: {text!r}")
        return v
    return parse


def _seed(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer: {text!r}") from None
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def _eta(text):
    v = _positive(float)(text)
    if v > 1:
        raise argparse.ArgumentTypeError(f"eta must be in (0, 1]: {text!r}")
    return v


def _common(p, sizes, dists, bits, ths=None, methods=None):
    p.add_argument("--size", type=_positive(int), nargs="+", default=list(sizes))
    p.add_argument("--dist", choices=DIST_CHOICES, nargs="+", default=list(dists))
    p.add_argument("--bits", type=int, choices=(4, 8), nargs="+", default=list(bits))
    p.add_argument("--th", type=_positive(float), nargs="+", default=ths,
                   help="threshold grid (default: the command's own grid, or the config file)")
    if methods is not None:
        p.add_argument("--method", choices=("origin", "full", "xigemm", "float"), nargs="+",
                       default=list(methods))
    p.add_argument("--seed", type=_seed, default=42)
    p.add_argument("--policy", choices=("avg", "min"), default="avg")
    p.add_argument("--scheme", choices=("tensor", "vector"), default="tensor")
    p.add_argument("--eta", type=_eta, default=None, help="density limit for the sparse path")
    p.add_argument("--config", default=None, help="settings file written by 'calibrate'")
    p.add_argument("--out", default="-", help="output path; .md writes markdown, anything else CSV")


def build_parser():
    parser = argparse.ArgumentParser(prog="xigemm", description="Quantized GEMM with sparse residual compensation")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("precision", help="error of origin/full/xigemm against the float product")
    _common(p, (256,), DIST_CHOICES, (8,), methods=("origin", "full", "xigemm"))

    p = sub.add_parser("density", help="density of the thinned operands against threshold")
    _common(p, (256,), DIST_CHOICES, (8,))

    p = sub.add_parser("timing", help="per-stage wall-time breakdown of xigemm")
    _common(p, (128, 512), ("uniform",), (8,))
    p.add_argument("--repeats", type=_positive(int), default=3)

    p = sub.add_parser("qr", help="Householder QR reconstruction error per multiply method")
    _common(p, (64,), ("uniform", "normal", "esp", "kar"), (4, 8), methods=("origin", "full", "xigemm"))
    p.set_defaults(seed=11)

    p = sub.add_parser("calibrate", help="measure the SpMM/GEMM crossover density eta")
    p.add_argument("--size", type=_positive(int), default=512)
    p.add_argument("--bits", type=int, choices=(4, 8), default=8)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--threshold", type=_positive(float), default=None,
                   help="default threshold to store alongside eta")
    p.add_argument("--out", default="xigemm.cfg")
    return parser


def _settings(args, parser):
    conf = {}
    if getattr(args, "config", None):
        try:
            conf = read_config(args.config)
        except FileNotFoundError:
            parser.error(f"config file not found: {args.config}")
    limit = args.eta if args.eta is not None else conf.get("density_limit", 1.0)
    if not 0 < limit <= 1:
        parser.error(f"density limit from config must be in (0, 1], got {limit}")
    cfg = XigemmConfig(density_limit=limit, policy=args.policy, scheme=args.scheme)
    ths = args.th
    if ths is None and "threshold" in conf:
        ths = [conf["threshold"]]
    return cfg, ths


def _emit(text, out):
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)
        log.info("wrote %s", out)


def _is_md(out):
    return out.endswith(".md")


def run(args, parser):
    if args.command == "calibrate":
        cal = calibrate_eta(size=args.size, bits=args.bits, seed=args.seed)
        values = {"eta": cal.eta}
        if args.threshold is not None:
            values["threshold"] = args.threshold
        info = dict(cal.fingerprint, size=cal.size, gemm_ns=f"{cal.gemm_ns:.0f}")
        write_config(args.out, values, info)
        print(f"eta = {cal.eta:.4g}")
        return 0

    cfg, ths = _settings(args, parser)
    common = dict(sizes=args.size, bits=args.bits, dists=args.dist, seed=args.seed, cfg=cfg)
    if args.command == "precision":
        rows = harness.precision_sweep(thresholds=ths or harness.PRECISION_THRESHOLDS,
                                       methods=args.method, **common)
        text = harness.to_markdown(rows) if _is_md(args.out) else harness.to_csv(rows)
    elif args.command == "density":
        rows = harness.density_sweep(thresholds=ths or harness.DENSITY_THRESHOLDS, **common)
        text = harness.to_markdown(rows) if _is_md(args.out) else harness.to_csv(rows)
    elif args.command == "timing":
        if ths is not None and len(ths) != 1:
            parser.error("timing takes a single --th value")
        rows = harness.stage_timing(threshold=ths[0] if ths else 0.5, repeats=args.repeats, **common)
        text = (harness.shares_markdown(rows) + "\n" + harness.to_markdown(rows)
                if _is_md(args.out) else harness.to_csv(rows))
    else:
        if ths is not None and len(ths) != 1:
            parser.error("qr takes a single --th value")
        qcfg = XigemmConfig(threshold=ths[0] if ths else 0.1, density_limit=cfg.density_limit,
                            policy=cfg.policy, scheme=cfg.scheme)
        rows = harness.qr_rows(sizes=args.size, dists=args.dist, bits=args.bits, methods=args.method,
                               seed=args.seed, cfg=qcfg)
        text = harness.to_csv(rows) if args.out != "-" and not _is_md(args.out) else harness.qr_markdown(rows)
    _emit(text, args.out)
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return run(args, parser)
    except Exception as exc:  # noqa: BLE001 - report, exit 1
        log.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
