"""Command-line entry point: ``fskpnc <subcommand> [--config FILE] [options]``."""

import argparse
import json
import logging
import sys
from dataclasses import asdict

from .. import rate
from . import campaigns
from .config import load_config

log = logging.getLogger("fskpnc")

SUBCOMMANDS = ("ber", "rate", "exchange-rate", "exit", "optimize", "pcm-gen")


def build_parser():
    p = argparse.ArgumentParser(prog="fskpnc", description="FSK two-way relay experiments")
    sub = p.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--config", help="YAML experiment file")
        s.add_argument("--seed", type=int, help="master seed (overrides config)")
        s.add_argument("--threads", type=int, default=1, help="worker processes")
        s.add_argument("--out", help="output path (default stdout)")
        s.add_argument("--format", choices=("csv", "json"), help="output format")
        s.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config key, YAML value syntax, dots for nesting")
        s.add_argument("-v", "--verbose", action="store_true")
    return p


def _overrides(args):
    import yaml

    over = {"seed": args.seed, "format": args.format, "out": args.out}
    for item in args.set:
        key, _, val = item.partition("=")
        node = over
        parts = key.split(".")
        for k in parts[:-1]:
            node = node.setdefault(k, {})
        node[parts[-1]] = yaml.safe_load(val)
    return over


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s", stream=sys.stderr)
    cfg = load_config(args.config, _overrides(args), kind=args.command)
    fmt = cfg.format

    if args.command == "ber":
        pts = campaigns.run_ber(cfg, args.threads,
                                progress=lambda p: log.info("%.2f dB  BER %.3g  (%d frames)",
                                                            p.snr_db, p.ber, p.frames))
        text = campaigns.render([asdict(p) for p in pts], campaigns.BER_COLUMNS, cfg, fmt)
    elif args.command in ("rate", "exchange-rate"):
        if args.command == "rate":
            rows = [asdict(p) for p in campaigns.run_rate(cfg)]
            cols = rate.RATE_COLUMNS
        else:
            rows = campaigns.run_exchange_rate(cfg)
            cols = list(rows[0]) if rows else []
        text = campaigns.render(rows, cols, cfg, fmt)
    elif args.command == "exit":
        V, th, rows = campaigns.run_exit(cfg)
        if fmt == "json":
            doc = campaigns.threshold_record(V, th)
            doc["curves"] = rows
            doc["config"] = cfg.to_dict()
            text = json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n"
        else:
            text = campaigns.render(rows, campaigns.EXIT_COLUMNS, cfg, "csv")
        log.info("threshold %s dB (open=%s)", th.eb_n0_db, th.open)
    elif args.command == "optimize":
        rec = campaigns.run_optimize(
            cfg, args.threads,
            progress=lambda i, n, V, th: log.info("[%d/%d] %s -> %s", i, n, V.label(), th.eb_n0_db))
        rec["config"] = cfg.to_dict()
        text = json.dumps(rec, indent=2, sort_keys=True, default=str) + "\n"
    else:  # pcm-gen
        if not cfg.out:
            raise SystemExit("pcm-gen needs --out for the alist file")
        pcm = campaigns.run_pcm_gen(cfg, cfg.out)
        hist = pcm.degree_histogram()
        print(json.dumps({"alist": cfg.out, "N": pcm.N, "K": pcm.K,
                          "degrees": {str(k): v for k, v in hist.items()}}, sort_keys=True))
        return 0

    campaigns.emit(text, cfg.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
