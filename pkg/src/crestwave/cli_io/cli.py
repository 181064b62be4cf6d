"""Command-line front end.

Each subcommand names a run mode; the config file supplies everything
else. With --server the job is posted to a running service instead of
executing in-process (the thin-client path); artifacts then live in the
server's output directory.
"""
from __future__ import annotations

import argparse
import json
import sys

from .config import ConfigError, load_config
from .initial_data import BadSpec
from .runner import run

MODES = ("simulate", "diagnose", "compare", "mollify-study", "dispersion", "fields")


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="crestwave",
                                description="surface-wave simulator and diagnostics")
    sub = p.add_subparsers(dest="command", required=True)
    for mode in MODES:
        sp = sub.add_parser(mode, help=f"run a {mode} job")
        sp.add_argument("--config", required=True, help="JSON or YAML config file")
        sp.add_argument("--out", default=".", help="output directory")
        sp.add_argument("--seed", type=int, default=None, help="generator seed override")
        sp.add_argument("--threads", type=int, default=1,
                        help="parallel jobs inside a study")
        sp.add_argument("--server", default=None,
                        help="POST the job to this service URL instead of running locally")
    return p


def _run_remote(server: str, cfg, seed, threads) -> int:
    import httpx

    payload = {"config": cfg.model_dump(mode="json"), "seed": seed,
               "threads": threads}
    reply = httpx.post(server.rstrip("/") + "/run", json=payload, timeout=600.0)
    reply.raise_for_status()
    body = reply.json()
    print(json.dumps(body, indent=2, sort_keys=True))
    return int(body.get("exit_code", 2))


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if cfg.mode is not None and cfg.mode != args.command:
            raise ConfigError(
                f"config mode {cfg.mode!r} does not match subcommand {args.command!r}")
        cfg = cfg.model_copy(update={"mode": args.command})
        if args.server:
            return _run_remote(args.server, cfg, args.seed, args.threads)
        result = run(cfg, args.out, args.seed, args.threads)
    except (ConfigError, BadSpec) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(result.summary, indent=2, sort_keys=True))
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
