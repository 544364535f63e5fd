"""Command line front end.

Subcommands: run (one scenario), figures (the canonical four-panel
suite), verify (invariant checks), sweep (a JSON grid of configs).
Exit codes: 0 success, 1 usage or configuration problem, 2 numerical
health failure during a run, 3 verification failure.
"""

import argparse
import sys

from . import config
from .errors import CatotocError, NumericalHealthError
from .harness import (
    ScenarioConfig,
    load_sweep_document,
    read_config_file,
    run_figure_suite,
    run_scenario,
    sweep,
)
from .verify import VERIFY_LEVELS, verify


class _Parser(argparse.ArgumentParser):
    """argparse defaults to exit code 2 on usage errors; we reserve 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_scenario_flags(sub):
    sub.add_argument("--config", metavar="PATH", help="flat key = value scenario file")
    sub.add_argument("--dynamics", choices=("ee", "he", "hh"))
    sub.add_argument("--n", type=int, help="Hilbert dimension per degree of freedom")
    sub.add_argument("--k", type=float, help="kick strength")
    sub.add_argument("--kc", type=float, help="coupling strength")
    sub.add_argument("--center1", metavar="q,p", help="first wavepacket center")
    sub.add_argument("--center2", metavar="q,p", help="second wavepacket center")
    sub.add_argument("--tmax", type=int, help="number of map steps")
    sub.add_argument("--otoc-b", choices=("p2d", "rho0", "both"), dest="otoc_b")


def build_parser():
    parser = _Parser(prog="catotoc", description=__doc__.splitlines()[0])
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {config.VERSION}"
    )
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run_p = subs.add_parser("run", help="run a single scenario")
    _add_scenario_flags(run_p)
    run_p.add_argument("--out", metavar="DIR", help="output directory")
    run_p.add_argument("--threads", type=int, default=1, help="accepted for symmetry; a single scenario is sequential")

    fig_p = subs.add_parser("figures", help="run the canonical four-scenario suite")
    fig_p.add_argument("--out", metavar="DIR", required=True)
    fig_p.add_argument("--threads", type=int, default=1)

    ver_p = subs.add_parser("verify", help="run the invariant checks")
    ver_p.add_argument("--level", choices=VERIFY_LEVELS, default="fast")
    ver_p.add_argument("--out", metavar="DIR", help="also write report.txt here")

    sw_p = subs.add_parser("sweep", help="run a JSON grid of scenario configs")
    sw_p.add_argument("--config", metavar="PATH", required=True, help="JSON sweep document")
    sw_p.add_argument("--out", metavar="DIR", required=True)
    sw_p.add_argument("--threads", type=int, default=1)
    return parser


def _scenario_from_args(args):
    mapping = {}
    if args.config:
        mapping.update(read_config_file(args.config))
    overrides = {
        "dynamics": args.dynamics,
        "n": args.n,
        "k": args.k,
        "kc": args.kc,
        "center1": args.center1,
        "center2": args.center2,
        "t_max": args.tmax,
        "otoc_b": args.otoc_b,
    }
    mapping.update({k: v for k, v in overrides.items() if v is not None})
    return ScenarioConfig.from_mapping(mapping)


def _cmd_run(args):
    cfg = _scenario_from_args(args)
    result = run_scenario(cfg, out_dir=args.out)
    last = result.records[-1]
    print(f"scenario dynamics={cfg.dynamics} n={cfg.n} t_max={cfg.t_max}")
    print(
        f"final row: t={last.t} s_linear={last.s_linear:.6g} s_vn={last.s_vn:.6g} "
        f"otoc_xp={last.otoc_xp:.6g} otoc_xrho={last.otoc_xrho:.6g}"
    )
    if args.out:
        print(f"wrote {args.out}")
    return 0


def _cmd_figures(args):
    _, _, text = run_figure_suite(args.out, threads=args.threads)
    print(text, end="")
    print(f"wrote {args.out}")
    return 0


def _cmd_verify(args):
    report = verify(level=args.level)
    text = report.to_text()
    print(text)
    if args.out:
        from pathlib import Path

        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.txt").write_text(text + "\n")
    return 0 if report.passed else 3


def _cmd_sweep(args):
    document = load_sweep_document(args.config)
    report = sweep(document, args.out, threads=args.threads)
    for name, ok, msg in report:
        print(f"{name}: {'ok' if ok else 'FAILED ' + msg}")
    failed = [r for r in report if not r[1]]
    if failed:
        print(f"{len(failed)} of {len(report)} runs failed")
        return 2
    print(f"wrote {args.out}")
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "figures": _cmd_figures,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except NumericalHealthError as exc:
        print(f"numerical health failure: {exc}", file=sys.stderr)
        return 2
    except CatotocError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
