"""Command-line front end."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import output
from .errors import ConfigError, InvalidParameterError, InvalidStateError
from .scenarios import FORMATS, SCENARIOS, build_config, read_config_file, run_scenario
from .selftest import DEFAULT_SEED, run_selftest

log = logging.getLogger("spinorbit")

ANGLE_HELP = "angle with unit, e.g. 45deg, 0.785rad, pi/2, -3pi/4"

CONVENTIONS = """\
conventions:
  Angles need an explicit unit: '45deg', '1.2rad' or a multiple of pi ('pi/2').
  Images are drawn as seen looking back at the beam source: screen-right is -x,
  screen-up is +y.  The polarizer angle --gamma is measured anticlockwise from
  vertical in that view.  Profile azimuths and reported rotation angles use the
  same view, anticlockwise from screen-right.
"""


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="key = value file; flags override its entries")
    p.add_argument("--scenario", choices=SCENARIOS)
    for name, what in (
        ("theta", "orbital polar angle"),
        ("phi", "orbital azimuthal phase"),
        ("alpha", "spin polar angle"),
        ("beta", "spin retardance phase"),
        ("delta", "interferometer phase (default pi/2)"),
        ("gamma", "output polarizer axis, anticlockwise from vertical; omit for no polarizer"),
        ("retarder", "output retardance applied to the x component before the polarizer"),
    ):
        p.add_argument(f"--{name}", metavar="ANGLE", help=f"{what}; {ANGLE_HELP}")
    p.add_argument("--inputs", choices=("a", "b", "ab"), help="illuminated input ports")
    p.add_argument("--amplitude", help="field amplitude E (default 1)")
    p.add_argument("--grid-size", help="samples per axis (default 256)")
    p.add_argument("--half-extent", help="grid half width in units of w0 (default 4)")
    p.add_argument("--out", help="output directory (default ./out)")
    p.add_argument(
        "--format", action="append", choices=FORMATS,
        help="output format; repeat for several (default pgm, csv, json)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinorbit",
        description="Spin-orbit structured light through an asymmetric Mach-Zehnder interferometer.",
        epilog=CONVENTIONS,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("render", help="render one frame per output port", epilog=CONVENTIONS,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    _common(p)

    p = sub.add_parser("sweep", help="render a parameter sweep", epilog=CONVENTIONS,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    _common(p)
    p.add_argument("--sweep", metavar="PARAM:START:STOP:STEPS",
                   help="PARAM in gamma, beta, alpha, delta; inclusive linear spacing, e.g. beta:0deg:360deg:16")

    p = sub.add_parser("hom", help="coincidence and bunching probabilities versus delta")
    _common(p)
    p.add_argument("--sweep", metavar="delta:START:STOP:STEPS", help="delta grid (default -pi..pi, 65 steps)")

    p = sub.add_parser("selftest", help="run the seeded invariant suite")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--out", default="out", help="directory for selftest_report.json")
    return parser


def _settings(args: argparse.Namespace) -> dict:
    values = read_config_file(args.config) if args.config else {}
    flags = {
        k: getattr(args, k)
        for k in ("scenario", "theta", "phi", "alpha", "beta", "delta", "gamma", "retarder",
                  "inputs", "amplitude", "grid_size", "half_extent", "out")
    }
    values.update({k: v for k, v in flags.items() if v is not None})
    if args.format:
        values["format"] = list(dict.fromkeys(args.format))
    if getattr(args, "sweep", None):
        values["sweep"] = args.sweep
    return values


def _print_files(files) -> None:
    for f in files:
        print(f)


def cmd_render(args) -> int:
    values = _settings(args)
    values.pop("sweep", None)
    report = run_scenario(build_config(values))
    _print_files(report.files)
    return 0


def cmd_sweep(args) -> int:
    values = _settings(args)
    if "sweep" not in values:
        raise ConfigError("sweep needs --sweep PARAM:START:STOP:STEPS (or a sweep entry in --config)")
    report = run_scenario(build_config(values))
    _print_files(report.files)
    return 0


def cmd_hom(args) -> int:
    values = _settings(args)
    values["scenario"] = "biphoton-sweep"
    values.setdefault("format", ["csv", "json"])
    report = run_scenario(build_config(values))
    _print_files(report.files)
    return 0


def cmd_selftest(args) -> int:
    result = run_selftest(seed=args.seed, trials=args.trials)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "selftest_report.json"
    output.write_json(path, result)
    for c in result["checks"]:
        print(f"{'PASS' if c['passed'] else 'FAIL'}  {c['name']}  max_error={c['max_error']:.3e} tol={c['tolerance']:.0e}")
    print(path)
    return 0 if result["passed"] else 1


COMMANDS = {"render": cmd_render, "sweep": cmd_sweep, "hom": cmd_hom, "selftest": cmd_selftest}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, InvalidParameterError, InvalidStateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
