"""Command-line interface.

Exit status: 0 success, 1 configuration or usage error, 2 numeric failure.
"""
import argparse
import sys

from . import verify as verify_suite
from .errors import ConfigError, QutritLabError
from .generators import gell_mann_set, pauli_set, structure_constants
from .scenarios import FORMATS, format_number, load_config, run_scenario

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2
COMMAND_SCENARIO = {"evolve": "dephasing3", "phase": "berry_loop", "polarization": "polarization"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _json_value(v, indent=0):
    pad = "  " * indent
    if isinstance(v, dict):
        items = [f'{pad}  "{k}": {_json_value(x, indent + 1).lstrip()}' for k, x in v.items()]
        return pad + "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(v, list):
        if all(not isinstance(x, (dict, list)) for x in v):
            return pad + "[" + ", ".join(_json_value(x) for x in v) + "]"
        inner = ",\n".join(_json_value(x, indent + 1) for x in v)
        return pad + "[\n" + inner + "\n" + pad + "]"
    if isinstance(v, str):
        return pad + f'"{v}"'
    return pad + format_number(v)


def generators_document():
    """Generator matrices and nonzero structure constants as a JSON-ready dict."""

    def mat(m):
        return [[[z.real, z.imag] for z in row] for row in m]

    sc = structure_constants()
    return {
        "pauli": [mat(m) for m in pauli_set()],
        "gell_mann": [mat(m) for m in gell_mann_set()],
        "f": [{"indices": list(k), "value": v} for k, v in sc.nonzero_f()],
        "d": [{"indices": list(k), "value": v} for k, v in sc.nonzero_d()],
    }


def _emit(text, output):
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_scenario(args):
    cfg = load_config(args.config)
    want = COMMAND_SCENARIO[args.command]
    if cfg.scenario != want:
        raise ConfigError(
            f"'{args.command}' runs scenario {want!r}, config has {cfg.scenario!r}", ["scenario"]
        )
    report, text = run_scenario(cfg, args.output, args.format)
    if not (args.output or cfg.output_path):
        sys.stdout.write(text)
    if not args.quiet:
        print(report.summary(), file=sys.stderr)
    return EXIT_OK


def _cmd_verify(args):
    results = verify_suite.run(fault=args.inject_fault)
    text = verify_suite.report(results)
    ok = all(r.passed for r in results)
    if not args.quiet or not ok:
        _emit(text + "\n", args.output)
    return EXIT_OK if ok else EXIT_NUMERIC


def _cmd_generators(args):
    _emit(_json_value(generators_document()) + "\n", args.output)
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", help="output path (overrides the config)")
    common.add_argument("--format", choices=FORMATS, help="csv or json (overrides the config)")
    common.add_argument("--quiet", action="store_true", help="suppress the run summary")
    parser = _Parser(prog="qutritlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "evolve": "qutrit dephasing trajectory (scenario dephasing3)",
        "phase": "geometric phase of parameter loops (scenario berry_loop)",
        "polarization": "two-mode depolarization (scenario polarization)",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("config", help="JSON scenario file")
        p.set_defaults(func=_cmd_scenario)
    p = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    p.add_argument("--inject-fault", choices=verify_suite.FAULTS, help=argparse.SUPPRESS)
    p.set_defaults(func=_cmd_verify)
    p = sub.add_parser("generators", parents=[common], help="generator data")
    p.add_argument("action", choices=["dump"])
    p.set_defaults(func=_cmd_generators)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QutritLabError, ArithmeticError, OSError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
