"""
Command-line front end.

    dla profile A.dla
    dla iso A.dla B.dla
    dla embed A.dla B.dla --witness-depth 3
    dla triangle --q 4 --target "2^inf" --depth 4
    dla check diagram.txt

Exit codes: 0 yes/valid, 1 no/invalid, 2 unknown, 3 usage or parse error,
4 unsupported construction or other library error.
"""
import argparse
import logging
import sys
from collections import Counter

from dla import branching, formats
from dla.config_manager import ConfigManager
from dla.decision_manager import DecisionManager, read_source
from dla.errors import (
    DimensionMismatch, DLAError, InconsistentProfile, InvalidDescriptor, InvalidWeight,
    NotEmbeddable, ParseError,
)
from dla.logger import setup_logger

logger = logging.getLogger(__name__)

EXIT_YES = 0
EXIT_NO = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 3
EXIT_ERROR = 4

_INPUT_ERRORS = (ParseError, InvalidDescriptor, InconsistentProfile, InvalidWeight,
                 DimensionMismatch)


class UsageError(Exception):
    pass


class DLAArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 3"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class Report:
    """RESULT line followed by tagged lines (COND, LEVEL, ROW, ...)"""

    def __init__(self, result):
        self.result = result
        self.entries = []

    def add(self, kind, text):
        self.entries.append((kind, str(text)))
        return self

    def extend(self, kind, texts):
        for text in texts:
            self.add(kind, text)
        return self

    def render(self, kv=False):
        if not kv:
            lines = [f"RESULT: {self.result}"] + [f"{kind} {text}" for kind, text in self.entries]
            return "\n".join(lines) + "\n"
        counters = Counter()
        lines = [f"result={self.result}"]
        for kind, text in self.entries:
            key = kind.lower()
            lines.append(f"{key}.{counters[key]}={text}")
            counters[key] += 1
        return "\n".join(lines) + "\n"

    @property
    def exit_code(self):
        return {"YES": EXIT_YES, "NO": EXIT_NO, "UNKNOWN": EXIT_UNKNOWN}.get(self.result, EXIT_ERROR)


def _verdict_report(verdict):
    report = Report(verdict.answer.value)
    for entry in verdict.trace:
        report.add("COND", f"{entry.cond_id} {entry.status.value} {entry.detail}")
    return report


def _level_lines(diagram):
    return [f"{r.i} {r.k} {r.x} {r.y} {r.u}" for r in diagram.levels]


def _write(path, text):
    with open(path, 'w', encoding='utf-8') as f:
        f.write(text)
    logger.info(f"Wrote {path}")


def cmd_profile(args, manager):
    profile = manager.profile(args.input)
    text = formats.format_profile(profile)
    if args.out:
        _write(args.out, text)
    return Report("YES").extend("PROFILE", text.splitlines())


def cmd_iso(args, manager):
    return _verdict_report(manager.isomorphic(args.first, args.second))


def cmd_equiv(args, manager):
    return _verdict_report(manager.equivalent(args.first, args.second))


def cmd_universal(args, manager):
    return _verdict_report(manager.universal(args.input))


def cmd_embed(args, manager):
    verdict, diagram, note = manager.embeds(args.first, args.second, manager.config.witness_depth)
    report = _verdict_report(verdict)
    if diagram is not None:
        report.extend("LEVEL", _level_lines(diagram))
        if args.out:
            _write(args.out, formats.format_diagram(diagram))
    elif note:
        report.add("NOTE", f"witness skipped: {note}")
    return report


def cmd_diagram(args, manager):
    diagram = manager.diagram(args.first, args.second, args.witness_depth)
    if args.out:
        _write(args.out, formats.format_diagram(diagram))
    return Report("YES").extend("LEVEL", _level_lines(diagram))


def cmd_triangle(args, manager):
    triangle = manager.triangle(args.q, args.target, args.depth)
    if args.out:
        _write(args.out, formats.format_triangle(triangle))
    report = Report("YES")
    report.extend("GROUP", [f"{k}: {n}" for k, n in enumerate(triangle.group_sizes, start=1)])
    report.extend("ROW", [f"{k}: " + " ".join(map(str, row)) for k, row in enumerate(triangle.rows)])
    report.extend("B", [f"{k}: {b}" for k, b in enumerate(triangle.b, start=1)])
    return report


def cmd_check(args, manager):
    kind, result = manager.check(args.input)
    report = Report("YES" if result.ok else "NO").add("KIND", kind)
    return report.extend("FAIL", result.failures)


def _weight(text):
    return formats.parse_weight(read_source(text))


def _signature(text):
    return formats.parse_signature(text)


def _components(result):
    return [f"{w} {m}" for w, m in sorted(result.multiplicities.items(), reverse=True)]


def cmd_branch(args, manager):
    config = manager.config
    limits = dict(max_rank=config.oracle_max_rank, max_dim=config.oracle_max_dim)
    report = Report("YES")
    if args.branch_command == "dim":
        return report.add("VALUE", branching.weyl_dim(_weight(args.weight)))
    if args.branch_command == "gt":
        result = branching.gt_branch(_weight(args.weight))
    elif args.branch_command == "diag":
        result = branching.restrict_diagonal(_weight(args.weight), args.k, args.n)
    elif args.branch_command == "restrict":
        result = branching.restrict_signature(_weight(args.weight), _signature(args.signature),
                                              args.n, **limits)
    elif args.branch_command == "lr":
        lam = _weight(args.weight)
        mus = [_weight(m) for m in args.factors]
        return report.add("VALUE", branching.generalized_lr(mus, lam))
    else:
        if args.signature:
            return report.add("VALUE", branching.index_of_signature(_signature(args.signature)))
        if args.weight is None:
            raise UsageError("branch index needs a weight or --signature")
        return report.add("VALUE", branching.dynkin_index_module(_weight(args.weight)))
    report.extend("COMPONENT", _components(result))
    return report.add("DIM", result.dimension())


def build_parser():
    common = DLAArgumentParser(add_help=False)
    common.add_argument("--precision", help="starting precision, e.g. 2^-40 or 1/1024")
    common.add_argument("--depth", type=int, help="triangle depth K")
    common.add_argument("--witness-depth", type=int, help="levels of a built diagram")
    common.add_argument("--out", help="write the built artifact to this path")
    common.add_argument("--trace", action="store_true", help="debug logging on stderr")
    common.add_argument("--kv", action="store_true", help="key=value report lines")
    common.add_argument("--config", help="JSON settings file")

    parser = DLAArgumentParser(prog="dla", description="Diagonal locally simple Lie algebras")
    verbs = parser.add_subparsers(dest="command", required=True)

    p = verbs.add_parser("profile", parents=[common], help="derive a profile")
    p.add_argument("input")
    p.set_defaults(handler=cmd_profile)

    for name, handler, text in (("iso", cmd_iso, "decide isomorphism"),
                                ("equiv", cmd_equiv, "decide mutual embeddability"),
                                ("embed", cmd_embed, "decide embeddability"),
                                ("diagram", cmd_diagram, "build an embedding diagram")):
        p = verbs.add_parser(name, parents=[common], help=text)
        p.add_argument("first")
        p.add_argument("second")
        p.set_defaults(handler=handler)

    p = verbs.add_parser("universal", parents=[common], help="decide universality")
    p.add_argument("input")
    p.set_defaults(handler=cmd_universal)

    p = verbs.add_parser("triangle", parents=[common], help="build the exterior-power triangle")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--target", required=True, help="Steinitz literal or descriptor")
    p.set_defaults(handler=cmd_triangle)

    p = verbs.add_parser("check", parents=[common], help="verify a diagram or triangle file")
    p.add_argument("input")
    p.set_defaults(handler=cmd_check)

    p = verbs.add_parser("branch", help="branching oracle")
    branch = p.add_subparsers(dest="branch_command", required=True)
    b = branch.add_parser("dim", parents=[common])
    b.add_argument("weight")
    b = branch.add_parser("gt", parents=[common])
    b.add_argument("weight")
    b = branch.add_parser("diag", parents=[common])
    b.add_argument("weight")
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--n", type=int, required=True)
    b = branch.add_parser("lr", parents=[common])
    b.add_argument("weight", help="lambda")
    b.add_argument("factors", nargs="+", help="mu_1 ... mu_k")
    b = branch.add_parser("restrict", parents=[common])
    b.add_argument("weight")
    b.add_argument("signature", help="(l,r,z)")
    b.add_argument("--n", type=int, required=True)
    b = branch.add_parser("index", parents=[common])
    b.add_argument("weight", nargs="?")
    b.add_argument("--signature")
    p.set_defaults(handler=cmd_branch)
    return parser


def run(argv=None, out=None):
    """Parse argv, run the verb, print the report; returns the exit code"""
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        config = ConfigManager(args.config)
        config.update_settings(precision=args.precision, depth=args.depth,
                               witness_depth=args.witness_depth)
        setup_logger("DEBUG" if args.trace else config.log_level, config.log_dir)
        manager = DecisionManager(config)
        report = args.handler(args, manager)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"dla: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except _INPUT_ERRORS as e:
        logger.error(f"Input rejected: {e}")
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_USAGE
    except NotEmbeddable as e:
        out.write(Report("NO").add("NOTE", e).render(args.kv))
        return EXIT_NO
    except (DLAError, OSError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"ERROR: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR

    out.write(report.render(args.kv))
    return report.exit_code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
