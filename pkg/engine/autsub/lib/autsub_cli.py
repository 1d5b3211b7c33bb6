"""
An autsub command line interface to analyze substitution files, compute the
automorphism group of their shifts and decide conjugacy between two of
them. A substitution file lists one rule per line:

    # Thue-Morse
    a -> ab
    b -> ba

Multi-character symbols need an alphabet declaration before the rules:

    alphabet: P Q R
    P -> P Q P
    ...

"""

import sys
import argparse
import logging
from dataclasses import dataclass, field
from typing import List, Optional, TextIO

from ..autgroup import aut_group
from ..conj import decide_conjugacy
from ..exceptions import InternalConsistencyError, PreconditionError, \
    ResourceLimitError, SubstitutionParseError
from ..limits import Limits
from ..sofic import subset_graph
from ..substitution import language
from .autsub_config import AutsubConfig
from .autsub_report import AnalyzeReport, AutReport, AutsubReport, \
    ConjugacyReport, ErrorReport, GraphReport, LanguageReport
from .utils import read_substitution_file

ANALYZE = "analyze"
AUT = "aut"
CONJ = "conj"
LANGUAGE = "language"
GRAPH = "graph"
CONFIG = "config"

FORMATS = ("text", "json", "dot")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CAP = 3

CAP_ARGS = {
    "cap_word": {
        "name_or_flags": ["--cap-word"],
        "kwargs": {"help": "Longest theta-power word, in symbols"},
    },
    "cap_radius": {
        "name_or_flags": ["--cap-radius"],
        "kwargs": {"help": "Largest radius tried for inverse codes"},
    },
    "cap_kernel": {
        "name_or_flags": ["--cap-kernel"],
        "kwargs": {"help": (
            "Most candidate tables (or search nodes with propagation) "
            "explored by one block-map search")},
    },
    "pmax": {
        "name_or_flags": ["--pmax"],
        "kwargs": {"help": "Longest period tried by the fingerprint prune"},
    },
    "jobs": {
        "name_or_flags": ["--jobs"],
        "kwargs": {"help": "Worker threads for candidate searches"},
    },
}


@dataclass
class RunConfig:
    """
    Everything one run needs: the command, its input paths, the output
    format, the caps and the verbosity.
    """

    command: str
    inputs: List[str]
    fmt: str = "text"
    limits: Limits = field(default_factory=Limits)
    quiet: bool = False
    n: Optional[int] = None


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{text}' is not an integer")
    if value <= 0:
        raise argparse.ArgumentTypeError(f"{value} is not positive")
    return value


def get_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=FORMATS,
                        default="text", help="Output format")
    common.add_argument("--quiet", action="store_true",
                        help="Only log errors")
    for opt in CAP_ARGS.values():
        common.add_argument(*opt["name_or_flags"], type=positive_int,
                            **opt["kwargs"])

    parser = argparse.ArgumentParser(
        prog="autsub",
        description="Automorphism groups and conjugacy of constant-length "
            "substitution shifts."
    )
    subparsers = parser.add_subparsers(dest="command",
                                help="Valid commands")
    subparsers.required = True

    parser_analyze = subparsers.add_parser(ANALYZE, parents=[common],
                                help="Report the invariants of a substitution")
    parser_analyze.add_argument("inputs", nargs=1, metavar="file")

    parser_aut = subparsers.add_parser(AUT, parents=[common],
                                help="Compute the automorphism group")
    parser_aut.add_argument("inputs", nargs=1, metavar="file")

    parser_conj = subparsers.add_parser(CONJ, parents=[common],
                                help="Decide conjugacy of two substitutions")
    parser_conj.add_argument("inputs", nargs=2, metavar="file")

    parser_language = subparsers.add_parser(LANGUAGE, parents=[common],
                                help="List the words of length n")
    parser_language.add_argument("inputs", nargs=1, metavar="file")
    parser_language.add_argument("-n", type=positive_int, required=True,
                                help="Word length")

    parser_graph = subparsers.add_parser(GRAPH, parents=[common],
                                help="Print the subset graph")
    parser_graph.add_argument("inputs", nargs=1, metavar="file")

    parser_config = subparsers.add_parser(CONFIG,
                                help="Show or change autsub configuration")
    for opt in CAP_ARGS.values():
        parser_config.add_argument(*opt["name_or_flags"], type=positive_int,
                                   **opt["kwargs"])
    parser_config.add_argument("--log-file",
                                help="Path to log file for logging")
    return parser


def set_logger_quiet(quiet: bool):
    """
    Set up logging verbosity at runtime. The implementation is contingent
    on the LOGGING setting in "autsub_config.py", whose first root handler
    is the console handler.
    """
    root_logger = logging.getLogger()

    root_handlers = root_logger.handlers
    if root_handlers and isinstance(root_handlers[0], logging.StreamHandler):
        root_handlers[0].setLevel(logging.ERROR if quiet else logging.INFO)
    else:
        root_logger.setLevel(logging.ERROR if quiet else logging.INFO)

    return root_logger


def run_config(args: argparse.Namespace, config: AutsubConfig) -> RunConfig:
    limits = config.limits(word=args.cap_word, radius=args.cap_radius,
                           kernel=args.cap_kernel, pmax=args.pmax,
                           jobs=args.jobs)
    return RunConfig(command=args.command, inputs=list(args.inputs),
                     fmt=args.fmt, limits=limits, quiet=args.quiet,
                     n=getattr(args, "n", None))


def cmd_analyze(cfg: RunConfig) -> AutsubReport:
    s = read_substitution_file(cfg.inputs[0])
    return AnalyzeReport.build(s, cfg.inputs[0], cfg.limits)


def cmd_aut(cfg: RunConfig) -> AutsubReport:
    s = read_substitution_file(cfg.inputs[0])
    return AutReport(cfg.inputs, aut_group(s, cfg.limits), cfg.limits)


def cmd_conj(cfg: RunConfig) -> AutsubReport:
    s = read_substitution_file(cfg.inputs[0])
    s2 = read_substitution_file(cfg.inputs[1])
    return ConjugacyReport(cfg.inputs, decide_conjugacy(s, s2, cfg.limits))


def cmd_language(cfg: RunConfig) -> AutsubReport:
    s = read_substitution_file(cfg.inputs[0])
    return LanguageReport(cfg.inputs, s, cfg.n,
                          language(s, cfg.n, cfg.limits))


def cmd_graph(cfg: RunConfig) -> AutsubReport:
    s = read_substitution_file(cfg.inputs[0])
    return GraphReport(cfg.inputs, subset_graph(s, cfg.limits))


COMMANDS = {
    ANALYZE: cmd_analyze,
    AUT: cmd_aut,
    CONJ: cmd_conj,
    LANGUAGE: cmd_language,
    GRAPH: cmd_graph,
}


def run(argv: Optional[List[str]] = None,
        stdout: Optional[TextIO] = None) -> int:
    """
    Run one command and return its exit code: 0 on success (or a conjugate
    decision), 1 for a non-conjugate decision, 2 for unusable input and 3
    when a cap was reached or a construction failed its recheck.
    """
    if stdout is None:
        stdout = sys.stdout
    args = get_parser().parse_args(argv)
    config = AutsubConfig()

    if args.command == CONFIG:
        for name in list(CAP_ARGS) + ["log_file"]:
            if getattr(args, name) is not None:
                setattr(config, name, getattr(args, name))
        config.show_config()
        return EXIT_OK

    config.configure_logging()
    logger = set_logger_quiet(quiet=args.quiet)

    try:
        cfg = run_config(args, config)
    except ValueError as e:
        logger.error("%s: %s", type(e).__name__, e)
        return EXIT_INPUT

    try:
        report = COMMANDS[cfg.command](cfg)
    except (SubstitutionParseError, PreconditionError, OSError) as e:
        logger.error("%s: %s", type(e).__name__, e)
        error, code = e, EXIT_INPUT
    except (ResourceLimitError, InternalConsistencyError) as e:
        logger.error("%s: %s", type(e).__name__, e)
        error, code = e, EXIT_CAP
    else:
        try:
            stdout.write(report.render(cfg.fmt))
        except PreconditionError as e:
            logger.error("%s: %s", type(e).__name__, e)
            return EXIT_INPUT
        return report.exit_code

    if cfg.fmt == "json":
        stdout.write(ErrorReport(cfg.command, cfg.inputs, error).render("json"))
    return code


def main():
    sys.exit(run())
