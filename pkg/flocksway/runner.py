import argparse
import logging
import shutil
import sys
from typing import List, Optional, Sequence, TextIO, Tuple

import blinker

from .command import analyze, help, place, run, sweep
from .commands import create_commander
from .console import Console, OutputFormat
from .error import CommandError, FlockswayError
from .utils import FragileStreamHandler

logger = logging.getLogger("flocksway")

on_result = blinker.signal("result")
on_dispatch = blinker.signal("dispatch")
on_error = blinker.signal("error")

LOG_LEVELS = {
    "debug": logging.DEBUG,
    "info": logging.INFO,
    "warning": logging.WARNING,
    "error": logging.ERROR,
}

COMMAND_MODULES = (help, run, sweep, analyze, place)

# global flags precede the command, mapped to the number of values they take
GLOBAL_FLAGS = {"--disable-style": 0, "--log-level": 1, "--output-format": 1}


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise CommandError(message)


def get_arg_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="flocksway",
        description="Consensus of Vicsek flocks steered by influencing agents.",
        allow_abbrev=False,
        add_help=False,
    )
    parser.add_argument(
        "--disable-style",
        dest="disable_style",
        action="store_true",
        help="Disable terminal styling (colors).",
    )
    parser.add_argument(
        "--log-level",
        dest="log_level",
        choices=tuple(LOG_LEVELS),
        default="warning",
        help="select log verbosity",
    )
    parser.add_argument(
        "--output-format",
        dest="output_format",
        choices=[item.value for item in OutputFormat],
        default=OutputFormat.HUMAN.value,
        help="human readable text or one JSON document per result",
    )
    return parser


def split_global_args(argv: Sequence[str]) -> Tuple[List[str], List[str]]:
    """(global flags, command tokens)"""
    index = 0
    while index < len(argv):
        name = argv[index].split("=", 1)[0]
        if name not in GLOBAL_FLAGS:
            break
        index += 1 if "=" in argv[index] else 1 + GLOBAL_FLAGS[name]
    return list(argv[:index]), list(argv[index:])


def create_root_commander():
    commander = create_commander("flocksway")
    commander.compose(*(module.command for module in COMMAND_MODULES))
    return commander


def configure_logging(level: str, stream: TextIO) -> logging.Handler:
    handler = FragileStreamHandler(stream)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    logger.setLevel(LOG_LEVELS[level])
    logger.addHandler(handler)
    return handler


def main(
    argv: Optional[Sequence[str]] = None,
    output: Optional[TextIO] = None,
    errors: Optional[TextIO] = None,
) -> int:
    """run one command line and return the process exit code"""
    argv = list(sys.argv[1:] if argv is None else argv)
    output = sys.stdout if output is None else output
    errors = sys.stderr if errors is None else errors

    flags, tokens = split_global_args(argv)
    try:
        cli_args = get_arg_parser().parse_args(flags)
    except CommandError as exc:
        console = Console(output, errors)
        console.configure_auto(force_disable_style=True)
        return console.send_data(exc)
    handler = configure_logging(cli_args.log_level, errors)
    console = Console(output, errors, OutputFormat(cli_args.output_format))
    console.configure_auto(force_disable_style=cli_args.disable_style)

    commander = create_root_commander()
    commander.provide("console", console)
    commander.provide("output_width", shutil.get_terminal_size((80, 24)).columns)

    status = 0
    try:
        on_dispatch.send(commander, line=tokens)
        for result in commander.dispatch(tokens or ["help"]):
            on_result.send(commander, result=result)
            status = max(status, console.send_data(result))
    except FlockswayError as exc:
        on_error.send(commander, exc=exc)
        status = console.send_data(exc)
    except KeyboardInterrupt:
        status = 130
    finally:
        logger.removeHandler(handler)
    return status


def console_main():
    sys.exit(main())
