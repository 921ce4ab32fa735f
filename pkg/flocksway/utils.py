import logging
import os
import re
import shlex
from collections import UserString, namedtuple
from functools import wraps
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import blessings

from .error import CommandError

# fmt: off
TAG_REGEX = re.compile(
    r"(?:<(?P<tag>[a-z]+)>)"
    r"(?P<content>(?:<(?!/)|[^<])+)"
    r"(?:</(?P<closing_tag>[a-z]+)>)"
)
# fmt: on
TokenMismatch = namedtuple("TokenMismatch", ["token", "exception", "value"])


def tokenize_args(comment_characters=("#",)):
    """let a function taking a token list also accept a command line string"""

    def decorator(func):
        @wraps(func)
        def wrapper(command, *args, **kwargs):
            if isinstance(command, str):
                command = command.strip()
                if command.startswith(tuple(comment_characters)):
                    return iter(())
                command = shlex.split(command)
            return func(list(command), *args, **kwargs)

        return wrapper

    return decorator


def join_generator_string(
    glue: str = os.linesep, formatter: Optional[Callable[[str], str]] = None
) -> Callable[..., Callable[..., str]]:
    def _format(value):
        return str(value) if formatter is None else formatter(str(value))

    def decorator(func: Callable[..., Iterable[str]]):
        @wraps(func)
        def wrapper(*args, **kwargs):
            result = func(*args, **kwargs)
            if isinstance(result, Iterable) and not isinstance(result, str):
                return glue.join(map(_format, result))
            return _format(result)

        return wrapper

    return decorator


def columns(separator="\t", join_char=None):
    """align the separated cells of each line produced by the decorated function"""
    join_char = join_char or separator

    def decorator(func):
        @join_generator_string(formatter=str.rstrip)
        @wraps(func)
        def wrapper(*args, **kwargs):
            lines = func(*args, **kwargs).split(os.linesep)
            rows = [line.split(separator) for line in lines]
            widths = [
                max(len(row[index]) for row in rows if index < len(row))
                for index in range(max(map(len, rows)))
            ]
            for row in rows:
                yield join_char.join(
                    cell.ljust(widths[i]) for i, cell in enumerate(row)
                )

        return wrapper

    return decorator


def _tagged_string(tag):
    @classmethod
    def func(cls, s):
        return str(cls(s, tag))

    func.__name__ = tag
    return func


class TaggedString(UserString):
    def __init__(self, seq, tag):
        super().__init__(seq)
        self.tag = tag

    def __str__(self):
        return "<{tag}>{token}</{tag}>".format(token=self.data, tag=self.tag)

    optional = _tagged_string("optional")
    var = _tagged_string("var")
    error = _tagged_string("error")
    help = _tagged_string("help")
    label = _tagged_string("label")
    header = _tagged_string("header")


def strip_tags(s):
    # our markup is a handful of one-line tags, not html
    return re.sub(r"<[^<]+?>", "", s)


def render_tags(s, terminal: blessings.Terminal):
    styles = {
        "optional": terminal.dim,
        "var": terminal.bold_white,
        "error": terminal.red,
        "label": terminal.bold,
        "help": terminal.italic_dim,
        "header": lambda text: terminal.bold(text.upper()),
    }

    def _replace_tag(match):
        tag, content, closing_tag = match.groups()
        if tag != closing_tag:
            raise ValueError("tag mismatch in content")
        return styles[tag](content)

    # tags may be nested, so substitute until nothing is left
    while re.search(TAG_REGEX, s):
        s = re.sub(TAG_REGEX, _replace_tag, s)
    return s


def split_options(
    tokens: Sequence[str], switches: Iterable[str] = ()
) -> Dict[str, str]:
    """``--key value`` and ``--key=value`` pairs as a dict

    Keys listed in ``switches`` take no value and map to ``"true"``.
    """
    switches = set(switches)
    options: Dict[str, str] = {}
    pending: List[str] = list(tokens)
    while pending:
        token = pending.pop(0)
        if not token.startswith("--") or len(token) == 2:
            raise CommandError('expected an option like --key, got "%s"' % token)
        key, separator, value = token[2:].partition("=")
        if not separator:
            if key in switches:
                value = "true"
            elif not pending:
                raise CommandError("option --%s needs a value" % key)
            else:
                value = pending.pop(0)
        options[key] = value
    return options


class FragileStreamHandler(logging.StreamHandler):
    """a StreamHandler that ignores broken output targets

    Output may be piped into a process that exits early (``| head``), which
    must not turn into logging tracebacks.
    """

    def handleError(self, record):
        pass
