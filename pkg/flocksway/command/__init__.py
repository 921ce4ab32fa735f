"""command modules of the flocksway CLI

Every command takes its settings as ``--key value`` options. Options that
name a configuration key override the defaults and the ``--config`` file.
"""

from typing import Dict, Optional, Sequence, Tuple

from ..commands import var
from ..config import parse_config
from ..error import CommandError
from ..model import SimConfig
from ..transformation import to_int, transform_value
from ..utils import split_options
from ..validation import ValidationError


def options_var():
    return var(
        "options",
        is_optional=True,
        greedy=True,
        description="--key value pairs, configuration keys or command settings",
    )


def read_options(
    tokens: Optional[Sequence[str]], *settings: str
) -> Tuple[SimConfig, Dict[str, Optional[str]]]:
    """split options into a configuration and the named command settings"""
    options = split_options(tokens or ())
    path = options.pop("config", None)
    picked = {setting: options.pop(setting, None) for setting in settings}
    return parse_config(path, overrides=options), picked


def int_setting(settings, key: str, default: int, minimum: int = 0) -> int:
    text = settings.get(key)
    if text is None:
        return default
    try:
        value = transform_value(to_int, text)
    except ValidationError as exc:
        raise CommandError("--{}: {}".format(key, exc)) from exc
    if value < minimum:
        raise CommandError("--%s must be at least %d" % (key, minimum))
    return value
