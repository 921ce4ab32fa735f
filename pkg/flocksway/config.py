"""flat ``key=value`` configuration text and its mapping onto SimConfig"""

import dataclasses
import logging
import math
from typing import Any, Iterable, Mapping, Optional, Tuple

from .error import ConfigError, ParseError
from .model import (
    InfluencerPlacement,
    Placement,
    SimConfig,
    Topology,
    UpdateRule,
)
from .transformation import to_bool, to_enum, to_float, to_int, transform_value
from .validation import ValidationError

logger = logging.getLogger(__name__)

CONFIG_SCHEMA = {
    "k": to_int,
    "m": to_int,
    "R": to_float,
    "velocity": to_float,
    "domain_width": to_float,
    "domain_height": to_float,
    "epsilon": to_float,
    "ct_step": to_float,
    "dwell_tau": to_float,
    "desired_orientation": to_float,
    "convergence_tol": to_float,
    "convergence_fraction": to_float,
    "lost_tolerance": to_float,
    "lost_T": to_int,
    "lost_T_flock": to_int,
    "z_epsilon": to_float,
    "update_rule": to_enum(UpdateRule),
    "placement": to_enum(Placement),
    "influencer_placement": to_enum(InfluencerPlacement),
    "topology": to_enum(Topology),
    "max_steps": to_int,
    "stop_on_lossy": to_bool,
    "seed": to_int,
}

KEY_ALIASES = {"alpha": "desired_orientation", "v": "velocity"}


def canonical_key(key: str) -> str:
    key = key.strip().replace("-", "_")
    return KEY_ALIASES.get(key, key)


def convert_value(key: str, value: Any, line: Optional[int] = None) -> Any:
    name = canonical_key(key)
    try:
        transformator = CONFIG_SCHEMA[name]
    except KeyError:
        raise ParseError("unknown configuration key", key=key, line=line) from None
    try:
        return transform_value(transformator, value)
    except (ValidationError, ValueError) as exc:
        raise ParseError(
            "malformed value {!r}: {}".format(value, exc), key=key, line=line
        ) from exc


def parse_config_lines(lines: Iterable[str]) -> Mapping[str, Tuple[Any, int]]:
    """``{key: (value, line number)}`` of the assignments in the given text"""
    values = {}
    for number, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        key, separator, value = text.partition("=")
        if not separator or not key.strip():
            raise ParseError("expected key=value", line=number)
        values[canonical_key(key)] = (
            convert_value(key, value.strip(), number),
            number,
        )
    return values


def _build(base: SimConfig, values: Mapping[str, Tuple[Any, Optional[int]]]):
    try:
        return base.replace(**{key: value for key, (value, _) in values.items()})
    except ConfigError as exc:
        # name the offending key when the dataclass validation rejects it
        key = (getattr(exc, "data", None) or {}).get("key")
        line = values[key][1] if key in values else None
        raise ParseError(str(exc), key=key, line=line) from exc


def parse_config(
    path: Optional[str] = None,
    overrides: Optional[Mapping[str, Any]] = None,
    base: Optional[SimConfig] = None,
) -> SimConfig:
    """defaults, then the file at ``path``, then ``overrides``"""
    values = {}
    if path is not None:
        try:
            with open(path) as stream:
                values.update(parse_config_lines(stream))
        except OSError as exc:
            raise ParseError("cannot read configuration {}: {}".format(path, exc))
        logger.debug("read %d configuration keys from %s", len(values), path)
    for key, value in (overrides or {}).items():
        values[canonical_key(key)] = (convert_value(key, value), None)
    return _build(base or SimConfig(), values)


def _format_value(value: Any) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if hasattr(value, "value"):
        return str(value.value)
    if isinstance(value, float):
        return "pi" if value == math.pi else repr(value)
    return str(value)


def format_config(config: SimConfig) -> str:
    """the configuration as text ``parse_config`` reads back"""
    return "".join(
        "{}={}\n".format(field.name, _format_value(getattr(config, field.name)))
        for field in dataclasses.fields(config)
    )
