import math
from functools import update_wrapper
from typing import Any, Callable, Iterable, Mapping, Sequence, Union

from .validation import ValidationError, one_of, validate_value

TRUE_CHOICES = ("true", "1", "on", "yes", "enable")
FALSE_CHOICES = ("false", "0", "off", "no", "disable")


T_Transformable = Union[Callable[[Any], Any], "Transformator"]


def transform_value(
    transformator: Union[T_Transformable, Iterable[T_Transformable]], value
):
    if isinstance(transformator, Iterable):
        transformators = transformator
    else:
        transformators = [transformator]

    for transformator in transformators:
        if getattr(transformator, "__is_transformator", False):
            transformator = transformator()  # type: ignore
        value = getattr(transformator, "transform", transformator)(value)

    return value


class Transformator:
    def __init__(self, func, args: Sequence[Any], kwargs: Mapping[str, Any]):
        self.func = func
        self.args = args
        self.kwargs = kwargs

    def transform(self, value):
        return self.func(*self.args, value, **self.kwargs)

    def __call__(self, value):
        return self.transform(value)


def simple_transformator(func: Callable[..., Any]) -> Callable[..., Transformator]:
    def decorator(*args, **kwargs):
        transformator = Transformator(func, args, kwargs)
        update_wrapper(transformator, func)
        return transformator

    decorator.__is_transformator = True
    return decorator


@simple_transformator
def to_bool(value, choices=(TRUE_CHOICES, FALSE_CHOICES)):
    if isinstance(value, bool):
        return value
    true_values, false_values = choices
    value = str(value).strip().lower()
    validate_value(one_of(true_values + false_values), value)
    return value in true_values


@simple_transformator
def to_int(value):
    if isinstance(value, bool):
        raise ValidationError("must be an integer")
    if isinstance(value, int):
        return value
    try:
        return int(str(value).strip())
    except ValueError as exc:
        raise ValidationError("must be an integer, got %r" % value) from exc


@simple_transformator
def to_float(value):
    """parse a real number, accepting "pi" based expressions like "pi/2" """
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    text = str(value).strip().lower().replace("π", "pi")
    if "pi" in text:
        factor, _, divisor = text.replace("*", "").partition("/")
        factor = factor.replace("pi", "").strip()
        factor = {"": "1", "+": "1", "-": "-1"}.get(factor, factor)
        try:
            result = float(factor) * math.pi
            if divisor:
                result /= float(divisor)
        except ValueError as exc:
            raise ValidationError("must be a real number, got %r" % value) from exc
        return result
    try:
        return float(text)
    except ValueError as exc:
        raise ValidationError("must be a real number, got %r" % value) from exc


@simple_transformator
def to_int_list(value, separator=","):
    if isinstance(value, (list, tuple)):
        return [to_int()(item) for item in value]
    items = [item for item in str(value).split(separator) if item.strip()]
    if not items:
        raise ValidationError("must be a non-empty list of integers")
    return [to_int()(item) for item in items]


@simple_transformator
def to_enum(enum, value):
    """converts a literal value (name or value, case-insensitive) to an enum member"""
    if isinstance(value, enum):
        return value
    needle = str(value).strip().lower()
    for item in tuple(enum):
        if needle in (str(item.value).lower(), item.name.lower()):
            return item
    validate_value(one_of({str(item.value) for item in enum}), value)
