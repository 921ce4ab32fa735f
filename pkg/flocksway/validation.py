import math
import numbers
from functools import update_wrapper, wraps
from typing import Any, Callable

TWO_PI = 2 * math.pi


def validate(**fields):
    """validate keyword arguments of the decorated function before calling it"""

    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            for field, validator in fields.items():
                try:
                    field_value = kwargs[field]
                except KeyError:
                    continue
                try:
                    validate_value(validator, field_value)
                except ValidationError as exc:
                    exc.field = field
                    raise exc
            return func(*args, **kwargs)

        return wrapper

    return decorator


def validate_value(validator, value):
    if getattr(validator, "__is_validator", False):
        # uninstantiated validators are allowed as a shorthand
        validator = validator()
    validator.validate(value)


class ValidationError(ValueError):
    def __init__(self, *args: Any, field=None) -> None:
        super().__init__(*args)
        self.field = field


class Validator:
    def __init__(self, func, args, kwargs):
        self.func = func
        self.args = args
        self.kwargs = kwargs

    def validate(self, value):
        self.func(*self.args, value, **self.kwargs)

    def __call__(self, value):
        self.validate(value)


def simple_validator(func: Callable[..., Any]) -> Callable[..., Validator]:
    def decorator(*args, **kwargs):
        validator = Validator(func, args, kwargs)
        update_wrapper(validator, func)
        return validator

    decorator.__is_validator = True
    return decorator


@simple_validator
def is_finite(value):
    try:
        finite = math.isfinite(value)
    except TypeError as exc:
        raise ValidationError("must be a real number") from exc
    if not finite:
        raise ValidationError("must be finite, got %r" % value)


@simple_validator
def is_gt(gt_value, value):
    if not value > gt_value:
        raise ValidationError("must be greater than %g" % gt_value)


@simple_validator
def is_gte(gte_value, value):
    if not value >= gte_value:
        raise ValidationError("must be greater than or equal to %g" % gte_value)


@simple_validator
def is_angle(value):
    """a heading in the half-open range [0, 2π)"""
    validate_value(is_finite, value)
    if not 0 <= value < TWO_PI:
        raise ValidationError("must be an angle within [0, 2π), got %r" % value)


@simple_validator
def is_unit_interval(value):
    validate_value(is_finite, value)
    if not 0 <= value <= 1:
        raise ValidationError("must be within [0, 1], got %r" % value)


@simple_validator
def one_of(choices, value):
    if value not in choices:
        raise ValidationError(
            "must be one of: %s" % ", ".join(sorted(map(str, choices)))
        )


@simple_validator
def is_int(value):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise ValidationError("must be an integer, got %r" % (value,))


@simple_validator
def each(validator, values):
    """apply a validator to every item of a sequence"""
    for value in values:
        validate_value(validator, value)
