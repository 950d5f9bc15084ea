import time
from functools import wraps

import numpy as np

from utils.errors import QgateParseError

_CONSTANTS = {'pi': np.pi, '2pi': 2 * np.pi}


def func_timer(f):
    @wraps(f)
    def wrapper(*args, **kwargs):
        start = time.time()
        result = f(*args, **kwargs)
        end = time.time()
        print(f'{f.__name__} took {end - start:.2f} seconds to execute')
        return result
    return wrapper


def parse_number(text: str):
    """Float, or complex when the text carries an imaginary unit ('0.5-0.5j', '1+2i')"""
    text = text.strip().lower()
    if text in _CONSTANTS:
        return float(_CONSTANTS[text])
    try:
        return float(text)
    except ValueError:
        pass
    try:
        return complex(text.replace('i', 'j').replace(' ', ''))
    except ValueError:
        raise QgateParseError(f"{text!r} is not a number")


def parse_param(text: str) -> tuple:
    """'name=value' -> (name, number)"""
    name, sep, value = text.partition('=')
    if not sep or not name.strip():
        raise QgateParseError(f"parameter {text!r} is not of the form name=value")
    return name.strip(), parse_number(value)


def parse_grid(text: str) -> tuple:
    """'name=lo:hi:steps' -> (name, (lo, hi, steps))"""
    name, sep, spec = text.partition('=')
    parts = spec.split(':')
    if not sep or len(parts) != 3:
        raise QgateParseError(f"grid {text!r} is not of the form name=lo:hi:steps")
    lo, hi = (float(parse_number(p)) for p in parts[:2])
    try:
        steps = int(parts[2])
    except ValueError:
        raise QgateParseError(f"grid steps {parts[2]!r} is not an integer")
    if steps < 1:
        raise QgateParseError("grid needs at least one step")
    return name.strip(), (lo, hi, steps)


def parse_permutation(text: str, n: int) -> tuple:
    """1-based comma list '2,1,3' -> 0-based tuple (1, 0, 2)"""
    try:
        perm = tuple(int(p) - 1 for p in text.split(','))
    except ValueError:
        raise QgateParseError(f"permutation {text!r} must list party numbers")
    if sorted(perm) != list(range(n)):
        raise QgateParseError(f"{text!r} is not a permutation of parties 1..{n}")
    return perm
