"""
QGATE text format.

    qgate 1
    dims: 2 2 2
    kind: dense | diagonal
    <entries as re,im separated by whitespace, row-major>

Dense files carry one matrix row per line, diagonal files a single line of
diagonal entries. '#' starts a comment anywhere on a line.
"""
import os
import re

import numpy as np

from config import Config
from utils.errors import QgateParseError
from utils.tensor import MultipartiteOperator

MAGIC = 'qgate 1'
KINDS = ('dense', 'diagonal')

_COMMA = re.compile(r'\s*,\s*')


def _content_lines(text: str) -> list:
    lines = []
    for raw in text.splitlines():
        line = raw.split('#', 1)[0].strip()
        if line:
            lines.append(line)
    return lines


def _header_value(line: str, key: str) -> str:
    name, sep, value = line.partition(':')
    if not sep or name.strip().lower() != key:
        raise QgateParseError(f"expected '{key}: ...', got {line!r}")
    return value.strip()


def _parse_entry(token: str) -> complex:
    parts = token.split(',')
    if len(parts) != 2:
        raise QgateParseError(f"entry {token!r} is not of the form re,im")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        raise QgateParseError(f"entry {token!r} is not numeric")


def parse_qgate(text: str, tol: float = Config.DEFAULT_TOL) -> MultipartiteOperator:
    lines = _content_lines(text)
    if len(lines) < 4:
        raise QgateParseError("file too short: need magic, dims, kind and entries")
    if ' '.join(lines[0].split()).lower() != MAGIC:
        raise QgateParseError(f"bad magic line {lines[0]!r}")

    try:
        dims = tuple(int(d) for d in _header_value(lines[1], 'dims').split())
    except ValueError:
        raise QgateParseError(f"bad dims line {lines[1]!r}")
    if not dims or any(d < 2 for d in dims):
        raise QgateParseError(f"local dimensions must be >= 2, got {dims}")

    kind = _header_value(lines[2], 'kind').lower()
    if kind not in KINDS:
        raise QgateParseError(f"unknown kind {kind!r}")

    side = int(np.prod(dims))
    body = [_COMMA.sub(',', line).split() for line in lines[3:]]
    if kind == 'diagonal':
        if len(body) != 1 or len(body[0]) != side:
            raise QgateParseError(f"diagonal gate needs one line of {side} entries")
        entries = np.diag([_parse_entry(t) for t in body[0]])
    else:
        if len(body) != side or any(len(row) != side for row in body):
            raise QgateParseError(f"dense gate needs {side} lines of {side} entries")
        entries = np.array([[_parse_entry(t) for t in row] for row in body])

    return MultipartiteOperator(dims, entries, tol)


def read_qgate(path: str, tol: float = Config.DEFAULT_TOL) -> MultipartiteOperator:
    try:
        with open(path, 'r') as f:
            text = f.read()
    except OSError as e:
        raise QgateParseError(f"could not read {path}: {e}")
    return parse_qgate(text, tol)


def _format_entry(z: complex) -> str:
    return f'{z.real:.17g},{z.imag:.17g}'


def format_qgate(U: MultipartiteOperator, comment: str = None) -> str:
    lines = []
    if comment:
        lines.extend(f'# {line}' for line in comment.splitlines())
    lines.append(MAGIC)
    lines.append('dims: ' + ' '.join(str(d) for d in U.dims))
    if not np.count_nonzero(U.entries - np.diag(np.diag(U.entries))):
        lines.append('kind: diagonal')
        lines.append(' '.join(_format_entry(z) for z in np.diag(U.entries)))
    else:
        lines.append('kind: dense')
        for row in U.entries:
            lines.append(' '.join(_format_entry(z) for z in row))
    return '\n'.join(lines) + '\n'


def write_qgate(U: MultipartiteOperator, path: str, comment: str = None) -> str:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w') as f:
        f.write(format_qgate(U, comment))
    return path
