"""Problem-file reader.

Text format: ``key = value`` lines for scalars and the input pmf, and
``key:`` headers followed by indented rows for matrices. ``#`` starts a
comment. Matrices are row-major ``|Y| x |X|`` with ``P(y|x)`` in row y,
column x. A JSON object with the same keys is accepted as well::

    main:
      0.9 0.1
      0.1 0.9
    eaves:
      0.7 0.3
      0.3 0.7
    input = 0.5 0.5
    R = 1
    theta = 0.085
    epsilon = 1e-3
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .channel import Channel
from .errors import ProblemFileError
from .optimizer.problem import SecrecyProblem
from .policy import DEFAULT_POLICY
from .prob_core import Distribution

MATRIX_KEYS = ("main", "eaves")
FLOAT_KEYS = ("R", "theta", "epsilon", "tol")
INT_KEYS = ("u_size", "seed", "max_iter", "restarts")
VECTOR_KEYS = ("input",)
KNOWN = set(MATRIX_KEYS + FLOAT_KEYS + INT_KEYS + VECTOR_KEYS)


@dataclass
class ProblemFile:
    main: Optional[np.ndarray] = None
    eaves: Optional[np.ndarray] = None
    input: Optional[np.ndarray] = None
    R: Optional[float] = None
    theta: Optional[float] = None
    epsilon: Optional[float] = None
    u_size: Optional[int] = None
    seed: int = 0
    tol: float = 1e-6
    max_iter: int = 500
    restarts: int = 8

    def require(self, *keys):
        missing = [k for k in keys if getattr(self, k) is None]
        if missing:
            raise ProblemFileError(f"missing required key(s): {', '.join(missing)}")

    def channels(self) -> tuple[Channel, Channel]:
        self.require("main", "eaves")
        return _channel(self.main, "main"), _channel(self.eaves, "eaves")

    def problem(self) -> SecrecyProblem:
        self.require("main", "eaves", "input", "R", "theta", "epsilon")
        main, eaves = self.channels()
        if main.input_size != eaves.input_size or main.input_size != self.input.size:
            raise ProblemFileError(
                f"dimension mismatch: main has {main.input_size} inputs, eaves "
                f"{eaves.input_size}, input pmf {self.input.size}"
            )
        if abs(self.input.sum() - 1.0) > DEFAULT_POLICY.file_stochastic_tol:
            raise ProblemFileError(f"input pmf sums to {self.input.sum()!r}")
        p_x = Distribution.normalized(self.input)
        return SecrecyProblem.from_channels(
            main, eaves, p_x, self.R, self.theta, self.epsilon, self.u_size
        )


def _channel(w: np.ndarray, name: str) -> Channel:
    if np.any(w < 0):
        raise ProblemFileError(f"{name}: negative transition probability")
    col = w.sum(axis=0)
    bad = np.flatnonzero(np.abs(col - 1.0) > DEFAULT_POLICY.file_stochastic_tol)
    if bad.size:
        raise ProblemFileError(
            f"{name}: column {int(bad[0])} sums to {col[bad[0]]!r}; matrices must be "
            "column-stochastic (rows are outputs y, columns inputs x)"
        )
    return Channel(w / col[None, :])


def _number(tok: str, line: int, col: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise ProblemFileError(f"cannot parse number {tok!r}", line, col) from None


def _tokens(text: str, offset: int):
    """(token, 1-based column) pairs."""
    out, i = [], 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        j = i
        while j < len(text) and not text[j].isspace():
            j += 1
        out.append((text[i:j], offset + i + 1))
        i = j
    return out


def _assign(pf: ProblemFile, key: str, value, line: int):
    if key not in KNOWN:
        raise ProblemFileError(f"unknown key {key!r}", line)
    try:
        if key in FLOAT_KEYS:
            value = float(value)
        elif key in INT_KEYS:
            if isinstance(value, float) and not value.is_integer():
                raise ValueError
            value = int(value)
        elif key in VECTOR_KEYS:
            value = np.array(value, dtype=float).ravel()
        else:
            value = np.array(value, dtype=float)
    except (TypeError, ValueError):
        raise ProblemFileError(f"bad value for {key!r}", line) from None
    setattr(pf, key, value)


def parse_text(text: str) -> ProblemFile:
    pf = ProblemFile()
    seen = set()
    block_key, block_rows, block_line = None, [], 0

    def close_block():
        nonlocal block_key, block_rows
        if block_key is None:
            return
        if not block_rows:
            raise ProblemFileError(f"matrix {block_key!r} has no rows", block_line)
        width = len(block_rows[0][1])
        for k, (ln, row) in enumerate(block_rows):
            if len(row) != width:
                raise ProblemFileError(
                    f"matrix {block_key!r}, row {k}: expected {width} entries, got {len(row)}",
                    ln,
                )
        _assign(pf, block_key, [r for _, r in block_rows], block_line)
        block_key, block_rows = None, []

    for ln, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        indented = body[0].isspace()
        if indented and block_key is not None:
            row = [_number(tok, ln, c) for tok, c in _tokens(body, 0)]
            block_rows.append((ln, row))
            continue
        if indented:
            raise ProblemFileError("indented line outside a matrix block", ln, 1)
        close_block()
        stripped = body.strip()
        if "=" in stripped:
            key, _, val = stripped.partition("=")
            key = key.strip()
            col0 = body.index("=") + 1
            toks = _tokens(val, col0)
            if not toks:
                raise ProblemFileError(f"empty value for {key!r}", ln, col0 + 1)
            nums = [_number(t, ln, c) for t, c in toks]
            value = nums if key in VECTOR_KEYS else nums[0]
            if key not in VECTOR_KEYS and len(nums) != 1:
                raise ProblemFileError(f"{key!r} takes a single value", ln, toks[1][1])
        elif stripped.endswith(":"):
            key = stripped[:-1].strip()
            if key not in MATRIX_KEYS:
                raise ProblemFileError(f"unknown matrix block {key!r}", ln, 1)
            block_key, block_line = key, ln
            value = None
        else:
            raise ProblemFileError("expected 'key = value' or 'key:'", ln, 1)
        if key in seen:
            raise ProblemFileError(f"duplicate key {key!r}", ln, 1)
        seen.add(key)
        if value is not None:
            _assign(pf, key, value, ln)
    close_block()
    return pf


def parse_json(text: str) -> ProblemFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        raise ProblemFileError("top-level JSON value must be an object", 1, 1)
    pf = ProblemFile()
    for key, value in data.items():
        if key in MATRIX_KEYS:
            if not isinstance(value, list) or not value:
                raise ProblemFileError(f"matrix {key!r} must be a non-empty list of rows")
            width = len(value[0]) if isinstance(value[0], list) else -1
            for k, row in enumerate(value):
                if not isinstance(row, list) or len(row) != width:
                    raise ProblemFileError(f"matrix {key!r}, row {k}: malformed row")
        if isinstance(value, str) and value.lower() in ("inf", "infinity"):
            value = math.inf
        _assign(pf, key, value, None)
    return pf


def load(path) -> ProblemFile:
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return parse_json(text)
    return parse_text(text)
