"""Reading, validating and summarising lifetime samples."""

import math
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import NamedTuple

import numpy as np

__all__ = [
    "DataError",
    "Sample",
    "Summary",
    "parse_dataset",
    "load_dataset",
    "format_dataset",
    "summary",
    "glassfiber",
]


class DataError(ValueError):
    """Malformed or invalid dataset."""


@dataclass(frozen=True)
class Sample:
    """Positive, finite lifetime observations kept in input order."""

    values: tuple
    source: str = ""

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise DataError("a sample needs at least one observation")
        for i, v in enumerate(vals):
            if not math.isfinite(v):
                raise DataError(f"observation {i + 1} is not finite: {v!r}")
            if v <= 0.0:
                raise DataError(f"observation {i + 1} is a nonpositive lifetime: {v!r}")
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.array(self.values)

    def sorted(self) -> np.ndarray:
        return np.sort(self.as_array())

    def __len__(self):
        return len(self.values)


class Summary(NamedTuple):
    n: int
    mean: float
    sd: float
    min: float
    max: float
    median: float
    degenerate: bool


def parse_dataset(text: str, source: str = "<text>") -> Sample:
    """Parse whitespace-separated decimals; lines starting with '#' are comments."""
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.lstrip()
        if not stripped or stripped.startswith("#"):
            continue
        for match in re.finditer(r"\S+", line):
            token, col = match.group(), match.start() + 1
            try:
                v = float(token)
            except ValueError:
                raise DataError(
                    f"{source}: line {lineno}, column {col}: not a number: {token!r}"
                ) from None
            if not math.isfinite(v):
                raise DataError(f"{source}: line {lineno}, column {col}: value is not finite: {token!r}")
            if v <= 0.0:
                raise DataError(
                    f"{source}: line {lineno}, column {col}: lifetimes must be positive, got {token}"
                )
            values.append(v)
    if not values:
        raise DataError(f"{source}: no observations found")
    return Sample(tuple(values), source)


def load_dataset(path) -> Sample:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror or exc}") from None
    return parse_dataset(text, source=str(path))


def format_dataset(sample: Sample, per_line: int = 10) -> str:
    # repr() gives the shortest string that round-trips exactly
    lines = []
    if sample.source:
        lines.append(f"# source: {sample.source}")
    vals = [repr(v) for v in sample.values]
    for i in range(0, len(vals), per_line):
        lines.append(" ".join(vals[i : i + per_line]))
    return "\n".join(lines) + "\n"


def summary(sample: Sample) -> Summary:
    """n, mean, sd (n - 1 denominator), min, max and median.

    Sums use ``math.fsum`` so the result does not depend on input order.
    A single observation gives sd = 0 with ``degenerate`` set.
    """
    vals = sample.values
    n = len(vals)
    mean = math.fsum(vals) / n
    if n > 1:
        sd = math.sqrt(math.fsum((v - mean) ** 2 for v in vals) / (n - 1))
    else:
        sd = 0.0
    s = sorted(vals)
    mid = n // 2
    median = s[mid] if n % 2 else 0.5 * (s[mid - 1] + s[mid])
    return Summary(n, mean, sd, s[0], s[-1], median, n == 1 or sd == 0.0)


def glassfiber() -> Sample:
    """The 63 glass-fibre strengths of Smith and Naylor (1987)."""
    text = resources.files("exgamma").joinpath("data/glassfiber.txt").read_text(encoding="utf-8")
    return parse_dataset(text, source="glassfiber (Smith & Naylor 1987)")
