from __future__ import annotations

import io
import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import BinaryIO, Iterable, Iterator, TextIO

import numpy as np

from yaosweep.__init__ import console
from yaosweep.constants import TOTAL_LABEL
from yaosweep.exceptions import InstanceError, ParseError
from yaosweep.geometry.core import Point
from yaosweep.mst.kruskal import MstResult
from yaosweep.types import IndexArray, PointArray
from yaosweep.utils.colorlogging import ColorLog

logger = ColorLog(console, __name__).logger

_SEPARATORS = re.compile(r"[,\s]+")


def format_number(value: float) -> str:
    """Shortest round-trip decimal, with a trailing `.0` dropped (2.0 -> "2")."""
    text = repr(float(value))
    return text[:-2] if text.endswith(".0") else text


@dataclass(frozen=True, eq=False)
class Instance:
    """A de-duplicated point set.

    Args:
        d (int):
            Dimension, 0 for an empty input of unknown dimension.

        coords (numpy.ndarray[n, d]):
            Distinct points, in order of first appearance.

        original_indices (numpy.ndarray[n]):
            Input position of each distinct point.

        duplicate_map (dict[int, int]):
            Input position of every repeated point -> input position of its first occurrence.

        n_original (int):
            Number of points before de-duplication.
    """

    d: int
    coords: PointArray
    original_indices: IndexArray
    duplicate_map: dict[int, int] = field(default_factory=dict)
    n_original: int = 0

    def __post_init__(self) -> None:
        for name in ("coords", "original_indices"):
            array = np.array(getattr(self, name), copy=True)
            array.flags.writeable = False
            object.__setattr__(self, name, array)

    def __len__(self) -> int:
        return int(self.coords.shape[0])

    @cached_property
    def points(self) -> tuple[Point, ...]:
        """The distinct points, indexed by position after de-duplication."""
        return tuple(Point(tuple(row), index=i) for i, row in enumerate(self.coords.tolist()))

    @classmethod
    def from_coordinates(cls, coordinates: PointArray | Iterable[Iterable[float]], d: int | None = None) -> Instance:
        """Build an instance from raw rows, merging exact duplicates.

        Raises:
            InstanceError: On mixed dimensions or non-finite values.
        """
        rows = [tuple(float(c) for c in row) for row in coordinates]
        if d is None:
            d = len(rows[0]) if rows else 0
        for i, row in enumerate(rows):
            if len(row) != d:
                raise InstanceError(f"Point {i} has {len(row)} coordinates, expected {d}.")
            if not all(math.isfinite(c) for c in row):
                raise InstanceError(f"Point {i} has non-finite coordinates {row}.")
        return cls._deduplicated(rows, d)

    @classmethod
    def _deduplicated(cls, rows: list[tuple[float, ...]], d: int) -> Instance:
        first_seen: dict[tuple[float, ...], int] = {}
        kept: list[int] = []
        duplicates: dict[int, int] = {}
        for i, row in enumerate(rows):
            if row in first_seen:
                duplicates[i] = first_seen[row]
            else:
                first_seen[row] = i
                kept.append(i)
        if duplicates:
            logger.warning(f"Merged {len(duplicates)} duplicate points.")
        coords = np.asarray([rows[i] for i in kept], dtype=np.float64).reshape(len(kept), d)
        return cls(
            d=d,
            coords=coords,
            original_indices=np.asarray(kept, dtype=np.int64),
            duplicate_map=duplicates,
            n_original=len(rows),
        )


def _raw_lines(source: BinaryIO | TextIO | str | bytes) -> Iterable[str | bytes]:
    if isinstance(source, (str, bytes)):
        return source.splitlines()
    return source


def _lines(source: BinaryIO | TextIO | str | bytes) -> Iterator[tuple[int, str]]:
    """Numbered lines, each decoded as UTF-8 on its own."""
    lines = iter(_raw_lines(source))
    line_number = 0
    while True:
        line_number += 1
        try:
            line = next(lines)
        except StopIteration:
            return
        except UnicodeDecodeError as e:
            raise ParseError(f"invalid UTF-8 ({e.reason})", line_number) from None
        if isinstance(line, bytes):
            try:
                line = line.decode("utf-8")
            except UnicodeDecodeError as e:
                raise ParseError(f"invalid UTF-8 at byte {e.start} ({e.reason})", line_number) from None
        yield line_number, line


def read_points(source: BinaryIO | TextIO | str | bytes, d: int | None = None) -> Instance:
    """Parse one point per line; coordinates separated by commas or whitespace.

    Blank lines and lines starting with '#' are skipped. The dimension is
    taken from the first data line unless `d` is given.

    Raises:
        ParseError: With the 1-based line number, on arity mismatch, a
            non-numeric token, a non-finite value or bytes that are not UTF-8.
    """
    rows: list[tuple[float, ...]] = []
    for line_number, line in _lines(source):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        tokens = [t for t in _SEPARATORS.split(text) if t]
        try:
            row = tuple(float(t) for t in tokens)
        except ValueError:
            raise ParseError(f"non-numeric token in '{text}'", line_number) from None
        if not all(math.isfinite(c) for c in row):
            raise ParseError(f"non-finite coordinate in '{text}'", line_number)
        if d is None:
            d = len(row)
        if len(row) != d:
            raise ParseError(f"expected {d} coordinates, found {len(row)}", line_number)
        rows.append(row)
    return Instance._deduplicated(rows, d or 0)


def format_result(r: MstResult, inst: Instance) -> str:
    """Edge lines "u\\tv\\tw" in input indices sorted by (w, u, v), then "total\\tW".

    Repeated input points are attached to their first occurrence with weight 0.
    """
    lines: list[tuple[float, int, int]] = []
    for edge in r.edges:
        u, v = (int(inst.original_indices[i]) for i in edge.pair)
        lines.append((edge.weight, min(u, v), max(u, v)))
    for duplicate, representative in inst.duplicate_map.items():
        lines.append((0.0, min(duplicate, representative), max(duplicate, representative)))
    lines.sort()

    out = [f"{u}\t{v}\t{format_number(w)}\n" for w, u, v in lines]
    out.append(f"{TOTAL_LABEL}\t{format_number(r.total_weight)}\n")
    return "".join(out)


def format_points(coords: PointArray) -> str:
    """One point per line, coordinates separated by single spaces."""
    return "".join(" ".join(format_number(c) for c in row) + "\n" for row in np.asarray(coords).tolist())


def _write(sink: BinaryIO | TextIO, text: str) -> None:
    if isinstance(sink, io.TextIOBase):
        sink.write(text)
    else:
        sink.write(text.encode("utf-8"))  # type: ignore[arg-type]


def write_result(r: MstResult, inst: Instance, sink: BinaryIO | TextIO) -> None:
    """Write `format_result(r, inst)` as UTF-8 with LF line endings."""
    _write(sink, format_result(r, inst))


def write_points(coords: PointArray, sink: BinaryIO | TextIO) -> None:
    """Write a point dump that `read_points` parses back bit-for-bit."""
    _write(sink, format_points(coords))
