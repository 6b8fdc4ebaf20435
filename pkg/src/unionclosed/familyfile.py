"""Plain-text family files.

::

    # comment
    n 3
    -
    1 2
    1 2 3

One set per line as 1-based elements, ``-`` for the empty set. The ``n``
header is optional and, when present, must come before any set; without it
n is the largest element seen.
"""
from __future__ import annotations

import os

from .errors import FamilyError
from .family import SetFamily, elements_of, mask_from_elements


class FamilyParseError(FamilyError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def parse_family(data: bytes | str) -> SetFamily:
    if isinstance(data, str):
        data = data.encode("utf-8")
    if data.startswith(b"\xef\xbb\xbf"):
        raise FamilyParseError("UTF-8 byte order mark is not allowed", 1)
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError as exc:
        raise FamilyParseError(f"non-ASCII byte at offset {exc.start}") from None

    n: int | None = None
    masks: list[int] = []
    where: dict[int, int] = {}
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw[:-1] if raw.endswith("\r") else raw
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "n":
            if n is not None:
                raise FamilyParseError("repeated n header", lineno)
            if masks:
                raise FamilyParseError("n header must precede all sets", lineno)
            if len(tokens) != 2 or not tokens[1].isdigit():
                raise FamilyParseError("header must read 'n <int>'", lineno)
            n = int(tokens[1])
            if n > 20:
                raise FamilyParseError(f"ground size {n} exceeds 20", lineno)
            continue
        if tokens == ["-"]:
            elements: list[int] = []
        else:
            elements = []
            for tok in tokens:
                if not tok.isdigit():
                    raise FamilyParseError(f"bad element {tok!r}", lineno)
                e = int(tok)
                if e < 1:
                    raise FamilyParseError("elements are 1-based", lineno)
                if n is not None and e > n:
                    raise FamilyParseError(f"element {e} outside [1, {n}]", lineno)
                if e > 20:
                    raise FamilyParseError(f"element {e} exceeds the ground size limit 20", lineno)
                elements.append(e)
            if len(set(elements)) != len(elements):
                raise FamilyParseError("repeated element in a set", lineno)
        mask = mask_from_elements(elements)
        if mask in where:
            raise FamilyParseError(f"duplicate set (first seen on line {where[mask]})", lineno)
        where[mask] = lineno
        masks.append(mask)
    if n is None:
        n = max(masks, default=0).bit_length()
    return SetFamily.from_masks(n, masks)


def load_family(path: str | os.PathLike) -> SetFamily:
    with open(path, "rb") as fh:
        return parse_family(fh.read())


def format_family(F: SetFamily) -> str:
    lines = [f"n {F.n}"]
    for m in F.members:
        lines.append(" ".join(map(str, elements_of(m))) if m else "-")
    return "\n".join(lines) + "\n"


def save_family(F: SetFamily, path: str | os.PathLike):
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_family(F))
