"""Text formats for tournaments (.trn) and colorings (.clr).

trn::

    <n>
    <C(n,2) characters of 0/1, orientation bits in arc-id order>

clr::

    <m> <k>
    <m space-separated color ids in arc-id order>

Readers tolerate arbitrary whitespace; writers emit exactly the layout above.
"""

from __future__ import annotations

import json
from math import comb
from pathlib import Path

from .arborescence import Arborescence
from .coloring import ArcColoring
from .errors import DomainError
from .tournament import Tournament


class FormatError(DomainError):
    pass


def dumps_trn(t: Tournament) -> str:
    return f"{t.n}\n{t.bitstring}\n"


def loads_trn(text: str) -> Tournament:
    tokens = text.split()
    if not tokens:
        raise FormatError("empty tournament file")
    try:
        n = int(tokens[0])
    except ValueError:
        raise FormatError(f"bad vertex count {tokens[0]!r}") from None
    if n < 1:
        raise FormatError("vertex count must be positive")
    bits = "".join(tokens[1:])
    if len(bits) != comb(n, 2) or set(bits) - {"0", "1"}:
        raise FormatError(f"expected {comb(n, 2)} orientation bits for n={n}")
    return Tournament.from_bitstring(n, bits)


def dumps_clr(gamma: ArcColoring) -> str:
    return f"{gamma.m} {gamma.k}\n{' '.join(map(str, gamma.colors))}\n"


def loads_clr(text: str) -> ArcColoring:
    tokens = text.split()
    if len(tokens) < 2:
        raise FormatError("coloring header needs m and k")
    try:
        m, k = int(tokens[0]), int(tokens[1])
        colors = tuple(int(x) for x in tokens[2:])
    except ValueError as exc:
        raise FormatError(f"non-integer token in coloring: {exc}") from None
    if len(colors) != m:
        raise FormatError(f"header says m={m}, found {len(colors)} color ids")
    if set(colors) != set(range(k)):
        raise FormatError(f"color ids are not exactly 0..{k - 1}")
    return ArcColoring(colors)


def read_trn(path: str | Path) -> Tournament:
    return loads_trn(Path(path).read_text())


def write_trn(path: str | Path, t: Tournament) -> None:
    Path(path).write_text(dumps_trn(t))


def read_clr(path: str | Path) -> ArcColoring:
    return loads_clr(Path(path).read_text())


def write_clr(path: str | Path, gamma: ArcColoring) -> None:
    Path(path).write_text(dumps_clr(gamma))


def dumps_witness(t: Tournament, gamma: ArcColoring, tree: Arborescence) -> str:
    return json.dumps(tree.to_json(t, gamma), sort_keys=True)


def loads_witness(text: str) -> Arborescence:
    obj = json.loads(text)
    try:
        return Arborescence(int(obj["root"]), tuple(obj["parents"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed witness: {exc}") from None
