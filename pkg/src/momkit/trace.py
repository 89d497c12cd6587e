"""Replayable move sequences shared by every module."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator


@dataclass(frozen=True)
class Move:
    kind: str
    params: tuple = ()

    def __str__(self) -> str:
        return " ".join([self.kind, *map(str, self.params)])

    @classmethod
    def parse(cls, line: str) -> "Move":
        tok = line.split()
        params = []
        for t in tok[1:]:
            try:
                params.append(int(t))
            except ValueError:
                params.append(t)
        return cls(tok[0], tuple(params))


@dataclass(frozen=True)
class MoveTrace:
    moves: tuple[Move, ...] = ()
    # per-step annotations (measures, censuses); not part of equality
    notes: tuple = field(default=(), compare=False)

    def __iter__(self) -> Iterator[Move]:
        return iter(self.moves)

    def __len__(self) -> int:
        return len(self.moves)

    def __add__(self, other: "MoveTrace") -> "MoveTrace":
        return MoveTrace(self.moves + other.moves, self.notes + other.notes)

    def kinds(self) -> list[str]:
        return [m.kind for m in self.moves]

    def to_text(self) -> str:
        return "".join(f"{m}\n" for m in self.moves)

    def to_json(self) -> str:
        return json.dumps([{"kind": m.kind, "params": list(m.params)} for m in self.moves])

    @classmethod
    def from_moves(cls, moves: Iterable[Move], notes: Iterable = ()) -> "MoveTrace":
        return cls(tuple(moves), tuple(notes))

    @classmethod
    def parse(cls, text: str) -> "MoveTrace":
        moves = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if line:
                moves.append(Move.parse(line))
        return cls(tuple(moves))
