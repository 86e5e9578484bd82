"""Core VASS data model: locations, transitions, paths and the D / F matrices.

Everything here is immutable after construction. ``Vass.build`` numbers
transitions 0, 1, ...; sub-VASSs keep the ids of the transitions they were
cut from, so a certificate for a sub-VASS still talks about the original
transitions. Matrix columns follow the order of ``Vass.transitions``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence


class InvalidVass(ValueError):
    """Raised when a VASS description violates the data-model invariants."""


class InvalidPath(ValueError):
    """Raised when consecutive transitions of a path are not connected."""


@dataclass(frozen=True)
class Transition:
    id: int
    source: str
    target: str
    update: tuple[int, ...]

    @property
    def is_loop(self) -> bool:
        return self.source == self.target


@dataclass(frozen=True)
class Vass:
    dim: int
    locations: tuple[str, ...]
    transitions: tuple[Transition, ...]
    _loc_index: dict = field(init=False, repr=False, compare=False, hash=False)
    _by_id: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 1:
            raise InvalidVass(f"dimension must be a positive integer, got {self.dim!r}")
        if len(set(self.locations)) != len(self.locations):
            raise InvalidVass("duplicate location names")
        index = {loc: i for i, loc in enumerate(self.locations)}
        ids = set()
        for t in self.transitions:
            if t.source not in index or t.target not in index:
                raise InvalidVass(f"transition {t.id} uses an unknown location")
            if len(t.update) != self.dim:
                raise InvalidVass(
                    f"transition {t.id} has {len(t.update)} update entries, expected {self.dim}"
                )
            if t.id in ids:
                raise InvalidVass(f"duplicate transition id {t.id}")
            ids.add(t.id)
        object.__setattr__(self, "_loc_index", index)
        object.__setattr__(self, "_by_id", {t.id: t for t in self.transitions})

    @classmethod
    def build(
        cls,
        dim: int,
        locations: Iterable[str],
        edges: Iterable[tuple[str, str, Sequence[int]]],
    ) -> "Vass":
        """Build a VASS from ``(source, target, update)`` triples, numbering them 0, 1, ..."""
        transitions = tuple(
            Transition(i, src, dst, tuple(int(x) for x in upd))
            for i, (src, dst, upd) in enumerate(edges)
        )
        return cls(dim, tuple(locations), transitions)

    def location_index(self, loc: str) -> int:
        return self._loc_index[loc]

    def has_location(self, loc: str) -> bool:
        return loc in self._loc_index

    def transition(self, tid: int) -> Transition:
        return self._by_id[tid]

    def has_transition(self, tid: int) -> bool:
        return tid in self._by_id

    @property
    def transition_ids(self) -> list[int]:
        return [t.id for t in self.transitions]

    def sub_vass(self, locations: Iterable[str], transition_ids: Iterable[int]) -> "Vass":
        """Restriction to the given locations and transitions; ids are kept."""
        locs = set(locations)
        keep = set(transition_ids)
        return Vass(
            self.dim,
            tuple(loc for loc in self.locations if loc in locs),
            tuple(t for t in self.transitions if t.id in keep),
        )

    def without(self, transition_ids: Iterable[int]) -> "Vass":
        drop = set(transition_ids)
        return Vass(
            self.dim,
            self.locations,
            tuple(t for t in self.transitions if t.id not in drop),
        )

    def max_update(self) -> int:
        return max((abs(x) for t in self.transitions for x in t.update), default=0)

    # --- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "locations": list(self.locations),
            "transitions": [
                {"from": t.source, "to": t.target, "update": list(t.update)}
                for t in self.transitions
            ],
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data: Mapping) -> "Vass":
        if not isinstance(data, Mapping):
            raise InvalidVass("top-level value must be an object")
        for key in ("dim", "locations", "transitions"):
            if key not in data:
                raise InvalidVass(f"missing field '{key}'")
        dim = data["dim"]
        if isinstance(dim, bool) or not isinstance(dim, int):
            raise InvalidVass("field 'dim' must be an integer")
        locations = data["locations"]
        if not isinstance(locations, list) or not all(isinstance(l, str) for l in locations):
            raise InvalidVass("field 'locations' must be a list of strings")
        edges = []
        if not isinstance(data["transitions"], list):
            raise InvalidVass("field 'transitions' must be a list")
        for i, entry in enumerate(data["transitions"]):
            where = f"transitions[{i}]"
            if not isinstance(entry, Mapping):
                raise InvalidVass(f"{where} must be an object")
            for key in ("from", "to", "update"):
                if key not in entry:
                    raise InvalidVass(f"{where}: missing field '{key}'")
            upd = entry["update"]
            if not isinstance(upd, list) or not all(
                isinstance(x, int) and not isinstance(x, bool) for x in upd
            ):
                raise InvalidVass(f"{where}.update must be a list of integers")
            if len(upd) != dim:
                raise InvalidVass(f"{where}.update has {len(upd)} entries, expected {dim}")
            edges.append((entry["from"], entry["to"], upd))
        return cls.build(dim, locations, edges)

    @classmethod
    def from_json(cls, text: str) -> "Vass":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidVass(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
        return cls.from_dict(data)

    @classmethod
    def load(cls, path) -> "Vass":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(fh.read())


@dataclass(frozen=True)
class VassState:
    location: str
    valuation: tuple[int, ...]


@dataclass(frozen=True)
class MultiCycle:
    cycles: tuple[tuple[int, ...], ...]
    counts: Mapping[int, int]


def build_update_matrix(v: Vass) -> list[list[int]]:
    """``D`` as a ``dim x |transitions|`` list of rows; column j is transition j's update."""
    return [[t.update[i] for t in v.transitions] for i in range(v.dim)]


def build_flow_matrix(v: Vass) -> list[list[int]]:
    """Oriented incidence matrix ``F``, one row per location.

    Column t has +1 at the target and -1 at the source, so ``(F^T z)(t)`` is
    ``z(target) - z(source)``. Self-loops give an all-zero column.
    """
    rows = [[0] * len(v.transitions) for _ in v.locations]
    for j, t in enumerate(v.transitions):
        if t.is_loop:
            continue
        rows[v.location_index(t.target)][j] = 1
        rows[v.location_index(t.source)][j] = -1
    return rows


def check_path(v: Vass, path: Sequence[int]) -> None:
    for a, b in zip(path, path[1:]):
        if v.transition(a).target != v.transition(b).source:
            raise InvalidPath(f"transition {a} does not end where transition {b} starts")


def path_value(v: Vass, path: Sequence[int]) -> tuple[int, ...]:
    check_path(v, path)
    total = [0] * v.dim
    for tid in path:
        for i, x in enumerate(v.transition(tid).update):
            total[i] += x
    return tuple(total)


def transition_counts(path: Iterable[int]) -> dict[int, int]:
    counts: dict[int, int] = {}
    for tid in path:
        counts[tid] = counts.get(tid, 0) + 1
    return counts


def mat_vec(matrix: Sequence[Sequence], vec: Sequence) -> list:
    return [sum(a * x for a, x in zip(row, vec)) for row in matrix]


def counts_vector(v: Vass, counts: Mapping[int, int]) -> list[int]:
    return [counts.get(t.id, 0) for t in v.transitions]
