"""Runtime values and topological collections.

Base values are plain Python ``int``/``float``/``bool``/``str``.  Because
``True == 1`` in Python, every comparison between language values goes
through :func:`value_key`, which carries the type tag.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

# direction name -> (dx, dy)
DIRECTIONS = {"nord": (0, 1), "-nord": (0, -1), "est": (1, 0), "-est": (-1, 0)}


def value_tag(v) -> str:
    if isinstance(v, bool):
        return "bool"
    if isinstance(v, int):
        return "int"
    if isinstance(v, float):
        return "float"
    if isinstance(v, str):
        return "string"
    if isinstance(v, Collection):
        return v.topo
    return "function"


_TAG_ORDER = {"bool": 0, "int": 1, "float": 2, "string": 3,
              "seq": 4, "set": 5, "bag": 6, "grid": 7, "function": 8}


def value_key(v):
    """Total, tag-aware ordering and identity key for first-order values."""
    tag = value_tag(v)
    if tag == "function":
        return (_TAG_ORDER[tag], id(v))
    if isinstance(v, Collection):
        if v.topo == "grid":
            body = tuple((p, value_key(x)) for p, x in v.items())
        elif v.topo in ("set", "bag"):
            body = tuple(sorted(value_key(x) for x in v.values()))
        else:
            body = tuple(value_key(x) for x in v.values())
        return (_TAG_ORDER[tag], body)
    return (_TAG_ORDER[tag], v)


def values_equal(a, b) -> bool:
    return value_key(a) == value_key(b)


def is_function(v) -> bool:
    return value_tag(v) == "function"


def grid_order(p):
    """Canonical grid order: row-major by (y, x), smallest first."""
    return (p[1], p[0])


@dataclass(frozen=True, eq=False)
class Collection:
    """Immutable topological collection.

    Positions are indices for seq/set/bag and 2-D coordinates for grids.
    ``cells`` holds (position, value) pairs in canonical position order.
    """
    topo: str
    cells: tuple
    cursor: Optional[tuple] = None

    @staticmethod
    def empty(topo: str) -> "Collection":
        return Collection(topo, ())

    @staticmethod
    def from_values(topo: str, vals) -> "Collection":
        if topo == "grid":
            cells = tuple(((i, 0), v) for i, v in enumerate(vals))
            return Collection("grid", cells, cells[-1][0] if cells else None)
        if topo == "set":
            vals = _dedup(vals)
        return Collection(topo, tuple(enumerate(vals)))

    @staticmethod
    def grid(mapping: dict, cursor=None) -> "Collection":
        cells = tuple(sorted(mapping.items(), key=lambda kv: grid_order(kv[0])))
        if cursor is None and cells:
            cursor = cells[-1][0]
        return Collection("grid", cells, cursor)

    def values(self) -> list:
        return [v for _, v in self.cells]

    def items(self):
        return list(self.cells)

    def positions(self) -> list:
        return [p for p, _ in self.cells]

    def __len__(self):
        return len(self.cells)

    def __eq__(self, other):
        return isinstance(other, Collection) and value_key(self) == value_key(other)

    def __hash__(self):
        return hash(value_key(self))

    def at(self, pos):
        for p, v in self.cells:
            if p == pos:
                return v
        raise KeyError(pos)

    def neighbors(self, pos, direction: Optional[str] = None) -> list:
        """Positions adjacent to ``pos`` in canonical order."""
        if self.topo == "seq":
            if direction is not None:
                return []
            return [pos + 1] if pos + 1 < len(self.cells) else []
        if self.topo in ("set", "bag"):
            if direction is not None:
                return []
            return [p for p, _ in self.cells if p != pos]
        occupied = {p for p, _ in self.cells}
        dirs = [DIRECTIONS[direction]] if direction else list(DIRECTIONS.values())
        cand = [(pos[0] + dx, pos[1] + dy) for dx, dy in dirs]
        return sorted((c for c in cand if c in occupied), key=grid_order)

    def insert(self, v, direction: Optional[str] = None) -> "Collection":
        """Collection construction (``::`` and the grid direction operators).

        Returns None when a grid insertion would overwrite an occupied cell.
        """
        if self.topo == "grid":
            if not self.cells:
                pos = (0, 0)
            else:
                dx, dy = DIRECTIONS[direction or "est"]
                pos = (self.cursor[0] + dx, self.cursor[1] + dy)
                if any(p == pos for p, _ in self.cells):
                    return None
            m = dict(self.cells)
            m[pos] = v
            return Collection.grid(m, cursor=pos)
        vals = self.values()
        if self.topo == "set" and any(values_equal(v, x) for x in vals):
            return self
        return Collection.from_values(self.topo, [v] + vals)

    def __repr__(self):
        return show_value(self)


def _dedup(vals):
    seen, out = set(), []
    for v in vals:
        k = value_key(v)
        if k not in seen:
            seen.add(k)
            out.append(v)
    return out


def show_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        return repr(v)
    if isinstance(v, str):
        import json
        return json.dumps(v)
    if isinstance(v, Collection):
        if v.topo == "seq":
            return "[" + ", ".join(show_value(x) for x in v.values()) + "]"
        if v.topo in ("set", "bag"):
            return v.topo + "{" + ", ".join(show_value(x) for x in v.values()) + "}"
        return "grid{" + ", ".join(f"({p[0]},{p[1]}): {show_value(x)}" for p, x in v.cells) + "}"
    return "<fun>"


def value_to_json(v) -> Any:
    if isinstance(v, (bool, int, float, str)):
        return {"kind": value_tag(v), "value": v}
    if isinstance(v, Collection):
        d = {"kind": v.topo}
        if v.topo == "grid":
            d["cells"] = [[list(p), value_to_json(x)] for p, x in v.cells]
        else:
            d["elements"] = [value_to_json(x) for x in v.values()]
        return d
    return {"kind": "function"}


@dataclass(frozen=True, eq=False)
class Closure:
    param: str
    body: Any
    env: dict = field(repr=False)


@dataclass(frozen=True, eq=False)
class TransValue:
    rules: tuple
    env: dict = field(repr=False)


@dataclass(frozen=True, eq=False)
class Builtin:
    name: str
    arity: int
    args: tuple = ()
