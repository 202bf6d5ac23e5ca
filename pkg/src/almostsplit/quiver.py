"""Finite quivers, ray-extended infinite quivers and path enumeration."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

Path = tuple[str, ...]  # arrow ids in traversal order; () is the trivial path


class QuiverError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    id: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    name: str
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError(f"quiver {self.name}: duplicate vertex id")
        ids = [a.id for a in self.arrows]
        if len(set(ids)) != len(ids):
            raise QuiverError(f"quiver {self.name}: duplicate arrow id")
        vs = set(self.vertices)
        for a in self.arrows:
            for v in (a.source, a.target):
                if v not in vs:
                    raise QuiverError(f"unknown vertex {v}")

    @classmethod
    def build(cls, name: str, vertices: Iterable, arrows: Iterable[tuple]) -> "Quiver":
        """``arrows`` are ``(id, source, target)`` triples; ids are stringified."""
        return cls(name, tuple(str(v) for v in vertices),
                   tuple(Arrow(str(a), str(s), str(t)) for a, s, t in arrows))

    @cached_property
    def arrow(self) -> dict[str, Arrow]:
        return {a.id: a for a in self.arrows}

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def outgoing(self) -> dict[str, tuple[Arrow, ...]]:
        return {v: tuple(a for a in self.arrows if a.source == v) for v in self.vertices}

    @cached_property
    def incoming(self) -> dict[str, tuple[Arrow, ...]]:
        return {v: tuple(a for a in self.arrows if a.target == v) for v in self.vertices}

    @cached_property
    def is_acyclic(self) -> bool:
        indeg = {v: len(self.incoming[v]) for v in self.vertices}
        stack = [v for v in self.vertices if indeg[v] == 0]
        seen = 0
        while stack:
            v = stack.pop()
            seen += 1
            for a in self.outgoing[v]:
                indeg[a.target] -= 1
                if indeg[a.target] == 0:
                    stack.append(a.target)
        return seen == len(self.vertices)

    def require_acyclic(self) -> None:
        if not self.is_acyclic:
            raise QuiverError(f"quiver {self.name} has an oriented cycle")

    def check_vertex(self, v: str) -> str:
        v = str(v)
        if v not in self.index:
            raise QuiverError(f"unknown vertex {v}")
        return v

    def paths(self, x: str, y: str) -> tuple[Path, ...]:
        """All paths x -> y, ordered by length then lexicographically by arrow id."""
        x, y = self.check_vertex(x), self.check_vertex(y)
        self.require_acyclic()
        return self._paths(x, y)

    def _paths(self, x: str, y: str) -> tuple[Path, ...]:
        cache = self.__dict__.setdefault("_path_cache", {})
        key = (x, y)
        if key not in cache:
            found: list[Path] = []
            frontier: list[tuple[str, Path]] = [(x, ())]
            while frontier:
                nxt = []
                for v, p in frontier:
                    if v == y:
                        found.append(p)
                    for a in self.outgoing[v]:
                        nxt.append((a.target, p + (a.id,)))
                frontier = nxt
            cache[key] = tuple(sorted(found, key=lambda p: (len(p), p)))
        return cache[key]

    def path_end(self, x: str, p: Path) -> str:
        v = x
        for a in p:
            arr = self.arrow[a]
            if arr.source != v:
                raise QuiverError(f"path {p} does not compose at {v}")
            v = arr.target
        return v

    def longest_path_to_sink(self) -> dict[str, int]:
        self.require_acyclic()
        out: dict[str, int] = {}

        def depth(v):
            if v not in out:
                out[v] = max((1 + depth(a.target) for a in self.outgoing[v]), default=0)
            return out[v]

        for v in self.vertices:
            depth(v)
        return out

    def opposite(self) -> "Quiver":
        """Same vertices and arrow ids, every arrow reversed (an involution)."""
        cached = self.__dict__.get("_opposite")
        if cached is None:
            name = self.name[:-3] if self.name.endswith("^op") else self.name + "^op"
            cached = Quiver(name, self.vertices, tuple(Arrow(a.id, a.target, a.source) for a in self.arrows))
            self.__dict__["_opposite"] = cached
        return cached

    def full_subquiver(self, vertices: Iterable[str], name: str | None = None) -> "Quiver":
        keep = set(vertices)
        return Quiver(name or self.name, tuple(v for v in self.vertices if v in keep),
                      tuple(a for a in self.arrows if a.source in keep and a.target in keep))


@dataclass(frozen=True)
class Ray:
    id: str
    attach: str
    orientation: str = "into_core"


@dataclass(frozen=True)
class Truncation:
    quiver: Quiver
    boundary: frozenset[str]
    interior: frozenset[str]
    depth: int


@dataclass(frozen=True)
class RayQuiver:
    """A finite core with A-infinity tails ``... -> r.3 -> r.2 -> r.1 -> attach``."""

    name: str
    core: Quiver
    rays: tuple[Ray, ...] = field(default=())

    def __post_init__(self):
        ids = [r.id for r in self.rays]
        if len(set(ids)) != len(ids):
            raise QuiverError(f"rayquiver {self.name}: duplicate ray id")
        for r in self.rays:
            if r.orientation != "into_core":
                raise QuiverError(
                    f"ray {r.id}: tails oriented away from the core are not supported "
                    "(use the mirror operations on the opposite quiver)")
            self.core.check_vertex(r.attach)
        self.core.require_acyclic()
        taken = set(self.core.vertices) | {a.id for a in self.core.arrows}
        for r in self.rays:
            if any(t.startswith(r.id + ".") for t in taken):
                raise QuiverError(f"ray {r.id}: name clashes with a core vertex or arrow")

    @staticmethod
    def ray_vertex(ray: str, n: int) -> str:
        return f"{ray}.{n}"

    @staticmethod
    def ray_arrow(ray: str, n: int) -> str:
        # arrow leaving r.n (towards r.(n-1), or the attachment vertex for n = 1)
        return f"{ray}.a{n}"

    def locate(self, v: str) -> tuple[str | None, int]:
        """``(ray id, position)`` for a ray vertex, ``(None, 0)`` for core vertices."""
        if v in self.core.index:
            return None, 0
        for r in self.rays:
            pre = r.id + "."
            if v.startswith(pre) and v[len(pre):].isdigit() and int(v[len(pre):]) >= 1:
                return r.id, int(v[len(pre):])
        raise QuiverError(f"unknown vertex {v}")

    def truncate(self, depth: int) -> Truncation:
        if depth < 1:
            raise QuiverError("truncation depth must be >= 1")
        vertices = list(self.core.vertices)
        arrows = list(self.core.arrows)
        boundary = set()
        for r in self.rays:
            for n in range(1, depth + 1):
                v = self.ray_vertex(r.id, n)
                vertices.append(v)
                tgt = r.attach if n == 1 else self.ray_vertex(r.id, n - 1)
                arrows.append(Arrow(self.ray_arrow(r.id, n), v, tgt))
            boundary.add(self.ray_vertex(r.id, depth))
        q = Quiver(f"{self.name}[{depth}]", tuple(vertices), tuple(arrows))
        interior = frozenset(v for v in vertices if v not in boundary)
        return Truncation(q, frozenset(boundary), interior, depth)
