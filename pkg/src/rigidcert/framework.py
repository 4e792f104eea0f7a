"""
Graphs, configurations and frameworks, plus their canonical JSON form.

Vertex convention for bipartite frameworks: part U occupies indices
0..u-1, part V follows. Edges are stored as (i, j) with i < j, and that
orientation fixes every direction and stress sign downstream.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .errors import DegenerateFramework
from .exactmat import RatMatrix, as_rational, fmt_rational, rank


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        norm = []
        for e in self.edges:
            i, j = (int(v) for v in e)
            if i == j:
                raise ValueError(f"loop at vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge {e} out of range for {self.n} vertices")
            norm.append((min(i, j), max(i, j)))
        if len(set(norm)) != len(norm):
            raise ValueError("duplicate edge")
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> list[int]:
        return [j if i == v else i for i, j in self.edges if v in (i, j)]


@dataclass(frozen=True)
class BipartitePartition:
    U: tuple[int, ...]
    V: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "U", tuple(self.U))
        object.__setattr__(self, "V", tuple(self.V))
        if set(self.U) & set(self.V):
            raise ValueError("parts overlap")

    def validate(self, graph: Graph) -> None:
        if sorted(self.U + self.V) != list(range(graph.n)):
            raise ValueError("parts do not cover the vertex set")
        U = set(self.U)
        for i, j in graph.edges:
            if (i in U) == (j in U):
                raise ValueError(f"edge ({i}, {j}) does not cross the partition")


@dataclass(frozen=True)
class Configuration:
    d: int
    points: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        pts = tuple(tuple(as_rational(x) for x in p) for p in self.points)
        for p in pts:
            if len(p) != self.d:
                raise ValueError(f"point {p} does not have {self.d} coordinates")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class Framework:
    graph: Graph
    config: Configuration
    partition: Optional[BipartitePartition] = field(default=None)

    def __post_init__(self):
        if self.config.n != self.graph.n:
            raise ValueError(f"configuration has {self.config.n} points, graph has {self.graph.n} vertices")
        if self.partition is not None:
            self.partition.validate(self.graph)
        pts = self.config.points
        for i, j in self.graph.edges:
            if pts[i] == pts[j]:
                raise DegenerateFramework(f"edge ({i}, {j}) has coincident endpoints")

    @property
    def d(self) -> int:
        return self.config.d

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def points(self):
        return self.config.points

    def part_points(self, side: str) -> list[tuple[Fraction, ...]]:
        if self.partition is None:
            raise ValueError("framework has no bipartition")
        ids = self.partition.U if side == "U" else self.partition.V
        return [self.points[i] for i in ids]


def complete_bipartite(u: int, v: int) -> tuple[Graph, BipartitePartition]:
    if u < 1 or v < 1:
        raise ValueError("both parts need at least one vertex")
    edges = tuple((i, u + j) for i in range(u) for j in range(v))
    return Graph(u + v, edges), BipartitePartition(tuple(range(u)), tuple(range(u, u + v)))


def bipartite_framework(p: Sequence, q: Sequence, d: Optional[int] = None) -> Framework:
    """Complete bipartite framework (K_{u,v}, p, q) with U = p, V = q."""
    if d is None:
        d = len(p[0])
    g, part = complete_bipartite(len(p), len(q))
    return Framework(g, Configuration(d, tuple(p) + tuple(q)), part)


def homogenize(x: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(x) + (Fraction(1),)


def config_matrix(F) -> RatMatrix:
    """n x (d+1) matrix of homogeneous coordinates (each row ends in 1)."""
    config = F.config if isinstance(F, Framework) else F
    return RatMatrix.from_rows([homogenize(p) for p in config.points], config.d + 1)


def affine_span_dim(points: Sequence[Sequence]) -> int:
    if not points:
        raise ValueError("affine span of an empty set")
    pts = [[as_rational(x) for x in p] for p in points]
    return rank(RatMatrix.from_rows([p + [Fraction(1)] for p in pts])) - 1


def _det(rows: list[list[Fraction]]) -> Fraction:
    # Gaussian elimination on a small square block
    a = [list(r) for r in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def is_general_position(C) -> bool:
    """Every d+1 of the points are affinely independent (exhaustive)."""
    config = C.config if isinstance(C, Framework) else C
    d = config.d
    if config.n < d + 1:
        raise ValueError(f"general position needs at least {d + 1} points, got {config.n}")
    hom = [list(homogenize(p)) for p in config.points]
    return all(_det([hom[i] for i in sub]) != 0 for sub in combinations(range(config.n), d + 1))


def edge_directions(F: Framework) -> list[tuple[Fraction, ...]]:
    out = []
    for i, j in F.graph.edges:
        e = tuple(b - a for a, b in zip(F.points[i], F.points[j]))
        if not any(e):
            raise DegenerateFramework(f"edge ({i}, {j}) has zero length")
        out.append(e)
    return out


# -- JSON ----------------------------------------------------------------------

def framework_to_dict(F: Framework) -> dict:
    out = {"dimension": F.d}
    if F.partition is not None:
        out["parts"] = {"U": sorted(F.partition.U), "V": sorted(F.partition.V)}
    out["edges"] = [[i, j] for i, j in F.graph.edges]
    out["coords"] = {str(i): [fmt_rational(x) for x in p] for i, p in enumerate(F.points)}
    return out


def framework_from_dict(data: dict) -> Framework:
    """Parse the framework JSON object; unknown top-level keys are ignored."""
    d = int(data["dimension"])
    coords = {int(k): v for k, v in data["coords"].items()}
    n = len(coords)
    if sorted(coords) != list(range(n)):
        raise ValueError("coords must be keyed by vertex ids 0..n-1")
    points = tuple(tuple(as_rational(x) for x in coords[i]) for i in range(n))
    graph = Graph(n, tuple(tuple(e) for e in data["edges"]))
    partition = None
    if data.get("parts") is not None:
        partition = BipartitePartition(tuple(data["parts"]["U"]), tuple(data["parts"]["V"]))
    return Framework(graph, Configuration(d, points), partition)


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2) + "\n"


def framework_to_json(F: Framework, **extra) -> str:
    """Canonical JSON text; ``extra`` keys (seed, audit, ...) are appended after coords."""
    out = framework_to_dict(F)
    out.update(extra)
    return dumps(out)


def framework_from_json(text: str) -> Framework:
    return framework_from_dict(json.loads(text))
