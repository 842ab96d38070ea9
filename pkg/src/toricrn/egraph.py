"""Euclidean embedded graphs (reaction networks) over exact rational vertices.

An E-graph is a digraph whose vertices live in Q^n: no self-loops, at most
one edge per ordered vertex pair.  Vertex order is the canonical index
space for every downstream matrix, and is fixed at load time.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg


class NetworkFormatError(ValueError):
    """Malformed network input (file schema, coordinates, rates)."""


def to_fraction(value):
    """Coerce a JSON-style scalar to an exact Fraction.

    Accepts ints, integer-valued floats and "p/q" strings.  Anything else
    (in particular non-integer floats, which would silently pick up binary
    rounding) is rejected.
    """
    if isinstance(value, bool):
        raise NetworkFormatError(f"not a number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        if value.is_integer():
            return Fraction(int(value))
        raise NetworkFormatError(
            f"non-integer float {value!r}: write exact rationals as \"p/q\"")
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise NetworkFormatError(f"bad rational literal {value!r}") from exc
    raise NetworkFormatError(f"not a number: {value!r}")


def format_rational(q):
    """Serialize a Fraction: bare int when integral, else "p/q"."""
    q = Fraction(q)
    if q.denominator == 1:
        return q.numerator
    return f"{q.numerator}/{q.denominator}"


def vec(*coords):
    return tuple(Fraction(c) for c in coords)


def vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


@dataclass(frozen=True)
class EGraph:
    """Directed graph with rational vertex coordinates.

    vertices: tuple of coordinate tuples (Fractions), all of equal dimension.
    edges: tuple of (source_index, target_index) pairs.
    labels: optional vertex names, for reports only.
    """

    vertices: tuple
    edges: tuple
    labels: tuple = None

    def __post_init__(self):
        verts = tuple(tuple(Fraction(c) for c in v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", tuple((int(a), int(b)) for a, b in self.edges))
        if not verts:
            raise NetworkFormatError("graph needs at least one vertex")
        dim = len(verts[0])
        if any(len(v) != dim for v in verts):
            raise NetworkFormatError("vertices of mixed dimension")
        if len(set(verts)) != len(verts):
            raise NetworkFormatError("duplicate vertex coordinates")
        seen = set()
        for a, b in self.edges:
            if a == b:
                raise NetworkFormatError(f"self-loop at vertex {a}")
            if not (0 <= a < len(verts) and 0 <= b < len(verts)):
                raise NetworkFormatError(f"edge ({a},{b}) out of range")
            if (a, b) in seen:
                raise NetworkFormatError(f"repeated edge ({a},{b})")
            seen.add((a, b))
        if self.labels is not None and len(self.labels) != len(verts):
            raise NetworkFormatError("labels/vertices length mismatch")

    @property
    def dim(self):
        return len(self.vertices[0])

    @property
    def num_vertices(self):
        return len(self.vertices)

    def reaction_vector(self, edge_index):
        a, b = self.edges[edge_index]
        return vec_sub(self.vertices[b], self.vertices[a])

    def out_edges(self, v):
        return [i for i, (a, _) in enumerate(self.edges) if a == v]

    def in_edges(self, v):
        return [i for i, (_, b) in enumerate(self.edges) if b == v]

    def source_indices(self):
        """Vertex indices that are edge sources, ascending lexicographic
        on coordinates (the fixed source order used downstream)."""
        srcs = {a for a, _ in self.edges}
        return sorted(srcs, key=lambda i: self.vertices[i])

    def is_reversible(self):
        es = set(self.edges)
        return all((b, a) in es for a, b in es)


@dataclass(frozen=True)
class RateAssignment:
    """Per-edge rate constants, exact (Fractions) or approximate (floats).

    Zero entries are only legal with allow_zero=True, the subgraph-selection
    regime where a vanishing rate means the edge is dropped.
    """

    values: tuple
    mode: str = "exact"
    allow_zero: bool = False

    def __post_init__(self):
        if self.mode not in ("exact", "approximate"):
            raise ValueError(f"bad mode {self.mode!r}")
        vals = tuple(self.values)
        if self.mode == "exact":
            vals = tuple(Fraction(v) for v in vals)
        else:
            vals = tuple(float(v) for v in vals)
        object.__setattr__(self, "values", vals)
        for v in vals:
            if v < 0 or (v == 0 and not self.allow_zero):
                raise ValueError(f"rate {v} not strictly positive")

    def __len__(self):
        return len(self.values)

    def as_floats(self):
        return [float(v) for v in self.values]


def rates(values, allow_zero=False):
    """Build a RateAssignment, inferring exact mode when no value is a float."""
    vals = list(values)
    exact = all(not isinstance(v, float) for v in vals)
    if exact:
        vals = [to_fraction(v) if isinstance(v, str) else Fraction(v) for v in vals]
    return RateAssignment(tuple(vals), "exact" if exact else "approximate", allow_zero)


def check_pair(g: EGraph, k: RateAssignment):
    if len(k) != len(g.edges):
        raise ValueError(f"{len(k)} rates for {len(g.edges)} edges")


# ---------------------------------------------------------------------------
# graph-theoretic operations

def linkage_classes(g: EGraph):
    """Connected components of the underlying undirected graph, each sorted."""
    adj = {i: set() for i in range(g.num_vertices)}
    for a, b in g.edges:
        adj[a].add(b)
        adj[b].add(a)
    seen = set()
    classes = []
    for start in range(g.num_vertices):
        if start in seen:
            continue
        comp = []
        stack = [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        classes.append(sorted(comp))
    classes.sort(key=lambda c: c[0])
    return classes


def _reachable(n, out_adj, start):
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in out_adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def is_weakly_reversible(g: EGraph):
    """True iff every linkage class is strongly connected as a digraph."""
    fwd = {i: [] for i in range(g.num_vertices)}
    bwd = {i: [] for i in range(g.num_vertices)}
    for a, b in g.edges:
        fwd[a].append(b)
        bwd[b].append(a)
    for comp in linkage_classes(g):
        root = comp[0]
        members = set(comp)
        if not (members <= _reachable(g.num_vertices, fwd, root)
                and members <= _reachable(g.num_vertices, bwd, root)):
            return False
    return True


def stoichiometric_dimension(g: EGraph):
    """Exact rank of the reaction vectors {target - source}."""
    vectors = [g.reaction_vector(i) for i in range(len(g.edges))]
    if not vectors:
        return 0
    return linalg.rank(vectors)


def deficiency(g: EGraph):
    """vertices - linkage classes - stoichiometric dimension."""
    return g.num_vertices - len(linkage_classes(g)) - stoichiometric_dimension(g)


# ---------------------------------------------------------------------------
# network file format
#
# { "dim": n,
#   "vertices": [[num-or-"p/q", ...], ...],
#   "edges": [{"from": i, "to": j, "rate": num-or-"p/q"}, ...] }
#
# Indices are 0-based; "rate" is optional but must be present on all edges
# or on none.

def network_from_dict(doc):
    """Parse the network JSON document. Returns (EGraph, RateAssignment|None)."""
    if not isinstance(doc, dict):
        raise NetworkFormatError("top-level JSON value must be an object")
    try:
        dim = int(doc["dim"])
        raw_vertices = doc["vertices"]
        raw_edges = doc["edges"]
    except KeyError as exc:
        raise NetworkFormatError(f"missing key {exc.args[0]!r}") from exc
    vertices = []
    for i, coords in enumerate(raw_vertices):
        if len(coords) != dim:
            raise NetworkFormatError(f"vertex {i} has {len(coords)} coords, dim is {dim}")
        vertices.append(tuple(to_fraction(c) for c in coords))
    edges = []
    rate_values = []
    for i, e in enumerate(raw_edges):
        try:
            edges.append((int(e["from"]), int(e["to"])))
        except KeyError as exc:
            raise NetworkFormatError(f"edge {i} missing {exc.args[0]!r}") from exc
        rate_values.append(e.get("rate"))
    g = EGraph(tuple(vertices), tuple(edges), tuple(doc["labels"]) if "labels" in doc else None)
    if all(r is None for r in rate_values):
        return g, None
    if any(r is None for r in rate_values):
        raise NetworkFormatError("either all edges carry a rate or none do")
    exact = all(not isinstance(r, float) or float(r).is_integer() for r in rate_values)
    if exact:
        k = RateAssignment(tuple(to_fraction(r) for r in rate_values), "exact")
    else:
        k = RateAssignment(tuple(float(r) for r in rate_values), "approximate")
    return g, k


def load_network(path):
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise NetworkFormatError(
                f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}") from exc
    return network_from_dict(doc)


def network_to_dict(g: EGraph, k: RateAssignment = None):
    doc = {
        "dim": g.dim,
        "vertices": [[format_rational(c) for c in v] for v in g.vertices],
        "edges": [],
    }
    for i, (a, b) in enumerate(g.edges):
        e = {"from": a, "to": b}
        if k is not None:
            v = k.values[i]
            e["rate"] = float(v) if k.mode == "approximate" else format_rational(v)
        doc["edges"].append(e)
    if g.labels is not None:
        doc["labels"] = list(g.labels)
    return doc


def dump_network(g: EGraph, k: RateAssignment = None, path=None):
    doc = network_to_dict(g, k)
    text = json.dumps(doc, indent=2)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text
