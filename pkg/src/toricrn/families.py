"""Builders for the stock example networks.

Line networks live on the lattice points of x1 + x2 = N - 1, indexed from
y1 = (N-1, 0) up to yN = (0, N-1).  Edge order is always ascending
(source, target) so that rate vectors line up reproducibly.
"""

from fractions import Fraction

from .egraph import EGraph, NetworkFormatError


def line_vertices(n):
    return tuple((Fraction(n - 1 - j), Fraction(j)) for j in range(n))


def _labels(n):
    return tuple(f"y{i + 1}" for i in range(n))


def line_complete(n):
    """Complete digraph on the N collinear lattice points (triangle: N=3,
    quadrilateral: N=4, general N-gon on a line)."""
    if n < 2:
        raise ValueError("need at least two vertices")
    edges = tuple((i, j) for i in range(n) for j in range(n) if i != j)
    return EGraph(line_vertices(n), edges, _labels(n))


def triangle():
    return line_complete(3)


def quadrilateral():
    return line_complete(4)


def triangle_cycle():
    """One reaction per source: y1 -> y3 -> y2 -> y1 (rates k1*, k2*, k3*
    by source order)."""
    return EGraph(line_vertices(3), ((0, 2), (1, 0), (2, 1)), _labels(3))


def reduced_line_graph(n, signs):
    """One edge per source on the line: sign -1 steps up (toward yN),
    +1 steps down, 0 omits the source."""
    if len(signs) != n:
        raise ValueError("one sign per vertex")
    edges = []
    for i, s in enumerate(signs):
        if s == -1:
            edges.append((i, i + 1))
        elif s == 1:
            edges.append((i, i - 1))
        elif s != 0:
            raise ValueError(f"bad sign {s!r}")
    if not edges:
        raise ValueError("all sources degenerate")
    return EGraph(line_vertices(n), tuple(edges), _labels(n))


def reversible_path(n):
    """Fully reversible path y1 <-> y2 <-> ... <-> yN."""
    edges = []
    for i in range(n - 1):
        edges.append((i, i + 1))
        edges.append((i + 1, i))
    edges.sort()
    return EGraph(line_vertices(n), tuple(edges), _labels(n))


def rectangle_corners(A=1, B=1):
    A, B = Fraction(A), Fraction(B)
    return ((Fraction(0), Fraction(0)), (A, Fraction(0)), (A, B), (Fraction(0), B))


def rectangle_network(alpha, beta, A=1, B=1):
    """Four reactions leaving the corners of an [0,A]x[0,B] rectangle along
    (+-alpha*A, +-beta*B), each pointing inward.

    Target vertices are deduplicated against the corners (for alpha = beta = 1
    the targets are the opposite corners and the graph is a pair of 2-cycles).
    """
    alpha, beta, A, B = Fraction(alpha), Fraction(beta), Fraction(A), Fraction(B)
    if alpha == 0 and beta == 0:
        raise NetworkFormatError("alpha and beta cannot both be zero")
    if alpha < 0 or beta < 0 or A <= 0 or B <= 0:
        raise NetworkFormatError("need alpha, beta >= 0 and A, B > 0")
    corners = rectangle_corners(A, B)
    moves = ((alpha * A, beta * B), (-alpha * A, beta * B),
             (-alpha * A, -beta * B), (alpha * A, -beta * B))
    vertices = list(corners)
    edges = []
    for i, (c, m) in enumerate(zip(corners, moves)):
        target = (c[0] + m[0], c[1] + m[1])
        if target in vertices:
            j = vertices.index(target)
        else:
            j = len(vertices)
            vertices.append(target)
        edges.append((i, j))
    return EGraph(tuple(vertices), tuple(edges))


def rectangle_complete(A=1, B=1):
    """Complete digraph on the four rectangle corners (12 edges)."""
    edges = tuple((i, j) for i in range(4) for j in range(4) if i != j)
    return EGraph(rectangle_corners(A, B), edges, _labels(4))


def complete_on_sources(g: EGraph):
    """Complete digraph over the source vertices of g (the realization
    target for the whole disguised toric locus)."""
    src = g.source_indices()
    verts = tuple(g.vertices[i] for i in src)
    n = len(verts)
    if n < 2:
        raise ValueError("need at least two source vertices")
    edges = tuple((i, j) for i in range(n) for j in range(n) if i != j)
    return EGraph(verts, edges)


def edge_index(g: EGraph):
    """Map (source, target) -> edge position."""
    return {e: i for i, e in enumerate(g.edges)}
