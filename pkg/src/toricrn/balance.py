"""Complex/detailed balance and symbolic toric-locus equations.

Tree constants K_i come from the Matrix-Tree theorem: K_i is the (i,i)
minor of the out-degree Laplacian of the vertex's linkage class, i.e. the
sum over spanning trees oriented toward vertex i of the product of their
edge rates.  The toric locus is cut out by binomials in the K_i indexed by
an integer kernel basis of the Cayley matrix.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .egraph import EGraph, RateAssignment, check_pair, is_weakly_reversible, linkage_classes, deficiency
from .poly import SparsePoly


def rate_var(g: EGraph, a, b):
    """Formal name of the rate constant on edge a -> b (1-based vertex ids)."""
    if g.num_vertices <= 9:
        return f"k{a + 1}{b + 1}"
    return f"k{a + 1}_{b + 1}"


def rate_varnames(g: EGraph):
    return tuple(rate_var(g, a, b) for a, b in g.edges)


# ---------------------------------------------------------------------------
# pointwise balance conditions


def _monomial_value(x0, vertex, exact):
    if exact:
        v = Fraction(1)
        for xi, e in zip(x0, vertex):
            v *= Fraction(xi) ** int(e)
        return v
    v = 1.0
    for xi, e in zip(x0, vertex):
        v *= float(xi) ** float(e)
    return v


def _check_positive_state(x0):
    if any(float(x) <= 0 for x in x0):
        raise ValueError("state must be strictly positive")


def _exact_regime(g, k, x0, tol):
    if tol != 0:
        return False
    if k.mode != "exact" or any(isinstance(x, float) for x in x0):
        raise ValueError("tol=0 requires exact rates and a rational state")
    if any(Fraction(c).denominator != 1 for v in g.vertices for c in v):
        raise ValueError("tol=0 requires integer vertex coordinates")
    return True


def complex_balance_residual(g: EGraph, k, x0):
    """Max relative inflow/outflow mismatch over the vertices, in floats.

    k may be a RateAssignment or a float sequence.
    """
    vals = k.as_floats() if isinstance(k, RateAssignment) else [float(v) for v in k]
    worst = 0.0
    for v in range(g.num_vertices):
        out = sum(vals[i] for i in g.out_edges(v)) * _monomial_value(x0, g.vertices[v], False)
        inn = sum(vals[i] * _monomial_value(x0, g.vertices[g.edges[i][0]], False)
                  for i in g.in_edges(v))
        scale = max(abs(out), abs(inn))
        if scale > 0:
            worst = max(worst, abs(out - inn) / scale)
    return worst


def is_complex_balanced_at(g: EGraph, k: RateAssignment, x0, tol=1e-9):
    """Inflow equals outflow at every vertex of the state x0, within a
    relative tolerance (exact comparison when tol = 0)."""
    check_pair(g, k)
    _check_positive_state(x0)
    if _exact_regime(g, k, x0, tol):
        for v in range(g.num_vertices):
            out = sum((k.values[i] for i in g.out_edges(v)), Fraction(0)) \
                * _monomial_value(x0, g.vertices[v], True)
            inn = sum((k.values[i] * _monomial_value(x0, g.vertices[g.edges[i][0]], True)
                       for i in g.in_edges(v)), Fraction(0))
            if out != inn:
                return False
        return True
    return complex_balance_residual(g, k, x0) <= tol


def detailed_balance_residual(g: EGraph, k, x0):
    vals = k.as_floats() if isinstance(k, RateAssignment) else [float(v) for v in k]
    idx = {e: i for i, e in enumerate(g.edges)}
    worst = 0.0
    for (a, b), i in idx.items():
        if a > b:
            continue
        j = idx[(b, a)]
        fwd = vals[i] * _monomial_value(x0, g.vertices[a], False)
        bwd = vals[j] * _monomial_value(x0, g.vertices[b], False)
        scale = max(abs(fwd), abs(bwd))
        if scale > 0:
            worst = max(worst, abs(fwd - bwd) / scale)
    return worst


def is_detailed_balanced_at(g: EGraph, k: RateAssignment, x0, tol=1e-9):
    """Per reversible pair, forward flux equals backward flux at x0."""
    check_pair(g, k)
    if not g.is_reversible():
        raise ValueError("detailed balance requires a reversible graph")
    _check_positive_state(x0)
    if _exact_regime(g, k, x0, tol):
        idx = {e: i for i, e in enumerate(g.edges)}
        for (a, b), i in idx.items():
            if a > b:
                continue
            j = idx[(b, a)]
            fwd = k.values[i] * _monomial_value(x0, g.vertices[a], True)
            bwd = k.values[j] * _monomial_value(x0, g.vertices[b], True)
            if fwd != bwd:
                return False
        return True
    return detailed_balance_residual(g, k, x0) <= tol


# ---------------------------------------------------------------------------
# tree constants and the toric ideal


@dataclass(frozen=True)
class TreeConstants:
    """Per-vertex spanning-tree polynomials in the formal edge rates."""

    constants: tuple           # SparsePoly per vertex
    varnames: tuple
    graph: EGraph

    def evaluate(self, k):
        vals = k.values if isinstance(k, RateAssignment) else list(k)
        assignment = dict(zip(self.varnames, vals))
        return [K.evaluate(assignment) for K in self.constants]


def _poly_det(m):
    """Determinant by cofactor expansion along the first row (tiny matrices)."""
    n = len(m)
    if n == 0:
        return None
    if n == 1:
        return m[0][0]
    det = None
    for j in range(n):
        entry = m[0][j]
        if entry.is_zero():
            continue
        minor = [[row[c] for c in range(n) if c != j] for row in m[1:]]
        term = entry * _poly_det(minor)
        if j % 2:
            term = -term
        det = term if det is None else det + term
    if det is None:
        return SparsePoly.zero(m[0][0].varnames)
    return det


def tree_constants(g: EGraph) -> TreeConstants:
    """Symbolic K_i per vertex via maximal minors of the class Laplacian."""
    if not is_weakly_reversible(g):
        raise ValueError("tree constants need a weakly reversible graph")
    names = rate_varnames(g)
    constants = [None] * g.num_vertices
    for cls in linkage_classes(g):
        pos = {v: i for i, v in enumerate(cls)}
        n = len(cls)
        lap = [[SparsePoly.zero(names) for _ in range(n)] for _ in range(n)]
        for idx, (a, b) in enumerate(g.edges):
            if a in pos:
                kvar = SparsePoly.variable(names[idx], names)
                lap[pos[a]][pos[a]] = lap[pos[a]][pos[a]] + kvar
                lap[pos[a]][pos[b]] = lap[pos[a]][pos[b]] - kvar
        for v in cls:
            i = pos[v]
            minor = [[lap[r][c] for c in range(n) if c != i]
                     for r in range(n) if r != i]
            K = _poly_det(minor) if minor else SparsePoly.constant(1, names)
            assert all(c > 0 for c in K.terms.values()), "tree constant with nonpositive term"
            constants[v] = K
    return TreeConstants(tuple(constants), names, g)


def cayley_matrix(g: EGraph):
    """Vertex coordinates stacked over one 0/1 indicator row per linkage class."""
    rows = [[g.vertices[v][i] for v in range(g.num_vertices)] for i in range(g.dim)]
    for cls in linkage_classes(g):
        members = set(cls)
        rows.append([Fraction(1 if v in members else 0) for v in range(g.num_vertices)])
    return rows


@dataclass(frozen=True)
class ToricIdeal:
    """Binomial generators of the toric locus in the formal rates."""

    generators: tuple          # expanded SparsePoly, one per kernel vector
    cayley_kernel: tuple       # primitive integer kernel vectors
    tree: TreeConstants

    @property
    def varnames(self):
        return self.tree.varnames

    def evaluate(self, k):
        vals = k.values if isinstance(k, RateAssignment) else list(k)
        assignment = dict(zip(self.varnames, vals))
        return [p.evaluate(assignment) for p in self.generators]


def toric_ideal(g: EGraph) -> ToricIdeal:
    """Exact generators: for each Cayley kernel vector v, the binomial
    prod K_i^(v_i+) - prod K_i^(v_i-), expanded."""
    if not is_weakly_reversible(g):
        raise ValueError("toric ideal needs a weakly reversible graph")
    tc = tree_constants(g)
    kernel = linalg.integer_kernel_basis(cayley_matrix(g), g.num_vertices)
    gens = []
    for vec in kernel:
        plus = SparsePoly.constant(1, tc.varnames)
        minus = SparsePoly.constant(1, tc.varnames)
        for i, e in enumerate(vec):
            if e > 0:
                plus = plus * tc.constants[i] ** e
            elif e < 0:
                minus = minus * tc.constants[i] ** (-e)
        gens.append(plus - minus)
    assert len(gens) == deficiency(g), "kernel dimension must equal deficiency"
    return ToricIdeal(tuple(gens), tuple(kernel), tc)


def in_toric_locus(g: EGraph, k: RateAssignment):
    """Exact membership of k in the toric locus K(G)."""
    check_pair(g, k)
    if k.mode != "exact":
        raise ValueError("toric-locus membership needs exact rates")
    if not is_weakly_reversible(g):
        return False
    return all(v == 0 for v in toric_ideal(g).evaluate(k))


# ---------------------------------------------------------------------------
# complex balanced witness recovery


def complex_balanced_witness(g: EGraph, k):
    """Positive state solving the complex balance conditions, by log-linear
    least squares against the tree constants (x^{y_i} proportional to K_i
    per linkage class).  Returns (x0, max relative residual).

    Only meaningful when k is on (or numerically near) the toric locus;
    callers must check the residual.
    """
    tc = tree_constants(g)
    kvals = k.values if isinstance(k, RateAssignment) else list(k)
    Kvals = tc.evaluate(kvals)
    classes = linkage_classes(g)
    cls_of = {}
    for ci, cls in enumerate(classes):
        for v in cls:
            cls_of[v] = ci
    ncols = g.dim + len(classes)
    rows = []
    rhs = []
    for v in range(g.num_vertices):
        row = [float(c) for c in g.vertices[v]] + [0.0] * len(classes)
        row[g.dim + cls_of[v]] = -1.0
        rows.append(row)
        rhs.append(math.log(float(Kvals[v])))
    sol = linalg.lstsq(rows, rhs)
    x0 = [math.exp(sol[i]) for i in range(g.dim)]
    return x0, complex_balance_residual(g, kvals, x0)
