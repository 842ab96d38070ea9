"""Mass-action systems generated by E-graphs.

The right-hand side of the ODE generated by (G, k) is the polynomial
vector field  sum over edges of  k_e * x^source * (target - source).
Source vertices index the monomials, so realization questions reduce to
comparing per-source net coefficient vectors.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .egraph import EGraph, RateAssignment, check_pair
from .poly import SparsePoly


def species_names(dim):
    return tuple(f"x{i + 1}" for i in range(dim))


def _integer_exponents(vertex):
    exps = []
    for c in vertex:
        c = Fraction(c)
        if c.denominator != 1 or c < 0:
            return None
        exps.append(c.numerator)
    return tuple(exps)


def source_coefficients(g: EGraph, values):
    """Net coefficient vector of x^y per source vertex y.

    values is one multiplier per edge; any algebra with + and * works
    (Fractions, floats, SparsePoly), so the same routine backs both exact
    realization checks and symbolic parametrization identities.
    Zero vectors are dropped: a cancelled source contributes no monomial.
    """
    acc = {}
    for idx, (a, b) in enumerate(g.edges):
        y = g.vertices[a]
        vecd = [values[idx] * (tb - ta) for ta, tb in zip(g.vertices[a], g.vertices[b])]
        if y in acc:
            acc[y] = [u + v for u, v in zip(acc[y], vecd)]
        else:
            acc[y] = vecd
    out = {}
    for y, v in acc.items():
        if any(_nonzero(c) for c in v):
            out[y] = tuple(v)
    return out


def _nonzero(c):
    if hasattr(c, "is_zero"):
        return not c.is_zero()
    return c != 0


@dataclass(frozen=True)
class MassActionSystem:
    """Expanded polynomial RHS of the ODE generated by (graph, rates)."""

    components: tuple          # one SparsePoly in x1..xn per species
    graph: EGraph
    rates: RateAssignment

    @property
    def dim(self):
        return self.graph.dim

    def rhs(self, x):
        """Float vector field at a point (fast path for integrators)."""
        out = [0.0] * self.dim
        verts = self.graph.vertices
        kf = self.rates.as_floats()
        for idx, (a, b) in enumerate(self.graph.edges):
            mono = 1.0
            for xi, e in zip(x, verts[a]):
                mono *= xi ** float(e)
            f = kf[idx] * mono
            for i in range(self.dim):
                out[i] += f * float(verts[b][i] - verts[a][i])
        return out


def generate_system(g: EGraph, k: RateAssignment) -> MassActionSystem:
    """Expand the mass-action RHS exactly.

    Source vertices must have nonnegative integer coordinates (they become
    monomial exponents); product vertices may be arbitrary rationals.
    """
    check_pair(g, k)
    names = species_names(g.dim)
    vals = [Fraction(v) if k.mode == "exact" else Fraction(float(v)) for v in k.values]
    components = [SparsePoly.zero(names) for _ in range(g.dim)]
    for idx, (a, b) in enumerate(g.edges):
        exps = _integer_exponents(g.vertices[a])
        if exps is None:
            raise ValueError(
                f"source vertex {tuple(map(str, g.vertices[a]))} is not a lattice point")
        for i in range(g.dim):
            coef = vals[idx] * (g.vertices[b][i] - g.vertices[a][i])
            if coef:
                components[i] = components[i] + SparsePoly.monomial(coef, exps, names)
    return MassActionSystem(tuple(components), g, k)


@dataclass(frozen=True)
class SourceDecomposition:
    """Per-source reaction matrices A_i and their exact kernels.

    The equidynamic locus of any k on the graph is k + (product of the
    kernels), intersected with positivity by the caller.
    """

    source_vertices: tuple     # vertex indices, ascending lex on coordinates
    edge_indices: tuple        # per source, edge indices in declared order
    matrices: tuple            # per source, n x n_i columns (target - source)
    kernels: tuple             # per source, exact kernel basis (tuples)


def source_decomposition(g: EGraph) -> SourceDecomposition:
    if not g.edges:
        raise ValueError("graph has no edges")
    sources = g.source_indices()
    edge_idx = []
    matrices = []
    kernels = []
    for s in sources:
        eidx = [i for i, (a, _) in enumerate(g.edges) if a == s]
        cols = [g.reaction_vector(i) for i in eidx]
        rows = [[cols[j][r] for j in range(len(cols))] for r in range(g.dim)]
        basis = linalg.nullspace(rows, len(cols))
        for vec in basis:
            assert all(sum(row[j] * vec[j] for j in range(len(vec))) == 0 for row in rows)
        edge_idx.append(tuple(eidx))
        matrices.append(tuple(tuple(col) for col in cols))
        kernels.append(tuple(basis))
    return SourceDecomposition(tuple(sources), tuple(edge_idx), tuple(matrices), tuple(kernels))


def same_dynamics(g1: EGraph, k1: RateAssignment, g2: EGraph, k2: RateAssignment):
    """True iff the two systems have identical polynomial RHS (exact mode only)."""
    if g1.dim != g2.dim:
        raise ValueError("species dimension mismatch")
    if k1.mode != "exact" or k2.mode != "exact":
        raise ValueError("same_dynamics requires exact rates; "
                         "use dynamics_residual for float comparisons")
    check_pair(g1, k1)
    check_pair(g2, k2)
    return source_coefficients(g1, k1.values) == source_coefficients(g2, k2.values)


def dynamics_residual(g1: EGraph, k1, g2: EGraph, k2):
    """Max absolute difference of net source coefficients, in floats.

    k1/k2 may be RateAssignments or plain float sequences.
    """
    v1 = k1.as_floats() if isinstance(k1, RateAssignment) else [float(v) for v in k1]
    v2 = k2.as_floats() if isinstance(k2, RateAssignment) else [float(v) for v in k2]

    def net(g, vals):
        acc = {}
        for idx, (a, b) in enumerate(g.edges):
            y = g.vertices[a]
            d = acc.setdefault(y, [0.0] * g.dim)
            for i in range(g.dim):
                d[i] += vals[idx] * float(g.vertices[b][i] - g.vertices[a][i])
        return acc

    n1, n2 = net(g1, v1), net(g2, v2)
    worst = 0.0
    for y in set(n1) | set(n2):
        a = n1.get(y, [0.0] * g1.dim)
        b = n2.get(y, [0.0] * g1.dim)
        worst = max(worst, max(abs(u - v) for u, v in zip(a, b)))
    return worst
