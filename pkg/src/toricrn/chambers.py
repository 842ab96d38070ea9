"""Chamber machinery for networks on the line x1 + x2 = N - 1.

A line network reduces to one reaction per source: the net direction
vector u_i at source y_i is proportional to (-1, 1) (sign -1, stepping up
the line) or (1, -1) (sign +1, stepping down), with magnitude k_i*.  The
sign pattern picks a chamber; in single-sign-change chambers a reversible
path graph with detailed balance realizes the same dynamics (the Horner
construction), and for N = 4 the remaining chamber is decided by the
Segre inequality k3* k2* <= k4* k1*.

The detailed-balance ratio alpha used throughout is x1/x2 at the witness,
so the witness state is (alpha, 1) up to scaling.
"""

from dataclasses import dataclass
from fractions import Fraction

from .egraph import EGraph, RateAssignment, check_pair
from .families import line_vertices, reduced_line_graph, reversible_path
from .poly import UniPoly, count_positive_roots, descartes_sign_changes, \
    isolate_positive_roots, refine_root


@dataclass(frozen=True)
class LineReduction:
    """One-reaction-per-source reduction of a line network.

    kstar[p] >= 0 is the magnitude of the net direction vector at line
    position p (0-based from y1 = (N-1, 0)); signs[p] is -1 / +1 / 0 for
    direction (-1,1) / (1,-1) / degenerate.  reduced_rates align with
    reduced_graph.edges and omit degenerate sources.
    """

    n: int
    kstar: tuple
    signs: tuple
    reduced_graph: EGraph
    reduced_rates: RateAssignment
    exact: bool

    def signed(self):
        """w_p with u_p = w_p * (-1, 1); the ratio polynomial coefficients."""
        return tuple(k if s == -1 else (-k if s == 1 else 0 * k)
                     for k, s in zip(self.kstar, self.signs))

    def pattern(self):
        return "".join("-" if s == -1 else "+" if s == 1 else "0" for s in self.signs)


@dataclass(frozen=True)
class ChamberReport:
    label: str                  # sign pattern string
    chambers: tuple             # containing chamber names for N = 4 ("C1".."C4")
    single_sign_change: bool
    sign_change_count: int
    degenerate: bool


@dataclass(frozen=True)
class DiscriminantReport:
    delta: object               # Fraction (exact input) or float
    unique_equilibrium: object  # bool, or None on the boundary delta = 0
    positive_root_count: int    # distinct positive roots of the ratio cubic
    boundary: bool
    has_repeated_root: bool


@dataclass(frozen=True)
class PathRealization:
    """Reversible-path realization with a detailed balanced witness.

    rates are evaluated at a rational approximation of the balance ratio
    alpha; the realization has exactly the reduced dynamics for any alpha,
    so exactness survives the approximation while the detailed-balance
    residual shrinks with the isolating interval.
    """

    graph: EGraph
    rates: RateAssignment
    x0: tuple                  # witness state (alpha, 1)
    alpha: float
    alpha_interval: tuple      # exact isolating interval for the true ratio
    relation: UniPoly          # minimal relation: relation(alpha) = 0
    rate_polys: tuple          # per edge, UniPoly in alpha (exact rate law)
    pattern: str
    kind: str                  # "horner" or "c4-segre"


def line_positions(g: EGraph):
    """Map vertex index -> position on the line, validating the lattice.

    Requires dimension 2, nonnegative integer coordinates, constant
    coordinate sum N-1, and all N lattice points present.
    """
    if g.dim != 2:
        raise ValueError("line networks have two species")
    n = g.num_vertices
    positions = {}
    for i, v in enumerate(g.vertices):
        if any(Fraction(c).denominator != 1 or c < 0 for c in v):
            raise ValueError(f"vertex {i} is not a nonnegative lattice point")
        if v[0] + v[1] != n - 1:
            raise ValueError("vertices must lie on x1 + x2 = N - 1")
        positions[i] = int(v[1])
    if sorted(positions.values()) != list(range(n)):
        raise ValueError("vertices must be all N lattice points of the segment")
    return positions


def line_reduce(g: EGraph, k: RateAssignment) -> LineReduction:
    check_pair(g, k)
    if any(v == 0 for v in k.values):
        raise ValueError("line reduction needs strictly positive rates")
    pos = line_positions(g)
    n = g.num_vertices
    exact = k.mode == "exact"
    zero = Fraction(0) if exact else 0.0
    w = [zero] * n
    for idx, (a, b) in enumerate(g.edges):
        w[pos[a]] = w[pos[a]] + k.values[idx] * (pos[b] - pos[a])
    for endpoint, name in ((0, "y1"), (n - 1, "yN")):
        if w[endpoint] == 0:
            raise ValueError(f"endpoint {name} has no outgoing reaction")
    signs = tuple(-1 if x > 0 else (1 if x < 0 else 0) for x in w)
    assert signs[0] == -1 and signs[-1] == 1
    kstar = tuple(abs(x) for x in w)
    reduced = reduced_line_graph(n, signs)
    red_rates = tuple(kstar[p] for p in range(n) if signs[p] != 0)
    rates = RateAssignment(red_rates, "exact" if exact else "approximate")
    return LineReduction(n, kstar, signs, reduced, rates, exact)


def _sign_changes(signs):
    seq = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(seq, seq[1:]) if a != b)


_QUAD_CHAMBER = {(-1, -1): "C1", (-1, 1): "C2", (1, 1): "C3", (1, -1): "C4"}


def classify_chamber(red: LineReduction) -> ChamberReport:
    count = _sign_changes(red.signs)
    degenerate = any(s == 0 for s in red.signs)
    chambers = ()
    if red.n == 4:
        # resolve each degenerate interior sign both ways
        options2 = (-1, 1) if red.signs[1] == 0 else (red.signs[1],)
        options3 = (-1, 1) if red.signs[2] == 0 else (red.signs[2],)
        found = []
        for s2 in options2:
            for s3 in options3:
                name = _QUAD_CHAMBER[(s2, s3)]
                if name not in found:
                    found.append(name)
        chambers = tuple(sorted(found))
    return ChamberReport(red.pattern(), chambers, count == 1, count, degenerate)


def segre_test(kstar):
    """k3* k2* <= k4* k1* (exact when the inputs are rational)."""
    k1, k2, k3, k4 = kstar
    if len(kstar) != 4:
        raise ValueError("segre test takes four reduced rates")
    return k3 * k2 <= k4 * k1


def is_disguised_toric_quadrilateral(red: LineReduction):
    """Theorem-level membership for N = 4: single-sign-change chambers are
    always inside; chamber C4 is inside iff the Segre inequality holds.
    Boundary patterns belong to every adjacent chamber and certify if any
    containing chamber does."""
    if red.n != 4:
        raise ValueError("quadrilateral test needs N = 4")
    report = classify_chamber(red)
    if report.single_sign_change:
        return True
    if any(c in report.chambers for c in ("C1", "C2", "C3")):
        return True
    return segre_test(red.kstar)


def ratio_polynomial(red: LineReduction) -> UniPoly:
    """Steady states on a compatibility class have ratio r = x2/x1 with
    f(r) = 0, where f's coefficients are the signed reduced rates."""
    return UniPoly([Fraction(x) for x in red.signed()])


def discriminant_report(kstar) -> DiscriminantReport:
    """Uniqueness-of-equilibrium discriminant for the C4-shaped system."""
    if len(kstar) != 4 or any(float(x) <= 0 for x in kstar):
        raise ValueError("need four positive reduced rates")
    exact = all(not isinstance(x, float) for x in kstar)
    k1, k2, k3, k4 = (Fraction(x) for x in kstar)
    delta = (k3 * k2) ** 2 - 4 * k4 * k2 ** 3 - 4 * k3 ** 3 * k1 \
        - 27 * (k4 * k1) ** 2 + 18 * k4 * k3 * k1 * k2
    f = UniPoly([k1, -k2, k3, -k4])
    distinct = count_positive_roots(f)
    repeated = f.gcd(f.derivative()).degree() > 0
    if delta < 0:
        assert distinct == 1 and not repeated
        unique = True
    elif delta > 0:
        assert distinct == 3 and not repeated
        unique = False
    else:
        assert repeated
        unique = None
    return DiscriminantReport(delta if exact else float(delta), unique,
                              distinct, delta == 0, repeated)


# ---------------------------------------------------------------------------
# detailed balanced path realizations


def _isolate_unique_root(p: UniPoly, residual_scale, residual_tol=1e-12):
    """Isolating interval of the unique positive root, tightened until the
    midpoint residual |p(mid)| is below residual_tol * residual_scale."""
    intervals = isolate_positive_roots(p, tol=Fraction(1, 2 ** 20))
    assert len(intervals) == 1, "expected a unique positive root"
    a, b = intervals[0]
    width = b - a
    for _ in range(60):
        mid = (a + b) / 2
        if abs(p(mid)) <= residual_tol * residual_scale:
            break
        width = max(width / 2 ** 10, Fraction(1, 2 ** 512))
        a, b = refine_root(p, (a, b), width)
        if a == b:
            break
    return (a, b)


def _shift(p: UniPoly) -> UniPoly:
    return UniPoly([Fraction(0)] + list(p.coeffs))


def horner_realization(red: LineReduction) -> PathRealization:
    """Reversible path graph + rates realizing a single-sign-change system,
    detailed balanced at ratio alpha = x1/x2 (the unique positive root of
    the Horner relation).

    The forward rates are the Horner partial sums t_i(alpha); backward
    rates are alpha * t_{i-1}(alpha).  The construction realizes the
    reduced dynamics exactly for every alpha > 0, and detailed balance
    holds exactly at the root of the relation.
    """
    if _sign_changes(red.signs) != 1:
        raise ValueError("Horner realization needs a single-sign-change pattern")
    n = red.n
    kstar = [Fraction(x) for x in red.kstar]
    c = [(-s) * kq for s, kq in zip(red.signs, kstar)]
    t = [UniPoly([c[0]])]
    for i in range(1, n - 1):
        t.append(UniPoly([c[i]]) + _shift(t[-1]))
    relation = _shift(t[-1]) - UniPoly([kstar[-1]])
    assert descartes_sign_changes(relation) == 1
    a, b = _isolate_unique_root(relation, float(kstar[-1]))
    alpha = (a + b) / 2
    graph = reversible_path(n)
    rate_polys = []
    for src, tgt in graph.edges:
        if tgt == src + 1:
            rate_polys.append(t[src])
        elif src == n - 1:
            # pinned to kN*: the dynamics stay exact for every alpha and the
            # detailed-balance defect is exactly the relation residual
            rate_polys.append(UniPoly([kstar[-1]]))
        else:
            rate_polys.append(_shift(t[tgt]))
    values = tuple(p(alpha) for p in rate_polys)
    assert all(v > 0 for v in values), "path rates must be positive at the root"
    rates = RateAssignment(values, "exact") if red.exact \
        else RateAssignment(tuple(float(v) for v in values), "approximate")
    x0 = (float(alpha), 1.0)
    return PathRealization(graph, rates, x0, float(alpha), (a, b), relation,
                           tuple(rate_polys), red.pattern(), "horner")


def ngon_disguised_certificate(red: LineReduction):
    """Horner certificate when the pattern is single-sign-change, else None
    (membership is then undecided at this level)."""
    if _sign_changes(red.signs) == 1:
        return horner_realization(red)
    return None


def quadrilateral_c4_realization(red: LineReduction) -> PathRealization:
    """Detailed balanced path realization for chamber C4 under the Segre
    inequality: b = r k4* - k3*, a = r b, with r the unique steady ratio.

    At the Segre boundary a = b = 0 and the realization degenerates to the
    two reversible pairs (a subgraph of the path).
    """
    if red.n != 4:
        raise ValueError("C4 realization needs N = 4")
    if not segre_test(red.kstar):
        raise ValueError("Segre inequality fails: no complex balanced realization")
    kstar = [Fraction(x) for x in red.kstar]
    f = UniPoly([kstar[0], -kstar[1], kstar[2], -kstar[3]])
    ia, ib = _isolate_unique_root(f, float(kstar[0]))
    r = (ia + ib) / 2
    bval = max(r * kstar[3] - kstar[2], Fraction(0))
    aval = r * bval
    graph = reversible_path(4)
    table = {(0, 1): kstar[0], (1, 0): kstar[1] + aval, (1, 2): aval,
             (2, 1): bval, (2, 3): kstar[2] + bval, (3, 2): kstar[3]}
    values = tuple(table[e] for e in graph.edges)
    allow_zero = aval == 0 or bval == 0
    rates = RateAssignment(values, "exact", allow_zero) if red.exact \
        else RateAssignment(tuple(float(v) for v in values), "approximate", allow_zero)
    # witness has x2/x1 = r, i.e. alpha = x1/x2 = 1/r
    x0 = (1.0, float(r))
    return PathRealization(graph, rates, x0, float(1 / r), (ia, ib), f,
                           (), red.pattern(), "c4-segre")


def reflect(red: LineReduction) -> LineReduction:
    """The line involution: reverse vertex order and swap species.

    Maps position p to N-1-p and flips every direction sign; used to bring
    reductions into the normal forms the explicit parametrizations expect.
    """
    n = red.n
    kstar = tuple(reversed(red.kstar))
    signs = tuple(-s for s in reversed(red.signs))
    reduced = reduced_line_graph(n, signs)
    red_rates = tuple(kstar[p] for p in range(n) if signs[p] != 0)
    rates = RateAssignment(red_rates, "exact" if red.exact else "approximate")
    return LineReduction(n, kstar, signs, reduced, rates, red.exact)
