"""Fixed-step numerical integration and steady-state analysis.

Classical RK4 with a hard positivity floor: leaving the positive orthant
(or blowing up) halts the run with an event rather than projecting, so
modeling errors stay visible.  Steady states on a compatibility class of a
line network come from exact positive-root isolation of the ratio
polynomial.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .chambers import LineReduction, discriminant_report, ratio_polynomial
from .massaction import MassActionSystem
from .poly import UniPoly, isolate_positive_roots


@dataclass
class Trajectory:
    times: list
    states: list
    events: list = field(default_factory=list)

    def final(self):
        return self.states[-1]


OVERFLOW_BOUND = 1e12


def compile_rhs(sys: MassActionSystem):
    """Flatten the vector field into float term tables (one entry per
    source monomial) so the integrator's inner loop stays cheap."""
    merged = {}
    verts = sys.graph.vertices
    kf = sys.rates.as_floats()
    dim = sys.dim
    for idx, (a, b) in enumerate(sys.graph.edges):
        exps = tuple(int(c) for c in verts[a])
        row = merged.setdefault(exps, [0.0] * dim)
        for i in range(dim):
            row[i] += kf[idx] * float(verts[b][i] - verts[a][i])
    terms = [(exps, tuple(row)) for exps, row in merged.items()]

    def f(x):
        out = [0.0] * dim
        for exps, row in terms:
            m = 1.0
            for xi, e in zip(x, exps):
                if e:
                    m *= xi ** e
            for i in range(dim):
                out[i] += m * row[i]
        return out

    return f


def integrate(sys: MassActionSystem, x0, t_end, dt=1e-3, record_every=1) -> Trajectory:
    """RK4 with fixed step dt from x0 to t_end.

    Halts early (with an event) if a coordinate drops to zero or exceeds
    the overflow bound.  record_every thins the stored samples; the final
    state is always recorded.
    """
    if any(v <= 0 for v in x0):
        raise ValueError("initial state must be strictly positive")
    if dt <= 0:
        raise ValueError("dt must be positive")
    x = [float(v) for v in x0]
    n = len(x)
    f = compile_rhs(sys)
    steps = max(1, round(t_end / dt))
    traj = Trajectory([0.0], [tuple(x)])
    for step in range(1, steps + 1):
        k1 = f(x)
        k2 = f([x[i] + 0.5 * dt * k1[i] for i in range(n)])
        k3 = f([x[i] + 0.5 * dt * k2[i] for i in range(n)])
        k4 = f([x[i] + dt * k3[i] for i in range(n)])
        x = [x[i] + dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]) for i in range(n)]
        t = step * dt
        if any(v <= 0 for v in x):
            traj.events.append((t, "nonpositive"))
            traj.times.append(t)
            traj.states.append(tuple(x))
            break
        if any(abs(v) > OVERFLOW_BOUND for v in x):
            traj.events.append((t, "overflow"))
            traj.times.append(t)
            traj.states.append(tuple(x))
            break
        if step % record_every == 0 or step == steps:
            traj.times.append(t)
            traj.states.append(tuple(x))
    return traj


def conservation_drift(traj: Trajectory):
    """Max drift of the coordinate sum along the trajectory."""
    s0 = sum(traj.states[0])
    return max(abs(sum(x) - s0) for x in traj.states)


def steady_states_on_class(red: LineReduction, total):
    """Positive steady states on x1 + x2 = total for a reduced line network.

    Ratio roots r = x2/x1 of the ratio polynomial map back through
    x1 = total/(1+r), x2 = total*r/(1+r).  Returns (state, multiplicity)
    pairs, ascending in r; multiplicity > 1 marks a degenerate equilibrium.
    """
    if total <= 0:
        raise ValueError("total must be positive")
    f = ratio_polynomial(red)
    if f.is_zero():
        return []
    sf = f.squarefree_part()
    states = []
    for a, b in isolate_positive_roots(sf, tol=Fraction(1, 2 ** 40)):
        r = float((a + b) / 2)
        x1 = float(total) / (1 + r)
        states.append(((x1, float(total) - x1), _root_multiplicity(f, a, b)))
    return states


def _root_multiplicity(f: UniPoly, a, b):
    """Multiplicity of the single root of f in (a, b], from the gcd chain:
    a root of multiplicity m survives m - 1 rounds of gcd(h, h')."""
    from .poly import sturm_chain, sturm_count
    mult = 1
    h = f.gcd(f.derivative())
    while h.degree() > 0:
        sf = h.squarefree_part()
        if sturm_count(sturm_chain(sf), a, b) < 1:
            break
        mult += 1
        h = h.gcd(h.derivative())
    return mult


@dataclass
class ProbeReport:
    equilibria: list           # (state, multiplicity)
    endpoints: list            # terminal states of the trials
    clusters: list             # cluster representative states
    consistent: bool           # cluster count matches the stable-equilibrium count
    trials: int
    seed: int


def multistationarity_probe(red: LineReduction, total, trials, seed=0,
                            t_end=50.0, dt=1e-3) -> ProbeReport:
    """Integrate from random starts on the class and cluster the endpoints.

    On a one-dimensional class the equilibria alternate stability, so with
    m equilibria (counted without multiplicity, all nondegenerate) the
    expected number of endpoint clusters is ceil(m / 2).
    """
    if red.n != 4:
        raise ValueError("probe supports the quadrilateral family (N = 4)")
    from .massaction import generate_system
    equil = steady_states_on_class(red, total)
    if trials == 0:
        return ProbeReport(equil, [], [], True, 0, seed)
    rng = random.Random(seed)
    sys = generate_system(red.reduced_graph, red.reduced_rates) if red.exact \
        else None
    if sys is None:
        raise ValueError("probe needs exact reduced rates")
    endpoints = []
    for _ in range(trials):
        frac = rng.uniform(0.05, 0.95)
        x0 = (frac * float(total), (1 - frac) * float(total))
        traj = integrate(sys, x0, t_end, dt, record_every=1000)
        if traj.events:
            raise RuntimeError(f"integration event: {traj.events}")
        endpoints.append(traj.final())
    clusters = []
    for x in sorted(endpoints):
        if not clusters or abs(x[0] - clusters[-1][0]) > 1e-4:
            clusters.append(x)
    stable = (len([e for e in equil if e[1] == 1]) + 1) // 2
    consistent = len(clusters) == max(stable, 1) if all(m == 1 for _, m in equil) \
        else True
    return ProbeReport(equil, endpoints, clusters, consistent, trials, seed)
