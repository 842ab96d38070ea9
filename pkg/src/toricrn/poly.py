"""Exact polynomial arithmetic: sparse multivariate and dense univariate.

SparsePoly carries mixed indeterminates (species variables and formal edge
rates) with Fraction coefficients; UniPoly backs the real-root machinery
(Descartes, Sturm sequences, bisection refinement).
"""

from fractions import Fraction


class SparsePoly:
    """Sparse multivariate polynomial over Q.

    terms maps dense exponent tuples (one slot per variable in varnames)
    to nonzero Fraction coefficients; the representation is canonical, so
    equality is plain dict comparison.
    """

    __slots__ = ("varnames", "terms")

    def __init__(self, varnames, terms=None):
        self.varnames = tuple(varnames)
        clean = {}
        if terms:
            for exps, c in terms.items():
                c = Fraction(c)
                if c != 0:
                    clean[tuple(int(e) for e in exps)] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, varnames):
        return cls(varnames)

    @classmethod
    def constant(cls, value, varnames):
        z = (0,) * len(varnames)
        return cls(varnames, {z: Fraction(value)})

    @classmethod
    def variable(cls, name, varnames):
        i = tuple(varnames).index(name)
        exps = tuple(1 if j == i else 0 for j in range(len(varnames)))
        return cls(varnames, {exps: Fraction(1)})

    @classmethod
    def monomial(cls, coeff, exps, varnames):
        return cls(varnames, {tuple(exps): Fraction(coeff)})

    # -- basic queries -----------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, name):
        i = self.varnames.index(name)
        return max((e[i] for e in self.terms), default=0)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SparsePoly.constant(other, self.varnames)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.varnames == other.varnames and self.terms == other.terms

    def __hash__(self):
        return hash((self.varnames, frozenset(self.terms.items())))

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, SparsePoly):
            if other.varnames != self.varnames:
                raise ValueError("mixed variable contexts")
            return other
        return SparsePoly.constant(other, self.varnames)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s == 0:
                terms.pop(e, None)
            else:
                terms[e] = s
        return SparsePoly(self.varnames, terms)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly(self.varnames, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + self._coerce(other)

    def __mul__(self, other):
        if not isinstance(other, SparsePoly):
            c = Fraction(other)
            if c == 0:
                return SparsePoly(self.varnames)
            return SparsePoly(self.varnames, {e: c * v for e, v in self.terms.items()})
        other = self._coerce(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, 0) + c1 * c2
                if s == 0:
                    terms.pop(e, None)
                else:
                    terms[e] = s
        return SparsePoly(self.varnames, terms)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("nonnegative integer powers only")
        result = SparsePoly.constant(1, self.varnames)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- evaluation / substitution ------------------------------------------

    def evaluate(self, assignment):
        """Full numeric evaluation; assignment maps every variable to a value."""
        vals = [assignment[v] for v in self.varnames]
        total = 0
        for exps, c in self.terms.items():
            t = c if all(isinstance(x, (int, Fraction)) for x in vals) else float(c)
            for x, e in zip(vals, exps):
                if e:
                    t = t * x ** e
            total = total + t
        return total

    def substitute(self, mapping):
        """Substitute SparsePoly values (same target context) for variables.

        mapping: variable name -> SparsePoly in the *target* context.
        Unmapped variables must exist in the target context.
        """
        target = None
        for p in mapping.values():
            target = p.varnames
            break
        if target is None:
            raise ValueError("empty substitution")
        base = {}
        for v in self.varnames:
            if v in mapping:
                base[v] = mapping[v]
            else:
                base[v] = SparsePoly.variable(v, target)
        out = SparsePoly.zero(target)
        for exps, c in self.terms.items():
            t = SparsePoly.constant(c, target)
            for v, e in zip(self.varnames, exps):
                if e:
                    t = t * base[v] ** e
            out = out + t
        return out

    def lift(self, varnames):
        """Re-express in a superset variable context."""
        varnames = tuple(varnames)
        pos = [varnames.index(v) for v in self.varnames]
        terms = {}
        for exps, c in self.terms.items():
            e = [0] * len(varnames)
            for p, x in zip(pos, exps):
                e[p] = x
            terms[tuple(e)] = c
        return SparsePoly(varnames, terms)

    def div_exact(self, divisor):
        """Exact quotient self/divisor, or None when the division leaves
        a remainder.  Leading terms are taken in graded-lex order."""
        divisor = self._coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        dlead = max(divisor.terms, key=_grlex_key)
        dcoef = divisor.terms[dlead]
        rem = dict(self.terms)
        quot = {}
        while rem:
            lead = max(rem, key=_grlex_key)
            diff = tuple(a - b for a, b in zip(lead, dlead))
            if any(d < 0 for d in diff):
                return None
            c = rem[lead] / dcoef
            quot[diff] = quot.get(diff, 0) + c
            for e2, c2 in divisor.terms.items():
                e = tuple(a + b for a, b in zip(diff, e2))
                s = rem.get(e, 0) - c * c2
                if s == 0:
                    rem.pop(e, None)
                else:
                    rem[e] = s
        return SparsePoly(self.varnames, quot)

    def content(self):
        """gcd of numerators / lcm of denominators over all coefficients."""
        from math import gcd
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, abs(c.numerator))
            den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den) if num else Fraction(0)

    def primitive_part(self):
        ct = self.content()
        if ct == 0:
            return self
        return self * (1 / ct)

    # -- rendering -----------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.sorted_terms():
            factors = []
            for v, e in zip(self.varnames, exps):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}^{e}")
            mono = "*".join(factors)
            if not mono:
                parts.append(_coeff_str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{_coeff_str(c)}*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self):
        return f"SparsePoly({self})"


def _grlex_key(exps):
    return (sum(exps), exps)


def _coeff_str(c):
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# ---------------------------------------------------------------------------
# dense univariate polynomials


class UniPoly:
    """Dense univariate polynomial, coefficients ascending by degree.

    Coefficients are Fractions in exact mode or floats; the root-counting
    machinery (Sturm, Descartes) demands exact coefficients.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def from_roots(cls, roots):
        p = cls([1])
        for r in roots:
            p = p * cls([-Fraction(r), 1])
        return p

    def is_zero(self):
        return not self.coeffs

    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else -1

    def is_exact(self):
        return all(isinstance(c, (int, Fraction)) for c in self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UniPoly([other])
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return UniPoly(out)

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            return UniPoly([c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return UniPoly([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self):
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dn = other.degree()
        lead = other.coeffs[-1]
        quot = [Fraction(0)] * max(0, len(rem) - dn)
        for i in range(len(rem) - dn - 1, -1, -1):
            f = rem[i + dn] / lead
            quot[i] = f
            if f:
                for j, c in enumerate(other.coeffs):
                    rem[i + j] -= f * c
        return UniPoly(quot), UniPoly(rem[:dn])

    def monic(self):
        if self.is_zero():
            return self
        lead = self.coeffs[-1]
        return UniPoly([c / lead for c in self.coeffs])

    def gcd(self, other):
        """Monic gcd by the Euclidean algorithm (exact coefficients only)."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
            b = b.monic() if not b.is_zero() else b
        return a.monic()

    def squarefree_part(self):
        g = self.gcd(self.derivative())
        if g.degree() <= 0:
            return self.monic()
        return self.divmod(g)[0].monic()

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            cs = _coeff_str(c) if isinstance(c, Fraction) else repr(c)
            parts.append(cs if i == 0 else f"{cs}*x^{i}")
        return " + ".join(parts)

    def __repr__(self):
        return f"UniPoly({list(self.coeffs)})"


def _sign(x):
    return (x > 0) - (x < 0)


def _variations(signs):
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)


def descartes_sign_changes(p: UniPoly):
    """Sign changes in the coefficient sequence.

    By Descartes' rule the number of positive roots (with multiplicity) is
    at most this and differs from it by an even number.
    """
    if p.is_zero():
        raise ValueError("undefined for zero polynomial")
    return _variations([_sign(c) for c in p.coeffs])


def sturm_chain(p: UniPoly):
    chain = [p, p.derivative()]
    while not chain[-1].is_zero() and chain[-1].degree() > 0:
        rem = chain[-2].divmod(chain[-1])[1]
        if rem.is_zero():
            break
        chain.append(-rem)
    return [q for q in chain if not q.is_zero()]


def _sign_at_zero_plus(p: UniPoly):
    for c in p.coeffs:
        if c != 0:
            return _sign(c)
    return 0


def _sign_at_infinity(p: UniPoly):
    return _sign(p.coeffs[-1]) if p.coeffs else 0


def sturm_count(chain, a, b):
    """Distinct roots in (a, b], endpoints not roots of chain[0]."""
    va = _variations([_sign(q(a)) for q in chain])
    vb = _variations([_sign(q(b)) for q in chain])
    return va - vb


def count_positive_roots(p: UniPoly):
    """Exact number of distinct roots in (0, inf), by Sturm sequences."""
    if p.is_zero():
        raise ValueError("undefined for zero polynomial")
    if not p.is_exact():
        raise ValueError("exact (rational) coefficients required")
    sf = p.squarefree_part()
    if sf.degree() == 0:
        return 0
    chain = sturm_chain(sf)
    v0 = _variations([_sign_at_zero_plus(q) for q in chain])
    vinf = _variations([_sign_at_infinity(q) for q in chain])
    return v0 - vinf


def has_multiple_roots(p: UniPoly):
    return p.gcd(p.derivative()).degree() > 0


def root_bound(p: UniPoly):
    """Cauchy bound: all real roots lie in (-B, B)."""
    lead = abs(Fraction(p.coeffs[-1]))
    m = max((abs(Fraction(c)) for c in p.coeffs[:-1]), default=Fraction(0))
    return 1 + m / lead


def isolate_positive_roots(p: UniPoly, tol=1e-9):
    """Disjoint rational intervals, each holding exactly one positive root,
    each of width <= tol.  The input must be squarefree on (0, inf)."""
    if p.is_zero():
        raise ValueError("undefined for zero polynomial")
    if not p.is_exact():
        raise ValueError("exact (rational) coefficients required")
    if tol <= 0:
        raise ValueError("tol must be positive")
    g = p.gcd(p.derivative())
    if g.degree() > 0 and count_positive_roots(g) > 0:
        raise ValueError("repeated positive roots: divide by gcd(p, p') first")
    total = count_positive_roots(p)
    if total == 0:
        return []
    chain = sturm_chain(p.monic())
    bound = root_bound(p)
    while p(bound) == 0:
        bound += 1

    v_zero = _variations([_sign_at_zero_plus(q) for q in chain])

    def count(a, b, va=None):
        va = _variations([_sign(q(a)) for q in chain]) if va is None else va
        vb = _variations([_sign(q(b)) for q in chain])
        return va - vb

    tol = Fraction(tol).limit_denominator(10 ** 15)
    isolated = []
    # (a, b, roots in (a, b]) with a = 0 meaning the open end at 0+.
    work = [(Fraction(0), bound, total)]
    while work:
        a, b, n = work.pop()
        if n == 0:
            continue
        if n == 1:
            isolated.append(_refine(p, chain, a, b, tol, v_zero if a == 0 else None))
            continue
        mid = (a + b) / 2
        while p(mid) == 0:
            mid = (a + mid) / 2
        va = v_zero if a == 0 else _variations([_sign(q(a)) for q in chain])
        left = count(a, mid, va)
        work.append((a, mid, left))
        work.append((mid, b, n - left))
    isolated.sort()
    return isolated


def _refine(p, chain, a, b, tol, v_at_a=None):
    """Shrink (a, b] around its single root to width <= tol by bisection."""
    va = _variations([_sign(q(a)) for q in chain]) if v_at_a is None else v_at_a
    while b - a > tol:
        mid = (a + b) / 2
        if p(mid) == 0:
            half = min(tol / 2, (b - a) / 4)
            return (mid - half, mid + half)
        vm = _variations([_sign(q(mid)) for q in chain])
        if va - vm == 1:
            b = mid
        else:
            a, va = mid, vm
    return (a, b)


def refine_root(p: UniPoly, interval, tol):
    """Tighten an isolating interval until its width is <= tol."""
    a, b = Fraction(interval[0]), Fraction(interval[1])
    fa = p(a)
    if fa == 0:
        return (a, a)
    fb = p(b)
    if fb == 0:
        return (b, b)
    if _sign(fa) == _sign(fb):
        raise ValueError("interval does not bracket a sign change")
    tol = Fraction(tol)
    while b - a > tol:
        mid = (a + b) / 2
        fm = p(mid)
        if fm == 0:
            return (mid, mid)
        if _sign(fm) == _sign(fa):
            a, fa = mid, fm
        else:
            b, fb = mid, fm
    return (a, b)
