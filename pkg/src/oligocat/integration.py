"""Schwartz functions, integration, pushforward and pullback.

A Schwartz function is a finite weighted sum of orbit indicators on a declared
set at a level.  Structural maps (projections, diagonals, symmetrizations,
component inclusions and their composites) act on them; pushforward integrates
over fibers, so its coefficients live in Q[t].
"""

from __future__ import annotations

from .scalar import Poly
from .setexpr import SetExpr, product, one


class GSetMap:
    """An equivariant structural map between declared sets.

    Stored in flattened form: each source component is routed to a target
    component together with, for every target factor, the tuple of source
    slots feeding it.  Composites stay in this form and are pushed in a
    single step.
    """

    __slots__ = ("source", "target", "routes", "_symgroups")

    def __init__(self, source: SetExpr, target: SetExpr, routes, symgroups=None):
        self.source = source
        self.target = target
        self.routes = tuple((tc, tuple(tuple(a) for a in assigns))
                            for tc, assigns in routes)
        if len(self.routes) != source.n_comps():
            raise ValueError("every source component needs a route")
        if symgroups is None:
            symgroups = [self._infer_symgroups(c) for c in range(source.n_comps())]
        self._symgroups = tuple(tuple(tuple(g) for g in gs) for gs in symgroups)
        self._validate()

    def _infer_symgroups(self, c: int):
        """Source Inj-factor slot groups feeding Sub targets (symmetrizations)."""
        tc, assigns = self.routes[c]
        tfactors = self.target.comps[tc]
        src_sub_slots = set()
        for g in self.source.sub_groups(c):
            src_sub_slots.update(g)
        groups = []
        for (kind, _), slots in zip(tfactors, assigns):
            if kind == "S" and slots and slots[0] not in src_sub_slots:
                groups.append(tuple(sorted(slots)))
        return groups

    def _validate(self):
        for c, (tc, assigns) in enumerate(self.routes):
            if not (0 <= tc < self.target.n_comps()):
                raise ValueError("bad target component")
            tfactors = self.target.comps[tc]
            if len(assigns) != len(tfactors):
                raise ValueError("one slot tuple per target factor required")
            k = self.source.slot_count(c)
            sep = {}
            for g in self.source.separated_groups(c):
                for s in g:
                    sep[s] = set(g)
            sub_slots = set()
            for g in self.source.sub_groups(c):
                sub_slots.update(g)
            sub_groups = [set(g) for g in self.source.sub_groups(c)]
            for (kind, n), slots in zip(tfactors, assigns):
                if len(slots) != n:
                    raise ValueError("slot tuple arity mismatch")
                if any(not (0 <= s < k) for s in slots):
                    raise ValueError("slot id out of range")
                whole_sub = set(slots) in sub_groups
                if not whole_sub and any(s in sub_slots for s in slots):
                    raise ValueError("slots of a Sub factor are unordered and "
                                     "can only be referenced as a whole factor")
                if kind in ("I", "S") and not whole_sub:
                    # target needs guaranteed-distinct values
                    if len(set(slots)) != n:
                        raise ValueError("repeated slot feeding a distinct-entry factor")
                    for s in slots:
                        others = set(slots) - {s}
                        if not others <= sep.get(s, set()):
                            raise ValueError(
                                "distinct-entry target fed by slots that are "
                                "not guaranteed distinct")

    def symmetrized_groups(self, c: int):
        return self._symgroups[c]

    def __repr__(self):
        return (f"GSetMap({self.source.to_text()} -> {self.target.to_text()}, "
                f"{self.routes})")

    def __eq__(self, other):
        return (isinstance(other, GSetMap)
                and (self.source, self.target, self.routes, self._symgroups)
                == (other.source, other.target, other.routes, other._symgroups))

    def __hash__(self):
        return hash((self.source, self.target, self.routes, self._symgroups))

    # -- constructors ---------------------------------------------------

    @staticmethod
    def identity(expr: SetExpr) -> "GSetMap":
        routes = []
        for c in range(expr.n_comps()):
            routes.append((c, [slots for slots in expr.factor_slots(c)]))
        return GSetMap(expr, expr, routes)

    @staticmethod
    def spread(source: SetExpr, target: SetExpr, factor_picks) -> "GSetMap":
        """Single-component map picking whole source factors for each target
        factor; factor_picks is one source factor index per target factor."""
        if source.n_comps() != 1 or target.n_comps() != 1:
            raise ValueError("spread is for single-component expressions")
        slots = source.factor_slots(0)
        return GSetMap(source, target, [(0, [slots[i] for i in factor_picks])])

    @staticmethod
    def projection(source: SetExpr, keep) -> "GSetMap":
        """Drop all factors except those in `keep` (single component)."""
        if source.n_comps() != 1:
            raise ValueError("projection wants a product expression")
        target = SetExpr([tuple(source.comps[0][i] for i in keep)])
        return GSetMap.spread(source, target, list(keep))

    @staticmethod
    def proj_product(parts: list[SetExpr], keep) -> "GSetMap":
        """Projection of a product of (possibly union) expressions onto the
        subproduct at the positions in `keep`, handling component routing."""
        source = product(*parts)
        target = product(*[parts[i] for i in keep])
        sizes = [p.n_comps() for p in parts]
        routes = []
        for idx in range(source.n_comps()):
            digits, r = [], idx
            for s in reversed(sizes):
                digits.append(r % s)
                r //= s
            digits.reverse()
            tidx = 0
            for i in keep:
                tidx = tidx * sizes[i] + digits[i]
            bases, b = [], 0
            for p, d in zip(parts, digits):
                bases.append(b)
                b += p.slot_count(d)
            assigns = []
            for i in keep:
                p, d, base = parts[i], digits[i], bases[i]
                for slots in p.factor_slots(d):
                    assigns.append(tuple(base + s for s in slots))
            routes.append((tidx, assigns))
        return GSetMap(source, target, routes)

    @staticmethod
    def coordinates(source: SetExpr, slots, kind: str = "P") -> "GSetMap":
        """Pick individual (readable) slots; target is Power(k) by default,
        or Inj(k)/Sub(k) when the picked slots are guaranteed distinct."""
        if source.n_comps() != 1:
            raise ValueError("coordinates wants a product expression")
        if kind == "P":
            target = SetExpr([tuple(("P", 1) for _ in slots)])
            return GSetMap(source, target, [(0, [(s,) for s in slots])])
        target = SetExpr([((kind, len(slots)),)])
        return GSetMap(source, target, [(0, [tuple(slots)])])

    @staticmethod
    def diagonal(expr: SetExpr) -> "GSetMap":
        """x -> (x, x); a union component lands in its own square."""
        target = product(expr, expr)
        n = expr.n_comps()
        routes = []
        for c in range(n):
            slots = expr.factor_slots(c)
            routes.append((c * n + c, list(slots) + list(slots)))
        return GSetMap(expr, target, routes)

    @staticmethod
    def symmetrization(expr: SetExpr, factor: int = 0) -> "GSetMap":
        """Forget the ordering of an Inj factor: Inj(k) -> Sub(k)."""
        if expr.n_comps() != 1:
            raise ValueError("symmetrization wants a product expression")
        comp = list(expr.comps[0])
        kind, n = comp[factor]
        if kind != "I":
            raise ValueError("symmetrization applies to an Inj factor")
        comp[factor] = ("S", n)
        target = SetExpr([tuple(comp)])
        return GSetMap.spread(expr, target, list(range(len(comp))))

    @staticmethod
    def inclusion(parts: list[SetExpr], which: int) -> "GSetMap":
        """Include one summand into a disjoint union."""
        from .setexpr import union
        target = union(*parts)
        src = parts[which]
        offset = sum(p.n_comps() for p in parts[:which])
        routes = []
        for c in range(src.n_comps()):
            routes.append((offset + c, list(src.factor_slots(c))))
        return GSetMap(src, target, routes)

    @staticmethod
    def terminal(expr: SetExpr) -> "GSetMap":
        """The unique map to the one-point set."""
        return GSetMap(expr, one(), [(0, []) for _ in range(expr.n_comps())])

    @staticmethod
    def swap(a: SetExpr, b: SetExpr) -> "GSetMap":
        """(x, y) -> (y, x) between a x b and b x a, components and all."""
        source = product(a, b)
        target = product(b, a)
        na, nb = a.n_comps(), b.n_comps()
        routes = []
        for ia in range(na):
            ka = a.slot_count(ia)
            aslots = a.factor_slots(ia)
            for ib in range(nb):
                bslots = [tuple(ka + s for s in g) for g in b.factor_slots(ib)]
                routes.append((ib * na + ia, list(bslots) + list(aslots)))
        return GSetMap(source, target, routes)

    def compose(self, inner: "GSetMap") -> "GSetMap":
        """self after inner, flattened to a single structural map."""
        if inner.target != self.source:
            raise ValueError("composition type mismatch")
        routes = []
        symgroups = []
        for c in range(inner.source.n_comps()):
            mc, massigns = inner.routes[c]
            mid_slot_src = []
            for slots in massigns:
                mid_slot_src.extend(slots)
            tc, tassigns = self.routes[mc]
            assigns = [tuple(mid_slot_src[s] for s in slots) for slots in tassigns]
            routes.append((tc, assigns))
            gs = {tuple(sorted(g)) for g in inner.symmetrized_groups(c)}
            for g in self.symmetrized_groups(mc):
                gs.add(tuple(sorted(mid_slot_src[s] for s in g)))
            symgroups.append(sorted(gs))
        return GSetMap(inner.source, self.target, routes, symgroups)

    def graph_map(self) -> "GSetMap":
        """x -> (f(x), x), landing in target x source (used for A_f)."""
        source, target = self.source, self.target
        graph_target = product(target, source)
        routes = []
        symgroups = []
        for c in range(source.n_comps()):
            tc, assigns = self.routes[c]
            gidx = tc * source.n_comps() + c
            gassigns = list(assigns) + list(source.factor_slots(c))
            routes.append((gidx, gassigns))
            symgroups.append(self.symmetrized_groups(c))
        return GSetMap(source, graph_target, routes, symgroups)


# ---------------------------------------------------------------------------
# Schwartz functions


class SchwartzFunction:
    """Finite weighted sum of orbit indicators on a declared set at a level."""

    __slots__ = ("ctx", "expr", "level", "terms")

    def __init__(self, ctx, expr: SetExpr, level: int, terms: dict):
        self.ctx = ctx
        self.expr = expr
        self.level = level
        self.terms = {pat: c for pat, c in terms.items()
                      if isinstance(c, Poly) and not c.is_zero()
                      or not isinstance(c, Poly) and c != 0}
        for pat in self.terms:
            if not isinstance(self.terms[pat], Poly):
                self.terms[pat] = Poly.const(self.terms[pat])

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(ctx, expr: SetExpr, level: int = 0) -> "SchwartzFunction":
        return SchwartzFunction(ctx, expr, level, {})

    @staticmethod
    def indicator(ctx, expr: SetExpr, level: int = 0) -> "SchwartzFunction":
        """The constant function 1 (indicator of the whole set)."""
        return SchwartzFunction(ctx, expr, level,
                                {pat: Poly.one() for pat in ctx.orbits(expr, level)})

    @staticmethod
    def from_orbit(ctx, expr: SetExpr, pat, coeff=1) -> "SchwartzFunction":
        return SchwartzFunction(ctx, expr, pat.level, {pat: Poly.const(coeff)
                                                       if not isinstance(coeff, Poly)
                                                       else coeff})

    def __repr__(self):
        inside = ", ".join(f"{p.to_text()}: {c.to_text()}"
                           for p, c in sorted(self.terms.items(),
                                              key=lambda kv: kv[0].to_text()))
        return f"SchwartzFunction({self.expr.to_text()}@{self.level} {{{inside}}})"

    def __eq__(self, other):
        if not isinstance(other, SchwartzFunction):
            return NotImplemented
        if self.expr != other.expr:
            return False
        n = max(self.level, other.level)
        return change_level(self, n).terms == change_level(other, n).terms

    def __add__(self, other):
        if self.expr != other.expr:
            raise ValueError("cannot add functions on different sets")
        n = max(self.level, other.level)
        a, b = change_level(self, n), change_level(other, n)
        terms = dict(a.terms)
        for pat, c in b.terms.items():
            terms[pat] = terms.get(pat, Poly.zero()) + c
        return SchwartzFunction(self.ctx, self.expr, n, terms)

    def __neg__(self):
        return SchwartzFunction(self.ctx, self.expr, self.level,
                                {p: -c for p, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SchwartzFunction":
        c = c if isinstance(c, Poly) else Poly.const(c)
        return SchwartzFunction(self.ctx, self.expr, self.level,
                                {p: c * v for p, v in self.terms.items()})

    def __mul__(self, other):
        """Pointwise product; same-level orbits are disjoint, so this is a
        coefficient-wise product on the common refinement."""
        if isinstance(other, (int, Poly)):
            return self.scale(other)
        if self.expr != other.expr:
            raise ValueError("cannot multiply functions on different sets")
        n = max(self.level, other.level)
        a, b = change_level(self, n), change_level(other, n)
        if len(b.terms) < len(a.terms):
            a, b = b, a
        terms = {pat: c * b.terms[pat]
                 for pat, c in a.terms.items() if pat in b.terms}
        return SchwartzFunction(self.ctx, self.expr, n, terms)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, pat) -> Poly:
        return self.terms.get(pat, Poly.zero())


def integrate(phi: SchwartzFunction) -> Poly:
    """Sum of coefficients times orbit measures."""
    total = Poly.zero()
    for pat, c in phi.terms.items():
        total = total + c * phi.ctx.measure(phi.expr, pat)
    return total


def change_level(phi: SchwartzFunction, level2: int) -> SchwartzFunction:
    """Re-express on the finer orbit decomposition of a deeper level."""
    if level2 == phi.level:
        return phi
    if level2 < phi.level:
        raise ValueError("cannot coarsen a Schwartz function's level")
    terms = {}
    for pat, c in phi.terms.items():
        for sub in phi.ctx.refine(phi.expr, pat, level2):
            terms[sub] = terms.get(sub, Poly.zero()) + c
    return SchwartzFunction(phi.ctx, phi.expr, level2, terms)


_push_cache: dict = {}
_pull_index: dict = {}


def pushforward(f: GSetMap, phi: SchwartzFunction) -> SchwartzFunction:
    """(f_* phi)(y) = integral of phi over the fiber of f at y."""
    if f.source != phi.expr:
        raise ValueError("function not defined on the source of the map")
    cache = _push_cache.setdefault((phi.ctx, f), {})
    terms = {}
    for pat, c in phi.terms.items():
        hit = cache.get(pat)
        if hit is None:
            hit = phi.ctx.push_orbit(f, pat)
            cache[pat] = hit
        image, coeff = hit
        if not coeff.is_zero():
            terms[image] = terms.get(image, Poly.zero()) + c * coeff
    return SchwartzFunction(phi.ctx, f.target, phi.level, terms)


def pullback(f: GSetMap, psi: SchwartzFunction) -> SchwartzFunction:
    """(f^* psi)(x) = psi(f(x)), re-expressed in the orbit basis."""
    if f.target != psi.expr:
        raise ValueError("function not defined on the target of the map")
    key = (psi.ctx, f, psi.level)
    index = _pull_index.get(key)
    if index is None:
        index = {}
        for pat in psi.ctx.orbits(f.source, psi.level):
            index.setdefault(psi.ctx.image_orbit(f, pat), []).append(pat)
        _pull_index[key] = index
    terms = {}
    for image, c in psi.terms.items():
        for pat in index.get(image, ()):
            terms[pat] = c
    return SchwartzFunction(psi.ctx, f.source, psi.level, terms)


def projection_square(a: SetExpr, b: SetExpr, y: SetExpr):
    """The cartesian square built from two projections onto a common factor:
    f: a x y -> y, g: b x y -> y, with fiber product a x b x y.

    Returns (f, g, f_prime, g_prime) with g_prime over f and f_prime over g.
    """
    f = GSetMap.proj_product([a, y], [1])
    g = GSetMap.proj_product([b, y], [1])
    fp = GSetMap.proj_product([a, b, y], [1, 2])   # to b x y, base change of f
    gp = GSetMap.proj_product([a, b, y], [0, 2])   # to a x y
    return f, g, fp, gp
