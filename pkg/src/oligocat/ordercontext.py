"""Backend for the order-preserving self-maps of the real line.

Orbits of the stabilizer of r pinned constants on a declared set are interval
patterns: weak orders (ordered set partitions) on the coordinate slots and the
constants.  The four measures assign a sign to each interval power and extend
multiplicatively; all values are integer constants.

Also hosts the colored-order combinatorics: ruffle products of words and the
sign-table symbols that classify the measures.
"""

from __future__ import annotations

import re
from collections import Counter
from functools import lru_cache
from itertools import permutations

from .scalar import Poly
from .setexpr import SetExpr

# Pattern classes are tuples of items; an item is a slot id >= 0 or -i for
# the i-th pinned constant (so constants sort first within a class).
Classes = tuple[tuple[int, ...], ...]

LEGAL_SPECS = ((-1, -1), (-1, 0), (0, -1), (0, 0))


class OrderMeasureSpec:
    """One of the four measures: values on left/right interval powers."""

    __slots__ = ("epsilon", "delta")

    def __init__(self, epsilon: int, delta: int):
        if (epsilon, delta) not in LEGAL_SPECS:
            raise ValueError("epsilon and delta must each be -1 or 0")
        self.epsilon, self.delta = epsilon, delta

    def __eq__(self, other):
        return (isinstance(other, OrderMeasureSpec)
                and (self.epsilon, self.delta) == (other.epsilon, other.delta))

    def __hash__(self):
        return hash((self.epsilon, self.delta))

    def __repr__(self):
        return f"OrderMeasureSpec({self.epsilon}, {self.delta})"


class OrderPattern:
    """One stabilizer orbit: a weak order on slots and constants, canonical
    under Sub-factor slot symmetries."""

    __slots__ = ("comp", "level", "classes")

    def __init__(self, comp: int, level: int, classes: Classes):
        self.comp = comp
        self.level = level
        self.classes = classes

    def __eq__(self, other):
        return (isinstance(other, OrderPattern) and
                (self.comp, self.level, self.classes)
                == (other.comp, other.level, other.classes))

    def __hash__(self):
        return hash((self.comp, self.level, self.classes))

    def __repr__(self):
        return f"OrderPattern({self.to_text(None)!r})"

    def to_text(self, expr: SetExpr | None = None) -> str:
        """Token string, e.g. "r1<b1=r2<b2"; constants appear as "#i"."""
        letters = "rbgycmwk"
        factor_of = {}
        if expr is not None:
            for fi, slots in enumerate(expr.factor_slots(self.comp)):
                for j, s in enumerate(slots):
                    factor_of[s] = (fi, j)
        names = []
        for cls in self.classes:
            toks = []
            for item in sorted(cls):
                if item < 0:
                    toks.append(f"#{-item}")
                else:
                    fi, j = factor_of.get(item, (0, item))
                    letter = letters[fi % len(letters)]
                    toks.append(f"{letter}{j + 1}")
            names.append("=".join(toks))
        tag = f"@r={self.level}"
        if self.comp:
            tag += f"#c{self.comp}"
        return "<".join(names) + tag if names else "()" + tag


class OrderContext:
    """Orbit enumeration and one of the four measures; measures are constant
    elements of Q[t] so that the matrix layer is uniform across backends."""

    name = "order"

    def __init__(self, epsilon: int = -1, delta: int = -1):
        self.spec = OrderMeasureSpec(epsilon, delta)

    def __repr__(self):
        return f"OrderContext({self.spec.epsilon}, {self.spec.delta})"

    def __eq__(self, other):
        return isinstance(other, OrderContext) and self.spec == other.spec

    def __hash__(self):
        return hash(("order", self.spec.epsilon, self.spec.delta))

    # -- canonical form -------------------------------------------------

    def canonicalize(self, expr: SetExpr, pat: OrderPattern) -> OrderPattern:
        syms = expr.slot_symmetries(pat.comp)
        norm = tuple(tuple(sorted(c)) for c in pat.classes)
        if len(syms) == 1:
            return OrderPattern(pat.comp, pat.level, norm)
        best = None
        for w in syms:
            cand = tuple(tuple(sorted(w[i] if i >= 0 else i for i in cls))
                         for cls in pat.classes)
            if best is None or cand < best:
                best = cand
        return OrderPattern(pat.comp, pat.level, best)

    # -- enumeration ----------------------------------------------------

    def orbits(self, expr: SetExpr, level: int) -> tuple[OrderPattern, ...]:
        return _order_orbits(expr, level)

    # -- measure ----------------------------------------------------------

    def measure(self, expr: SetExpr, pat: OrderPattern) -> Poly:
        """Product over the gaps between constants of the interval-power
        values; the whole line (no constants around) gets the split sum."""
        e, d = self.spec.epsilon, self.spec.delta
        # positions of constant-containing classes, and generic class counts
        # for each gap between them
        gaps = [0]
        n_consts = 0
        for cls in pat.classes:
            if any(i < 0 for i in cls):
                n_consts += 1
                gaps.append(0)
            else:
                gaps[-1] += 1
        total = 1
        for gi, k in enumerate(gaps):
            if n_consts == 0:
                total *= _full_line_value(e, d, k)
            elif gi == 0:
                total *= e ** k if k else 1
            elif gi == len(gaps) - 1:
                total *= d ** k if k else 1
            else:
                total *= (-1) ** k
        return Poly.const(total)

    def set_measure(self, expr: SetExpr, level: int = 0) -> Poly:
        total = Poly.zero()
        for pat in self.orbits(expr, level):
            total = total + self.measure(expr, pat)
        return total

    # -- level refinement ----------------------------------------------

    def refine(self, expr: SetExpr, pat: OrderPattern, level2: int
               ) -> list[OrderPattern]:
        """New constants are appended above all existing ones."""
        if level2 < pat.level:
            raise ValueError("refinement level must not decrease")
        pats = [pat]
        for newc in range(pat.level + 1, level2 + 1):
            nxt = []
            for p in pats:
                nxt.extend(self._insert_constant(expr, p, newc))
            pats = nxt
        return [self.canonicalize(expr, p) for p in pats]

    def _insert_constant(self, expr, pat, newc):
        """All placements of constant #newc above every existing constant."""
        last_const_pos = -1
        for i, cls in enumerate(pat.classes):
            if any(x < 0 for x in cls):
                last_const_pos = i
        out = []
        ncls = len(pat.classes)
        # joining an existing generic class above the last constant
        for i in range(last_const_pos + 1, ncls):
            classes = list(pat.classes)
            classes[i] = tuple(sorted(classes[i] + (-newc,)))
            out.append(OrderPattern(pat.comp, newc, tuple(classes)))
        # a new singleton class in any gap above the last constant
        for i in range(last_const_pos + 1, ncls + 1):
            classes = list(pat.classes)
            classes.insert(i, (-newc,))
            out.append(OrderPattern(pat.comp, newc, tuple(classes)))
        return out

    # -- pushforward primitive -------------------------------------------

    def push_orbit(self, mapdata, pat: OrderPattern):
        src, tgt = mapdata.source, mapdata.target
        tcomp, assigns = mapdata.routes[pat.comp]
        level = pat.level

        class_of = {}
        for ci, cls in enumerate(pat.classes):
            for item in cls:
                class_of[item] = ci

        tgt_slot_src = []
        for slots in assigns:
            tgt_slot_src.extend(slots)

        # image pattern: induced weak order on target slots and constants
        img = {}
        for tslot, sslot in enumerate(tgt_slot_src):
            img.setdefault(class_of[sslot], []).append(tslot)
        for ci, cls in enumerate(pat.classes):
            for item in cls:
                if item < 0:
                    img.setdefault(ci, []).append(item)
        img_classes = tuple(tuple(sorted(img[ci])) for ci in sorted(img))
        image = self.canonicalize(tgt, OrderPattern(tcomp, level, img_classes))

        # multiplicity from symmetrized Inj factors
        sym_groups = mapdata.symmetrized_groups(pat.comp)
        m_sym = 1
        if sym_groups:
            ref = pat.classes
            k = src.slot_count(pat.comp)
            m_sym = sum(
                1 for w in _perm_group(sym_groups, k)
                if tuple(tuple(sorted(w[i] if i >= 0 else i for i in cls))
                         for cls in ref) == ref)

        # residual measure: classes without referenced slots or constants,
        # sitting in gaps between "pinned" classes
        referenced = set(tgt_slot_src)
        pinned = []        # per class: True if it has a constant or a referenced slot
        counts = []        # number of unreferenced slots per class
        for cls in pat.classes:
            has_pin = any(i < 0 or i in referenced for i in cls)
            free = [i for i in cls if i >= 0 and i not in referenced]
            pinned.append(has_pin)
            counts.append(len(free))
        coeff = 1
        gaps = [0]
        n_pins = 0
        for ci in range(len(pat.classes)):
            if pinned[ci]:
                n_pins += 1
                gaps.append(0)
            else:
                gaps[-1] += 1 if counts[ci] else 0
        e, d = self.spec.epsilon, self.spec.delta
        for gi, kk in enumerate(gaps):
            if kk == 0:
                continue
            if n_pins == 0:
                coeff *= _full_line_value(e, d, kk)
            elif gi == 0:
                coeff *= e ** kk
            elif gi == len(gaps) - 1:
                coeff *= d ** kk
            else:
                coeff *= (-1) ** kk
        # classes that are partly referenced contribute single points (x1)
        s_res = 1
        res_groups = [g for g in src.sub_groups(pat.comp)
                      if not any(s in referenced for s in g)]
        if res_groups:
            # residual pattern: unreferenced slots with pinned classes marked
            marked = tuple(
                tuple(sorted([i for i in cls if i >= 0 and i not in referenced]
                             + ([-(ci + 1000)] if pinned[ci] else [])))
                for ci, cls in enumerate(pat.classes))
            k = src.slot_count(pat.comp)
            s_res = sum(
                1 for w in _perm_group(res_groups, k)
                if tuple(tuple(sorted(w[i] if i >= 0 else i for i in cls))
                         for cls in marked) == marked)
        return image, Poly.const(coeff) / s_res * m_sym

    def image_orbit(self, mapdata, pat: OrderPattern) -> OrderPattern:
        """Image pattern only (no fiber measure); the pullback workhorse."""
        tgt = mapdata.target
        tcomp, assigns = mapdata.routes[pat.comp]
        class_of = {}
        for ci, cls in enumerate(pat.classes):
            for item in cls:
                class_of[item] = ci
        img = {}
        tslot = 0
        for slots in assigns:
            for sslot in slots:
                img.setdefault(class_of[sslot], []).append(tslot)
                tslot += 1
        for ci, cls in enumerate(pat.classes):
            for item in cls:
                if item < 0:
                    img.setdefault(ci, []).append(item)
        img_classes = tuple(tuple(sorted(img[ci])) for ci in sorted(img))
        return self.canonicalize(tgt, OrderPattern(tcomp, pat.level, img_classes))

    # -- misc -------------------------------------------------------------

    def orbit_text(self, expr: SetExpr, pat: OrderPattern) -> str:
        return pat.to_text(expr)

    def parse_orbit(self, expr: SetExpr, s: str) -> OrderPattern:
        return parse_order_pattern(expr, s, self)


def _full_line_value(e: int, d: int, k: int) -> int:
    """Measure of the set of k increasing points on the whole line: split the
    line at one constant and sum over distributions."""
    total = 0
    for i in range(k + 1):
        total += (e ** i) * (d ** (k - i))          # none at the cut point
    for i in range(k):
        total += (e ** i) * (d ** (k - 1 - i))      # one at the cut point
    return total


@lru_cache(maxsize=None)
def _order_orbits(expr: SetExpr, level: int) -> tuple[OrderPattern, ...]:
    ctx = OrderContext()  # enumeration is measure-independent
    out = []
    for c in range(expr.n_comps()):
        k = expr.slot_count(c)
        # constants first (they force their relative order during insertion)
        items = [-i for i in range(1, level + 1)] + list(range(k))
        seps = [set(g) for g in expr.separated_groups(c)]
        seps.append(set(-i for i in range(1, level + 1)))
        seen = set()
        for classes in _weak_orders(items, seps, n_consts=level):
            pat = ctx.canonicalize(expr, OrderPattern(c, level, classes))
            if pat.classes not in seen:
                seen.add(pat.classes)
                out.append(pat)
    out.sort(key=lambda p: (p.comp, p.classes))
    return tuple(out)


def _weak_orders(items, separated, n_consts: int = 0):
    """All ordered set partitions of `items` with each separated group's
    members in pairwise distinct classes; the first n_consts items are the
    constants -1..-n_consts and must appear in increasing constant order."""
    sep_of = {}
    for g in separated:
        for s in g:
            sep_of[s] = set(g) - {s}

    def rec(idx, classes):
        if idx == len(items):
            yield tuple(tuple(sorted(c)) for c in classes)
            return
        item = items[idx]
        forbidden = sep_of.get(item, ())
        if item < 0:
            # constant: only positions after the previous constant's class
            start = next((i + 1 for i in range(len(classes) - 1, -1, -1)
                          if any(x < 0 for x in classes[i])), 0)
        else:
            start = 0
        for pos in range(start, len(classes)):
            if not any(o in forbidden for o in classes[pos]):
                classes[pos].append(item)
                yield from rec(idx + 1, classes)
                classes[pos].pop()
        for pos in range(start, len(classes) + 1):
            classes.insert(pos, [item])
            yield from rec(idx + 1, classes)
            classes.pop(pos)

    yield from rec(0, [])


@lru_cache(maxsize=None)
def _perm_group_cached(groups, k):
    perms = [tuple(range(k))]
    for g in groups:
        new = []
        for base in perms:
            for p in permutations(g):
                w = list(base)
                for a, b in zip(g, p):
                    w[a] = b
                new.append(tuple(w))
        perms = new
    return tuple(perms)


def _perm_group(groups, k):
    return _perm_group_cached(tuple(tuple(g) for g in groups), k)


def parse_order_pattern(expr: SetExpr, s: str, ctx: OrderContext | None = None
                        ) -> OrderPattern:
    """Parse a token string like "r1<b1=r2<b2" (indexed tokens) or the bare
    form "r<b=r<b" (occurrence order); constants are "#1", "#2", ..."""
    ctx = ctx or OrderContext()
    m = re.fullmatch(r"(.*?)@r=(\d+)(#c(\d+))?", s.strip())
    if m:
        body, level = m.group(1), int(m.group(2))
        comp = int(m.group(4)) if m.group(4) else 0
    else:
        body, level, comp = s.strip(), 0, 0
    letters = "rbgycmwk"
    slot_of = {}
    for fi, slots in enumerate(expr.factor_slots(comp)):
        for j, sl in enumerate(slots):
            slot_of[(letters[fi % len(letters)], j + 1)] = sl
    occurrence = Counter()
    classes = []
    if body and body != "()":
        for cls_text in body.split("<"):
            cls = []
            for tok in cls_text.split("="):
                tok = tok.strip()
                if tok.startswith("#"):
                    cls.append(-int(tok[1:]))
                    continue
                mt = re.fullmatch(r"([a-z])(\d*)", tok)
                if not mt:
                    raise ValueError(f"bad token {tok!r}")
                letter = mt.group(1)
                if mt.group(2):
                    j = int(mt.group(2))
                else:
                    occurrence[letter] += 1
                    j = occurrence[letter]
                cls.append(slot_of[(letter, j)])
            classes.append(tuple(sorted(cls)))
    return ctx.canonicalize(expr, OrderPattern(comp, level, tuple(classes)))


# ---------------------------------------------------------------------------
# Ruffles of colored words


def ruffle_product(w: str, v: str) -> Counter:
    """All order-preserving joint surjections of two words, injective on each
    word, with collisions only between equal letters; multiplicities count
    the surjections producing each word."""
    out: Counter = Counter()

    def rec(i, j, acc):
        if i == len(w) and j == len(v):
            out[acc] += 1
            return
        if i < len(w):
            rec(i + 1, j, acc + w[i])
        if j < len(v):
            rec(i, j + 1, acc + v[j])
        if i < len(w) and j < len(v) and w[i] == v[j]:
            rec(i + 1, j + 1, acc + w[i])

    rec(0, 0, "")
    return out


class Symbol:
    """A sign table over an alphabet, a candidate for a measure's values on
    interval powers.  Keys are (left type, right type, letter) with types in
    the alphabet extended by the two infinities."""

    LEFT_INF = "-inf"
    RIGHT_INF = "+inf"

    def __init__(self, alphabet: str, table: dict):
        self.alphabet = alphabet
        self.table = dict(table)
        for sigma in self.left_types():
            for tau in self.right_types():
                for rho in alphabet:
                    if (sigma, tau, rho) not in self.table:
                        raise ValueError(f"missing entry {(sigma, tau, rho)}")
                    if self.table[(sigma, tau, rho)] not in (-1, 0, 1):
                        raise ValueError("symbol entries must be -1, 0 or 1")

    def left_types(self):
        return [self.LEFT_INF] + list(self.alphabet)

    def right_types(self):
        return list(self.alphabet) + [self.RIGHT_INF]

    def value(self, sigma: str, tau: str, word: str) -> int:
        """Extension to all words: peel letters from the left."""
        if word == "":
            return 1
        head, rest = word[0], word[1:]
        return self.table[(sigma, tau, head)] * self.value(head, tau, rest)

    def __repr__(self):
        return f"Symbol({self.alphabet!r}, {self.table!r})"


def _words(alphabet: str, max_len: int):
    yield ""
    stack = [""]
    for _ in range(max_len):
        stack = [w + a for w in stack for a in alphabet]
        yield from stack


def verify_symbol(s: Symbol, max_len: int = 4):
    """Check the defining conditions for all words up to max_len.

    (a) empty word has value 1 (holds by construction of the extension);
    (b) splitting at an added point of each color;
    (c) multiplicativity over an internal letter.
    Returns (ok, witness) where witness names the first failing instance.
    """
    for sigma in s.left_types():
        for tau in s.right_types():
            if s.value(sigma, tau, "") != 1:
                return False, ("a", sigma, tau)
    for w in _words(s.alphabet, max_len):
        for sigma in s.left_types():
            for tau in s.right_types():
                lhs = s.value(sigma, tau, w)
                for rho in s.alphabet:
                    total = 0
                    for i in range(len(w) + 1):
                        total += (s.value(sigma, rho, w[:i])
                                  * s.value(rho, tau, w[i:]))
                    for i, wi in enumerate(w):
                        if wi == rho:
                            total += (s.value(sigma, rho, w[:i])
                                      * s.value(rho, tau, w[i + 1:]))
                    if lhs != total:
                        return False, ("b", sigma, tau, rho, w)
    for w in _words(s.alphabet, max_len):
        for i, rho in enumerate(w):
            left, right = w[:i], w[i + 1:]
            for sigma in s.left_types():
                for tau in s.right_types():
                    lhs = s.value(sigma, tau, w)
                    rhs = (s.table[(sigma, tau, rho)]
                           * s.value(sigma, rho, left)
                           * s.value(rho, tau, right))
                    if lhs != rhs:
                        return False, ("c", sigma, tau, rho, w)
    return True, None


def single_color_symbols(max_len: int = 4) -> list[Symbol]:
    """All valid symbols over a one-letter alphabet, by exhaustive search."""
    out = []
    keys = [(s, t, "a") for s in ["-inf", "a"] for t in ["a", "+inf"]]
    from itertools import product as iproduct
    for values in iproduct((-1, 0, 1), repeat=4):
        table = dict(zip(keys, values))
        sym = Symbol("a", table)
        ok, _ = verify_symbol(sym, max_len)
        if ok:
            out.append(sym)
    return out
