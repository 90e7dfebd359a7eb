"""Backend for the infinite symmetric group acting on {1, 2, ...}.

Orbits of the pointwise stabilizer of {1..N} on a declared set are described
by patterns: a partition of the coordinate slots into blocks (equal values),
with some blocks pinned to constants in {1..N} and the rest generic (pairwise
distinct, avoiding {1..N}).  The level N is the group of definition.
"""

from __future__ import annotations

import re
from functools import lru_cache
from itertools import permutations
from math import comb

from .scalar import Poly, falling_factorial
from .setexpr import SetExpr

# A pattern's blocks are a tuple of (slots, pin) with slots a sorted tuple of
# slot ids and pin either an int in 1..N or None (generic).
Blocks = tuple[tuple[tuple[int, ...], int | None], ...]


class SymPattern:
    """One stabilizer orbit on a component of a declared set, in canonical
    form (unique under Sub-factor slot symmetries and block ordering)."""

    __slots__ = ("comp", "level", "blocks")

    def __init__(self, comp: int, level: int, blocks: Blocks):
        self.comp = comp
        self.level = level
        self.blocks = blocks

    def __eq__(self, other):
        return (isinstance(other, SymPattern) and
                (self.comp, self.level, self.blocks)
                == (other.comp, other.level, other.blocks))

    def __hash__(self):
        return hash((self.comp, self.level, self.blocks))

    def __repr__(self):
        return f"SymPattern({self.to_text()!r})"

    def generic_count(self) -> int:
        return sum(1 for _, pin in self.blocks if pin is None)

    def to_text(self) -> str:
        parts = []
        for slots, pin in self.blocks:
            inner = ",".join(str(s + 1) for s in slots)
            if pin is not None:
                inner += f"|pin={pin}"
            parts.append("{%s}" % inner)
        tag = f"@N={self.level}"
        if self.comp:
            tag += f"#c{self.comp}"
        return "[" + ",".join(parts) + "]" + tag

    @staticmethod
    def from_text(s: str) -> "SymPattern":
        m = re.fullmatch(r"\[(.*)\]@N=(\d+)(#c(\d+))?", s.strip())
        if not m:
            raise ValueError(f"bad orbit text {s!r}")
        level = int(m.group(2))
        comp = int(m.group(4)) if m.group(4) else 0
        blocks = []
        body = m.group(1)
        for part in re.findall(r"\{([^{}]*)\}", body):
            pin = None
            if "|pin=" in part:
                part, pintext = part.split("|pin=")
                pin = int(pintext)
            slots = tuple(sorted(int(x) - 1 for x in part.split(",") if x))
            blocks.append((slots, pin))
        return SymPattern(comp, level, _sort_blocks(blocks))


def _block_key(b):
    slots, pin = b
    return (0, pin, slots) if pin is not None else (1, 0, slots)


def _blocks_key(blocks):
    return tuple(_block_key(b) for b in blocks)


def _sort_blocks(blocks) -> Blocks:
    # pinned blocks first by pin value, then generic blocks by least slot
    return tuple(sorted(((tuple(sorted(s)), p) for s, p in blocks),
                        key=_block_key))


class SymContext:
    """Orbit enumeration, measures and fiber projection for the symmetric
    group; measures take values in Q[t]."""

    name = "sym"

    def __repr__(self):
        return "SymContext()"

    def __eq__(self, other):
        return isinstance(other, SymContext)

    def __hash__(self):
        return hash("sym")

    # -- canonical form -------------------------------------------------

    def canonicalize(self, expr: SetExpr, pat: SymPattern) -> SymPattern:
        syms = expr.slot_symmetries(pat.comp)
        if len(syms) == 1:
            return SymPattern(pat.comp, pat.level, _sort_blocks(pat.blocks))
        best = None
        best_key = None
        for w in syms:
            moved = [(tuple(w[s] for s in slots), pin) for slots, pin in pat.blocks]
            cand = _sort_blocks(moved)
            key = _blocks_key(cand)
            if best is None or key < best_key:
                best, best_key = cand, key
        return SymPattern(pat.comp, pat.level, best)

    def stabilizer_order(self, expr: SetExpr, pat: SymPattern) -> int:
        """Number of Sub-factor slot symmetries fixing (partition, pins)."""
        syms = expr.slot_symmetries(pat.comp)
        if len(syms) == 1:
            return 1
        ref = frozenset((frozenset(s), p) for s, p in pat.blocks)
        count = 0
        for w in syms:
            moved = frozenset((frozenset(w[s] for s in slots), pin)
                              for slots, pin in pat.blocks)
            if moved == ref:
                count += 1
        return count

    # -- enumeration ----------------------------------------------------

    def orbits(self, expr: SetExpr, level: int) -> tuple[SymPattern, ...]:
        return self._orbits_cached(expr, level)

    @lru_cache(maxsize=None)
    def _orbits_cached(self, expr: SetExpr, level: int) -> tuple[SymPattern, ...]:
        out = []
        for c in range(expr.n_comps()):
            k = expr.slot_count(c)
            seps = expr.separated_groups(c)
            seen = set()
            for part in _partitions(k, seps):
                for pins in _pin_assignments(len(part), level):
                    blocks = _sort_blocks(
                        [(part[i], pins.get(i)) for i in range(len(part))])
                    pat = self.canonicalize(expr, SymPattern(c, level, blocks))
                    if pat.blocks not in seen:
                        seen.add(pat.blocks)
                        out.append(pat)
        out.sort(key=lambda p: (p.comp, _blocks_key(p.blocks)))
        return tuple(out)

    # -- measure ----------------------------------------------------------

    def measure(self, expr: SetExpr, pat: SymPattern) -> Poly:
        g = pat.generic_count()
        s = self.stabilizer_order(expr, pat)
        return falling_factorial(pat.level, g) / s

    def set_measure(self, expr: SetExpr, level: int = 0) -> Poly:
        total = Poly.zero()
        for pat in self.orbits(expr, level):
            total = total + self.measure(expr, pat)
        return total

    # -- fixed points -------------------------------------------------

    def fixed_points(self, expr: SetExpr, n: int) -> int:
        """Number of points fixed by the stabilizer of {1..n}, counted
        combinatorially (the independent oracle for interpolation)."""
        if n < 0:
            raise ValueError("n must be nonnegative")
        total = 0
        for comp in expr.comps:
            cnt = 1
            for kind, k in comp:
                if kind == "P":
                    cnt *= n ** k
                elif kind == "I":
                    f = 1
                    for i in range(k):
                        f *= (n - i)
                    cnt *= f  # contains a zero factor whenever k > n
                else:
                    cnt *= comb(n, k)
            total += cnt
        return total

    # -- level refinement ----------------------------------------------

    def refine(self, expr: SetExpr, pat: SymPattern, level2: int
               ) -> list[SymPattern]:
        """Decompose an orbit at a finer level; new pins live in
        {level+1..level2}."""
        if level2 < pat.level:
            raise ValueError("refinement level must not decrease")
        if level2 == pat.level:
            return [pat]
        new_pins = range(pat.level + 1, level2 + 1)
        gen_idx = [i for i, (_, pin) in enumerate(pat.blocks) if pin is None]
        out, seen = [], set()
        for assign in _partial_injections(gen_idx, list(new_pins)):
            blocks = [(slots, assign.get(i, pin))
                      for i, (slots, pin) in enumerate(pat.blocks)]
            q = self.canonicalize(expr, SymPattern(pat.comp, level2,
                                                   _sort_blocks(blocks)))
            if q.blocks not in seen:
                seen.add(q.blocks)
                out.append(q)
        return out

    # -- pushforward primitive -------------------------------------------

    def push_orbit(self, mapdata, pat: SymPattern):
        """Image orbit and fiber measure of one orbit under a structural map.

        Returns (image pattern, coefficient in Q[t]): the pushforward of the
        orbit's indicator is coefficient * indicator of the image.  By
        multiplicativity in fibrations the fiber measure is the quotient of
        the orbit measures, which the symmetry orders make exact:
        ff(N + g_det, g_free) * s_image / s_source.
        """
        src, tgt = mapdata.source, mapdata.target
        tcomp, assigns = mapdata.routes[pat.comp]
        level = pat.level

        block_of = {}
        for i, (slots, _) in enumerate(pat.blocks):
            for s in slots:
                block_of[s] = i

        # image pattern on target slots
        tgt_slot_src = []                      # source slot feeding each target slot
        for slots in assigns:
            tgt_slot_src.extend(slots)
        tgt_blocks: dict[int, list[int]] = {}
        for tslot, sslot in enumerate(tgt_slot_src):
            tgt_blocks.setdefault(block_of[sslot], []).append(tslot)
        determined = set(tgt_blocks)           # source blocks meeting the map
        img_blocks = []
        for i, tslots in tgt_blocks.items():
            img_blocks.append((tuple(sorted(tslots)), pat.blocks[i][1]))
        image = self.canonicalize(tgt, SymPattern(tcomp, level,
                                                  _sort_blocks(img_blocks)))

        g_det = sum(1 for i in determined if pat.blocks[i][1] is None)
        g_free = pat.generic_count() - g_det
        s_src = self.stabilizer_order(src, pat)
        s_img = self.stabilizer_order(tgt, image)
        coeff = (falling_factorial(level + g_det, g_free) * s_img) / s_src
        return image, coeff

    def image_orbit(self, mapdata, pat: SymPattern) -> SymPattern:
        """Image pattern only (no fiber measure); the pullback workhorse."""
        tgt = mapdata.target
        tcomp, assigns = mapdata.routes[pat.comp]
        block_of = {}
        for i, (slots, _) in enumerate(pat.blocks):
            for s in slots:
                block_of[s] = i
        tgt_blocks: dict[int, list[int]] = {}
        tslot = 0
        for slots in assigns:
            for sslot in slots:
                tgt_blocks.setdefault(block_of[sslot], []).append(tslot)
                tslot += 1
        img_blocks = [(tuple(sorted(ts)), pat.blocks[i][1])
                      for i, ts in tgt_blocks.items()]
        return self.canonicalize(tgt, SymPattern(tcomp, pat.level,
                                                 _sort_blocks(img_blocks)))

    # -- misc -------------------------------------------------------------

    def orbit_text(self, expr: SetExpr, pat: SymPattern) -> str:
        return pat.to_text()

    def parse_orbit(self, expr: SetExpr, s: str) -> SymPattern:
        pat = SymPattern.from_text(s)
        return self.canonicalize(expr, pat)

    def relabel_pins(self, expr: SetExpr, pat: SymPattern, sigma: dict[int, int]
                     ) -> SymPattern:
        """Apply a bijective relabeling of pin values (conjugation)."""
        blocks = [(slots, sigma[pin] if pin is not None else None)
                  for slots, pin in pat.blocks]
        return self.canonicalize(expr, SymPattern(pat.comp, pat.level,
                                                  _sort_blocks(blocks)))


@lru_cache(maxsize=None)
def _perm_group_cached(groups: tuple[tuple[int, ...], ...], k: int):
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


def _partitions(k: int, separated: list[tuple[int, ...]]):
    """All set partitions of slots 0..k-1 with each separated group's slots
    in pairwise distinct blocks, as tuples of sorted slot tuples."""
    sep_of = [set() for _ in range(k)]
    for g in separated:
        for s in g:
            sep_of[s] = set(g) - {s}
    out = []

    def rec(slot, blocks):
        if slot == k:
            out.append(tuple(tuple(b) for b in blocks))
            return
        for b in blocks:
            if not sep_of[slot] & set(b):
                b.append(slot)
                rec(slot + 1, blocks)
                b.pop()
        blocks.append([slot])
        rec(slot + 1, blocks)
        blocks.pop()

    rec(0, [])
    if k == 0:
        out.append(())
    return out


def _pin_assignments(n_blocks: int, level: int):
    """All injective partial maps {0..n_blocks-1} -> {1..level}."""
    return _partial_injections(list(range(n_blocks)), list(range(1, level + 1)))


def _partial_injections(keys: list[int], values: list[int]):
    from itertools import combinations
    out = [{}]
    for r in range(1, min(len(keys), len(values)) + 1):
        for which in combinations(keys, r):
            for perm in permutations(values, r):
                out.append(dict(zip(which, perm)))
    return out
