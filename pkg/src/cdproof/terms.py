"""Formulas of the implicational fragment and the term machinery around them.

A formula is either a variable or ``Imp(antecedent, consequent)``.  Variables
are interned, so two variables are equal exactly when they are the same
object; ``Imp`` nodes compare structurally with a cached hash.

Variable identities come in several disjoint kinds:

* ``Plain(name)``: variables written in proof files (``p``, ``q``, ``v12``).
* ``Y(pos)`` and ``X(index, pos)``: position-indexed variables used to
  rename axiom copies apart when computing most general theorems.
* ``K(index, pos)``: rigid constants.  They unify only with themselves and
  stand in for the ``n`` wildcard and for the skolemized variables of a goal.
* ``Fresh(serial)``: throwaway variables minted during proof search.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from itertools import count
from typing import Callable, Iterable, Iterator

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

Position = tuple[int, ...]
ROOT: Position = ()


@dataclass(frozen=True)
class Plain:
    name: str


@dataclass(frozen=True)
class Y:
    pos: Position


@dataclass(frozen=True)
class X:
    index: int
    pos: Position


@dataclass(frozen=True)
class K:
    index: int
    pos: Position


@dataclass(frozen=True)
class Fresh:
    serial: int


VarId = Plain | Y | X | K | Fresh


class ParseError(ValueError):
    """Malformed input text; ``offset`` is a byte offset into the input."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class NotUnifiable(Exception):
    pass


class TautologyLimitError(ValueError):
    pass


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return print_formula(self)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {print_formula(self)}>"


class Var(Formula):
    __slots__ = ("id", "rigid")
    _interned: dict[VarId, "Var"] = {}
    _serial = count(1)

    id: VarId
    rigid: bool

    def __new__(cls, id: VarId) -> "Var":
        v = cls._interned.get(id)
        if v is None:
            v = object.__new__(cls)
            v.id = id
            v.rigid = type(id) is K
            cls._interned[id] = v
        return v

    @classmethod
    def fresh(cls) -> "Var":
        # not interned: nobody else can ever name this variable
        v = object.__new__(cls)
        v.id = Fresh(next(cls._serial))
        v.rigid = False
        return v

    def __reduce__(self):
        return (Var, (self.id,))


class Imp(Formula):
    __slots__ = ("ant", "cons", "_hash")

    def __init__(self, ant: Formula, cons: Formula):
        self.ant = ant
        self.cons = cons
        self._hash = hash((ant, cons))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if type(other) is not Imp or self._hash != other._hash:
            return False
        return self.ant == other.ant and self.cons == other.cons

    @property
    def antecedent(self) -> Formula:
        return self.ant

    @property
    def consequent(self) -> Formula:
        return self.cons

    def __reduce__(self):
        return (Imp, (self.ant, self.cons))


Substitution = dict[Var, Formula]


def var(name: str) -> Var:
    return Var(Plain(name))


def yvar(pos: Position) -> Var:
    return Var(Y(tuple(pos)))


def xvar(index: int, pos: Position = ROOT) -> Var:
    return Var(X(index, tuple(pos)))


def const(index: int, pos: Position = ROOT) -> Var:
    return Var(K(index, tuple(pos)))


# ---------------------------------------------------------------- text format

_CANON_LETTERS = "pqrstu"


def _canon_name(i: int) -> str:
    return _CANON_LETTERS[i] if i < len(_CANON_LETTERS) else f"v{i + 1}"


def _byte_offset(text: str, i: int) -> int:
    return len(text[:i].encode("utf-8"))


def _formula_tokens(text: str) -> Iterator[tuple[int, str]]:
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c == "C":
            yield i, c
            i += 1
        elif c == "v" and i + 1 < n and text[i + 1].isdigit():
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            yield i, text[i:j]
            i = j
        elif "a" <= c <= "z":
            yield i, c
            i += 1
        else:
            raise ParseError(f"unexpected character {c!r}", _byte_offset(text, i))


def parse_formula(text: str) -> Formula:
    """Parse a formula in Polish C-notation, e.g. ``CpCqp``."""
    stack: list[list[Formula]] = []
    root: Formula | None = None
    for off, tok in _formula_tokens(text):
        if root is not None:
            raise ParseError("excess input", _byte_offset(text, off))
        if tok == "C":
            stack.append([])
            continue
        node: Formula = Var(Plain(tok))
        while True:
            if not stack:
                root = node
                break
            frame = stack[-1]
            frame.append(node)
            if len(frame) < 2:
                break
            stack.pop()
            node = Imp(frame[0], frame[1])
    if root is None:
        raise ParseError("truncated input", len(text.encode("utf-8")))
    return root


def _debug_name(v: Var) -> str:
    vid = v.id
    if type(vid) is Plain:
        return vid.name
    if type(vid) is Fresh:
        return f"_{vid.serial}"
    where = ".".join(map(str, vid.pos)) or "e"
    if type(vid) is Y:
        return f"y[{where}]"
    tag = "x" if type(vid) is X else "k"
    return f"{tag}{vid.index}[{where}]"


def print_formula(f: Formula, canonical: bool = False) -> str:
    """Polish C-notation.

    With ``canonical`` set, variables are renamed p, q, r, s, t, u, v7, v8, ...
    in order of first occurrence and constants k1, k2, ...; two formulas are
    variants exactly when their canonical texts coincide.  Without it, plain
    variables keep their names and position variables get debug names.
    """
    names: dict[Var, str] = {}
    nconst = 0
    out: list[str] = []
    stack = [f]
    while stack:
        t = stack.pop()
        if type(t) is Imp:
            out.append("C")
            stack.append(t.cons)
            stack.append(t.ant)
            continue
        name = names.get(t)
        if name is None:
            if t.rigid:
                nconst += 1
                name = f"k{nconst}"
            elif canonical:
                name = _canon_name(len(names) - nconst)
            else:
                name = _debug_name(t)
            names[t] = name
        out.append(name)
    return "".join(out)


def canonical_text(f: Formula) -> str:
    return print_formula(f, canonical=True)


# ------------------------------------------------------------- substitutions

def variables(f: Formula) -> list[Var]:
    """Variables (and constants) of ``f`` in first-occurrence order."""
    seen: dict[Var, None] = {}
    stack = [f]
    while stack:
        t = stack.pop()
        if type(t) is Imp:
            stack.append(t.cons)
            stack.append(t.ant)
        else:
            seen.setdefault(t)
    return list(seen)


def apply(s: Substitution, f: Formula) -> Formula:
    """Simultaneous replacement of the variables bound by ``s``."""
    if not s:
        return f
    return _mapper(s.get)(f)


def _mapper(lookup: Callable[[Var], Formula | None]) -> Callable[[Formula], Formula]:
    memo: dict[int, Formula] = {}

    def go(t: Formula) -> Formula:
        if type(t) is Var:
            r = lookup(t)
            return t if r is None else r
        key = id(t)
        r = memo.get(key)
        if r is None:
            a = go(t.ant)
            c = go(t.cons)
            r = t if (a is t.ant and c is t.cons) else Imp(a, c)
            memo[key] = r
        return r

    return go


def shift(p: Position, f: Formula) -> Formula:
    """Prefix the positions of all position-indexed variables with ``p``."""
    p = tuple(p)
    if not p:
        for v in variables(f):
            if type(v.id) in (Plain, Fresh):
                raise ValueError(f"cannot shift variable {_debug_name(v)}")
        return f
    cache: dict[Var, Var] = {}

    def lookup(v: Var) -> Var:
        r = cache.get(v)
        if r is None:
            vid = v.id
            kind = type(vid)
            if kind is Y:
                r = Var(Y(p + vid.pos))
            elif kind is X:
                r = Var(X(vid.index, p + vid.pos))
            elif kind is K:
                r = Var(K(vid.index, p + vid.pos))
            else:
                raise ValueError(f"cannot shift variable {_debug_name(v)}")
            cache[v] = r
        return r

    return _mapper(lookup)(f)


def canonical(f: Formula) -> tuple[Formula, int]:
    """Rename to x1, x2, ... (and constants to k1, k2, ...) at the root position.

    Returns the renamed formula and its number of non-rigid variables.
    """
    ren: dict[Var, Var] = {}
    nv = nk = 0
    for v in variables(f):
        if v.rigid:
            nk += 1
            ren[v] = Var(K(nk, ROOT))
        else:
            nv += 1
            ren[v] = Var(X(nv, ROOT))
    if all(a is b for a, b in ren.items()):
        return f, nv
    return _mapper(ren.get)(f), nv


def rename_fresh(f: Formula) -> Formula:
    """Copy of ``f`` with every non-rigid variable replaced by a fresh one."""
    ren: dict[Var, Var] = {}

    def lookup(v: Var) -> Var:
        if v.rigid:
            return v
        r = ren.get(v)
        if r is None:
            r = ren[v] = Var.fresh()
        return r

    return _mapper(lookup)(f)


# ---------------------------------------------------------------- unification

def walk(t: Formula, b: Substitution) -> Formula:
    while type(t) is Var:
        u = b.get(t)
        if u is None:
            return t
        t = u
    return t


def _occurs(v: Var, t: Formula, b: Substitution) -> bool:
    stack = [t]
    seen: set[Var] = set()
    while stack:
        t = stack.pop()
        if type(t) is Imp:
            stack.append(t.ant)
            stack.append(t.cons)
        elif t is v:
            return True
        elif t not in seen:
            seen.add(t)
            u = b.get(t)
            if u is not None:
                stack.append(u)
    return False


def solve(pairs: Iterable[tuple[Formula, Formula]], b: Substitution) -> bool:
    """Extend the triangular substitution ``b`` to unify ``pairs``.

    Works in place; on failure ``b`` may hold partial bindings.
    """
    for s0, t0 in pairs:
        stack = [(s0, t0)]
        while stack:
            s, t = stack.pop()
            while type(s) is Var:
                u = b.get(s)
                if u is None:
                    break
                s = u
            while type(t) is Var:
                u = b.get(t)
                if u is None:
                    break
                t = u
            if s is t:
                continue
            if type(s) is Var and not s.rigid:
                if type(t) is Imp and _occurs(s, t, b):
                    return False
                b[s] = t
            elif type(t) is Var and not t.rigid:
                if type(s) is Imp and _occurs(t, s, b):
                    return False
                b[t] = s
            elif type(s) is Imp and type(t) is Imp:
                stack.append((s.cons, t.cons))
                stack.append((s.ant, t.ant))
            else:
                return False
    return True


def resolver(b: Substitution) -> Callable[[Formula], Formula]:
    """Full application of a triangular substitution, sharing common parts."""
    memo: dict[Var, Formula] = {}

    def lookup(v: Var) -> Formula | None:
        r = memo.get(v)
        if r is None:
            u = b.get(v)
            if u is None:
                return None
            r = memo[v] = go(u)
        return r

    go = _mapper(lookup)
    return go


def unify(pairs: Iterable[tuple[Formula, Formula]]) -> Substitution:
    """Clean most general unifier of ``pairs``; raises NotUnifiable."""
    b: Substitution = {}
    if not solve(pairs, b):
        raise NotUnifiable
    res = resolver(b)
    return {v: res(v) for v in b}


def match(pattern: Formula, target: Formula) -> Substitution | None:
    """One-way matching: a substitution θ with pattern θ = target, or None."""
    theta: Substitution = {}
    stack = [(pattern, target)]
    while stack:
        p, s = stack.pop()
        if type(p) is Imp:
            if type(s) is not Imp:
                return None
            stack.append((p.cons, s.cons))
            stack.append((p.ant, s.ant))
        elif p.rigid:
            if p is not s:
                return None
        else:
            bound = theta.get(p)
            if bound is None:
                theta[p] = s
            elif bound is not s and bound != s:
                return None
    return {v: t for v, t in theta.items() if v is not t}


def subsumed_by(s: Formula, t: Formula) -> bool:
    """True iff ``t`` subsumes ``s``: some σ has tσ = s."""
    return match(t, s) is not None


def is_variant(s: Formula, t: Formula) -> bool:
    return s is t or canonical_text(s) == canonical_text(t)


# ------------------------------------------------------------------- measures

@dataclass(frozen=True)
class TermStats:
    tree_size: int
    c_size: int
    height: int
    var_count: int


def term_stats(f: Formula) -> TermStats:
    size: dict[int, int] = {}
    height: dict[int, int] = {}
    compounds: set[Formula] = set()
    vars_: set[Var] = set()
    # post-order over the DAG of Python objects
    stack: list[tuple[Formula, bool]] = [(f, False)]
    while stack:
        t, done = stack.pop()
        if type(t) is Var:
            vars_.add(t)
            continue
        key = id(t)
        if key in size:
            continue
        if not done:
            stack.append((t, True))
            stack.append((t.cons, False))
            stack.append((t.ant, False))
            continue
        a, c = t.ant, t.cons
        size[key] = 1 + size.get(id(a), 0) + size.get(id(c), 0)
        height[key] = 1 + max(height.get(id(a), 0), height.get(id(c), 0))
        compounds.add(t)
    return TermStats(size.get(id(f), 0), len(compounds), height.get(id(f), 0), len(vars_))


def tree_size(f: Formula) -> int:
    return term_stats(f).tree_size


def height(f: Formula) -> int:
    return term_stats(f).height


# -------------------------------------------------------- classical semantics

TAUTOLOGY_VAR_LIMIT = 16


def _truth_values(f: Formula, limit: int) -> tuple[dict[int, int], int]:
    """Truth-table bitmask of every subterm, keyed by object id."""
    vs = variables(f)
    n = len(vs)
    if n > limit:
        raise TautologyLimitError(f"{n} variables exceed the limit of {limit}")
    rows = 1 << n
    full = (1 << rows) - 1
    value: dict[int, int] = {}
    for i, v in enumerate(vs):
        half = 1 << i
        block = ((1 << half) - 1) << half
        rep = full // ((1 << (2 * half)) - 1)
        value[id(v)] = rep * block
    stack: list[tuple[Formula, bool]] = [(f, False)]
    while stack:
        t, done = stack.pop()
        key = id(t)
        if key in value:
            continue
        if not done:
            stack.append((t, True))
            stack.append((t.cons, False))
            stack.append((t.ant, False))
            continue
        value[key] = (full ^ value[id(t.ant)]) | value[id(t.cons)]
    return value, full


def is_tautology(f: Formula, limit: int = TAUTOLOGY_VAR_LIMIT) -> bool:
    value, full = _truth_values(f, limit)
    return value[id(f)] == full


@dataclass(frozen=True)
class Organicity:
    organic: bool
    weakly_organic: bool


def _strict_subterms(f: Formula) -> list[Formula]:
    out: list[Formula] = []
    if type(f) is Imp:
        stack = [f.ant, f.cons]
        while stack:
            t = stack.pop()
            out.append(t)
            if type(t) is Imp:
                stack.append(t.ant)
                stack.append(t.cons)
    return out


def is_organic(f: Formula, limit: int = TAUTOLOGY_VAR_LIMIT) -> bool:
    value, full = _truth_values(f, limit)
    return all(value[id(s)] != full for s in _strict_subterms(f))


def organicity(f: Formula, limit: int = TAUTOLOGY_VAR_LIMIT) -> Organicity:
    if is_organic(f, limit):
        return Organicity(True, False)
    weak = (
        type(f) is Imp
        and type(f.ant) is Var
        and not f.ant.rigid
        and f.ant not in variables(f.cons)
        and is_organic(f.cons, limit)
    )
    return Organicity(False, weak)


def imp(*parts: Formula) -> Formula:
    """Right-nested implication: imp(a, b, c) = Imp(a, Imp(b, c))."""
    if not parts:
        raise ValueError("imp needs at least one argument")
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Imp(p, out)
    return out
