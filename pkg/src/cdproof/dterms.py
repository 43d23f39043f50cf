"""D-terms: full binary proof trees over primitive symbols.

Nodes are hash-consed.  ``D(a, b)`` returns the same object for the same
children, so subterm sets, compaction and the compaction orderings are plain
set operations over node identities.  Leaves are ``Prim(i)`` for an axiom
label ``i`` or ``Prim(N)`` for the wildcard ``n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .terms import Formula, Position

N = "n"
PrimSym = int | str


class DTerm:
    __slots__ = ()
    t_size: int
    height: int
    dk_left: int
    dk_right: int

    def __str__(self) -> str:
        return format_dterm(self)

    def __repr__(self) -> str:
        return f"<DTerm {format_dterm(self)}>"

    @property
    def is_prim(self) -> bool:
        return type(self) is Prim


class Prim(DTerm):
    __slots__ = ("sym",)
    _table: dict[PrimSym, "Prim"] = {}
    t_size = height = dk_left = dk_right = left_run = right_run = 0

    def __new__(cls, sym: PrimSym) -> "Prim":
        node = cls._table.get(sym)
        if node is None:
            if sym != N and not (isinstance(sym, int) and sym > 0):
                raise ValueError(f"bad primitive symbol {sym!r}")
            node = object.__new__(cls)
            node.sym = sym
            node = cls._table.setdefault(sym, node)
        return node

    def __reduce__(self):
        return (Prim, (self.sym,))


class D(DTerm):
    __slots__ = (
        "major", "minor", "t_size", "height",
        "left_run", "right_run", "dk_left", "dk_right", "_compounds",
    )
    _table: dict[tuple[DTerm, DTerm], "D"] = {}

    def __new__(cls, major: DTerm, minor: DTerm) -> "D":
        key = (major, minor)
        node = cls._table.get(key)
        if node is None:
            node = object.__new__(cls)
            node.major = major
            node.minor = minor
            node.t_size = 1 + major.t_size + minor.t_size
            node.height = 1 + max(major.height, minor.height)
            node.left_run = 1 + major.left_run
            node.right_run = 1 + minor.right_run
            node.dk_left = max(node.left_run, major.dk_left, minor.dk_left)
            node.dk_right = max(node.right_run, major.dk_right, minor.dk_right)
            node._compounds = None
            node = cls._table.setdefault(key, node)
        return node

    def __reduce__(self):
        return (D, (self.major, self.minor))


ONE = Prim(1)
NPRIM = Prim(N)


# ---------------------------------------------------------------- text format

class DTermParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


def _build(tokens: Iterable[DTerm | None]) -> DTerm | None:
    """Assemble Polish tokens (None stands for ``D``); None on underflow."""
    stack: list[list[DTerm]] = []
    for tok in tokens:
        if tok is None:
            stack.append([])
            continue
        node = tok
        while stack:
            frame = stack[-1]
            frame.append(node)
            if len(frame) < 2:
                break
            stack.pop()
            node = D(frame[0], frame[1])
        else:
            return node
    return None


def parse_dterm(text: str) -> DTerm:
    """Parse ``D``/``n``/number notation such as ``DD13.D16.16.13``.

    A dot ends a number.  An undotted run of digits stands for single-digit
    numbers, except at the very end where a run is one number when exactly
    one operand is still missing (``D5.11``) and single digits when the run
    length equals the missing operands (``D33``).
    """
    text = text.strip()
    tokens: list[DTerm | None] = []
    need = 1
    i, n = 0, len(text)
    while i < n:
        if need == 0:
            raise DTermParseError("excess input", i)
        c = text[i]
        if c.isspace():
            i += 1
        elif c == "D":
            tokens.append(None)
            need += 1
            i += 1
        elif c == "n":
            tokens.append(NPRIM)
            need -= 1
            i += 1
        elif c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            run = text[i:j]
            if j < n and text[j] == ".":
                nums = [int(run)]
                j += 1
            elif j < n:
                nums = [int(ch) for ch in run]
            elif need == 1:
                nums = [int(run)]
            elif need == len(run):
                nums = [int(ch) for ch in run]
            else:
                raise DTermParseError(f"ambiguous number run {run!r}", i)
            for k in nums:
                if k == 0:
                    raise DTermParseError("step labels are positive", i)
                if need == 0:
                    raise DTermParseError("excess input", i)
                tokens.append(Prim(k))
                need -= 1
            i = j
        else:
            raise DTermParseError(f"unexpected character {c!r}", i)
    if need != 0:
        raise DTermParseError("truncated input", n)
    result = _build(tokens)
    assert result is not None
    return result


def _polish(d: DTerm) -> list[PrimSym | None]:
    out: list[PrimSym | None] = []
    stack = [d]
    while stack:
        t = stack.pop()
        if type(t) is D:
            out.append(None)
            stack.append(t.minor)
            stack.append(t.major)
        else:
            out.append(t.sym)
    return out


def format_dterm(d: DTerm) -> str:
    toks = _polish(d)
    out: list[str] = []
    for k, tok in enumerate(toks):
        if tok is None:
            out.append("D")
            continue
        s = str(tok)
        out.append(s)
        if isinstance(tok, int) and k + 1 < len(toks):
            nxt = toks[k + 1]
            if len(s) > 1 or (isinstance(nxt, int) and nxt > 9):
                out.append(".")
    return "".join(out)


# ------------------------------------------------------------------- measures

def t_size(d: DTerm) -> int:
    return d.t_size


def compounds(d: DTerm) -> frozenset[D]:
    """Distinct compound subterms of ``d`` (including ``d`` itself)."""
    if type(d) is Prim:
        return frozenset()
    if d._compounds is not None:
        return d._compounds
    # iterative post-order so very deep terms do not hit the recursion limit
    stack = [d]
    while stack:
        t = stack[-1]
        pending = [c for c in (t.major, t.minor) if type(c) is D and c._compounds is None]
        if pending:
            stack.extend(pending)
            continue
        stack.pop()
        if t._compounds is None:
            t._compounds = compounds(t.major) | compounds(t.minor) | {t}
    return d._compounds


def strict_compounds(d: DTerm) -> frozenset[D]:
    if type(d) is Prim:
        return frozenset()
    return compounds(d.major) | compounds(d.minor)


def c_size(d: DTerm | Iterable[DTerm]) -> int:
    if isinstance(d, DTerm):
        return len(compounds(d))
    acc: set[D] = set()
    for t in d:
        acc |= compounds(t)
    return len(acc)


def subterms(d: DTerm) -> list[DTerm]:
    """Distinct subterms in post-order, major before minor."""
    return dag_order([d])


def dag_order(roots: Sequence[DTerm]) -> list[DTerm]:
    """Distinct subterms of ``roots`` in post-order, each listed once."""
    seen: set[DTerm] = set()
    out: list[DTerm] = []
    for root in roots:
        stack: list[tuple[DTerm, bool]] = [(root, False)]
        while stack:
            t, done = stack.pop()
            if t in seen:
                continue
            if done or type(t) is Prim:
                seen.add(t)
                out.append(t)
                continue
            stack.append((t, True))
            stack.append((t.minor, False))
            stack.append((t.major, False))
    return out


def prims(d: DTerm) -> set[Prim]:
    return {t for t in subterms(d) if type(t) is Prim}


def sc_size(d: DTerm) -> int:
    return sum(len(compounds(t)) for t in subterms(d))


@dataclass(frozen=True)
class ShapeStats:
    height: int
    dk_left: int
    dk_right: int
    is_prime: bool


def is_prime(d: DTerm) -> bool:
    return c_size(d) == d.t_size


def shape_stats(d: DTerm) -> ShapeStats:
    return ShapeStats(d.height, d.dk_left, d.dk_right, is_prime(d))


# ---------------------------------------------------------------- positions

def positions(d: DTerm) -> Iterator[tuple[Position, DTerm]]:
    """All positions with their subterms, in pre-order (major first)."""
    stack: list[tuple[Position, DTerm]] = [((), d)]
    while stack:
        p, t = stack.pop()
        yield p, t
        if type(t) is D:
            stack.append((p + (2,), t.minor))
            stack.append((p + (1,), t.major))


def subterm_at(d: DTerm, p: Position) -> DTerm:
    for k in p:
        if type(d) is not D or k not in (1, 2):
            raise IndexError(f"no position {p}")
        d = d.major if k == 1 else d.minor
    return d


def occurrences(d: DTerm, e: DTerm) -> list[Position]:
    return [p for p, t in positions(d) if t is e]


# ------------------------------------------------------- compaction orderings

def geq_c(d: DTerm, e: DTerm) -> bool:
    return strict_compounds(d) >= strict_compounds(e)


def gt_c(d: DTerm, e: DTerm) -> bool:
    a, b = strict_compounds(d), strict_compounds(e)
    return a > b


def replace_all(d: DTerm, e: DTerm, e2: DTerm) -> DTerm:
    """Replace every occurrence of ``e`` in ``d`` by ``e2`` simultaneously."""
    memo: dict[DTerm, DTerm] = {e: e2}
    for t in subterms(d):
        if t in memo:
            continue
        if type(t) is Prim:
            memo[t] = t
        else:
            a, b = memo[t.major], memo[t.minor]
            memo[t] = t if (a is t.major and b is t.minor) else D(a, b)
    return memo[d]


def replace_at(d: DTerm, p: Position, e2: DTerm) -> DTerm:
    path = []
    t = d
    for k in p:
        if type(t) is not D or k not in (1, 2):
            raise IndexError(f"no position {p}")
        path.append((t, k))
        t = t.major if k == 1 else t.minor
    out = e2
    for node, k in reversed(path):
        out = D(out, node.minor) if k == 1 else D(node.major, out)
    return out


def enumerate_c_smaller(d: DTerm) -> set[DTerm]:
    """Every e with geq_c(d, e) and Prim(e) ⊆ Prim(d)."""
    if type(d) is Prim:
        return {d}
    strict = [t for t in subterms(d) if t is not d]
    out: set[DTerm] = {t for t in strict if type(t) is Prim}
    for a in strict:
        for b in strict:
            out.add(D(a, b))
    return out


# ---------------------------------------------------------------- enumeration

ENUM_LIMITS = {"all-tree": 13, "all-compacted": 6, "prime": 26}


class EnumerationLimit(ValueError):
    pass


def _check_limit(key: str, size: int) -> None:
    if size < 0 or size > ENUM_LIMITS[key]:
        raise EnumerationLimit(f"size {size} outside 0..{ENUM_LIMITS[key]} for {key}")


def prime_terms(size: int, leaf: DTerm = ONE) -> Iterator[DTerm]:
    """Prime D-terms of exactly ``size`` over a single primitive.

    Size n > 0 lists D(e, 1) for every prime e of size n-1, then D(1, e)
    for the compound ones; there are 2^(n-1) of them.
    """
    _check_limit("prime", size)
    level: list[DTerm] = [leaf]
    for n in range(1, size + 1):
        nxt = [D(e, leaf) for e in level]
        if n > 1:
            nxt.extend(D(leaf, e) for e in level)
        level = nxt
    return iter(level)


def all_terms_by_tree_size(size: int, leaf: DTerm = ONE) -> Iterator[DTerm]:
    _check_limit("all-tree", size)
    levels: list[list[DTerm]] = [[leaf]]
    for n in range(1, size + 1):
        levels.append([
            D(a, b)
            for i in range(n)
            for a in levels[i]
            for b in levels[n - 1 - i]
        ])
    return iter(levels[size])


def all_terms_by_c_size(size: int, leaf: DTerm = ONE) -> Iterator[DTerm]:
    _check_limit("all-compacted", size)
    for k, level in enumerate(_c_levels(size, leaf)):
        if k == size:
            return iter(level)
    return iter(())


def _c_levels(size: int, leaf: DTerm) -> Iterator[list[DTerm]]:
    """Levels of D-terms with c_size exactly 0, 1, ..., size."""
    pool: list[DTerm] = [leaf]
    yield [leaf]
    for k in range(1, size + 1):
        level = [
            D(a, b)
            for a in pool
            for b in pool
            if len(compounds(a) | compounds(b)) == k - 1
        ]
        yield level
        pool = pool + level


def enumerate_dterms(kind: str, size: int, measure: str = "tree") -> Iterator[DTerm]:
    """Exhaustive duplicate-free stream of D-terms over the primitive 1."""
    if kind == "prime":
        return prime_terms(size)
    if kind == "all" and measure == "tree":
        return all_terms_by_tree_size(size)
    if kind == "all" and measure == "compacted":
        return all_terms_by_c_size(size)
    raise ValueError(f"unknown enumeration {kind}/{measure}")


# ------------------------------------------------------------ compact proofs

@dataclass(frozen=True)
class Step:
    index: int
    formula: Formula | None
    body: DTerm | None = None
    goal: bool = False

    @property
    def is_axiom(self) -> bool:
        return self.body is None


class ProofStructureError(ValueError):
    pass


@dataclass
class CompactProof:
    """Indexed steps in Meredith's tabular form.

    Axiom steps have no body.  A derived step's body is a D-term whose
    numeric leaves refer to earlier steps (axioms or derived) and which may
    contain ``n``.
    """

    steps: list[Step]
    _expanded: dict[int, DTerm] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        seen: set[int] = set()
        last = 0
        for s in self.steps:
            if s.index <= last:
                raise ProofStructureError(f"step {s.index}: indices must increase")
            if s.body is not None:
                for t in subterms(s.body):
                    if type(t) is Prim and t.sym != N and t.sym not in seen:
                        raise ProofStructureError(
                            f"step {s.index}: reference to {t.sym} is not an earlier step"
                        )
            seen.add(s.index)
            last = s.index
        if not any(s.is_axiom for s in self.steps):
            raise ProofStructureError("a proof needs at least one axiom step")
        self._by_index = {s.index: s for s in self.steps}

    def step(self, index: int) -> Step:
        try:
            return self._by_index[index]
        except KeyError:
            raise KeyError(f"no step {index}") from None

    @property
    def axiom_steps(self) -> list[Step]:
        return [s for s in self.steps if s.is_axiom]

    @property
    def derived_steps(self) -> list[Step]:
        return [s for s in self.steps if not s.is_axiom]

    @property
    def goals(self) -> list[Step]:
        marked = [s for s in self.steps if s.goal]
        return marked or self.steps[-1:]

    def expand(self, index: int) -> DTerm:
        return expand(self, index)

    def roots(self) -> list[DTerm]:
        return [expand(self, s.index) for s in self.goals]


def expand(p: CompactProof, index: int) -> DTerm:
    """Unfold step ``index`` into a D-term over the axiom step labels."""
    cache = p._expanded
    hit = cache.get(index)
    if hit is not None:
        return hit
    step = p.step(index)
    if step.is_axiom:
        out: DTerm = Prim(index)
    else:
        memo: dict[DTerm, DTerm] = {}
        for t in subterms(step.body):
            if type(t) is Prim:
                memo[t] = t if t.sym == N else expand(p, t.sym)
            else:
                memo[t] = D(memo[t.major], memo[t.minor])
        out = memo[step.body]
    cache[index] = out
    return out


def compact(roots: Sequence[DTerm], formulas: dict[DTerm, Formula] | None = None) -> CompactProof:
    """Maximally factored tabular proof of ``roots``.

    Primitives become axiom steps numbered 1..k in symbol order, then one
    derived step per distinct compound subterm in post-order.  ``formulas``
    optionally supplies the stated formula of each node.
    """
    formulas = formulas or {}
    order = dag_order(roots)
    leaves = sorted({t.sym for t in order if type(t) is Prim and t.sym != N})
    label: dict[DTerm, DTerm] = {NPRIM: NPRIM}
    steps: list[Step] = []
    root_set = set(roots)
    for k, sym in enumerate(leaves, 1):
        node = Prim(sym)
        label[node] = Prim(k)
        steps.append(Step(k, formulas.get(node), None, node in root_set))
    index = len(leaves)
    for t in order:
        if type(t) is Prim:
            continue
        index += 1
        steps.append(Step(index, formulas.get(t), D(label[t.major], label[t.minor]), t in root_set))
        label[t] = Prim(index)
    return CompactProof(steps)
