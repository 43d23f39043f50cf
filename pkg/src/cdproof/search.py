"""Goal-directed proof search by iterative deepening on tree size.

A subgoal is closed by a primitive (axiom or lemma) whose formula unifies
with it, or split by detachment into a major subgoal ``Imp(x, goal)`` and
a minor subgoal ``x`` for a fresh ``x``.  The major subgoal is solved
first.  Each round looks for proofs of exactly one tree size, so the first
proof found has minimal tree size over the given primitives.

Goal variables are replaced by rigid constants, so a proof of the
instantiated goal proves the goal itself or something more general.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .dterms import D, DTerm, Prim, replace_all, subterms
from .lemmas import Lemma
from .proof_calc import AxiomAssignment, mgt, simp_n
from .reduction import is_c_regular, reduce_to_regular
from .terms import (
    Formula, Imp, Substitution, Var, canonical_text, const, rename_fresh, resolver,
    _occurs, solve, subsumed_by, variables, walk,
)

_SKOLEM_BASE = 1000


@dataclass
class SearchConfig:
    max_tree_size: int
    max_height: int | None = None
    max_dkl: int | None = None
    lemmas: Sequence[Lemma] = field(default_factory=list)
    regularity_pruning: bool = False

    def __post_init__(self) -> None:
        if self.max_tree_size < 1:
            raise ValueError("max_tree_size must be at least 1")


def lemma_symbols(alpha: AxiomAssignment, count: int) -> list[int]:
    """Primitive symbols for lemmas, numbered after the largest axiom label."""
    start = max((s for s in alpha if isinstance(s, int)), default=0) + 1
    return list(range(start, start + count))


class _Prover:
    def __init__(self, alpha: AxiomAssignment, cfg: SearchConfig):
        self.cfg = cfg
        syms = lemma_symbols(alpha, len(cfg.lemmas))
        self.lemma_of = dict(zip(syms, cfg.lemmas))
        self.alpha = alpha.extended({s: l.formula for s, l in self.lemma_of.items()})
        self.facts = [(Prim(s), self.alpha[s]) for s in sorted(self.alpha, key=str)]
        self.b: Substitution = {}
        self.failed: set[tuple] = set()
        self.pending: list[Formula] = []

    def _undo(self, mark: int) -> None:
        b = self.b
        while len(b) > mark:
            b.popitem()

    def _dont_care(self, g: Formula) -> bool:
        """True if ``g`` is an unbound variable that no pending goal mentions."""
        g = walk(g, self.b)
        if type(g) is not Var or g.rigid:
            return False
        return not any(_occurs(g, p, self.b) for p in self.pending)

    def _while_pending(self, goal: Formula, it: Iterator[DTerm]) -> Iterator[DTerm]:
        self.pending.append(goal)
        active = True
        try:
            for item in it:
                self.pending.pop()
                active = False
                yield item
                self.pending.append(goal)
                active = True
        finally:
            if active:
                self.pending.pop()

    def _key(self, g: Formula, n: int, h: int | None, k: int | None) -> tuple:
        return (canonical_text(resolver(self.b)(g)), n, h, k)

    def solve(self, g: Formula, n: int, h: int | None, k: int | None) -> Iterator[DTerm]:
        """Proofs of ``g`` with tree size exactly ``n``.

        ``h`` bounds the height, ``k`` the current run of major edges; None
        means unbounded.  Bindings made for a yielded proof stay in place
        until the generator is resumed.
        """
        if n > 0 and ((h is not None and h < 1) or (k is not None and k < 1)):
            return
        key = self._key(g, n, h, k)
        if key in self.failed:
            return
        if self._dont_care(g):
            # any single proof will do, alternatives only repeat the search
            mark = len(self.b)
            for d in self._solve(g, n, h, k):
                yield d
                break
            else:
                self.failed.add(key)
            self._undo(mark)
            return
        found = False
        for d in self._solve(g, n, h, k):
            found = True
            yield d
        if not found:
            self.failed.add(key)

    def _solve(self, g: Formula, n: int, h: int | None, k: int | None) -> Iterator[DTerm]:
        mark = len(self.b)
        if n == 0:
            for prim, f in self.facts:
                if not _compatible(g, f, self.b, 4):
                    continue
                if solve([(g, rename_fresh(f))], self.b):
                    yield prim
                self._undo(mark)
        else:
            x = Var.fresh()
            major_goal = Imp(x, g)
            h1 = None if h is None else h - 1
            k1 = None if k is None else k - 1
            for i in range(n):
                majors = self._while_pending(x, self.solve(major_goal, i, h1, k1))
                for maj in majors:
                    for mnr in self.solve(x, n - 1 - i, h1, self.cfg.max_dkl):
                        t = D(maj, mnr)
                        if self.cfg.regularity_pruning and not is_c_regular(t, self.alpha):
                            continue
                        yield t
            self._undo(mark)


def _compatible(g: Formula, f: Formula, b: Substitution, depth: int) -> bool:
    """Cheap necessary condition for ``g`` to unify with a renamed copy of ``f``."""
    if type(f) is Var:
        return True
    g = walk(g, b)
    if type(g) is Var:
        return not g.rigid
    if depth == 0:
        return True
    return _compatible(g.ant, f.ant, b, depth - 1) and _compatible(g.cons, f.cons, b, depth - 1)


def _skolemize(goal: Formula) -> Formula:
    b = {v: const(_SKOLEM_BASE + i) for i, v in enumerate(variables(goal))}
    return resolver(b)(goal)


def prove(goal: Formula, alpha: AxiomAssignment, cfg: SearchConfig) -> DTerm | None:
    """A minimal tree-size D-term whose MGT subsumes ``goal``, or None.

    The result may use lemma primitives; ``expand_lemmas`` turns it into a
    proof from the axioms.
    """
    p = _Prover(alpha, cfg)
    target = _skolemize(goal)
    for n in range(cfg.max_tree_size + 1):
        for d in p.solve(target, n, cfg.max_height, cfg.max_dkl):
            m = mgt(d, p.alpha)
            assert m is not None and subsumed_by(goal, m)
            return d
    return None


def expand_lemmas(d: DTerm, lemmas: Sequence[Lemma], alpha: AxiomAssignment,
                  simplify: bool = False, regularize: bool = False) -> DTerm:
    """Replace lemma primitives by their witnesses.

    Lemma symbols are numbered as in ``prove``.  ``simplify`` applies
    n-simplification and ``regularize`` C-reduction to the result.
    """
    table = dict(zip(lemma_symbols(alpha, len(lemmas)), lemmas))
    for t in subterms(d):
        if type(t) is Prim and t.sym not in alpha and t.sym != "n" and t.sym not in table:
            raise KeyError(f"unknown primitive {t.sym!r}")
    out = d
    for sym, lemma in table.items():
        out = replace_all(out, Prim(sym), lemma.witness)
    if simplify:
        out = simp_n(out, alpha)
    if regularize:
        out = reduce_to_regular(out, alpha)
    return out
