"""What a D-term proves: pairings, in-place theorems, most general theorems.

Two routes compute the most general theorem (MGT) of a D-term:

* ``mgt_by_pairings`` follows the definition.  Every position ``p`` gets a
  variable ``y_p``; leaves are paired with a copy of their axiom shifted to
  ``p``, inner nodes with ``y_{p.1} = Imp(y_{p.2}, y_p)``.  The MGT is the
  image of ``y_ε`` under the most general unifier of all pairings, and the
  in-place theorem (IPT) at ``p`` is the image of ``y_p``.
* ``mgt`` is the memoized compositional route: the MGT of ``D(a, b)`` is
  the condensed detachment of the MGTs of ``a`` and ``b``.  It is much
  faster on shared subterms and is what the rest of the package uses.

Both agree up to variants; the test suite checks this on random terms.
The wildcard ``n`` is treated as a fresh constant per occurrence.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Iterator

from .dterms import (
    D, DTerm, N, NPRIM, CompactProof, Prim, PrimSym, c_size, expand, positions,
    subterms,
)
from .terms import (
    ROOT, Formula, Imp, Position, Substitution, canonical, canonical_text,
    const, is_variant, resolver, shift, solve, yvar,
)

_MISSING = object()
N_CONSTANT = const(1)


class MissingAxiom(KeyError):
    pass


def canonical_axiom(f: Formula) -> Formula:
    """Rename the variables of ``f`` to x1, x2, ... at the root position."""
    return canonical(f)[0]


class AxiomAssignment(Mapping):
    """Maps primitive symbols to axioms in canonical root-position variables.

    The wildcard ``n`` is always available and maps to a rigid constant.
    The object also memoizes MGTs of D-terms, so reuse one instance for
    related computations.
    """

    def __init__(self, axioms: Mapping[PrimSym, Formula]):
        self._axioms: dict[PrimSym, Formula] = {
            sym: canonical_axiom(f) for sym, f in axioms.items()
        }
        self._mgt: dict[DTerm, Formula | None] = {}
        self._shifted: dict[Formula, Formula] = {}

    @classmethod
    def single(cls, f: Formula, sym: PrimSym = 1) -> "AxiomAssignment":
        return cls({sym: f})

    @classmethod
    def of_proof(cls, p: CompactProof) -> "AxiomAssignment":
        return cls({s.index: s.formula for s in p.axiom_steps})

    def __getitem__(self, sym: PrimSym) -> Formula:
        f = self._axioms.get(sym)
        if f is None:
            if sym == N:
                return N_CONSTANT
            raise MissingAxiom(sym)
        return f

    def __iter__(self) -> Iterator[PrimSym]:
        return iter(self._axioms)

    def __len__(self) -> int:
        return len(self._axioms)

    def fingerprint(self) -> str:
        return ";".join(f"{k}={canonical_text(v)}" for k, v in sorted(self._axioms.items()))

    def extended(self, extra: Mapping[PrimSym, Formula]) -> "AxiomAssignment":
        merged = dict(self._axioms)
        merged.update(extra)
        return AxiomAssignment(merged)

    def _shift1(self, f: Formula) -> Formula:
        r = self._shifted.get(f)
        if r is None:
            if len(self._shifted) > 200_000:
                self._shifted.clear()
            r = self._shifted[f] = shift((1,), f)
        return r


def detach(major: Formula, minor: Formula, alpha: AxiomAssignment | None = None) -> Formula | None:
    """Condensed detachment of two canonical formulas, or None.

    Both inputs must use root-position variables only; the major premise is
    renamed apart by shifting it to position 1.
    """
    maj = alpha._shift1(major) if alpha is not None else shift((1,), major)
    y = yvar(ROOT)
    b: Substitution = {}
    if not solve([(maj, Imp(minor, y))], b):
        return None
    return canonical(resolver(b)(y))[0]


def mgt(d: DTerm, alpha: AxiomAssignment) -> Formula | None:
    """Most general theorem of ``d`` in canonical variables, None if undefined."""
    cache = alpha._mgt
    r = cache.get(d, _MISSING)
    if r is not _MISSING:
        return r
    if type(d) is Prim:
        r = alpha[d.sym]
    else:
        a = mgt(d.major, alpha)
        r = None
        if a is not None and type(a) is Imp:
            b = mgt(d.minor, alpha)
            if b is not None:
                r = detach(a, b, alpha)
    cache[d] = r
    return r


def mgt_key(d: DTerm, alpha: AxiomAssignment) -> str | None:
    f = mgt(d, alpha)
    return None if f is None else canonical_text(f)


# ------------------------------------------------------ the definitional route

@dataclass(frozen=True)
class Pairing:
    pos: Position
    left: Formula
    right: Formula


def pairings(d: DTerm, alpha: AxiomAssignment) -> list[Pairing]:
    """One pairing per position of ``d`` in depth-first order."""
    out: list[Pairing] = []
    for p, t in positions(d):
        if type(t) is Prim:
            out.append(Pairing(p, yvar(p), shift(p, alpha[t.sym])))
        else:
            out.append(Pairing(p, yvar(p + (1,)), Imp(yvar(p + (2,)), yvar(p))))
    return out


@dataclass
class InPlaceTheorems:
    """The solved pairing problem of a D-term."""

    dterm: DTerm
    bindings: Substitution
    _resolve: object = field(repr=False)

    def ipt(self, p: Position) -> Formula:
        return self._resolve(yvar(p))

    @property
    def mgt(self) -> Formula:
        return self.ipt(ROOT)

    def all(self) -> Iterator[tuple[Position, DTerm, Formula]]:
        for p, t in positions(self.dterm):
            yield p, t, self.ipt(p)


def solve_pairings(d: DTerm, alpha: AxiomAssignment) -> InPlaceTheorems | None:
    b: Substitution = {}
    if not solve(((pr.left, pr.right) for pr in pairings(d, alpha)), b):
        return None
    return InPlaceTheorems(d, b, resolver(b))


def mgt_by_pairings(d: DTerm, alpha: AxiomAssignment) -> Formula | None:
    sol = solve_pairings(d, alpha)
    return None if sol is None else sol.mgt


def ipt(d: DTerm, p: Position, alpha: AxiomAssignment) -> Formula | None:
    p = tuple(p)
    from .dterms import subterm_at

    subterm_at(d, p)  # raises on a bad position
    sol = solve_pairings(d, alpha)
    return None if sol is None else sol.ipt(p)


# ------------------------------------------------------------ proof checking

@dataclass(frozen=True)
class StepReport:
    index: int
    stated: Formula | None
    computed: Formula | None
    ok: bool
    t_size: int
    c_size: int
    height: int
    message: str = ""


@dataclass(frozen=True)
class CheckReport:
    steps: list[StepReport]
    roots_c_size: int

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.steps)

    def step(self, index: int) -> StepReport:
        for s in self.steps:
            if s.index == index:
                return s
        raise KeyError(index)


def check_proof(p: CompactProof, alpha: AxiomAssignment | None = None) -> CheckReport:
    """Recompute the MGT of every derived step and compare with its formula."""
    alpha = alpha or AxiomAssignment.of_proof(p)
    reports: list[StepReport] = []
    for s in p.steps:
        d = expand(p, s.index)
        if s.is_axiom:
            reports.append(StepReport(s.index, s.formula, alpha[s.index], True, 0, 0, 0))
            continue
        m = mgt(d, alpha)
        if m is None:
            ok, msg = False, "most general theorem undefined"
        elif s.formula is None or not is_variant(m, s.formula):
            ok, msg = False, f"computed {canonical_text(m)}"
        else:
            ok, msg = True, ""
        reports.append(StepReport(s.index, s.formula, m, ok, d.t_size, c_size(d), d.height, msg))
    return CheckReport(reports, c_size(p.roots()))


# -------------------------------------------------------------- n-simplifying

def simp_n(d: DTerm, alpha: AxiomAssignment) -> DTerm:
    """Replace minor subproofs by ``n`` wherever the conclusion does not need them."""
    if mgt(d, alpha) is None:
        raise ValueError("most general theorem of the input is undefined")
    memo: dict[DTerm, DTerm] = {}
    for t in subterms(d):
        if type(t) is Prim:
            memo[t] = t
            continue
        a, b = t.major, t.minor
        if b is NPRIM:
            memo[t] = D(memo[a], NPRIM)
            continue
        relaxed = mgt(D(a, NPRIM), alpha)
        if relaxed is not None and is_variant(relaxed, mgt(t, alpha)):
            memo[t] = D(memo[a], NPRIM)
        else:
            memo[t] = D(memo[a], memo[b])
    return memo[d]


def read_n_as(d: DTerm, sym: PrimSym = 1) -> DTerm:
    """Replace every ``n`` leaf by the primitive ``sym``."""
    from .dterms import replace_all

    return replace_all(d, NPRIM, Prim(sym))


# ------------------------------------------------------- minimal proof sizes

@dataclass(frozen=True)
class Interval:
    low: int
    high: int | None

    @property
    def exact(self) -> bool:
        return self.high is not None and self.low == self.high

    def __str__(self) -> str:
        if self.exact:
            return str(self.low)
        high = "?" if self.high is None else str(self.high)
        return f"{self.low}–{high}"

    def meet(self, other: "Interval") -> "Interval":
        highs = [h for h in (self.high, other.high) if h is not None]
        return Interval(max(self.low, other.low), min(highs) if highs else None)


class SizeOracle:
    """Exhaustive minimal proof sizes up to fixed bounds.

    ``tree_bound`` limits the tree size: levels hold the MGTs first reached
    at each tree size, which suffices because the MGT of ``D(a, b)`` only
    depends on the MGTs of ``a`` and ``b``.  ``c_bound`` limits a DAG-aware
    enumeration by compacted size over D-terms with defined MGT.
    """

    def __init__(self, alpha: AxiomAssignment, tree_bound: int, c_bound: int):
        self.alpha = alpha
        self.tree_bound = tree_bound
        self.c_bound = c_bound
        self._tree: dict[str, int] | None = None
        self._compact: dict[str, int] | None = None

    def _axiom_formulas(self) -> list[Formula]:
        return [self.alpha[s] for s in sorted(self.alpha, key=str)]

    def tree_table(self) -> dict[str, int]:
        if self._tree is None:
            best: dict[str, int] = {}
            levels: list[list[Formula]] = []
            for n in range(self.tree_bound + 1):
                if n == 0:
                    cands = iter(self._axiom_formulas())
                else:
                    cands = (
                        detach(f, g, self.alpha)
                        for i in range(n)
                        for f in levels[i]
                        if type(f) is Imp
                        for g in levels[n - 1 - i]
                    )
                level: list[Formula] = []
                for f in cands:
                    if f is None:
                        continue
                    key = canonical_text(f)
                    if key not in best:
                        best[key] = n
                        level.append(f)
                levels.append(level)
            self._tree = best
        return self._tree

    def compact_table(self) -> dict[str, int]:
        if self._compact is None:
            best: dict[str, int] = {}
            leaves = [Prim(s) for s in sorted(self.alpha, key=str)]
            pool: list[DTerm] = list(leaves)
            for t in leaves:
                best.setdefault(mgt_key(t, self.alpha), 0)
            from .dterms import compounds

            for k in range(1, self.c_bound + 1):
                level: list[DTerm] = []
                for a in pool:
                    fa = mgt(a, self.alpha)
                    if type(fa) is not Imp:
                        continue
                    ca = compounds(a)
                    for b in pool:
                        if len(ca | compounds(b)) != k - 1:
                            continue
                        t = D(a, b)
                        key = mgt_key(t, self.alpha)
                        if key is None:
                            continue
                        level.append(t)
                        best.setdefault(key, k)
                pool.extend(level)
            self._compact = best
        return self._compact

    def min_sizes(self, goal: Formula) -> tuple[Interval, Interval]:
        key = canonical_text(goal)
        mt = self.tree_table().get(key)
        mc = self.compact_table().get(key)
        return (
            Interval(mt, mt) if mt is not None else Interval(self.tree_bound + 1, None),
            Interval(mc, mc) if mc is not None else Interval(self.c_bound + 1, None),
        )


def min_sizes(goal: Formula, alpha: AxiomAssignment, bound: int = 6,
              c_bound: int | None = None) -> tuple[Interval, Interval]:
    """Minimal tree size and compacted size of a proof whose MGT is a variant of ``goal``.

    Exact values when found within the bounds, otherwise a lower bound.
    """
    return SizeOracle(alpha, bound, bound if c_bound is None else c_bound).min_sizes(goal)
