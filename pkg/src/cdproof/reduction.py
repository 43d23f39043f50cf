"""Replacing subproofs without losing what the proof proves.

C-reduction replaces every occurrence of a compound subproof ``e`` by a
strictly compaction-smaller ``e2`` whose MGT subsumes the in-place theorem
of each occurrence.  The result proves at least as general a theorem and
has a strictly smaller sc-size, so iterating terminates in a C-regular term.

``rewrite_with_table`` is the single-occurrence variant: a subproof may be
replaced by any smaller proof whose MGT subsumes the subproof's own MGT,
drawing candidates from a precomputed table of small prime proofs.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .dterms import (
    D, ONE, DTerm, Prim, c_size, enumerate_c_smaller, format_dterm, gt_c,
    parse_dterm, positions, replace_all, replace_at, sc_size, subterms,
)
from .proof_calc import AxiomAssignment, mgt, mgt_key, solve_pairings
from .terms import Formula, canonical_text, match, subsumed_by, tree_size


@dataclass(frozen=True)
class Reduction:
    result: DTerm
    replaced: DTerm
    replacement: DTerm


def _candidate_order(c: DTerm) -> tuple:
    return (c_size(c), c.t_size, format_dterm(c))


def c_reduction_step(d: DTerm, alpha: AxiomAssignment) -> Reduction | None:
    """One C-reduction step, or None if ``d`` is C-regular.

    Subterms are tried by decreasing sc-size and candidates by increasing
    compacted size; the first admissible pair wins.
    """
    sol = solve_pairings(d, alpha)
    if sol is None:
        raise ValueError("most general theorem undefined")
    occ: dict[DTerm, list] = {}
    for p, t in positions(d):
        if type(t) is D:
            occ.setdefault(t, []).append(p)
    order = sorted(occ, key=lambda e: -sc_size(e))
    for e in order:
        ipts = [sol.ipt(p) for p in occ[e]]
        cands = sorted((c for c in enumerate_c_smaller(e) if gt_c(e, c)), key=_candidate_order)
        for c in cands:
            m = mgt(c, alpha)
            if m is None:
                continue
            if all(subsumed_by(i, m) for i in ipts):
                return Reduction(replace_all(d, e, c), e, c)
    return None


def is_c_regular(d: DTerm, alpha: AxiomAssignment) -> bool:
    return c_reduction_step(d, alpha) is None


def reduce_to_regular(d: DTerm, alpha: AxiomAssignment, check: bool = True) -> DTerm:
    """Apply C-reduction steps until the term is C-regular."""
    while True:
        step = c_reduction_step(d, alpha)
        if step is None:
            return d
        if check:
            before, after = mgt(d, alpha), mgt(step.result, alpha)
            assert after is not None and subsumed_by(before, after)
            assert sc_size(step.result) < sc_size(d)
        d = step.result


# ---------------------------------------------------------- small-proof table

class TableMismatch(ValueError):
    pass


@dataclass
class SmallProofTable:
    """Minimal prime proof for each MGT of a prime D-term up to a size bound."""

    fingerprint: str
    size_bound: int
    entries: dict[str, DTerm]

    def __len__(self) -> int:
        return len(self.entries)

    def witness(self, f: Formula) -> DTerm | None:
        return self.entries.get(canonical_text(f))

    def header(self) -> str:
        return f"# small-proof table\taxiom={self.fingerprint}\tbound={self.size_bound}"

    def dumps(self) -> str:
        lines = [self.header()]
        lines += [f"{k}\t{format_dterm(v)}" for k, v in sorted(self.entries.items())]
        return "\n".join(lines) + "\n"

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    @classmethod
    def loads(cls, text: str) -> "SmallProofTable":
        lines = text.splitlines()
        fields = dict(part.split("=", 1) for part in lines[0].split("\t")[1:])
        entries: dict[str, DTerm] = {}
        for line in lines[1:]:
            if line.strip():
                key, dt = line.split("\t")
                entries[key] = parse_dterm(dt)
        return cls(fields["axiom"], int(fields["bound"]), entries)

    @classmethod
    def load(cls, path: str | Path) -> "SmallProofTable":
        return cls.loads(Path(path).read_text(encoding="utf-8"))


def _single_axiom(alpha: AxiomAssignment) -> None:
    if list(alpha) != [1]:
        raise TableMismatch("small-proof tables need a single axiom labelled 1")


def prime_levels(alpha: AxiomAssignment, size_bound: int) -> Iterable[list[DTerm]]:
    """Prime D-terms with defined MGT, one list per size 0..size_bound.

    Terms with an undefined MGT are dropped early: their extensions are
    undefined as well.
    """
    level: list[DTerm] = [ONE]
    yield level
    for n in range(1, size_bound + 1):
        nxt: list[DTerm] = []
        for e in level:
            for d in (D(e, ONE), D(ONE, e)) if n > 1 else (D(e, ONE),):
                if mgt(d, alpha) is not None:
                    nxt.append(d)
        level = nxt
        yield level


def build_small_proof_table(alpha: AxiomAssignment, size_bound: int) -> SmallProofTable:
    _single_axiom(alpha)
    entries: dict[str, DTerm] = {}
    for level in prime_levels(alpha, size_bound):
        for d in level:
            entries.setdefault(mgt_key(d, alpha), d)
    return SmallProofTable(alpha.fingerprint(), size_bound, entries)


def default_cache_dir() -> Path:
    return Path(os.environ.get("CDPROOF_CACHE", Path.home() / ".cache" / "cdproof"))


def cached_small_proof_table(alpha: AxiomAssignment, size_bound: int,
                             cache_dir: str | Path | None = None) -> SmallProofTable:
    """Load the table from the cache directory, building and storing it if absent."""
    _single_axiom(alpha)
    folder = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    digest = hashlib.sha1(alpha.fingerprint().encode()).hexdigest()[:12]
    name = f"table-{digest}-{size_bound}.tsv"
    path = folder / name
    if path.exists():
        table = SmallProofTable.load(path)
        if table.fingerprint == alpha.fingerprint() and table.size_bound == size_bound:
            return table
    table = build_small_proof_table(alpha, size_bound)
    folder.mkdir(parents=True, exist_ok=True)
    table.save(path)
    return table


# ------------------------------------------------------- single occurrences

class _Candidates:
    """Replacement candidates sorted by the objective, with their MGTs."""

    def __init__(self, alpha: AxiomAssignment, terms: Iterable[DTerm], objective: str):
        self.alpha = alpha
        self.objective = objective
        seen: set[DTerm] = set()
        items = []
        for t in terms:
            if t in seen:
                continue
            seen.add(t)
            m = mgt(t, alpha)
            if m is not None:
                items.append((self.measure(t), format_dterm(t), t, m, tree_size(m)))
        items.sort(key=lambda it: (it[0], it[1]))
        self.items = items

    def measure(self, t: DTerm) -> int:
        return t.t_size if self.objective == "tree" else c_size(t)

    def best_for(self, t: DTerm) -> DTerm | None:
        """Smallest candidate whose MGT subsumes the MGT of ``t``."""
        target = mgt(t, self.alpha)
        size = self.measure(t)
        tsize = tree_size(target)
        for measure, _, cand, m, msize in self.items:
            if measure >= size:
                break
            if cand is t or msize > tsize:
                continue
            if match(m, target) is not None:
                return cand
        return None


def rewrite_with_table(d: DTerm, alpha: AxiomAssignment, table: SmallProofTable | None,
                       objective: str = "tree", check: bool = True) -> DTerm:
    """Shrink ``d`` by rewriting single subproof occurrences.

    A subproof may be replaced by any smaller table witness or subterm of
    ``d`` whose MGT subsumes the subproof's MGT.  Sweeps run innermost
    first until nothing changes.  With ``objective="compacted"`` a rewrite
    is kept only if it lowers the compacted size of the whole term.
    """
    if objective not in ("tree", "compacted"):
        raise ValueError(f"unknown objective {objective!r}")
    if table is not None and table.fingerprint != alpha.fingerprint():
        raise TableMismatch("table was built for a different axiom")
    if mgt(d, alpha) is None:
        raise ValueError("most general theorem undefined")
    pool = list(table.entries.values()) if table is not None else []
    original = mgt(d, alpha)
    while True:
        cands = _Candidates(alpha, pool + subterms(d), objective)
        new = _sweep(d, cands) if objective == "tree" else _sweep_compacted(d, cands)
        if new is d:
            return d
        if check:
            assert subsumed_by(original, mgt(new, alpha))
        d = new


def _sweep(d: DTerm, cands: _Candidates) -> DTerm:
    best: dict[DTerm, DTerm | None] = {}
    memo: dict[DTerm, DTerm] = {}
    for t in subterms(d):
        if type(t) is Prim:
            memo[t] = t
            continue
        a, b = memo[t.major], memo[t.minor]
        u = t if (a is t.major and b is t.minor) else D(a, b)
        if u not in best:
            best[u] = cands.best_for(u)
        memo[t] = best[u] or u
    return memo[d]


def _sweep_compacted(d: DTerm, cands: _Candidates) -> DTerm:
    order = sorted(positions(d), key=lambda pt: (-len(pt[0]), pt[0]))
    size = c_size(d)
    for p, t in order:
        if type(t) is Prim:
            continue
        e = cands.best_for(t)
        if e is None:
            continue
        cand = replace_at(d, p, e)
        if c_size(cand) < size:
            return cand
    return d
