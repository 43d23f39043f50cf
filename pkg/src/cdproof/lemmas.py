"""Lemma generation from the axiom alone.

``prime_core`` picks prime D-terms of a fixed size whose MGT is new at that
size and has a prescribed number of variables, then turns the first one and
its compound subterms into lemmas.

``proof_subproof`` is a given-clause style loop over D-terms: the given
term ``d`` is combined with each of its own subterms ``e`` into ``D(d, e)``
and ``D(e, d)``, and the results that pass the filters join the queue.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

from .dterms import (
    D, NPRIM, ONE, DTerm, EnumerationLimit, ENUM_LIMITS, c_size, format_dterm,
    parse_dterm, subterms,
)
from .proof_calc import AxiomAssignment, mgt, mgt_key
from .reduction import is_c_regular, prime_levels
from .terms import (
    Formula, TautologyLimitError, canonical_text, is_variant, organicity, parse_formula,
    subsumed_by, term_stats,
)

LEMMA_SCHEMA = "cdproof.lemmas/1"


@dataclass
class Lemma:
    formula: Formula
    witness: DTerm
    features: dict = field(default_factory=dict)

    @property
    def key(self) -> str:
        return canonical_text(self.formula)


def make_lemma(witness: DTerm, alpha: AxiomAssignment, **features) -> Lemma:
    f = mgt(witness, alpha)
    if f is None:
        raise ValueError(f"undefined most general theorem for {format_dterm(witness)}")
    feats = {"DT": witness.t_size, "DC": c_size(witness), "DH": witness.height,
             "DKL": witness.dk_left}
    feats.update(features)
    return Lemma(f, witness, feats)


# ------------------------------------------------------------- prime core

@dataclass
class PrimeCore:
    candidates: list[DTerm]
    lemmas: list[Lemma]
    defined: int  # primes of the given size with a defined MGT


def prime_core(alpha: AxiomAssignment, size: int, var_count: int | None,
               redundancy: str = "subsume") -> PrimeCore:
    """Prime D-terms of exactly ``size`` that are plausible cores of a proof.

    A candidate has a defined MGT with ``var_count`` distinct variables
    (``None`` disables that filter) and no smaller prime proof of its MGT.
    With ``redundancy="subsume"`` a smaller prime proof of a more general
    formula counts as a proof of the MGT; ``"variant"`` only counts proofs
    of a variant, ``"off"`` disables the check.
    """
    if redundancy not in ("subsume", "variant", "off"):
        raise ValueError(f"unknown redundancy mode {redundancy!r}")
    if size > ENUM_LIMITS["prime"]:
        raise EnumerationLimit(f"prime size {size} exceeds limit {ENUM_LIMITS['prime']}")
    levels = list(prime_levels(alpha, size))
    smaller: dict[str, Formula] = {}
    if redundancy != "off":
        for level in levels[:-1]:
            for d in level:
                smaller.setdefault(mgt_key(d, alpha), mgt(d, alpha))
    general = list(smaller.values())
    cands = []
    for d in levels[-1]:
        f = mgt(d, alpha)
        if var_count is not None and term_stats(f).var_count != var_count:
            continue
        if canonical_text(f) in smaller:
            continue
        if redundancy == "subsume" and any(subsumed_by(f, g) for g in general):
            continue
        cands.append(d)
    lemmas: list[Lemma] = []
    if cands:
        lemmas = [make_lemma(t, alpha) for t in subterms(cands[0]) if type(t) is D]
    return PrimeCore(cands, lemmas, len(levels[-1]))


# --------------------------------------------------------- given-term loop

@dataclass(frozen=True)
class LoopConfig:
    iterations: int = 100
    dkl_limit: int = 8
    require_c_regular: bool = True
    require_weakly_organic: bool = True
    keep_order: str = "fifo"  # or "by_tree_size"
    use_n: bool = True
    max_formula_size: int | None = None
    max_formula_height: int | None = None
    max_formula_vars: int | None = None

    def __post_init__(self) -> None:
        if self.iterations < 0:
            raise ValueError("iterations must be non-negative")
        if self.dkl_limit < 1:
            raise ValueError("dkl_limit must be at least 1")
        if self.keep_order not in ("fifo", "by_tree_size"):
            raise ValueError(f"unknown keep_order {self.keep_order!r}")


def _inferred(d: DTerm, alpha: AxiomAssignment, use_n: bool) -> list[DTerm]:
    out: list[DTerm] = []
    for e in subterms(d):
        if e is NPRIM:
            continue
        for t in (D(d, e), D(e, d)):
            f = mgt(t, alpha)
            if f is None:
                continue
            if use_n:
                relaxed = mgt(D(t.major, NPRIM), alpha)
                if relaxed is not None and is_variant(relaxed, f):
                    t = D(t.major, NPRIM)
            out.append(t)
    return out


def _small_enough(f: Formula, cfg: LoopConfig) -> bool:
    st = term_stats(f)
    return not (
        (cfg.max_formula_size is not None and st.tree_size > cfg.max_formula_size)
        or (cfg.max_formula_height is not None and st.height > cfg.max_formula_height)
        or (cfg.max_formula_vars is not None and st.var_count > cfg.max_formula_vars)
    )


def _weakly_organic(f: Formula) -> bool:
    # formulas beyond the truth-table limit are too large to be useful lemmas
    try:
        org = organicity(f, limit=20)
    except TautologyLimitError:
        return False
    return org.organic or org.weakly_organic


def proof_subproof(alpha: AxiomAssignment, cfg: LoopConfig = LoopConfig()) -> list[Lemma]:
    """Lemmas kept by the given-term loop after ``cfg.iterations`` rounds.

    The queue starts with the axiom ``1``.  Each round takes the next given
    term and keeps every inferred term with a defined MGT that passes the
    filters and whose MGT is not a variant of one already kept.
    """
    seen: set[str] = {mgt_key(ONE, alpha)}
    kept: list[DTerm] = []
    queue: deque[DTerm] = deque([ONE])
    for _ in range(cfg.iterations):
        if not queue:
            break
        if cfg.keep_order == "by_tree_size":
            given = min(queue, key=lambda t: (t.t_size, c_size(t)))
            queue.remove(given)
        else:
            given = queue.popleft()
        for t in _inferred(given, alpha, cfg.use_n):
            if t.dk_left > cfg.dkl_limit:
                continue
            key = mgt_key(t, alpha)
            if key in seen:
                continue
            if not _small_enough(mgt(t, alpha), cfg):
                continue
            if cfg.require_weakly_organic and not _weakly_organic(mgt(t, alpha)):
                continue
            if cfg.require_c_regular and not is_c_regular(t, alpha):
                continue
            seen.add(key)
            kept.append(t)
            queue.append(t)
    return [make_lemma(t, alpha) for t in kept]


# ---------------------------------------------------------------- export

def _sorted(ls: list[Lemma]) -> list[Lemma]:
    return sorted(ls, key=lambda l: (l.witness.t_size, l.key))


def lemma_export(ls: list[Lemma], fmt: str = "text") -> str:
    ls = _sorted(ls)
    if fmt == "text":
        return "".join(f"{l.key} = {format_dterm(l.witness)}\n" for l in ls)
    if fmt == "json":
        return json.dumps({
            "schema": LEMMA_SCHEMA,
            "lemmas": [{"formula": l.key, "dterm": format_dterm(l.witness),
                        "features": l.features} for l in ls],
        }, indent=1) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def lemma_import(text: str) -> list[Lemma]:
    """Read either export format back."""
    if text.lstrip().startswith("{"):
        data = json.loads(text)
        if data.get("schema") != LEMMA_SCHEMA:
            raise ValueError(f"unexpected schema {data.get('schema')!r}")
        return [Lemma(parse_formula(x["formula"]), parse_dterm(x["dterm"]), x.get("features", {}))
                for x in data["lemmas"]]
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        ftext, _, dtext = line.partition("=")
        out.append(Lemma(parse_formula(ftext.strip()), parse_dterm(dtext.strip())))
    return out
