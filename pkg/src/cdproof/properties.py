"""Feature vectors of all subproofs of a proof.

Rows follow a post-order walk (major before minor) over the expanded goal
steps, one row per distinct subproof; the wildcard ``n`` gets no row.
Row labels refer to other rows by number, e.g. ``D31`` is the detachment
of row 3 and row 1.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from statistics import median
from typing import Iterable

from .dterms import (
    D, NPRIM, CompactProof, DTerm, Prim, c_size, dag_order, format_dterm, gt_c,
    positions, subterms,
)
from .proof_calc import AxiomAssignment, Interval, SizeOracle, mgt, solve_pairings
from .reduction import is_c_regular
from .terms import Formula, Var, canonical_text, is_variant, organicity, term_stats

SCHEMA = "cdproof.property-table/1"

COLUMNS = [
    "M", "DT", "DC", "DH", "DKL", "DKR", "DP", "DS", "DD", "DR", "TT", "TC", "TH",
    "TV", "TO", "RC", "MT", "MC", "ITU", "ITM", "IHU", "IHM",
]


@dataclass
class PropertyRow:
    row: int
    label: str
    dterm: str
    formula: str
    M: int | None
    DT: int
    DC: int
    DH: int
    DKL: int
    DKR: int
    DP: bool
    DS: str
    DD: int
    DR: int
    TT: int
    TC: int
    TH: int
    TV: int
    TO: str  # "organic", "weak" or "no"
    RC: bool
    MT: Interval
    MC: Interval
    ITU: int
    ITM: int
    IHU: int
    IHM: int

    def to_json(self) -> dict:
        out = asdict(self)
        for key in ("MT", "MC"):
            iv: Interval = getattr(self, key)
            out[key] = [iv.low, iv.high]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "PropertyRow":
        data = dict(data)
        for key in ("MT", "MC"):
            data[key] = Interval(*data[key])
        return cls(**data)

    def cell(self, column: str) -> str:
        v = getattr(self, column)
        if column == "M":
            return "" if v is None else str(v)
        if column in ("DP", "RC"):
            return "•" if v else "-"
        if column == "TO":
            return {"organic": "•", "weak": "◦", "no": "-"}[v]
        return str(v)


def rounded_median(values: Iterable[int]) -> int:
    """Median rounded half up."""
    m = median(sorted(values))
    return int(m + 0.5)


def _ds(t: DTerm, name: dict[DTerm, str]) -> str:
    """Relation between the major and minor premise of ``t``."""
    if type(t) is Prim:
        return "-"
    a, b = t.major, t.minor
    ra = Prim(1) if a is NPRIM else a
    rb = Prim(1) if b is NPRIM else b
    if ra is rb:
        rel = "="
    elif rb in subterms(ra):
        rel = "⊳"
    elif ra in subterms(rb):
        rel = "⊲"
    elif gt_c(ra, rb):
        rel = ">c"
    elif gt_c(rb, ra):
        rel = "<c"
    else:
        rel = "|"
    left = name[a] if type(a) is Prim else ""
    right = name[b] if type(b) is Prim else ""
    return f"{left}{rel}{right}"


def _label(t: DTerm, name: dict[DTerm, str]) -> str:
    if type(t) is Prim:
        return name[t]
    parts = [name[t.major], name[t.minor]]
    out = "D"
    for k, part in enumerate(parts):
        out += part
        if k == 0 and (len(part) > 1 or len(parts[1]) > 1) and part != "n":
            out += "."
    return out


def _size_height(f: Formula, memo: dict[int, tuple[int, int]]) -> tuple[int, int]:
    stack: list[tuple[Formula, bool]] = [(f, False)]
    while stack:
        t, done = stack.pop()
        if type(t) is Var or id(t) in memo:
            continue
        if not done:
            stack.append((t, True))
            stack.append((t.cons, False))
            stack.append((t.ant, False))
            continue
        sa, ha = memo.get(id(t.ant), (0, 0))
        sc, hc = memo.get(id(t.cons), (0, 0))
        memo[id(t)] = (1 + sa + sc, 1 + max(ha, hc))
    return memo.get(id(f), (0, 0))


def property_table(p: CompactProof, tree_bound: int = 7, c_bound: int = 5,
                   oracle: SizeOracle | None = None) -> list[PropertyRow]:
    """One row of structural and formula features per subproof of ``p``.

    ``tree_bound`` and ``c_bound`` limit the exhaustive search behind the
    minimal-size columns MT and MC; values beyond them print as intervals.
    """
    alpha = AxiomAssignment.of_proof(p)
    oracle = oracle or SizeOracle(alpha, tree_bound, c_bound)
    roots = p.roots()
    nodes = [t for t in dag_order(roots) if t is not NPRIM]
    name: dict[DTerm, str] = {NPRIM: "n"}
    for k, t in enumerate(nodes, 1):
        name[t] = str(k)

    indeg: dict[DTerm, int] = {t: 0 for t in nodes}
    occ: dict[DTerm, int] = {t: 0 for t in nodes}
    for r in roots:
        occ[r] += 1
    for t in reversed(nodes):
        if type(t) is D:
            for child in (t.major, t.minor):
                if child is not NPRIM:
                    indeg[child] += 1
                    occ[child] += occ[t]

    ipt_stats: dict[DTerm, list[tuple[int, int]]] = {t: [] for t in nodes}
    for r in roots:
        sol = solve_pairings(r, alpha)
        if sol is None:
            raise ValueError("goal with undefined most general theorem")
        memo: dict[int, tuple[int, int]] = {}
        for pos, t in positions(r):
            if t is not NPRIM:
                ipt_stats[t].append(_size_height(sol.ipt(pos), memo))

    stated = [(s.index, s.formula) for s in p.steps if s.formula is not None]
    formulas = {t: mgt(t, alpha) for t in nodes}
    best_tree: dict[str, int] = {}
    best_comp: dict[str, int] = {}
    for t in nodes:
        key = canonical_text(formulas[t])
        best_tree[key] = min(best_tree.get(key, t.t_size), t.t_size)
        best_comp[key] = min(best_comp.get(key, c_size(t)), c_size(t))

    rows: list[PropertyRow] = []
    for k, t in enumerate(nodes, 1):
        f = formulas[t]
        key = canonical_text(f)
        ts = term_stats(f)
        org = organicity(f)
        mt, mc = oracle.min_sizes(f)
        mt = mt.meet(Interval(0, best_tree[key]))
        mc = mc.meet(Interval(0, best_comp[key]))
        sizes = [s for s, _ in ipt_stats[t]]
        heights = [h for _, h in ipt_stats[t]]
        m_index = next((i for i, g in stated if is_variant(f, g)), None)
        rows.append(PropertyRow(
            row=k,
            label=_label(t, name),
            dterm=format_dterm(t),
            formula=key,
            M=m_index,
            DT=t.t_size,
            DC=c_size(t),
            DH=t.height,
            DKL=t.dk_left,
            DKR=t.dk_right,
            DP=c_size(t) == t.t_size,
            DS=_ds(t, name),
            DD=indeg[t],
            DR=occ[t],
            TT=ts.tree_size,
            TC=ts.c_size,
            TH=ts.height,
            TV=ts.var_count,
            TO="organic" if org.organic else ("weak" if org.weakly_organic else "no"),
            RC=type(t) is Prim or is_c_regular(t, alpha),
            MT=mt,
            MC=mc,
            ITU=max(sizes),
            ITM=rounded_median(sizes),
            IHU=max(heights),
            IHM=rounded_median(heights),
        ))
    return rows


def rows_to_json(rows: list[PropertyRow]) -> str:
    return json.dumps({"schema": SCHEMA, "rows": [r.to_json() for r in rows]},
                      ensure_ascii=False, indent=1)


def rows_from_json(text: str) -> list[PropertyRow]:
    data = json.loads(text)
    if data.get("schema") != SCHEMA:
        raise ValueError(f"unexpected schema {data.get('schema')!r}")
    return [PropertyRow.from_json(r) for r in data["rows"]]


def format_rows(rows: list[PropertyRow], columns: list[str] | None = None) -> str:
    columns = columns or COLUMNS
    header = ["#", "D-term"] + columns
    body = [[f"{r.row}.", r.label] + [r.cell(c) for c in columns] for r in rows]
    widths = [max(len(line[i]) for line in [header] + body) for i in range(len(header))]
    out = []
    for line in [header] + body:
        cells = [line[0].rjust(widths[0]), line[1].ljust(widths[1])]
        cells += [c.rjust(w) for c, w in zip(line[2:], widths[2:])]
        out.append(" ".join(cells).rstrip())
    return "\n".join(out) + "\n"
