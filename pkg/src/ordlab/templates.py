"""Templates (graphs with full/empty vertex marks), their finite blow-ups,
twin reduction and exact uniformity classification."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .graph import CapExceeded, Graph, complement as graph_complement, induced_subgraph, twin_status
from .verdict import Label, Verdict

BLOWUP_CAP = 5000


@dataclass(frozen=True)
class Template:
    base: Graph
    marks: tuple  # True = full (block is a clique), False = empty

    def __post_init__(self):
        if len(self.marks) != self.base.n:
            raise ValueError("one mark per vertex required")
        object.__setattr__(self, "marks", tuple(bool(m) for m in self.marks))

    @property
    def n(self) -> int:
        return self.base.n

    def full(self, v: int) -> bool:
        return self.marks[v]

    def complement(self) -> "Template":
        """Complement graph with full/empty swapped; its blow-up is the
        complement of this one's."""
        return Template(graph_complement(self.base), tuple(not m for m in self.marks))

    def to_json(self) -> str:
        return json.dumps({
            "vertices": [{"id": v, "full": m} for v, m in enumerate(self.marks)],
            "edges": [list(e) for e in self.base.edges()],
        })

    @classmethod
    def from_json(cls, text: str) -> "Template":
        data = json.loads(text)
        verts = data["vertices"]
        ids = [v["id"] for v in verts]
        if sorted(ids) != list(range(len(ids))):
            raise ValueError("template vertex ids must be 0..n-1")
        marks = [False] * len(ids)
        for v in verts:
            marks[v["id"]] = bool(v["full"])
        return cls(Graph(len(ids), [tuple(e) for e in data.get("edges", [])]), tuple(marks))


@dataclass(frozen=True)
class BlowUpSpec:
    template: Template
    multiplicity: tuple

    def __post_init__(self):
        mult = tuple(int(m) for m in self.multiplicity)
        if len(mult) != self.template.n:
            raise ValueError("one multiplicity per template vertex required")
        if any(m < 1 for m in mult):
            raise ValueError("multiplicities must be >= 1")
        object.__setattr__(self, "multiplicity", mult)

    @classmethod
    def uniform(cls, template: Template, m: int) -> "BlowUpSpec":
        return cls(template, (m,) * template.n)


def blow_up(spec: BlowUpSpec, cap: int = BLOWUP_CAP) -> tuple[Graph, list[int]]:
    """Finite blow-up; vertices are laid out block by block in template order.

    Returns the graph and the block map (blown-up vertex -> template vertex).
    """
    t, mult = spec.template, spec.multiplicity
    total = sum(mult)
    if total > cap:
        raise CapExceeded(f"blow-up has {total} vertices > cap {cap}")
    block = [v for v in range(t.n) for _ in range(mult[v])]
    start = list(itertools.accumulate((0,) + mult[:-1]))
    masks = [((1 << mult[v]) - 1) << start[v] for v in range(t.n)]
    rows = []
    for x in range(total):
        v = block[x]
        r = 0
        for w in t.base.neighbors(v):
            r |= masks[w]
        if t.marks[v]:
            r |= masks[v] & ~(1 << x)
        rows.append(r)
    return Graph.from_rows(rows), block


def _mergeable(t: Template, i: int, j: int) -> bool:
    if t.marks[i] != t.marks[j]:
        return False
    status = twin_status(t.base, i, j)
    return status == ("adjacent_twins" if t.marks[i] else "nonadjacent_twins")


def _drop_vertex(t: Template, j: int) -> Template:
    keep = [v for v in range(t.n) if v != j]
    g, _ = induced_subgraph(t.base, keep)
    return Template(g, tuple(t.marks[v] for v in keep))


def reduce_template_with_map(t: Template, order=None) -> tuple[Template, list[int]]:
    """Merge adjacent full twins and non-adjacent empty twins until none are
    left.  The default merges the lowest-index pair first; ``order`` may be a
    callable choosing among the mergeable pairs (used to test confluence).

    Returns the reduced template and the map original vertex -> reduced vertex.
    """
    cur = t
    owner = list(range(t.n))  # original -> current index
    while True:
        pairs = [(i, j) for i, j in itertools.combinations(range(cur.n), 2) if _mergeable(cur, i, j)]
        if not pairs:
            return cur, owner
        i, j = order(pairs) if order else pairs[0]
        cur = _drop_vertex(cur, j)
        owner = [i if o == j else (o - 1 if o > j else o) for o in owner]


def reduce_template(t: Template) -> Template:
    return reduce_template_with_map(t)[0]


def merged_multiplicities(t: Template, mult, owner: list[int], reduced_n: int) -> tuple:
    out = [0] * reduced_n
    for v, m in enumerate(mult):
        out[owner[v]] += m
    return tuple(out)


# -- classification --------------------------------------------------------

def _configurations(t: Template):
    """Yield (certificate label, vertex dict) for 3-vertex subtemplates that force
    uniformity."""
    e = t.base.has_edge
    full = [v for v in range(t.n) if t.marks[v]]
    emp = [v for v in range(t.n) if not t.marks[v]]
    for u, v in itertools.permutations(full, 2):
        for w in emp:
            if e(u, v) and e(u, w) and not e(v, w):
                yield "l:e-f-f", {"u": u, "v": v, "w": w}
            if e(u, w) and not e(u, v) and not e(v, w):
                yield "l:e-f,f", {"u": u, "v": v, "w": w}
            if u < v and e(u, w) and e(v, w) and not e(u, v):
                yield "l:f-e-f", {"u": u, "v": v, "w": w}
    for u, v, w in itertools.permutations(full, 3):
        if u < v and e(u, w) and e(v, w) and not e(u, v):
            yield "l:f-f-f", {"u": u, "v": v, "w": w}


def non_uniform_shape(r: Template) -> str | None:
    """For a reduced template: 'edgeless' or 'complete' when it has one of the
    two block-ordering shapes, else None."""
    if r.n < 2:
        return None
    nfull = sum(r.marks)
    nempty = r.n - nfull
    if r.base.m == 0 and nfull >= 1 and nempty <= 1:
        return "edgeless"
    if r.base.m == r.n * (r.n - 1) // 2 and nempty >= 1 and nfull <= 1:
        return "complete"
    return None


def classify_template(t: Template) -> Verdict:
    r, owner = reduce_template_with_map(t)
    rep = {}
    for orig, red in enumerate(owner):
        rep.setdefault(red, orig)

    def back(d):
        return {k: rep[v] for k, v in d.items()}

    if r.n == 1:
        return Verdict(Label.UNIFORM, "l:homog", {"reduced_size": 1})
    shape = non_uniform_shape(r)
    if shape is not None:
        g, _ = blow_up(BlowUpSpec.uniform(r, 2))
        return Verdict(Label.NON_UNIFORM, "x:UK", {
            "sampler": {"kind": "block"},
            "shape": shape,
            "graph": g.to_edge_list(),
            "reduced_marks": list(r.marks),
            "reduced_edges": [list(x) for x in r.base.edges()],
        })
    for comp, cand in ((False, r), (True, r.complement())):
        for label, verts in _configurations(cand):
            return Verdict(Label.UNIFORM, label, {"vertices": back(verts), "complement": comp})
    raise RuntimeError("reduced template matched neither a non-uniform shape nor a forcing configuration")
