"""The ordinary ell-isogeny graph over F_p and its decomposition.

Vertices are the ordinary j-invariants, with m directed edges j -> j'
whenever j' is a root of multiplicity m of the level-ell modular
polynomial specialized at j.  The decomposition machinery groups vertices
into cordilleras (by Frobenius trace), belts (by the prime-to-ell part of
the endomorphism conductor) and volcanoes (connected components), assigns
levels and depths, classifies craters, and audits everything against the
exact counting laws.
"""

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import arith, classgroup, curves, modpoly
from .config import Limits

__all__ = [
    "CraterShape",
    "IsogenyGraph",
    "VolcanoProfile",
    "ComponentInfo",
    "BeltReport",
    "CordilleraReport",
    "Decomposition",
    "AuditCheck",
    "AuditReport",
    "AtlasTally",
    "StructureError",
    "CapExceededError",
    "build_graph",
    "components",
    "assign_levels",
    "classify_crater",
    "decompose",
    "belt_labels",
    "audit",
    "audit_graph",
    "atlas_tally",
    "export_json",
    "export_dot",
    "graph_from_json",
]


class StructureError(RuntimeError):
    """The graph violates a structural law the theory guarantees."""


class CapExceededError(ValueError):
    pass


@dataclass(frozen=True)
class CraterShape:
    """Shape of the level-0 subgraph of a volcano.

    kind is one of point, selfloop, doubleselfloop, edge2, doubleedge2,
    cycle; size is the number of crater vertices (>= 3 only for cycles).
    """

    kind: str
    size: int

    _FIXED = {"point": 1, "selfloop": 1, "doubleselfloop": 1,
              "edge2": 2, "doubleedge2": 2}

    def __post_init__(self):
        if self.kind == "cycle":
            if self.size < 3:
                raise ValueError("cycle craters need size >= 3")
        elif self.kind in self._FIXED:
            if self.size != self._FIXED[self.kind]:
                raise ValueError(f"{self.kind} crater has size {self._FIXED[self.kind]}")
        else:
            raise ValueError(f"unknown crater kind {self.kind!r}")

    @classmethod
    def point(cls):
        return cls("point", 1)

    @classmethod
    def selfloop(cls):
        return cls("selfloop", 1)

    @classmethod
    def doubleselfloop(cls):
        return cls("doubleselfloop", 1)

    @classmethod
    def edge2(cls):
        return cls("edge2", 2)

    @classmethod
    def doubleedge2(cls):
        return cls("doubleedge2", 2)

    @classmethod
    def cycle(cls, n: int):
        return cls("cycle", n)

    @classmethod
    def parse(cls, text: str) -> "CraterShape":
        """Parse the CLI grammar: point|selfloop|doubleselfloop|edge2|
        doubleedge2|cycle:<n>."""
        text = text.strip().lower()
        if text.startswith("cycle:"):
            return cls.cycle(int(text.split(":", 1)[1]))
        if text in cls._FIXED:
            return cls(text, cls._FIXED[text])
        raise ValueError(f"unknown crater spec {text!r}")

    def render(self) -> str:
        return f"cycle:{self.size}" if self.kind == "cycle" else self.kind

    @property
    def split_symbol(self) -> int:
        """The Kronecker symbol (D/ell) this crater shape forces."""
        if self.kind == "point":
            return -1
        if self.kind in ("selfloop", "edge2"):
            return 0
        return 1


@dataclass(frozen=True)
class VolcanoProfile:
    crater: CraterShape
    ell: int
    depth: int
    level_sizes: tuple[int, ...]
    special: int | None = None


@dataclass(frozen=True)
class IsogenyGraph:
    p: int
    ell: int
    vertices: tuple[int, ...]
    supersingular: tuple[int, ...]
    edges: dict[int, tuple[tuple[int, int], ...]]
    traces: dict[int, tuple[int, ...]]

    def multiplicity(self, a: int, b: int) -> int:
        for j2, m in self.edges.get(a, ()):
            if j2 == b:
                return m
        return 0

    def distinct_neighbors(self, j: int) -> tuple[int, ...]:
        return tuple(j2 for j2, _ in self.edges.get(j, ()) if j2 != j)

    def self_multiplicity(self, j: int) -> int:
        return self.multiplicity(j, j)

    def out_multiplicity(self, j: int) -> int:
        return sum(m for _, m in self.edges.get(j, ()))

    @property
    def special_vertices(self) -> tuple[int, ...]:
        out = []
        for j in (0, 1728 % self.p):
            if self.traces.get(j):
                out.append(j)
        return tuple(out)


def build_graph(p: int, ell: int, limits: Limits | None = None) -> IsogenyGraph:
    """Construct the full ordinary ell-isogeny graph over F_p."""
    limits = limits or Limits()
    if not arith.is_prime(p) or p < 5:
        raise ValueError(f"p must be a prime >= 5, got {p}")
    if ell == p:
        raise ValueError("ell must differ from p")
    if ell not in modpoly.SUPPORTED_LEVELS:
        raise modpoly.UnsupportedLevelError(f"level {ell} unsupported")
    if p > limits.graph_cap:
        raise CapExceededError(
            f"p={p} exceeds the graph cap {limits.graph_cap}; raise it explicitly")

    table = curves.trace_table(p)
    ordinary = [j for j in range(p) if table[j] != 0]
    supersingular = tuple(j for j in range(p) if table[j] == 0)

    traces: dict[int, tuple[int, ...]] = {}
    for j in ordinary:
        if j == 0 or j == 1728 % p:
            traces[j] = curves.traces_for_j(j, p).traces
        else:
            traces[j] = (table[j],)

    raw = modpoly.neighbor_table(p, ell, ordinary)
    ss_set = set(supersingular)
    edges: dict[int, tuple[tuple[int, int], ...]] = {}
    for j in ordinary:
        nb = raw[j]
        for j2, _ in nb:
            if j2 in ss_set:
                raise StructureError(
                    f"ordinary vertex {j} has supersingular neighbor {j2}")
        edges[j] = tuple(nb)
    return IsogenyGraph(p, ell, tuple(ordinary), supersingular, edges, traces)


# ---------------------------------------------------------------------------
# components and levels

def _collapsed_adjacency(edges: dict) -> dict[int, list[int]]:
    adj: dict[int, set] = {j: set() for j in edges}
    for j, nb in edges.items():
        for j2, _ in nb:
            if j2 != j:
                adj[j].add(j2)
                adj.setdefault(j2, set()).add(j)
    return {j: sorted(s) for j, s in adj.items()}


def components(g: IsogenyGraph) -> list[tuple[int, ...]]:
    """Connected components of the underlying undirected graph, each a
    sorted vertex tuple, ordered by smallest vertex."""
    return _components_from_edges(g.edges, g.vertices)


def _components_from_edges(edges: dict, vertices) -> list[tuple[int, ...]]:
    adj = _collapsed_adjacency(edges)
    seen: set[int] = set()
    out = []
    for start in vertices:
        if start in seen:
            continue
        stack = [start]
        seen.add(start)
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj.get(v, ()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        out.append(tuple(sorted(comp)))
    out.sort(key=lambda c: c[0])
    return out


def cordillera_data(p: int, ell: int, t: int) -> tuple[int, int, int, int]:
    """(D_K, v, d, v') for the trace-t cordillera: 4p - t^2 = v^2 |D_K|,
    d = v_ell(v), v' = v / ell^d."""
    frob = t * t - 4 * p
    d_k, v = classgroup.fundamental_discriminant(frob)
    d = arith.valuation(v, ell)
    return d_k, v, d, v // ell ** d


def _owning_trace(g: IsogenyGraph, comp) -> int:
    """The cordillera a component counts under.

    Regular members determine it; a component made of a lone special
    vertex is charged to the trace with the deepest ell-structure (ties
    to the smallest trace).
    """
    special = set(g.special_vertices)
    regular = sorted(set(g.traces[j][0] for j in comp if j not in special))
    if regular:
        if len(regular) > 1:
            raise StructureError(f"component mixes traces {regular}")
        return regular[0]
    j = comp[0]
    best = None
    for t in g.traces[j]:
        d = cordillera_data(g.p, g.ell, t)[2]
        key = (-d, t)
        if best is None or key < best[0]:
            best = (key, t)
    return best[1]


def _is_floor(edges: dict, j: int) -> bool:
    # Floor vertices carry no self-loop, have a single distinct neighbor,
    # and reach it with multiplicity 1 (which keeps the special vertices 0
    # and 1728, whose descending edges have multiplicity 3 resp. 2, out).
    nb = edges.get(j, ())
    distinct = {j2 for j2, _ in nb if j2 != j}
    if len(distinct) != 1:
        return False
    if any(j2 == j for j2, _ in nb):
        return False
    return all(m == 1 for j2, m in nb if j2 != j)


def _levels_core(edges: dict, comp, d: int) -> dict[int, int]:
    comp_set = set(comp)
    if d == 0:
        return {j: 0 for j in comp}
    floor = [j for j in comp if _is_floor(edges, j)]
    if not floor:
        raise StructureError(f"depth-{d} component {sorted(comp)[:4]}... has no floor")
    dist = {j: 0 for j in floor}
    frontier = list(floor)
    adj = {j: [j2 for j2, _ in edges.get(j, ()) if j2 != j and j2 in comp_set]
           for j in comp}
    while frontier:
        new = []
        for v in frontier:
            for w in adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    new.append(w)
        frontier = new
    levels = {}
    for j in comp:
        if j not in dist:
            raise StructureError(f"vertex {j} unreachable from the floor")
        lvl = d - dist[j]
        if lvl < 0:
            raise StructureError(f"vertex {j} sits {dist[j]} below depth {d}")
        levels[j] = lvl
    for j in comp:
        for j2 in adj[j]:
            if abs(levels[j] - levels[j2]) > 1:
                raise StructureError(
                    f"edge {j}-{j2} jumps levels {levels[j]}->{levels[j2]}")
    if min(levels.values()) != 0:
        raise StructureError("component has no crater vertex")
    return levels


def assign_levels(g: IsogenyGraph, comp) -> tuple[dict[int, int], int]:
    """Level map and depth of one component.

    The depth is read off arithmetically from the owning trace; the level
    of each vertex is its distance above the floor.
    """
    t = _owning_trace(g, comp)
    d = cordillera_data(g.p, g.ell, t)[2]
    levels = _levels_core(g.edges, comp, d)
    return levels, d


def classify_crater(g: IsogenyGraph, comp, levels: dict[int, int]) -> CraterShape:
    """Shape of the level-0 induced subgraph, with multiplicities."""
    crater = sorted(j for j in comp if levels[j] == 0)
    return _classify_crater_core(g.edges, crater)


def _classify_crater_core(edges: dict, crater: list[int]) -> CraterShape:
    def mult(a, b):
        for j2, m in edges.get(a, ()):
            if j2 == b:
                return m
        return 0

    n = len(crater)
    if n == 1:
        j = crater[0]
        m = mult(j, j)
        if m == 0:
            return CraterShape.point()
        if m == 1:
            return CraterShape.selfloop()
        if m == 2:
            return CraterShape.doubleselfloop()
        raise StructureError(f"crater vertex {j} has self-multiplicity {m}")
    if n == 2:
        a, b = crater
        m = mult(a, b)
        if mult(a, a) or mult(b, b):
            raise StructureError(f"two-vertex crater {crater} carries self-loops")
        if m == 1:
            return CraterShape.edge2()
        if m == 2:
            return CraterShape.doubleedge2()
        raise StructureError(f"crater pair {crater} has multiplicity {m}")
    crater_set = set(crater)
    for j in crater:
        inside = [(j2, m) for j2, m in edges.get(j, ()) if j2 in crater_set]
        if mult(j, j):
            raise StructureError(f"cycle crater vertex {j} has a self-loop")
        nbrs = [j2 for j2, m in inside if j2 != j]
        if len(nbrs) != 2 or any(m != 1 for j2, m in inside if j2 != j):
            raise StructureError(f"crater vertex {j} is not on a simple cycle")
    return CraterShape.cycle(n)


# ---------------------------------------------------------------------------
# decomposition

@dataclass
class ComponentInfo:
    index: int
    vertices: tuple[int, ...]
    trace: int
    depth: int
    levels: dict[int, int]
    crater_vertices: tuple[int, ...]
    crater: CraterShape
    profile: VolcanoProfile
    special: int | None
    belt_conductor: int | None = None
    belt_index: int | None = None

    @property
    def size(self) -> int:
        return len(self.vertices)


@dataclass
class BeltReport:
    index: int                 # belt index m as tabulated: v' / crater conductor
    crater_conductor: int      # prime-to-ell part of the crater conductor
    discriminant: int          # crater order discriminant
    class_number: int
    crater_order: int          # 1 if no invertible prime above ell
    predicted_crater_size: int
    predicted_volcano_count: int
    predicted_component_size: int
    component_ids: tuple[int, ...]
    certified: bool
    shared_special: tuple[int, ...] = ()


@dataclass
class CordilleraReport:
    trace: int
    frobenius_discriminant: int
    field_discriminant: int
    conductor: int
    depth: int
    dry_conductor: int
    belts: list[BeltReport]
    certified: bool
    unresolved: bool = False


@dataclass
class Decomposition:
    graph: IsogenyGraph
    components: list[ComponentInfo]
    component_of: dict[int, int]
    cordilleras: dict[int, CordilleraReport] = field(default_factory=dict)

    def component_of_vertex(self, j: int) -> ComponentInfo:
        return self.components[self.component_of[j]]


def _profile(ell, depth, levels, crater, special) -> VolcanoProfile:
    sizes = [0] * (depth + 1)
    for lvl in levels.values():
        sizes[lvl] += 1
    return VolcanoProfile(crater, ell, depth, tuple(sizes), special)


def decompose(g: IsogenyGraph, with_belts: bool = True,
              limits: Limits | None = None) -> Decomposition:
    """Split the graph into volcanoes with levels, craters and profiles,
    then (optionally) label every cordillera's belts."""
    special = set(g.special_vertices)
    infos: list[ComponentInfo] = []
    component_of: dict[int, int] = {}
    for idx, comp in enumerate(components(g)):
        levels, depth = assign_levels(g, comp)
        crater_vertices = tuple(j for j in comp if levels[j] == 0)
        crater = classify_crater(g, comp, levels)
        t = _owning_trace(g, comp)
        sp = next((j for j in comp if j in special), None)
        info = ComponentInfo(
            index=idx, vertices=comp, trace=t, depth=depth, levels=levels,
            crater_vertices=crater_vertices, crater=crater,
            profile=_profile(g.ell, depth, levels, crater, sp), special=sp)
        infos.append(info)
        for j in comp:
            component_of[j] = idx
    dec = Decomposition(g, infos, component_of)
    if with_belts:
        for t in sorted({t for ts in g.traces.values() for t in ts}):
            dec.cordilleras[t] = belt_labels(g, dec, t, limits=limits)
    return dec


# ---------------------------------------------------------------------------
# belts

def _q_levels(g: IsogenyGraph, vertex_set: set, q: int, d_q: int,
              t: int) -> dict[int, int]:
    """v_q of the conductor for every cordillera vertex, read off the
    q-isogeny graph restricted to the cordillera."""
    edges = {}
    for j in sorted(vertex_set):
        nb = [(j2, m) for j2, m in modpoly.neighbors(j, g.p, q)
              if j2 in vertex_set]
        edges[j] = tuple(nb)
    levels = {}
    for comp in _components_from_edges(edges, sorted(vertex_set)):
        lv = _levels_core(edges, comp, d_q)
        levels.update(lv)
    return levels


def belt_labels(g: IsogenyGraph, dec: Decomposition, t: int,
                limits: Limits | None = None) -> CordilleraReport:
    """Assign a belt to every component of the trace-t cordillera.

    The certified path computes the prime-to-ell conductor of every
    vertex by levelling the q-isogeny graphs for the primes q dividing
    the dry conductor; if some q is outside the supported modular
    polynomial range the belts are matched by predicted shape counts
    instead and the report is flagged as not certified.
    """
    p, ell = g.p, g.ell
    d_k, v, d, vp = cordillera_data(p, ell, t)
    vertex_set = {j for j in g.vertices if t in g.traces[j]}
    special_here = set(g.special_vertices) & vertex_set

    owned = [c for c in dec.components if c.trace == t]
    report = CordilleraReport(
        trace=t, frobenius_discriminant=t * t - 4 * p, field_discriminant=d_k,
        conductor=v, depth=d, dry_conductor=vp, belts=[], certified=True)

    divisors = arith.divisors(vp)
    qs = [q for q, _ in _grouped_primes(vp)]
    certified = all(q in modpoly.SUPPORTED_LEVELS for q in qs)

    conductor_of: dict[int, int] = {}
    if certified:
        qlevel: dict[int, dict[int, int]] = {j: {} for j in vertex_set}
        for q in qs:
            d_q = arith.valuation(v, q)
            levels = _q_levels(g, vertex_set, q, d_q, t)
            for j, lv in levels.items():
                qlevel[j][q] = lv
        for j in vertex_set:
            if j in special_here:
                conductor_of[j] = 1
                continue
            m = 1
            for q in qs:
                m *= q ** qlevel[j][q]
            conductor_of[j] = m
        for comp in owned:
            vals = {conductor_of[j] for j in comp.vertices if j in conductor_of}
            if len(vals) != 1:
                raise StructureError(
                    f"component {comp.index} spans several belts: {sorted(vals)}")
            comp.belt_conductor = vals.pop()
            comp.belt_index = vp // comp.belt_conductor

    predictions = {}
    geo = (ell ** d - 1) // (ell - 1)
    for mt in divisors:
        disc = mt * mt * d_k
        h = classgroup.class_number(disc)
        form = classgroup.prime_form(disc, ell)
        order = 1 if form in (None, classgroup.NON_INVERTIBLE) \
            else classgroup.order_of_class(form)
        chi = classgroup.kronecker_symbol_disc(disc, ell)
        csize = 1 if form is None else (
            order if chi == 1 else (1 if order == 1 else 2))
        units = classgroup.unit_count(disc)
        size = csize + Fraction(2 * csize, units) * (ell - chi) * geo
        assert size.denominator == 1
        count, rem = divmod(h, csize)
        assert rem == 0, f"crater size {csize} does not divide h={h} (D={disc})"
        predictions[mt] = (disc, h, order, csize, count, int(size))

    if not certified:
        _match_belts_by_shape(owned, predictions, vp, report)

    for mt in divisors:
        disc, h, order, csize, count, size = predictions[mt]
        ids = tuple(c.index for c in owned if c.belt_conductor == mt)
        shared = tuple(j for j in special_here
                       if mt == 1 and dec.component_of_vertex(j).trace != t)
        report.belts.append(BeltReport(
            index=vp // mt, crater_conductor=mt, discriminant=disc,
            class_number=h, crater_order=order, predicted_crater_size=csize,
            predicted_volcano_count=count, predicted_component_size=size,
            component_ids=ids, certified=certified,
            shared_special=shared))
    report.belts.sort(key=lambda b: b.index)
    report.certified = certified
    report.unresolved = any(c.belt_conductor is None for c in owned)
    return report


def _match_belts_by_shape(owned, predictions, vp, report):
    """Count-matched fallback: assign belts when the predicted
    (component size, crater size, count) signature is unambiguous."""
    groups: dict[tuple[int, int], list] = {}
    for c in owned:
        groups.setdefault((c.size, c.crater.size), []).append(c)
    for key, comps in groups.items():
        candidates = [mt for mt, (_, h, _, csize, count, size) in predictions.items()
                      if (size, csize) == key and count == len(comps)]
        if len(candidates) == 1:
            for c in comps:
                c.belt_conductor = candidates[0]
                c.belt_index = vp // candidates[0]


def _grouped_primes(n: int) -> list[tuple[int, int]]:
    out = []
    for p in arith.factorize(n):
        if out and out[-1][0] == p:
            out[-1] = (p, out[-1][1] + 1)
        else:
            out.append((p, 1))
    return out


# ---------------------------------------------------------------------------
# audits and the atlas tally

@dataclass
class AuditCheck:
    name: str
    passed: bool
    detail: str


@dataclass
class AuditReport:
    p: int
    ell: int
    checks: list[AuditCheck]
    hurwitz_sum: Fraction
    tally: "AtlasTally"

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


@dataclass
class AtlasTally:
    supersingular: int
    zero_family: int
    family_1728: int
    solo: int
    duo: int
    x_shaped: int
    larger: int

    @property
    def total(self) -> int:
        return (self.supersingular + self.zero_family + self.family_1728
                + self.solo + self.duo + self.x_shaped + self.larger)

    def parts(self) -> tuple[int, ...]:
        return (self.supersingular, self.zero_family, self.family_1728,
                self.solo, self.duo, self.x_shaped, self.larger)


def atlas_tally(g: IsogenyGraph, dec: Decomposition) -> AtlasTally:
    """The grand partition of F_p: supersingular vertices, the families of
    0 and 1728, then regular components by shape class."""
    zero_family = family_1728 = solo = duo = x_shaped = larger = 0
    for comp in dec.components:
        d_k = cordillera_data(g.p, g.ell, comp.trace)[0]
        if d_k == -3:
            zero_family += comp.size
        elif d_k == -4:
            family_1728 += comp.size
        elif comp.size == 1:
            solo += 1
        elif comp.size == 2:
            duo += 2
        elif comp.crater.kind == "point" and comp.depth == 1:
            x_shaped += comp.size
        else:
            larger += comp.size
    return AtlasTally(len(g.supersingular), zero_family, family_1728,
                      solo, duo, x_shaped, larger)


def audit_graph(g: IsogenyGraph, dec: Decomposition) -> AuditReport:
    """Run every counting law against the built graph.

    Violations are reported as failed checks, never exceptions.
    """
    p, ell = g.p, g.ell
    checks: list[AuditCheck] = []

    expected = math.isqrt(4 * p)
    seen_traces = sorted({t for ts in g.traces.values() for t in ts})
    checks.append(AuditCheck(
        "cordillera-count",
        len(seen_traces) == expected,
        f"{len(seen_traces)} distinct traces, floor(2*sqrt(p)) = {expected}"))

    sizes_ok = True
    detail = []
    for comp in dec.components:
        c = comp.crater.size
        chi = comp.crater.split_symbol
        units = 2
        if comp.special is not None and comp.special in comp.crater_vertices:
            units = 6 if comp.special == 0 else 4
        geo = (ell ** comp.depth - 1) // (ell - 1)
        predicted = c + Fraction(2 * c, units) * (ell - chi) * geo
        if predicted != comp.size:
            sizes_ok = False
            detail.append(f"component {comp.index}: size {comp.size} != {predicted}")
    checks.append(AuditCheck(
        "component-size-formula", sizes_ok,
        "; ".join(detail) if detail else f"{len(dec.components)} components verified"))

    total = sum(c.size for c in dec.components) + len(g.supersingular)
    checks.append(AuditCheck(
        "vertex-partition", total == p,
        f"sum of components + supersingular = {total}, p = {p}"))

    belts_ok = True
    craters_ok = True
    belt_details = []
    crater_details = []
    for t, rep in dec.cordilleras.items():
        for belt in rep.belts:
            comps = [dec.components[i] for i in belt.component_ids]
            if not comps:
                # the belt of a shared special vertex is audited by its owner
                if belt.certified and not belt.shared_special:
                    belts_ok = False
                    belt_details.append(f"t={t} belt {belt.index}: no volcanoes")
                continue
            observed_crater = {c.crater.size for c in comps}
            if len(observed_crater) != 1:
                belts_ok = False
                belt_details.append(
                    f"t={t} belt {belt.index}: mixed crater sizes {observed_crater}")
                continue
            csize = observed_crater.pop()
            if len(comps) * csize != belt.class_number:
                belts_ok = False
                belt_details.append(
                    f"t={t} belt {belt.index}: {len(comps)} volcanoes x {csize} != "
                    f"h = {belt.class_number}")
            if csize != belt.predicted_crater_size:
                craters_ok = False
                crater_details.append(
                    f"t={t} belt {belt.index}: crater {csize} != "
                    f"class-group order {belt.predicted_crater_size}")
    checks.append(AuditCheck(
        "belt-volcano-count", belts_ok,
        "; ".join(belt_details) if belt_details else "all belts consistent"))
    checks.append(AuditCheck(
        "crater-order", craters_ok,
        "; ".join(crater_details) if crater_details else
        "crater sizes match class-group orders"))

    hurwitz = Fraction(0)
    for t in range(1, expected + 1):
        hurwitz += classgroup.hurwitz_class_number(t * t - 4 * p)
    return AuditReport(p, ell, checks, hurwitz, atlas_tally(g, dec))


def audit(p: int, ell: int, limits: Limits | None = None) -> AuditReport:
    g = build_graph(p, ell, limits)
    dec = decompose(g, with_belts=True, limits=limits)
    return audit_graph(g, dec)


# ---------------------------------------------------------------------------
# export

def export_json(g: IsogenyGraph, dec: Decomposition | None = None,
                audits: AuditReport | None = None,
                meta: dict | None = None) -> str:
    """Single JSON document with the full directed multiplicity data plus
    decomposition annotations."""
    doc: dict = {}
    if meta:
        doc["meta"] = meta
    doc["p"] = g.p
    doc["ell"] = g.ell
    doc["supersingular"] = list(g.supersingular)
    vertices = []
    for j in g.vertices:
        entry: dict = {"j": j}
        if dec is not None:
            comp = dec.component_of_vertex(j)
            entry["trace"] = comp.trace if len(g.traces[j]) > 1 else g.traces[j][0]
            entry["level"] = comp.levels[j]
            entry["component"] = comp.index
            entry["belt_m"] = comp.belt_index
            entry["cordillera_t"] = comp.trace
        else:
            entry["trace"] = g.traces[j][0]
            entry["level"] = None
            entry["component"] = None
            entry["belt_m"] = None
            entry["cordillera_t"] = None
        vertices.append(entry)
    doc["vertices"] = vertices
    edge_list = []
    for j in g.vertices:
        for j2, m in g.edges[j]:
            edge_list.append({"from": j, "to": j2, "mult": m})
    doc["edges"] = edge_list
    if audits is not None:
        doc["audits"] = [
            {"name": c.name, "passed": c.passed, "detail": c.detail}
            for c in audits.checks
        ]
    return json.dumps(doc, indent=2) + "\n"


def graph_from_json(text: str) -> IsogenyGraph:
    """Rebuild an IsogenyGraph from its JSON export."""
    doc = json.loads(text)
    p, ell = doc["p"], doc["ell"]
    vertices = tuple(v["j"] for v in doc["vertices"])
    edges: dict[int, list[tuple[int, int]]] = {j: [] for j in vertices}
    for e in doc["edges"]:
        edges[e["from"]].append((e["to"], e["mult"]))
    traces = {}
    for v in doc["vertices"]:
        j = v["j"]
        if j == 0 or j == 1728 % p:
            traces[j] = curves.traces_for_j(j, p).traces
        else:
            traces[j] = (v["trace"],)
    return IsogenyGraph(p, ell, vertices, tuple(doc["supersingular"]),
                        {j: tuple(nb) for j, nb in edges.items()}, traces)


def export_dot(g: IsogenyGraph, dec: Decomposition | None = None,
               meta: str | None = None) -> str:
    """Graphviz output: one undirected edge per dual pair between regular
    vertices, explicit directed multi-edges at special vertices and
    self-loops, one cluster per component."""
    dec = dec or decompose(g, with_belts=False)
    special = set(g.special_vertices)
    lines = [f"digraph isogeny_{g.ell}_{g.p} {{"]
    if meta:
        lines.append(f"  // {meta}")
    for comp in dec.components:
        lines.append(f"  subgraph cluster_{comp.index} {{")
        lines.append(f'    label="t={comp.trace} d={comp.depth} '
                     f'{comp.crater.render()}";')
        for j in comp.vertices:
            lines.append(f"    {j};")
        for j in comp.vertices:
            for j2, m in g.edges[j]:
                if j2 == j:
                    for _ in range(m):
                        lines.append(f"    {j} -> {j};")
                elif j in special or j2 in special:
                    for _ in range(m):
                        lines.append(f"    {j} -> {j2};")
                elif j < j2:
                    for _ in range(m):
                        lines.append(f"    {j} -> {j2} [dir=none];")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
