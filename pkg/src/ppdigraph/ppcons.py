"""Primitive positive formulas, pp powers, and explicit constructions.

A pp power of dimension d over a base digraph H lives on V(H)^d: a formula
with two d-blocks of free variables (x for the tail, y for the head) decides
which tuple pairs form edges.  Atoms are edges, equalities, vertex constants,
and the always-false atom; existential variables are resolved by the same
propagation/backtracking kernel the homomorphism search uses.

The construction helpers return the formula, the evaluated power, and
solver-checked certificates that the power is homomorphically equivalent to
its intended target (the single-edge digraph, a directed path, or the
three-element transitive tournament built from a rectangularity failure).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import _kernel
from .digraph import (
    DEFAULT_VERTEX_BUDGET,
    Digraph,
    index_tuple,
    path,
    transitive_tournament,
    tuple_index,
)
from .errors import (
    BudgetExceeded,
    BudgetExhausted,
    ConstantOutOfRange,
    InternalInconsistency,
    IsTotallyRectangular,
    NotACore,
    ParseError,
    SizeTooSmall,
    TooFewVertices,
)
from .homsearch import EquivalenceResult, Hom, SearchBudget, core_of, hom_equivalent, is_core
from .rect import RectWitness, is_totally_rectangular

X_BLOCK = "x"
Y_BLOCK = "y"
EXISTENTIAL = "e"

DEFAULT_PATH_CAP = 16


@dataclass(frozen=True)
class Term:
    kind: str  # one of X_BLOCK, Y_BLOCK, EXISTENTIAL
    index: int

    def __post_init__(self):
        if self.kind not in (X_BLOCK, Y_BLOCK, EXISTENTIAL):
            raise ValueError(f"bad term kind {self.kind!r}")
        if self.index < 0:
            raise ValueError("term index must be >= 0")


def X(i: int) -> Term:
    return Term(X_BLOCK, i)


def Y(i: int) -> Term:
    return Term(Y_BLOCK, i)


def EV(j: int) -> Term:
    return Term(EXISTENTIAL, j)


@dataclass(frozen=True)
class Atom:
    kind: str  # "edge" | "eq" | "const" | "false"
    t1: Term | None = None
    t2: Term | None = None
    const: int | None = None


def edge_atom(t1: Term, t2: Term) -> Atom:
    return Atom("edge", t1, t2)


def eq_atom(t1: Term, t2: Term) -> Atom:
    return Atom("eq", t1, t2)


def const_atom(t: Term, c: int) -> Atom:
    return Atom("const", t, None, c)


FALSE_ATOM = Atom("false")


@dataclass(frozen=True)
class PpFormula:
    """Conjunction of atoms over x/y blocks of size `dimension` plus
    `existential_count` quantified variables."""

    dimension: int
    existential_count: int
    atoms: tuple[Atom, ...]

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        if self.existential_count < 0:
            raise ValueError("existential count must be >= 0")
        for atom in self.atoms:
            if atom.kind in ("edge", "eq"):
                if atom.t1 is None or atom.t2 is None:
                    raise ValueError(f"{atom.kind} atom needs two terms")
                self._check_term(atom.t1)
                self._check_term(atom.t2)
            elif atom.kind == "const":
                if atom.t1 is None or atom.const is None or atom.const < 0:
                    raise ValueError("const atom needs a term and a vertex")
                self._check_term(atom.t1)
            elif atom.kind != "false":
                raise ValueError(f"unknown atom kind {atom.kind!r}")

    def _check_term(self, t: Term) -> None:
        bound = self.existential_count if t.kind == EXISTENTIAL else self.dimension
        if t.index >= bound:
            raise ValueError(f"term {t} out of range")

    @property
    def has_false(self) -> bool:
        return any(a.kind == "false" for a in self.atoms)

    def constants(self) -> set[int]:
        return {a.const for a in self.atoms if a.kind == "const"}


@dataclass(frozen=True, eq=False)
class PpPowerResult:
    graph: Digraph
    base: Digraph
    formula: PpFormula
    # constants in pp constructions are only justified over core bases
    non_core_constant_warning: bool = False


def _slot(formula: PpFormula, t: Term) -> int:
    d = formula.dimension
    if t.kind == X_BLOCK:
        return t.index
    if t.kind == Y_BLOCK:
        return d + t.index
    return 2 * d + t.index


class _CompiledFormula:
    """Formula lowered to a CSP template over merged variable classes."""

    def __init__(self, formula: PpFormula, h: Digraph):
        for c in formula.constants():
            if not (0 <= c < h.n):
                raise ConstantOutOfRange(f"constant {c} outside [0,{h.n})")
        d = formula.dimension
        total = 2 * d + formula.existential_count
        parent = list(range(total))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        if not formula.has_false:
            for atom in formula.atoms:
                if atom.kind == "eq":
                    a, b = find(_slot(formula, atom.t1)), find(_slot(formula, atom.t2))
                    if a != b:
                        parent[max(a, b)] = min(a, b)
        roots = sorted({find(s) for s in range(total)})
        cls_id = {r: i for i, r in enumerate(roots)}
        self.cls = [cls_id[find(s)] for s in range(total)]
        self.num_classes = len(roots)
        self.formula = formula
        self.h = h

        full = (1 << h.n) - 1
        self.template = [full] * self.num_classes
        self.always_false = formula.has_false
        cons_edges = set()
        if not self.always_false:
            for atom in formula.atoms:
                if atom.kind == "const":
                    c = self.cls[_slot(formula, atom.t1)]
                    self.template[c] &= 1 << atom.const
                    if self.template[c] == 0:
                        self.always_false = True
                elif atom.kind == "edge":
                    cons_edges.add(
                        (self.cls[_slot(formula, atom.t1)], self.cls[_slot(formula, atom.t2)])
                    )
        self.constraint_graph = Digraph(max(self.num_classes, 1), sorted(cons_edges))

    def holds(self, u_tuple, v_tuple, node_limit: int) -> bool:
        if self.always_false:
            return False
        if self.formula.existential_count == 0:
            return self._eval_direct(u_tuple, v_tuple)
        domains = list(self.template)
        d = self.formula.dimension
        for i, val in enumerate(u_tuple):
            c = self.cls[i]
            domains[c] &= 1 << val
            if domains[c] == 0:
                return False
        for i, val in enumerate(v_tuple):
            c = self.cls[d + i]
            domains[c] &= 1 << val
            if domains[c] == 0:
                return False
        status, _, _ = _kernel.solve_hom(self.constraint_graph, self.h, domains, node_limit)
        if status == _kernel.HOM_BUDGET:
            raise BudgetExhausted(node_limit)
        return status == _kernel.HOM_FOUND

    def _eval_direct(self, u_tuple, v_tuple) -> bool:
        # quantifier-free: every term is decided by the argument tuples
        def val(t: Term) -> int:
            return u_tuple[t.index] if t.kind == X_BLOCK else v_tuple[t.index]

        for atom in self.formula.atoms:
            if atom.kind == "eq":
                if val(atom.t1) != val(atom.t2):
                    return False
            elif atom.kind == "edge":
                if not self.h.has_edge(val(atom.t1), val(atom.t2)):
                    return False
            elif atom.kind == "const":
                if val(atom.t1) != atom.const:
                    return False
        return True


def pp_power(
    h: Digraph,
    formula: PpFormula,
    vertex_budget: int | None = None,
    budget: SearchBudget | None = None,
) -> PpPowerResult:
    """Evaluate the pp power of h under the formula.

    Vertices are d-tuples in mixed-radix order; the edge relation is decided
    pairwise by the compiled formula.
    """
    budget_v = DEFAULT_VERTEX_BUDGET if vertex_budget is None else vertex_budget
    size = h.n**formula.dimension
    if size > budget_v:
        raise BudgetExceeded(size, budget_v)
    node_limit = (budget or SearchBudget()).node_limit
    compiled = _CompiledFormula(formula, h)
    d = formula.dimension
    tuples = [index_tuple(i, h.n, d) for i in range(size)]
    edges = []
    for ui, ut in enumerate(tuples):
        for vi, vt in enumerate(tuples):
            if compiled.holds(ut, vt, node_limit):
                edges.append((ui, vi))
    warning = bool(formula.constants()) and not is_core(h, budget)
    return PpPowerResult(
        graph=Digraph(size, edges), base=h, formula=formula, non_core_constant_warning=warning
    )


@dataclass(frozen=True, eq=False)
class VerifyOutcome:
    ok: bool
    power: Digraph
    equivalence: EquivalenceResult

    def __bool__(self) -> bool:
        return self.ok


def verify_construction(
    h: Digraph,
    formula: PpFormula,
    target: Digraph,
    vertex_budget: int | None = None,
    budget: SearchBudget | None = None,
) -> VerifyOutcome:
    """Evaluate the power and certify homomorphic equivalence with target."""
    power = pp_power(h, formula, vertex_budget=vertex_budget, budget=budget).graph
    eq = hom_equivalent(power, target, budget=budget)
    return VerifyOutcome(ok=eq.equivalent, power=power, equivalence=eq)


@dataclass(frozen=True, eq=False)
class Construction:
    """A formula, its evaluated power, and certificates against the target."""

    formula: PpFormula
    power: Digraph
    target: Digraph
    equivalence: EquivalenceResult
    witness_path: tuple[int, ...] | None = None
    embedding: tuple[int, int, int] | None = None
    rect_witness: RectWitness | None = None


def construct_p2_from(g: Digraph, budget: SearchBudget | None = None) -> Construction:
    """One-dimensional power of a core with a single non-loop edge, pinned to
    the two lowest vertices; homomorphically equivalent to the single edge."""
    if g.n < 2:
        raise TooFewVertices("need at least two vertices")
    if not is_core(g, budget):
        raise NotACore("construction requires a core digraph")
    formula = PpFormula(1, 0, (const_atom(X(0), 0), const_atom(Y(0), 1)))
    result = pp_power(g, formula, budget=budget)
    target = path(2)
    eq = hom_equivalent(result.graph, target, budget=budget)
    if not eq:
        raise InternalInconsistency("pinned-edge power is not equivalent to the single edge")
    return Construction(formula=formula, power=result.graph, target=target, equivalence=eq)


def construct_path_formula(
    k: int,
    max_k: int = DEFAULT_PATH_CAP,
    budget: SearchBudget | None = None,
) -> Construction:
    """Build the k-vertex directed path as a pp power of the single edge.

    Dimension k-1 over the base 0->1: shift equalities x_i = y_{i+1} plus one
    edge atom E(x_{k-1}, y_1) (1-based); the power has 2^(k-1) vertices, and
    filling 1s from the front walks a k-vertex path through it.
    """
    if k < 1:
        raise SizeTooSmall("path construction needs k >= 1")
    if k > max_k:
        raise BudgetExceeded(2 ** (k - 1), 2 ** (max_k - 1), "power vertices")
    p2 = path(2)
    if k == 1:
        formula = PpFormula(1, 0, (FALSE_ATOM,))
    elif k == 2:
        formula = PpFormula(1, 0, (edge_atom(X(0), Y(0)),))
    else:
        d = k - 1
        atoms = [eq_atom(X(i), Y(i + 1)) for i in range(k - 2)]
        atoms.append(edge_atom(X(d - 1), Y(0)))
        formula = PpFormula(d, 0, tuple(atoms))
    result = pp_power(p2, formula, budget=budget)
    target = path(k)
    eq = hom_equivalent(result.graph, target, budget=budget)
    if not eq:
        raise InternalInconsistency("path power is not equivalent to its path")
    d = formula.dimension
    witness = []
    for ones in range(k):
        tup = tuple(1 if i < ones else 0 for i in range(d))
        witness.append(tuple_index(tup, 2))
    for a, b in zip(witness, witness[1:]):
        if not result.graph.has_edge(a, b):
            raise InternalInconsistency("expected witness path edge missing")
    return Construction(
        formula=formula,
        power=result.graph,
        target=target,
        equivalence=eq,
        witness_path=tuple(witness),
    )


def _chain_atoms(k: int, start: Term, end: Term) -> tuple[list[Atom], int]:
    """Atoms asserting a length-k walk from start to end; returns the number
    of existential chain variables used (k-1 for k >= 2)."""
    if k == 1:
        return [edge_atom(start, end)], 0
    atoms = [edge_atom(start, EV(0))]
    for j in range(k - 2):
        atoms.append(edge_atom(EV(j), EV(j + 1)))
    atoms.append(edge_atom(EV(k - 2), end))
    return atoms, k - 1


def construct_t3_from(
    g: Digraph,
    budget: SearchBudget | None = None,
    vertex_budget: int | None = None,
) -> Construction:
    """Build the transitive tournament on three vertices as a two-dimensional
    pp power of the core of g, from a rectangularity failure.

    With witness walks of length k among a,b,c,d, the formula is
    x_1 ->k y_2 & x_2 = d & y_1 = a; the triple (c,d), (a,d), (a,b) embeds
    the tournament and sorting vertices by having out-/in-edges maps the
    power back onto it.
    """
    core, _ = core_of(g, budget=budget)
    w = is_totally_rectangular(core)
    if w is None:
        raise IsTotallyRectangular("core admits no rectangularity failure")
    chain, evars = _chain_atoms(w.k, X(0), Y(1))
    atoms = chain + [const_atom(X(1), w.d), const_atom(Y(0), w.a)]
    formula = PpFormula(2, evars, tuple(atoms))
    result = pp_power(core, formula, vertex_budget=vertex_budget, budget=budget)
    power = result.graph
    n = core.n
    v0 = tuple_index((w.c, w.d), n)
    v1 = tuple_index((w.a, w.d), n)
    v2 = tuple_index((w.a, w.b), n)
    trio = (v0, v1, v2)
    if len(set(trio)) != 3:
        raise InternalInconsistency("embedding vertices are not distinct")
    t3 = transitive_tournament(3)
    for i in range(3):
        for j in range(3):
            expected = t3.has_edge(i, j)
            if power.has_edge(trio[i], trio[j]) != expected:
                raise InternalInconsistency("tournament does not embed as expected")
    embedding_hom = Hom(t3, power, trio)

    has_out = [False] * power.n
    has_in = [False] * power.n
    for u, v in power.edges:
        has_out[u] = True
        has_in[v] = True
    quotient = []
    for v in range(power.n):
        if has_out[v] and not has_in[v]:
            quotient.append(0)
        elif has_in[v] and not has_out[v]:
            quotient.append(2)
        else:  # both, or isolated
            quotient.append(1)
    try:
        quotient_hom = Hom(power, t3, tuple(quotient))  # certified edge-preserving
    except ValueError as exc:
        raise InternalInconsistency(f"in/out partition map is not a homomorphism: {exc}") from None

    eq = EquivalenceResult(True, forward=quotient_hom, backward=embedding_hom)
    return Construction(
        formula=formula,
        power=power,
        target=t3,
        equivalence=eq,
        embedding=trio,
        rect_witness=w,
    )


# ---------------------------------------------------------------------------
# surface syntax


def format_formula(formula: PpFormula) -> str:
    parts = [f"d={formula.dimension}"]
    if formula.existential_count:
        parts.append(f"exists {formula.existential_count}")
    if formula.atoms:
        parts.append(" & ".join(_atom_str(a) for a in formula.atoms))
    else:
        parts.append("true")
    return "; ".join(parts)


def _term_str(t: Term) -> str:
    if t.kind == EXISTENTIAL:
        return f"e{t.index}"
    return f"{t.kind}{t.index + 1}"


def _atom_str(a: Atom) -> str:
    if a.kind == "false":
        return "false"
    if a.kind == "edge":
        return f"E({_term_str(a.t1)},{_term_str(a.t2)})"
    if a.kind == "eq":
        return f"{_term_str(a.t1)}={_term_str(a.t2)}"
    return f"{_term_str(a.t1)}=c{a.const}"


def parse_formula(text: str) -> PpFormula:
    """Parse the CLI formula syntax, e.g.
    `d=2; exists 1; E(x1,e0) & E(e0,y2) & x2=c3 & y1=c0`."""
    segments = [s.strip() for s in text.split(";")]
    segments = [s for s in segments if s]
    if not segments or not segments[0].replace(" ", "").startswith("d="):
        raise ParseError("formula must start with 'd=<dimension>'")
    try:
        dimension = int(segments[0].split("=", 1)[1].strip())
    except ValueError:
        raise ParseError("bad dimension") from None
    pos = 1
    existentials = 0
    if pos < len(segments) and segments[pos].startswith("exists"):
        try:
            existentials = int(segments[pos][len("exists") :].strip())
        except ValueError:
            raise ParseError("bad existential count") from None
        pos += 1
    atoms: list[Atom] = []
    for seg in segments[pos:]:
        for chunk in seg.split("&"):
            chunk = chunk.strip()
            if not chunk:
                raise ParseError("empty conjunct")
            if chunk == "false":
                atoms.append(FALSE_ATOM)
                continue
            if chunk == "true":
                continue
            if chunk.startswith("E(") and chunk.endswith(")"):
                inner = chunk[2:-1]
                pieces = [p.strip() for p in inner.split(",")]
                if len(pieces) != 2:
                    raise ParseError(f"edge atom needs two terms: {chunk!r}")
                atoms.append(edge_atom(_parse_term(pieces[0]), _parse_term(pieces[1])))
                continue
            if "=" in chunk:
                left, right = (p.strip() for p in chunk.split("=", 1))
                lc = left.startswith("c") and left[1:].isdigit()
                rc = right.startswith("c") and right[1:].isdigit()
                if lc and rc:
                    raise ParseError(f"cannot equate two constants: {chunk!r}")
                if rc:
                    atoms.append(const_atom(_parse_term(left), int(right[1:])))
                elif lc:
                    atoms.append(const_atom(_parse_term(right), int(left[1:])))
                else:
                    atoms.append(eq_atom(_parse_term(left), _parse_term(right)))
                continue
            raise ParseError(f"cannot parse conjunct {chunk!r}")
    try:
        return PpFormula(dimension, existentials, tuple(atoms))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _parse_term(text: str) -> Term:
    m = text.strip()
    if len(m) >= 2 and m[0] in "xye" and m[1:].isdigit():
        idx = int(m[1:])
        if m[0] == "e":
            return EV(idx)
        if idx < 1:
            raise ParseError(f"{m[0]}-block terms are 1-based: {text!r}")
        return Term(m[0], idx - 1)
    raise ParseError(f"cannot parse term {text!r}")
