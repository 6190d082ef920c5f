"""Minor conditions and their satisfaction by polymorphism clones.

A minor condition is a finite set of formal equations between minors of
function symbols: a minor of a k-ary symbol f under a map sigma from
argument positions {1..k} to variable slots {1..m} is the m-ary operation
(x_1,..,x_m) -> f(x_sigma(1),..,x_sigma(k)).  Whether the polymorphisms of a
digraph H satisfy such a condition is decided by the indicator construction:

  * one vertex per equivalence class of (symbol f, tuple in V(H)^arity(f)),
    where every instantiation of every equation glues the two tuples it
    forces equal (a union-find closure over the whole tuple space);
  * an edge between classes when some representative pair is an edge of the
    corresponding direct power, i.e. an edge of H in every coordinate.

Pol(H) satisfies the condition iff the indicator digraph maps
homomorphically to H, and any such homomorphism, read back tuple-wise, is a
concrete family of satisfying polymorphisms.  brute_force_satisfies decides
the same question by direct search over operation tables and exists so the
two routes can be played against each other in tests.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product
from types import MappingProxyType

import numpy as np

from . import _kernel
from .digraph import DEFAULT_VERTEX_BUDGET, Digraph, tuple_index
from .errors import (
    ArityMismatch,
    BudgetExceeded,
    InternalInconsistency,
    ParseError,
    UnknownBuiltin,
)
from .homsearch import SearchBudget, find_hom

_CHUNK = 1 << 19


@dataclass(frozen=True)
class MinorMap:
    """A function {1..from_arity} -> {1..to_arity}, stored 1-based."""

    from_arity: int
    to_arity: int
    table: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(self.table))
        if self.from_arity < 1 or self.to_arity < 1:
            raise ValueError("arities must be positive")
        if len(self.table) != self.from_arity:
            raise ValueError("table length must equal from_arity")
        for entry in self.table:
            if not (1 <= entry <= self.to_arity):
                raise ValueError(f"table entry {entry} outside [1,{self.to_arity}]")


Equation = tuple[tuple[str, MinorMap], tuple[str, MinorMap]]


@dataclass(frozen=True)
class MinorCondition:
    """Function symbols with arities plus minor-identity equations."""

    symbols: tuple[tuple[str, int], ...]
    equations: tuple[Equation, ...]

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple((str(n), int(a)) for n, a in self.symbols))
        object.__setattr__(
            self,
            "equations",
            tuple(((ln, lm), (rn, rm)) for (ln, lm), (rn, rm) in self.equations),
        )
        arities = dict(self.symbols)
        if len(arities) != len(self.symbols):
            raise ValueError("duplicate symbol declaration")
        for (ln, lm), (rn, rm) in self.equations:
            if ln not in arities or rn not in arities:
                raise ValueError("equation uses an undeclared symbol")
            if lm.from_arity != arities[ln] or rm.from_arity != arities[rn]:
                raise ArityMismatch("minor map arity differs from symbol arity")
            if lm.to_arity != rm.to_arity:
                raise ArityMismatch("both sides of an equation need the same variable count")

    @property
    def arity_of(self):
        return dict(self.symbols)

    @property
    def max_arity(self) -> int:
        return max(a for _, a in self.symbols)


def cyclic(p: int) -> MinorCondition:
    """f(x_1,..,x_p) = f(x_2,..,x_p,x_1); requires p >= 2."""
    if p < 2:
        raise UnknownBuiltin("cyclic condition needs p >= 2")
    ident = MinorMap(p, p, tuple(range(1, p + 1)))
    rot = MinorMap(p, p, tuple(list(range(2, p + 1)) + [1]))
    return MinorCondition((("f", p),), ((("f", ident), ("f", rot)),))


def maltsev() -> MinorCondition:
    """f(y,y,x) = f(x,x,x) = f(x,y,y), without forcing idempotence."""
    s = MinorMap(3, 2, (2, 2, 1))
    t = MinorMap(3, 2, (1, 1, 1))
    r = MinorMap(3, 2, (1, 2, 2))
    return MinorCondition((("f", 3),), ((("f", s), ("f", t)), (("f", t), ("f", r))))


def constant() -> MinorCondition:
    """f(x) = f(y): satisfied exactly when a constant polymorphism exists."""
    one = MinorMap(1, 2, (1,))
    two = MinorMap(1, 2, (2,))
    return MinorCondition((("f", 1),), ((("f", one), ("f", two)),))


def fourfold() -> MinorCondition:
    """f(x,x,y) = f(y,y,x) = f(x,y,y) = f(y,x,x)."""
    a = MinorMap(3, 2, (1, 1, 2))
    b = MinorMap(3, 2, (2, 2, 1))
    c = MinorMap(3, 2, (1, 2, 2))
    d = MinorMap(3, 2, (2, 1, 1))
    return MinorCondition(
        (("f", 3),),
        ((("f", a), ("f", b)), (("f", b), ("f", c)), (("f", c), ("f", d))),
    )


_BUILTIN_RE = re.compile(r"^(?P<name>[a-z_]+)\s*(?:[:(]\s*(?P<arg>\d+)\s*\)?)?$")


def builtin(name: str) -> MinorCondition:
    """Look up a builtin condition: cyclic:p (or cyclic(p)), maltsev,
    constant, fourfold."""
    m = _BUILTIN_RE.match(name.strip())
    if not m:
        raise UnknownBuiltin(f"cannot parse builtin name {name!r}")
    kind, arg = m.group("name"), m.group("arg")
    if kind == "cyclic":
        if arg is None:
            raise UnknownBuiltin("cyclic needs a parameter, e.g. cyclic:3")
        return cyclic(int(arg))
    if arg is not None:
        raise UnknownBuiltin(f"builtin {kind!r} takes no parameter")
    if kind == "maltsev":
        return maltsev()
    if kind == "constant":
        return constant()
    if kind == "fourfold":
        return fourfold()
    raise UnknownBuiltin(f"no builtin condition named {name!r}")


# ---------------------------------------------------------------------------
# condition DSL


_TOKEN_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|[(),;=]|\S")


def _tokenize(text: str):
    tokens = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        for m in _TOKEN_RE.finditer(line):
            tok = m.group(0)
            if tok in "(),;=" or tok[0].isalpha() or tok[0] == "_":
                tokens.append((tok, lineno, m.start() + 1))
            else:
                raise ParseError(f"unexpected character {tok!r}", lineno, m.start() + 1)
    return tokens


def parse_condition(text: str) -> MinorCondition:
    """Parse the condition DSL: `f(x,y,y)=f(x,x,x); ...`.

    Each equation's universal variables are numbered by first occurrence
    across the whole equation; chains a=b=c expand to consecutive pairs.
    Symbol arities are inferred at first use and must stay consistent.
    """
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos][0] if pos < len(tokens) else None

    def take(expected=None):
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError(f"unexpected end of input, expected {expected or 'more'}")
        tok, line, col = tokens[pos]
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, got {tok!r}", line, col)
        pos += 1
        return tok, line, col

    def take_ident(what):
        tok, line, col = take()
        if not (tok[0].isalpha() or tok[0] == "_"):
            raise ParseError(f"expected {what}, got {tok!r}", line, col)
        return tok, line, col

    arity_of: dict[str, int] = {}
    symbols: list[tuple[str, int]] = []

    def parse_term():
        name, line, col = take_ident("a function symbol")
        take("(")
        args = []
        while True:
            var, _, _ = take_ident("a variable")
            args.append(var)
            if peek() == ",":
                take(",")
                continue
            break
        take(")")
        if name in arity_of:
            if arity_of[name] != len(args):
                raise ArityMismatch(
                    f"line {line}: symbol {name!r} used with arity {len(args)}, "
                    f"previously {arity_of[name]}"
                )
        else:
            arity_of[name] = len(args)
            symbols.append((name, len(args)))
        return name, args

    equations: list[Equation] = []
    while pos < len(tokens):
        if peek() == ";":  # tolerate empty segments
            take(";")
            continue
        terms = [parse_term()]
        while peek() == "=":
            take("=")
            terms.append(parse_term())
        if len(terms) < 2:
            tok, line, col = tokens[pos] if pos < len(tokens) else (None, None, None)
            raise ParseError("expected '=' after a term", line, col)
        variables: list[str] = []
        for _, args in terms:
            for v in args:
                if v not in variables:
                    variables.append(v)
        var_slot = {v: i + 1 for i, v in enumerate(variables)}
        maps = [
            (name, MinorMap(len(args), len(variables), tuple(var_slot[v] for v in args)))
            for name, args in terms
        ]
        for left, right in zip(maps, maps[1:]):
            equations.append((left, right))
        if peek() == ";":
            take(";")
        elif pos < len(tokens):
            tok, line, col = tokens[pos]
            raise ParseError(f"expected ';' between equations, got {tok!r}", line, col)
    if not equations:
        raise ParseError("no equations in condition")
    return MinorCondition(tuple(symbols), tuple(equations))


def format_condition(cond: MinorCondition) -> str:
    """Render a condition back into DSL syntax (canonical variable names)."""
    names = _variable_names(max(m.to_arity for (_, m), _ in cond.equations) if cond.equations else 0)
    parts = []
    for (ln, lm), (rn, rm) in cond.equations:
        parts.append(f"{_term_str(ln, lm, names)}={_term_str(rn, rm, names)}")
    return "; ".join(parts)


def _variable_names(count: int) -> list[str]:
    base = "xyzuvw"
    return [base[i] if i < len(base) else f"x{i + 1}" for i in range(count)]


def _term_str(name: str, mm: MinorMap, names) -> str:
    return f"{name}({','.join(names[s - 1] for s in mm.table)})"


# ---------------------------------------------------------------------------
# indicator construction


@dataclass(frozen=True, eq=False)
class IndicatorResult:
    """Quotiented tuple-space digraph plus the (symbol, tuple) -> class map."""

    graph: Digraph
    base: Digraph
    condition: MinorCondition
    tuple_classes: MappingProxyType = field(repr=False)

    def class_of(self, symbol: str, args) -> int:
        return int(self.tuple_classes[symbol][tuple_index(args, self.base.n)])


def _digit_matrix(indices: np.ndarray, base: int, width: int) -> np.ndarray:
    """Mixed-radix digits of each index, most significant first."""
    powers = base ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return (indices[:, None] // powers) % base


def _compose_indices(digits: np.ndarray, mm: MinorMap, base: int) -> np.ndarray:
    """Index of x∘mm for every instantiation row x (given as digit rows)."""
    cols = np.array(mm.table, dtype=np.int64) - 1
    powers = base ** np.arange(mm.from_arity - 1, -1, -1, dtype=np.int64)
    return digits[:, cols] @ powers


def indicator(h: Digraph, cond: MinorCondition, vertex_budget: int | None = None):
    """Build the indicator digraph of the condition over base digraph h.

    Returns an IndicatorResult; its graph has one vertex per class of the
    union-find closure, labelled densely in order of each class's smallest
    (symbol, tuple) member.
    """
    budget = DEFAULT_VERTEX_BUDGET if vertex_budget is None else vertex_budget
    n = h.n
    offsets: dict[str, int] = {}
    total = 0
    for name, ar in cond.symbols:
        offsets[name] = total
        total += n**ar
    if total > budget:
        raise BudgetExceeded(total, budget)

    parent = np.arange(total, dtype=np.int64)
    for (ln, lm), (rn, rm) in cond.equations:
        m = lm.to_arity
        count = n**m
        if count > budget:
            raise BudgetExceeded(count, budget, "equation instantiations")
        for start in range(0, count, _CHUNK):
            idx = np.arange(start, min(start + _CHUNK, count), dtype=np.int64)
            digits = _digit_matrix(idx, n, m)
            lhs = offsets[ln] + _compose_indices(digits, lm, n)
            rhs = offsets[rn] + _compose_indices(digits, rm, n)
            _kernel.union_batch(parent, lhs, rhs)
    _kernel.resolve_roots(parent)
    roots, labels = np.unique(parent, return_inverse=True)
    labels = labels.astype(np.int64)
    num_classes = len(roots)

    edge_codes: list[np.ndarray] = []
    edge_arr = np.array(h.edge_list(), dtype=np.int64).reshape(-1, 2)
    m_edges = len(edge_arr)
    for name, ar in cond.symbols:
        if m_edges == 0:
            continue
        combos = m_edges**ar
        if combos > budget:
            raise BudgetExceeded(combos, budget, "edge tuples")
        off = offsets[name]
        heads, tails = edge_arr[:, 0], edge_arr[:, 1]
        powers = n ** np.arange(ar - 1, -1, -1, dtype=np.int64)
        for start in range(0, combos, _CHUNK):
            idx = np.arange(start, min(start + _CHUNK, combos), dtype=np.int64)
            digits = _digit_matrix(idx, m_edges, ar)
            u = labels[off + heads[digits] @ powers]
            v = labels[off + tails[digits] @ powers]
            edge_codes.append(np.unique(u * num_classes + v))
    if edge_codes:
        codes = np.unique(np.concatenate(edge_codes))
        pairs = zip((codes // num_classes).tolist(), (codes % num_classes).tolist())
    else:
        pairs = []
    graph = Digraph(num_classes, pairs)

    classes = {}
    for name, ar in cond.symbols:
        arr = labels[offsets[name] : offsets[name] + n**ar].copy()
        arr.setflags(write=False)
        classes[name] = arr
    return IndicatorResult(
        graph=graph, base=h, condition=cond, tuple_classes=MappingProxyType(classes)
    )


# ---------------------------------------------------------------------------
# satisfaction


@dataclass(frozen=True, eq=False)
class PolymorphismWitness:
    """Concrete operation tables, one flat table per function symbol."""

    base: Digraph
    arities: MappingProxyType
    tables: MappingProxyType = field(repr=False)

    def apply(self, symbol: str, args) -> int:
        if len(args) != self.arities[symbol]:
            raise ValueError(f"{symbol} expects {self.arities[symbol]} arguments")
        return int(self.tables[symbol][tuple_index(args, self.base.n)])

    def tables_as_lists(self) -> dict[str, list[int]]:
        return {name: [int(x) for x in tab] for name, tab in self.tables.items()}


@dataclass(frozen=True)
class SatisfactionResult:
    satisfied: bool
    witness: PolymorphismWitness | None = None
    indicator_size: int | None = None

    def __bool__(self) -> bool:
        return self.satisfied


def verify_witness(witness: PolymorphismWitness, cond: MinorCondition) -> bool:
    """Re-check a witness from its raw tables alone: every operation must be
    a polymorphism and every equation must hold on every instantiation."""
    h = witness.base
    n = h.n
    adjacency = np.zeros((n, n), dtype=bool)
    for u, v in h.edges:
        adjacency[u, v] = True
    for name, ar in cond.symbols:
        table = np.asarray(witness.tables[name], dtype=np.int64)
        if len(table) != n**ar or table.min(initial=0) < 0 or table.max(initial=0) >= n:
            return False
        edge_arr = np.array(h.edge_list(), dtype=np.int64).reshape(-1, 2)
        m_edges = len(edge_arr)
        if m_edges == 0:
            continue
        powers = n ** np.arange(ar - 1, -1, -1, dtype=np.int64)
        combos = m_edges**ar
        for start in range(0, combos, _CHUNK):
            idx = np.arange(start, min(start + _CHUNK, combos), dtype=np.int64)
            digits = _digit_matrix(idx, m_edges, ar)
            fu = table[edge_arr[:, 0][digits] @ powers]
            fv = table[edge_arr[:, 1][digits] @ powers]
            if not adjacency[fu, fv].all():
                return False
    for (ln, lm), (rn, rm) in cond.equations:
        m = lm.to_arity
        count = n**m
        lt = np.asarray(witness.tables[ln], dtype=np.int64)
        rt = np.asarray(witness.tables[rn], dtype=np.int64)
        for start in range(0, count, _CHUNK):
            idx = np.arange(start, min(start + _CHUNK, count), dtype=np.int64)
            digits = _digit_matrix(idx, n, m)
            if not (lt[_compose_indices(digits, lm, n)] == rt[_compose_indices(digits, rm, n)]).all():
                return False
    return True


def satisfies(
    h: Digraph,
    cond: MinorCondition,
    vertex_budget: int | None = None,
    budget: SearchBudget | None = None,
) -> SatisfactionResult:
    """Decide whether Pol(h) satisfies the condition.

    True comes with a verified PolymorphismWitness pulled back through the
    indicator's class map; False means the indicator provably has no
    homomorphism to h.
    """
    ind = indicator(h, cond, vertex_budget=vertex_budget)
    hom = find_hom(ind.graph, h, budget=budget)
    if hom is None:
        return SatisfactionResult(False, indicator_size=ind.graph.n)
    hom_arr = np.array(hom.map, dtype=np.int64)
    tables = {}
    arities = {}
    for name, ar in cond.symbols:
        tab = hom_arr[np.asarray(ind.tuple_classes[name])]
        tab.setflags(write=False)
        tables[name] = tab
        arities[name] = ar
    witness = PolymorphismWitness(
        base=h, arities=MappingProxyType(arities), tables=MappingProxyType(tables)
    )
    if not verify_witness(witness, cond):
        raise InternalInconsistency("indicator witness failed independent verification")
    return SatisfactionResult(True, witness=witness, indicator_size=ind.graph.n)


# ---------------------------------------------------------------------------
# brute-force oracle (kept free of the indicator/kernel machinery on purpose)


def brute_force_satisfies(
    h: Digraph,
    cond: MinorCondition,
    cell_budget: int = 200_000,
    node_cap: int = 10_000_000,
) -> bool:
    """Decide satisfaction by direct backtracking over operation tables.

    Equations become forced equalities between table cells; edge combos
    become binary constraints between cells.  Intended for small bases in
    tests, as an independent check of the indicator route.
    """
    n = h.n
    offsets: dict[str, int] = {}
    total = 0
    for name, ar in cond.symbols:
        offsets[name] = total
        total += n**ar
    if total > cell_budget:
        raise BudgetExceeded(total, cell_budget, "table cells")

    # forced equalities between cells, via a tiny local union-find
    parent = list(range(total))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def cell(sym: str, args) -> int:
        return offsets[sym] + tuple_index(args, n)

    for (ln, lm), (rn, rm) in cond.equations:
        if n ** lm.to_arity > cell_budget:
            raise BudgetExceeded(n**lm.to_arity, cell_budget, "equation instantiations")
        for x in product(range(n), repeat=lm.to_arity):
            a = find(cell(ln, tuple(x[s - 1] for s in lm.table)))
            b = find(cell(rn, tuple(x[s - 1] for s in rm.table)))
            if a != b:
                parent[max(a, b)] = min(a, b)

    roots = sorted({find(i) for i in range(total)})
    klass = {root: j for j, root in enumerate(roots)}
    cls = [klass[find(i)] for i in range(total)]

    # binary edge-preservation constraints between classes
    constraints: set[tuple[int, int]] = set()
    edges = h.edge_list()
    for name, ar in cond.symbols:
        if len(edges) ** ar > cell_budget:
            raise BudgetExceeded(len(edges) ** ar, cell_budget, "edge tuples")
        for combo in product(edges, repeat=ar):
            cu = cls[cell(name, tuple(e[0] for e in combo))]
            cv = cls[cell(name, tuple(e[1] for e in combo))]
            constraints.add((cu, cv))

    num_classes = len(roots)
    incident: list[list[tuple[int, int, bool]]] = [[] for _ in range(num_classes)]
    for cu, cv in constraints:
        hi = max(cu, cv)
        incident[hi].append((cu, cv, True))
    value = [-1] * num_classes
    nodes = 0

    def backtrack(i: int) -> bool:
        nonlocal nodes
        if i == num_classes:
            return True
        for val in range(n):
            nodes += 1
            if nodes > node_cap:
                raise BudgetExceeded(nodes, node_cap, "search nodes")
            value[i] = val
            ok = True
            for cu, cv, _ in incident[i]:
                a = value[cu]
                b = value[cv]
                if a >= 0 and b >= 0 and not h.has_edge(a, b):
                    ok = False
                    break
            if ok and backtrack(i + 1):
                return True
        value[i] = -1
        return False

    return backtrack(0)
