"""Propositional semantics over a finite lattice.

Evaluation and validity are exhaustive over the valuation space (lexicographic
order over element indices, first variable most significant).  The closure of
representable functions grows level by level: level 0 holds the projection
columns and the declared constant columns, level k+1 everything obtainable by
one connective application to existing columns.  Every column carries its
shortest known witness word (levels first, then rendered length, then
lexicographic order), which keeps interpolants deterministic.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from .algebra import IMP, JOIN, MEET, Lattice
from .errors import (
    BudgetExceeded,
    LatlogError,
    NotValidError,
    UnboundVariable,
    UndeclaredConstant,
)
from .syntax import App, Const, Formula, PropVar, is_prop_word, prop_variables, render

DEFAULT_VAR_CAP = 10


def require_prop_word(phi: Formula) -> None:
    if not is_prop_word(phi):
        raise LatlogError(f"not a propositional word: {render(phi)}")


def _projection(m: int, n: int, k: int) -> np.ndarray:
    """Column of variable k over the m**n valuations (lexicographic)."""
    N = m ** n
    return ((np.arange(N) // m ** (n - 1 - k)) % m).astype(np.uint8)


def column_of(phi: Formula, lat: Lattice, var_list: Sequence[str]) -> np.ndarray:
    """Evaluate a propositional word on every valuation of ``var_list``.

    Internally the valuation grid is an n-dimensional broadcast: each variable
    occupies one axis, so subformulas touching few variables stay small and
    the full m**n layout is materialised only once at the end."""
    require_prop_word(phi)
    var_list = tuple(var_list)
    m = lat.m
    n = len(var_list)
    pos = {v: k for k, v in enumerate(var_list)}
    base = np.arange(m, dtype=np.int32)

    def ev(f: Formula) -> np.ndarray:
        if isinstance(f, PropVar):
            if f.name not in pos:
                raise UnboundVariable(f"variable {f.name!r} not in the valuation list",
                                      variable=f.name)
            k = pos[f.name]
            return base.reshape((1,) * k + (m,) + (1,) * (n - 1 - k))
        if isinstance(f, Const):
            if f.name not in lat.constants:
                raise UndeclaredConstant(f"constant {f.name!r} not declared", constant=f.name)
            return np.full((), lat.constants[f.name], dtype=np.int32)
        kids = [ev(a) for a in f.args]
        flat = lat.flat(f.conn)
        if not kids:
            return np.full((), int(flat[0]), dtype=np.int32)
        idx = kids[0]
        for nxt in kids[1:]:
            idx = idx * m + nxt
        return flat[idx]

    out = np.broadcast_to(ev(phi), (m,) * n)
    return np.ascontiguousarray(out).reshape(-1).astype(np.uint8)


def eval_prop(phi: Formula, lat: Lattice, valuation: Mapping[str, str]) -> str:
    """Value of a propositional word under one valuation (element names)."""
    require_prop_word(phi)

    def ev(f: Formula) -> int:
        if isinstance(f, PropVar):
            if f.name not in valuation:
                raise UnboundVariable(f"variable {f.name!r} unassigned", variable=f.name)
            return lat.index(valuation[f.name])
        if isinstance(f, Const):
            if f.name not in lat.constants:
                raise UndeclaredConstant(f"constant {f.name!r} not declared", constant=f.name)
            return lat.constants[f.name]
        table = lat.tables[f.conn]
        return int(table[tuple(ev(a) for a in f.args)] if f.args else table[()])

    return lat.elements[ev(phi)]


def _decode_valuation(index: int, var_list: tuple[str, ...], lat: Lattice) -> dict[str, str]:
    out = {}
    m = lat.m
    for v in reversed(var_list):
        out[v] = lat.elements[index % m]
        index //= m
    return dict(sorted(out.items()))


@dataclass
class ValidityReport:
    valid: bool
    countervaluation: Optional[dict[str, str]]
    variables: tuple[str, ...]
    checked: int
    method: str = "grid"

    def __bool__(self) -> bool:
        return self.valid


def _fold_axis(grid: np.ndarray, flat: np.ndarray, m: int) -> np.ndarray:
    """Reduce axis 1 of a 2-D index grid with a binary table (pairwise tree;
    the tables reduced this way are associative, so the shape is immaterial)."""
    acc = grid.astype(np.int32)
    while acc.shape[1] > 1:
        width = acc.shape[1]
        red = flat[acc[:, 0:width - 1:2] * m + acc[:, 1:width:2]]
        if width % 2:
            red = np.concatenate([red, acc[:, width - 1:]], axis=1)
        acc = red
    return acc[:, 0].astype(np.uint8)


@dataclass
class ImplicationParts:
    shared: tuple[str, ...]
    left: tuple[str, ...]
    right: tuple[str, ...]
    lower: np.ndarray  # join over left extensions of the antecedent
    upper: np.ndarray  # meet over right extensions of the succedent
    a_grid: np.ndarray  # shape (m^s, m^l)
    b_grid: np.ndarray  # shape (m^s, m^r)


def _implication_parts(a: Formula, b: Formula, lat: Lattice,
                       var_cap: Optional[int] = None) -> ImplicationParts:
    cap = DEFAULT_VAR_CAP if var_cap is None else var_cap
    va, vb = prop_variables(a), prop_variables(b)
    shared = tuple(sorted(va & vb))
    left = tuple(sorted(va - vb))
    right = tuple(sorted(vb - va))
    m = lat.m
    if max(len(shared) + len(left), len(shared) + len(right)) > cap:
        raise BudgetExceeded(
            f"implication check needs grids over {len(shared) + len(left)} and "
            f"{len(shared) + len(right)} variables, cap is {cap}",
            cap=cap,
        )
    a_col = column_of(a, lat, shared + left).reshape(m ** len(shared), m ** len(left))
    b_col = column_of(b, lat, shared + right).reshape(m ** len(shared), m ** len(right))
    lower = _fold_axis(a_col, lat.flat(JOIN), m)
    upper = _fold_axis(b_col, lat.flat(MEET), m)
    return ImplicationParts(shared, left, right, lower, upper, a_col, b_col)


def _implication_counter(parts: ImplicationParts, lat: Lattice) -> dict[str, str]:
    leq = lat.leq
    bad_shared = np.nonzero(~leq[parts.lower, parts.upper])[0]
    s = int(bad_shared[0])
    arow = parts.a_grid[s]
    brow = parts.b_grid[s]
    bad = ~leq[arow[:, None], brow[None, :]]
    l, r = (int(x) for x in np.argwhere(bad)[0])
    out = {}
    out.update(_decode_valuation(s, parts.shared, lat))
    out.update(_decode_valuation(l, parts.left, lat))
    out.update(_decode_valuation(r, parts.right, lat))
    return dict(sorted(out.items()))


def is_valid_implication(a: Formula, b: Formula, lat: Lattice,
                         var_cap: Optional[int] = None) -> ValidityReport:
    """Validity of a -> b via the shared-variable factorisation: valid iff for
    every shared valuation, the join over antecedent-only extensions stays
    below the meet over succedent-only extensions.  Observationally identical
    to the full valuation sweep."""
    parts = _implication_parts(a, b, lat, var_cap)
    ok = lat.leq[parts.lower, parts.upper]
    variables = tuple(sorted(set(parts.shared) | set(parts.left) | set(parts.right)))
    if ok.all():
        return ValidityReport(True, None, variables, parts.a_grid.size + parts.b_grid.size,
                              method="factored")
    return ValidityReport(False, _implication_counter(parts, lat), variables,
                          parts.a_grid.size + parts.b_grid.size, method="factored")


def is_valid_prop(phi: Formula, lat: Lattice, var_cap: Optional[int] = None) -> ValidityReport:
    """Exhaustive validity: true iff the word evaluates to the top element
    under every valuation.  Returns one countervaluation when false.  When the
    variable count exceeds the cap, a top-level implication falls back to the
    factored check; anything else raises BUDGET_EXCEEDED."""
    require_prop_word(phi)
    cap = DEFAULT_VAR_CAP if var_cap is None else var_cap
    variables = tuple(sorted(prop_variables(phi)))
    if len(variables) <= cap:
        col = column_of(phi, lat, variables)
        bad = np.nonzero(col != lat.top)[0]
        if len(bad) == 0:
            return ValidityReport(True, None, variables, len(col))
        return ValidityReport(False, _decode_valuation(int(bad[0]), variables, lat),
                              variables, len(col))
    if isinstance(phi, App) and phi.conn == IMP:
        return is_valid_implication(phi.args[0], phi.args[1], lat, var_cap)
    raise BudgetExceeded(
        f"validity over {len(variables)} variables exceeds the cap of {cap}",
        cap=cap, variables=len(variables),
    )


# ---------------------------------------------------------------------------
# value columns and the representable closure


@dataclass(eq=False)
class ValueColumn:
    """A function table over all valuations of a fixed variable list, with the
    word that represents it (envelopes carry no witness)."""

    var_list: tuple[str, ...]
    values: np.ndarray
    witness: Optional[Formula] = None
    word: Optional[str] = None
    level: Optional[int] = None

    @property
    def key(self) -> bytes:
        return self.values.tobytes()

    def value_names(self, lat: Lattice) -> tuple[str, ...]:
        return tuple(lat.elements[int(v)] for v in self.values)

    def __eq__(self, other) -> bool:
        return (isinstance(other, ValueColumn) and self.var_list == other.var_list
                and self.key == other.key)

    def __hash__(self) -> int:
        return hash((self.var_list, self.key))


@dataclass
class ClosureResult:
    var_list: tuple[str, ...]
    columns: list[ValueColumn]
    complete: bool
    cumulative: list[int]
    added: list[int]
    connectives: tuple[str, ...]
    budget_note: Optional[str] = None

    def value_sets(self, lat: Lattice) -> set[tuple[str, ...]]:
        return {c.value_names(lat) for c in self.columns}


@dataclass
class ClosureBudget:
    max_columns: int = 20000
    max_levels: Optional[int] = None
    max_apps_per_level: int = 4_000_000


class ClosureState:
    """Incremental closure: grow one level at a time, or scan the next level's
    candidates against envelope bounds without materialising it."""

    def __init__(self, lat: Lattice, var_list: Sequence[str],
                 connectives: Optional[Sequence[str]] = None):
        self.lat = lat
        self.var_list = tuple(var_list)
        names = tuple(connectives) if connectives is not None else lat.signature.names()
        self.conns = [c for c in lat.signature.connectives if c.name in names]
        unknown = set(names) - set(lat.signature.names())
        if unknown:
            raise LatlogError(f"connectives not in the signature: {sorted(unknown)}")
        self.m = lat.m
        self.N = lat.m ** len(self.var_list)
        self.cols: list[np.ndarray] = []
        self.words: list[str] = []
        self.wits: list[Formula] = []
        self.levels: list[int] = []
        self.index: dict[bytes, int] = {}
        self.level_starts = [0]
        self.added: list[int] = []
        self.complete = False

        candidates: list[tuple[np.ndarray, Formula]] = []
        for k, v in enumerate(self.var_list):
            candidates.append((_projection(self.m, len(self.var_list), k), PropVar(v)))
        for cname, cidx in lat.constants.items():
            candidates.append((np.full(self.N, cidx, dtype=np.uint8), Const(cname)))
        self._commit_level(0, candidates)

    @property
    def total(self) -> int:
        return len(self.cols)

    def _commit_level(self, level: int, candidates: list[tuple[np.ndarray, Formula]]) -> int:
        best: dict[bytes, tuple[int, str, Formula, np.ndarray]] = {}
        for values, wit in candidates:
            key = values.tobytes()
            if key in self.index:
                continue
            word = render(wit)
            entry = (len(word), word, wit, values)
            old = best.get(key)
            if old is None or entry[:2] < old[:2]:
                best[key] = entry
        ordered = sorted(best.values(), key=lambda e: e[:2])
        for _, word, wit, values in ordered:
            self.index[values.tobytes()] = len(self.cols)
            self.cols.append(values)
            self.words.append(word)
            self.wits.append(wit)
            self.levels.append(level)
        self.added.append(len(ordered))
        self.level_starts.append(len(self.cols))
        return len(ordered)

    def _level_apps(self):
        """(connective, argument index tuple) pairs for the next level, in
        deterministic order; at least one argument from the frontier."""
        next_level = len(self.added)
        frontier = self.level_starts[-2]
        total = self.total
        for conn in self.conns:
            if conn.arity == 0:
                if next_level == 1:
                    yield conn, ()
                continue
            for tup in itertools.product(range(total), repeat=conn.arity):
                if next_level == 1 or max(tup) >= frontier:
                    yield conn, tup

    def app_count_next_level(self) -> int:
        next_level = len(self.added)
        frontier = self.level_starts[-2]
        total = self.total
        count = 0
        for conn in self.conns:
            if conn.arity == 0:
                count += 1 if next_level == 1 else 0
            elif next_level == 1:
                count += total ** conn.arity
            else:
                count += total ** conn.arity - frontier ** conn.arity
        return count

    def grow(self) -> int:
        """Materialise the next level fully; returns the number of new columns."""
        lat = self.lat
        m = self.m
        next_level = len(self.added)
        candidates: list[tuple[np.ndarray, Formula]] = []
        for conn, tup in self._level_apps():
            flat = lat.flat(conn.name)
            if not tup:
                values = np.full(self.N, int(flat[0]), dtype=np.uint8)
            else:
                idx = self.cols[tup[0]].astype(np.int32)
                for t in tup[1:]:
                    idx = idx * m + self.cols[t]
                values = flat[idx].astype(np.uint8)
            if values.tobytes() in self.index:
                continue
            wit = App(conn.name, tuple(self.wits[t] for t in tup))
            candidates.append((values, wit))
        n = self._commit_level(next_level, candidates)
        if n == 0:
            self.complete = True
        return n

    def scan_existing(self, lower: np.ndarray, upper: np.ndarray) -> Optional[int]:
        """First committed column inside [lower, upper], in closure order."""
        leq = self.lat.leq
        for i, values in enumerate(self.cols):
            if leq[lower, values].all() and leq[values, upper].all():
                return i
        return None

    def stream_scan(self, lower: np.ndarray, upper: np.ndarray,
                    probe_count: int = 16) -> Optional[tuple[np.ndarray, str, Formula]]:
        """Search the next level's candidates for a column inside the bounds
        without materialising the level.

        A candidate's values at the probe positions depend only on the
        argument values there, so columns are grouped by probe signature and
        whole group pairs are filtered at once; surviving applications are
        evaluated in full.  The probes are spread over the valuation grid so
        every variable varies among them.  Every application producing a
        fitting column is collected, so the returned witness is the canonical
        one (shortest rendering, then lexicographic) and the fitting column
        the first in closure order.  Observationally identical to growing the
        level and scanning it.
        """
        lat = self.lat
        m = self.m
        leq = lat.leq
        N = len(lower)
        probes = np.unique(np.linspace(0, N - 1, min(N, probe_count)).astype(np.int64))
        P = len(probes)
        low_p = lower[probes].astype(np.int32)
        up_p = upper[probes].astype(np.int32)
        next_level = len(self.added)
        frontier = self.level_starts[-2]
        total = self.total
        survivors: list[tuple[str, tuple[int, ...]]] = []

        # group columns by their probe signature
        group_of = np.empty(total, dtype=np.int64)
        groups: list[np.ndarray] = []
        seen: dict[bytes, int] = {}
        signatures = []
        for i, col in enumerate(self.cols):
            sig = col[probes]
            key = sig.tobytes()
            g = seen.setdefault(key, len(seen))
            if g == len(signatures):
                signatures.append(sig)
            group_of[i] = g
        for g in range(len(seen)):
            groups.append(np.nonzero(group_of == g)[0])
        if signatures:
            reps = np.stack(signatures).astype(np.int32)
        else:
            reps = np.zeros((0, P), dtype=np.int32)
        G = len(groups)

        def member_pairs(g: int, h: int):
            left = groups[g]
            right = groups[h]
            if next_level == 1:
                yield from itertools.product(left.tolist(), right.tolist())
                return
            for i in left.tolist():
                for j in right.tolist():
                    if i >= frontier or j >= frontier:
                        yield i, j

        for conn in self.conns:
            flat = lat.flat(conn.name)
            if conn.arity == 2:
                # fits[g, h] iff the candidate's prefix sits inside the bounds;
                # built position by position from m*m value-pair masks
                table = lat.tables[conn.name].astype(np.int32)
                fits = None
                for p in range(P):
                    mask_p = leq[low_p[p], table] & leq[table, up_p[p]]  # (m, m)
                    cur = mask_p[reps[:, p][:, None], reps[None, :, p]]
                    fits = cur if fits is None else (fits & cur)
                    if not fits.any():
                        break
                for g, h in np.argwhere(fits):
                    survivors.extend((conn.name, pair) for pair in member_pairs(int(g), int(h)))
            elif conn.arity == 0:
                if next_level == 1:
                    v = int(flat[0])
                    if leq[lower, v].all() and leq[v, upper].all():
                        survivors.append((conn.name, ()))
            else:
                for tup in itertools.product(range(total), repeat=conn.arity):
                    if next_level > 1 and max(tup) < frontier:
                        continue
                    idx = self.cols[tup[0]][probes].astype(np.int32)
                    for t in tup[1:]:
                        idx = idx * m + self.cols[t][probes]
                    row = flat[idx]
                    if (leq[low_p, row] & leq[row, up_p]).all():
                        survivors.append((conn.name, tup))

        if len(survivors) > 500_000:
            raise BudgetExceeded(
                f"envelope scan produced {len(survivors)} candidate applications",
                survivors=len(survivors),
            )

        fitting: dict[bytes, tuple[tuple[int, str], np.ndarray, Formula]] = {}

        def consider(cname: str, tup: tuple[int, ...], values: np.ndarray) -> None:
            key = values.tobytes()
            if key in self.index:
                return  # an old column; already scanned at its own level
            wit = App(cname, tuple(self.wits[t] for t in tup))
            word = render(wit)
            entry = ((len(word), word), values, wit)
            old = fitting.get(key)
            if old is None or entry[0] < old[0]:
                fitting[key] = entry

        binary = [(cname, tup) for cname, tup in survivors if len(tup) == 2]
        other = [(cname, tup) for cname, tup in survivors if len(tup) != 2]
        by_conn: dict[str, list[tuple[int, int]]] = {}
        for cname, tup in binary:
            by_conn.setdefault(cname, []).append(tup)
        for cname, pairs in by_conn.items():
            flat = lat.flat(cname)
            arr = np.array(pairs, dtype=np.int64)
            for start in range(0, len(arr), 512):
                chunk = arr[start:start + 512]
                A = np.stack([self.cols[int(i)] for i in chunk[:, 0]]).astype(np.int32)
                B = np.stack([self.cols[int(j)] for j in chunk[:, 1]])
                C = flat[A * m + B].astype(np.uint8)
                ok = (leq[lower, C] & leq[C, upper]).all(axis=1)
                for r in np.nonzero(ok)[0]:
                    consider(cname, (int(chunk[r, 0]), int(chunk[r, 1])), C[int(r)])
        for cname, tup in other:
            flat = lat.flat(cname)
            if not tup:
                values = np.full(self.N, int(flat[0]), dtype=np.uint8)
            else:
                idx = self.cols[tup[0]].astype(np.int32)
                for t in tup[1:]:
                    idx = idx * m + self.cols[t]
                values = flat[idx].astype(np.uint8)
            if leq[lower, values].all() and leq[values, upper].all():
                consider(cname, tup, values)
        if not fitting:
            return None
        (_, word), values, wit = min(fitting.values(), key=lambda e: e[0])
        return values, word, wit

    def column(self, i: int) -> ValueColumn:
        return ValueColumn(self.var_list, self.cols[i], self.wits[i],
                           self.words[i], self.levels[i])

    def result(self, complete: bool, note: Optional[str] = None) -> ClosureResult:
        added = list(self.added)
        while complete and len(added) > 1 and added[-1] == 0:
            added.pop()  # drop the level that only confirmed the fixpoint
        cumulative = []
        run = 0
        for a in added:
            run += a
            cumulative.append(run)
        return ClosureResult(
            self.var_list,
            [self.column(i) for i in range(self.total)],
            complete,
            cumulative,
            added,
            tuple(c.name for c in self.conns),
            budget_note=note,
        )


def representable_closure(lat: Lattice, var_list: Sequence[str],
                          level_cap: Optional[int] = None,
                          budget: Optional[ClosureBudget] = None,
                          connectives: Optional[Sequence[str]] = None) -> ClosureResult:
    """Level-wise closure of the representable functions over ``var_list``.

    Runs to the fixpoint by default; ``level_cap`` bounds the number of grown
    levels and the budget bounds columns and per-level applications.  A
    truncated run is returned with ``complete=False`` and a budget note.
    """
    budget = budget or ClosureBudget()
    state = ClosureState(lat, var_list, connectives)
    level = 0
    while True:
        if state.complete:
            return state.result(True)
        if level_cap is not None and level >= level_cap:
            return state.result(False, note=f"level cap {level_cap} reached")
        if budget.max_levels is not None and level >= budget.max_levels:
            return state.result(False, note=f"level budget {budget.max_levels} reached")
        if state.app_count_next_level() > budget.max_apps_per_level:
            return state.result(
                False, note=f"next level needs {state.app_count_next_level()} applications, "
                            f"budget is {budget.max_apps_per_level}")
        added = state.grow()
        level += 1
        if added == 0:
            return state.result(True)
        if state.total > budget.max_columns:
            return state.result(False, note=f"column budget {budget.max_columns} exceeded")


def constant_values(lat: Lattice) -> dict[str, Formula]:
    """Values of the closed words (the 0-variable closure), mapped to their
    witness words, in discovery order."""
    clo = representable_closure(lat, ())
    out: dict[str, Formula] = {}
    for col in clo.columns:
        out[lat.elements[int(col.values[0])]] = col.witness
    return out


# ---------------------------------------------------------------------------
# envelopes


@dataclass
class EnvelopePair:
    shared: tuple[str, ...]
    lower: ValueColumn
    upper: ValueColumn


def envelopes(a: Formula, b: Formula, lat: Lattice,
              var_cap: Optional[int] = None) -> EnvelopePair:
    """Tightest bounds an interpolant for a -> b must fall between, as columns
    over the shared variables: the join of the antecedent over all extensions
    of its private variables, and the meet of the succedent likewise.
    Raises NOT_VALID when a -> b fails."""
    parts = _implication_parts(a, b, lat, var_cap)
    if not lat.leq[parts.lower, parts.upper].all():
        raise NotValidError(
            "the implication is not valid",
            countervaluation=_implication_counter(parts, lat),
        )
    return EnvelopePair(
        parts.shared,
        ValueColumn(parts.shared, parts.lower),
        ValueColumn(parts.shared, parts.upper),
    )
