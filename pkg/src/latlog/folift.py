"""First-order layer: finite-structure semantics, skolemization, closed-term
enumeration, expansions, and the interpolation pipeline.

The pipeline for a valid sentence A -> B runs six steps: replace the strong
quantifiers on both sides by joins/meets over fresh witness functions, search
for a valid expansion of the weak quantifiers over the closed terms, find a
propositional interpolant for the abstracted expansion, re-read it over the
ground atoms, generalize away every function symbol and constant outside the
common language, and check the result on small finite structures.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .algebra import JOIN, MEET, Lattice, PolaritySignature
from .errors import (
    BudgetExceeded,
    LatlogError,
    PropInterpolationFailed,
    SmokeTestFailed,
    StrongQuantifierPresent,
    SymbolInBoth,
    UninterpretedSymbol,
    UnknownValidity,
)
from .interp import YES, InterpolationVerdict, find_prop_interpolant
from .propcore import ClosureBudget, ValidityReport, is_valid_prop
from .syntax import (
    App,
    Atom,
    Const,
    EXISTS,
    FORALL,
    Formula,
    Func,
    PredicateLanguage,
    PropVar,
    Quant,
    Term,
    Var,
    all_identifiers,
    atoms_of,
    children,
    classify_quantifiers,
    conjoin,
    disjoin,
    ensure_object_constant,
    free_object_vars,
    fresh_name,
    functions_of,
    implies,
    inferred_language,
    is_quantifier_free,
    predicates_of,
    render,
    substitute,
    term_vars,
)

# ---------------------------------------------------------------------------
# finite structures and evaluation


@dataclass
class FoStructure:
    """Finite interpretation: predicate tables map argument tuples to lattice
    element indices, function tables to domain elements."""

    domain: tuple
    predicates: dict[str, Mapping[tuple, int]]
    functions: dict[str, Mapping[tuple, object]] = field(default_factory=dict)


def fo_eval(phi: Formula, lat: Lattice, structure: FoStructure,
            assignment: Optional[Mapping[str, object]] = None) -> str:
    """Evaluate a first-order formula: universal quantifiers take the meet and
    existential quantifiers the join over the domain."""
    env = dict(assignment or {})
    join_t, meet_t = lat.tables[JOIN], lat.tables[MEET]

    def ev_term(t: Term, env: dict) -> object:
        if isinstance(t, Var):
            if t.name not in env:
                raise UninterpretedSymbol(f"object variable {t.name!r} unassigned",
                                          symbol=t.name)
            return env[t.name]
        table = structure.functions.get(t.name)
        if table is None:
            raise UninterpretedSymbol(f"function symbol {t.name!r} uninterpreted",
                                      symbol=t.name)
        args = tuple(ev_term(a, env) for a in t.args)
        try:
            return table[args]
        except KeyError:
            raise UninterpretedSymbol(
                f"function {t.name!r} undefined at {args!r}", symbol=t.name) from None

    def ev(f: Formula, env: dict) -> int:
        if isinstance(f, Atom):
            table = structure.predicates.get(f.pred)
            if table is None:
                raise UninterpretedSymbol(f"predicate {f.pred!r} uninterpreted",
                                          symbol=f.pred)
            args = tuple(ev_term(t, env) for t in f.args)
            try:
                return table[args]
            except KeyError:
                raise UninterpretedSymbol(
                    f"predicate {f.pred!r} undefined at {args!r}", symbol=f.pred) from None
        if isinstance(f, Const):
            if f.name not in lat.constants:
                raise UninterpretedSymbol(f"constant {f.name!r} not declared", symbol=f.name)
            return lat.constants[f.name]
        if isinstance(f, PropVar):
            raise UninterpretedSymbol(
                f"propositional variable {f.name!r} has no first-order meaning",
                symbol=f.name,
            )
        if isinstance(f, App):
            table = lat.tables[f.conn]
            if not f.args:
                return int(table[()])
            vals = tuple(ev(a, env) for a in f.args)
            return int(table[vals])
        if isinstance(f, Quant):
            fold = meet_t if f.kind == FORALL else join_t
            acc = None
            for d in structure.domain:
                env2 = dict(env)
                env2[f.var] = d
                v = ev(f.body, env2)
                acc = v if acc is None else int(fold[acc, v])
            if acc is None:
                raise LatlogError("empty domain")
            return acc
        raise LatlogError(f"cannot evaluate {f!r}")

    return lat.elements[ev(phi, env)]


# ---------------------------------------------------------------------------
# skolemization


@dataclass(frozen=True)
class SkolemEntry:
    path: tuple[int, ...]
    quantifier: str
    variable: str
    functions: tuple[str, ...]
    arguments: tuple[str, ...]


@dataclass
class SkolemRecord:
    entries: list[SkolemEntry] = field(default_factory=list)
    family_size: int = 0


def skolemize(phi: Formula, lat: Lattice,
              signature: Optional[PolaritySignature] = None) -> tuple[Formula, SkolemRecord]:
    """Replace every strong quantifier occurrence, outside in.

    A strong existential over C(x) becomes the join of C(f_i(xs)) for
    i = 1..m and a strong universal the meet, where m is the lattice size,
    the f_i are fresh function symbols and xs the weakly quantified variables
    whose scope contains the occurrence.  The output carries weak quantifiers
    only.  Nested strong quantifiers inside the replacement copies receive
    their own fresh families.
    """
    sig = signature or lat.signature
    m = lat.m
    taken = set(all_identifiers(phi))
    record = SkolemRecord(family_size=m)
    counter = itertools.count(1)

    def fresh_family() -> tuple[str, ...]:
        while True:
            k = next(counter)
            fam = tuple(f"sk{k}_{i}" for i in range(1, m + 1))
            if not any(f in taken for f in fam):
                taken.update(fam)
                return fam

    def walk(f: Formula, sign: int, weak: tuple[str, ...], path: tuple[int, ...]) -> Formula:
        if isinstance(f, Quant):
            strong = (f.kind == FORALL) == (sign > 0)
            if strong:
                fam = fresh_family()
                args = tuple(Var(v) for v in weak)
                copies = [substitute(f.body, {f.var: Func(name, args)}) for name in fam]
                record.entries.append(SkolemEntry(path, f.kind, f.var, fam, weak))
                joined = disjoin(copies) if f.kind == EXISTS else conjoin(copies)
                return walk(joined, sign, weak, path)
            return Quant(f.kind, f.var, walk(f.body, sign, weak + (f.var,), path + (0,)))
        if isinstance(f, App):
            conn = sig.get(f.conn)
            if conn is None:
                raise UninterpretedSymbol(f"connective {f.conn!r} not in signature",
                                          symbol=f.conn)
            new_args = tuple(
                walk(a, -sign if conn.polarity[i] == "-" else sign, weak, path + (i,))
                for i, a in enumerate(f.args)
            )
            return App(f.conn, new_args)
        return f

    result = walk(phi, 1, (), ())
    return result, record


# ---------------------------------------------------------------------------
# closed terms and expansions


def enumerate_closed_terms(language: PredicateLanguage, k: int) -> list[Term]:
    """First k closed terms, ordered by size (node count), ties by
    lexicographic symbol order then argument order.  Prefix-stable: asking for
    k+1 extends the k-list.  Returns fewer when the language is exhausted."""
    if k < 1:
        raise LatlogError("at least one term must be requested", k=k)
    consts = sorted(n for n, a in language.functions.items() if a == 0)
    funs = sorted((n, a) for n, a in language.functions.items() if a >= 1)
    sizes: dict[int, list[Term]] = {1: [Func(c, ()) for c in consts]}
    out: list[Term] = list(sizes[1])
    if not funs:
        return out[:k]
    max_arity = max(a for _, a in funs)
    size = 1
    empty_run = 0
    while len(out) < k:
        size += 1
        bucket: list[Term] = []
        for name, arity in funs:
            for comp in _compositions(size - 1, arity):
                for args in itertools.product(*(sizes.get(c, []) for c in comp)):
                    bucket.append(Func(name, args))
        sizes[size] = bucket
        out.extend(bucket)
        if bucket:
            empty_run = 0
        else:
            empty_run += 1
            if empty_run > max_arity:
                break
    return out[:k]


def _compositions(total: int, parts: int):
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def expand_n(phi: Formula, n: int, language: Optional[PredicateLanguage] = None,
             signature: Optional[PolaritySignature] = None) -> Formula:
    """The n-th expansion: inside out, every (weak) existential becomes the
    join and every universal the meet of its instances over the first n closed
    terms.  With only m < n closed terms the result equals the m-th expansion.
    Quantifier-free input is returned unchanged."""
    if n < 1:
        raise LatlogError("expansion depth must be at least 1", n=n)
    occurrences = classify_quantifiers(phi, signature)
    strong = [o for o in occurrences if o.strength == "strong"]
    if strong:
        raise StrongQuantifierPresent(
            f"strong quantifier at path {strong[0].path}", path=strong[0].path)
    if not occurrences:
        return phi
    lang = language or inferred_language(phi)
    lang, _ = ensure_object_constant(lang)
    terms = enumerate_closed_terms(lang, n)
    return _expand_with_terms(phi, terms)


def _expand_with_terms(phi: Formula, terms: Sequence[Term]) -> Formula:
    def ex(f: Formula) -> Formula:
        if isinstance(f, Quant):
            body = ex(f.body)
            instances = [substitute(body, {f.var: t}) for t in terms]
            return disjoin(instances) if f.kind == EXISTS else conjoin(instances)
        if isinstance(f, App):
            return App(f.conn, tuple(ex(a) for a in f.args))
        return f

    return ex(phi)


# ---------------------------------------------------------------------------
# ground-atom abstraction and expansion validity


@dataclass
class ExpansionCheck:
    valid: bool
    word: Formula
    atom_names: dict[str, str]  # rendered atom -> propositional variable
    report: ValidityReport
    countermodel: Optional[dict[str, str]] = None  # rendered atom -> element


def abstract_ground_atoms(phi: Formula, naming: Optional[dict[str, str]] = None
                          ) -> tuple[Formula, dict[str, str]]:
    """Replace each distinct ground atom by a propositional variable.
    Distinct closed terms stay independent, exactly the freedom a term
    structure provides.  The naming map (rendered atom -> variable) may be
    shared across several formulas."""
    atoms = atoms_of(phi)
    for a in atoms:
        for t in a.args:
            if term_vars(t):
                raise LatlogError(f"atom {render(a)} is not ground")
    naming = naming if naming is not None else {}

    def var_for(a: Atom) -> str:
        key = render(a)
        if key not in naming:
            naming[key] = f"a{len(naming) + 1}"
        return naming[key]

    def walk(f: Formula) -> Formula:
        if isinstance(f, Atom):
            return PropVar(var_for(f))
        if isinstance(f, App):
            return App(f.conn, tuple(walk(x) for x in f.args))
        if isinstance(f, Quant):
            raise LatlogError("cannot abstract under a quantifier")
        return f

    return walk(phi), naming


def concretize(word: Formula, naming: Mapping[str, str],
               atom_tab: Mapping[str, Atom]) -> Formula:
    """Inverse of the abstraction: propositional variables back to atoms."""
    rev = {v: k for k, v in naming.items()}

    def walk(f: Formula) -> Formula:
        if isinstance(f, PropVar):
            return atom_tab[rev[f.name]]
        if isinstance(f, App):
            return App(f.conn, tuple(walk(x) for x in f.args))
        return f

    return walk(word)


def check_valid_expansion(phi: Formula, lat: Lattice,
                          var_cap: Optional[int] = None) -> ExpansionCheck:
    """Validity of a quantifier-free formula: abstract each distinct ground
    atom to a propositional variable and run the exhaustive check.  Sound and
    complete because a term structure may interpret predicates arbitrarily on
    distinct closed terms."""
    if not is_quantifier_free(phi):
        raise LatlogError("expansion must be quantifier-free")
    word, naming = abstract_ground_atoms(phi)
    report = is_valid_prop(word, lat, var_cap)
    countermodel = None
    if not report.valid and report.countervaluation:
        rev = {v: k for k, v in naming.items()}
        countermodel = {rev[v]: e for v, e in report.countervaluation.items()}
    return ExpansionCheck(report.valid, word, naming, report, countermodel)


@dataclass
class HerbrandSearch:
    status: str  # 'FOUND' | 'UNKNOWN'
    n: Optional[int]
    expansion: Optional[Formula]
    checks: list[tuple[int, bool]]
    terms: list[Term]
    exhausted_at: Optional[int] = None
    reason: Optional[str] = None
    added_constant: Optional[str] = None


def find_herbrand_expansion(phi: Formula, lat: Lattice, max_n: int = 8,
                            var_cap: Optional[int] = None,
                            signature: Optional[PolaritySignature] = None) -> HerbrandSearch:
    """Smallest n whose expansion is valid.  Validity of the input guarantees
    some expansion is valid in the limit; an invalid input never produces one,
    so the search is bounded by max_n (and by term exhaustion) and reports
    UNKNOWN when the bound is hit."""
    occurrences = classify_quantifiers(phi, signature)
    strong = [o for o in occurrences if o.strength == "strong"]
    if strong:
        raise StrongQuantifierPresent(
            f"strong quantifier at path {strong[0].path}", path=strong[0].path)
    lang = inferred_language(phi)
    lang, added = ensure_object_constant(lang)
    terms = enumerate_closed_terms(lang, max_n)
    exhausted = len(terms) if len(terms) < max_n else None
    effective = len(terms)
    checks: list[tuple[int, bool]] = []
    for n in range(1, effective + 1):
        expansion = _expand_with_terms(phi, terms[:n])
        try:
            check = check_valid_expansion(expansion, lat, var_cap)
        except BudgetExceeded as exc:
            return HerbrandSearch("UNKNOWN", None, None, checks, terms,
                                  exhausted_at=exhausted,
                                  reason=f"validity budget exceeded at n={n}: {exc.message}",
                                  added_constant=added)
        checks.append((n, check.valid))
        if check.valid:
            return HerbrandSearch("FOUND", n, expansion, checks, terms,
                                  exhausted_at=exhausted, added_constant=added)
    reason = ("all closed terms exhausted" if exhausted is not None
              else f"no valid expansion up to n={max_n}")
    return HerbrandSearch("UNKNOWN", None, None, checks, terms,
                          exhausted_at=exhausted, reason=reason, added_constant=added)


# ---------------------------------------------------------------------------
# generalization


@dataclass
class GeneralizationStep:
    term: Term
    variable: str
    quantifier: str


def _terms_preorder(phi: Formula) -> list[Term]:
    """Every function-headed term occurrence, outer before inner, left before
    right, deduplicated keeping the first occurrence."""
    seen: dict[Term, None] = {}

    def walk_term(t: Term) -> None:
        if isinstance(t, Func):
            seen.setdefault(t)
            for a in t.args:
                walk_term(a)

    def walk(f: Formula) -> None:
        if isinstance(f, Atom):
            for t in f.args:
                walk_term(t)
        else:
            for c in children(f):
                walk(c)

    walk(phi)
    return list(seen)


def _is_subterm(small: Term, big: Term) -> bool:
    if small == big:
        return True
    if isinstance(big, Func):
        return any(_is_subterm(small, a) for a in big.args)
    return False


def _replace_term(phi: Formula, old: Term, new: Term) -> Formula:
    def rt(t: Term) -> Term:
        if t == old:
            return new
        if isinstance(t, Func):
            return Func(t.name, tuple(rt(a) for a in t.args))
        return t

    def walk(f: Formula) -> Formula:
        if isinstance(f, Atom):
            return Atom(f.pred, tuple(rt(t) for t in f.args))
        if isinstance(f, App):
            return App(f.conn, tuple(walk(a) for a in f.args))
        if isinstance(f, Quant):
            return Quant(f.kind, f.var, walk(f.body))
        return f

    return walk(phi)


def generalize_interpolant(istar: Formula, sk_a: Formula, sk_b: Formula,
                           common: Optional[set[str]] = None
                           ) -> tuple[Formula, list[GeneralizationStep]]:
    """Eliminate every function symbol and constant of ``istar`` outside the
    common language of the two skolemized sides.

    Repeatedly select a maximal (by subterm inclusion) term with a non-common
    head, ties broken leftmost-outermost, replace all its occurrences by a
    fresh variable, and prefix an existential quantifier when the head occurs
    in the antecedent side (it then cannot occur in the succedent side) or a
    universal one otherwise.
    """
    funcs_a = set(functions_of(sk_a))
    funcs_b = set(functions_of(sk_b))
    if common is None:
        common = funcs_a & funcs_b
    steps: list[GeneralizationStep] = []
    current = istar
    used = all_identifiers(istar) | all_identifiers(sk_a) | all_identifiers(sk_b)
    counter = 1
    while True:
        candidates = [t for t in _terms_preorder(current) if t.name not in common]
        if not candidates:
            break
        maximal = [t for t in candidates
                   if not any(t != o and _is_subterm(t, o) for o in candidates)]
        target = maximal[0]
        if target.name in funcs_a and target.name in funcs_b:
            raise SymbolInBoth(
                f"symbol {target.name!r} occurs in both sides yet was marked non-common",
                symbol=target.name,
            )
        kind = EXISTS if target.name in funcs_a else FORALL
        var = fresh_name(f"z{counter}", used)
        counter += 1
        used.add(var)
        current = Quant(kind, var, _replace_term(current, target, Var(var)))
        steps.append(GeneralizationStep(target, var, kind))
    return current, steps


# ---------------------------------------------------------------------------
# the pipeline


@dataclass
class FoBudgets:
    max_n: int = 8
    var_cap: int = 10
    closure: ClosureBudget = field(default_factory=ClosureBudget)
    smoke_domain_cap: int = 2
    smoke_structure_cap: int = 30000


@dataclass
class PipelineTrace:
    original: Optional[Formula] = None
    skolemized: Optional[Formula] = None
    skolem_record: Optional[SkolemRecord] = None
    herbrand: Optional[HerbrandSearch] = None
    abstraction: dict[str, str] = field(default_factory=dict)
    prop_antecedent: Optional[Formula] = None
    prop_succedent: Optional[Formula] = None
    verdict: Optional[InterpolationVerdict] = None
    ground_interpolant: Optional[Formula] = None
    generalization: list[GeneralizationStep] = field(default_factory=list)
    interpolant: Optional[Formula] = None
    smoke: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)


@dataclass
class FoInterpolationResult:
    interpolant: Formula
    trace: PipelineTrace


def _interpretation_space(lat: Lattice, domain: tuple, lang: PredicateLanguage) -> int:
    count = 1
    for _, ar in sorted(lang.predicates.items()):
        count *= lat.m ** (len(domain) ** ar)
    for _, ar in sorted(lang.functions.items()):
        count *= len(domain) ** (len(domain) ** ar)
    return count


def _structures(lat: Lattice, domain: tuple, lang: PredicateLanguage):
    """Deterministic exhaustive enumeration of all interpretations."""
    pred_names = sorted(lang.predicates)
    func_names = sorted(lang.functions)
    pred_keys = {p: list(itertools.product(domain, repeat=lang.predicates[p]))
                 for p in pred_names}
    func_keys = {f: list(itertools.product(domain, repeat=lang.functions[f]))
                 for f in func_names}
    pred_spaces = [itertools.product(range(lat.m), repeat=len(pred_keys[p]))
                   for p in pred_names]
    func_spaces = [itertools.product(domain, repeat=len(func_keys[f]))
                   for f in func_names]
    for combo in itertools.product(*pred_spaces, *func_spaces):
        preds = {}
        for i, p in enumerate(pred_names):
            preds[p] = dict(zip(pred_keys[p], combo[i]))
        funcs = {}
        for j, f in enumerate(func_names):
            funcs[f] = dict(zip(func_keys[f], combo[len(pred_names) + j]))
        yield FoStructure(domain, preds, funcs)


def _smoke_test(a: Formula, interpolant: Formula, b: Formula, lat: Lattice,
                budgets: FoBudgets, trace: PipelineTrace) -> None:
    lang = inferred_language(implies(implies(a, interpolant), b))
    formulas = {}
    for which, f in (("a", a), ("i", interpolant), ("b", b)):
        fl = inferred_language(f)
        formulas[which] = (f, sorted(fl.predicates), sorted(fl.functions))
    memo: dict[tuple, int] = {}
    checked = 0
    domains_done = []

    def value(which: str, structure: FoStructure) -> int:
        f, pnames, fnames = formulas[which]
        key = (which, len(structure.domain),
               tuple(tuple(sorted(structure.predicates[p].items())) for p in pnames),
               tuple(tuple(sorted(structure.functions[g].items())) for g in fnames))
        if key not in memo:
            memo[key] = lat.index(fo_eval(f, lat, structure))
        return memo[key]

    for d in range(1, budgets.smoke_domain_cap + 1):
        domain = tuple(range(d))
        space = _interpretation_space(lat, domain, lang)
        if checked + space > budgets.smoke_structure_cap:
            trace.notes.append(
                f"smoke test stopped before domain size {d}: "
                f"{space} interpretations exceed the budget")
            break
        for structure in _structures(lat, domain, lang):
            checked += 1
            va = value("a", structure)
            vi = value("i", structure)
            vb = value("b", structure)
            if not lat.leq[va, vi]:
                raise SmokeTestFailed(
                    "antecedent -> interpolant fails on a finite structure",
                    domain=list(domain),
                    predicates={p: dict(t) for p, t in structure.predicates.items()},
                    values=(lat.elements[va], lat.elements[vi]),
                )
            if not lat.leq[vi, vb]:
                raise SmokeTestFailed(
                    "interpolant -> succedent fails on a finite structure",
                    domain=list(domain),
                    predicates={p: dict(t) for p, t in structure.predicates.items()},
                    values=(lat.elements[vi], lat.elements[vb]),
                )
        domains_done.append(d)
    trace.smoke = {"domains": domains_done, "structures": checked}


def fo_interpolate(phi: Formula, lat: Lattice,
                   budgets: Optional[FoBudgets] = None) -> FoInterpolationResult:
    """Construct a first-order interpolant for a valid implication sentence.

    The returned interpolant mentions only predicate symbols common to both
    sides and no introduced witness functions; the trace records every step
    machine-checkably.  The final finite-structure sweep is a bounded smoke
    test, not a proof: full first-order validity is only semi-decidable here.
    """
    budgets = budgets or FoBudgets()
    trace = PipelineTrace(original=phi)
    if not isinstance(phi, App) or phi.conn != "->":
        raise LatlogError("input must be an implication A -> B")
    if free_object_vars(phi):
        raise LatlogError("input must be a sentence (no free object variables)")

    skolemized, record = skolemize(phi, lat)
    trace.skolemized = skolemized
    trace.skolem_record = record
    sk_a, sk_b = skolemized.args

    search = find_herbrand_expansion(skolemized, lat, max_n=budgets.max_n,
                                     var_cap=budgets.var_cap)
    trace.herbrand = search
    if search.status != "FOUND":
        raise UnknownValidity(
            f"no valid expansion found: {search.reason}", trace=trace)

    exp_a, exp_b = search.expansion.args
    naming: dict[str, str] = {}
    prop_a, naming = abstract_ground_atoms(exp_a, naming)
    prop_b, naming = abstract_ground_atoms(exp_b, naming)
    trace.abstraction = dict(naming)
    trace.prop_antecedent = prop_a
    trace.prop_succedent = prop_b

    verdict = find_prop_interpolant(prop_a, prop_b, lat, budget=budgets.closure,
                                    var_cap=budgets.var_cap)
    trace.verdict = verdict
    if verdict.status != YES:
        raise PropInterpolationFailed(
            f"propositional interpolation returned {verdict.status}",
            verdict=verdict, trace=trace,
        )

    atom_tab = {render(atom): atom
                for atom in atoms_of(exp_a) + atoms_of(exp_b)}
    ground = concretize(verdict.interpolant, naming, atom_tab)
    trace.ground_interpolant = ground
    trace.notes.append(
        "weak quantifiers are reintroduced implicitly: the expansion instances "
        "imply the skolemized sides, so the ground interpolant already sits "
        "between them; no witness-axiom rewriting is performed")

    interpolant, steps = generalize_interpolant(ground, sk_a, sk_b)
    trace.generalization = steps
    trace.interpolant = interpolant

    a_side, b_side = phi.args
    common_preds = set(predicates_of(a_side)) & set(predicates_of(b_side))
    used_preds = set(predicates_of(interpolant))
    if not used_preds <= common_preds:
        raise LatlogError(
            f"interpolant mentions non-common predicates {sorted(used_preds - common_preds)}; "
            "this is a bug")
    used_funcs = set(functions_of(interpolant))
    common_funcs = set(functions_of(sk_a)) & set(functions_of(sk_b))
    if not used_funcs <= common_funcs:
        raise LatlogError(
            f"interpolant mentions non-common function symbols {sorted(used_funcs - common_funcs)}; "
            "this is a bug")

    _smoke_test(a_side, interpolant, b_side, lat, budgets, trace)
    return FoInterpolationResult(interpolant, trace)
