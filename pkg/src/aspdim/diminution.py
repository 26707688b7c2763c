"""Classifying a constant subset against the diminution lattice.

Every check is exact at desk scale: answer sets of the reduced and the
full instantiation are enumerated outright, so each verdict of `false`
carries a concrete witness.  The two loop-based checks are tri-state:
their extension search is refused above a size limit and reported as
`unknown`, never coerced to a boolean.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import AspdimError, SizeGuardError
from .grounding import AtomTable, GroundProgram, full_instantiation
from .semantics import (
    Interpretation,
    _is_model_ids,
    _loop_id_sets,
    _supports_ids,
    answer_sets,
    elementary_loops,
    sort_interpretations,
)
from .syntax import Atom, Program, atom_set_to_text, herbrand_universe, vars_of

#: Instantiation estimate above which the exact checkers refuse to run.
INSTANTIATION_LIMIT = 500_000
#: Unassigned-atom bound for the loop checkers' extension search.
EXTENSION_LIMIT = 14


@dataclass(frozen=True)
class Diminution:
    """A constant subset plus the predicates whose atoms must be preserved."""

    constants: frozenset[str]
    preserved: frozenset[tuple[str, int]] = frozenset()

    @staticmethod
    def of(constants, preserved=()) -> "Diminution":
        sigs = []
        for p in preserved:
            if isinstance(p, str):
                name, _, ar = p.partition("/")
                sigs.append((name, int(ar)))
            else:
                sigs.append(tuple(p))
        return Diminution(frozenset(constants), frozenset(sigs))


@dataclass(frozen=True)
class CheckResult:
    holds: bool
    witness: Interpretation | None = None
    note: str = ""

    def __bool__(self) -> bool:
        return self.holds

    def render(self) -> str:
        return "true" if self.holds else "false"


@dataclass(frozen=True)
class SplittingResult:
    status: str  # "true" | "false" | "no_answer_set"
    witness: object = None  # violating ground rule, when false

    def __bool__(self) -> bool:
        return self.status == "true"


@dataclass(frozen=True)
class LoopCheckResult:
    status: str  # "true" | "false" | "unknown"
    evidence: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.status == "true"


@dataclass(frozen=True)
class DiminutionReport:
    admissible: CheckResult
    safe: CheckResult
    preserved_admissible: CheckResult | None
    preserved_safe: CheckResult | None
    splitting_safe: SplittingResult
    loop_admissible: LoopCheckResult
    elementary_loop_admissible: LoopCheckResult
    reduced_answer_sets: int
    full_answer_sets: int

    def as_dict(self) -> dict:
        def cr(x: CheckResult | None):
            if x is None:
                return None
            d = {"holds": x.holds}
            if x.witness is not None:
                d["witness"] = atom_set_to_text(x.witness)
            if x.note:
                d["note"] = x.note
            return d

        return {
            "admissible": cr(self.admissible),
            "safe": cr(self.safe),
            "preserved_admissible": cr(self.preserved_admissible),
            "preserved_safe": cr(self.preserved_safe),
            "splitting_safe": self.splitting_safe.status,
            "loop_admissible": self.loop_admissible.status,
            "elementary_loop_admissible": self.elementary_loop_admissible.status,
            "reduced_answer_sets": self.reduced_answer_sets,
            "full_answer_sets": self.full_answer_sets,
        }

    def as_lines(self) -> list[str]:
        lines = []
        for name, res in (
            ("admissible", self.admissible),
            ("safe", self.safe),
            ("preserved_admissible", self.preserved_admissible),
            ("preserved_safe", self.preserved_safe),
        ):
            if res is None:
                lines.append(f"{name}=na")
                continue
            lines.append(f"{name}={res.render()}")
            if res.witness is not None:
                lines.append(f"{name}_witness={atom_set_to_text(res.witness)}")
        lines.append(f"splitting_safe={self.splitting_safe.status}")
        if self.splitting_safe.witness is not None:
            lines.append(f"splitting_witness={self.splitting_safe.witness}")
        lines.append(f"loop_admissible={self.loop_admissible.status}")
        lines.append(
            f"elementary_loop_admissible={self.elementary_loop_admissible.status}"
        )
        lines.append(f"reduced_answer_sets={self.reduced_answer_sets}")
        lines.append(f"full_answer_sets={self.full_answer_sets}")
        return lines


class _Context:
    """Shared groundings and answer sets for one (program, diminution) pair.

    Answer sets are computed on the dependency-driven groundings (their
    equivalence with the definitional instantiation is a tested invariant
    of the grounder); the definitional instantiations are built lazily,
    only for the checks whose definitions range over P|_D / P|_HU(P)
    themselves (splitting-set scan, loop enumeration).
    """

    def __init__(self, program: Program, dim: Diminution, max_atoms: int | None,
                 max_instances: int | None):
        self.universe = herbrand_universe(program)
        extra = dim.constants - self.universe
        if extra:
            raise AspdimError(
                f"diminution constants outside the Herbrand universe: {sorted(extra)}"
            )
        self.program = program
        self.dim = dim
        self.max_atoms = max_atoms
        self.max_instances = (
            INSTANTIATION_LIMIT if max_instances is None else max_instances
        )
        self.table = AtomTable()
        self._gp_d = None
        self._gp_full = None
        self._as_d: tuple[Interpretation, ...] | None = None
        self._as_full: tuple[Interpretation, ...] | None = None

    def _estimate(self, constants) -> int:
        return sum(len(constants) ** len(vars_of(r)) for r in self.program.rules)

    @property
    def gp_d(self) -> GroundProgram:
        if self._gp_d is None:
            estimate = self._estimate(self.dim.constants)
            if estimate > self.max_instances:
                raise SizeGuardError("full instantiation", estimate, self.max_instances)
            self._gp_d = full_instantiation(self.program, self.dim.constants, table=self.table)
        return self._gp_d

    @property
    def gp_full(self) -> GroundProgram:
        if self._gp_full is None:
            estimate = self._estimate(self.universe)
            if estimate > self.max_instances:
                raise SizeGuardError("full instantiation", estimate, self.max_instances)
            self._gp_full = full_instantiation(self.program, self.universe, table=self.table)
        return self._gp_full

    @property
    def as_d(self) -> tuple[Interpretation, ...]:
        if self._as_d is None:
            from .grounding import restrict_ground

            self._as_d = answer_sets(
                restrict_ground(self.program, self.dim.constants), self.max_atoms
            )
        return self._as_d

    @property
    def as_full(self) -> tuple[Interpretation, ...]:
        if self._as_full is None:
            from .grounding import ground

            self._as_full = answer_sets(ground(self.program), self.max_atoms)
        return self._as_full


def _admissible(ctx: _Context) -> CheckResult:
    for i_d in ctx.as_d:
        if not any(i_d <= i for i in ctx.as_full):
            return CheckResult(False, i_d, "reduced answer set extends to no full answer set")
    return CheckResult(True)


def _safe(ctx: _Context) -> CheckResult:
    adm = _admissible(ctx)
    if not adm.holds:
        return CheckResult(False, adm.witness, "not admissible: " + adm.note)
    for i in ctx.as_full:
        if not any(i_d <= i for i_d in ctx.as_d):
            return CheckResult(False, i, "full answer set covers no reduced answer set")
    return CheckResult(True)


def _project(interp: Interpretation, preserved: frozenset[tuple[str, int]]) -> frozenset[Atom]:
    return frozenset(a for a in interp if a.signature in preserved)


def _preserved(ctx: _Context, mode: str) -> CheckResult:
    base = _admissible(ctx) if mode == "admissible" else _safe(ctx)
    if not base.holds:
        return CheckResult(False, base.witness, f"base {mode} check fails")
    preserved = ctx.dim.preserved
    full_projections = [(_project(i, preserved), i) for i in ctx.as_full]
    for i_d in ctx.as_d:
        p_d = _project(i_d, preserved)
        if not any(p == p_d for p, _ in full_projections):
            return CheckResult(
                False, i_d, "no full answer set agrees on the preserved predicates"
            )
    return CheckResult(True)


def _splitting_safe(ctx: _Context) -> SplittingResult:
    if not ctx.as_full:
        return SplittingResult("no_answer_set")
    u = set(ctx.gp_d.universe_ids)
    for i, (head, pos, neg) in enumerate(ctx.gp_full.int_rules):
        if any(h in u for h in head):
            if not all(a in u for a in head + pos + neg):
                return SplittingResult("false", ctx.gp_full.rule_view(i))
    return SplittingResult("true")


def _loop_condition_two(ctx: _Context, full_sets, d_loop_sets, d_supported,
                        elementary: bool) -> str | None:
    """No loop of the full program that the reduced one lacks may contain a
    supported (elementary) loop of the reduced program; returns a message
    on violation."""
    d_index = set(d_loop_sets)
    kind = "elementary loop" if elementary else "loop"
    for big in full_sets:
        if big in d_index:
            continue
        for small in d_supported:
            if small <= big:
                return (
                    f"{kind} {atom_set_to_text(ctx.gp_full.interpretations(big))} of the "
                    f"full program is absent from the reduced one yet contains supported "
                    f"{kind} {atom_set_to_text(ctx.gp_full.interpretations(small))}"
                )
    return None


def _check_extension(
    ctx: _Context,
    i_d_ids: set[int],
    ext: frozenset[int],
    check_sets: list[frozenset[int]],
) -> tuple[bool, list[str]]:
    gp_full = ctx.gp_full
    rules = gp_full.int_rules
    union = i_d_ids | ext
    if not _is_model_ids(rules, union):
        return False, []
    # Loop formulas are required for every loop inside the whole union, the
    # straddling ones included: exempting them admits extensions that break
    # supports of the reduced answer set through fresh negative literals.
    for ls in check_sets:
        if not ls <= union:
            continue
        satisfied = False
        for ri in _supports_ids(gp_full, ls)[0]:
            _, pos, neg = rules[ri]
            if all(p in union for p in pos) and not any(b in union for b in neg):
                satisfied = True
                break
        if not satisfied:
            return False, []
    straddling = [
        atom_set_to_text(gp_full.interpretations(ls))
        for ls in check_sets
        if ls <= union and not ls <= ext and not ls <= i_d_ids
    ]
    return True, straddling


def _extension_search(
    ctx: _Context,
    i_d: Interpretation,
    check_sets: list[frozenset[int]],
    max_extension: int,
) -> tuple[frozenset[int] | None, bool, list[str]]:
    """Search for I' making I_D ∪ I' a model whose inside-I' loops are supported.

    Full answer sets extending I_D are tried first: they satisfy every
    loop formula outright, so they decide the common case immediately.
    The exhaustive fallback ranges over head atoms only (anything else
    would violate its own singleton loop formula) and is refused above
    `max_extension` undecided atoms.  Returns (extension, exhausted,
    straddling-loop notes)."""
    gp_full = ctx.gp_full
    i_d_ids = {gp_full.table.lookup(a) for a in i_d}
    i_d_ids.discard(None)
    for interp in ctx.as_full:
        if not i_d <= interp:
            continue
        ids = {gp_full.table.lookup(a) for a in interp}
        ids.discard(None)
        ext = frozenset(ids - i_d_ids)
        ok, straddling = _check_extension(ctx, i_d_ids, ext, check_sets)
        if ok:
            return ext, False, straddling
    head_ids = {h for head, _, _ in gp_full.int_rules for h in head}
    rest = sorted(head_ids - i_d_ids)
    if len(rest) > max_extension:
        raise SizeGuardError("extension search", len(rest), max_extension)
    for size in range(len(rest) + 1):
        for subset in combinations(rest, size):
            ext = frozenset(subset)
            ok, straddling = _check_extension(ctx, i_d_ids, ext, check_sets)
            if ok:
                return ext, False, straddling
    return None, True, []


def _eloop_sets(gp, max_atoms) -> list[frozenset[int]]:
    return [
        frozenset(gp.table.lookup(a) for a in lp.atoms)
        for lp in elementary_loops(gp, max_atoms)
    ]


def _loop_check(ctx: _Context, elementary: bool, max_extension: int) -> LoopCheckResult:
    gp_d, gp_full = ctx.gp_d, ctx.gp_full
    try:
        d_loop_sets = _loop_id_sets(gp_d, ctx.max_atoms)
        if elementary:
            full_sets = _eloop_sets(gp_full, ctx.max_atoms)
            d_supported = [
                ls for ls in _eloop_sets(gp_d, ctx.max_atoms) if _supports_ids(gp_d, ls)[0]
            ]
        else:
            full_sets = _loop_id_sets(gp_full, ctx.max_atoms)
            d_supported = [ls for ls in d_loop_sets if _supports_ids(gp_d, ls)[0]]
        violation = _loop_condition_two(ctx, full_sets, d_loop_sets, d_supported, elementary)
        if violation:
            return LoopCheckResult("false", (violation,))
        evidence: list[str] = []
        for i_d in ctx.as_d:
            ext, exhausted, straddling = _extension_search(
                ctx, i_d, full_sets, max_extension
            )
            if ext is None and exhausted:
                return LoopCheckResult(
                    "false",
                    (f"no extension completes {atom_set_to_text(i_d)}",),
                )
            evidence.append(
                f"{atom_set_to_text(i_d)} extended by "
                f"{atom_set_to_text(ctx.gp_full.interpretations(ext))}"
            )
            for note in straddling:
                evidence.append(f"straddling loop checked under condition 1: {note}")
        return LoopCheckResult("true", tuple(evidence))
    except SizeGuardError as err:
        return LoopCheckResult("unknown", (str(err),))


def check_admissible(program: Program, dim: Diminution, *, max_atoms: int | None = None,
                     max_instances: int | None = None) -> CheckResult:
    """Every answer set of P|_D extends to an answer set of P|_HU(P)."""
    return _admissible(_Context(program, dim, max_atoms, max_instances))


def check_safe(program: Program, dim: Diminution, *, max_atoms: int | None = None,
               max_instances: int | None = None) -> CheckResult:
    """Admissible, and every full answer set restricts to a reduced one."""
    return _safe(_Context(program, dim, max_atoms, max_instances))


def check_preserved(program: Program, dim: Diminution, mode: str = "safe", *,
                    max_atoms: int | None = None,
                    max_instances: int | None = None) -> CheckResult:
    """The base property plus agreement on the preserved-predicate projection."""
    if mode not in ("admissible", "safe"):
        raise ValueError("mode must be 'admissible' or 'safe'")
    if not dim.preserved:
        raise ValueError("check_preserved requires a non-empty preserved set")
    return _preserved(_Context(program, dim, max_atoms, max_instances), mode)


def check_splitting_safe(program: Program, dim: Diminution, *,
                         max_atoms: int | None = None,
                         max_instances: int | None = None) -> SplittingResult:
    """Do the atoms of P|_D form a splitting set of P|_HU(P)?  Linear scan."""
    return _splitting_safe(_Context(program, dim, max_atoms, max_instances))


def check_loop_admissible(program: Program, dim: Diminution, *,
                          max_atoms: int | None = None,
                          max_instances: int | None = None,
                          max_extension: int = EXTENSION_LIMIT) -> LoopCheckResult:
    """Tri-state sufficient condition for admissibility via loop formulas."""
    try:
        ctx = _Context(program, dim, max_atoms, max_instances)
        return _loop_check(ctx, elementary=False, max_extension=max_extension)
    except SizeGuardError as err:
        return LoopCheckResult("unknown", (str(err),))


def check_elementary_loop_admissible(program: Program, dim: Diminution, *,
                                     max_atoms: int | None = None,
                                     max_instances: int | None = None,
                                     max_extension: int = EXTENSION_LIMIT) -> LoopCheckResult:
    """The elementary-loop variant of the loop-admissibility check."""
    try:
        ctx = _Context(program, dim, max_atoms, max_instances)
        return _loop_check(ctx, elementary=True, max_extension=max_extension)
    except SizeGuardError as err:
        return LoopCheckResult("unknown", (str(err),))


def classify(program: Program, dim: Diminution, *, max_atoms: int | None = None,
             max_instances: int | None = None,
             max_extension: int = EXTENSION_LIMIT) -> DiminutionReport:
    """Run every checker and assemble the report; lattice inconsistencies raise."""
    ctx = _Context(program, dim, max_atoms, max_instances)
    admissible = _admissible(ctx)
    safe = _safe(ctx)
    if dim.preserved:
        preserved_admissible = _preserved(ctx, "admissible")
        preserved_safe = _preserved(ctx, "safe")
    else:
        preserved_admissible = None
        preserved_safe = None
    splitting = _splitting_safe(ctx)
    loop_adm = _loop_check(ctx, elementary=False, max_extension=max_extension)
    eloop_adm = _loop_check(ctx, elementary=True, max_extension=max_extension)
    report = DiminutionReport(
        admissible=admissible,
        safe=safe,
        preserved_admissible=preserved_admissible,
        preserved_safe=preserved_safe,
        splitting_safe=splitting,
        loop_admissible=loop_adm,
        elementary_loop_admissible=eloop_adm,
        reduced_answer_sets=len(ctx.as_d),
        full_answer_sets=len(ctx.as_full),
    )
    _enforce_lattice(report)
    return report


def _enforce_lattice(report: DiminutionReport) -> None:
    checks = [
        (report.safe.holds and not report.admissible.holds, "safe without admissible"),
        (
            report.splitting_safe.status == "true" and not report.safe.holds,
            "splitting-safe without safe",
        ),
        (
            report.loop_admissible.status == "true" and not report.admissible.holds,
            "loop-admissible without admissible",
        ),
        (
            report.elementary_loop_admissible.status == "true"
            and not report.admissible.holds,
            "elementary-loop-admissible without admissible",
        ),
        (
            report.loop_admissible.status == "true"
            and report.elementary_loop_admissible.status == "false",
            "loop-admissible without elementary-loop-admissible",
        ),
    ]
    for bad, msg in checks:
        if bad:
            raise AspdimError(f"lattice invariant violated: {msg}")
