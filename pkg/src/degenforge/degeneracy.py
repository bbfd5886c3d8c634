"""Construction and verification of degeneracy operators by horn filling.

The builder runs one stage per degeneracy index N = 0..D-2. Each stage has
two steps: first extend the system by filling one prescribed horn per
simplex (every identity holds afterwards except d_{N+1} s_N = id), then
build a correction table of double-degeneracy candidates whose N-th faces
replace s_N and restore the missing identity.

Values forced by a subcomplex or by lower degeneracies are never searched:
they are computed from every available representation and the
representations are required to agree, turning the well-definedness of the
construction into a runtime check. Every decision (fill, forcing, witness)
is recorded in an ordered certificate that replays deterministically.

Working tables keep one provisional level above the verified range (the
stage-N step-one values at the top level feed later stages' forced values);
the returned table is restricted to the fully corrected levels n <= D-2.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Optional, Sequence

from .errors import (
    CertificateMismatch,
    ConsistencyViolation,
    IncompatibleSubcomplexStructure,
    MissingDegeneracies,
    MissingWitness,
    NoIdempotentEquivalence,
    NotKan,
    NotQuasiSemicategory,
    ParseError,
    RestrictionMismatch,
    TruncationExhausted,
    UnfillableHorn,
)
from .horn import (
    Horn,
    _filler_indices,
    check_inner,
    check_inner_fibration,
    check_kan,
    compatibility_failures,
    find_idempotent_equivalences,
    is_equivalence,
    is_idempotent,
    p_edge_property,
)
from .sset import (
    SemisimplicialMap,
    SemisimplicialSet,
    SimplexRef,
    Subcomplex,
    ValidationReport,
    validate,
    validate_map,
)


class DegeneracyTable:
    """Partial table of degeneracy operators s_k over a fixed base set.

    ``value(k, n, j)`` is the index in dimension n+1 of s_k applied to the
    j-th n-simplex, or None where undefined. Reverse lookups support the
    degeneracy-image tests of the builder.
    """

    def __init__(self, base: SemisimplicialSet):
        self.base = base
        self._s: dict[tuple[int, int], dict[int, int]] = {}
        self._rev: dict[tuple[int, int], dict[int, int]] = {}

    def set_value(self, k: int, n: int, j: int, value: int) -> None:
        level = self._s.setdefault((k, n), {})
        rev = self._rev.setdefault((k, n), {})
        old = level.get(j)
        if old is not None:
            rev.pop(old, None)
        level[j] = value
        rev[value] = j

    def value(self, k: int, n: int, j: int) -> Optional[int]:
        level = self._s.get((k, n))
        return None if level is None else level.get(j)

    def s(self, k: int, x: SimplexRef) -> SimplexRef:
        v = self.value(k, x.dim, x.index)
        if v is None:
            raise LookupError(f"s_{k} undefined on simplex ({x.dim},{x.index})")
        return SimplexRef(x.dim + 1, v)

    def preimage(self, k: int, n: int, value: int) -> Optional[int]:
        """The j with s_k(x_j) = value for x_j in dimension n, if any."""
        level = self._rev.get((k, n))
        return None if level is None else level.get(value)

    def domain(self):
        return self._s.keys()

    def entries(self):
        """All (k, n, j, value) assignments in canonical order."""
        for (k, n), level in sorted(self._s.items()):
            for j in sorted(level):
                yield k, n, j, level[j]

    def level(self, k: int, n: int) -> Optional[dict[int, int]]:
        return self._s.get((k, n))

    def defined(self, k: int, n: int) -> bool:
        return (k, n) in self._s

    def max_k(self) -> int:
        return max((k for k, _ in self._s), default=-1)

    def copy(self) -> "DegeneracyTable":
        out = DegeneracyTable(self.base)
        out._s = {key: dict(level) for key, level in self._s.items()}
        out._rev = {key: dict(level) for key, level in self._rev.items()}
        return out

    def restricted(self, max_level: int) -> "DegeneracyTable":
        out = DegeneracyTable(self.base)
        for (k, n), level in self._s.items():
            if n <= max_level:
                for j, v in level.items():
                    out.set_value(k, n, j, v)
        return out

    def to_json_dict(self) -> dict:
        if not self._s:
            return {"base_hash": self.base.content_hash(), "s": []}
        top_k = max(k for k, _ in self._s)
        top_n = max(n for _, n in self._s)
        table = []
        for k in range(top_k + 1):
            per_n: list = []
            for n in range(top_n + 1):
                level = self._s.get((k, n))
                if level is None:
                    per_n.append(None)
                    continue
                if len(level) != self.base.cells[n]:
                    raise ValueError(f"level (k={k}, n={n}) is partial; only total levels serialize")
                per_n.append([level[j] for j in range(self.base.cells[n])])
            table.append(per_n)
        return {"base_hash": self.base.content_hash(), "s": table}

    @classmethod
    def from_json_dict(cls, data: Mapping, base: SemisimplicialSet) -> "DegeneracyTable":
        try:
            base_hash = data["base_hash"]
            raw = data["s"]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed degeneracy table: {exc}") from exc
        if base_hash != base.content_hash():
            raise ParseError("degeneracy table was emitted for a different base set")
        out = cls(base)
        for k, per_n in enumerate(raw):
            for n, level in enumerate(per_n):
                if level is None:
                    continue
                if len(level) != base.cells[n]:
                    raise ParseError(f"level (k={k}, n={n}) has {len(level)} entries for {base.cells[n]} simplices")
                for j, v in enumerate(level):
                    out.set_value(k, n, j, int(v))
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, DegeneracyTable):
            return NotImplemented
        return self.base == other.base and self._s == other._s

    def __repr__(self) -> str:
        return f"DegeneracyTable(levels={sorted(self._s)})"


@dataclass
class TTable:
    """Double-degeneracy candidates for one stage, kept for audit."""

    N: int
    t: dict[int, dict[int, int]]


@dataclass
class GoodSystem:
    """Degeneracies s_0..s_N with a staged validity status.

    ``almost`` means the stage-N identity d_{N+1} s_N = id is not yet
    required. The working table keeps the provisional top level (one
    dimension above the corrected range) until the final restriction.
    """

    table: DegeneracyTable
    N: int
    almost: bool = False
    t_table: Optional[TTable] = None

    @property
    def status(self) -> str:
        return f"almost-{self.N}-good" if self.almost else f"{self.N}-good"


@dataclass
class SynthesisInput:
    """Everything a synthesis run consumes.

    In relative mode, ``p`` maps into a base carrying the degeneracies
    ``Y_deg`` and ``A``/``A_deg`` describe a subcomplex whose structure the
    output must extend. ``s0`` (vertex index -> edge index) may be omitted
    where auto-discovery applies.
    """

    X: SemisimplicialSet
    mode: str = "absolute"
    p: Optional[SemisimplicialMap] = None
    Y_deg: Optional[DegeneracyTable] = None
    A: Optional[Subcomplex] = None
    A_deg: Optional[DegeneracyTable] = None
    s0: Optional[Mapping[int, int]] = None
    idempotency_witnesses: Optional[Mapping[int, int]] = None


@dataclass
class SynthesisResult:
    table: DegeneracyTable
    certificate: list
    verification: "SimplicialReport"
    s0: dict[int, int]
    witnesses: dict[int, int]
    bound: int
    stats: dict[str, int]


@dataclass
class SimplicialReport:
    """Exhaustive identity check over a degeneracy table."""

    ok: bool
    checked: int
    violations: list = field(default_factory=list)
    by_family: dict[str, int] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checked": self.checked,
            "violations": [list(v) for v in self.violations],
            "by_family": dict(self.by_family),
        }


# ---------------------------------------------------------------------------
# forced values


def _forced_reps(table: DegeneracyTable, A: Optional[Subcomplex],
                 A_deg: Optional[DegeneracyTable], n: int, j: int,
                 target_k: int) -> list[tuple[str, int]]:
    reps: list[tuple[str, int]] = []
    if A is not None and A_deg is not None and A.contains(n, j):
        v = A_deg.value(target_k, n, j)
        if v is not None:
            reps.append(("subcomplex", v))
    for i in range(target_k):
        y = table.preimage(i, n - 1, j)
        if y is None:
            continue
        mid = table.value(target_k - 1, n - 1, y)
        if mid is None:
            continue
        v = table.value(i, n, mid)
        if v is not None:
            reps.append((f"degenerate:s_{i}", v))
    return reps


def _agree(reps: Sequence[tuple[str, int]], simplex, target_k: int) -> Optional[int]:
    if not reps:
        return None
    values = {v for _, v in reps}
    if len(values) > 1:
        raise ConsistencyViolation(
            f"representations of s_{target_k} at {simplex} disagree: {reps}",
            simplex=simplex, values=list(reps))
    return reps[0][1]


def forced_value(sys: GoodSystem, A_data, x: SimplexRef, target_k: int) -> Optional[SimplexRef]:
    """Value of s_{target_k}(x) forced by the subcomplex or lower degeneracies.

    Every available representation is computed; they must agree, otherwise
    ConsistencyViolation signals an invalid input (for valid inputs the
    overlaps are pull-backs, so agreement is guaranteed). Returns None when
    x is neither in the subcomplex nor a degeneracy image.
    """
    A, A_deg = A_data if A_data is not None else (None, None)
    reps = _forced_reps(sys.table, A, A_deg, x.dim, x.index, target_k)
    value = _agree(reps, (x.dim, x.index), target_k)
    return None if value is None else SimplexRef(x.dim + 1, value)


# ---------------------------------------------------------------------------
# the builder


class _Engine:
    def __init__(self, inp: SynthesisInput, D: int, expected: Optional[list] = None):
        self.inp = inp
        self.X = inp.X
        self.D = D
        self.relative = inp.mode == "relative"
        self.p = inp.p
        self.Ydeg = inp.Y_deg
        self.A = inp.A
        self.Adeg = inp.A_deg
        self.table = DegeneracyTable(self.X)
        self.t_levels: dict[int, dict[int, int]] = {}
        self.records: list = []
        self.expected = expected
        self._cursor = 0
        self.stats = {"forced": 0, "filled": 0, "witness": 0, "consistency_checks": 0}

    # -- bookkeeping --------------------------------------------------------

    def _emit(self, record: dict) -> None:
        if self.expected is not None:
            if self._cursor >= len(self.expected):
                raise CertificateMismatch("certificate has fewer records than the run",
                                          position=self._cursor)
            if self.expected[self._cursor] != record:
                raise CertificateMismatch(
                    f"record {self._cursor} diverges: expected "
                    f"{self.expected[self._cursor]}, recomputed {record}",
                    position=self._cursor)
            self._cursor += 1
        self.records.append(record)

    def _finish(self) -> None:
        if self.expected is not None and self._cursor != len(self.expected):
            raise CertificateMismatch("certificate has more records than the run",
                                      position=self._cursor)

    # -- shared helpers ------------------------------------------------------

    def _proj(self, n: int, j: int) -> int:
        return self.p.apply_index(n, j)

    def _y_deg(self, k: int, n: int, j: int) -> int:
        v = self.Ydeg.value(k, n, j)
        if v is None:
            raise MissingDegeneracies(
                f"target degeneracy s_{k} undefined at level {n}; the relative "
                f"run needs the target table up to level {self.D - 1}")
        return v

    def _level_order(self, n: int, stage: int) -> list[int]:
        # subcomplex images first, then degeneracy images, then the rest
        first, second, rest = [], [], []
        for j in range(self.X.cells[n]):
            if self.A is not None and self.A.contains(n, j):
                first.append(j)
            elif any(self.table.preimage(i, n - 1, j) is not None for i in range(stage)):
                second.append(j)
            else:
                rest.append(j)
        return first + second + rest

    def _forced(self, n: int, j: int, target_k: int) -> Optional[int]:
        reps = _forced_reps(self.table, self.A, self.Adeg, n, j, target_k)
        if len(reps) > 1:
            self.stats["consistency_checks"] += 1
        return _agree(reps, (n, j), target_k)

    def _canonical_fill(self, horn: Horn, target: Optional[int], level: int) -> int:
        bad = compatibility_failures(self.X, horn)
        if bad:
            raise ConsistencyViolation(
                f"prescribed horn at level {level} is incompatible at {bad}; "
                "the current system violates an identity", simplex=(level, bad))
        candidates = _filler_indices(self.X, horn.n, horn.faces)
        if target is not None:
            candidates = [z for z in candidates if self._proj(horn.n, z) == target]
        if not candidates:
            raise UnfillableHorn(
                f"no admissible filler for the ({horn.n},{horn.k}) horn at level {level}",
                horn=horn, level=level, target=target)
        return candidates[0]

    # -- step one: extension -------------------------------------------------

    def _require(self, value: Optional[int], context: str) -> int:
        if value is None:
            raise ConsistencyViolation(f"needed degeneracy value undefined while {context}")
        return value

    def _step1_horn(self, N: int, n: int, j: int) -> Horn:
        faces = {}
        for i in range(n + 2):
            if i == N + 1:
                continue
            if i < N:
                faces[i] = self._require(
                    self.table.value(N - 1, n - 1, self.X.face_index(n, j, i)),
                    f"prescribing face {i} of the extension horn at ({n},{j})")
            elif i == N:
                faces[i] = j
            else:
                faces[i] = self._require(
                    self.table.value(N, n - 1, self.X.face_index(n, j, i - 1)),
                    f"prescribing face {i} of the extension horn at ({n},{j})")
        return Horn.from_map(n + 1, N + 1, faces)

    def _step1(self, N: int) -> None:
        if self.D < N + 1:
            raise TruncationExhausted(f"stage {N} needs truncation at least {N + 1}")
        s0 = self.inp.s0
        for n in range(N, self.D):
            how: dict[int, str] = {}
            for j in self._level_order(n, N):
                target = self._y_deg(N, n, self._proj(n, j)) if self.relative else None
                value = self._forced(n, j, N)
                if value is not None:
                    self.stats["forced"] += 1
                    how[j] = "forced"
                    self._emit({"stage": {"N": N, "step": 1}, "simplex": [n, j],
                                "kind": "forced", "value": value})
                else:
                    horn = self._step1_horn(N, n, j)
                    if n == N == 0:
                        if s0 is None:
                            raise ValueError("stage 0 requires the degree-0 degeneracy candidate s0")
                        value = s0[j]
                        bad = (self.X.face_index(1, value, 0) != j
                               or (target is not None and self._proj(1, value) != target))
                        if bad:
                            raise UnfillableHorn(
                                f"s0 candidate {value} does not fill the base horn at vertex {j}",
                                horn=horn, level=n, target=target)
                    else:
                        value = self._canonical_fill(horn, target, n)
                    self.stats["filled"] += 1
                    how[j] = "filled"
                    self._emit({"stage": {"N": N, "step": 1}, "simplex": [n, j],
                                "kind": "filled", "value": value,
                                "horn": horn.to_json_dict()})
                self.table.set_value(N, n, j, value)
            self._check_step1_level(N, n, how)

    def _check_step1_level(self, N: int, n: int, how: dict[int, str]) -> None:
        # every value, forced or filled, must satisfy the defining equations
        for j in range(self.X.cells[n]):
            v = self.table.value(N, n, j)
            for i in range(n + 2):
                if i == N + 1:
                    continue
                if i < N:
                    want = self.table.value(N - 1, n - 1, self.X.face_index(n, j, i))
                elif i == N:
                    want = j
                else:
                    want = self.table.value(N, n - 1, self.X.face_index(n, j, i - 1))
                if self.X.face_index(n + 1, v, i) != want:
                    self._blame(how.get(j), N, n, j, i)
            if self.relative:
                if self._proj(n + 1, v) != self._y_deg(N, n, self._proj(n, j)):
                    self._blame(how.get(j), N, n, j, "projection")

    def _blame(self, how: Optional[str], N: int, n: int, j: int, i) -> None:
        msg = f"s_{N} at simplex ({n},{j}) violates its defining equation at face {i}"
        if how == "forced" and self.A is not None and self.A.contains(n, j):
            raise IncompatibleSubcomplexStructure(msg, simplex=(n, j))
        raise ConsistencyViolation(msg, simplex=(n, j))

    # -- step two: correction -------------------------------------------------

    def _step2_horn(self, N: int, n: int, j: int, t_prev: dict[int, dict[int, int]]) -> Horn:
        faces = {}
        where = f"prescribing the correction horn at ({n},{j})"
        for i in range(n + 3):
            if i == N:
                continue
            if i < N:
                mid = self._require(
                    self.table.value(N - 1, n - 1, self.X.face_index(n, j, i)), where)
                faces[i] = self._require(self.table.value(N - 1, n, mid), where)
            elif i in (N + 1, N + 2):
                faces[i] = self._require(self.table.value(N, n, j), where)
            else:
                faces[i] = t_prev[n - 1][self.X.face_index(n, j, i - 2)]
        return Horn.from_map(n + 2, N, faces)

    def _step2(self, N: int) -> None:
        if self.D < N + 2:
            raise TruncationExhausted(f"the stage-{N} correction needs truncation at least {N + 2}")
        witnesses = self.inp.idempotency_witnesses
        t: dict[int, dict[int, int]] = {}
        for n in range(N, self.D - 1):
            t[n] = {}
            how: dict[int, str] = {}
            for j in self._level_order(n, N):
                target = None
                if self.relative:
                    target = self._y_deg(N, n + 1, self._y_deg(N, n, self._proj(n, j)))
                reps: list[tuple[str, int]] = []
                if self.A is not None and self.Adeg is not None and self.A.contains(n, j):
                    a1 = self.Adeg.value(N, n, j)
                    a2 = None if a1 is None else self.Adeg.value(N, n + 1, a1)
                    if a2 is not None:
                        reps.append(("subcomplex", a2))
                if any(self.table.preimage(i, n - 1, j) is not None for i in range(N)):
                    s1 = self.table.value(N, n, j)
                    s2 = None if s1 is None else self.table.value(N, n + 1, s1)
                    if s2 is not None:
                        reps.append(("degenerate", s2))
                if len(reps) > 1:
                    self.stats["consistency_checks"] += 1
                value = _agree(reps, (n, j), N)
                if value is not None:
                    self.stats["forced"] += 1
                    how[j] = "forced"
                    self._emit({"stage": {"N": N, "step": 2}, "simplex": [n, j],
                                "kind": "forced", "value": value})
                elif N == 0 and n == 0:
                    value = self._idempotency_witness(j, witnesses, target)
                    self.stats["witness"] += 1
                    how[j] = "witness"
                    self._emit({"stage": {"N": 0, "step": 2}, "simplex": [0, j],
                                "kind": "witness", "value": value})
                else:
                    horn = self._step2_horn(N, n, j, t)
                    value = self._canonical_fill(horn, target, n)
                    self.stats["filled"] += 1
                    how[j] = "filled"
                    self._emit({"stage": {"N": N, "step": 2}, "simplex": [n, j],
                                "kind": "filled", "value": value,
                                "horn": horn.to_json_dict()})
                t[n][j] = value
            self._check_t_level(N, n, t, how)
        # correction: replace s_N below the provisional top level
        for n in range(N, self.D - 1):
            for j, tv in t[n].items():
                self.table.set_value(N, n, j, self.X.face_index(n + 2, tv, N))
        self._check_corrected(N)
        self.t_levels = t

    def _idempotency_witness(self, j: int, witnesses, target: Optional[int]) -> int:
        f = self.table.value(0, 0, j)
        if witnesses is not None:
            w = witnesses.get(j) if hasattr(witnesses, "get") else witnesses[j]
            if w is not None:
                ok = all(self.X.face_index(2, w, i) == f for i in range(3))
                if ok and target is not None:
                    ok = self._proj(2, w) == target
                if not ok:
                    raise MissingWitness(
                        f"supplied idempotency witness {w} at vertex {j} is invalid", vertex=j)
                return w
        if self.X.dim < 2:
            raise MissingWitness(f"no idempotency witness possible at vertex {j}", vertex=j)
        for w in _filler_indices(self.X, 2, ((0, f), (1, f), (2, f))):
            if target is None or self._proj(2, w) == target:
                return w
        raise MissingWitness(f"no idempotency witness found at vertex {j}", vertex=j)

    def _check_t_level(self, N: int, n: int, t: dict[int, dict[int, int]],
                       how: dict[int, str]) -> None:
        for j in range(self.X.cells[n]):
            tv = t[n][j]
            for i in range(n + 3):
                if i == N:
                    continue
                if i < N:
                    mid = self.table.value(N - 1, n - 1, self.X.face_index(n, j, i))
                    want = None if mid is None else self.table.value(N - 1, n, mid)
                elif i in (N + 1, N + 2):
                    want = self.table.value(N, n, j)
                else:
                    want = t[n - 1][self.X.face_index(n, j, i - 2)]
                if self.X.face_index(n + 2, tv, i) != want:
                    self._blame(how.get(j), N, n, j, i)
            if self.relative:
                want = self._y_deg(N, n + 1, self._y_deg(N, n, self._proj(n, j)))
                if self._proj(n + 2, tv) != want:
                    self._blame(how.get(j), N, n, j, "projection")

    def _check_corrected(self, N: int) -> None:
        for n in range(N, self.D - 1):
            for j in range(self.X.cells[n]):
                v = self.table.value(N, n, j)
                if self.X.face_index(n + 1, v, N + 1) != j:
                    raise ConsistencyViolation(
                        f"correction failed: d_{N + 1} s_{N} != id at ({n},{j})",
                        simplex=(n, j))

    # -- driver ----------------------------------------------------------------

    def run(self) -> tuple[DegeneracyTable, list]:
        for N in range(self.D - 1):
            self._step1(N)
            self._step2(N)
        self._finish()
        return self.table.restricted(self.D - 2), self.records


# ---------------------------------------------------------------------------
# the spec'd staged operations


def step1_extend(sys: GoodSystem, inp: SynthesisInput, D: Optional[int] = None) -> GoodSystem:
    """Extend an (N-1)-good system to an almost-N-good one by horn filling."""
    X = inp.X
    bound = X.dim if D is None else min(D, X.dim)
    N = sys.N + 1
    if bound < N + 1:
        raise TruncationExhausted(f"stage {N} needs truncation at least {N + 1}")
    engine = _Engine(inp, bound)
    engine.table = sys.table.copy()
    engine._step1(N)
    return GoodSystem(table=engine.table, N=N, almost=True)


def step2_correct(sys: GoodSystem, inp: SynthesisInput, D: Optional[int] = None) -> GoodSystem:
    """Correct an almost-N-good system to an N-good one via its T-table."""
    X = inp.X
    bound = X.dim if D is None else min(D, X.dim)
    engine = _Engine(inp, bound)
    engine.table = sys.table.copy()
    engine._step2(sys.N)
    return GoodSystem(table=engine.table, N=sys.N, almost=False,
                      t_table=TTable(sys.N, engine.t_levels))


# ---------------------------------------------------------------------------
# entry points


def _as_vertex_map(source, count: int, what: str) -> dict[int, int]:
    out = {}
    for v in range(count):
        try:
            out[v] = int(source[v])
        except (KeyError, IndexError, TypeError) as exc:
            raise ValueError(f"{what} must cover every vertex; missing {v}") from exc
    return out


def _resolve_s0_absolute(X: SemisimplicialSet, inp: SynthesisInput, D: int):
    s0: dict[int, int] = {}
    witnesses: dict[int, int] = {}
    if inp.s0 is None:
        for v in range(X.cells[0]):
            found = find_idempotent_equivalences(X, SimplexRef(0, v), D)
            if not found:
                raise NoIdempotentEquivalence(
                    f"no idempotent equivalence at vertex {v}", vertex=v)
            edge, witness = found[0]
            s0[v] = edge.index
            witnesses[v] = witness.index
        return s0, witnesses
    s0 = _as_vertex_map(inp.s0, X.cells[0], "s0")
    given = inp.idempotency_witnesses
    for v, e in s0.items():
        if X.face_index(1, e, 0) != v or X.face_index(1, e, 1) != v:
            raise NoIdempotentEquivalence(f"s0({v}) = {e} is not a self-edge", vertex=v)
        w = None
        if given is not None:
            w = given.get(v) if hasattr(given, "get") else given[v]
            if w is not None and not all(X.face_index(2, w, i) == e for i in range(3)):
                raise NoIdempotentEquivalence(
                    f"supplied witness {w} at vertex {v} is not an idempotency witness", vertex=v)
        if w is None:
            found = is_idempotent(X, SimplexRef(1, e))
            if found is None:
                raise NoIdempotentEquivalence(f"s0({v}) = {e} is not idempotent", vertex=v)
            w = found.index
        if not is_equivalence(X, SimplexRef(1, e), D).result:
            raise NoIdempotentEquivalence(f"s0({v}) = {e} is not an equivalence", vertex=v)
        witnesses[v] = w
    return s0, witnesses


def synthesize(inp: SynthesisInput, D: Optional[int] = None, *,
               _expected: Optional[list] = None) -> SynthesisResult:
    """Build a full degeneracy table on a quasi-semicategory.

    Alternates extension and correction for N = 0..D-2 and returns the table
    on 0 <= k <= n <= D-2 together with its replayable certificate. Without
    a supplied ``s0``, the lowest-index idempotent equivalence at each
    vertex is used.
    """
    if inp.mode != "absolute":
        raise ValueError("synthesize runs absolute inputs; use synthesize_relative")
    X = inp.X
    bound = X.dim if D is None else min(D, X.dim)
    if bound < 2:
        raise TruncationExhausted(f"synthesis needs truncation at least 2, have {bound}")
    report = validate(X)
    if not report.ok:
        raise ParseError(f"input set fails validation: {report.violations[:3]}")
    inner = check_inner(X, bound)
    if not inner.ok:
        raise NotQuasiSemicategory("an inner horn is unfillable", witness=inner.witness)
    s0, witnesses = _resolve_s0_absolute(X, inp, bound)
    resolved = replace(inp, s0=s0, idempotency_witnesses=witnesses)
    engine = _Engine(resolved, bound, expected=_expected)
    table, records = engine.run()
    verification = verify_simplicial(X, table, bound)
    if not verification.ok:
        raise ConsistencyViolation(
            f"synthesized table failed verification: {verification.violations[:3]}")
    return SynthesisResult(table=table, certificate=records, verification=verification,
                           s0=s0, witnesses=witnesses, bound=bound, stats=engine.stats)


def _resolve_s0_relative(inp: SynthesisInput, D: int):
    X, p, Ydeg, A, Adeg = inp.X, inp.p, inp.Y_deg, inp.A, inp.A_deg
    s0: dict[int, int] = {}
    if inp.s0 is not None:
        s0 = _as_vertex_map(inp.s0, X.cells[0], "s0")
    else:
        for v in range(X.cells[0]):
            if A is not None and A.contains(0, v):
                value = Adeg.value(0, 0, v) if Adeg is not None else None
                if value is None:
                    raise IncompatibleSubcomplexStructure(
                        f"subcomplex vertex {v} lacks a degree-0 degeneracy", simplex=(0, v))
                s0[v] = value
                continue
            want = Ydeg.value(0, 0, p.apply_index(0, v))
            picked = None
            for e in X.with_face(1, 0, v):
                if X.face_index(1, e, 1) != v or p.apply_index(1, e) != want:
                    continue
                if not p_edge_property(p, SimplexRef(1, e), "idempotent", D, Ydeg).result:
                    continue
                if not p_edge_property(p, SimplexRef(1, e), "cartesian", D).result:
                    continue
                if not p_edge_property(p, SimplexRef(1, e), "cocartesian", D).result:
                    continue
                picked = e
                break
            if picked is None:
                raise NoIdempotentEquivalence(
                    f"no admissible degree-0 degeneracy found at vertex {v}", vertex=v)
            s0[v] = picked
    witnesses: dict[int, int] = {}
    given = inp.idempotency_witnesses
    for v, e in s0.items():
        if X.face_index(1, e, 0) != v or X.face_index(1, e, 1) != v:
            raise NoIdempotentEquivalence(f"s0({v}) = {e} is not a self-edge", vertex=v)
        if A is not None and A.contains(0, v) and Adeg is not None:
            a_value = Adeg.value(0, 0, v)
            if a_value is not None and a_value != e:
                raise IncompatibleSubcomplexStructure(
                    f"s0({v}) = {e} disagrees with the subcomplex value {a_value}", simplex=(0, v))
        want = Ydeg.value(0, 0, p.apply_index(0, v))
        if want is not None and p.apply_index(1, e) != want:
            raise ConsistencyViolation(
                f"s0({v}) = {e} does not project to the target degeneracy", simplex=(0, v))
        w = None
        if given is not None:
            w = given.get(v) if hasattr(given, "get") else given[v]
        if w is None:
            verdict = p_edge_property(p, SimplexRef(1, e), "idempotent", D, Ydeg)
            if not verdict.result:
                raise NoIdempotentEquivalence(f"s0({v}) = {e} is not fiberwise idempotent", vertex=v)
            w = verdict.witness.index
        for prop in ("cartesian", "cocartesian"):
            if not p_edge_property(p, SimplexRef(1, e), prop, D).result:
                raise NoIdempotentEquivalence(f"s0({v}) = {e} is not {prop} over the base", vertex=v)
        witnesses[v] = w
    return s0, witnesses


def synthesize_relative(inp: SynthesisInput, D: Optional[int] = None, *,
                        _expected: Optional[list] = None) -> SynthesisResult:
    """Relative synthesis over an inner fibration, extending a subcomplex table.

    All fills are lifts over the image prescribed by the target's
    degeneracies; forced values on the subcomplex are taken from its table.
    The output restricts to the subcomplex table and commutes with the map.
    """
    if inp.mode != "relative":
        raise ValueError("synthesize_relative runs relative inputs")
    if inp.p is None:
        raise ValueError("relative synthesis needs the projection map")
    if inp.Y_deg is None:
        raise MissingDegeneracies("relative synthesis needs the target's degeneracy table")
    X, p, Ydeg = inp.X, inp.p, inp.Y_deg
    if p.source is not X and p.source != X:
        raise ValueError("the projection's source must be the synthesis input set")
    bound = min(X.dim if D is None else D, p.depth)
    if bound < 2:
        raise TruncationExhausted(f"synthesis needs truncation at least 2, have {bound}")
    for label, report in (("input set", validate(X)), ("target set", validate(p.target)),
                          ("projection", validate_map(p))):
        if not report.ok:
            raise ParseError(f"{label} fails validation: {report.violations[:3]}")
    A, Adeg = inp.A, inp.A_deg
    if A is not None:
        closure = A.validate()
        if not closure.ok:
            raise IncompatibleSubcomplexStructure(
                f"subcomplex is not face-closed: {closure.violations[:3]}")
        if Adeg is not None:
            _check_subcomplex_table(X, p, Ydeg, A, Adeg)
    fib = check_inner_fibration(p, bound)
    if not fib.ok:
        raise NotQuasiSemicategory("an inner lifting problem has no solution",
                                   witness=fib.witness)
    s0, witnesses = _resolve_s0_relative(inp, bound)
    resolved = replace(inp, s0=s0, idempotency_witnesses=witnesses)
    engine = _Engine(resolved, bound, expected=_expected)
    table, records = engine.run()
    verification = verify_simplicial(X, table, bound, subcomplex=A, sub_table=Adeg,
                                     pmap=p, target_table=Ydeg)
    if not verification.ok:
        families = {v[0] for v in verification.violations}
        if families <= {"restriction"}:
            raise RestrictionMismatch(
                f"output fails to restrict to the subcomplex table: {verification.violations[:3]}")
        raise ConsistencyViolation(
            f"synthesized table failed verification: {verification.violations[:3]}")
    return SynthesisResult(table=table, certificate=records, verification=verification,
                           s0=s0, witnesses=witnesses, bound=bound, stats=engine.stats)


def _check_subcomplex_table(X, p, Ydeg, A, Adeg) -> None:
    # the subcomplex table must stay inside the subcomplex and project to the target table
    for k, n, j, v in Adeg.entries():
        if not A.contains(n, j):
            raise IncompatibleSubcomplexStructure(
                f"subcomplex table defined at non-member ({n},{j})", simplex=(n, j))
        if not A.contains(n + 1, v):
            raise IncompatibleSubcomplexStructure(
                f"subcomplex degeneracy s_{k}({n},{j}) leaves the subcomplex", simplex=(n, j))
        want = Ydeg.value(k, n, p.apply_index(n, j))
        if want is not None and p.apply_index(n + 1, v) != want:
            raise IncompatibleSubcomplexStructure(
                f"subcomplex degeneracy s_{k}({n},{j}) does not project to the target table",
                simplex=(n, j))


def replay_certificate(inp: SynthesisInput, D: Optional[int], certificate: list) -> DegeneracyTable:
    """Re-execute every recorded decision; any divergence raises CertificateMismatch."""
    if inp.mode == "absolute":
        return synthesize(inp, D, _expected=certificate).table
    return synthesize_relative(inp, D, _expected=certificate).table


# ---------------------------------------------------------------------------
# the automatic degree-0 candidate on Kan sets


@dataclass
class AddendumS0:
    s0: dict[int, int]
    witnesses: dict[int, int]
    bound: int


def addendum_s0(X: SemisimplicialSet, D: Optional[int] = None) -> AddendumS0:
    """On a Kan set, produce an idempotent-equivalence self-edge per vertex.

    Per vertex x: take the lowest-index edge e leaving x, fill the right
    (2,2)-horn with both faces e and read f off face 2 (a self-edge at x),
    then fill the right (3,3)-horn with all three faces equal to that filler
    and read the idempotency witness for f off face 3.
    """
    bound = X.dim if D is None else min(D, X.dim)
    if bound < 3:
        raise TruncationExhausted("the automatic construction needs truncation at least 3")
    kan = check_kan(X, bound)
    if not kan.ok:
        raise NotKan("a horn is unfillable", witness=kan.witness)
    s0: dict[int, int] = {}
    witnesses: dict[int, int] = {}
    equivalence_cache: dict[int, bool] = {}
    for v in range(X.cells[0]):
        e = min(j for j in X.with_face(1, 1, v))
        sigma = _filler_indices(X, 2, ((0, e), (1, e)))[0]
        f = X.face_index(2, sigma, 2)
        z = _filler_indices(X, 3, ((0, sigma), (1, sigma), (2, sigma)))[0]
        w = X.face_index(3, z, 3)
        if any(X.face_index(2, w, i) != f for i in range(3)):
            raise ConsistencyViolation(
                f"witness read-off failed at vertex {v}; the face tables are inconsistent",
                simplex=(0, v))
        if f not in equivalence_cache:
            equivalence_cache[f] = is_equivalence(X, SimplexRef(1, f), bound).result
        if not equivalence_cache[f]:
            raise ConsistencyViolation(
                f"edge {f} is not an equivalence despite the Kan condition", simplex=(1, f))
        s0[v] = f
        witnesses[v] = w
    return AddendumS0(s0=s0, witnesses=witnesses, bound=bound)


# ---------------------------------------------------------------------------
# verification


def verify_simplicial(X: SemisimplicialSet, table: DegeneracyTable,
                      D: Optional[int] = None, *, subcomplex: Optional[Subcomplex] = None,
                      sub_table: Optional[DegeneracyTable] = None,
                      pmap: Optional[SemisimplicialMap] = None,
                      target_table: Optional[DegeneracyTable] = None) -> SimplicialReport:
    """Exhaustively check every identity instance whose terms are in range.

    The three families are the face/degeneracy exchange rules, the two
    identity-section rules, and the degeneracy/degeneracy exchange rule.
    Optionally re-checks the restriction to a subcomplex table and
    compatibility with a map into a base carrying its own table.
    """
    bound = X.dim if D is None else min(D, X.dim)
    violations: list[tuple] = []
    checked = 0
    by_family = {"face_degeneracy": 0, "degeneracy_degeneracy": 0,
                 "restriction": 0, "projection": 0}
    domain = sorted((k, n) for k, n in table.domain() if n + 1 <= bound)
    for k, n in domain:
        level = table.level(k, n)
        for j in sorted(level):
            v = level[j]
            for i in range(n + 2):
                if i < k:
                    want = table.value(k - 1, n - 1, X.face_index(n, j, i))
                    if want is None:
                        continue
                elif i <= k + 1:
                    want = j
                else:
                    want = table.value(k, n - 1, X.face_index(n, j, i - 1))
                    if want is None:
                        continue
                checked += 1
                by_family["face_degeneracy"] += 1
                if X.face_index(n + 1, v, i) != want:
                    violations.append(("face_degeneracy", k, n, j, i))
    for k, n in domain:
        level = table.level(k, n)
        for j in sorted(level):
            skj = level[j]
            for i in range(k + 1):
                lhs = table.value(i, n + 1, skj)
                sij = table.value(i, n, j)
                rhs = None if sij is None else table.value(k + 1, n + 1, sij)
                if lhs is None or rhs is None:
                    continue
                checked += 1
                by_family["degeneracy_degeneracy"] += 1
                if lhs != rhs:
                    violations.append(("degeneracy_degeneracy", k, n, j, i))
    if subcomplex is not None and sub_table is not None:
        for k, n in domain:
            level = table.level(k, n)
            for j in sorted(level):
                if not subcomplex.contains(n, j):
                    continue
                want = sub_table.value(k, n, j)
                if want is None:
                    continue
                checked += 1
                by_family["restriction"] += 1
                if level[j] != want or not subcomplex.contains(n + 1, level[j]):
                    violations.append(("restriction", k, n, j))
    if pmap is not None and target_table is not None:
        for k, n in domain:
            level = table.level(k, n)
            for j in sorted(level):
                want = target_table.value(k, n, pmap.apply_index(n, j))
                if want is None:
                    continue
                checked += 1
                by_family["projection"] += 1
                if pmap.apply_index(n + 1, level[j]) != want:
                    violations.append(("projection", k, n, j))
    return SimplicialReport(not violations, checked, violations, by_family)
