"""Horn construction, filler search, and lifting-condition checkers.

All checkers are read-only scans over immutable sets. Verdicts are always
"up to D": nothing is extrapolated beyond the truncation, and a negative
verdict carries a concrete witness. Filler tie-breaking is everywhere the
lowest canonical index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .errors import (
    DimensionTooLow,
    IncompatibleHorn,
    MissingDegeneracies,
    NotASelfEdge,
    ParseError,
)
from .sset import SemisimplicialMap, SemisimplicialSet, SimplexRef, first_edge, last_edge


@dataclass(frozen=True)
class Horn:
    """A dimension-n, index-k horn: faces x_i for every i != k.

    Faces are stored as sorted ``(i, index)`` pairs; the indices refer to
    (n-1)-simplices of the owning set.
    """

    n: int
    k: int
    faces: tuple[tuple[int, int], ...]

    @staticmethod
    def from_map(n: int, k: int, faces: Mapping[int, int]) -> "Horn":
        expected = {i for i in range(n + 1) if i != k}
        if set(faces) != expected:
            raise ValueError(f"horn ({n},{k}) needs faces at {sorted(expected)}")
        return Horn(n, k, tuple(sorted((int(i), int(v)) for i, v in faces.items())))

    def face(self, i: int) -> int:
        for fi, v in self.faces:
            if fi == i:
                return v
        raise KeyError(i)

    def items(self) -> tuple[tuple[int, int], ...]:
        return self.faces

    def to_json_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "faces": {str(i): v for i, v in self.faces}}

    @staticmethod
    def from_json_dict(data: Mapping) -> "Horn":
        try:
            faces = {int(i): int(v) for i, v in data["faces"].items()}
            return Horn.from_map(int(data["n"]), int(data["k"]), faces)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed horn: {exc}") from exc


def compatibility_failures(X: SemisimplicialSet, horn: Horn) -> list[tuple[int, int]]:
    """Pairs (j, i), j < i, both != k, with d_j(x_i) != d_{i-1}(x_j)."""
    m = horn.n - 1
    if m < 1:
        return []
    bad = []
    for j, xj in horn.faces:
        for i, xi in horn.faces:
            if j < i and X.face_index(m, xi, j) != X.face_index(m, xj, i - 1):
                bad.append((j, i))
    return bad


def _filler_indices(X: SemisimplicialSet, n: int, items: Sequence[tuple[int, int]]) -> list[int]:
    # intersect the preimage lists, starting from the scarcest face constraint
    pools = [(i, v, X.with_face(n, i, v)) for i, v in items]
    base_i, _, base = min(pools, key=lambda t: len(t[2]))
    out = []
    for z in base:
        row = X.faces_of(n, z)
        if all(row[i] == v for i, v, _ in pools if i != base_i):
            out.append(z)
    return out


def fillers(X: SemisimplicialSet, horn: Horn) -> list[SimplexRef]:
    """Exactly the n-simplices whose faces match the horn, in canonical order."""
    if not 1 <= horn.n <= X.dim:
        raise DimensionTooLow(f"horn dimension {horn.n} outside 1..{X.dim}")
    limit = X.cells[horn.n - 1]
    for i, v in horn.faces:
        if not 0 <= v < limit:
            raise IncompatibleHorn(f"face {i} of the horn is out of range", horn=horn)
    failures = compatibility_failures(X, horn)
    if failures:
        raise IncompatibleHorn("horn faces fail compatibility", horn=horn, failures=failures)
    return [SimplexRef(horn.n, z) for z in _filler_indices(X, horn.n, horn.faces)]


def compatible_horns(X: SemisimplicialSet, n: int, k: int,
                     restrict: Optional[Mapping[int, Iterable[int]]] = None,
                     descending: bool = False) -> Iterator[Horn]:
    """Enumerate every compatible (n,k) horn, backtracking face by face.

    ``restrict`` limits the candidates at chosen face positions. Assignment
    runs over positions in ascending index order (descending with the flag);
    the yield order is deterministic either way.
    """
    if n < 1 or n > X.dim or X.cells[n - 1] == 0:
        return
    m = n - 1
    positions = [i for i in range(n + 1) if i != k]
    if descending:
        positions.reverse()
    allowed = {i: frozenset(pool) for i, pool in (restrict or {}).items()}
    assigned: dict[int, int] = {}

    def candidates(i: int) -> Iterable[int]:
        required = {}
        for j, xj in assigned.items():
            if j < i:
                slot, value = j, X.face_index(m, xj, i - 1)
            else:
                slot, value = j - 1, X.face_index(m, xj, i)
            if required.setdefault(slot, value) != value:
                return []
        if required:
            pools = [(fi, fv, X.with_face(m, fi, fv)) for fi, fv in required.items()]
            base_i, _, base = min(pools, key=lambda t: len(t[2]))
            cands = [z for z in base
                     if all(X.face_index(m, z, fi) == fv for fi, fv, _ in pools if fi != base_i)]
        else:
            cands = range(X.cells[m])
        if i in allowed:
            pool = allowed[i]
            cands = [z for z in cands if z in pool]
        return cands

    def extend(pos: int) -> Iterator[Horn]:
        if pos == len(positions):
            yield Horn.from_map(n, k, assigned)
            return
        i = positions[pos]
        for z in candidates(i):
            assigned[i] = z
            yield from extend(pos + 1)
            del assigned[i]

    yield from extend(0)


@dataclass
class HornVerdict:
    """Outcome of an exhaustive horn-filling scan up to a bound."""

    ok: bool
    bound: int
    witness: Optional[Horn] = None
    checked: int = 0

    def to_json_dict(self) -> dict:
        out = {"result": self.ok, "bound": self.bound, "checked": self.checked}
        if self.witness is not None:
            out["witness"] = self.witness.to_json_dict()
        return out


def check_inner(X: SemisimplicialSet, D: Optional[int] = None) -> HornVerdict:
    """Every compatible inner horn (0 < k < n <= D) has at least one filler."""
    bound = X.dim if D is None else min(D, X.dim)
    checked = 0
    for n in range(2, bound + 1):
        for k in range(n - 1, 0, -1):
            for horn in compatible_horns(X, n, k):
                checked += 1
                if not _filler_indices(X, n, horn.faces):
                    return HornVerdict(False, bound, horn, checked)
    return HornVerdict(True, bound, None, checked)


def check_kan(X: SemisimplicialSet, D: Optional[int] = None) -> HornVerdict:
    """Every compatible horn fills, outer horns and the two n = 1 shapes included."""
    bound = X.dim if D is None else min(D, X.dim)
    checked = 0
    for n in range(1, bound + 1):
        for k in range(n, -1, -1):
            for horn in compatible_horns(X, n, k):
                checked += 1
                if not _filler_indices(X, n, horn.faces):
                    return HornVerdict(False, bound, horn, checked)
    return HornVerdict(True, bound, None, checked)


@dataclass
class EdgeVerdict:
    """Verdict for an edge property, verified up to a dimension bound."""

    edge: SimplexRef
    property: str
    bound: int
    result: bool
    witness: object = None

    def to_json_dict(self) -> dict:
        out = {
            "edge": self.edge.index,
            "property": self.property,
            "bound": self.bound,
            "result": self.result,
        }
        if isinstance(self.witness, Horn):
            out["witness"] = self.witness.to_json_dict()
        elif isinstance(self.witness, SimplexRef):
            out["witness"] = {"dim": self.witness.dim, "index": self.witness.index}
        elif isinstance(self.witness, tuple):
            horn, y = self.witness
            out["witness"] = {"horn": horn.to_json_dict(), "target": y.index}
        elif self.witness is not None:
            out["witness"] = self.witness
        return out


def _edge_pool(X: SemisimplicialSet, m: int, f: int, end: str) -> list[int]:
    # m-simplices whose last (resp. first) edge is f
    picker = last_edge if end == "last" else first_edge
    return [j for j in range(X.cells[m]) if picker(X, SimplexRef(m, j)).index == f]


def _cartesian_horns(X, n, f):
    pool = _edge_pool(X, n - 1, f, "last")
    return compatible_horns(X, n, n, restrict={0: pool})


def _cocartesian_horns(X, n, f):
    pool = _edge_pool(X, n - 1, f, "first")
    return compatible_horns(X, n, 0, restrict={n: pool}, descending=True)


def edge_property(X: SemisimplicialSet, f: SimplexRef, property: str,
                  D: Optional[int] = None) -> EdgeVerdict:
    """Cartesian: every right horn whose last edge is f fills; cocartesian dual.

    The relevant edge is read off a present face: last_edge(x_0) for right
    horns, first_edge(x_n) for left horns.
    """
    if property not in ("cartesian", "cocartesian"):
        raise ValueError(f"unknown edge property {property!r}")
    bound = X.dim if D is None else min(D, X.dim)
    horns = _cartesian_horns if property == "cartesian" else _cocartesian_horns
    for n in range(2, bound + 1):
        for horn in horns(X, n, f.index):
            if not _filler_indices(X, n, horn.faces):
                return EdgeVerdict(f, property, bound, False, horn)
    return EdgeVerdict(f, property, bound, True)


def is_equivalence(X: SemisimplicialSet, f: SimplexRef, D: Optional[int] = None) -> EdgeVerdict:
    """Conjunction of the cartesian and cocartesian verdicts at bound D."""
    cart = edge_property(X, f, "cartesian", D)
    if not cart.result:
        return EdgeVerdict(f, "equivalence", cart.bound, False, cart.witness)
    cocart = edge_property(X, f, "cocartesian", D)
    return EdgeVerdict(f, "equivalence", cocart.bound, cocart.result, cocart.witness)


def is_idempotent(X: SemisimplicialSet, f: SimplexRef) -> Optional[SimplexRef]:
    """First 2-simplex all of whose faces are f, or None."""
    if X.face_index(1, f.index, 0) != X.face_index(1, f.index, 1):
        raise NotASelfEdge(f"edge {f.index} has distinct endpoints")
    if X.dim < 2:
        return None
    matches = _filler_indices(X, 2, ((0, f.index), (1, f.index), (2, f.index)))
    return SimplexRef(2, matches[0]) if matches else None


def find_idempotent_equivalences(X: SemisimplicialSet, x: SimplexRef,
                                 D: Optional[int] = None) -> list[tuple[SimplexRef, SimplexRef]]:
    """All idempotent-equivalence self-edges at a vertex, with their witnesses."""
    out = []
    if X.dim < 1:
        return out
    for j in X.with_face(1, 0, x.index):
        if X.face_index(1, j, 1) != x.index:
            continue
        f = SimplexRef(1, j)
        witness = is_idempotent(X, f)
        if witness is None:
            continue
        if is_equivalence(X, f, D).result:
            out.append((f, witness))
    return out


@dataclass
class FibrationVerdict:
    """Outcome of a relative lifting scan over a semisimplicial map."""

    ok: bool
    bound: int
    witness: Optional[tuple[Horn, SimplexRef]] = None
    checked: int = 0

    def to_json_dict(self) -> dict:
        out = {"result": self.ok, "bound": self.bound, "checked": self.checked}
        if self.witness is not None:
            horn, y = self.witness
            out["witness"] = {"horn": horn.to_json_dict(), "target": y.index}
        return out


def _project_horn(p: SemisimplicialMap, horn: Horn) -> Horn:
    m = horn.n - 1
    return Horn(horn.n, horn.k, tuple((i, p.apply_index(m, v)) for i, v in horn.faces))


def _lifts_exist(p: SemisimplicialMap, horn: Horn) -> Optional[SimplexRef]:
    """First target simplex over the projected horn with no lift, if any."""
    X, Y = p.source, p.target
    n = horn.n
    zs = _filler_indices(X, n, horn.faces)
    images = {p.apply_index(n, z) for z in zs}
    for y in _filler_indices(Y, n, _project_horn(p, horn).faces):
        if y not in images:
            return SimplexRef(n, y)
    return None


def check_inner_fibration(p: SemisimplicialMap, D: Optional[int] = None) -> FibrationVerdict:
    """Every inner horn of the source lifts against every matching target simplex."""
    bound = p.depth if D is None else min(D, p.depth)
    checked = 0
    for n in range(2, bound + 1):
        for k in range(n - 1, 0, -1):
            for horn in compatible_horns(p.source, n, k):
                checked += 1
                missing = _lifts_exist(p, horn)
                if missing is not None:
                    return FibrationVerdict(False, bound, (horn, missing), checked)
    return FibrationVerdict(True, bound, None, checked)


def p_edge_property(p: SemisimplicialMap, f: SimplexRef, property: str,
                    D: Optional[int] = None, Y_degeneracies=None) -> EdgeVerdict:
    """Relative version of the edge properties over a map p.

    cartesian/cocartesian: the absolute horn condition with a lift demanded
    over every matching target simplex. idempotent: a 2-simplex with all
    faces f projecting to the doubly degenerate image of the base vertex.
    """
    X, Y = p.source, p.target
    bound = p.depth if D is None else min(D, p.depth)
    if property == "idempotent":
        if Y_degeneracies is None:
            raise MissingDegeneracies("the idempotent check needs the target's degeneracies")
        if X.face_index(1, f.index, 0) != X.face_index(1, f.index, 1):
            raise NotASelfEdge(f"edge {f.index} has distinct endpoints")
        x = X.face_index(1, f.index, 0)
        py = p.apply_index(0, x)
        e1 = Y_degeneracies.value(0, 0, py)
        target = Y_degeneracies.value(0, 1, e1) if e1 is not None else None
        if target is None:
            raise MissingDegeneracies("target degeneracies undefined at the base vertex")
        if X.dim >= 2:
            for z in _filler_indices(X, 2, ((0, f.index), (1, f.index), (2, f.index))):
                if p.apply_index(2, z) == target:
                    return EdgeVerdict(f, property, bound, True, SimplexRef(2, z))
        return EdgeVerdict(f, property, bound, False,
                           {"exhausted": {"dim2_scanned": X.cells[2] if X.dim >= 2 else 0}})
    if property not in ("cartesian", "cocartesian"):
        raise ValueError(f"unknown edge property {property!r}")
    horns = _cartesian_horns if property == "cartesian" else _cocartesian_horns
    for n in range(2, bound + 1):
        for horn in horns(X, n, f.index):
            missing = _lifts_exist(p, horn)
            if missing is not None:
                return EdgeVerdict(f, property, bound, False, (horn, missing))
    return EdgeVerdict(f, property, bound, True)
