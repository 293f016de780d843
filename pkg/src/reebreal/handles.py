"""Handle plans for most fundamental handlebodies and their boundary invariants.

A plan starts from the disk D^m, whose boundary is a single sphere (component
0), and attaches handles one after another.  Attachment data is symbolic: each
handle names the boundary component(s) it lands in, an orientation flag for
1-handles, and framing/linking integers for 2-handles when m = 4.

Boundary bookkeeping, per handle of index k:

* ``k = m-1`` (m >= 3): attached along a separating sphere of the original
  disk boundary.  Splits off a fresh S^{m-1} component with the next free id.
* ``k = 1`` bridging two components: connected sum, the components merge.
* ``k = 1`` with both feet in one component (m >= 3): adds an S^1 x S^{m-2}
  summand, or its twisted version when orientation reversing.
* m = 2: every handle is a band.  An untwisted band with both feet on one
  circle splits it, a twisted one keeps one circle, a band across two circles
  merges them.
* other k: attached inside one component; for m = 4 these are the 2-handles
  of a surgery presentation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .graph import PreimageLabel, Sphere, StructuralError, Surface, Surgery, \
    is_sphere_like, label_problems, label_str
from .zalgebra import AbelianInvariants, IntMatrix, cokernel_invariants, direct_sum


class LabelError(ValueError):
    """A boundary target is not legal in the requested dimension."""


@dataclass(frozen=True)
class Handle:
    index: int
    component: int
    orientation_preserving: bool = True
    framing: Optional[int] = None
    component_to: Optional[int] = None
    # (position of an earlier 2-handle in the plan, linking number)
    linking: tuple[tuple[int, int], ...] = ()

    def to_json(self) -> dict:
        out = {"index": self.index, "component": self.component,
               "orientation_preserving": self.orientation_preserving,
               "framing": self.framing}
        if self.component_to is not None:
            out["component_to"] = self.component_to
        if self.linking:
            out["linking"] = [list(p) for p in self.linking]
        return out

    @classmethod
    def from_json(cls, obj) -> "Handle":
        try:
            return cls(index=int(obj["index"]), component=int(obj["component"]),
                       orientation_preserving=bool(obj.get("orientation_preserving", True)),
                       framing=None if obj.get("framing") is None else int(obj["framing"]),
                       component_to=None if obj.get("component_to") is None
                       else int(obj["component_to"]),
                       linking=tuple((int(p), int(q)) for p, q in obj.get("linking", ())))
        except (KeyError, TypeError, ValueError) as exc:
            raise StructuralError(f"bad handle entry {obj!r}: {exc}") from None


@dataclass(frozen=True)
class HandlebodyPlan:
    dimension: int
    handles: tuple[Handle, ...]
    most_fundamental: bool = True

    def indices(self) -> list[int]:
        return [h.index for h in self.handles]

    def to_json(self) -> dict:
        return {"dimension": self.dimension, "most_fundamental": self.most_fundamental,
                "handles": [h.to_json() for h in self.handles]}

    @classmethod
    def from_json(cls, obj) -> "HandlebodyPlan":
        try:
            m = int(obj["dimension"])
            handles = tuple(Handle.from_json(h) for h in obj["handles"])
        except (KeyError, TypeError, ValueError) as exc:
            raise StructuralError(f"bad plan document: {exc}") from None
        return cls(m, handles, bool(obj.get("most_fundamental", True)))


@dataclass(frozen=True)
class BoundaryComponent:
    chi: int
    orientable: bool
    summands: int
    genus: Optional[int] = None       # m = 3, orientable
    crosscaps: Optional[int] = None   # m = 3, non-orientable
    h1: Optional[AbelianInvariants] = None

    def to_json(self) -> dict:
        return {"chi": self.chi, "orientable": self.orientable, "summands": self.summands,
                "genus": self.genus, "crosscaps": self.crosscaps,
                "h1": None if self.h1 is None else self.h1.to_json()}


@dataclass(frozen=True)
class BoundaryInvariants:
    components: tuple[BoundaryComponent, ...]
    handlebody_chi: int

    def to_json(self) -> dict:
        return {"handlebody_chi": self.handlebody_chi,
                "components": [c.to_json() for c in self.components]}


# ---------------------------------------------------------------------------

def euler_characteristic(plan: HandlebodyPlan) -> int:
    return 1 + sum((-1) ** h.index for h in plan.handles)


@dataclass
class _Comp:
    chi: int
    summands: int = 0
    orientable: bool = True
    twohandles: list = field(default_factory=list)
    opaque: bool = False  # carries handles whose effect on H1 we do not model


def check_plan(plan: HandlebodyPlan) -> None:
    """Raise StructuralError unless the plan is well formed."""
    _walk(plan)


def _walk(plan: HandlebodyPlan) -> dict[int, _Comp]:
    m = plan.dimension
    if m < 2:
        raise StructuralError(f"dimension must be > 1, got {m}")
    if not plan.handles:
        raise StructuralError("a handlebody plan needs at least one handle")
    odd = m % 2 == 1
    sphere_chi = 2 if odd else 0
    comps: dict[int, _Comp] = {0: _Comp(sphere_chi)}
    next_id = 1
    where2: dict[int, int] = {}

    def live(c: int, pos: int) -> _Comp:
        if c not in comps:
            raise StructuralError(f"handle {pos} references missing boundary component {c}")
        return comps[c]

    for pos, h in enumerate(plan.handles):
        k = h.index
        if not 1 <= k <= m - 1:
            raise StructuralError(f"handle {pos} has index {k}, outside 1..{m - 1}")
        delta = 2 * (-1) ** k if odd else 0
        comp = live(h.component, pos)
        other = h.component_to
        if other is not None and other != h.component:
            if k != 1:
                raise StructuralError(f"handle {pos}: only 1-handles may bridge components")
            b = live(other, pos)
            comp.chi += b.chi + delta
            comp.summands += b.summands
            comp.orientable = comp.orientable and b.orientable
            comp.twohandles += b.twohandles
            comp.opaque = comp.opaque or b.opaque
            del comps[other]
            for p, c in where2.items():
                if c == other:
                    where2[p] = h.component
            continue
        if m == 2:
            if h.orientation_preserving:
                comps[next_id] = _Comp(0)
                next_id += 1
            continue
        if k == m - 1:
            if other is not None:
                raise StructuralError(f"handle {pos}: an index-{k} handle has one attaching sphere")
            comps[next_id] = _Comp(sphere_chi)
            next_id += 1
            continue
        if k == 1:
            comp.chi += delta
            comp.summands += 1
            comp.orientable = comp.orientable and h.orientation_preserving
            continue
        comp.chi += delta
        if m == 4 and k == 2:
            if h.framing is None:
                raise StructuralError(f"handle {pos}: a 2-handle needs a framing when m=4")
            for p, lk in h.linking:
                if p not in where2:
                    raise StructuralError(f"handle {pos} links with {p}, which is not an "
                                          f"earlier 2-handle")
                if where2[p] != h.component:
                    raise StructuralError(f"handle {pos} links with handle {p} in another "
                                          f"boundary component")
            where2[pos] = h.component
            comp.twohandles.append(pos)
        else:
            comp.opaque = True
    return comps


def _linking_matrix(plan: HandlebodyPlan, positions: Sequence[int]) -> IntMatrix:
    idx = {p: i for i, p in enumerate(positions)}
    n = len(positions)
    rows = [[0] * n for _ in range(n)]
    for p in positions:
        h = plan.handles[p]
        rows[idx[p]][idx[p]] = h.framing
        for q, lk in h.linking:
            rows[idx[p]][idx[q]] += lk
            rows[idx[q]][idx[p]] += lk
    return IntMatrix.from_rows(rows, n)


def boundary_invariants(plan: HandlebodyPlan) -> BoundaryInvariants:
    m = plan.dimension
    comps = _walk(plan)
    out = []
    for cid in sorted(comps):
        c = comps[cid]
        genus = crosscaps = None
        h1 = None
        if m == 2:
            h1 = AbelianInvariants(1)
            orientable = True
        else:
            orientable = c.orientable
            if m == 3:
                if orientable:
                    genus = c.summands
                    h1 = AbelianInvariants(2 * genus)
                else:
                    crosscaps = 2 * c.summands
                    h1 = direct_sum([AbelianInvariants(crosscaps - 1), AbelianInvariants(0, (2,))])
            elif orientable and not c.opaque:
                h1 = AbelianInvariants(c.summands)
                if c.twohandles:
                    h1 = h1 + cokernel_invariants(_linking_matrix(plan, c.twohandles))
        out.append(BoundaryComponent(chi=c.chi, orientable=orientable, summands=c.summands,
                                     genus=genus, crosscaps=crosscaps, h1=h1))
    inv = BoundaryInvariants(tuple(out), euler_characteristic(plan))
    if m % 2 == 1 and sum(c.chi for c in inv.components) != 2 * inv.handlebody_chi:
        raise AssertionError("boundary Euler characteristic is not twice the handlebody's")
    return inv


# ---------------------------------------------------------------------------

def sphere_plan(m: int) -> HandlebodyPlan:
    """D^m with a 1-handle and a cancelling-on-the-boundary (m-1)-handle.

    The (m-1)-handle's sphere separates the two feet of the 1-handle, so the
    boundary is again S^{m-1}.
    """
    return HandlebodyPlan(m, (Handle(m - 1, 0), Handle(1, 0, component_to=1)))


def _component_handles(m: int, label: PreimageLabel, comp: int, offset: int) -> list[Handle]:
    if isinstance(label, Sphere):
        return []
    if isinstance(label, Surface):
        if label.orientable:
            return [Handle(1, comp) for _ in range(label.genus)]
        return [Handle(1, comp, orientation_preserving=False) for _ in range(label.crosscaps // 2)]
    out = []
    for i, row in enumerate(label.matrix):
        links = tuple((offset + j, row[j]) for j in range(i) if row[j])
        out.append(Handle(2, comp, framing=row[i], linking=links))
    return out


def attach_plan_for_boundary(m: int, targets: Sequence[PreimageLabel]) -> HandlebodyPlan:
    """Build a most fundamental plan whose boundary components match ``targets`` in order."""
    if not targets:
        raise ValueError("attach_plan_for_boundary needs at least one target")
    for t in targets:
        problems = label_problems(t, m)
        if problems:
            raise LabelError(f"{label_str(t)} is not legal for m={m}: {problems[0][1]}")
    if len(targets) == 1 and is_sphere_like(targets[0]):
        return sphere_plan(m)
    handles = [Handle(m - 1, 0) for _ in range(len(targets) - 1)]
    for comp, t in enumerate(targets):
        handles.extend(_component_handles(m, t, comp, len(handles)))
    return HandlebodyPlan(m, tuple(handles))


def target_matches(component: BoundaryComponent, label: PreimageLabel, m: int) -> bool:
    """Do the computed invariants of a boundary component agree with a label?"""
    if m == 2:
        return isinstance(label, Sphere)
    if m == 3:
        if isinstance(label, Sphere):
            return component.orientable and component.genus == 0
        if isinstance(label, Surface):
            if label.orientable:
                return component.orientable and component.genus == label.genus
            return not component.orientable and component.crosscaps == label.crosscaps
        return False
    if m == 4:
        if component.h1 is None or not component.orientable:
            return False
        if isinstance(label, Sphere):
            return component.h1.trivial
        if isinstance(label, Surgery):
            expected = cokernel_invariants(IntMatrix.from_rows(label.matrix, label.size))
            return component.h1 == expected
        return False
    return isinstance(label, Sphere) and component.orientable and component.summands == 0
