"""Registry of intersection geometry and crossing metadata.

Intersections are loaded from a JSON corpus file; the registry is immutable
after load and safe to share. The stored leg order is the order crossing
options are cycled through by the client.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from . import geo
from .geo import GeoPoint, Heading


class CorpusError(ValueError):
    """Malformed or invariant-violating intersection corpus."""


class NotFoundError(LookupError):
    """Lookup against an empty registry or unknown id."""


@dataclass(frozen=True)
class CrossingLeg:
    """One crosswalk: the street it crosses and how to traverse it."""

    street_name: str
    crosswalk_entry: GeoPoint
    crossing_heading: Heading
    crossing_length_m: float
    ped_phase: int

    def __post_init__(self) -> None:
        if not self.street_name:
            raise CorpusError("leg street_name must be non-empty")
        if self.crossing_length_m <= 0:
            raise CorpusError(
                f"leg '{self.street_name}': crossing_length_m must be > 0, "
                f"got {self.crossing_length_m}"
            )
        if not isinstance(self.ped_phase, int) or self.ped_phase <= 0:
            raise CorpusError(
                f"leg '{self.street_name}': ped_phase must be a positive integer, "
                f"got {self.ped_phase!r}"
            )


@dataclass(frozen=True)
class Intersection:
    """A signalized intersection with its crossable legs in cycle order."""

    id: str
    name: str
    center: GeoPoint
    legs: tuple[CrossingLeg, ...]

    def __post_init__(self) -> None:
        if not self.id:
            raise CorpusError("intersection id must be non-empty")
        if len(self.legs) < 2:
            raise CorpusError(f"intersection '{self.id}': needs >= 2 legs, got {len(self.legs)}")
        names = [leg.street_name for leg in self.legs]
        if len(set(names)) != len(names):
            raise CorpusError(f"intersection '{self.id}': duplicate leg street names in {names}")


class Registry:
    """Immutable collection of intersections keyed by id."""

    def __init__(self, intersections: list[Intersection]):
        by_id: dict[str, Intersection] = {}
        for x in intersections:
            if x.id in by_id:
                raise CorpusError(f"duplicate intersection id '{x.id}'")
            by_id[x.id] = x
        self._by_id = by_id

    def __len__(self) -> int:
        return len(self._by_id)

    def __iter__(self):
        return iter(self._by_id.values())

    def get(self, intersection_id: str) -> Intersection:
        try:
            return self._by_id[intersection_id]
        except KeyError:
            raise NotFoundError(f"unknown intersection '{intersection_id}'") from None

    def nearest_intersection(self, p: GeoPoint) -> tuple[Intersection, float]:
        """Intersection minimizing center distance; ties break on lower id."""
        if not self._by_id:
            raise NotFoundError("registry is empty")
        best = min(self._by_id.values(), key=lambda x: (geo.distance(p, x.center), x.id))
        return best, geo.distance(p, best.center)


def crossing_options(x: Intersection) -> tuple[CrossingLeg, ...]:
    """Legs in stored cycle order (short-tap order)."""
    return x.legs


def _field(obj: dict, key: str, path: str):
    if key not in obj:
        raise CorpusError(f"{path}: missing field '{key}'")
    return obj[key]


def _point(obj, path: str) -> GeoPoint:
    if not isinstance(obj, dict):
        raise CorpusError(f"{path}: expected an object with lat/lon")
    try:
        return GeoPoint(float(_field(obj, "lat", path)), float(_field(obj, "lon", path)))
    except geo.GeoError as e:
        raise CorpusError(f"{path}: {e}") from e


def _leg(obj: dict, path: str) -> CrossingLeg:
    if not isinstance(obj, dict):
        raise CorpusError(f"{path}: expected a leg object")
    ped_phase = _field(obj, "ped_phase", path)
    if not isinstance(ped_phase, int) or isinstance(ped_phase, bool):
        raise CorpusError(f"{path}.ped_phase: expected an integer, got {ped_phase!r}")
    return CrossingLeg(
        street_name=str(_field(obj, "street_name", path)),
        crosswalk_entry=_point(_field(obj, "entry", path), f"{path}.entry"),
        crossing_heading=Heading(float(_field(obj, "heading_deg", path))),
        crossing_length_m=float(_field(obj, "length_m", path)),
        ped_phase=ped_phase,
    )


def loads(text: str) -> Registry:
    """Parse a corpus document; see load() for the schema."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise CorpusError(f"corpus is not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise CorpusError("corpus root must be an object")
    items = _field(doc, "intersections", "corpus")
    if not isinstance(items, list):
        raise CorpusError("corpus.intersections: expected a list")
    intersections = []
    for i, obj in enumerate(items):
        path = f"corpus.intersections[{i}]"
        if not isinstance(obj, dict):
            raise CorpusError(f"{path}: expected an object")
        legs_raw = _field(obj, "legs", path)
        if not isinstance(legs_raw, list):
            raise CorpusError(f"{path}.legs: expected a list")
        legs = tuple(_leg(leg, f"{path}.legs[{j}]") for j, leg in enumerate(legs_raw))
        intersections.append(
            Intersection(
                id=str(_field(obj, "id", path)),
                name=str(_field(obj, "name", path)),
                center=_point(_field(obj, "center", path), f"{path}.center"),
                legs=legs,
            )
        )
    return Registry(intersections)


def load(path: str | Path) -> Registry:
    """Load a corpus file.

    Schema (JSON)::

        {"intersections": [{
            "id": str, "name": str,
            "center": {"lat": deg, "lon": deg},
            "legs": [{
                "street_name": str,
                "entry": {"lat": deg, "lon": deg},
                "heading_deg": deg, "length_m": m, "ped_phase": int}, ...]
        }, ...]}

    Raises:
        CorpusError: naming the offending field path or entity.
    """
    return loads(Path(path).read_text())


def serialize(registry: Registry) -> str:
    """Corpus document that load() round-trips to an equal registry."""
    doc = {
        "intersections": [
            {
                "id": x.id,
                "name": x.name,
                "center": {"lat": x.center.lat_deg, "lon": x.center.lon_deg},
                "legs": [
                    {
                        "street_name": leg.street_name,
                        "entry": {
                            "lat": leg.crosswalk_entry.lat_deg,
                            "lon": leg.crosswalk_entry.lon_deg,
                        },
                        "heading_deg": leg.crossing_heading.deg,
                        "length_m": leg.crossing_length_m,
                        "ped_phase": leg.ped_phase,
                    }
                    for leg in x.legs
                ],
            }
            for x in registry
        ]
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
