"""Geodesic primitives: distance, bearing, heading error, proximity zones.

All positions are WGS-84 latitude/longitude pairs treated as points on a
sphere with the mean Earth radius. Headings are true-north-referenced
compass bearings, clockwise positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

EARTH_RADIUS_M = 6_371_008.8

# Distance-to-go thresholds (m) at which approach announcements fire,
# outermost first.
BAND_THRESHOLDS_M = (500, 400, 300, 200, 100)

DEFAULT_ARRIVAL_RADIUS_M = 15.0


class GeoError(ValueError):
    """Invalid coordinate or undefined geodesic result."""


@dataclass(frozen=True)
class GeoPoint:
    """A WGS-84 position in degrees."""

    lat_deg: float
    lon_deg: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lat_deg) and math.isfinite(self.lon_deg)):
            raise GeoError(f"coordinates must be finite, got ({self.lat_deg}, {self.lon_deg})")
        if not -90.0 <= self.lat_deg <= 90.0:
            raise GeoError(f"latitude {self.lat_deg} outside [-90, 90]")
        if not -180.0 < self.lon_deg <= 180.0:
            raise GeoError(f"longitude {self.lon_deg} outside (-180, 180]")


@dataclass(frozen=True)
class Heading:
    """A compass bearing in degrees, normalized to [0, 360); 0 = true north."""

    deg: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.deg):
            raise GeoError(f"heading must be finite, got {self.deg}")
        object.__setattr__(self, "deg", self.deg % 360.0)


@dataclass(frozen=True)
class ProximityZone:
    """Where a distance-to-go falls relative to the announcement bands.

    ``kind`` is one of ``"FAR"`` (beyond the outermost band), ``"BAND"``
    (``band_m`` holds the threshold whose (k-100, k] interval contains the
    distance), or ``"ARRIVED"`` (within the arrival radius).
    """

    kind: str
    band_m: int | None = None

    @classmethod
    def far(cls) -> "ProximityZone":
        return cls("FAR")

    @classmethod
    def band(cls, threshold_m: int) -> "ProximityZone":
        if threshold_m not in BAND_THRESHOLDS_M:
            raise GeoError(f"no {threshold_m} m announcement band")
        return cls("BAND", threshold_m)

    @classmethod
    def arrived(cls) -> "ProximityZone":
        return cls("ARRIVED")

    def steps_to_arrival(self) -> int:
        """Rank of the zone on the approach; 0 = arrived, growing outward."""
        if self.kind == "ARRIVED":
            return 0
        if self.kind == "BAND":
            return self.band_m // 100  # type: ignore[operator]
        return len(BAND_THRESHOLDS_M) + 1


def distance(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle (haversine) distance between two points in meters.

    Symmetric by construction: the formula evaluates identically with the
    endpoints swapped.
    """
    phi1 = math.radians(a.lat_deg)
    phi2 = math.radians(b.lat_deg)
    dphi = math.radians(b.lat_deg - a.lat_deg)
    dlam = math.radians(b.lon_deg - a.lon_deg)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2.0) ** 2
    return EARTH_RADIUS_M * 2.0 * math.atan2(math.sqrt(h), math.sqrt(1.0 - h))


def bearing(origin: GeoPoint, target: GeoPoint) -> Heading:
    """Initial great-circle bearing from ``origin`` toward ``target``.

    Raises:
        GeoError: for coincident or antipodal endpoints, where the initial
            bearing is undefined.
    """
    phi1 = math.radians(origin.lat_deg)
    phi2 = math.radians(target.lat_deg)
    dlam = math.radians(target.lon_deg - origin.lon_deg)
    x = math.sin(dlam) * math.cos(phi2)
    y = math.cos(phi1) * math.sin(phi2) - math.sin(phi1) * math.cos(phi2) * math.cos(dlam)
    if x == 0.0 and y == 0.0:
        raise GeoError(f"bearing undefined between {origin} and {target}")
    return Heading(math.degrees(math.atan2(x, y)))


def destination(origin: GeoPoint, heading: Heading, distance_m: float) -> GeoPoint:
    """Point reached by travelling ``distance_m`` along ``heading``."""
    if distance_m < 0:
        raise GeoError(f"travel distance must be >= 0, got {distance_m}")
    if distance_m == 0:
        return origin
    delta = distance_m / EARTH_RADIUS_M
    theta = math.radians(heading.deg)
    phi1 = math.radians(origin.lat_deg)
    lam1 = math.radians(origin.lon_deg)
    phi2 = math.asin(
        math.sin(phi1) * math.cos(delta) + math.cos(phi1) * math.sin(delta) * math.cos(theta)
    )
    lam2 = lam1 + math.atan2(
        math.sin(theta) * math.sin(delta) * math.cos(phi1),
        math.cos(delta) - math.sin(phi1) * math.sin(phi2),
    )
    lon = math.degrees(lam2)
    lon = (lon + 540.0) % 360.0 - 180.0
    if lon == -180.0:
        lon = 180.0
    return GeoPoint(math.degrees(phi2), lon)


def heading_error(current: Heading, target: Heading) -> float:
    """Signed turn from ``current`` to ``target`` in (-180, 180].

    Positive means turn clockwise (right) by that many degrees.
    """
    err = (target.deg - current.deg) % 360.0
    if err > 180.0:
        err -= 360.0
    return err


def zone_of(distance_m: float, arrival_radius_m: float = DEFAULT_ARRIVAL_RADIUS_M) -> ProximityZone:
    """Classify a distance-to-go against the announcement bands.

    Arrived within ``arrival_radius_m``; Far beyond the outermost band;
    otherwise the 100 m band whose upper edge is ``ceil(d/100)*100``.
    """
    if not math.isfinite(distance_m) or distance_m < 0:
        raise GeoError(f"distance must be finite and >= 0, got {distance_m}")
    if arrival_radius_m <= 0:
        raise GeoError(f"arrival radius must be > 0, got {arrival_radius_m}")
    if distance_m <= arrival_radius_m:
        return ProximityZone.arrived()
    if distance_m > BAND_THRESHOLDS_M[0]:
        return ProximityZone.far()
    return ProximityZone.band(int(math.ceil(distance_m / 100.0)) * 100)
