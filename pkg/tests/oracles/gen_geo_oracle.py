"""Regenerate the frozen geodesic oracle table used by test_geo.py.

Evaluates the textbook haversine distance and initial-bearing formulas in
50-digit precision (mpmath) on a sphere of radius 6,371,008.8 m. Run by hand;
the output is frozen into tests/test_geo.py and must not be produced by the
library under test.

    python tests/oracles/gen_geo_oracle.py
"""

from mpmath import mp, mpf, sin, cos, atan2, sqrt, radians, degrees

mp.dps = 50

RADIUS_M = mpf("6371008.8")

PAIRS = [
    # (lat1, lon1, lat2, lon2) - mix of short hops, city scale, continental,
    # high latitude, dateline crossing, and near-polar legs.
    (40.7420, -74.1790, 40.7421, -74.1790),
    (40.7420, -74.1790, 40.7420, -74.1779),
    (40.7424, -74.1790, 40.7430, -74.1800),
    (40.7424, -74.1790, 40.7500, -74.1700),
    (40.7424, -74.1790, 40.7350, -74.1900),
    (40.7128, -74.0060, 40.7484, -73.9857),
    (40.7128, -74.0060, 42.3601, -71.0589),
    (40.7128, -74.0060, 34.0522, -118.2437),
    (51.5074, -0.1278, 48.8566, 2.3522),
    (51.5074, -0.1278, 40.7128, -74.0060),
    (35.6762, 139.6503, 37.7749, -122.4194),
    (-33.8688, 151.2093, -36.8485, 174.7633),
    (-33.8688, 151.2093, 34.0522, -118.2437),
    (64.1466, -21.9426, 78.2232, 15.6267),
    (78.2232, 15.6267, 69.6492, 18.9553),
    (-77.8460, 166.6760, -53.1638, -70.9171),
    (1.3521, 103.8198, 1.2903, 103.8520),
    (0.0, 0.0, 0.5, 0.5),
    (0.0, 179.9, 0.0, -179.9),
    (10.0, 179.5, -5.0, -178.5),
    (-0.0300, -78.4500, 0.0300, -78.4400),
    (59.9139, 10.7522, 59.3293, 18.0686),
    (19.4326, -99.1332, 19.4340, -99.1320),
    (45.0, -90.0, 45.0001, -89.9999),
    (22.3193, 114.1694, 22.2783, 114.1747),
]


def haversine(lat1, lon1, lat2, lon2):
    p1, p2 = radians(mpf(str(lat1))), radians(mpf(str(lat2)))
    dp = radians(mpf(str(lat2)) - mpf(str(lat1)))
    dl = radians(mpf(str(lon2)) - mpf(str(lon1)))
    a = sin(dp / 2) ** 2 + cos(p1) * cos(p2) * sin(dl / 2) ** 2
    return RADIUS_M * 2 * atan2(sqrt(a), sqrt(1 - a))


def initial_bearing(lat1, lon1, lat2, lon2):
    p1, p2 = radians(mpf(str(lat1))), radians(mpf(str(lat2)))
    dl = radians(mpf(str(lon2)) - mpf(str(lon1)))
    x = sin(dl) * cos(p2)
    y = cos(p1) * sin(p2) - sin(p1) * cos(p2) * cos(dl)
    b = degrees(atan2(x, y))
    return b % 360


if __name__ == "__main__":
    print("ORACLE_PAIRS = [")
    print("    # (lat1, lon1, lat2, lon2, distance_m, bearing_deg)")
    for lat1, lon1, lat2, lon2 in PAIRS:
        d = haversine(lat1, lon1, lat2, lon2)
        b = initial_bearing(lat1, lon1, lat2, lon2)
        print(
            f"    ({lat1}, {lon1}, {lat2}, {lon2}, "
            f"{mp.nstr(d, 17)}, {mp.nstr(b, 17)}),"
        )
    print("]")
