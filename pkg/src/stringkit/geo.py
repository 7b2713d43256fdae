"""Offline geographic enrichment.

Postal codes resolve against a bundled tab-separated lookup table
(``country_code  postal_code  latitude  longitude``, one record per line,
the column order of the public GeoNames postal dumps reduced to four
fields). Latitude/longitude convert to Earth-Centered Earth-Fixed
coordinates on the WGS84 ellipsoid. A remote geocoder is defined only as
an interface; the offline table is the default and only bundled path.
"""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from importlib import resources

log = logging.getLogger("stringkit")

WGS84_A = 6378137.0
WGS84_INV_F = 298.257223563
_F = 1.0 / WGS84_INV_F
WGS84_E2 = _F * (2.0 - _F)
WGS84_B = WGS84_A * (1.0 - _F)

EARTH_RADIUS_M = 6371000.0


class OutOfRangeError(ValueError):
    pass


class EmptyGeoTableError(ValueError):
    pass


@dataclass(frozen=True)
class GeoRecord:
    country_code: str
    postal_code: str
    latitude: float
    longitude: float


@dataclass(frozen=True)
class EcefPoint:
    x: float
    y: float
    z: float


def normalize_postal(code: str) -> str:
    return code.strip().upper().replace(" ", "")


class GeoTable:
    """Immutable postal-code lookup structure."""

    def __init__(self, records):
        by_postal = {}
        seen = {}
        duplicates = 0
        for rec in records:
            key = (rec.country_code, rec.postal_code)
            if key in seen:
                duplicates += 1
            seen[key] = rec  # last wins
        for rec in seen.values():
            by_postal.setdefault(rec.postal_code, []).append(rec)
        for lst in by_postal.values():
            lst.sort(key=lambda r: r.country_code)
        self._by_postal = {k: tuple(v) for k, v in by_postal.items()}
        self.records = tuple(sorted(seen.values(),
                                    key=lambda r: (r.country_code, r.postal_code)))
        if duplicates:
            log.warning("geo table: %d duplicate (country, postal) entries, "
                        "last occurrence kept", duplicates)
        if not self.records:
            raise EmptyGeoTableError("geo table has no valid records")

    def __len__(self):
        return len(self.records)

    def candidates(self, postal: str):
        return self._by_postal.get(normalize_postal(postal), ())


def load_geo_table(path) -> GeoTable:
    """Load a 4-column tab-separated postal table; malformed lines are
    skipped and counted."""
    records = []
    skipped = 0
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                skipped += 1
                continue
            country, postal, lat_s, lon_s = parts
            try:
                lat, lon = float(lat_s), float(lon_s)
            except ValueError:
                skipped += 1
                continue
            postal = normalize_postal(postal)
            country = country.strip().upper()
            if (not postal or len(country) != 2
                    or not -90.0 <= lat <= 90.0
                    or not -180.0 <= lon <= 180.0):
                skipped += 1
                continue
            records.append(GeoRecord(country, postal, lat, lon))
    if skipped:
        log.warning("geo table %s: skipped %d malformed line(s)", path, skipped)
    return GeoTable(records)


def bundled_geo_table() -> GeoTable:
    """The small postal table shipped with the package."""
    path = resources.files("stringkit").joinpath("data/postal_codes.tsv")
    with resources.as_file(path) as p:
        return load_geo_table(p)


def zip_lookup(code: str, table: GeoTable,
               country_priority: dict | None = None) -> GeoRecord | None:
    """Exact lookup after normalization; a miss returns None.

    When the same postal code exists in several countries, the record from
    the highest-priority country wins (priority = hit counts supplied by
    the caller, ties by country-code order).
    """
    candidates = table.candidates(code)
    if not candidates:
        return None
    if len(candidates) == 1 or not country_priority:
        return candidates[0]
    return max(candidates,
               key=lambda r: (country_priority.get(r.country_code, 0),
                              # invert code order so max() prefers 'AA' on ties
                              tuple(-ord(ch) for ch in r.country_code)))


def latlon_to_ecef(lat: float, lon: float) -> EcefPoint:
    """Geodetic latitude/longitude (degrees, height 0) to WGS84 ECEF meters."""
    if not -90.0 <= lat <= 90.0:
        raise OutOfRangeError(f"latitude out of range: {lat}")
    if not -180.0 <= lon <= 180.0:
        raise OutOfRangeError(f"longitude out of range: {lon}")
    phi = math.radians(lat)
    lam = math.radians(lon)
    sin_phi = math.sin(phi)
    n = WGS84_A / math.sqrt(1.0 - WGS84_E2 * sin_phi * sin_phi)
    return EcefPoint(
        x=n * math.cos(phi) * math.cos(lam),
        y=n * math.cos(phi) * math.sin(lam),
        z=n * (1.0 - WGS84_E2) * sin_phi,
    )


def haversine_m(lat1, lon1, lat2, lon2) -> float:
    """Great-circle distance in meters on the mean-radius sphere."""
    p1, p2 = math.radians(lat1), math.radians(lat2)
    dp = p2 - p1
    dl = math.radians(lon2 - lon1)
    a = math.sin(dp / 2) ** 2 + math.cos(p1) * math.cos(p2) * math.sin(dl / 2) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(a)))


def nearest_record(lat: float, lon: float, table: GeoTable) -> GeoRecord:
    """Record minimizing great-circle distance; ties by (country, postal)."""
    if not len(table):
        raise EmptyGeoTableError("empty geo table")
    return min(table.records,
               key=lambda r: (haversine_m(lat, lon, r.latitude, r.longitude),
                              r.country_code, r.postal_code))


class RemoteGeocoder(ABC):
    """Interface for a network-backed postal-code resolver.

    No implementation is bundled; the offline table is the default path.
    Implementations must be pure lookups so results stay reproducible.
    """

    @abstractmethod
    def lookup(self, postal_code: str) -> GeoRecord | None:
        """Resolve a postal code, or None when unknown."""
