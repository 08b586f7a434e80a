"""Readers and writers for best-track data.

Two formats are supported: ATCF b-deck files as published by JTWC, and a flat CSV
interchange format (`TRACK_CSV_COLUMNS`) that the rest of the toolkit reads.
"""

import io
import logging
from collections import defaultdict
from datetime import datetime, timedelta
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional

import pandas as pd
from pydantic import ValidationError

from ..errors import TrackParseError
from .types import Basin, CycloneTrackT, TrackPointT, classify_basin, season_year

logger = logging.getLogger(__name__)

TRACK_CSV_COLUMNS = ["cyclone_id", "basin", "timestamp", "lat_deg", "lon_deg", "vmax_kt"]
TIMESTAMP_FORMAT = "%Y%m%d%H"
SYNOPTIC_HOURS = frozenset({0, 6, 12, 18})
SOUTHERN_HEMISPHERE_CODES = frozenset({"SH", "SP", "SI", "SL"})
# a cyclone number seen again after this long belongs to a later storm
NUMBER_REUSE_GAP = timedelta(days=30)

# b-deck field positions
_BASIN, _NUMBER, _DATETIME, _LAT, _LON, _VMAX = 0, 1, 2, 6, 7, 8


class OnError(str, Enum):
    SKIP = "skip"
    ABORT = "abort"


class TrackFormat(str, Enum):
    BDECK = "bdeck"
    CSV = "csv"


def decode_latlon(value: str) -> float:
    """Decode an ATCF tenths-of-degree coordinate such as `141S` or `1723E`.

    Western longitudes are folded into [0, 360).
    """
    value = value.strip().upper()
    if len(value) < 2 or value[-1] not in "NSEW" or not value[:-1].isdigit():
        raise ValueError(f"bad coordinate {value!r}")
    degrees = int(value[:-1]) / 10.0
    hemisphere = value[-1]
    if hemisphere == "S":
        return -degrees
    if hemisphere == "W":
        return (360.0 - degrees) % 360.0
    return degrees


def _handle(error: TrackParseError, on_error: OnError) -> None:
    if on_error == OnError.ABORT:
        raise error
    logger.warning("Skipping record: %s", error)


def _assemble(
    grouped: dict[str, list[TrackPointT]], basins: Optional[dict[str, Basin]] = None
) -> list[CycloneTrackT]:
    """Sort, de-duplicate and wrap grouped points.

    Without an explicit basin mapping the basin is taken from the genesis point.
    """
    tracks = []
    for cyclone_id, points in grouped.items():
        # stable sort keeps the first occurrence ahead of its duplicates
        ordered = sorted(points, key=lambda p: p.timestamp)
        unique: list[TrackPointT] = []
        for point in ordered:
            if unique and unique[-1].timestamp == point.timestamp:
                continue
            unique.append(point)
        if len(unique) < len(ordered):
            logger.debug("%s: collapsed %d duplicate timestamps", cyclone_id, len(ordered) - len(unique))
        if basins is not None:
            basin = basins[cyclone_id]
        else:
            basin = classify_basin(unique[0].lat_deg, unique[0].lon_deg)
        tracks.append(CycloneTrackT(cyclone_id=cyclone_id, basin=basin, points=tuple(unique)))
    return tracks


def atcf_season(basin_code: str, timestamp: datetime) -> int:
    """Season year in the ATCF numbering convention.

    Southern Hemisphere seasons run July to June; every other basin numbers storms per calendar year.
    """
    if basin_code in SOUTHERN_HEMISPHERE_CODES:
        return season_year(timestamp)
    return timestamp.year


def parse_atcf_bdeck(text: str, on_error: OnError = OnError.SKIP) -> list[CycloneTrackT]:
    """Parse ATCF b-deck text into one track per storm.

    Records are grouped by basin code and cyclone number. A storm's season is fixed by its
    first record, so a storm crossing a season boundary stays whole; a silence longer than
    `NUMBER_REUSE_GAP` means the number was reused and starts a new storm. Only the basin,
    number, date-time, latitude, longitude and wind fields are read. Records off the
    00/06/12/18 UTC synoptic hours are dropped.
    """
    by_number: dict[tuple[str, int], list[TrackPointT]] = defaultdict(list)
    for line_number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) <= _VMAX:
            _handle(TrackParseError(line_number, f"expected at least {_VMAX + 1} fields, got {len(fields)}"), on_error)
            continue
        try:
            number = int(fields[_NUMBER])
            timestamp = datetime.strptime(fields[_DATETIME], TIMESTAMP_FORMAT)
            point = TrackPointT(
                timestamp=timestamp,
                lat_deg=decode_latlon(fields[_LAT]),
                lon_deg=decode_latlon(fields[_LON]),
                vmax_kt=int(fields[_VMAX]),
            )
        except (ValueError, ValidationError) as e:
            _handle(TrackParseError(line_number, str(e).splitlines()[0]), on_error)
            continue
        if timestamp.hour not in SYNOPTIC_HOURS or timestamp.minute:
            logger.debug("line %d: dropping off-synoptic record at %s", line_number, fields[_DATETIME])
            continue
        by_number[(fields[_BASIN].upper(), number)].append(point)

    if not by_number:
        logger.warning("No best-track records found in b-deck input")
        return []

    grouped: dict[str, list[TrackPointT]] = defaultdict(list)
    for (basin_code, number), points in by_number.items():
        ordered = sorted(points, key=lambda p: p.timestamp)
        start = 0
        for i in range(1, len(ordered) + 1):
            if i < len(ordered) and ordered[i].timestamp - ordered[i - 1].timestamp <= NUMBER_REUSE_GAP:
                continue
            storm = ordered[start:i]
            cyclone_id = f"{basin_code}{number:02d}{atcf_season(basin_code, storm[0].timestamp)}"
            grouped[cyclone_id].extend(storm)
            start = i
    return _assemble(grouped)


def parse_track_csv(text: str, on_error: OnError = OnError.SKIP) -> list[CycloneTrackT]:
    """Parse the simplified CSV format; tracks are grouped by id and sorted by time."""
    if not text.strip():
        logger.warning("Empty track CSV input")
        return []
    frame = pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False)
    missing = [c for c in TRACK_CSV_COLUMNS if c not in frame.columns]
    if missing:
        raise TrackParseError(1, f"missing column '{missing[0]}'")

    grouped: dict[str, list[TrackPointT]] = defaultdict(list)
    basins: dict[str, Basin] = {}
    for offset, row in enumerate(frame[TRACK_CSV_COLUMNS].itertuples(index=False)):
        line_number = offset + 2
        try:
            try:
                vmax_kt = int(row.vmax_kt)
            except ValueError:
                raise ValueError(f"non-numeric vmax_kt {row.vmax_kt!r}") from None
            point = TrackPointT(
                timestamp=datetime.strptime(row.timestamp.strip(), TIMESTAMP_FORMAT),
                lat_deg=float(row.lat_deg),
                lon_deg=float(row.lon_deg),
                vmax_kt=vmax_kt,
            )
            basin = Basin(row.basin.strip())
        except (ValueError, ValidationError) as e:
            _handle(TrackParseError(line_number, str(e).splitlines()[0]), on_error)
            continue
        basins.setdefault(row.cyclone_id, basin)
        grouped[row.cyclone_id].append(point)

    if not grouped:
        logger.warning("Track CSV holds no records")
        return []
    return _assemble(grouped, basins)


def tracks_to_frame(tracks: Iterable[CycloneTrackT]) -> pd.DataFrame:
    rows = [
        {
            "cyclone_id": track.cyclone_id,
            "basin": track.basin.value,
            "timestamp": point.timestamp.strftime(TIMESTAMP_FORMAT),
            "lat_deg": point.lat_deg,
            "lon_deg": point.lon_deg,
            "vmax_kt": point.vmax_kt,
        }
        for track in tracks
        for point in track.points
    ]
    return pd.DataFrame(rows, columns=TRACK_CSV_COLUMNS)


def export_track_csv(tracks: Iterable[CycloneTrackT]) -> str:
    return tracks_to_frame(tracks).to_csv(index=False, lineterminator="\n")


def read_tracks(path: str | Path, fmt: TrackFormat = TrackFormat.CSV, on_error: OnError = OnError.SKIP) -> list[CycloneTrackT]:
    text = Path(path).read_text()
    if fmt == TrackFormat.BDECK:
        return parse_atcf_bdeck(text, on_error)
    return parse_track_csv(text, on_error)


def write_tracks(path: str | Path, tracks: Iterable[CycloneTrackT]) -> None:
    Path(path).write_text(export_track_csv(tracks))
