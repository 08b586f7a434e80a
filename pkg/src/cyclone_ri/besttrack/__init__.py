"""Best-track ingestion: parsing, validation, basin filters and year splits."""

from .types import (
    Basin,
    BasinFilterT,
    CycloneTrackT,
    TrackPointT,
    SOUTH_INDIAN_FILTER,
    SOUTH_PACIFIC_FILTER,
    get_basin_filter,
    season_year,
)
from .parsers import (
    OnError,
    TrackFormat,
    TRACK_CSV_COLUMNS,
    export_track_csv,
    parse_atcf_bdeck,
    parse_track_csv,
    read_tracks,
    write_tracks,
)
from .filters import filter_tracks, split_by_years, split_segments

__all__ = [
    "Basin", "BasinFilterT", "CycloneTrackT", "TrackPointT", "SOUTH_INDIAN_FILTER",
    "SOUTH_PACIFIC_FILTER", "get_basin_filter", "season_year", "OnError", "TrackFormat",
    "TRACK_CSV_COLUMNS", "export_track_csv", "parse_atcf_bdeck", "parse_track_csv",
    "read_tracks", "write_tracks", "filter_tracks", "split_by_years", "split_segments",
]
