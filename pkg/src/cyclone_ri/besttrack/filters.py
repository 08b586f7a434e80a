import logging
from typing import Iterable

from .types import SIX_HOURS, BasinFilterT, CycloneTrackT

logger = logging.getLogger(__name__)

YearRange = tuple[int, int]


def filter_tracks(tracks: Iterable[CycloneTrackT], basin_filter: BasinFilterT) -> list[CycloneTrackT]:
    """Keep cyclones whose genesis point, genesis month and season fall inside the filter."""
    kept = []
    for track in tracks:
        if not track.points:
            continue
        genesis = track.genesis
        if not basin_filter.contains(genesis.lat_deg, genesis.lon_deg):
            continue
        if genesis.timestamp.month not in basin_filter.season_months:
            continue
        if not basin_filter.year_min <= track.season <= basin_filter.year_max:
            continue
        kept.append(track)
    logger.debug("filter kept %d cyclones", len(kept))
    return kept


def _check_range(name: str, years: YearRange) -> None:
    if years[0] > years[1]:
        raise ValueError(f"{name} range {years[0]}-{years[1]} is empty")


def split_by_years(
    tracks: Iterable[CycloneTrackT], train_years: YearRange, test_years: YearRange
) -> tuple[list[CycloneTrackT], list[CycloneTrackT]]:
    """Partition tracks by season label into train and test; others are dropped."""
    _check_range("train", train_years)
    _check_range("test", test_years)
    if train_years[0] <= test_years[1] and test_years[0] <= train_years[1]:
        raise ValueError(
            f"Year ranges overlap: train {train_years[0]}-{train_years[1]}, "
            f"test {test_years[0]}-{test_years[1]}"
        )
    train, test = [], []
    for track in tracks:
        if not track.points:
            continue
        season = track.season
        if train_years[0] <= season <= train_years[1]:
            train.append(track)
        elif test_years[0] <= season <= test_years[1]:
            test.append(track)
    return train, test


def split_segments(track: CycloneTrackT) -> list[CycloneTrackT]:
    """Split a track wherever consecutive points are more than 6 hours apart.

    Segments are named `<cyclone_id>/<n>` when a split happens; a contiguous track is
    returned unchanged.
    """
    if not track.has_gaps:
        return [track]
    runs: list[list] = [[track.points[0]]]
    for previous, current in zip(track.points, track.points[1:]):
        if current.timestamp - previous.timestamp == SIX_HOURS:
            runs[-1].append(current)
        else:
            runs.append([current])
    logger.debug("%s split into %d segments", track.cyclone_id, len(runs))
    return [
        CycloneTrackT(cyclone_id=f"{track.cyclone_id}/{n}", basin=track.basin, points=tuple(run))
        for n, run in enumerate(runs, start=1)
    ]
