from datetime import datetime, timedelta
from typing import Sequence

import numpy as np

from cyclone_ri.besttrack import Basin, CycloneTrackT, TrackPointT
from cyclone_ri.elman import ElmanNetwork, TopologyT
from cyclone_ri.records import LabeledWindowT

SIX_HOURS = timedelta(hours=6)


def make_track(
    cyclone_id: str,
    intensities: Sequence[int],
    start: datetime = datetime(1995, 1, 10, 0),
    lat: float = -15.0,
    lon: float = 170.0,
    basin: Basin = Basin.SOUTH_PACIFIC,
    gaps_after: Sequence[int] = (),
) -> CycloneTrackT:
    """A track at a fixed position; `gaps_after` lists indices followed by a 12-hour jump."""
    points = []
    timestamp = start
    for i, vmax in enumerate(intensities):
        points.append(TrackPointT(timestamp=timestamp, lat_deg=lat, lon_deg=lon, vmax_kt=int(vmax)))
        timestamp += SIX_HOURS * (2 if i in gaps_after else 1)
    return CycloneTrackT(cyclone_id=cyclone_id, basin=basin, points=tuple(points))


def random_windows(rng: np.random.Generator, n: int, length: int = 5, positive_share: float = 0.5) -> list[LabeledWindowT]:
    return [
        LabeledWindowT(
            inputs=tuple(float(x) for x in rng.uniform(0.0, 1.0, size=length)),
            label=bool(rng.uniform() < positive_share),
            cyclone_id=f"R{i}",
            anchor_index=i,
        )
        for i in range(n)
    ]


def rising_windows(rng: np.random.Generator, n: int, positive_share: float = 0.2) -> list[LabeledWindowT]:
    """Separable windows: positives climb steadily from a low start, negatives drift down."""
    windows = []
    for i in range(n):
        label = bool(rng.uniform() < positive_share)
        if label:
            start = rng.uniform(0.0, 0.2)
            steps = rng.uniform(0.1, 0.2, size=4)
        else:
            start = rng.uniform(0.05, 1.0)
            steps = rng.uniform(-0.05, 0.0, size=4)
        values = np.clip(start + np.concatenate([[0.0], np.cumsum(steps)]), 0.0, 1.0)
        windows.append(
            LabeledWindowT(inputs=tuple(float(x) for x in values), label=label, cyclone_id=f"S{i}", anchor_index=4)
        )
    return windows


def season_tracks(rng: np.random.Generator, seasons: Sequence[int], per_season: int = 3, lon: float = 170.0) -> list[CycloneTrackT]:
    """Random-walk South Pacific tracks starting in January of each season's second year."""
    tracks = []
    for season in seasons:
        for k in range(per_season):
            n = int(rng.integers(12, 30))
            steps = rng.choice([-5, 0, 5, 10], size=n, p=[0.25, 0.35, 0.25, 0.15])
            vmax = np.clip(25 + np.cumsum(steps), 15, 160)
            tracks.append(
                make_track(f"SP{season}{k:02d}", vmax, start=datetime(season + 1, 1, 5 + k), lon=lon)
            )
    return tracks


def zero_network(hidden: int = 5) -> ElmanNetwork:
    topology = TopologyT(hidden=hidden)
    shapes = ElmanNetwork.expected_shapes(topology)
    return ElmanNetwork(topology=topology, **{name: np.zeros(shape) for name, shape in shapes.items()})


def cumulative_rise_windows(rng: np.random.Generator, n: int, threshold: float = 0.3) -> list[LabeledWindowT]:
    """Random walks from one shared distribution, positive when the last value exceeds the
    first by at least `threshold`. With the default threshold about a fifth are positive."""
    windows = []
    for i in range(n):
        start = rng.uniform(0.2, 0.4)
        values = start + np.concatenate([[0.0], np.cumsum(rng.uniform(-0.05, 0.15, size=4))])
        windows.append(
            LabeledWindowT(
                inputs=tuple(float(x) for x in np.clip(values, 0.0, 1.0)),
                label=bool(values[-1] - values[0] >= threshold),
                cyclone_id=f"C{i}",
                anchor_index=4,
            )
        )
    return windows


def parity_windows(rng: np.random.Generator, n: int) -> list[LabeledWindowT]:
    """Three-step sequences whose first and last inputs are low (0) or high (1), with a
    neutral 0.5 between; positive when exactly one of the two ends is high."""
    windows = []
    for i in range(n):
        first, last = (float(b) for b in rng.integers(0, 2, size=2))
        windows.append(
            LabeledWindowT(inputs=(first, 0.5, last), label=first != last, cyclone_id=f"P{i}", anchor_index=2)
        )
    return windows
