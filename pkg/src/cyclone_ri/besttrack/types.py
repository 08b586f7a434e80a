from datetime import datetime, timedelta
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

SIX_HOURS = timedelta(hours=6)
AUSTRAL_SEASON_MONTHS = frozenset({11, 12, 1, 2, 3, 4})


class Basin(str, Enum):
    SOUTH_PACIFIC = "south_pacific"
    SOUTH_INDIAN = "south_indian"
    OTHER = "other"

    @classmethod
    def from_flag(cls, flag: str) -> "Basin":
        """Map the CLI shorthand (`sp`, `si`) or a full enum value to a Basin."""
        shorthand = {"sp": cls.SOUTH_PACIFIC, "si": cls.SOUTH_INDIAN}
        key = flag.strip().lower()
        if key in shorthand:
            return shorthand[key]
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"Unknown basin: {flag}") from None


def season_year(timestamp: datetime) -> int:
    """Label used for the austral season a timestamp falls in.

    Seasons run July to June, so a November-April season carries its November year.
    """
    return timestamp.year if timestamp.month >= 7 else timestamp.year - 1


class TrackPointT(BaseModel):
    model_config = ConfigDict(frozen=True)

    timestamp: datetime
    lat_deg: float = Field(ge=-90.0, le=90.0)
    lon_deg: float = Field(ge=0.0, lt=360.0)
    vmax_kt: int = Field(ge=0)


class CycloneTrackT(BaseModel):
    model_config = ConfigDict(frozen=True)

    cyclone_id: str
    basin: Basin = Basin.OTHER
    points: tuple[TrackPointT, ...]

    @field_validator("points")
    @classmethod
    def _strictly_increasing(cls, points: tuple[TrackPointT, ...]) -> tuple[TrackPointT, ...]:
        for previous, current in zip(points, points[1:]):
            if current.timestamp <= previous.timestamp:
                raise ValueError(
                    f"points not strictly increasing at {current.timestamp:%Y%m%d%H}"
                )
        return points

    @property
    def duration_steps(self) -> int:
        return len(self.points)

    @property
    def genesis(self) -> TrackPointT:
        if not self.points:
            raise ValueError(f"Track {self.cyclone_id} has no points")
        return self.points[0]

    @property
    def season(self) -> int:
        return season_year(self.genesis.timestamp)

    @property
    def intensities(self) -> np.ndarray:
        return np.array([p.vmax_kt for p in self.points], dtype=np.float64)

    @property
    def has_gaps(self) -> bool:
        """True when any two consecutive points are not exactly 6 hours apart."""
        return any(
            current.timestamp - previous.timestamp != SIX_HOURS
            for previous, current in zip(self.points, self.points[1:])
        )


class BasinFilterT(BaseModel):
    """Genesis box, season months and inclusive season-year range.

    Longitudes use the [0, 360) convention; the interval is [lon_min, lon_max).
    """

    model_config = ConfigDict(frozen=True)

    lat_min: float = Field(ge=-90.0, le=90.0)
    lat_max: float = Field(ge=-90.0, le=90.0)
    lon_min: float = Field(ge=0.0, le=360.0)
    lon_max: float = Field(ge=0.0, le=360.0)
    season_months: frozenset[int] = AUSTRAL_SEASON_MONTHS
    year_min: int = 1980
    year_max: int = 2013

    @model_validator(mode="after")
    def _non_empty(self) -> "BasinFilterT":
        if self.lat_min > self.lat_max:
            raise ValueError(f"Empty latitude range [{self.lat_min}, {self.lat_max}]")
        if self.lon_min >= self.lon_max:
            raise ValueError(f"Empty longitude range [{self.lon_min}, {self.lon_max})")
        if not self.season_months:
            raise ValueError("season_months must not be empty")
        if any(m < 1 or m > 12 for m in self.season_months):
            raise ValueError(f"Invalid months: {sorted(self.season_months)}")
        if self.year_min > self.year_max:
            raise ValueError(f"Empty year range {self.year_min}-{self.year_max}")
        return self

    def contains(self, lat_deg: float, lon_deg: float) -> bool:
        return (
            self.lat_min <= lat_deg <= self.lat_max
            and self.lon_min <= lon_deg < self.lon_max
        )

    def with_years(self, year_min: int, year_max: int) -> "BasinFilterT":
        return BasinFilterT.model_validate(
            {**self.model_dump(), "year_min": year_min, "year_max": year_max}
        )


# 0-30S, 30E-130E
SOUTH_INDIAN_FILTER = BasinFilterT(lat_min=-30.0, lat_max=0.0, lon_min=30.0, lon_max=130.0)
# 0-30S, 130E-130W
SOUTH_PACIFIC_FILTER = BasinFilterT(lat_min=-30.0, lat_max=0.0, lon_min=130.0, lon_max=230.0)


def get_basin_filter(basin: Basin, years: Optional[tuple[int, int]] = None) -> BasinFilterT:
    if basin == Basin.SOUTH_INDIAN:
        preset = SOUTH_INDIAN_FILTER
    elif basin == Basin.SOUTH_PACIFIC:
        preset = SOUTH_PACIFIC_FILTER
    else:
        raise ValueError(f"No basin box defined for {basin.value}")
    if years is not None:
        preset = preset.with_years(*years)
    return preset


def classify_basin(lat_deg: float, lon_deg: float) -> Basin:
    """Basin whose box holds the given point, ignoring season and years."""
    if SOUTH_INDIAN_FILTER.contains(lat_deg, lon_deg):
        return Basin.SOUTH_INDIAN
    if SOUTH_PACIFIC_FILTER.contains(lat_deg, lon_deg):
        return Basin.SOUTH_PACIFIC
    return Basin.OTHER
